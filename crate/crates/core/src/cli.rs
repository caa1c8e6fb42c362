//! Command-line front end for the `quadorder` binary.
//!
//! Parameters come from flags, optionally layered over a `key=value` config
//! file (flags win). A parsed [`CliConfig`] renders to a canonical string in
//! the same `key=value` syntax, which parses back to the same config.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::abelian::{
    davenport_bounds, davenport_exact, AbelianGroupStructure, DAVENPORT_SIZE_CAP,
};
use crate::classgroups;
use crate::elasticity;
use crate::error::Error;
use crate::quadfield::{OmegaKind, QuadraticField};
use crate::report::Report;
use crate::ringarith;
use crate::stats::{self, scan::DEFAULT_SEED, ScanCaps, ScanRecord, TkFunction};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_SCAN_X: u64 = 10_000;
const DEFAULT_TK_X: u64 = 100_000;
const DEFAULT_HOOLEY_Q: u64 = 3;
const DEFAULT_HOOLEY_Y: u64 = 100_000;
const DEFAULT_NORM_BOUND: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TkChoice {
    Omega,
    SmallOmega,
    CutoffH,
}

impl From<TkChoice> for TkFunction {
    fn from(c: TkChoice) -> Self {
        match c {
            TkChoice::Omega => TkFunction::OmegaRestricted,
            TkChoice::SmallOmega => TkFunction::SmallOmega,
            TkChoice::CutoffH => TkFunction::CutoffH,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    FieldInfo,
    Invariants,
    Scan,
    ClassGroup,
    Davenport,
    Elasticity,
    Verify,
    TkReport,
    HooleyScan,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::FieldInfo => "field-info",
            Self::Invariants => "invariants",
            Self::Scan => "scan",
            Self::ClassGroup => "class-group",
            Self::Davenport => "davenport",
            Self::Elasticity => "elasticity",
            Self::Verify => "verify",
            Self::TkReport => "tk-report",
            Self::HooleyScan => "hooley",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        [
            Self::FieldInfo,
            Self::Invariants,
            Self::Scan,
            Self::ClassGroup,
            Self::Davenport,
            Self::Elasticity,
            Self::Verify,
            Self::TkReport,
            Self::HooleyScan,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "quadorder",
    version,
    about = "Invariants of orders in a quadratic field and split-free statistics"
)]
struct Cli {
    /// Squarefree D selecting the field Q(sqrt(D))
    #[arg(short = 'D', global = true, allow_hyphen_values = true)]
    d: Option<i64>,
    /// key=value file with default parameters (flags take precedence)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path (stdout when absent)
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for sampled computations, decimal or 0x-hex (default 0xC0FFEE)
    #[arg(long, global = true, value_parser = parse_u64)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Discriminant, unit, class number and L(1, chi)
    FieldInfo,
    /// psi, L, L', ell and Omega for one conductor
    Invariants {
        #[arg(long)]
        f: Option<u64>,
    },
    /// CSV/JSON records for every split-free f <= x
    Scan {
        #[arg(long)]
        x: Option<u64>,
        #[arg(long)]
        group_cap: Option<u64>,
        /// Extra conductors above the group cap to sample for Exp PreCl
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Form class group of the order of conductor f (imaginary fields)
    ClassGroup {
        #[arg(long)]
        f: Option<u64>,
    },
    /// Davenport constants of PreCl, PrinCl and Cl, or of an explicit group
    Davenport {
        #[arg(long)]
        f: Option<u64>,
        /// Explicit invariant factors, e.g. 2,4
        #[arg(long, value_delimiter = ',')]
        group: Option<Vec<u64>>,
        /// Largest order for exact search
        #[arg(long)]
        group_cap: Option<u64>,
    },
    /// Elasticity bounds and irreducible search
    Elasticity {
        #[arg(long)]
        f: Option<u64>,
        #[arg(long)]
        norm_bound: Option<u64>,
        /// Report an infinite upper bound instead of failing for non-split-free f
        #[arg(long)]
        allow_non_split_free: bool,
    },
    /// Run the acceptance checks
    Verify {
        /// Subset of criteria to run, e.g. 2,5,6
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
    },
    /// Weighted Turan-Kubilius statistics
    TkReport {
        #[arg(long)]
        x: Option<u64>,
        #[arg(long, value_enum)]
        function: Option<TkChoice>,
    },
    /// Counts of inert p with eta^((p+1)/q) = 1 against the Li prediction
    Hooley {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        y: Option<u64>,
    },
}

fn parse_u64(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("invalid integer {s:?}: {e}"))
}

/// Fully resolved invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub d: Option<i64>,
    pub command: Command,
    pub x: Option<u64>,
    pub f: Option<u64>,
    pub q: Option<u64>,
    pub y: Option<u64>,
    pub norm_bound: Option<u64>,
    pub group_cap: Option<u64>,
    pub sample: Option<u64>,
    pub group: Option<Vec<u64>>,
    pub function: Option<TkChoice>,
    pub criteria: Option<Vec<u8>>,
    pub allow_non_split_free: bool,
    pub out: Option<String>,
    pub format: Format,
    pub threads: usize,
    pub seed: u64,
}

/// Parse failure carrying the message to print and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError {
    pub message: String,
    pub code: i32,
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError {
        message: format!("usage: {}", msg.into()),
        code: EXIT_USAGE,
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn split_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, UsageError> {
    v.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| usage(format!("bad value for {key}: {v}")))
        })
        .collect()
}

impl CliConfig {
    fn empty(command: Command) -> Self {
        Self {
            d: None,
            command,
            x: None,
            f: None,
            q: None,
            y: None,
            norm_bound: None,
            group_cap: None,
            sample: None,
            group: None,
            function: None,
            criteria: None,
            allow_non_split_free: false,
            out: None,
            format: Format::Csv,
            threads: default_threads(),
            seed: DEFAULT_SEED,
        }
    }

    /// Applies one `key=value` setting.
    fn set(&mut self, key: &str, value: &str) -> Result<(), UsageError> {
        let num = |v: &str| parse_u64(v).map_err(usage);
        match key {
            "D" => {
                self.d = Some(
                    value
                        .parse()
                        .map_err(|_| usage(format!("bad D: {value}")))?,
                )
            }
            "command" => {
                self.command = Command::from_name(value)
                    .ok_or_else(|| usage(format!("unknown command {value}")))?
            }
            "x" => self.x = Some(num(value)?),
            "f" => self.f = Some(num(value)?),
            "q" => self.q = Some(num(value)?),
            "y" => self.y = Some(num(value)?),
            "norm_bound" => self.norm_bound = Some(num(value)?),
            "group_cap" => self.group_cap = Some(num(value)?),
            "sample" => self.sample = Some(num(value)?),
            "group" => self.group = Some(split_list(key, value)?),
            "criteria" => self.criteria = Some(split_list(key, value)?),
            "function" => {
                self.function = Some(
                    TkChoice::from_str(value, true)
                        .map_err(|_| usage(format!("bad function {value}")))?,
                )
            }
            "allow_non_split_free" => {
                self.allow_non_split_free = value
                    .parse()
                    .map_err(|_| usage(format!("bad bool {value}")))?
            }
            "out" => self.out = Some(value.to_string()),
            "format" => {
                self.format = Format::from_str(value, true)
                    .map_err(|_| usage(format!("bad format {value}")))?
            }
            "threads" => self.threads = num(value)? as usize,
            "seed" => self.seed = num(value)?,
            _ => return Err(usage(format!("unknown key {key}"))),
        }
        Ok(())
    }

    fn apply_text(&mut self, text: &str) -> Result<(), UsageError> {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for pair in line.split_whitespace() {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| usage(format!("expected key=value, got {pair}")))?;
                self.set(k, v)?;
            }
        }
        Ok(())
    }

    /// Canonical `key=value` rendering, parseable by [`CliConfig::from_canonical`].
    pub fn canonical(&self) -> String {
        let mut parts = vec![format!("command={}", self.command.name())];
        if let Some(d) = self.d {
            parts.push(format!("D={d}"));
        }
        for (k, v) in [
            ("x", self.x),
            ("f", self.f),
            ("q", self.q),
            ("y", self.y),
            ("norm_bound", self.norm_bound),
            ("group_cap", self.group_cap),
            ("sample", self.sample),
        ] {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        }
        if let Some(g) = &self.group {
            parts.push(format!("group={}", join(g)));
        }
        if let Some(c) = &self.criteria {
            parts.push(format!("criteria={}", join(c)));
        }
        if let Some(func) = self.function {
            parts.push(format!(
                "function={}",
                func.to_possible_value().expect("named").get_name()
            ));
        }
        if self.allow_non_split_free {
            parts.push("allow_non_split_free=true".into());
        }
        if let Some(o) = &self.out {
            parts.push(format!("out={o}"));
        }
        parts.push(format!(
            "format={}",
            self.format.to_possible_value().expect("named").get_name()
        ));
        parts.push(format!("threads={}", self.threads));
        parts.push(format!("seed={}", self.seed));
        parts.join(" ")
    }

    pub fn from_canonical(s: &str) -> Result<Self, UsageError> {
        let mut cfg = Self::empty(Command::Verify);
        cfg.apply_text(s)?;
        Ok(cfg)
    }

    fn field(&self) -> Option<QuadraticField> {
        self.d.and_then(|d| QuadraticField::new(d).ok())
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Parses `argv` (including the program name) into a validated config.
pub fn parse_args<I, T>(argv: I) -> Result<CliConfig, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| UsageError {
        message: e.render().to_string(),
        code: if e.use_stderr() { EXIT_USAGE } else { EXIT_OK },
    })?;
    let command = match &cli.command {
        Sub::FieldInfo => Command::FieldInfo,
        Sub::Invariants { .. } => Command::Invariants,
        Sub::Scan { .. } => Command::Scan,
        Sub::ClassGroup { .. } => Command::ClassGroup,
        Sub::Davenport { .. } => Command::Davenport,
        Sub::Elasticity { .. } => Command::Elasticity,
        Sub::Verify { .. } => Command::Verify,
        Sub::TkReport { .. } => Command::TkReport,
        Sub::Hooley { .. } => Command::HooleyScan,
    };
    let mut cfg = CliConfig::empty(command);
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        cfg.apply_text(&text)?;
        cfg.command = command;
    }
    fn over<T>(slot: &mut Option<T>, v: Option<T>) {
        if v.is_some() {
            *slot = v;
        }
    }
    over(&mut cfg.d, cli.d);
    over(&mut cfg.out, cli.out);
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    match cli.command {
        Sub::FieldInfo | Sub::Verify { criteria: None } => {}
        Sub::Verify { criteria } => cfg.criteria = criteria,
        Sub::Invariants { f } | Sub::ClassGroup { f } => over(&mut cfg.f, f),
        Sub::Scan {
            x,
            group_cap,
            sample,
        } => {
            over(&mut cfg.x, x);
            over(&mut cfg.group_cap, group_cap);
            over(&mut cfg.sample, sample);
        }
        Sub::Davenport {
            f,
            group,
            group_cap,
        } => {
            over(&mut cfg.f, f);
            over(&mut cfg.group, group);
            over(&mut cfg.group_cap, group_cap);
        }
        Sub::Elasticity {
            f,
            norm_bound,
            allow_non_split_free,
        } => {
            over(&mut cfg.f, f);
            over(&mut cfg.norm_bound, norm_bound);
            cfg.allow_non_split_free |= allow_non_split_free;
        }
        Sub::TkReport { x, function } => {
            over(&mut cfg.x, x);
            over(&mut cfg.function, function);
        }
        Sub::Hooley { q, y } => {
            over(&mut cfg.q, q);
            over(&mut cfg.y, y);
        }
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &CliConfig) -> Result<(), UsageError> {
    if cfg.threads == 0 {
        return Err(usage("--threads must be positive"));
    }
    let needs_field = match cfg.command {
        Command::Verify => false,
        Command::Davenport => cfg.group.is_none(),
        _ => true,
    };
    let field = match cfg.d {
        Some(d) => Some(QuadraticField::new(d).map_err(|e| usage(e.to_string()))?),
        None if needs_field => {
            return Err(usage(format!("{} requires -D <int>", cfg.command.name())))
        }
        None => None,
    };
    let needs_f = matches!(
        cfg.command,
        Command::Invariants | Command::ClassGroup | Command::Elasticity
    ) || (cfg.command == Command::Davenport && cfg.group.is_none());
    if needs_f && cfg.f.is_none() {
        return Err(usage(format!("{} requires --f", cfg.command.name())));
    }
    if cfg.f == Some(0) {
        return Err(usage("--f must be positive"));
    }
    if let Some(k) = &field {
        match cfg.command {
            Command::ClassGroup if k.is_real() => {
                return Err(usage("class-group needs an imaginary field (D < 0)"));
            }
            Command::Elasticity if k.is_real() && cfg.norm_bound.is_some() => {
                return Err(usage("irreducible search needs an imaginary field; omit --norm-bound for bounds only"));
            }
            Command::HooleyScan if !k.is_real() => {
                return Err(usage("hooley needs a real field (D > 0)"));
            }
            _ => {}
        }
    }
    if let Some(g) = &cfg.group {
        AbelianGroupStructure::new(g.clone()).map_err(|e| usage(e.to_string()))?;
    }
    if let Some(c) = &cfg.criteria {
        if let Some(bad) = c.iter().find(|&&i| !(1..=11).contains(&i)) {
            return Err(usage(format!("no criterion {bad}")));
        }
    }
    Ok(())
}

/// Parses and runs, returning the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            if e.code == EXIT_OK {
                print!("{}", e.message);
            } else {
                eprintln!("{}", e.message.trim_end());
            }
            e.code
        }
    }
}

/// Executes `cfg`, writing to `cfg.out` or stdout.
pub fn run(cfg: &CliConfig) -> i32 {
    let result = match &cfg.out {
        Some(path) => fs::File::create(path)
            .map_err(Error::from)
            .and_then(|file| run_to(cfg, &mut io::BufWriter::new(file))),
        None => run_to(cfg, &mut io::stdout().lock()),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

/// Executes `cfg` against an arbitrary writer.
pub fn run_to(cfg: &CliConfig, out: &mut dyn Write) -> crate::Result<i32> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut buf = Vec::new();
    let code = pool.install(|| dispatch(cfg, &mut buf))?;
    out.write_all(&buf)?;
    out.flush()?;
    Ok(code)
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn write_pairs(out: &mut dyn Write, pairs: &[(&str, String)]) -> crate::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["key", "value"]).map_err(csv_err)?;
    for (k, v) in pairs {
        w.write_record([*k, v.as_str()]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn write_report(out: &mut dyn Write, report: &Report) -> crate::Result<()> {
    writeln!(out, "{}", report.to_json())?;
    Ok(())
}

fn unit_string(k: &QuadraticField) -> crate::Result<String> {
    let e = k.fundamental_unit()?;
    let d = k.d();
    let v = if e.v == 1.into() {
        String::new()
    } else {
        format!("{}*", e.v)
    };
    Ok(match k.omega_kind() {
        OmegaKind::SqrtD => format!("{}+{v}sqrt({d})", e.u),
        OmegaKind::HalfOnePlusSqrtD => format!("({}+{v}sqrt({d}))/2", e.u),
    })
}

fn dispatch(cfg: &CliConfig, out: &mut dyn Write) -> crate::Result<i32> {
    let k = cfg.field();
    let delta = k.as_ref().map(QuadraticField::delta);
    let params = json!({ "canonical": cfg.canonical() });
    match cfg.command {
        Command::FieldInfo => {
            let k = k.expect("validated");
            let omega = match k.omega_kind() {
                OmegaKind::SqrtD => format!("sqrt({})", k.d()),
                OmegaKind::HalfOnePlusSqrtD => format!("(1+sqrt({}))/2", k.d()),
            };
            let mut pairs = vec![
                ("D", k.d().to_string()),
                ("delta", k.delta().to_string()),
                ("omega", omega),
                ("w", k.torsion_count().to_string()),
                ("is_real", k.is_real().to_string()),
                ("class_number", k.class_number()?.to_string()),
            ];
            if k.is_real() {
                pairs.push(("fundamental_unit", unit_string(&k)?));
                pairs.push(("unit_norm", k.fundamental_unit()?.norm.to_string()));
            }
            pairs.push(("L1chi", format!("{:.12}", k.l_one_chi()?)));
            pairs.push(("delta_factorization", join(&k.delta_factorization())));
            match cfg.format {
                Format::Csv => write_pairs(out, &pairs)?,
                Format::Json => {
                    let values: serde_json::Map<String, serde_json::Value> = pairs
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), v.into()))
                        .collect();
                    write_report(out, &Report::new("field_info", delta, params, values))?
                }
            }
        }
        Command::Invariants => {
            let k = k.expect("validated");
            let f = cfg.f.expect("validated");
            let inv = ringarith::order_invariants(&k, f)?;
            let record = ScanRecord {
                f,
                split_free: k.is_split_free(f)?,
                psi: inv.psi,
                l: inv.l,
                lprime: inv.lprime,
                ell: inv.ell,
                exp_preclass: None,
                rad_psi_over_l: None,
                omega: inv.omega_big,
                zsmooth_l: None,
            };
            match cfg.format {
                Format::Csv => stats::write_csv(&[record], out)?,
                Format::Json => write_report(out, &Report::new("invariants", delta, params, &inv))?,
            }
        }
        Command::Scan => {
            let k = k.expect("validated");
            let x = cfg.x.unwrap_or(DEFAULT_SCAN_X);
            let mut caps = ScanCaps {
                seed: cfg.seed,
                ..ScanCaps::default()
            };
            if let Some(g) = cfg.group_cap {
                caps.group_cap = g;
            }
            if let Some(s) = cfg.sample {
                caps.sample = s;
            }
            let records = stats::scan(&k, x, caps)?;
            match cfg.format {
                Format::Csv => stats::write_csv(&records, out)?,
                Format::Json => write_report(
                    out,
                    &Report::new(
                        "scan",
                        delta,
                        params,
                        json!({ "count": records.len(), "records": records }),
                    ),
                )?,
            }
        }
        Command::ClassGroup => {
            let k = k.expect("validated");
            let f = cfg.f.expect("validated");
            let structure = classgroups::form_class_group(&k, f)?;
            let check = classgroups::class_number_formula_check(&k, f)?;
            let disc = (f * f) as i64 * k.delta();
            let pairs = vec![
                ("disc", disc.to_string()),
                ("invariant_factors", join(structure.invariant_factors())),
                ("order", structure.order().to_string()),
                ("h_K", k.class_number()?.to_string()),
                ("formula_value", check.formula_value.to_string()),
                ("formula_matches", check.matches.to_string()),
            ];
            match cfg.format {
                Format::Csv => write_pairs(out, &pairs)?,
                Format::Json => write_report(
                    out,
                    &Report::new(
                        "class_group",
                        delta,
                        params,
                        json!({ "disc": disc, "invariant_factors": structure.invariant_factors(), "check": check }),
                    ),
                )?,
            }
        }
        Command::Davenport => {
            let cap = cfg.group_cap.unwrap_or(DAVENPORT_SIZE_CAP);
            let mut groups: Vec<(String, AbelianGroupStructure)> = Vec::new();
            if let Some(g) = &cfg.group {
                groups.push(("explicit".into(), AbelianGroupStructure::new(g.clone())?));
            } else {
                let k = k.expect("validated");
                let f = cfg.f.expect("validated");
                groups.push(("PreCl".into(), ringarith::preclass_structure(&k, f)?));
                groups.push(("PrinCl".into(), ringarith::princlass_structure(&k, f)?));
                if !k.is_real() {
                    groups.push(("Cl".into(), classgroups::form_class_group(&k, f)?));
                }
            }
            let rows: Vec<serde_json::Value> = groups
                .iter()
                .map(|(name, g)| {
                    let (lo, hi) = davenport_bounds(g);
                    let exact = davenport_exact(g, cap).ok();
                    json!({
                        "group": name,
                        "invariant_factors": g.invariant_factors(),
                        "order": g.order(),
                        "exponent": g.exponent(),
                        "dav_lower": lo,
                        "dav_exact": exact,
                        "dav_upper": hi,
                    })
                })
                .collect();
            match cfg.format {
                Format::Csv => {
                    let mut w = csv_writer(out);
                    w.write_record([
                        "group",
                        "invariant_factors",
                        "order",
                        "exponent",
                        "dav_lower",
                        "dav_exact",
                        "dav_upper",
                    ])
                    .map_err(csv_err)?;
                    for ((name, g), row) in groups.iter().zip(&rows) {
                        let (lo, hi) = davenport_bounds(g);
                        w.write_record([
                            name.clone(),
                            join(g.invariant_factors()),
                            g.order().to_string(),
                            g.exponent().to_string(),
                            lo.to_string(),
                            row["dav_exact"]
                                .as_u64()
                                .map_or(String::new(), |v| v.to_string()),
                            hi.to_string(),
                        ])
                        .map_err(csv_err)?;
                    }
                    w.flush()?;
                }
                Format::Json => write_report(out, &Report::new("davenport", delta, params, rows))?,
            }
        }
        Command::Elasticity => {
            let k = k.expect("validated");
            let f = cfg.f.expect("validated");
            let bound = cfg.norm_bound.unwrap_or(DEFAULT_NORM_BOUND);
            let report = if k.is_real() {
                elasticity::elasticity_bounds(&k, f, cfg.allow_non_split_free)?
            } else {
                elasticity::elasticity_report(&k, f, bound, cfg.allow_non_split_free)?
            };
            match cfg.format {
                Format::Csv => {
                    let pairs = vec![
                        ("f", f.to_string()),
                        ("dav_cl_lower", report.dav_cl.lower().to_string()),
                        ("dav_cl_upper", report.dav_cl.upper().to_string()),
                        ("lower", report.lower.to_string()),
                        (
                            "upper",
                            report.upper.map_or("inf".into(), |u| u.to_string()),
                        ),
                        (
                            "search_max_omega",
                            report
                                .search_max_omega
                                .map_or(String::new(), |m| m.to_string()),
                        ),
                        (
                            "search_bound",
                            report.search_bound.map_or(String::new(), |b| b.to_string()),
                        ),
                        (
                            "witness",
                            report
                                .witnesses
                                .first()
                                .map_or(String::new(), |(a, b)| format!("{a}+{b}w")),
                        ),
                    ];
                    write_pairs(out, &pairs)?
                }
                Format::Json => {
                    write_report(out, &Report::new("elasticity", delta, params, &report))?
                }
            }
        }
        Command::Verify => {
            let wanted = cfg.criteria.clone().unwrap_or_else(|| (1..=11).collect());
            let results = run_criteria(&wanted);
            let all = results.iter().all(|r| r.passed);
            match cfg.format {
                Format::Csv => {
                    for r in &results {
                        writeln!(out, "{}", r.line())?;
                    }
                    writeln!(
                        out,
                        "{}",
                        if all {
                            "all criteria passed"
                        } else {
                            "some criteria failed"
                        }
                    )?;
                }
                Format::Json => write_report(out, &Report::new("verify", None, params, &results))?,
            }
            return Ok(if all { EXIT_OK } else { EXIT_FAILURE });
        }
        Command::TkReport => {
            let k = k.expect("validated");
            let x = cfg.x.unwrap_or(DEFAULT_TK_X);
            let function = cfg
                .function
                .map_or(TkFunction::OmegaRestricted, TkFunction::from);
            let r = stats::tk_report(&k, x, function)?;
            match cfg.format {
                Format::Csv => {
                    let mut w = csv_writer(out);
                    w.write_record([
                        "x",
                        "function",
                        "A",
                        "B",
                        "empirical_lhs",
                        "ratio",
                        "split_free_count",
                    ])
                    .map_err(csv_err)?;
                    w.write_record([
                        r.x.to_string(),
                        format!("{function:?}"),
                        format!("{:.10}", r.a),
                        format!("{:.10}", r.b),
                        format!("{:.10}", r.empirical_lhs),
                        format!("{:.10}", r.ratio),
                        r.split_free_count.to_string(),
                    ])
                    .map_err(csv_err)?;
                    w.flush()?;
                }
                Format::Json => write_report(
                    out,
                    &Report::new("tk_report", delta, params, &r)
                        .with_tolerances(json!({ "ratio_limit": verify::TK_RATIO_LIMIT })),
                )?,
            }
        }
        Command::HooleyScan => {
            let k = k.expect("validated");
            let q = cfg.q.unwrap_or(DEFAULT_HOOLEY_Q);
            let y = cfg.y.unwrap_or(DEFAULT_HOOLEY_Y);
            let r = stats::hooley_scan(&k, q, y)?;
            match cfg.format {
                Format::Csv => {
                    let mut w = csv_writer(out);
                    w.write_record(["q", "y", "count", "li_prediction", "ratio"])
                        .map_err(csv_err)?;
                    w.write_record([
                        r.q.to_string(),
                        r.y.to_string(),
                        r.count.to_string(),
                        format!("{:.6}", r.li_prediction),
                        format!("{:.6}", r.ratio),
                    ])
                    .map_err(csv_err)?;
                    w.flush()?;
                }
                Format::Json => write_report(
                    out,
                    &Report::new("hooley", delta, params, &r).with_tolerances(json!({
                        "ratio_min": verify::HOOLEY_RATIO_RANGE.0,
                        "ratio_max": verify::HOOLEY_RATIO_RANGE.1,
                    })),
                )?,
            }
        }
    }
    Ok(EXIT_OK)
}

fn run_criteria(wanted: &[u8]) -> Vec<verify::CriterionResult> {
    let mut out = Vec::new();
    if wanted.iter().any(|&i| i == 1 || i == 2) {
        out.extend(
            verify::criteria_preclass()
                .into_iter()
                .filter(|r| wanted.contains(&r.id)),
        );
    }
    for &id in wanted {
        let r = match id {
            3 => verify::criterion_cyclicity(),
            4 => verify::criterion_class_number_identity(),
            5 => verify::criterion_davenport(),
            6 => verify::criterion_elasticity(),
            7 => verify::criterion_hooley(),
            8 => verify::criterion_small_order(),
            9 => verify::criterion_density(),
            10 => verify::criterion_turan_kubilius(),
            11 => verify::criterion_determinism(),
            _ => continue,
        };
        out.push(r);
    }
    out.sort_by_key(|r| r.id);
    out
}
