//! Finite abelian groups in invariant-factor form, structure recovery for
//! quotients of concretely given groups, and Davenport constants.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{self, gcd};
use crate::error::{Error, Result};

/// Default cap on `#G` for the exact Davenport search.
pub const DAVENPORT_SIZE_CAP: u64 = 64;

/// `Z/d₁ ⊕ … ⊕ Z/d_r` with `d₁ | d₂ | … | d_r` and every `dᵢ ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroupStructure {
    invariant_factors: Vec<u64>,
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl AbelianGroupStructure {
    /// Validates a list already in invariant-factor form.
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self> {
        let ok = invariant_factors.iter().all(|&d| d >= 2)
            && invariant_factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !ok {
            return Err(Error::InvalidInvariantFactors(invariant_factors));
        }
        Ok(Self { invariant_factors })
    }

    pub fn trivial() -> Self {
        Self {
            invariant_factors: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_factors(&[n])
    }

    /// Normalizes an arbitrary direct sum `⊕ Z/nᵢ` into invariant factors.
    pub fn from_cyclic_factors(moduli: &[u64]) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in moduli {
            for (p, e) in arith::factor(n.max(1)).expect("small modulus") {
                by_prime.entry(p).or_default().push(e);
            }
        }
        Self::from_primary(&by_prime)
    }

    fn from_primary(by_prime: &BTreeMap<u64, Vec<u32>>) -> Self {
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; rank];
        for (&p, exps) in by_prime {
            let mut exps = exps.clone();
            exps.sort_unstable();
            // largest exponent goes to the last factor
            for (slot, &e) in factors.iter_mut().rev().zip(exps.iter().rev()) {
                *slot *= p.pow(e);
            }
        }
        Self {
            invariant_factors: factors.into_iter().filter(|&d| d > 1).collect(),
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.rank() <= 1
    }

    /// Every abelian group of order `n`, one per isomorphism class.
    pub fn all_of_order(n: u64) -> Vec<Self> {
        let factors = arith::factor(n.max(1)).expect("small order");
        let mut out = vec![BTreeMap::new()];
        for (p, e) in factors {
            let mut next = Vec::new();
            for partial in &out {
                for part in partitions(e) {
                    let mut m: BTreeMap<u64, Vec<u32>> = partial.clone();
                    m.insert(p, part);
                    next.push(m);
                }
            }
            out = next;
        }
        let mut groups: Vec<Self> = out.iter().map(Self::from_primary).collect();
        groups.sort_by(|a, b| a.invariant_factors.cmp(&b.invariant_factors));
        groups
    }

    /// Element with coordinates `coords` (mixed radix, first factor least significant).
    pub fn encode(&self, coords: &[u64]) -> usize {
        let mut idx = 0u64;
        for (c, d) in coords.iter().zip(&self.invariant_factors).rev() {
            idx = idx * d + c % d;
        }
        idx as usize
    }

    pub fn decode(&self, mut idx: usize) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|&d| {
                let c = idx as u64 % d;
                idx /= d as usize;
                c
            })
            .collect()
    }

    /// Group law on encoded elements.
    pub fn add(&self, x: usize, y: usize) -> usize {
        let (mut x, mut y) = (x as u64, y as u64);
        let mut out = 0u64;
        let mut scale = 1u64;
        for &d in &self.invariant_factors {
            out += ((x % d + y % d) % d) * scale;
            scale *= d;
            x /= d;
            y /= d;
        }
        out as usize
    }

    /// Additive order of an encoded element.
    pub fn element_order(&self, x: usize) -> u64 {
        self.decode(x)
            .iter()
            .zip(&self.invariant_factors)
            .fold(1, |acc, (&c, &d)| arith::lcm(acc, d / gcd(c, d)))
    }
}

fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Structure of `G/H` for a concretely given finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientInfo {
    pub structure: AbelianGroupStructure,
    /// `#H` where `H` is generated by the supplied generators.
    pub subgroup_order: u64,
}

/// Recovers the invariant factors of `G/⟨gens⟩`.
///
/// `G` has elements `0..n`, identity `identity` and law `mul`. Cosets of
/// `H = ⟨gens⟩` are labelled, then for each prime `p | #(G/H)` the number of
/// classes killed by `p^k` is `p^{Σᵢ min(k, eᵢ)}`, which pins down the
/// exponents `eᵢ` of the `p`-primary part.
pub fn quotient_structure<M>(n: usize, identity: usize, mul: M, gens: &[usize]) -> QuotientInfo
where
    M: Fn(usize, usize) -> usize,
{
    let subgroup = closure(identity, &mul, gens);
    let mut coset = vec![u32::MAX; n];
    let mut reps = Vec::with_capacity(n / subgroup.len());
    for x in 0..n {
        if coset[x] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &h in &subgroup {
            coset[mul(x, h)] = id;
        }
    }
    let q_order = reps.len() as u64;
    let trivial = coset[identity];
    let pow = |x: usize, mut e: u64| {
        let (mut base, mut acc) = (x, identity);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let primes = arith::factor(q_order.max(1)).expect("group order is small");
    // v_p(order of each class), per prime
    let mut valuations: Vec<Vec<u32>> = vec![Vec::with_capacity(reps.len()); primes.len()];
    for &r in &reps {
        let mut ord = q_order;
        for (i, &(p, e)) in primes.iter().enumerate() {
            let mut v = e;
            while v > 0 && coset[pow(r, ord / p)] == trivial {
                ord /= p;
                v -= 1;
            }
            valuations[i].push(v);
        }
    }
    let mut by_prime = BTreeMap::new();
    for (i, &(p, e)) in primes.iter().enumerate() {
        let mut counts = vec![0u64; e as usize + 1];
        for &v in &valuations[i] {
            counts[v as usize] += 1;
        }
        // cumulative: #{x : v_p(ord x) ≤ k} = (N/p^e) · p^{Σᵢ min(k, eᵢ)}
        for k in 1..counts.len() {
            counts[k] += counts[k - 1];
        }
        let cofactor = q_order / p.pow(e);
        let logs: Vec<u32> = counts
            .iter()
            .map(|&c| ilog_exact(c / cofactor, p))
            .collect();
        // r_k = #{i : e_i ≥ k}
        let r: Vec<u32> = (1..logs.len()).map(|k| logs[k] - logs[k - 1]).collect();
        let rank = r.first().copied().unwrap_or(0);
        let exps: Vec<u32> = (1..=rank)
            .map(|i| r.iter().filter(|&&rk| rk >= i).count() as u32)
            .collect();
        by_prime.insert(p, exps);
    }
    QuotientInfo {
        structure: AbelianGroupStructure::from_primary(&by_prime),
        subgroup_order: subgroup.len() as u64,
    }
}

fn ilog_exact(mut c: u64, p: u64) -> u32 {
    let mut k = 0;
    while c > 1 {
        debug_assert_eq!(c % p, 0, "class counts must be prime powers");
        c /= p;
        k += 1;
    }
    k
}

/// Elements of the subgroup generated by `gens`.
pub fn closure<M>(identity: usize, mul: &M, gens: &[usize]) -> Vec<usize>
where
    M: Fn(usize, usize) -> usize,
{
    let mut members = vec![identity];
    let mut seen = std::collections::HashSet::from([identity]);
    let mut i = 0;
    while i < members.len() {
        let x = members[i];
        for &g in gens {
            let y = mul(x, g);
            if seen.insert(y) {
                members.push(y);
            }
        }
        i += 1;
    }
    members
}

/// `Dav G` by exhaustive search for the longest zero-sum-free sequence.
pub fn davenport_exact(g: &AbelianGroupStructure, size_cap: u64) -> Result<u64> {
    let n = g.order();
    if n > size_cap || n > 64 {
        return Err(Error::SizeCapExceeded {
            order: n,
            cap: size_cap.min(64),
        });
    }
    if n == 1 {
        return Ok(1);
    }
    let n = n as usize;
    let table: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| g.add(x, y)).collect())
        .collect();
    let orders: Vec<u64> = (0..n).map(|x| g.element_order(x)).collect();
    let (lower, _) = davenport_bounds(g);
    let mut search = DavSearch {
        n,
        table: &table,
        orders: &orders,
        best: lower - 1,
    };
    search.dfs(1, 0, 0, 0);
    Ok(search.best + 1)
}

struct DavSearch<'a> {
    n: usize,
    table: &'a [Vec<usize>],
    orders: &'a [u64],
    best: u64,
}

impl DavSearch<'_> {
    /// `sums` is the bitmask of nonempty subsums of the current sequence.
    fn dfs(&mut self, start: usize, len: u64, sums: u64, run: u64) {
        if len > self.best {
            self.best = len;
        }
        let room = (self.n as u64 - 1) - sums.count_ones() as u64;
        if len + room <= self.best {
            return;
        }
        for g in start..self.n {
            // a zero-sum-free sequence repeats g at most ord(g) − 1 times
            let repeat = if g == start && len > 0 { run } else { 0 };
            if repeat + 1 >= self.orders[g] {
                continue;
            }
            let shifted = self.translate(sums, g) | (1u64 << g);
            if shifted & 1 != 0 {
                continue;
            }
            let next = sums | shifted;
            let room = (self.n as u64 - 1) - next.count_ones() as u64;
            if len + 1 + room <= self.best {
                continue;
            }
            self.dfs(g, len + 1, next, repeat + 1);
        }
    }

    fn translate(&self, mut set: u64, g: usize) -> u64 {
        let row = &self.table[g];
        let mut out = 0u64;
        while set != 0 {
            let s = set.trailing_zeros() as usize;
            out |= 1u64 << row[s];
            set &= set - 1;
        }
        out
    }
}

/// Whether the encoded sequence has no nonempty zero-sum subsequence.
pub fn is_zero_sum_free(g: &AbelianGroupStructure, seq: &[usize]) -> bool {
    let mut sums = std::collections::HashSet::new();
    for &x in seq {
        let shifted: Vec<usize> = sums.iter().map(|&s| g.add(s, x)).collect();
        sums.insert(x);
        sums.extend(shifted);
        if sums.contains(&0) {
            return false;
        }
    }
    true
}

/// `(max(Exp G, 1 + Σ(dᵢ − 1)), ⌊Exp G · (1 + ln(#G/Exp G))⌋)`.
pub fn davenport_bounds(g: &AbelianGroupStructure) -> (u64, u64) {
    let exp = g.exponent();
    let lower = exp.max(1 + g.invariant_factors.iter().map(|d| d - 1).sum::<u64>());
    let ratio = g.order() as f64 / exp as f64;
    let upper = (exp as f64 * (1.0 + ratio.ln()) + 1e-9).floor() as u64;
    (lower, upper.max(lower))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SandwichRecord {
    pub dav_h: u64,
    pub dav_q: u64,
    pub dav_g: u64,
    pub holds: bool,
}

/// Checks `max(Dav H, Dav G/H) ≤ Dav G ≤ Dav H · Dav G/H` for `H = ⟨h_gens⟩`.
///
/// Generators are given as coordinate vectors with respect to `g`.
pub fn sandwich_check(
    g: &AbelianGroupStructure,
    h_gens: &[Vec<u64>],
    size_cap: u64,
) -> Result<SandwichRecord> {
    let n = g.order();
    if n > size_cap {
        return Err(Error::SizeCapExceeded {
            order: n,
            cap: size_cap,
        });
    }
    let gens: Vec<usize> = h_gens.iter().map(|c| g.encode(c)).collect();
    let add = |x, y| g.add(x, y);
    let q = quotient_structure(n as usize, 0, add, &gens).structure;
    let h_elems = closure(0, &add, &gens);
    let index: std::collections::HashMap<usize, usize> =
        h_elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let h = quotient_structure(
        h_elems.len(),
        0,
        |x, y| index[&g.add(h_elems[x], h_elems[y])],
        &[],
    )
    .structure;
    let dav_h = davenport_exact(&h, size_cap)?;
    let dav_q = davenport_exact(&q, size_cap)?;
    let dav_g = davenport_exact(g, size_cap)?;
    Ok(SandwichRecord {
        dav_h,
        dav_q,
        dav_g,
        holds: dav_h.max(dav_q) <= dav_g && dav_g <= dav_h * dav_q,
    })
}
