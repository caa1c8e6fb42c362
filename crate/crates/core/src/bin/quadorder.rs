fn main() {
    std::process::exit(quadorder::cli::main_with_args(std::env::args_os()));
}
