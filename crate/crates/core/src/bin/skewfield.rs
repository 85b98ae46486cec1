fn main() {
    std::process::exit(skewfield::harness::cli::main_with_args(std::env::args_os()));
}
