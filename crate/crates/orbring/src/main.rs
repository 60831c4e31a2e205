fn main() {
    std::process::exit(orbring::cli::main_with_args(std::env::args_os()));
}
