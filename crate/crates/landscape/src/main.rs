fn main() {
    std::process::exit(landscape::cli::main_with_args(std::env::args_os()));
}
