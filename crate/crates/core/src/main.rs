fn main() {
    std::process::exit(algroup::cli::main_with_args(std::env::args_os()));
}
