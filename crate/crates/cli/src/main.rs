fn main() {
    std::process::exit(rwka_cli::main_with_args(std::env::args_os()));
}
