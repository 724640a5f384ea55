fn main() {
    std::process::exit(regulab_cli::main_with_args(std::env::args_os()));
}
