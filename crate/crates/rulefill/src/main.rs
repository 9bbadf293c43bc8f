fn main() {
    std::process::exit(rulefill::cli::run_cli(std::env::args_os()));
}
