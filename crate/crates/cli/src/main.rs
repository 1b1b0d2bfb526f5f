fn main() {
    std::process::exit(jordan_cli::cli_dispatch(std::env::args_os()));
}
