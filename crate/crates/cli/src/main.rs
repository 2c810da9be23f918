fn main() {
    std::process::exit(hypermux_cli::cli_main(std::env::args_os()));
}
