fn main() {
    std::process::exit(sparselift::bench::cli::cli_main(std::env::args_os()));
}
