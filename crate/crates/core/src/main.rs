fn main() {
    std::process::exit(slchaos::cli::cli_main(std::env::args_os()));
}
