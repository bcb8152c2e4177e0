fn main() {
    std::process::exit(rtgs_sim::cli::run_cli(std::env::args_os()));
}
