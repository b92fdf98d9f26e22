fn main() {
    std::process::exit(apvnet::cli::cli_main(std::env::args()));
}
