fn main() {
    std::process::exit(laneocc::cli::run(std::env::args_os()));
}
