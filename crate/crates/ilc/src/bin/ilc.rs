fn main() {
    std::process::exit(ilc::cli::run(std::env::args_os()));
}
