fn main() {
    std::process::exit(ratcover::cli::run(std::env::args_os()));
}
