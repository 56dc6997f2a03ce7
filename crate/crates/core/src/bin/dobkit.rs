fn main() {
    std::process::exit(dobkit::cli::run(std::env::args_os()));
}
