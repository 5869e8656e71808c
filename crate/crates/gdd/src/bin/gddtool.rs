fn main() {
    std::process::exit(gdd::cli::run(std::env::args_os()));
}
