fn main() {
    std::process::exit(colorfilt::cli::run(std::env::args_os()));
}
