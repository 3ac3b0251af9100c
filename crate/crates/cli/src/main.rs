fn main() {
    std::process::exit(levyspline_cli::run(std::env::args_os()));
}
