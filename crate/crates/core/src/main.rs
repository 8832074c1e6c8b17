fn main() {
    std::process::exit(abelicomp::cli::run());
}
