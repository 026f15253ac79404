fn main() {
    std::process::exit(curvop::cli::run());
}
