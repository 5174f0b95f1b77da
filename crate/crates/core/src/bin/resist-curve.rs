fn main() {
    std::process::exit(resist_curve::cli::run(std::env::args().collect()));
}
