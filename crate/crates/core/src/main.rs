fn main() {
    std::process::exit(idemgeo::cli::run());
}
