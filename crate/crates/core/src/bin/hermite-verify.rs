fn main() {
    std::process::exit(hermite_spectral::cli::main());
}
