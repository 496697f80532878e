fn main() {
    std::process::exit(oam_parity::cli::main());
}
