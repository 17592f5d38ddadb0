fn main() {
    std::process::exit(resonance_stats::cli::main());
}
