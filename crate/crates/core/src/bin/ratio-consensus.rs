fn main() {
    std::process::exit(ratio_consensus::cli::main_from_env());
}
