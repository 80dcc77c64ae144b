fn main() {
    std::process::exit(bandit_lab::cli::main());
}
