fn main() {
    std::process::exit(pdrich::cli::main());
}
