fn main() {
    std::process::exit(braidlab::cli::main());
}
