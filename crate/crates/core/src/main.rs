fn main() {
    std::process::exit(tagrot::cli::run());
}
