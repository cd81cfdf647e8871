fn main() {
    std::process::exit(deltashock::cli::run());
}
