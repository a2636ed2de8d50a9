fn main() {
    std::process::exit(reedycat::cli::run());
}
