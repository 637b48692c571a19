fn main() {
    std::process::exit(doublet::cli::run());
}
