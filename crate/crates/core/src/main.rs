fn main() {
    std::process::exit(dunkl::cli::run())
}
