fn main() {
    std::process::exit(ua::cli::main())
}
