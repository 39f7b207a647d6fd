fn main() {
    std::process::exit(butson_morphisms::cli::run());
}
