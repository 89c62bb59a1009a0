fn main() {
    std::process::exit(dpe_codec::cli::run(std::env::args_os()));
}
