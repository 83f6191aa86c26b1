fn main() {
    std::process::exit(ttw_cli::run(std::env::args_os()));
}
