fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(ntos::cli::run_cli(&argv));
}
