fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(qbc_cli::run(&argv));
}
