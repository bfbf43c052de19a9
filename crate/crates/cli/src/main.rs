fn main() {
    let stdout = std::io::stdout();
    let code = pirad_cli::execute(std::env::args_os(), std::io::stdin(), &mut stdout.lock());
    std::process::exit(code);
}
