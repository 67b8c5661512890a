use std::io::Read;

use disparate::cli::run_command;

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let mut stdin = String::new();
    if argv.iter().any(|a| a == "-") {
        let _ = std::io::stdin().read_to_string(&mut stdin);
    }
    let out = run_command(&argv, &stdin);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
