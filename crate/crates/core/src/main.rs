use std::io::Write;

fn main() {
    let (code, text) = planar_reach::cli::run_command(std::env::args_os());
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout(), "{text}");
    std::process::exit(code);
}
