use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (stdout, stderr, code) = nullity_cli::run(std::env::args_os());
    if let Some(out) = stdout {
        // a closed pipe downstream is not an error of ours
        let _ = writeln!(std::io::stdout(), "{out}");
    }
    if !stderr.is_empty() {
        let _ = writeln!(std::io::stderr(), "{}", stderr.trim_end());
    }
    ExitCode::from(code as u8)
}
