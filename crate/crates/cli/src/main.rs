use std::process::ExitCode;

fn main() -> ExitCode {
    let result = k3lat_cli::run(std::env::args_os());
    let text = result.rendered();
    if !text.is_empty() {
        if result.status == k3lat_cli::EXIT_INVALID && !result.json {
            eprintln!("{}", text.trim_end());
        } else {
            println!("{}", text.trim_end());
        }
    }
    ExitCode::from(result.status as u8)
}
