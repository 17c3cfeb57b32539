use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match steiner_tet_cli::run(&args) {
        Ok(stdout) => {
            print!("{stdout}");
            if !stdout.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.code.clamp(1, 255) as u8)
        }
    }
}
