use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let code = match psg_cli::parse_args(std::env::args().skip(1)) {
        Ok(cfg) => {
            let mut out = std::io::BufWriter::new(std::io::stdout());
            let code = psg_cli::run(&cfg, &mut out);
            if out.flush().is_err() {
                1
            } else {
                code
            }
        }
        Err(e @ psg_cli::ArgsError::Info(_)) => {
            println!("{e}");
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
