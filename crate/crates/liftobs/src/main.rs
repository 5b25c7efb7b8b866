use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = liftobs::cli::run(&args, &mut out);
    let _ = out.flush();
    std::process::exit(code);
}
