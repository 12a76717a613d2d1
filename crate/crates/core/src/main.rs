use std::io::Write;

fn main() {
    let env = std::env::var(k3cycles::cli::PRECISION_ENV).ok();
    let (code, out) = k3cycles::cli::run(std::env::args_os(), env.as_deref());
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        std::process::exit(1);
    }
    std::process::exit(code);
}
