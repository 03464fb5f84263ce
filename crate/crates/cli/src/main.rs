use std::io::Write;

fn main() {
    let out = cyclosrg_cli::run(std::env::args_os(), cyclosrg::Bounds::from_env());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
