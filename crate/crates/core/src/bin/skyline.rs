use skyline_core::cli::{run, CliEnv};

fn main() {
    let code = run(
        std::env::args_os(),
        &CliEnv::from_process(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
