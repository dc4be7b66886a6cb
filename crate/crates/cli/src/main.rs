use std::io::{self, Write};
use std::process::ExitCode;

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

fn main() -> ExitCode {
    let stdin = io::stdin();
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = treearith_cli::run(std::env::args_os(), &mut stdin.lock(), &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
