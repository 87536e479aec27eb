use std::io::{self, Write};

use chainform_cli::{run, Cli};
use clap::Parser;

fn main() {
    let cli = Cli::parse();
    // Term operations recurse on term depth; give them room.
    let worker = std::thread::Builder::new().stack_size(256 << 20).spawn(move || {
        let stdin = io::stdin();
        let stdout = io::stdout();
        let stderr = io::stderr();
        let code = run(&cli, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock());
        let _ = io::stdout().flush();
        code
    });
    let code = worker.expect("spawn worker").join().unwrap_or(101);
    std::process::exit(code);
}
