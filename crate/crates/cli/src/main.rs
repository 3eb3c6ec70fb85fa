use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use genformal_cli::checks::Selection;
use genformal_cli::commands::{self, VerifyOptions, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "genformal", version, about = "Exact checks for twisted generalized complex geometry")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites on a scene.
    Verify {
        /// Scene file (JSON).
        scene: PathBuf,
        /// core, equivariant, doublecomplex or all.
        #[arg(long, default_value = "all")]
        suite: Selection,
        /// Also write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 1000)]
        complexes: usize,
    },
    /// Upstairs and quotient types at a point, e.g. --at '{"z0": "1", "z2": "1"}'.
    Type {
        scene: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Generalized Hodge numbers of the quotient.
    Hodge { scene: PathBuf },
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("GENFORMAL_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().map_err(|_| format!("GENFORMAL_THREADS must be a number, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    let out = match cli.cmd {
        Cmd::Verify { scene, suite, json, seed, max_degree, samples, complexes } => {
            let opts = VerifyOptions { suite, seed, max_degree, samples, complexes };
            commands::verify(&scene, &opts, json.as_deref())
        }
        Cmd::Type { scene, at } => commands::types(&scene, &at),
        Cmd::Hodge { scene } => commands::hodge(&scene),
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
