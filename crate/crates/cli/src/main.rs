use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use trapgeom::planes::{build_affine_plane, build_hall_affine_plane_9, build_hall_plane_9, projective_completion};
use trapgeom::scalars::{FieldSpec, ScalarField};
use trapgeom::scene::{evaluate, Backend, Scene};
use trapgeom::verify::{run_suite, PlaneChoice, Suite, VerifyOptions};
use trapgeom_cli::{router, AppState};

const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "trapgeom", version, about = "Exact trapezoid geometry: scenes, verification suites and a scene server")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scene file and print the result as JSON.
    Eval {
        file: PathBuf,
        #[arg(long, default_value = "exact")]
        backend: Backend,
    },
    /// Run a verification suite: torsor-laws, trapezoid, matrix, planes or all.
    Verify {
        suite: Suite,
        #[arg(long, default_value = "rational")]
        field: FieldSpec,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Order of PG(2, q) for the planes suite.
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// pg or hall9.
        #[arg(long, default_value = "pg")]
        plane: PlaneChoice,
        /// Sample budget for Desargues and associativity scans.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Also write the JSON report to this file.
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Print a finite plane as JSON.
    Plane {
        /// Order of AG(2, q) or PG(2, q).
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// pg or hall9.
        #[arg(long, default_value = "pg")]
        plane: PlaneChoice,
        /// Print the affine plane instead of its projective completion.
        #[arg(long)]
        affine: bool,
    },
    /// Serve the scene API, and static files from --static-dir.
    Serve {
        /// Overridden by the GEOM_PORT environment variable.
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Static files to serve; `*.json` scenes in it are loaded at boot.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Eval { file, backend } => eval(&file, backend),
        Command::Verify {
            suite,
            field,
            samples,
            seed,
            order,
            plane,
            budget,
            format,
            json_out,
        } => {
            let opts = VerifyOptions {
                field,
                samples,
                seed,
                order,
                plane,
                budget,
            };
            verify(suite, &opts, format, json_out)
        }
        Command::Plane { order, plane, affine } => print_plane(order, plane, affine),
        Command::Serve { port, host, static_dir } => serve(host, port, static_dir),
    }
}

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn eval(file: &PathBuf, backend: Backend) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("{}: {e}", file.display())),
    };
    let scene = match Scene::from_json_str(&text) {
        Ok(s) => s,
        Err(e) => return usage_error(format!("{}: {e}", file.display())),
    };
    let result = evaluate(&scene, backend);
    println!("{}", serde_json::to_string_pretty(&result.to_json()).expect("serializable"));
    ExitCode::SUCCESS
}

fn verify(suite: Suite, opts: &VerifyOptions, format: Format, json_out: Option<PathBuf>) -> ExitCode {
    let run = match run_suite(suite, opts) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let json = serde_json::to_string_pretty(&run.to_json()).expect("serializable");
    if let Some(path) = json_out {
        if let Err(e) = std::fs::write(&path, format!("{json}\n")) {
            return usage_error(format!("{}: {e}", path.display()));
        }
    }
    let out = match format {
        Format::Table => run.to_table(),
        Format::Json => format!("{json}\n"),
        Format::Csv => run.to_csv(),
    };
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(out.as_bytes());
    ExitCode::from(run.exit_code() as u8)
}

fn print_plane(order: u32, choice: PlaneChoice, affine: bool) -> ExitCode {
    let plane = match (choice, affine) {
        (PlaneChoice::Hall9, true) => build_hall_affine_plane_9(),
        (PlaneChoice::Hall9, false) => build_hall_plane_9(),
        (PlaneChoice::Pg, _) => ScalarField::gf(order)
            .map_err(Into::into)
            .and_then(|f| build_affine_plane(&f))
            .and_then(|ag| if affine { Ok(ag) } else { projective_completion(&ag) }),
    };
    match plane {
        Ok(p) => {
            println!("{}", p.to_json());
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(e),
    }
}

fn serve(host: std::net::IpAddr, port: u16, static_dir: Option<PathBuf>) -> ExitCode {
    let port = match std::env::var("GEOM_PORT") {
        Ok(p) => match p.parse() {
            Ok(p) => p,
            Err(_) => return usage_error(format!("GEOM_PORT: invalid port '{p}'")),
        },
        Err(_) => port,
    };
    let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
    runtime.block_on(async move {
        let state = AppState::default();
        if let Some(dir) = &static_dir {
            match state.load_dir(dir).await {
                Ok(skipped) => {
                    for (path, err) in skipped {
                        eprintln!("skipping {path}: {err}");
                    }
                }
                Err(e) => return usage_error(format!("{}: {e}", dir.display())),
            }
        }
        let addr = SocketAddr::new(host, port);
        let listener = match tokio::net::TcpListener::bind(addr).await {
            Ok(l) => l,
            Err(e) => {
                eprintln!("error: cannot bind {addr}: {e}");
                return ExitCode::FAILURE;
            }
        };
        let local = listener.local_addr().expect("bound address");
        eprintln!("listening on http://{local} ({} scenes loaded)", state.len().await);
        let app = router(state, static_dir.as_deref());
        match axum::serve(listener, app).await {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        }
    })
}
