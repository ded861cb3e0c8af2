use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use fuzzylex_cli::{demo, repl::Repl, simulate};
use fuzzylex_core::{Lexicon, Policy, Vocabulary, VocabularyDocument};
use fuzzylex_service::{AppState, ServiceConfig, DEFAULT_LISTEN};

#[derive(Debug, Parser)]
#[command(
    name = "fuzzylex",
    version,
    about = "Learn what unknown query words mean from rated candidates"
)]
struct Cli {
    /// Lexicon file (JSON). Created on first save if missing.
    #[arg(long, global = true, env = "FUZZYLEX_LEXICON")]
    lexicon: Option<PathBuf>,

    /// Ask for ratings even for words that were learned before.
    #[arg(long, global = true, env = "FUZZYLEX_ALWAYS_ELICIT")]
    always_elicit: bool,

    /// Minimum final decision coefficient for accepting a decision.
    #[arg(long, global = true, value_name = "DEGREE", value_parser = parse_degree, env = "FUZZYLEX_MIN_FINAL")]
    min_final: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the HTTP/JSON service.
    Serve {
        #[arg(long, default_value = DEFAULT_LISTEN, env = "FUZZYLEX_LISTEN")]
        listen: String,
        /// Directory with the web UI bundle to serve.
        #[arg(long, env = "FUZZYLEX_UI_DIR")]
        ui_dir: Option<PathBuf>,
        /// Idle sessions are dropped after this many seconds.
        #[arg(long, default_value_t = 3600)]
        session_ttl: u64,
    },
    /// Interactive dialogue on the terminal.
    Repl {
        /// Replace the system vocabulary from a JSON file ({objects, goals, applicability}) before starting.
        #[arg(long)]
        vocabulary: Option<PathBuf>,
    },
    /// Fold a CSV of ratings (surface,kind,candidate,theta) and print the result as CSV.
    Simulate { input: PathBuf },
    /// Recompute the two worked examples and compare with the published values.
    DemoPaper,
    /// Print the lexicon file to standard output.
    Export,
}

fn parse_degree(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn load_or_empty(path: Option<&Path>) -> anyhow::Result<Lexicon> {
    match path {
        Some(p) if p.exists() => Lexicon::load(p).with_context(|| format!("loading {}", p.display())),
        _ => Ok(Lexicon::new()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let policy = Policy {
        always_elicit: cli.always_elicit,
        min_final_coefficient: cli.min_final,
    };
    match cli.command {
        Command::Serve {
            listen,
            ui_dir,
            session_ttl,
        } => {
            let config = ServiceConfig {
                lexicon_path: cli.lexicon,
                ui_dir,
                policy,
                session_ttl: Duration::from_secs(session_ttl),
            };
            serve(&listen, config)?;
        }
        Command::Repl { vocabulary } => {
            let mut lexicon = load_or_empty(cli.lexicon.as_deref())?;
            if let Some(path) = vocabulary {
                let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let doc: VocabularyDocument =
                    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                lexicon.replace_vocabulary(Vocabulary::from_document(&doc)?)?;
            }
            let stdin = io::stdin();
            Repl::new(stdin.lock(), io::stdout(), &mut lexicon, policy, cli.lexicon.as_deref()).run()?;
        }
        Command::Simulate { input } => {
            let mut lexicon = load_or_empty(cli.lexicon.as_deref())?;
            let file = File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let stdout = io::stdout();
            simulate::simulate(BufReader::new(file), &mut lexicon, stdout.lock())?;
        }
        Command::DemoPaper => {
            let checks = demo::run(&demo::Formulas::default());
            if !demo::report(&checks, &mut io::stdout())? {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Export => {
            let Some(path) = cli.lexicon else {
                bail!("export needs --lexicon <path>")
            };
            let lexicon = Lexicon::load(&path).with_context(|| format!("loading {}", path.display()))?;
            io::stdout().write_all(lexicon.to_json().as_bytes())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn serve(listen: &str, config: ServiceConfig) -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(io::stderr)
        .init();
    let state = AppState::open(config).context("opening lexicon")?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(listen)
            .await
            .with_context(|| format!("binding {listen}"))?;
        println!("listening on http://{}", listener.local_addr()?);
        io::stdout().flush()?;
        fuzzylex_service::serve(listener, state, shutdown_signal()).await?;
        Ok(())
    })
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = terminate => {},
    }
}
