use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lca_cli::commands::{self, CohomOp, CrossedOp, ExtOp, Outcome, TwoTermOp};
use lca_cli::{corpus, json, Bundle, InputError};

#[derive(Parser)]
#[command(name = "lca", version, about = "Checks identities of averaging Lie conformal algebras exactly")]
struct Cli {
    /// Bundle to read
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Write the full report as JSON
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    /// Write the bundle a transformation produces
    #[arg(long, global = true)]
    emit: Option<PathBuf>,

    /// Suppress the human summary
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Skew-symmetry and Jacobi identity of the algebra
    Check,
    /// Averaging identity for an operator from "maps", or algebra.operator
    AvgCheck {
        #[arg(long)]
        op: Option<String>,
    },
    /// Representation axioms, and the averaging identities when operators are given
    RepCheck {
        #[arg(long)]
        op: Option<String>,
    },
    /// Coboundaries, brackets and Maurer-Cartan checks on named cochains
    Cohom {
        #[command(subcommand)]
        op: CohomCmd,
    },
    /// 2-term homotopy structures
    Twoterm {
        #[command(subcommand)]
        op: TwoTermCmd,
    },
    /// Crossed modules
    Crossed {
        #[command(subcommand)]
        op: CrossedCmd,
    },
    /// Non-abelian extensions
    Ext {
        #[command(subcommand)]
        op: ExtCmd,
    },
    /// Wells map: is the transformed cocycle equivalent to the extension's own
    Wells {
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        /// Automorphism of the total algebra; derives alpha, beta and tau
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        tau: Option<String>,
    },
    /// Search an equivalence witness between the cocycle and the extension's cocycle
    SolveTau {
        #[arg(long, default_value_t = 2)]
        cap: usize,
    },
    /// Print a builtin bundle in canonical form
    Builtin {
        /// One of the builtin names; "list" prints them
        name: String,
    },
}

#[derive(clap::Args)]
struct CochainArgs {
    #[arg(long)]
    cochain: Option<String>,
    #[arg(long)]
    cochain2: Option<String>,
    /// Operator from "maps" overriding the bundle's
    #[arg(long)]
    op: Option<String>,
}

#[derive(Subcommand)]
enum CohomCmd {
    Delta(CochainArgs),
    DeltaAo(CochainArgs),
    Xi(CochainArgs),
    Dal(CochainArgs),
    Nr(CochainArgs),
    Mc(CochainArgs),
}

#[derive(Subcommand)]
enum TwoTermCmd {
    Check,
    Classify,
    ToCrossed,
    ToCocycle,
}

#[derive(Subcommand)]
enum CrossedCmd {
    Check,
    DirectSum,
    ToStrict,
}

#[derive(Subcommand)]
enum ExtCmd {
    CheckCocycle,
    Build,
    Extract,
    Equiv {
        #[arg(long)]
        tau: Option<String>,
    },
}

fn load(input: &Option<PathBuf>) -> Result<Bundle, InputError> {
    match input {
        Some(p) => Bundle::load(p),
        None => Err(InputError::Missing("--input PATH is required".into())),
    }
}

fn run(cli: &Cli) -> Result<(String, Outcome), InputError> {
    let b = || load(&cli.input);
    Ok(match &cli.command {
        Command::Check => ("check".into(), commands::check(&b()?)?),
        Command::AvgCheck { op } => ("avg-check".into(), commands::avg_check(&b()?, op.as_deref())?),
        Command::RepCheck { op } => ("rep-check".into(), commands::rep_check(&b()?, op.as_deref())?),
        Command::Cohom { op } => {
            let (kind, name, args) = match op {
                CohomCmd::Delta(a) => (CohomOp::Delta, "delta", a),
                CohomCmd::DeltaAo(a) => (CohomOp::DeltaAo, "delta-ao", a),
                CohomCmd::Xi(a) => (CohomOp::Xi, "xi", a),
                CohomCmd::Dal(a) => (CohomOp::Dal, "dal", a),
                CohomCmd::Nr(a) => (CohomOp::Nr, "nr", a),
                CohomCmd::Mc(a) => (CohomOp::Mc, "mc", a),
            };
            let o =
                commands::cohom(&b()?, kind, args.cochain.as_deref(), args.cochain2.as_deref(), args.op.as_deref())?;
            (format!("cohom {name}"), o)
        }
        Command::Twoterm { op } => {
            let (kind, name) = match op {
                TwoTermCmd::Check => (TwoTermOp::Check, "check"),
                TwoTermCmd::Classify => (TwoTermOp::Classify, "classify"),
                TwoTermCmd::ToCrossed => (TwoTermOp::ToCrossed, "to-crossed"),
                TwoTermCmd::ToCocycle => (TwoTermOp::ToCocycle, "to-cocycle"),
            };
            (format!("twoterm {name}"), commands::two_term(&b()?, kind)?)
        }
        Command::Crossed { op } => {
            let (kind, name) = match op {
                CrossedCmd::Check => (CrossedOp::Check, "check"),
                CrossedCmd::DirectSum => (CrossedOp::DirectSum, "direct-sum"),
                CrossedCmd::ToStrict => (CrossedOp::ToStrict, "to-strict"),
            };
            (format!("crossed {name}"), commands::crossed(&b()?, kind)?)
        }
        Command::Ext { op } => {
            let (kind, name, tau) = match op {
                ExtCmd::CheckCocycle => (ExtOp::CheckCocycle, "check-cocycle", None),
                ExtCmd::Build => (ExtOp::Build, "build", None),
                ExtCmd::Extract => (ExtOp::Extract, "extract", None),
                ExtCmd::Equiv { tau } => (ExtOp::Equiv, "equiv", tau.as_deref()),
            };
            (format!("ext {name}"), commands::ext(&b()?, kind, tau)?)
        }
        Command::Wells { alpha, beta, gamma, tau } => (
            "wells".into(),
            commands::wells(&b()?, alpha.as_deref(), beta.as_deref(), gamma.as_deref(), tau.as_deref())?,
        ),
        Command::SolveTau { cap } => ("solve-tau".into(), commands::solve_tau(&b()?, *cap)?),
        Command::Builtin { .. } => unreachable!("handled before dispatch"),
    })
}

fn write(path: &Path, text: &str) -> Result<(), InputError> {
    std::fs::write(path, text).map_err(|source| InputError::Io { path: path.display().to_string(), source })
}

fn builtin(name: &str) -> ExitCode {
    if name == "list" {
        for n in corpus::BUILTINS {
            println!("{n}");
        }
        return ExitCode::SUCCESS;
    }
    match corpus::builtin(name) {
        Some(b) => {
            print!("{}", b.to_canonical());
            ExitCode::SUCCESS
        }
        None => {
            eprintln!("error: unknown builtin '{name}' (try `lca builtin list`)");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Command::Builtin { name } = &cli.command {
        return builtin(name);
    }
    let result = run(&cli).and_then(|(command, o)| {
        if let Some(p) = &cli.json {
            write(p, &json::to_canonical(&o.to_json(&command)))?;
        }
        if let (Some(p), Some(b)) = (&cli.emit, &o.emit) {
            write(p, &b.to_canonical())?;
        }
        Ok(o)
    });
    match result {
        Ok(o) => {
            if !cli.quiet {
                print!("{}", commands::summary(&o));
            }
            if o.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
