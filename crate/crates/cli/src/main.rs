mod commands;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use convalg::RingDescriptor;

use commands::{CliError, CliResult, Context, GpdOp, HeckeOp, LpaOp, NormTarget, Outcome};
use convalg_cli::report::{digest, Report};

#[derive(Parser)]
#[command(name = "convalg", version, about = "Convolution algebras of graphs, groupoids and Hecke towers")]
struct Cli {
    /// Coefficient ring: Z, Q, Q(i), Z[1/2] or Z[1/3].
    #[arg(long, global = true, default_value = "Q")]
    ring: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random cases for sampled suites.
    #[arg(long, global = true, default_value_t = 100)]
    count: usize,
    /// Truncation depth for graph norms.
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    graph: Option<String>,
    #[arg(long, global = true)]
    groupoid: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Leavitt path algebra of a graph.
    Lpa {
        #[command(subcommand)]
        op: LpaCmd,
    },
    /// Convolution algebra of a graph against the rewriting engine.
    Conv {
        #[command(subcommand)]
        op: ConvCmd,
    },
    /// Finite groupoid algebras.
    Gpd {
        #[command(subcommand)]
        op: GpdCmd,
    },
    /// Hecke tower of Z_p.
    Hecke {
        #[arg(long)]
        p: u64,
        #[command(subcommand)]
        op: HeckeCmd,
    },
    /// I-norm, reduced norm and maximal bound of an element.
    Norm { element: String },
}

#[derive(Subcommand)]
enum LpaCmd {
    Mul { left: String, right: String },
    Star { element: String },
    VerifyRelations,
}

#[derive(Subcommand)]
enum ConvCmd {
    Compare,
}

#[derive(Subcommand)]
enum GpdCmd {
    Convolve {
        left: String,
        right: String,
    },
    Decompose,
    EquivCheck {
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
    },
}

#[derive(Subcommand)]
enum HeckeCmd {
    Assoc {
        #[arg(long, default_value_t = 2)]
        levels: u32,
    },
    Compose { first: String, second: String },
}

/// The command line as echoed into the report, without `--out`.
fn echo(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--out" {
            it.next();
        } else if !a.starts_with("--out=") {
            out.push(a.clone());
        }
    }
    out
}

fn run(cli: &Cli, ctx: &mut Context) -> CliResult<(Outcome, bool, bool)> {
    // (outcome, report seed, report depth)
    Ok(match &cli.command {
        Command::Lpa { op } => {
            let g = ctx.graph(cli.graph.as_deref())?;
            let op = match op {
                LpaCmd::Mul { left, right } => LpaOp::Mul(left.clone(), right.clone()),
                LpaCmd::Star { element } => LpaOp::Star(element.clone()),
                LpaCmd::VerifyRelations => LpaOp::VerifyRelations,
            };
            (commands::lpa(ctx, &g, &op)?, false, false)
        }
        Command::Conv { op: ConvCmd::Compare } => {
            let g = ctx.graph(cli.graph.as_deref())?;
            (commands::conv_compare(ctx, &g)?, true, false)
        }
        Command::Gpd { op } => {
            let g = ctx.groupoid(cli.groupoid.as_deref())?;
            let (op, seeded) = match op {
                GpdCmd::Convolve { left, right } => (GpdOp::Convolve(left.clone(), right.clone()), false),
                GpdCmd::Decompose => (GpdOp::Decompose, false),
                GpdCmd::EquivCheck { max_rank } => (GpdOp::EquivCheck { max_rank: *max_rank }, true),
            };
            (commands::gpd(ctx, &g, &op)?, seeded, false)
        }
        Command::Hecke { p, op } => {
            let op = match op {
                HeckeCmd::Assoc { levels } => HeckeOp::Assoc { levels: *levels },
                HeckeCmd::Compose { first, second } => HeckeOp::Compose(first.clone(), second.clone()),
            };
            (commands::hecke(ctx, *p, &op)?, false, false)
        }
        Command::Norm { element } => match (&cli.graph, &cli.groupoid) {
            (Some(_), Some(_)) => {
                return Err(CliError::Precondition("give only one of --graph and --groupoid".into()))
            }
            (Some(path), None) => {
                let g = ctx.graph(Some(path))?;
                (commands::norm(ctx, &NormTarget::Graph(&g), element)?, false, true)
            }
            (None, Some(path)) => {
                let g = ctx.groupoid(Some(path))?;
                (commands::norm(ctx, &NormTarget::Groupoid(&g), element)?, false, false)
            }
            (None, None) => return Err(CliError::Precondition("norm needs --graph or --groupoid".into())),
        },
    })
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let ring = match RingDescriptor::parse(&cli.ring) {
        Ok(r) => r,
        Err(e) => {
            let e = CliError::core("--ring", e);
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut ctx = Context {
        ring,
        seed: cli.seed,
        count: cli.count,
        depth: cli.depth,
        inputs: Vec::new(),
    };
    let (outcome, seeded, deep) = match run(&cli, &mut ctx) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let command = echo(&args);
    let pass = outcome.checks.iter().all(|c| c.pass);
    let report = Report {
        inputs_digest: digest(&command, &ctx.inputs),
        command,
        ring: ctx.ring.to_string(),
        seed: seeded.then_some(ctx.seed),
        depth: deep.then_some(ctx.depth),
        results: outcome.results,
        checks: outcome.checks,
        pass,
    };
    let text = report.to_json();
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(3);
            }
        }
        None => print!("{text}"),
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
