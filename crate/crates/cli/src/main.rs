use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pblock::arith::BoundExponent;
use pblock::Error;
use pblock_cli::{
    any_fail, defining_sweep, equality_report, explain, records_to_csv, records_to_jsonl,
    run_sweep, FamilySel, Record, SweepOpts, GENERIC_ORDERS_TABLE, REFLECTION_TABLE,
};

/// Verifies the 2*sqrt(p-1) lower bound on the number of ordinary
/// irreducible characters in principal p-blocks of simple groups.
#[derive(Parser)]
#[command(name = "pblock", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Output format.
    #[arg(long, global = true, default_value = "jsonl", value_parser = ["jsonl", "csv"])]
    format: String,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 4)]
    parallel: usize,
}

#[derive(Args)]
struct GridArgs {
    /// Family: symmetric, alternating, linear, unitary, or a Lie series
    /// (B, C, D, 2D, G2, F4, 3D4, E6, 2E6, E7, E8, 2B2, 2G2, 2F4).
    #[arg(long, required = true)]
    family: Vec<String>,

    /// n (or rank) range, as N or MIN-MAX.
    #[arg(long)]
    n: Option<String>,

    /// Prime powers q to sweep.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<u64>>,

    /// Unused for sweep selection (epsilon is implied by linear/unitary);
    /// accepted for symmetry with `explain`.
    #[arg(long)]
    epsilon: Option<i32>,

    /// Largest prime to test.
    #[arg(long, default_value_t = 200)]
    p_max: u64,

    /// Threshold exponent: 2 for 2*sqrt(p-1), 4 for 2*(p-1)^{1/4}.
    #[arg(long, value_parser = ["2", "4"])]
    threshold_exp: Option<String>,

    /// Also compute cells with p < 11 where the formulas remain valid.
    #[arg(long, default_value_t = false)]
    allow_small_p: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep (group, p) cells and verify the bound.
    Sweep(GridArgs),
    /// Report every equality cell k(B_0) = 2*sqrt(p-1).
    Equality {
        #[arg(long, default_value_t = 200)]
        p_max: u64,
    },
    /// Defining-characteristic check q^r/|Z| vs 2*sqrt(p-1)*|Out|.
    Defining {
        #[arg(long, default_value_t = 32)]
        q_max: u64,
    },
    /// Print the derivation trace for a single cell.
    Explain {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        n: u64,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        epsilon: Option<i32>,
        #[arg(long)]
        p: u64,
    },
    /// Dump the embedded data tables.
    Tables,
}

fn parse_range(s: &str) -> Result<(u64, u64), Error> {
    if let Some((lo, hi)) = s.split_once('-') {
        let lo = lo.trim().parse().map_err(|_| Error::Domain(format!("bad range {s:?}")))?;
        let hi = hi.trim().parse().map_err(|_| Error::Domain(format!("bad range {s:?}")))?;
        if lo > hi {
            return Err(Error::Domain(format!("empty range {s:?}")));
        }
        Ok((lo, hi))
    } else {
        let v = s.trim().parse().map_err(|_| Error::Domain(format!("bad range {s:?}")))?;
        Ok((v, v))
    }
}

fn sweep_opts(args: &GridArgs) -> Result<SweepOpts, Error> {
    let mut families = Vec::new();
    for f in &args.family {
        families.push(FamilySel::parse(f)?);
    }
    let mut opts = SweepOpts::defaults_for(families);
    if let Some(n) = &args.n {
        let (lo, hi) = parse_range(n)?;
        opts.n_min = lo;
        opts.n_max = hi;
    }
    if let Some(q) = &args.q {
        opts.q_list = q.clone();
    }
    opts.p_max = args.p_max;
    opts.threshold = match args.threshold_exp.as_deref() {
        Some("2") => Some(BoundExponent::Square),
        Some("4") => Some(BoundExponent::Fourth),
        _ => None,
    };
    opts.allow_small_p = args.allow_small_p;
    Ok(opts)
}

fn emit(cli: &Cli, records: &[Record]) -> std::io::Result<()> {
    let text = if cli.format == "csv" {
        records_to_csv(records)
    } else {
        records_to_jsonl(records)
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => 4,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Sweep(args) => match sweep_opts(args).and_then(|o| run_sweep(&o, cli.parallel)) {
            Ok(records) => {
                if emit(&cli, &records).is_err() {
                    return ExitCode::from(3);
                }
                if any_fail(&records) {
                    eprintln!(
                        "FAIL verdict present; reproduce with: pblock sweep --family {} --p-max {}",
                        args.family.join(" --family "),
                        args.p_max
                    );
                    return ExitCode::from(2);
                }
                Ok(())
            }
            Err(e) => Err(e),
        },
        Cmd::Equality { p_max } => match equality_report(*p_max, cli.parallel) {
            Ok(records) => {
                if emit(&cli, &records).is_err() {
                    return ExitCode::from(3);
                }
                Ok(())
            }
            Err(e) => Err(e),
        },
        Cmd::Defining { q_max } => match defining_sweep(*q_max) {
            Ok(records) => {
                if emit(&cli, &records).is_err() {
                    return ExitCode::from(3);
                }
                Ok(())
            }
            Err(e) => Err(e),
        },
        Cmd::Explain { family, n, q, epsilon, p } => {
            let sel = match (FamilySel::parse(family), epsilon) {
                (Ok(FamilySel::Linear), Some(-1)) => Ok(FamilySel::Unitary),
                (other, _) => other,
            };
            match sel.and_then(|sel| explain(&sel, *n, *q, *p)) {
                Ok(text) => {
                    print!("{text}");
                    Ok(())
                }
                Err(e) => Err(e),
            }
        }
        Cmd::Tables => {
            println!("# generic orders\n{GENERIC_ORDERS_TABLE}");
            println!("# relative Weyl groups\n{REFLECTION_TABLE}");
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
