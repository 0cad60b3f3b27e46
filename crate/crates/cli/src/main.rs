//! Command-line front end for the graph-polynomial engine.
//!
//! Reads a graph in edge-list format (first non-comment line `n`, then one
//! `u v` pair per line, 1-based, `#` comments) from a file or standard
//! input, runs the requested computation, and prints the result on
//! standard output.  Diagnostics go to standard error.  Exit codes:
//! 0 success, 1 parse or argument error, 2 capacity exceeded, 3 internal
//! consistency failure.
//!
//! The printed bytes depend only on the input graph and the requested
//! command: `--threads` and `--algorithm` never change the output of the
//! table commands, which the integration tests verify byte for byte.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use tuttekit::oracle;
use tuttekit::{
    chromatic_polynomial, compute_tutte, consistency_check, cover_table, evaluate_z_with_weights,
    reliability, Algorithm, CoverMode, Digraph, Error, Fp, Multigraph, RunOptions, TutteTable,
};

#[derive(Parser)]
#[command(name = "tuttekit", version, about = "Exact Tutte and cover polynomials of small graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full Tutte-polynomial coefficient table of a multigraph.
    Tutte(CommonOpts),
    /// Cover-polynomial coefficient table of a directed multigraph.
    Cover(CommonOpts),
    /// Number of spanning trees.
    Tau(CommonOpts),
    /// Number of vertex subsets that induce a connected subgraph.
    Sigma(CommonOpts),
    /// Exact evaluation of the Tutte polynomial at a rational point.
    Eval(EvalOpts),
    /// Chromatic polynomial coefficients (ascending powers).
    Chromatic(CommonOpts),
    /// All-terminal reliability for an edge survival probability.
    Reliability(ReliabilityOpts),
    /// Potts partition function at unit edge weights.
    Potts(PottsOpts),
}

#[derive(Args)]
struct CommonOpts {
    /// Input file ("-" or absent reads standard input).
    input: Option<PathBuf>,
    /// auto | dense | polyspace | split:S | connected | recursion
    #[arg(long, default_value = "auto")]
    algorithm: String,
    /// Split size S for --algorithm split.
    #[arg(long, value_name = "S")]
    split: Option<usize>,
    /// Recompute the answer with an independent brute-force oracle.
    #[arg(long)]
    oracle_check: bool,
    /// Emit JSON instead of plain text.
    #[arg(long)]
    json: bool,
    /// Worker threads for the modular evaluation grid.
    #[arg(long, value_name = "N", default_value_t = 1)]
    threads: usize,
    /// Memory budget in bytes for the auto algorithm policy.
    #[arg(long, value_name = "BYTES", default_value_t = 4_294_967_296)]
    memory_budget: u64,
}

#[derive(Args)]
struct EvalOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Evaluation point, two rationals such as 3 -1/2.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true, required = true)]
    eval: Vec<String>,
}

#[derive(Args)]
struct ReliabilityOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Edge survival probability in (0,1), as a rational such as 9/10.
    #[arg(long, value_name = "P", required = true)]
    p: String,
}

#[derive(Args)]
struct PottsOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Number of spin states (a positive integer).
    #[arg(long, value_name = "Q", required = true)]
    q: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are successes; everything else is usage.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse { .. } | Error::Invalid(_) => 1,
                Error::Capacity(_) => 2,
                Error::Internal(_) => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<String, Error> {
    match command {
        Command::Tutte(opts) => {
            let g = multigraph(&opts)?;
            let t = compute_tutte(&g, &run_options(&opts, g.n())?)?;
            if opts.oracle_check {
                tutte_oracle_check(&g, &t)?;
            }
            let report = consistency_check(&t, &g)?;
            let mut out = String::new();
            if opts.json {
                write!(out, "{{\"n\":{},\"m\":{},\"components\":{},", t.n(), t.m(), t.components())
                    .unwrap();
                out.push_str("\"coefficients\":[");
                for (idx, (i, j, v)) in t.iter().enumerate() {
                    if idx > 0 {
                        out.push(',');
                    }
                    write!(out, "[{i},{j},\"{v}\"]").unwrap();
                }
                write!(
                    out,
                    "],\"checks\":{{\"sum_eq_tau\":{},\"eval22_eq_2m\":{}}}}}\n",
                    report.sum_eq_tau, report.eval22_eq_2m
                )
                .unwrap();
            } else {
                for (i, j, v) in t.iter() {
                    writeln!(out, "{i} {j} {v}").unwrap();
                }
                writeln!(
                    out,
                    "check sum_eq_tau {} {}",
                    if report.sum_eq_tau { "ok" } else { "FAIL" },
                    report.tau
                )
                .unwrap();
                writeln!(
                    out,
                    "check eval22_eq_2m {} {}",
                    if report.eval22_eq_2m { "ok" } else { "FAIL" },
                    report.two_m
                )
                .unwrap();
            }
            Ok(out)
        }
        Command::Cover(opts) => {
            let d = digraph(&opts)?;
            let t = cover_table(&d, cover_mode(&opts)?)?;
            if opts.oracle_check {
                let reference = oracle::cover_bruteforce(&d)?;
                if reference != t {
                    return Err(Error::Internal(
                        "the brute-force cover oracle disagrees with the computed table".into(),
                    ));
                }
            }
            let mut out = String::new();
            if opts.json {
                write!(out, "{{\"n\":{},\"m\":{},\"cover\":[", t.n(), t.m()).unwrap();
                for (idx, (i, j, v)) in t.iter().enumerate() {
                    if idx > 0 {
                        out.push(',');
                    }
                    write!(out, "[{i},{j},\"{v}\"]").unwrap();
                }
                out.push_str("]}\n");
            } else {
                for (i, j, v) in t.iter() {
                    writeln!(out, "{i} {j} {v}").unwrap();
                }
            }
            Ok(out)
        }
        Command::Tau(opts) => {
            reject_oracle_flag(&opts)?;
            let g = multigraph(&opts)?;
            Ok(render_value(&opts, &g.spanning_tree_count().to_string()))
        }
        Command::Sigma(opts) => {
            reject_oracle_flag(&opts)?;
            let g = multigraph(&opts)?;
            Ok(render_value(&opts, &g.count_connected_sets().to_string()))
        }
        Command::Eval(eval_opts) => {
            let opts = eval_opts.common;
            reject_oracle_flag(&opts)?;
            let x = parse_rational(&eval_opts.eval[0])?;
            let y = parse_rational(&eval_opts.eval[1])?;
            let g = multigraph(&opts)?;
            let t = compute_tutte(&g, &run_options(&opts, g.n())?)?;
            Ok(render_value(&opts, &t.evaluate(&x, &y).to_string()))
        }
        Command::Chromatic(opts) => {
            reject_oracle_flag(&opts)?;
            let g = multigraph(&opts)?;
            let t = compute_tutte(&g, &run_options(&opts, g.n())?)?;
            let coeffs = chromatic_polynomial(&t);
            let mut out = String::new();
            if opts.json {
                out.push_str("{\"coefficients\":[");
                for (k, c) in coeffs.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    write!(out, "\"{c}\"").unwrap();
                }
                out.push_str("]}\n");
            } else {
                for (k, c) in coeffs.iter().enumerate() {
                    writeln!(out, "{k} {c}").unwrap();
                }
            }
            Ok(out)
        }
        Command::Reliability(rel_opts) => {
            let opts = rel_opts.common;
            reject_oracle_flag(&opts)?;
            let p = parse_rational(&rel_opts.p)?;
            let g = multigraph(&opts)?;
            let t = compute_tutte(&g, &run_options(&opts, g.n())?)?;
            Ok(render_value(&opts, &reliability(&t, &p)?.to_string()))
        }
        Command::Potts(potts_opts) => {
            let opts = potts_opts.common;
            let q = potts_opts.q;
            let g = multigraph(&opts)?;
            let weights = vec![BigRational::one(); g.m()];
            let z = evaluate_z_with_weights(&g, q, &weights, &run_options(&opts, g.n())?)?;
            if opts.oracle_check {
                potts_oracle_check(&g, q, &z)?;
            }
            Ok(render_value(&opts, &z.to_string()))
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Error> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display()))),
        _ => std::io::read_to_string(std::io::stdin())
            .map_err(|e| Error::Invalid(format!("cannot read standard input: {e}"))),
    }?;
    Ok(text)
}

fn multigraph(opts: &CommonOpts) -> Result<Multigraph, Error> {
    Multigraph::parse_edge_list(&read_input(&opts.input)?)
}

fn digraph(opts: &CommonOpts) -> Result<Digraph, Error> {
    Digraph::parse_edge_list(&read_input(&opts.input)?)
}

fn run_options(opts: &CommonOpts, n: usize) -> Result<RunOptions, Error> {
    if opts.threads == 0 {
        return Err(Error::Invalid("--threads must be at least 1".into()));
    }
    let algorithm = match opts.algorithm.as_str() {
        "auto" => Algorithm::Auto,
        "dense" => Algorithm::Dense,
        "polyspace" => Algorithm::Direct,
        "connected" => Algorithm::Connected,
        "recursion" => Algorithm::Recursion,
        other => {
            let s = match (other.strip_prefix("split:"), other == "split") {
                (Some(text), _) => {
                    let parsed: usize = text.parse().map_err(|_| {
                        Error::Invalid(format!("bad split size in --algorithm {other}"))
                    })?;
                    if opts.split.is_some_and(|s| s != parsed) {
                        return Err(Error::Invalid(
                            "--split disagrees with the size in --algorithm".into(),
                        ));
                    }
                    parsed
                }
                (None, true) => opts.split.ok_or_else(|| {
                    Error::Invalid("--algorithm split needs --split S or split:S".into())
                })?,
                (None, false) => {
                    return Err(Error::Invalid(format!("unknown algorithm '{other}'")))
                }
            };
            if s > n {
                return Err(Error::Invalid(format!(
                    "split size {s} exceeds the vertex count {n}"
                )));
            }
            Algorithm::Split(s)
        }
    };
    if opts.split.is_some() && !matches!(algorithm, Algorithm::Split(_)) {
        return Err(Error::Invalid("--split requires --algorithm split".into()));
    }
    Ok(RunOptions { algorithm, threads: opts.threads, memory_budget: opts.memory_budget })
}

fn cover_mode(opts: &CommonOpts) -> Result<CoverMode, Error> {
    if opts.split.is_some() {
        return Err(Error::Invalid("--split requires --algorithm split".into()));
    }
    match opts.algorithm.as_str() {
        "auto" | "dense" => Ok(CoverMode::Fast),
        "polyspace" => Ok(CoverMode::PolySpace),
        other => Err(Error::Invalid(format!(
            "the cover command supports auto, dense, or polyspace, not '{other}'"
        ))),
    }
}

fn reject_oracle_flag(opts: &CommonOpts) -> Result<(), Error> {
    if opts.oracle_check {
        return Err(Error::Invalid(
            "--oracle-check is available for the tutte, cover, and potts commands".into(),
        ));
    }
    Ok(())
}

fn render_value(opts: &CommonOpts, value: &str) -> String {
    if opts.json {
        format!("{{\"value\":\"{value}\"}}\n")
    } else {
        format!("{value}\n")
    }
}

/// "p", "-p", or "p/q" with a nonzero q.
fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let bad = || Error::Invalid(format!("'{text}' is not a rational number"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(Error::Invalid(format!("'{text}' has a zero denominator")));
    }
    Ok(BigRational::new(num, den))
}

fn tutte_oracle_check(g: &Multigraph, t: &TutteTable) -> Result<(), Error> {
    let reference = if g.m() <= 22 {
        oracle::tutte_bruteforce(g)?
    } else {
        oracle::tutte_deletion_contraction(g)?
    };
    if &reference != t {
        return Err(Error::Internal(
            "the brute-force Tutte oracle disagrees with the computed table".into(),
        ));
    }
    Ok(())
}

fn potts_oracle_check(g: &Multigraph, q: u64, z: &BigRational) -> Result<(), Error> {
    let fp = Fp::new((1 << 62) - 57);
    let weights = vec![1u64; g.m()];
    let reference = if g.m() <= 25 {
        oracle::multivariate_z_bruteforce(g, &fp, q, &weights)?
    } else {
        oracle::potts_bruteforce(g, &fp, q, &weights)?
    };
    debug_assert!(z.is_integer());
    if fp.reduce_bigint(z.numer()) != reference {
        return Err(Error::Internal(
            "the brute-force spin oracle disagrees with the computed value".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common() -> CommonOpts {
        CommonOpts {
            input: None,
            algorithm: "auto".into(),
            split: None,
            oracle_check: false,
            json: false,
            threads: 1,
            memory_budget: 4 << 30,
        }
    }

    #[test]
    fn algorithm_strings_map_to_engine_choices() {
        let mut opts = common();
        assert_eq!(run_options(&opts, 8).unwrap().algorithm, Algorithm::Auto);
        opts.algorithm = "polyspace".into();
        assert_eq!(run_options(&opts, 8).unwrap().algorithm, Algorithm::Direct);
        opts.algorithm = "split:3".into();
        assert_eq!(run_options(&opts, 8).unwrap().algorithm, Algorithm::Split(3));
        opts.algorithm = "split".into();
        opts.split = Some(5);
        assert_eq!(run_options(&opts, 8).unwrap().algorithm, Algorithm::Split(5));
    }

    #[test]
    fn conflicting_or_unknown_algorithms_are_rejected() {
        let mut opts = common();
        opts.algorithm = "split:3".into();
        opts.split = Some(4);
        assert!(run_options(&opts, 8).is_err());
        opts.split = None;
        opts.algorithm = "split:9".into();
        assert!(run_options(&opts, 8).is_err());
        opts.algorithm = "quantum".into();
        assert!(run_options(&opts, 8).is_err());
        opts.algorithm = "dense".into();
        opts.split = Some(2);
        assert!(run_options(&opts, 8).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3").unwrap(), BigRational::from(BigInt::from(3)));
        assert_eq!(
            parse_rational("-4/6").unwrap(),
            BigRational::new(BigInt::from(-2), BigInt::from(3))
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
