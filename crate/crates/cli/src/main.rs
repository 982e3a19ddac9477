//! Command-line surface for exact Grassmann-algebra identity computations.
//!
//! Exit codes: 0 member, 1 non-member, 2 parse error, 3 unsupported
//! parameters, 4 internal error.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use grasspi_core::canonical::canonicalize;
use grasspi_core::decide::{cp_membership, t_membership, Refutation, Verdict};
use grasspi_core::field::FieldConfig;
use grasspi_core::freealg::FreePoly;
use grasspi_core::selftest::{run_all, Level};

use grasspi_cli::{parser, report};

#[derive(Parser)]
#[command(
    name = "grasspi",
    about = "Exact identity and central-polynomial decisions for the unitary Grassmann algebra over a finite field",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SelftestLevel {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership in the ideal of identities T(G).
    CheckIdentity(DecisionArgs),
    /// Decide membership in the space of central polynomials CP(G).
    CheckCentral(DecisionArgs),
    /// Print the canonical form (descending tails, unit component last).
    Canonicalize(DecisionArgs),
    /// Print the refuting substitution and its evaluated value, if any.
    Witness(WitnessArgs),
    /// Run the built-in verification battery.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: SelftestLevel,
        /// Battery seed; the GRASSPI_SEED environment variable overrides the
        /// default.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(clap::Args)]
struct DecisionArgs {
    /// Field characteristic (a prime).
    #[arg(long)]
    p: u64,
    /// Field size, a power of p (built-in reduction polynomials cover q <= 49).
    #[arg(long)]
    q: u64,
    /// Polynomial, e.g. `x1^9 - x1^3` or `2*x1*[x2,x3]*x2^2`.
    #[arg(long)]
    expr: String,
    /// Emit a machine-readable report on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct WitnessArgs {
    #[command(flatten)]
    common: DecisionArgs,
    /// Refute centrality instead of identity membership.
    #[arg(long)]
    central: bool,
}

const EXIT_MEMBER: u8 = 0;
const EXIT_NON_MEMBER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::CheckIdentity(args) => decision(&args, false, false),
        Command::CheckCentral(args) => decision(&args, true, false),
        Command::Canonicalize(args) => canonical_only(&args),
        Command::Witness(args) => decision(&args.common, args.central, true),
        Command::Selftest { level, seed } => selftest(level, seed),
    };
    ExitCode::from(code)
}

fn setup(args: &DecisionArgs) -> Result<(FieldConfig, FreePoly, f64), u8> {
    let cfg = match FieldConfig::for_pq(args.p, args.q) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("unsupported parameters: {e}");
            return Err(EXIT_UNSUPPORTED);
        }
    };
    let t0 = Instant::now();
    let poly = match parser::parse_poly(&args.expr, &cfg) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return Err(EXIT_PARSE);
        }
    };
    Ok((cfg, poly, t0.elapsed().as_secs_f64() * 1e3))
}

fn decision(args: &DecisionArgs, central: bool, witness_mode: bool) -> u8 {
    let (cfg, poly, parse_ms) = match setup(args) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let t0 = Instant::now();
    let verdict = if central { cp_membership(&poly) } else { t_membership(&poly) };
    let canonical = canonicalize(&poly);
    let decide_ms = t0.elapsed().as_secs_f64() * 1e3;
    let (verdict, canonical) = match (verdict, canonical) {
        (Ok(v), Ok(c)) => (v, c),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("internal error: {e}");
            return EXIT_INTERNAL;
        }
    };

    let set_name = if central { "CP(G)" } else { "T(G)" };
    if args.json {
        let (witness, value) = match verdict.refutation() {
            Some(r) => {
                let (w, v) = report::encode_refutation(r);
                (Some(w), Some(v))
            }
            None => (None, None),
        };
        let rep = report::Report {
            params: report::Params { p: args.p, q: args.q, expr: args.expr.clone() },
            verdict: if verdict.is_member() { "member" } else { "non_member" }.into(),
            canonical_form: report::encode_canonical(&canonical),
            witness,
            value,
            timings: report::Timings { parse_ms, decide_ms },
        };
        println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
    } else {
        match &verdict {
            Verdict::Member => println!("{}: member of {set_name}", args.expr),
            Verdict::NonMember(r) => {
                println!("{}: NOT a member of {set_name}", args.expr);
                print_refutation(r, central, &cfg);
            }
        }
        if witness_mode && verdict.is_member() {
            println!("no witness: the polynomial is a member");
        }
    }
    if verdict.is_member() {
        EXIT_MEMBER
    } else {
        EXIT_NON_MEMBER
    }
}

fn print_refutation(r: &Refutation, central: bool, _cfg: &FieldConfig) {
    println!("witness in G({}):", r.witness.generator_bound());
    for (v, g) in r.witness.images() {
        println!("  x{v} -> {g}");
    }
    if central {
        println!("commutator with a fresh variable evaluates to {}", r.value);
    } else {
        println!("evaluates to {}", r.value);
    }
}

fn canonical_only(args: &DecisionArgs) -> u8 {
    let (_cfg, poly, parse_ms) = match setup(args) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let t0 = Instant::now();
    let canonical = match canonicalize(&poly) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("internal error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let decide_ms = t0.elapsed().as_secs_f64() * 1e3;
    if args.json {
        let rep = report::Report {
            params: report::Params { p: args.p, q: args.q, expr: args.expr.clone() },
            verdict: if canonical.is_zero() { "member" } else { "non_member" }.into(),
            canonical_form: report::encode_canonical(&canonical),
            witness: None,
            value: None,
            timings: report::Timings { parse_ms, decide_ms },
        };
        println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
    } else {
        println!("{canonical}");
    }
    if canonical.is_zero() {
        EXIT_MEMBER
    } else {
        EXIT_NON_MEMBER
    }
}

fn selftest(level: SelftestLevel, seed: Option<u64>) -> u8 {
    let seed = seed
        .or_else(|| std::env::var("GRASSPI_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0xC0FFEE);
    let level = match level {
        SelftestLevel::Quick => Level::Quick,
        SelftestLevel::Full => Level::Full,
    };
    let results = run_all(level, seed);
    let mut all_passed = true;
    for r in &results {
        println!("{}", r.line());
        all_passed &= r.passed;
    }
    if all_passed {
        println!("selftest: all {} criteria passed", results.len());
        EXIT_MEMBER
    } else {
        println!("selftest: FAILURES present");
        EXIT_INTERNAL
    }
}
