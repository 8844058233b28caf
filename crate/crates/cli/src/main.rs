//! Deterministic command-line front end.
//!
//! Every result is one JSON object per line on stdout (`--pretty` opts into
//! indentation); human-readable diagnostics go to stderr. Exit codes are
//! frozen: 0 ok, 2 parse error, 3 precondition violation, 4 search or scan
//! bound exceeded, 5 internal error.

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use quaring::{
    carefree_constant, empirical_counts, multiply, represent_integer, survey, sweep_csv,
    three_square_decompose, watson_condition, DiagonalForm, Error, Quaternion, RingFilter,
    RingParams, SearchPolicy,
};

#[derive(Parser)]
#[command(
    name = "quaring",
    version,
    about = "Sums of three squares in integer quaternion rings, modular certificates, and density constants"
)]
struct Cli {
    /// Pretty-print JSON output
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an element of the square subgroup as a sum of three squares
    Decompose(DecomposeArgs),
    /// Solve x0^2 - a*y1^2 - b*y2^2 - ab*y3^2 = d exactly
    Represent(RepresentArgs),
    /// Proper modular representation certificates
    Modular(ModularArgs),
    /// Attempt decompositions across a box of rings and elements
    Survey(SurveyArgs),
    /// Density constants and exact pair counts
    Density(DensityArgs),
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
    /// Element as "x0,x1,x2,x3" (decimal integers, real part first)
    #[arg(long, allow_hyphen_values = true)]
    element: String,
    /// Inclusive bound for the x0 scan (default: |d| + ab + 100)
    #[arg(long)]
    max_x0: Option<i64>,
}

#[derive(Args)]
struct RepresentArgs {
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    /// Inclusive bound for the x0 scan (default: |d| + ab + 100)
    #[arg(long)]
    max_x0: Option<i64>,
}

#[derive(Args)]
#[command(group = ArgGroup::new("mode").required(true).multiple(false))]
struct ModularArgs {
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    /// Representation mod p^2 for this odd prime p dividing ab
    #[arg(long, group = "mode")]
    prime: Option<i64>,
    /// Representation mod 2^nu (the power of 2 in 2^4 a^2 b^2)
    #[arg(long, group = "mode")]
    two_adic: bool,
    /// Combined representation mod 2^4 a^2 b^2
    #[arg(long, group = "mode")]
    watson: bool,
}

#[derive(Args)]
struct SurveyArgs {
    #[arg(long)]
    max_a: i64,
    #[arg(long)]
    max_b: i64,
    #[arg(long)]
    max_coeff: i64,
    /// Worker threads; output is byte-identical for every setting
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
#[command(group = ArgGroup::new("dmode").required(true).multiple(false))]
struct DensityArgs {
    /// Evaluate the Euler product over primes up to this cutoff
    #[arg(long = "cutoff-p", alias = "cutoff-P", group = "dmode")]
    cutoff_p: Option<u64>,
    /// Exact pair counts up to this bound
    #[arg(long, group = "dmode")]
    empirical_x: Option<u32>,
    /// Comma-separated list of bounds; prints the CSV sweep table
    #[arg(long, group = "dmode")]
    sweep: Option<String>,
}

#[derive(Serialize)]
struct DecomposeOut {
    a: i64,
    b: i64,
    alpha: Quaternion,
    x: Quaternion,
    y: Quaternion,
    z: Quaternion,
    verified: bool,
}

#[derive(Serialize)]
struct ErrorOut<'a> {
    status: &'a str,
    kind: &'a str,
    error: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidRing { .. } => "invalid_ring",
        Error::Overflow => "overflow",
        Error::ParseQuaternion(_) => "parse_error",
        Error::InvalidForm(_) => "invalid_form",
        Error::NotOddPrime { .. } => "not_odd_prime",
        Error::HenselNotARoot { .. } => "hensel_not_a_root",
        Error::HenselDerivativeVanishes { .. } => "hensel_derivative_vanishes",
        Error::NotSquareFree { .. } => "not_square_free",
        Error::PrimeNotDividingAb { .. } => "prime_not_dividing_ab",
        Error::TheoremNotApplicable { .. } => "theorem_not_applicable",
        Error::DivisibleByFour { .. } => "divisible_by_four",
        Error::ModuliNotCoprime { .. } => "moduli_not_coprime",
        Error::ValueMismatch { .. } => "value_mismatch",
        Error::ImproperRepresentation => "improper_representation",
        Error::CongruenceFailed => "congruence_failed",
        Error::NotInSquareSubgroup => "not_in_square_subgroup",
        Error::SearchBoundExceeded { .. } => "search_bound_exceeded",
        Error::BudgetExceeded(_) => "budget_exceeded",
        Error::ZeroArgument => "zero_argument",
        Error::InvalidPolicy(_) => "invalid_policy",
        Error::InvalidCutoff(_) => "invalid_cutoff",
    }
}

/// Frozen exit-code map: 0 ok, 2 parse, 3 precondition, 4 bound exceeded,
/// 5 internal.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ParseQuaternion(_) => 2,
        Error::SearchBoundExceeded { .. } | Error::BudgetExceeded(_) => 4,
        Error::Overflow | Error::CongruenceFailed => 5,
        _ => 3,
    }
}

fn emit<T: Serialize>(value: &T, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("serialization is infallible for these types");
    println!("{text}");
}

fn policy_for(d: i64, ring: &RingParams, max_x0: Option<i64>) -> Result<SearchPolicy, Error> {
    match max_x0 {
        Some(bound) => SearchPolicy::failing(bound),
        None => Ok(SearchPolicy::default_for(d, ring)),
    }
}

fn run_decompose(args: &DecomposeArgs, pretty: bool) -> Result<(), Error> {
    let ring = RingParams::new(args.a, args.b)?;
    let alpha: Quaternion = args.element.parse()?;
    let policy = args.max_x0.map(SearchPolicy::failing).transpose()?;
    let triple = three_square_decompose(&alpha, &ring, policy.as_ref())?;

    // re-verify the certificate independently before printing
    let mut sum = [0i128; 4];
    for part in [triple.x(), triple.y(), triple.z()] {
        let sq = multiply(&part, &part, &ring)?;
        for (acc, c) in sum.iter_mut().zip(sq.components()) {
            *acc += c as i128;
        }
    }
    let verified = sum
        .iter()
        .zip(alpha.components())
        .all(|(&s, c)| s == c as i128);
    if !verified {
        return Err(Error::CongruenceFailed);
    }

    emit(
        &DecomposeOut {
            a: ring.a(),
            b: ring.b(),
            alpha,
            x: triple.x(),
            y: triple.y(),
            z: triple.z(),
            verified,
        },
        pretty,
    );
    Ok(())
}

fn run_represent(args: &RepresentArgs, pretty: bool) -> Result<(), Error> {
    let ring = RingParams::new(args.a, args.b)?;
    let policy = policy_for(args.d, &ring, args.max_x0)?;
    let rep = represent_integer(args.d, &ring, &policy)?;

    let form = DiagonalForm::from_ring(&ring)?;
    if form.eval(&rep.tuple())? != args.d as i128 {
        return Err(Error::CongruenceFailed);
    }
    emit(&rep, pretty);
    Ok(())
}

fn run_modular(args: &ModularArgs, pretty: bool) -> Result<(), Error> {
    let ring = RingParams::new(args.a, args.b)?;
    let rep = if let Some(p) = args.prime {
        quaring::proper_rep_mod_p2(args.d, p, &ring)?
    } else if args.two_adic {
        quaring::proper_rep_mod_2nu(args.d, &ring)?
    } else {
        watson_condition(args.d, &ring)?
    };

    rep.verify(&DiagonalForm::from_ring(&ring)?)?;
    emit(&rep, pretty);
    Ok(())
}

fn run_survey(args: &SurveyArgs, pretty: bool) -> Result<(), Error> {
    let items = survey(
        args.max_a,
        args.max_b,
        args.max_coeff,
        RingFilter::All,
        None,
        args.jobs,
    );
    for item in &items {
        if item.status == quaring::SurveyStatus::Ok {
            let ring = RingParams::new(item.a, item.b)?;
            let mut sum = [0i128; 4];
            for part in [item.x, item.y, item.z] {
                let part = part.expect("ok items carry a triple");
                let sq = multiply(&part, &part, &ring)?;
                for (acc, c) in sum.iter_mut().zip(sq.components()) {
                    *acc += c as i128;
                }
            }
            let ok = sum
                .iter()
                .zip(item.alpha.components())
                .all(|(&s, c)| s == c as i128);
            if !ok {
                return Err(Error::CongruenceFailed);
            }
        }
        emit(item, pretty);
    }
    Ok(())
}

fn run_density(args: &DensityArgs, pretty: bool) -> Result<(), Error> {
    if let Some(cutoff) = args.cutoff_p {
        let est = carefree_constant(cutoff)?;
        emit(&est, pretty);
    } else if let Some(x) = args.empirical_x {
        let counts = empirical_counts(x)?;
        emit(&counts, pretty);
    } else if let Some(spec) = &args.sweep {
        let mut xs = Vec::new();
        for part in spec.split(',') {
            let x: u32 = part
                .trim()
                .parse()
                .map_err(|_| Error::InvalidPolicy("sweep expects comma-separated integers"))?;
            xs.push(x);
        }
        print!("{}", sweep_csv(&xs)?);
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decompose(args) => run_decompose(args, cli.pretty),
        Command::Represent(args) => run_represent(args, cli.pretty),
        Command::Modular(args) => run_modular(args, cli.pretty),
        Command::Survey(args) => run_survey(args, cli.pretty),
        Command::Density(args) => run_density(args, cli.pretty),
    };

    if let Err(e) = result {
        emit(
            &ErrorOut {
                status: "error",
                kind: error_kind(&e),
                error: e.to_string(),
            },
            cli.pretty,
        );
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}
