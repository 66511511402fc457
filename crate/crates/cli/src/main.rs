//! `gwverify`: exact checks of Gromov-Witten identities from the command line.
//!
//! Exit codes: 0 pass, 1 an expectation failed, 2 usage or parse error, 3 internal error.

mod report;

use std::io::Write;
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use gwverify::chern_geometry::{hypersurface, projective_space, ChernData};
use gwverify::exact_arith::parse_rational;
use gwverify::hodge_oracle::{HodgeMonomial, HodgeOracle, RubberKey};
use gwverify::localization_engine::{
    builtin, evaluate_problem, load_problem_file, LocalizationError, LocalizationProblem, LocusOutcome, BUILTINS,
};
use gwverify::psi_recursion::psi_intersect;
use gwverify::selftest;
use gwverify::sum_formula::{
    assemble_example, enumerate_graphs, surviving_graphs, thm1_verdict, vir_dim, Context, DeltaSpec,
    ExampleOneInput, FilterRegime, GraphConstraints, GwSetting, SumError,
};
use gwverify::{DataSource, DeltaPoly, GenusOneInsertion, Rational, WeightPoint};
use thiserror::Error;

use report::{Report, Status};

#[derive(Debug, Parser)]
#[command(name = "gwverify", version, about = "Exact verification of absolute vs relative Gromov-Witten identities")]
struct Cli {
    /// Emit the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Data root (overrides GWVERIFY_DATA_DIR; default is the embedded copy)
    #[arg(long, global = true, value_name = "DIR")]
    data_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pure psi intersection number on M(g,n)
    Psi {
        #[arg(long)]
        g: u32,
        /// Comma-separated psi exponents, one per marked point
        #[arg(long, value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
        #[arg(long, value_name = "P/Q", allow_hyphen_values = true)]
        expect: Option<String>,
    },
    /// Hodge integral on M(g,n), or on the rubber space with --rubber
    Hodge {
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',')]
        psi: Vec<u32>,
        /// Exponents of lambda_1..lambda_g (missing trailing ones are 0)
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<u32>,
        #[arg(long)]
        rubber: bool,
        /// Target psi exponent on the rubber space
        #[arg(long, default_value_t = 0, requires = "rubber")]
        psi_inf: u32,
        #[arg(long, value_name = "P/Q", allow_hyphen_values = true)]
        expect: Option<String>,
    },
    /// Chern data of P^n and of a hypersurface in it
    Chern {
        /// Ambient space, e.g. P4
        #[arg(long)]
        space: String,
        /// Hypersurface degree, or `d` for symbolic
        #[arg(long)]
        hypersurface: Option<String>,
        /// Also list every Chern number of the hypersurface
        #[arg(long)]
        report: bool,
    },
    /// Genus 1 degree 0 invariants: absolute, relative and the bundle correction
    Gw10 {
        #[arg(long = "X", value_name = "Pn")]
        x: String,
        /// Degree of the hypersurface V (or `d`)
        #[arg(long = "V", value_name = "DEGREE")]
        v: String,
        /// `j` or `alpha:k` for alpha = k times the hyperplane class
        #[arg(long, default_value = "j")]
        insertion: String,
    },
    /// Evaluate a fixed-locus diagram file
    Localize(LocalizeArgs),
    /// Degeneration graphs of the worked examples
    Graphs {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        example: u8,
        #[arg(long, default_value_t = 1)]
        delta: u32,
        /// List every graph before filtering
        #[arg(long, conflicts_with = "surviving")]
        all: bool,
        /// List only graphs that can contribute (default)
        #[arg(long)]
        surviving: bool,
    },
    /// Whether absolute and relative invariants must agree for hollow V
    Thm1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        g: u32,
        /// Primary insertions only (no class pulled back from M(g,k))
        #[arg(long)]
        primary: bool,
        #[arg(long = "A", value_enum, default_value_t = Degree::Nonzero)]
        a: Degree,
    },
    /// Virtual dimensions of the absolute and relative moduli spaces
    Dim {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// <c1(X), A>
        #[arg(long, allow_hyphen_values = true)]
        c1a: i64,
        /// A.V
        #[arg(long, default_value_t = 0)]
        av: u32,
        /// Contact orders (default all ones)
        #[arg(long, value_delimiter = ',')]
        contacts: Vec<u32>,
    },
    /// Assemble and check one of the three worked identities
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        example: u8,
        #[arg(long, conflicts_with = "symbolic", allow_hyphen_values = true)]
        delta: Option<i64>,
        #[arg(long)]
        symbolic: bool,
        /// Ambient space for example 1
        #[arg(long, default_value = "P4")]
        space: String,
        /// Insertion for example 1: `j` or `alpha:k`
        #[arg(long, default_value = "j")]
        insertion: String,
    },
    /// Run the full acceptance suite
    Selftest,
}

#[derive(Debug, Args)]
#[group(skip)]
#[command(group(ArgGroup::new("problem").required(true).args(["config", "builtin", "list"])))]
struct LocalizeArgs {
    /// Diagram file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Shipped diagram by name
    #[arg(long)]
    builtin: Option<String>,
    /// List the shipped diagrams
    #[arg(long)]
    list: bool,
    #[arg(long, value_name = "P/Q", allow_hyphen_values = true)]
    expect: Option<String>,
    /// Evaluate every contribution at integer weights a1,a2
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    eval: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Degree {
    Zero,
    Nonzero,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

macro_rules! internal {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Internal(e.to_string())
            }
        }
    )*};
}

internal!(
    gwverify::DataError,
    gwverify::HodgeError,
    gwverify::PsiError,
    gwverify::ChernError,
    gwverify::RingError,
    SumError
);

impl From<LocalizationError> for CliError {
    fn from(e: LocalizationError) -> Self {
        CliError::Internal(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn rational_arg(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| usage(format!("--expect: {e}")))
}

fn space_arg(s: &str) -> Result<ChernData, CliError> {
    let n: usize = s
        .strip_prefix('P')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| usage(format!("expected a projective space like P4, got {s:?}")))?;
    projective_space(n).map_err(|e| usage(e.to_string()))
}

fn delta_arg(s: &str) -> Result<DeltaSpec, CliError> {
    match s {
        "d" | "delta" | "symbolic" => Ok(DeltaSpec::Symbolic),
        _ => s
            .parse()
            .map(DeltaSpec::Value)
            .map_err(|_| usage(format!("expected a degree or `d`, got {s:?}"))),
    }
}

fn insertion_arg(s: &str) -> Result<GenusOneInsertion, CliError> {
    if s == "j" {
        return Ok(GenusOneInsertion::DmPoint);
    }
    let k = s
        .strip_prefix("alpha:")
        .or(if s == "alpha" { Some("1") } else { None })
        .ok_or_else(|| usage(format!("insertion must be `j` or `alpha:k`, got {s:?}")))?;
    let k = parse_rational(k).map_err(|e| usage(format!("--insertion: {e}")))?;
    Ok(GenusOneInsertion::Divisor(DeltaPoly::constant(k)))
}

fn expectation(r: &mut Report, label: &str, got: &Rational, expect: &Option<String>) -> Result<(), CliError> {
    match expect {
        Some(e) => {
            let want = rational_arg(e)?;
            r.expect(label, got, want);
        }
        None => {
            r.value(label, got);
        }
    }
    Ok(())
}

fn source(cli: &Cli) -> DataSource {
    match &cli.data_dir {
        Some(d) => DataSource::dir(d),
        None => DataSource::from_env(),
    }
}

fn list(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn run(cli: &Cli, command: &str) -> Result<Report, CliError> {
    let mut r = Report::new(command);
    let src = source(cli);
    match &cli.command {
        Command::Psi { g, exponents, expect } => {
            let v = psi_intersect(*g, exponents).map_err(|e| usage(e.to_string()))?;
            expectation(&mut r, &format!("<psi^({})>_{{{g},{}}}", list(exponents), exponents.len()), &v, expect)?;
        }
        Command::Hodge {
            g,
            psi,
            lambda,
            rubber,
            psi_inf,
            expect,
        } => {
            let mut lam = lambda.clone();
            if lam.len() > *g as usize {
                return Err(usage(format!("at most {g} lambda exponents in genus {g}")));
            }
            lam.resize(*g as usize, 0);
            let oracle = HodgeOracle::load(&src)?;
            let (label, v) = if *rubber {
                let key = RubberKey::new(*g, *psi_inf, &lam);
                (format!("rubber {key}"), oracle.rubber(&key).map_err(|e| usage(e.to_string()))?)
            } else {
                let m = HodgeMonomial::new(*g, psi, &lam);
                (m.to_string(), oracle.intersect(&m).map_err(|e| usage(e.to_string()))?)
            };
            expectation(&mut r, &label, &v, expect)?;
        }
        Command::Chern {
            space,
            hypersurface: hyp,
            report,
        } => {
            let x = space_arg(space)?;
            chern_lines(&mut r, &x);
            if let Some(d) = hyp {
                let delta = delta_arg(d)?;
                let v = hypersurface(x.dim(), &delta.poly()).map_err(|e| usage(e.to_string()))?;
                chern_lines(&mut r, &v);
                if *report {
                    for ks in partitions(v.dim()) {
                        let label = ks.iter().map(|k| format!("c{k}")).collect::<Vec<_>>().join(" ");
                        r.value(format!("<{label}, {}>", v.name()), v.chern_number(&ks));
                    }
                    let adj = gwverify::chern_geometry::adjunction_holds(&x, &v)?;
                    r.check("adjunction c(V) = c(X)|V / (1 + V)", adj, v.name().to_string());
                }
            }
        }
        Command::Gw10 { x, v, insertion } => {
            let n = space_arg(x)?.dim();
            let delta = delta_arg(v)?;
            let input = ExampleOneInput {
                n,
                insertion: insertion_arg(insertion)?,
            };
            let ctx = Context::load(src)?;
            example_report(&mut r, assemble_example(&ctx, 1, delta, &input).map_err(sum_usage)?);
        }
        Command::Localize(args) => localize(&mut r, &src, args)?,
        Command::Graphs {
            example,
            delta,
            all,
            surviving: _,
        } => graphs(&mut r, *example, *delta, *all)?,
        Command::Thm1 { n, g, primary, a } => {
            let s = GwSetting {
                n: *n,
                g: *g,
                k: 0,
                a_dot_v: 0,
                c1_a: 0,
                a_is_zero: *a == Degree::Zero,
                kappa_trivial: *primary,
            };
            r.value("verdict", thm1_verdict(&s));
        }
        Command::Dim {
            n,
            g,
            k,
            c1a,
            av,
            contacts,
        } => {
            let s = GwSetting {
                n: *n,
                g: *g,
                k: *k,
                a_dot_v: *av,
                c1_a: *c1a,
                a_is_zero: *av == 0 && *c1a == 0,
                kappa_trivial: true,
            };
            let contacts = if contacts.is_empty() {
                vec![1; *av as usize]
            } else {
                contacts.clone()
            };
            r.value("absolute real dimension", vir_dim(&s, None).map_err(sum_usage)?);
            r.value(
                format!("relative real dimension, contacts ({})", list(&contacts)),
                vir_dim(&s, Some(&contacts)).map_err(sum_usage)?,
            );
        }
        Command::Verify {
            example,
            delta,
            symbolic,
            space,
            insertion,
        } => {
            let d = match (delta, symbolic) {
                (_, true) => DeltaSpec::Symbolic,
                (Some(d), false) => DeltaSpec::Value(*d),
                (None, false) => DeltaSpec::Value(1),
            };
            let input = ExampleOneInput {
                n: space_arg(space)?.dim(),
                insertion: insertion_arg(insertion)?,
            };
            let ctx = Context::load(src)?;
            example_report(&mut r, assemble_example(&ctx, *example, d, &input).map_err(sum_usage)?);
        }
        Command::Selftest => {
            let ctx = Context::load(src)?;
            for c in selftest::run(&ctx) {
                r.check(format!("[{:>2}] {}", c.id, c.title), c.passed, c.detail);
            }
        }
    }
    Ok(r)
}

/// Out-of-range inputs are the caller's fault; everything else is internal.
fn sum_usage(e: SumError) -> CliError {
    match e {
        SumError::ContactMismatch { .. }
        | SumError::ResourceBound(_)
        | SumError::Unsupported(_)
        | SumError::UnknownExample(_)
        | SumError::BadDelta(_) => usage(e.to_string()),
        SumError::Chern(c) => usage(c.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

fn chern_lines(r: &mut Report, x: &ChernData) {
    for k in 1..=x.dim() {
        let c = x.c(k);
        let mono = if k == 1 { "x".to_string() } else { format!("x^{k}") };
        let shown = match c.as_constant() {
            Some(v) if v == Rational::from_integer(0.into()) => "0".to_string(),
            Some(v) => format!("{v}*{mono}"),
            None => format!("({c})*{mono}"),
        };
        r.value(format!("c{k}({})", x.name()), shown);
    }
    r.value(format!("degree of {}", x.name()), x.degree());
    r.value(format!("chi({})", x.name()), x.euler_char());
}

/// Partitions of `n` as lists of parts, largest part last.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, min: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for p in min..=n {
            acc.push(p);
            go(n - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

fn example_report(r: &mut Report, v: gwverify::VerificationReport) {
    r.value("example", format!("{}: {}", v.example, v.title));
    r.value("delta", v.delta);
    r.cited("contributing graphs", v.graphs.len(), v.graphs_citation.clone());
    for (i, g) in v.graphs.iter().enumerate() {
        r.value(format!("  graph {}", i + 1), g);
    }
    for t in &v.terms {
        r.cited(&t.name, &t.value, &t.citation);
    }
    for c in &v.checks {
        r.check(&c.name, c.passed, &c.detail);
    }
}

fn load_localization(src: &DataSource, args: &LocalizeArgs) -> Result<LocalizationProblem, CliError> {
    let loaded = match (&args.config, &args.builtin) {
        (Some(path), _) => load_problem_file(path),
        (None, Some(name)) => builtin(src, name),
        (None, None) => return Err(usage("one of --config or --builtin is required")),
    };
    // a bad user file is a parse error; a bad shipped file is internal
    loaded.map_err(|e| match e {
        LocalizationError::UnknownBuiltin(_) => usage(e.to_string()),
        _ if args.config.is_some() => usage(e.to_string()),
        other => other.into(),
    })
}

fn localize(r: &mut Report, src: &DataSource, args: &LocalizeArgs) -> Result<(), CliError> {
    if args.list {
        for (name, file) in BUILTINS {
            r.value(*name, file);
        }
        return Ok(());
    }
    let problem = load_localization(src, args)?;
    let want = args.expect.as_deref().map(rational_arg).transpose()?;
    if !args.eval.is_empty() && args.eval.len() != 2 {
        return Err(usage("--eval takes two integer weights a1,a2"));
    }
    let oracle = HodgeOracle::load(src)?;
    r.value("problem", &problem.label);
    let eval = match evaluate_problem(&problem, &oracle) {
        Ok(e) => e,
        Err(LocalizationError::ExpectationMismatch { what, expected, got }) => {
            r.expect(what, got, expected);
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    for (label, o) in &eval.loci {
        match o {
            LocusOutcome::Contributes(v) => r.value(format!("locus {label}"), v),
            LocusOutcome::Vanishes(why) => r.value(format!("locus {label}"), format!("0 ({why})")),
        };
    }
    if problem.symmetry_multiplier != Rational::from_integer(1.into()) {
        r.value("symmetry multiplier", &problem.symmetry_multiplier);
    }
    if problem.weight_swap {
        r.value("weight swap", "sum is S + S(a1 <-> a2)");
    }
    match &want {
        Some(w) => r.expect("total", &eval.total, w),
        None => match &problem.expected {
            Some(w) => r.expect("total", &eval.total, w),
            None => r.value("total", &eval.total),
        },
    };
    if let [a1, a2] = args.eval[..] {
        let points = [WeightPoint::ints(a1, a2), WeightPoint::ints(a2, a1)];
        let used = if problem.weight_swap { &points[..] } else { &points[..1] };
        let mut sum = Rational::from_integer(0.into());
        for (label, o) in &eval.loci {
            if let LocusOutcome::Contributes(v) = o {
                for (i, w) in used.iter().enumerate() {
                    let x = v
                        .eval(w)
                        .map_err(|_| usage(format!("weights ({a1},{a2}) hit a pole of locus {label}")))?;
                    let tag = if i == 0 { "" } else { " (swapped)" };
                    r.value(format!("locus {label} at ({a1},{a2}){tag}"), &x);
                    sum += x;
                }
            }
        }
        r.expect(
            format!("total from weights ({a1},{a2})"),
            sum * &problem.symmetry_multiplier,
            &eval.total,
        );
    }
    Ok(())
}

fn graphs(r: &mut Report, example: u8, delta: u32, all: bool) -> Result<(), CliError> {
    if delta == 0 {
        return Err(usage("--delta must be at least 1"));
    }
    let (g, comps, k, cap, regime, want) = match example {
        2 => (
            2,
            vec![1; delta as usize],
            2,
            2,
            FilterRegime {
                n: 1,
                kappa_trivial: false,
                g_top: 2,
            },
            1 + delta as usize,
        ),
        _ => (
            3,
            vec![delta],
            1,
            3,
            FilterRegime {
                n: 4,
                kappa_trivial: true,
                g_top: 3,
            },
            2,
        ),
    };
    let c = GraphConstraints {
        x_side_degree_one: true,
        marked_points_on_x: true,
        genus_cap_v: cap,
    };
    let every = enumerate_graphs(g, &comps, k, c).map_err(sum_usage)?;
    let kept = surviving_graphs(&every, regime);
    r.value("graphs before filtering", every.len());
    let shown = if all { &every } else { &kept };
    for (i, gr) in shown.iter().enumerate() {
        r.value(format!("graph {}", i + 1), gr);
    }
    r.expect("surviving graphs", kept.len(), want);
    Ok(())
}

fn command_echo() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut s = String::from("gwverify");
    for a in args {
        s.push(' ');
        s.push_str(&a);
    }
    s
}

fn emit(report: &Report, json: bool) {
    let mut out = std::io::stdout().lock();
    let text = if json { report.render_json() } else { report.to_string() };
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command = command_echo();
    panic::set_hook(Box::new(|_| {}));
    let outcome = panic::catch_unwind(|| run(&cli, &command));
    let report = match outcome {
        Ok(Ok(r)) => r,
        Ok(Err(CliError::Usage(m))) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Ok(Err(CliError::Internal(m))) => Report::error(&command, m),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown".into());
            Report::error(&command, format!("internal failure: {msg}"))
        }
    };
    if report.status == Status::Error {
        eprintln!("ERROR: {}", report.error.as_deref().unwrap_or(""));
    }
    emit(&report, cli.json);
    ExitCode::from(report.status.exit_code())
}
