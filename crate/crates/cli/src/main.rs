use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use poset_ramsey::bounds::table1;
use poset_ramsey::lattice::{layered_coloring, thm4_layers, thm5_layers, LayerSpec};
use poset_ramsey::permutations::{properness, t_closeness_witness, RestrictionEncoding};
use poset_ramsey::ramsey::{decide_arrow_with, exact_ramsey_with, export_cnf_with};
use poset_ramsey::sd::{doubling_scan, Interval};
use poset_ramsey::{
    count_proper, decode_restriction, encode_restriction, parse_poset_expression, proper_restriction,
    ramsey_bounds, run_chain_lemma, sd_search, verify_certificate, verify_counting_estimate,
    verify_witness, ArrowInstance, Color, ColoredLattice, CountingParameters, Permutation, Poset,
    PosetExpression, SearchOptions, SearchOutcome, SubsetCode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const THREADS_VAR: &str = "POSET_RAMSEY_THREADS";

#[derive(Parser)]
#[command(name = "poset-ramsey", version, about = "Poset Ramsey numbers R(P, Q_n): search, certificates and bounds")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parameters of a poset expression.
    Poset {
        #[command(subcommand)]
        command: PosetCommand,
    },
    /// Exact arrow decisions by SAT search.
    Ramsey {
        #[command(subcommand)]
        command: RamseyCommand,
    },
    /// Layered lower-bound colorings.
    Witness {
        #[command(subcommand)]
        command: WitnessCommand,
    },
    /// Run the chain lemma on a coloring.
    Chainlemma(ChainLemmaArgs),
    /// Proper permutations, restrictions and closeness.
    Perm {
        #[command(subcommand)]
        command: PermCommand,
    },
    /// Subdivided diamond search.
    Sd {
        #[command(subcommand)]
        command: SdCommand,
    },
    /// Rigorous evaluation of the counting estimate.
    Estimate(EstimateArgs),
    /// Known bounds for R(P, Q_n).
    Bounds {
        expr: String,
        #[arg(long)]
        n: u64,
    },
    /// Values for the small chain compositions.
    Table {
        #[arg(long)]
        n: u64,
    },
    /// Generate coloring files.
    Coloring {
        #[command(subcommand)]
        command: ColoringCommand,
    },
}

#[derive(Subcommand)]
enum PosetCommand {
    Info { expr: String },
}

#[derive(Args)]
struct SearchFlags {
    /// Sort the singleton colors, blue first.
    #[arg(long)]
    symmetry: bool,
}

#[derive(Subcommand)]
enum RamseyCommand {
    /// Whether every coloring of Q_dim has a blue P or a red Q_n.
    Decide {
        expr: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        dim: u32,
        /// Also write the formula in DIMACS format.
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// The least dimension that arrows, searching up to --max.
    Exact {
        expr: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max: u32,
        #[command(flatten)]
        search: SearchFlags,
    },
}

#[derive(Args)]
struct VerifyFlags {
    /// Check the coloring against this pattern.
    #[arg(long)]
    verify: Option<String>,
    /// Size of the red cube for --verify; defaults to the witness n.
    #[arg(long = "n", id = "verify_n", requires = "verify")]
    verify_n: Option<u32>,
    /// Write the coloring file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Layers 0..t1 blue, then n red layers, then blue.
    Thm4 {
        n: u32,
        t1: u32,
        #[command(flatten)]
        verify: VerifyFlags,
    },
    /// The three-chain coloring for t > t' >= 1.
    Thm5 {
        n: u32,
        t: u32,
        t_prime: u32,
        #[command(flatten)]
        verify: VerifyFlags,
    },
}

#[derive(Args)]
struct ChainLemmaArgs {
    /// Coloring file.
    #[arg(long)]
    coloring: PathBuf,
    /// Subset code of X, decimal or with a 0x / 0b prefix.
    #[arg(long, value_parser = parse_mask)]
    x: u32,
    /// Ordering of the remaining ground elements, comma separated.
    #[arg(long, value_delimiter = ',')]
    tau: Vec<u32>,
}

#[derive(Subcommand)]
enum PermCommand {
    /// Properness and bad indices of a permutation.
    Check {
        perm: String,
        #[arg(long)]
        r: Option<u32>,
    },
    /// Number of r-proper permutations of [k].
    Count {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
    },
    /// Encode the proper restriction as r binary strings.
    Encode {
        perm: String,
        #[arg(long)]
        r: u32,
    },
    /// Decode binary strings back into a restriction.
    Decode {
        #[arg(required = true)]
        rows: Vec<String>,
    },
    /// Whether an ordering is t-close to the identity.
    Close {
        perm: String,
        #[arg(long)]
        t: u32,
    },
}

#[derive(Subcommand)]
enum SdCommand {
    Search {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
    },
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long, required_unless_present = "scan")]
    n: Option<u64>,
    /// The constant c.
    #[arg(long, conflicts_with = "t", required_unless_present = "t")]
    c: Option<f64>,
    /// Use c = 2t + 2 + log2(2t + 2).
    #[arg(long)]
    t: Option<u32>,
    /// Evaluate n = 2^a, ..., 2^b, given as a:b.
    #[arg(long, conflicts_with = "n", value_parser = parse_range)]
    scan: Option<(u32, u32)>,
}

#[derive(Subcommand)]
enum ColoringCommand {
    /// An independent coin flip per vertex.
    Random {
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability of blue.
        #[arg(long, default_value_t = 0.5)]
        blue: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Color each subset by its size.
    Layered {
        #[arg(long)]
        dim: u32,
        /// Blue layer sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        blue: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Library(poset_ramsey::Error),
    Verification(Value),
}

impl From<poset_ramsey::Error> for Failure {
    fn from(e: poset_ramsey::Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Library(poset_ramsey::Error::Budget(_)) => 3,
            Failure::Library(poset_ramsey::Error::Verification(_)) | Failure::Verification(_) => 4,
            Failure::Library(_) => 2,
        }
    }

    fn to_json(&self) -> Value {
        use poset_ramsey::Error as E;
        let body = match self {
            Failure::Usage(m) => json!({ "kind": "usage", "message": m }),
            Failure::Io(m) => json!({ "kind": "io", "message": m }),
            Failure::Verification(detail) => {
                json!({ "kind": "verification", "message": "verification failed", "detail": detail })
            }
            Failure::Library(e) => {
                let kind = match e {
                    E::Parameter(_) => "parameter",
                    E::Construction(_) => "construction",
                    E::Budget(_) => "budget",
                    E::Encoding(_) => "encoding",
                    E::Parse { .. } => "parse",
                    E::Format(_) => "format",
                    E::Verification(_) => "verification",
                };
                let mut v = json!({ "kind": kind, "message": e.to_string() });
                if let E::Parse { offset, expected } = e {
                    v["offset"] = json!(offset);
                    v["expected"] = json!(expected);
                }
                v
            }
        };
        json!({ "error": body })
    }
}

type Outcome = Result<Value, Failure>;

fn parse_mask(s: &str) -> Result<u32, String> {
    let parsed = if let Some(hex) = s.strip_prefix("0x") {
        u32::from_str_radix(hex, 16)
    } else if let Some(bin) = s.strip_prefix("0b") {
        u32::from_str_radix(bin, 2)
    } else {
        s.parse()
    };
    parsed.map_err(|e| format!("invalid mask {s:?}: {e}"))
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a: u32 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u32 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a < 2 || a > b || b > 62 {
        return Err("exponents must satisfy 2 <= a <= b <= 62".into());
    }
    Ok((a, b))
}

fn expression(text: &str) -> Result<(PosetExpression, Poset), Failure> {
    let e = parse_poset_expression(text)?;
    let p = e.construct()?;
    Ok((e, p))
}

fn permutation(text: &str) -> Result<Permutation, Failure> {
    Ok(text.parse::<Permutation>()?)
}

fn coloring_value(c: &ColoredLattice) -> Value {
    serde_json::from_str(&c.to_json()).expect("coloring JSON is valid")
}

fn read_coloring(path: &Path) -> Result<ColoredLattice, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(ColoredLattice::from_json(&text)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn poset_info(text: &str) -> Outcome {
    let (e, p) = expression(text)?;
    let params = p.parameters();
    let dim2 = p.dim2(poset_ramsey::poset::DIM2_CAP).ok();
    let relations: Vec<(usize, usize)> = (0..p.size())
        .flat_map(|a| (0..p.size()).map(move |b| (a, b)))
        .filter(|&(a, b)| p.less(a, b))
        .collect();
    Ok(json!({
        "expression": e.to_string(),
        "size": p.size(),
        "height": params.height,
        "width": params.width,
        "trivial": params.trivial,
        "chain_lengths": p.chain_lengths(),
        "dim2": dim2,
        "relations": relations,
    }))
}

fn ramsey(cmd: RamseyCommand) -> Outcome {
    match cmd {
        RamseyCommand::Decide { expr, n, dim, cnf, search } => {
            let (e, p) = expression(&expr)?;
            let opts = SearchOptions { symmetry: search.symmetry, ..SearchOptions::default() };
            let inst = ArrowInstance { pattern: p, n, dim };
            if let Some(path) = &cnf {
                write_file(path, &export_cnf_with(&inst, &opts)?)?;
            }
            let (outcome, stats) = decide_arrow_with(&inst, &opts)?;
            let counterexample = match &outcome {
                SearchOutcome::Holds => Value::Null,
                SearchOutcome::Counterexample(c) => coloring_value(c),
            };
            Ok(json!({
                "expression": e.to_string(),
                "n": n,
                "dim": dim,
                "holds": outcome.holds(),
                "counterexample": counterexample,
                "stats": to_value(&stats),
                "cnf": cnf.map(|p| p.display().to_string()),
            }))
        }
        RamseyCommand::Exact { expr, n, max, search } => {
            let (e, p) = expression(&expr)?;
            let opts = SearchOptions { symmetry: search.symmetry, ..SearchOptions::default() };
            let value = exact_ramsey_with(&p, n, max, &opts)?;
            Ok(json!({ "expression": e.to_string(), "n": n, "value": value }))
        }
    }
}

fn witness(cmd: WitnessCommand) -> Outcome {
    let (spec, n, flags) = match cmd {
        WitnessCommand::Thm4 { n, t1, verify } => (thm4_layers(n, t1)?, n, verify),
        WitnessCommand::Thm5 { n, t, t_prime, verify } => (thm5_layers(n, t, t_prime)?, n, verify),
    };
    let c = layered_coloring(&spec)?;
    if let Some(path) = &flags.out {
        write_file(path, &c.to_json())?;
    }
    let mut out = json!({
        "dimension": spec.dimension(),
        "blue_layers": spec.blue_layers(),
        "red_layers": spec.red_layers(),
        "coloring": coloring_value(&c),
    });
    if let Some(text) = &flags.verify {
        let (e, p) = expression(text)?;
        let qn = flags.verify_n.unwrap_or(n);
        let report = verify_witness(&c, &p, qn)?;
        let detail = json!({
            "expression": e.to_string(),
            "n": qn,
            "is_witness": report.is_witness(),
            "report": to_value(&report),
        });
        if !report.is_witness() {
            return Err(Failure::Verification(detail));
        }
        out["verification"] = detail;
    }
    Ok(out)
}

fn chain_lemma(args: ChainLemmaArgs) -> Outcome {
    let c = read_coloring(&args.coloring)?;
    let x = SubsetCode(args.x);
    let res = run_chain_lemma(&c, x, &args.tau)?;
    if !verify_certificate(&res, &c, x, &args.tau) {
        return Err(Failure::Verification(to_value(&res)));
    }
    let mut out = to_value(&res);
    if let Some(image) = res.red_cube_image() {
        out["image"] = json!(image);
    }
    out["verified"] = json!(true);
    Ok(out)
}

fn perm(cmd: PermCommand) -> Outcome {
    match cmd {
        PermCommand::Check { perm, r } => {
            let p = permutation(&perm)?;
            let rho = proper_restriction(&p);
            let mut out = json!({
                "permutation": p.to_string(),
                "properness": properness(&p),
                "bad_indices": rho.map.keys().collect::<Vec<_>>(),
                "restriction": to_value(&rho),
            });
            if let Some(r) = r {
                out["r"] = json!(r);
                out["r_proper"] = json!(properness(&p) <= r);
            }
            Ok(out)
        }
        PermCommand::Count { k, r } => Ok(json!({ "k": k, "r": r, "count": count_proper(k, r)? })),
        PermCommand::Encode { perm, r } => {
            let p = permutation(&perm)?;
            let rho = proper_restriction(&p);
            let enc = encode_restriction(&rho, r, p.len() as u32)?;
            Ok(json!({ "permutation": p.to_string(), "r": r, "encoding": enc.to_strings() }))
        }
        PermCommand::Decode { rows } => {
            let rows: Vec<String> = rows.iter().flat_map(|r| r.split(',')).map(str::to_owned).collect();
            let enc = RestrictionEncoding::from_strings(&rows)?;
            Ok(json!({ "restriction": to_value(&decode_restriction(&enc)?) }))
        }
        PermCommand::Close { perm, t } => {
            let p = permutation(&perm)?;
            let witness = t_closeness_witness(p.values(), t);
            Ok(json!({
                "permutation": p.to_string(),
                "t": t,
                "t_close": witness.is_none(),
                "witness_index": witness,
            }))
        }
    }
}

fn estimate(args: EstimateArgs) -> Outcome {
    let c = match (args.c, args.t) {
        (Some(c), _) if c.is_finite() => Interval::point(c),
        (Some(c), _) => return Err(Failure::Usage(format!("c must be finite, got {c}"))),
        (None, Some(t)) => CountingParameters::for_t(2, t).c,
        (None, None) => unreachable!("clap requires --c or --t"),
    };
    if let Some((a, b)) = args.scan {
        let reports = doubling_scan(c, a..=b)?;
        let first = reports
            .iter()
            .find(|r| r.verdict == poset_ramsey::Estimate::Holds)
            .map(|r| r.n);
        return Ok(json!({ "c": to_value(&c), "first_holds": first, "reports": to_value(&reports) }));
    }
    let n = args.n.expect("clap requires --n without --scan");
    let report = verify_counting_estimate(&CountingParameters { n, c })?;
    Ok(json!({ "c": to_value(&c), "report": to_value(&report) }))
}

fn coloring(cmd: ColoringCommand) -> Outcome {
    let (c, out) = match cmd {
        ColoringCommand::Random { dim, seed, blue, out } => {
            if !(0.0..=1.0).contains(&blue) {
                return Err(Failure::Usage(format!("--blue must lie in [0, 1], got {blue}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = ColoredLattice::from_fn(dim, |_| {
                if rng.gen_bool(blue) { Color::Blue } else { Color::Red }
            })?;
            (c, out)
        }
        ColoringCommand::Layered { dim, blue, out } => (layered_coloring(&LayerSpec::new(dim, blue)?)?, out),
    };
    if let Some(path) = &out {
        write_file(path, &c.to_json())?;
    }
    Ok(coloring_value(&c))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Poset { command: PosetCommand::Info { expr } } => poset_info(&expr),
        Command::Ramsey { command } => ramsey(command),
        Command::Witness { command } => witness(command),
        Command::Chainlemma(args) => chain_lemma(args),
        Command::Perm { command } => perm(command),
        Command::Sd { command: SdCommand::Search { coloring, n, k, t } } => {
            let c = read_coloring(&coloring)?;
            Ok(to_value(&sd_search(&c, n, k, t)?))
        }
        Command::Estimate(args) => estimate(args),
        Command::Bounds { expr, n } => {
            let (e, p) = expression(&expr)?;
            let mut out = to_value(&ramsey_bounds(&p, n)?);
            out["expression"] = json!(e.to_string());
            out["n"] = json!(n);
            Ok(out)
        }
        Command::Table { n } => Ok(json!({ "n": n, "rows": to_value(&table1(n)?) })),
        Command::Coloring { command } => coloring(command),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(text) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}

fn print_json(v: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    };
    // A closed pipe on stdout is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("JSON value serializes"));
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", f.to_json());
    ExitCode::from(f.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::Usage(e.render().to_string())),
    };
    if let Err(f) = configure_threads() {
        return fail(&f);
    }
    let pretty = cli.pretty;
    match run(cli) {
        Ok(v) => {
            print_json(&v, pretty);
            ExitCode::SUCCESS
        }
        Err(f) => fail(&f),
    }
}
