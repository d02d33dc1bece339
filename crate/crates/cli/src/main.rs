mod schema;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use galmod::almost_fixed::{almost_rational_roots_of_unity, is_almost_fixed_element, is_almost_fixed_module};
use galmod::cohomology::compute_h1;
use galmod::corpus::{Built, Instance};
use galmod::search::{count_curve_points, empirical_c, find_unit_solution, hensel_witness};
use galmod::semigroup::{check_postage, genus_bound_pipeline, NumericalSemigroup};
use galmod::sweep::{sweep_with_caps, Caps, Oracle};
use galmod::{Endomorphism, Presentation};
use schema::{check_version, read_json, CorpusJson, InstanceJson, ReportJson, SCHEMA_VERSION};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "galmod", version, about = "Finite Galois-module checks and lemma oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Almost-fixed tests for an element or a whole module
    AlmostFixed {
        #[command(subcommand)]
        target: AlmostFixedTarget,
    },
    /// Orders m <= MAX whose roots of unity are almost fixed by (Z/m)^*
    Mu6 {
        #[arg(long, default_value_t = 200)]
        max: u64,
    },
    /// Run a lemma oracle over a corpus
    Oracle(OracleArgs),
    /// Write the default corpus of an oracle as JSON
    Corpus {
        name: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Numerical semigroups
    Semigroup {
        #[command(subcommand)]
        cmd: SemigroupCmd,
    },
    /// Searches modulo m and over F_p
    Search {
        #[command(subcommand)]
        cmd: SearchCmd,
    },
    /// First cohomology of an instance
    H1 {
        #[arg(long)]
        instance: PathBuf,
    },
}

#[derive(Subcommand)]
enum AlmostFixedTarget {
    Element {
        #[arg(long)]
        instance: PathBuf,
        /// comma-separated coordinates; overrides the instance's `element`
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        element: Option<Vec<i64>>,
    },
    Module {
        #[arg(long)]
        instance: PathBuf,
    },
}

#[derive(Args)]
struct OracleArgs {
    /// oracle name; taken from the report when replaying
    name: Option<String>,
    /// `default` or a corpus file
    #[arg(long)]
    corpus: Option<String>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// re-run the sweep recorded in a report and compare outcomes
    #[arg(long)]
    replay: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SemigroupCmd {
    Gaps {
        #[arg(required = true)]
        gens: Vec<u64>,
    },
    Frobenius {
        #[arg(required = true)]
        gens: Vec<u64>,
    },
    /// every n >= bound is a non-negative combination of a and b
    Postage {
        a: u64,
        b: u64,
        /// defaults to 2ab
        #[arg(long)]
        bound: Option<u64>,
    },
    GenusBound {
        p: u64,
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// least units x, y mod m with x^e + y^e = 2 and x^e, y^e != 1
    Units { m: u64, e: u64 },
    /// moduli up to MMAX with no such units
    EmpiricalC { e: u64, mmax: u64 },
    Hensel { p: u64, k: u32, e: u64 },
    /// points on x^e + y^e = 2z^e over F_p against the Weil bound
    Weil { p: u64, e: u64 },
}

/// Errors that map to a specific exit code.
#[derive(Debug)]
struct Exit(u8);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}", self.0)
    }
}

impl std::error::Error for Exit {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(Exit(c)) = e.downcast_ref::<Exit>() {
        return *c;
    }
    match e.chain().find_map(|c| c.downcast_ref::<galmod::Error>()) {
        Some(galmod::Error::CapExceeded { .. } | galmod::Error::ClosureCapExceeded { .. }) => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

fn caps() -> Result<Caps> {
    let mut caps = Caps::default();
    if let Ok(v) = std::env::var("GALMOD_CAP") {
        let n: u64 = v.trim().parse().map_err(|_| anyhow!("GALMOD_CAP: not a number: {v:?}"))?;
        caps.order = n;
        caps.closure = usize::try_from(n).unwrap_or(usize::MAX);
    }
    Ok(caps)
}

fn load_instance(path: &Path) -> Result<InstanceJson> {
    let j: InstanceJson = read_json(path, "instance")?;
    check_version(j.schema_version, "instance")?;
    Ok(j)
}

fn build(j: &InstanceJson) -> Result<Built> {
    let c = caps()?;
    Ok(j.to_instance().build_with_cap(c.order, c.closure)?)
}

/// The matrix of `e` on column vectors in the instance's own coordinates.
fn diagonal_matrix(pres: &Presentation, e: &Endomorphism) -> Result<Vec<Vec<u64>>> {
    let n = pres.diagonal().len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let unit: Vec<i64> = (0..n).map(|i| (i == j) as i64).collect();
        cols.push(pres.from_chain(&e.apply(&pres.to_chain(&unit)?)?));
    }
    Ok((0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect())
}

fn almost_fixed(target: AlmostFixedTarget) -> Result<()> {
    let (instance, element) = match &target {
        AlmostFixedTarget::Element { instance, element } => (instance, element.clone()),
        AlmostFixedTarget::Module { instance } => (instance, None),
    };
    let j = load_instance(instance)?;
    let b = build(&j)?;
    let (label, check) = match target {
        AlmostFixedTarget::Element { .. } => {
            let coords = element.or(j.element.clone()).ok_or_else(|| anyhow!("no element given (use --element or the instance's \"element\")"))?;
            let p = b.presentation.to_chain(&coords)?;
            (format!("element {coords:?}"), is_almost_fixed_element(&b.group, &p)?)
        }
        AlmostFixedTarget::Module { .. } => ("module".to_string(), is_almost_fixed_module(&b.group)),
    };
    match check.witness {
        None => {
            println!("{label} almost fixed: true (group order {})", b.group.order());
            Ok(())
        }
        Some((g, h)) => {
            println!("{label} almost fixed: false");
            println!("witness g = {:?}", diagonal_matrix(&b.presentation, b.group.element(g))?);
            println!("witness h = {:?}", diagonal_matrix(&b.presentation, b.group.element(h))?);
            println!("(g - 1)x = -(h - 1)x with (g - 1)x != 0");
            Err(Exit(EXIT_FAIL).into())
        }
    }
}

fn h1(path: &Path) -> Result<()> {
    let j = load_instance(path)?;
    let b = build(&j)?;
    let space = compute_h1(&b.group)?;
    let fmt = |o: Option<u128>| o.map_or("overflow".to_string(), |n| n.to_string());
    println!("group order: {}", b.group.order());
    println!("Z^1 order: {}; B^1 order: {}", fmt(space.z1_order()), fmt(space.b1_order()));
    println!("H^1 invariants: {:?}; order: {}", space.h1_invariants(), fmt(space.h1_order()));
    Ok(())
}

fn load_corpus(source: &str, oracle: Oracle) -> Result<Vec<Instance>> {
    if source == "default" {
        return Ok(oracle.default_corpus());
    }
    let c: CorpusJson = read_json(Path::new(source), "corpus")?;
    check_version(Some(c.schema_version), "corpus")?;
    for (i, inst) in c.instances.iter().enumerate() {
        check_version(inst.schema_version, &format!("corpus: instances[{i}]"))?;
    }
    Ok(c.instances.iter().enumerate().map(|(i, j)| {
        let mut inst = j.to_instance();
        if inst.id.is_empty() {
            inst.id = format!("#{i:05}");
        }
        inst
    }).collect())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let previous = args.replay.as_deref().map(|p| read_json::<ReportJson>(p, "report")).transpose()?;
    if let Some(r) = &previous {
        if r.schema_version != SCHEMA_VERSION {
            bail!("report: unsupported schema_version {}", r.schema_version);
        }
    }
    let name = args
        .name
        .or_else(|| previous.as_ref().map(|r| r.oracle.clone()))
        .ok_or_else(|| anyhow!("an oracle name is required"))?;
    let o: Oracle = name.parse()?;
    let corpus = args
        .corpus
        .or_else(|| previous.as_ref().map(|r| r.corpus.clone()))
        .unwrap_or_else(|| "default".to_string());
    let caps = match &previous {
        Some(r) => Caps { order: r.caps.order, closure: r.caps.closure },
        None => caps()?,
    };
    let instances = load_corpus(&corpus, o)?;
    let t = Instant::now();
    let s = sweep_with_caps(o, &instances, caps);
    let report = ReportJson::new(&s, &corpus, caps, t.elapsed().as_secs_f64());

    println!(
        "{}: cases {}, hypothesis met {}, passed {}, failed {}, skipped {} ({:.2}s)",
        report.oracle,
        report.instance_count,
        report.hypothesis_met,
        report.passed,
        report.failures.len(),
        report.skipped,
        report.wall_time_secs
    );
    for f in &report.failures {
        println!("FAIL {}: {}", f.instance, f.witness);
    }
    println!("status: {}", report.status);
    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&report)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(r) = &previous {
        if !r.same_outcome(&report) {
            println!("replay: outcome differs from {}", args.replay.unwrap().display());
            return Err(Exit(EXIT_FAIL).into());
        }
        println!("replay: identical outcome");
    }
    match report.status.as_str() {
        "pass" => Ok(()),
        "fail" => Err(Exit(EXIT_FAIL).into()),
        _ => Err(Exit(EXIT_CAP).into()),
    }
}

fn export_corpus(name: &str, output: Option<PathBuf>) -> Result<()> {
    let o: Oracle = name.parse()?;
    let c = CorpusJson {
        schema_version: SCHEMA_VERSION,
        instances: o.default_corpus().iter().map(InstanceJson::from_instance).collect(),
    };
    let text = serde_json::to_string(&c)? + "\n";
    match output {
        Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn semigroup(cmd: SemigroupCmd) -> Result<()> {
    match cmd {
        SemigroupCmd::Gaps { gens } => {
            let s = NumericalSemigroup::new(&gens)?;
            println!("gaps: {}; frobenius: {}; genus: {}", join(s.gaps()), s.frobenius(), s.genus());
        }
        SemigroupCmd::Frobenius { gens } => {
            println!("frobenius: {}", NumericalSemigroup::new(&gens)?.frobenius());
        }
        SemigroupCmd::Postage { a, b, bound } => {
            let bound = bound.unwrap_or(2 * a * b);
            let ok = check_postage(a, b, bound)?;
            println!("every n >= {bound} is a sum of {a}s and {b}s: {ok}");
            if !ok {
                let s = NumericalSemigroup::new(&[a, b])?;
                println!("witness: {} is not representable", s.frobenius());
                return Err(Exit(EXIT_FAIL).into());
            }
        }
        SemigroupCmd::GenusBound { p, verbose } => {
            let g = genus_bound_pipeline(p)?;
            if verbose {
                println!("odd nongaps: {}", join(&g.nongaps));
                println!("gaps: {}", join(&g.gaps));
                println!("gap bound: {}", g.gap_bound);
                for x in &g.exclusions {
                    println!(
                        "genus {} excluded: nongap {} <= genus, orbit {} > {} Weierstrass points",
                        x.genus, x.small_nongap, x.orbit, x.max_weierstrass_points
                    );
                }
            }
            println!("bound: {}", g.bound);
        }
    }
    Ok(())
}

fn search(cmd: SearchCmd) -> Result<()> {
    match cmd {
        SearchCmd::Units { m, e } => match find_unit_solution(m, e)? {
            Some(s) => println!("solution: x = {}, y = {} (x^e = {}, y^e = {})", s.x, s.y, s.xe, s.ye),
            None => println!("no solution mod {m} for e = {e}"),
        },
        SearchCmd::EmpiricalC { e, mmax } => {
            let c = empirical_c(e, mmax)?;
            println!("exceptions: {}", join(&c.exceptions));
            match c.largest() {
                Some(l) => println!("largest exception up to {mmax}: {l}"),
                None => println!("no exceptions up to {mmax}"),
            }
        }
        SearchCmd::Hensel { p, k, e } => match hensel_witness(p, k, e)? {
            Some(s) if s.is_valid() => {
                println!("witness mod {}: x = {}, y = {} (x^e = {}, y^e = {})", s.m, s.x, s.y, s.xe, s.ye)
            }
            Some(s) => {
                println!("invalid witness: {s:?}");
                return Err(Exit(EXIT_FAIL).into());
            }
            None => println!("no lift: needs p > e"),
        },
        SearchCmd::Weil { p, e } => {
            let c = count_curve_points(p, e)?;
            println!(
                "points: {} ({} affine, {} at infinity); deviation: {}; bound: {:.3}; holds: {}",
                c.n,
                c.affine,
                c.at_infinity,
                c.deviation,
                c.weil_bound(),
                c.weil_ok
            );
            if !c.weil_ok {
                return Err(Exit(EXIT_FAIL).into());
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::AlmostFixed { target } => almost_fixed(target),
        Command::Mu6 { max } => {
            println!("almost-rational orders: {}", join(&almost_rational_roots_of_unity(max)));
            Ok(())
        }
        Command::Oracle(args) => oracle(args),
        Command::Corpus { name, output } => export_corpus(&name, output),
        Command::Semigroup { cmd } => semigroup(cmd),
        Command::Search { cmd } => search(cmd),
        Command::H1 { instance } => h1(&instance),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<Exit>().is_none() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
