use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use conftc::bounds::{witness_length, DEFAULT_BUDGET};
use conftc::planner::{
    plan_with_moving_obstacles, verify_plan, Configuration, ObjectPaths, ObstacleTrajectory,
    PlannerOptions, VerifyOptions, VerifyReport, BUMP_LIPSCHITZ,
};
use conftc::{
    bounds_report, enumerate_basis, poincare_polynomial, witness_product, zcl_search, AlgebraSpec,
    BoundsReport, Element, WitnessFactor,
};

/// `println!` that exits quietly once stdout is closed (`| head`).
macro_rules! out {
    ($($arg:tt)*) => {
        if writeln!(io::stdout().lock(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    };
}

#[derive(Parser)]
#[command(
    name = "conftc",
    version,
    about = "Cohomology and topological complexity of configuration spaces with point obstacles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct SpecArgs {
    /// Generator degree; objects move in R^{r+1}.
    #[arg(long)]
    r: u32,
    /// Number of objects.
    #[arg(long)]
    n: u32,
    /// Number of obstacles.
    #[arg(long, default_value_t = 0)]
    m: u32,
}

impl SpecArgs {
    fn spec(&self) -> Result<AlgebraSpec> {
        Ok(AlgebraSpec::new(self.r, self.n, self.m)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// List basis monomials of the cohomology ring.
    Basis {
        #[command(flatten)]
        spec: SpecArgs,
        /// Only monomials of this cohomological degree.
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Print the ranks of the cohomology groups by degree.
    Poincare {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        json: bool,
    },
    /// Reduce an expression such as "e(1,2)e(1,3)" to the monomial basis.
    NormalForm {
        #[command(flatten)]
        spec: SpecArgs,
        /// Expression to reduce; read from stdin when omitted.
        expr: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Search for the longest nonzero product of zero-divisors.
    Zcl {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        max_length: Option<u32>,
        #[arg(long, env = "CONFTC_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Report lower, upper and exact topological complexity.
    Tc {
        #[command(flatten)]
        spec: SpecArgs,
        /// Report every 2 <= n' <= n and 0 <= m' <= m instead of a single spec.
        #[arg(long)]
        table: bool,
        #[arg(long, env = "CONFTC_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a product of zero-divisors.
    Witness(WitnessArgs),
    /// Plan object motions around moving obstacles.
    Plan(PlanArgs),
    /// Check object paths against an obstacle trajectory.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct WitnessArgs {
    /// Spatial witness (r = 2): squares of ē(i,n) without obstacles, of ē(i,n+1) with.
    #[arg(long, conflicts_with_all = ["planar", "factors"])]
    spatial: bool,
    /// Planar witness (r = 1, m >= 2): product of ē(i,n+1) ē(i,n+2) over all objects.
    #[arg(long, conflicts_with = "factors")]
    planar: bool,
    /// Explicit factors "i,j[^k];..." (requires --r).
    #[arg(long)]
    factors: Option<String>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PlanArgs {
    /// Obstacle trajectory JSON.
    #[arg(long)]
    obstacles: PathBuf,
    /// Start configuration: a JSON file or inline "x,y;x,y".
    #[arg(long)]
    start: String,
    /// Goal configuration: a JSON file or inline "x,y;x,y".
    #[arg(long)]
    goal: String,
    /// Bump radius of the isotopy; defaults to 0.45 * obstacle separation (capped at 1).
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    margin: f64,
    #[arg(long, default_value_t = 20_000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Resample the obstacles when they move too far per frame; the refined
    /// trajectory is written here.
    #[arg(long)]
    refine_out: Option<PathBuf>,
    /// Where to write the object paths (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    obstacles: PathBuf,
    #[arg(long)]
    paths: PathBuf,
    #[arg(long)]
    start: Option<String>,
    #[arg(long)]
    goal: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
    #[arg(long, default_value_t = f64::INFINITY)]
    max_step: f64,
    #[arg(long, default_value_t = 1e-9)]
    endpoint_tolerance: f64,
    #[arg(long)]
    json: bool,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn configuration(dim: usize, arg: &str) -> Result<Configuration> {
    let path = Path::new(arg);
    if arg.ends_with(".json") || path.is_file() {
        let config = Configuration::from_json(&read_text(path)?)?;
        if config.dim() != dim {
            bail!("{arg} has dimension {}, expected {dim}", config.dim());
        }
        Ok(config)
    } else {
        Ok(Configuration::parse_inline(dim, arg)?)
    }
}

fn print_json(value: &serde_json::Value) {
    let text = serde_json::to_string_pretty(value).expect("json values serialize");
    out!("{text}");
}

fn witness_text(witness: &[WitnessFactor]) -> String {
    if witness.is_empty() {
        return "1".into();
    }
    witness
        .iter()
        .map(|f| match f.multiplicity {
            1 => format!("ē({},{})", f.i, f.j),
            k => format!("ē({},{})^{k}", f.i, f.j),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_factors(text: &str) -> Result<Vec<WitnessFactor>> {
    let mut out = Vec::new();
    for chunk in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
        let (pair, mult) = match chunk.split_once('^') {
            Some((pair, k)) => (pair, k.trim().parse().context("bad multiplicity")?),
            None => (chunk, 1),
        };
        let (i, j) = pair.split_once(',').context("factor must look like i,j")?;
        out.push(WitnessFactor::new(
            i.trim().parse().context("bad index")?,
            j.trim().parse().context("bad index")?,
            mult,
        ));
    }
    if out.is_empty() {
        bail!("no factors given");
    }
    Ok(out)
}

fn print_report(report: &BoundsReport) {
    out!("spec     {}", report.spec);
    out!(
        "lower    {}  (zero-divisor product of length {}, {}, {} nodes)",
        report.lower,
        report.zcl_length(),
        if report.exhaustive {
            "exhaustive search"
        } else {
            "budget exhausted"
        },
        report.nodes_visited
    );
    out!("upper    {}", report.upper);
    match (report.exact, &report.source_citation) {
        (Some(v), Some(c)) => out!("exact    {v}  [{c}]"),
        _ => out!("exact    unknown"),
    }
    out!("witness  {}", witness_text(&report.witness));
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Basis { spec, degree, json } => {
            let spec = spec.spec()?;
            let basis = enumerate_basis(&spec, degree);
            if json {
                let monos: Vec<_> = basis
                    .iter()
                    .map(|m| m.factors().iter().map(|g| [g.i, g.j]).collect::<Vec<_>>())
                    .collect();
                print_json(
                    &json!({ "spec": spec, "degree": degree, "count": basis.len(), "basis": monos }),
                );
            } else {
                for mono in &basis {
                    out!("{mono}");
                }
            }
        }
        Command::Poincare { spec, json } => {
            let spec = spec.spec()?;
            let ranks = poincare_polynomial(&spec);
            if json {
                let ranks: Vec<String> = ranks.iter().map(ToString::to_string).collect();
                print_json(&json!({ "spec": spec, "ranks": ranks }));
            } else {
                let terms: Vec<String> = ranks
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0u32.into())
                    .map(|(d, c)| match d {
                        0 => c.to_string(),
                        1 => format!("{c}t"),
                        _ => format!("{c}t^{d}"),
                    })
                    .collect();
                out!("{}", terms.join(" + "));
            }
        }
        Command::NormalForm { spec, expr, json } => {
            let spec = spec.spec()?;
            let text = match expr {
                Some(e) => e,
                None => {
                    let mut buf = String::new();
                    io::stdin().read_to_string(&mut buf)?;
                    buf
                }
            };
            let element = Element::parse(&spec, text.trim())?;
            if json {
                print_json(&json!({ "spec": spec, "terms": element.to_json_terms() }));
            } else {
                out!("{element}");
            }
        }
        Command::Zcl {
            spec,
            max_length,
            budget,
            json,
        } => {
            let spec = spec.spec()?;
            let out = zcl_search(&spec, max_length, budget)?;
            if json {
                print_json(&json!({ "spec": spec, "search": out }));
            } else {
                out!(
                    "{spec}: length {} ({}, {} nodes)",
                    out.length,
                    if out.exhaustive {
                        "exhaustive"
                    } else {
                        "budget exhausted"
                    },
                    out.nodes_visited
                );
                out!("witness  {}", witness_text(&out.witness));
            }
        }
        Command::Tc {
            spec,
            table,
            budget,
            json,
        } => {
            let specs: Vec<AlgebraSpec> = if table {
                let mut specs = Vec::new();
                for n in 2..=spec.n.max(2) {
                    for m in 0..=spec.m {
                        specs.push(AlgebraSpec::new(spec.r, n, m)?);
                    }
                }
                specs
            } else {
                vec![spec.spec()?]
            };
            let reports = specs
                .iter()
                .map(|s| bounds_report(s, budget))
                .collect::<Result<Vec<_>, _>>()?;
            if json {
                if table {
                    print_json(&serde_json::to_value(&reports)?);
                } else {
                    print_json(&serde_json::to_value(&reports[0])?);
                }
            } else if table {
                out!(
                    "{:>3} {:>3} {:>3} {:>6} {:>6} {:>6}  source",
                    "r",
                    "n",
                    "m",
                    "lower",
                    "upper",
                    "exact"
                );
                for rep in &reports {
                    out!(
                        "{:>3} {:>3} {:>3} {:>6} {:>6} {:>6}  {}",
                        rep.spec.r(),
                        rep.spec.n(),
                        rep.spec.m(),
                        rep.lower,
                        rep.upper,
                        rep.exact.map_or("-".into(), |e| e.to_string()),
                        rep.source_citation.as_deref().unwrap_or("bounds only")
                    );
                }
            } else {
                print_report(&reports[0]);
            }
        }
        Command::Witness(args) => witness(args)?,
        Command::Plan(args) => plan(args)?,
        Command::Verify(args) => verify(args)?,
    }
    Ok(())
}

fn witness(args: WitnessArgs) -> Result<()> {
    let n = args.n;
    let (spec, factors) = if args.spatial {
        let m = args.m.unwrap_or(0);
        let factors: Vec<_> = if m == 0 {
            (1..n).map(|i| WitnessFactor::new(i, n, 2)).collect()
        } else {
            (1..=n).map(|i| WitnessFactor::new(i, n + 1, 2)).collect()
        };
        (AlgebraSpec::new(2, n, m)?, factors)
    } else if args.planar {
        let m = args.m.unwrap_or(2);
        if m < 2 {
            bail!("the planar witness needs at least two obstacles (--m >= 2)");
        }
        let factors = (1..=n)
            .flat_map(|i| {
                [
                    WitnessFactor::new(i, n + 1, 1),
                    WitnessFactor::new(i, n + 2, 1),
                ]
            })
            .collect();
        (AlgebraSpec::new(1, n, m)?, factors)
    } else if let Some(text) = &args.factors {
        let r = args.r.context("--factors needs --r")?;
        (
            AlgebraSpec::new(r, n, args.m.unwrap_or(0))?,
            parse_factors(text)?,
        )
    } else {
        bail!("choose one of --spatial, --planar or --factors");
    };
    let product = witness_product(&spec, &factors)?;
    let length = witness_length(&factors);
    if args.json {
        print_json(&json!({
            "spec": spec,
            "factors": factors,
            "length": length,
            "nonzero": !product.is_zero(),
            "term_count": product.terms().len(),
            "terms": product.to_json_terms(),
        }));
    } else {
        out!("{spec}: {}", witness_text(&factors));
        out!("length {length}, {} terms", product.terms().len());
        out!("{product}");
    }
    Ok(())
}

fn plan(args: PlanArgs) -> Result<()> {
    let mut obstacles = ObstacleTrajectory::from_json(&read_text(&args.obstacles)?)?;
    let dim = obstacles.dim();
    let start = configuration(dim, &args.start)?;
    let goal = configuration(dim, &args.goal)?;
    let radius = args
        .radius
        .unwrap_or_else(|| (0.45 * obstacles.min_sep()).min(1.0));
    if let Some(path) = &args.refine_out {
        obstacles = obstacles.refine_to_step(0.9 * radius / (2.0 * BUMP_LIPSCHITZ))?;
        fs::write(path, obstacles.to_json() + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let opts = PlannerOptions {
        margin: args.margin,
        budget: args.budget,
        seed: args.seed,
    };
    let result = plan_with_moving_obstacles(&start, &goal, &obstacles, radius, &opts)?;
    let summary = json!({
        "frames": result.paths.frames().len(),
        "objects": start.len(),
        "obstacles": obstacles.count(),
        "radius": radius,
        "isotopy_layers": result.isotopy.layer_count(),
        "planner_margin": result.planner_margin,
        "achieved_margin": result.achieved_margin,
    });
    match &args.out {
        Some(path) => {
            fs::write(path, result.paths.to_json() + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            if args.json {
                print_json(&summary);
            } else {
                out!(
                    "wrote {} frames to {}; achieved margin {:.6e}",
                    result.paths.frames().len(),
                    path.display(),
                    result.achieved_margin
                );
            }
        }
        None => out!("{}", result.paths.to_json()),
    }
    Ok(())
}

fn print_verify(report: &VerifyReport) {
    let rows = [
        ("continuity", &report.continuity),
        ("endpoints", &report.endpoints),
        ("object separation", &report.object_separation),
        ("obstacle clearance", &report.obstacle_clearance),
    ];
    for (name, check) in rows {
        let status = match (check.checked, check.passed) {
            (false, _) => "skip",
            (true, true) => "pass",
            (true, false) => "FAIL",
        };
        out!("{status}  {name:<19} {}", check.detail);
    }
    out!("overall {}", if report.passed() { "pass" } else { "FAIL" });
}

fn verify(args: VerifyArgs) -> Result<()> {
    let obstacles = ObstacleTrajectory::from_json(&read_text(&args.obstacles)?)?;
    let paths = ObjectPaths::from_json(&read_text(&args.paths)?)?;
    let dim = obstacles.dim();
    let endpoints = match (&args.start, &args.goal) {
        (Some(a), Some(b)) => Some((configuration(dim, a)?, configuration(dim, b)?)),
        (None, None) => None,
        _ => bail!("--start and --goal must be given together"),
    };
    let opts = VerifyOptions {
        margin: args.margin,
        max_step: args.max_step,
        endpoint_tolerance: args.endpoint_tolerance,
        endpoints,
    };
    let report = verify_plan(&paths, &obstacles, &opts);
    if args.json {
        let mut value = serde_json::to_value(&report)?;
        value["passed"] = report.passed().into();
        print_json(&value);
    } else {
        print_verify(&report);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
