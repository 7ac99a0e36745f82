//! Batch experiment front-end: every subcommand emits JSON lines, one
//! record per check, deterministically for a fixed seed.

mod inputs;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use pantsgraph::agreement::{self, AgreementLevel};
use pantsgraph::decomposition::PantsDecomposition;
use pantsgraph::metric::{self, rat, Dhat};
use pantsgraph::model::SurfaceModel;
use pantsgraph::oracle;
use pantsgraph::pspace;
use pantsgraph::suite::{run_suite, SuiteConfig};
use pantsgraph::twist;

use inputs::{load_decomposition, load_point, load_profile, load_rat, parse_curve};

#[derive(Parser)]
#[command(name = "pantsgraph", about = "Experiments on pants decompositions of the model infinite-type surface")]
struct Cli {
    /// Links per exhaustion shell of the model surface.
    #[arg(long, default_value_t = 4, global = true)]
    model_shell: u32,
    /// Seed fixing all sampled checks.
    #[arg(long, default_value_t = 7, global = true)]
    seed: u64,
    /// Optional JSON config file ({"shell_size", "seed", "level", "budget", "out"}).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON-lines output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LevelArg {
    /// Agreement level (0..=4).
    #[arg(long, default_value_t = 1)]
    level: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Decide i-agreement of two decompositions on S_n.
    Agree {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long)]
        n: u32,
        x: String,
        y: String,
    },
    /// The partial step distance of two decompositions.
    Dhat {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        x: String,
        y: String,
    },
    /// Certified distance bounds with a witness chain.
    Dist {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long, default_value_t = 4)]
        budget: u32,
        x: String,
        y: String,
    },
    /// Staged move word converging to the target decomposition.
    ConvergePath {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        x: String,
        y: String,
    },
    /// Pants-space predicates.
    #[command(subcommand)]
    Pspace(PspaceCommand),
    /// Twist-profile actions and convergence checks.
    #[command(subcommand)]
    Twist(TwistCommand),
    /// Brute-force oracle queries.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Constructive witnesses.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Run the full acceptance battery.
    Suite {
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long)]
        triples: Option<usize>,
    },
}

#[derive(Subcommand)]
enum PspaceCommand {
    /// Membership of a point in the basic open set around another.
    Member {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long)]
        eps: String,
        p: String,
        q: String,
    },
    /// Validate a certified point stream against its limit.
    Converge {
        #[command(flatten)]
        level: LevelArg,
        stream: PathBuf,
        limit: String,
    },
    /// Disjoint basic opens around two distinct points.
    Separate {
        #[command(flatten)]
        level: LevelArg,
        p: String,
        q: String,
    },
    /// Membership in the closure of a basic open set.
    Closure {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        n: u32,
        p: String,
        q: String,
    },
    /// Evaluate the converging path function at a parameter.
    Path {
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long)]
        t: String,
        x: String,
        y: String,
    },
}

#[derive(Subcommand)]
enum TwistCommand {
    /// Apply a profile to a curve literal or a decomposition file.
    Apply {
        #[arg(long)]
        profile: String,
        target: String,
    },
    /// Validate a certified profile stream against its limit.
    ConvergenceTest {
        stream: PathBuf,
        limit: String,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Compare engine move enumeration with brute-force adjacency.
    CheckMoves {
        #[arg(long, default_value_t = 3)]
        site: u64,
        #[arg(long, default_value_t = 3)]
        height: u64,
    },
    /// Compare windowed move-graph distances with Farey products.
    CheckDistance {
        #[arg(long, default_value_t = 25)]
        pairs: usize,
    },
    /// Dump the brute-force pants graph of a window.
    DumpGraph {
        #[arg(long, default_value_t = 3)]
        site: u64,
        #[arg(long, default_value_t = 2)]
        height: u64,
    },
    /// Dump the chart of the model surface.
    DumpChart {
        #[arg(long, default_value_t = 24)]
        max_index: u64,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// A triple violating the ultrametric inequality across classes.
    Nonultrametric {
        #[command(flatten)]
        level: LevelArg,
    },
    /// A pair agreeing at one level but not the next finer one.
    Separating {
        #[command(flatten)]
        level: LevelArg,
        #[arg(long, default_value_t = 0)]
        n: u32,
    },
}

#[derive(Deserialize, Default)]
struct FileConfig {
    shell_size: Option<u32>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("{}", json!({ "error": err.to_string() }));
            std::process::exit(1);
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut shell = cli.model_shell;
    let mut seed = cli.seed;
    let mut out_path = cli.out.clone();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let file: FileConfig = serde_json::from_str(&text).context("parsing config")?;
        if let Some(s) = file.shell_size {
            shell = s;
        }
        if let Some(s) = file.seed {
            seed = s;
        }
        if out_path.is_none() {
            out_path = file.out;
        }
    }
    let model = SurfaceModel::build(shell)?;
    let lines = dispatch(&cli.command, &model, seed)?;
    let mut rendered = String::new();
    for line in lines {
        rendered.push_str(&serde_json::to_string(&line)?);
        rendered.push('\n');
    }
    match out_path {
        Some(path) => fs::write(&path, rendered)
            .with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(())
}

fn level_of(arg: &LevelArg) -> Result<AgreementLevel> {
    Ok(AgreementLevel::new(arg.level)?)
}

fn dispatch(command: &Command, model: &SurfaceModel, seed: u64) -> Result<Vec<Value>> {
    match command {
        Command::Agree { level, n, x, y } => {
            let level = level_of(level)?;
            let x = load_decomposition(model, x)?;
            let y = load_decomposition(model, y)?;
            let agrees = agreement::agrees(model, level, &x, &y, *n);
            let diff = if level.get() == 0 {
                Value::Null
            } else {
                json!(agreement::mismatch_sites(model, level, &x, &y, *n))
            };
            Ok(vec![json!({
                "check": "agree",
                "level": level.get(),
                "n": n,
                "agrees": agrees,
                "fingerprint_diff": diff,
            })])
        }
        Command::Dhat { level, n_max, x, y } => {
            let level = level_of(level)?;
            let x = load_decomposition(model, x)?;
            let y = load_decomposition(model, y)?;
            let value = match metric::dhat(model, level, &x, &y, *n_max)? {
                Dhat::Exact(v) => json!({ "value": v.to_string() }),
                Dhat::Below(b) => json!({ "below": b.to_string() }),
                Dhat::Undefined => json!({ "undefined": true }),
            };
            Ok(vec![json!({ "check": "dhat", "level": level.get(), "result": value })])
        }
        Command::Dist { level, budget, x, y } => {
            let level = level_of(level)?;
            let x = load_decomposition(model, x)?;
            let y = load_decomposition(model, y)?;
            let d = metric::distance(model, level, &x, &y, *budget)?;
            let witness: Vec<Value> = d.witness.iter().map(|w| w.to_json(model)).collect();
            Ok(vec![json!({
                "check": "dist",
                "level": level.get(),
                "lo": d.lo.to_string(),
                "hi": d.hi.to_string(),
                "exact": d.exact,
                "witness": witness,
            })])
        }
        Command::ConvergePath { level, depth, x, y } => {
            let level = level_of(level)?;
            let x = load_decomposition(model, x)?;
            let y = load_decomposition(model, y)?;
            let path = metric::converge_path(model, &x, &y, *depth)?;
            let word: Vec<Value> = path
                .word
                .iter()
                .map(|mv| {
                    json!({ "site": mv.site, "from": mv.from.to_string(), "to": mv.to.to_string() })
                })
                .collect();
            let mut stages = Vec::new();
            for (k, state) in (0..=*depth).zip(path.stage_ends.iter().map(|&e| &path.states[e])) {
                stages.push(json!({
                    "stage": k,
                    "word_end": path.stage_ends[k as usize],
                    "agrees_with_target": agreement::agrees(model, level, state, &y, k),
                }));
            }
            Ok(vec![json!({
                "check": "converge-path",
                "depth": depth,
                "word": word,
                "stages": stages,
            })])
        }
        Command::Pspace(sub) => pspace_command(sub, model, seed),
        Command::Twist(sub) => twist_command(sub, model),
        Command::Oracle(sub) => oracle_command(sub, model, seed),
        Command::Witness(sub) => witness_command(sub, model),
        Command::Suite { pairs, triples } => {
            let mut config = SuiteConfig { seed, ..SuiteConfig::default() };
            config.shell_size = model.shell_size();
            if let Some(p) = pairs {
                config.pairs = *p;
            }
            if let Some(t) = triples {
                config.triples = *t;
            }
            let records = run_suite(&config)?;
            Ok(records
                .into_iter()
                .map(|r| json!({ "check": r.check, "pass": r.pass, "details": r.details }))
                .collect())
        }
    }
}

fn pspace_command(sub: &PspaceCommand, model: &SurfaceModel, seed: u64) -> Result<Vec<Value>> {
    match sub {
        PspaceCommand::Member { level, eps, p, q } => {
            let level = level_of(level)?;
            let eps = load_rat(eps)?;
            let p = load_point(model, p)?;
            let q = load_point(model, q)?;
            let member = pspace::in_basic_open(model, level, eps, &p, &q)?;
            Ok(vec![json!({
                "check": "pspace-member",
                "eps": eps.to_string(),
                "member": member,
            })])
        }
        PspaceCommand::Converge { level, stream, limit } => {
            let level = level_of(level)?;
            let stream = inputs::load_point_stream(model, stream)?;
            let limit = load_point(model, limit)?;
            let verdict = pspace::converges(model, level, &stream, &limit)?;
            Ok(vec![json!({
                "check": "pspace-converge",
                "clause": format!("{:?}", verdict.clause),
                "terms_checked": verdict.terms_checked,
            })])
        }
        PspaceCommand::Separate { level, p, q } => {
            let level = level_of(level)?;
            let p = load_point(model, p)?;
            let q = load_point(model, q)?;
            let w = pspace::separation_witness(model, level, &p, &q)?;
            let _ = seed;
            Ok(vec![json!({
                "check": "pspace-separate",
                "eps": w.eps.to_string(),
                "n": w.n,
                "case": format!("{:?}", w.case),
            })])
        }
        PspaceCommand::Closure { level, eps, n, p, q } => {
            let level = level_of(level)?;
            let eps = load_rat(eps)?;
            let p = load_point(model, p)?;
            let q = load_point(model, q)?;
            let member = pspace::in_closure(model, level, eps, *n, &p, &q)?;
            Ok(vec![json!({
                "check": "pspace-closure",
                "eps": eps.to_string(),
                "n": n,
                "member": member,
            })])
        }
        PspaceCommand::Path { depth, t, x, y } => {
            let t = load_rat(t)?;
            let x = load_decomposition(model, x)?;
            let y = load_decomposition(model, y)?;
            let path = metric::converge_path(model, &x, &y, *depth)?;
            let point = pspace::path_point(model, &path, t)?;
            Ok(vec![json!({
                "check": "pspace-path",
                "t": t.to_string(),
                "point": inputs::point_to_json(model, &point),
            })])
        }
    }
}

fn twist_command(sub: &TwistCommand, model: &SurfaceModel) -> Result<Vec<Value>> {
    match sub {
        TwistCommand::Apply { profile, target } => {
            let f = load_profile(profile)?;
            // a curve literal, otherwise a decomposition input
            if let Ok(curve) = parse_curve(target) {
                let image = twist::act_on_curve(&f, &curve);
                return Ok(vec![json!({
                    "check": "twist-apply",
                    "curve": image.to_string(),
                })]);
            }
            let x = load_decomposition(model, target)?;
            let image = twist::act_on_decomposition(model, &f, &x);
            Ok(vec![json!({
                "check": "twist-apply",
                "decomposition": image.to_json(model),
                "fixes_input": image == x,
            })])
        }
        TwistCommand::ConvergenceTest { stream, limit, k_max } => {
            let stream = inputs::load_profile_stream(stream)?;
            let f = load_profile(limit)?;
            let verdict = twist::profile_converges(model, &stream, &f, *k_max)?;
            Ok(vec![json!({
                "check": "twist-convergence",
                "terms_checked": verdict.terms_checked,
                "depth": verdict.depth,
            })])
        }
    }
}

fn oracle_command(sub: &OracleCommand, model: &SurfaceModel, seed: u64) -> Result<Vec<Value>> {
    match sub {
        OracleCommand::CheckMoves { site, height } => {
            let sub_pants = pantsgraph::model::Subsurface::from_pants(model.window_pants(*site));
            let graph = oracle::brute_pants_graph(model, &sub_pants, *height)?;
            let mut mismatches = 0usize;
            for (i, v) in graph.vertices.iter().enumerate() {
                let sigma = v[0];
                let x = PantsDecomposition::base().with_occupant(model, *site, sigma)?;
                let alpha = pantsgraph::curve::Curve::window(model, *site, sigma);
                let set = pantsgraph::decomposition::enumerate_moves(model, &x, &alpha, *height)?;
                let mut engine: Vec<String> =
                    set.moves.iter().map(|mv| mv.to.to_string()).collect();
                engine.sort();
                let mut brute: Vec<String> = graph.adjacency[i]
                    .iter()
                    .map(|&j| graph.vertices[j][0].to_string())
                    .collect();
                brute.sort();
                if engine != brute {
                    mismatches += 1;
                }
            }
            Ok(vec![json!({
                "check": "oracle-check-moves",
                "site": site,
                "height": height,
                "vertices": graph.vertices.len(),
                "mismatches": mismatches,
                "pass": mismatches == 0,
            })])
        }
        OracleCommand::CheckDistance { pairs } => {
            let config = SuiteConfig {
                seed,
                windowed_pairs: *pairs,
                shell_size: model.shell_size(),
                ..SuiteConfig::default()
            };
            let record = pantsgraph::suite::run_check(&config, "oracle-equivalence")?;
            Ok(vec![json!({
                "check": "oracle-check-distance",
                "pass": record.pass,
                "details": record.details,
            })])
        }
        OracleCommand::DumpGraph { site, height } => {
            let sub_pants = pantsgraph::model::Subsurface::from_pants(model.window_pants(*site));
            let graph = oracle::brute_pants_graph(model, &sub_pants, *height)?;
            let vertices: Vec<String> = graph.vertices.iter().map(|v| v[0].to_string()).collect();
            let edges: Vec<(usize, usize)> = graph
                .adjacency
                .iter()
                .enumerate()
                .flat_map(|(i, adj)| adj.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
                .collect();
            Ok(vec![json!({
                "check": "oracle-dump-graph",
                "site": site,
                "kind": format!("{:?}", model.window_kind(*site)),
                "vertices": vertices,
                "edges": edges,
            })])
        }
        OracleCommand::DumpChart { max_index } => Ok(vec![json!({
            "check": "oracle-dump-chart",
            "chart": model.chart_dump(*max_index),
        })]),
    }
}

fn witness_command(sub: &WitnessCommand, model: &SurfaceModel) -> Result<Vec<Value>> {
    match sub {
        WitnessCommand::Nonultrametric { level } => {
            let level = level_of(level)?;
            let (x, y, z) = metric::find_nonultrametric_witness(model, level)?;
            let lb = metric::lower_bound(model, level, &x, &z)?;
            let leg = |a: &PantsDecomposition, b: &PantsDecomposition| -> Result<String> {
                Ok(metric::dhat(model, level, a, b, 8)?
                    .exact()
                    .map(|v| v.to_string())
                    .unwrap_or_default())
            };
            Ok(vec![json!({
                "check": "witness-nonultrametric",
                "level": level.get(),
                "x": x.to_json(model),
                "y": y.to_json(model),
                "z": z.to_json(model),
                "dhat_xy": leg(&x, &y)?,
                "dhat_yz": leg(&y, &z)?,
                "lo_xz": lb.value.to_string(),
                "lo_exceeds_one": lb.value > rat(1, 1),
            })])
        }
        WitnessCommand::Separating { level, n } => {
            let level = level_of(level)?;
            let (x, y) = agreement::make_separating_pair(model, level, *n, 2)?;
            Ok(vec![json!({
                "check": "witness-separating",
                "level": level.get(),
                "n": n,
                "x": x.to_json(model),
                "y": y.to_json(model),
            })])
        }
    }
}
