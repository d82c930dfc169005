//! `mvv`: analyze center arrangements, generate instances, synthesize and
//! triangulate scenes, and run verification sweeps.

mod fixtures;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use mvv_core::arrangement::{analyze, AnalyzeOptions, ArrangementError, Caps, CenterArrangement};
use mvv_core::sample::{Sampler, DEFAULT_ENTRY_BOUND};
use mvv_core::subspace::{Dim, Subspace};
use mvv_core::triangulation::{ImageTuple, Scene, TriangulationError};
use mvv_core::verify;

#[derive(Parser)]
#[command(name = "mvv", version, about = "Exact analysis of multiview center arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for every sampled choice; MVV_SEED overrides it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Entries of sampled matrices are drawn from [-b, b].
    #[arg(long, default_value_t = DEFAULT_ENTRY_BOUND)]
    entry_bound: i64,
    /// Largest n for set-partition enumeration.
    #[arg(long, default_value_t = Caps::default().partitions)]
    partition_cap: usize,
    /// Largest n for the exhaustive feasibility search.
    #[arg(long, default_value_t = Caps::default().feasibility)]
    feasibility_cap: usize,
}

impl Common {
    fn caps(&self) -> Caps {
        Caps {
            partitions: self.partition_cap,
            feasibility: self.feasibility_cap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute every invariant of an arrangement (or of a scene's centers).
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: Dim,
        /// Trials for the sampled ell oracle (at least 10 are used).
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sample an arrangement, or a scene with --scene.
    Gen {
        #[arg(long = "N")]
        ambient: usize,
        /// Center dimensions, e.g. 2,2,1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        centers: Vec<Dim>,
        #[arg(long)]
        scene: bool,
        /// Image dimensions h_i of the cameras, e.g. 2,2.
        #[arg(long, value_delimiter = ',')]
        cameras: Vec<usize>,
        #[arg(long)]
        k: Option<Dim>,
        #[command(flatten)]
        common: Common,
    },
    /// Project a world k-plane through every camera of a scene.
    Synthesize {
        #[arg(long)]
        scene: PathBuf,
        /// World plane as subspace JSON; a generic plane is sampled if omitted.
        #[arg(long)]
        plane: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Recover the world k-plane from an image tuple.
    Triangulate {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        tuple: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized oracle sweeps and worked-example replay.
    Verify {
        /// Random instances (defaults to 100, or 0 with --paper-examples).
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long = "maxN", default_value_t = 5)]
        max_ambient: usize,
        #[arg(long = "maxn", default_value_t = 4)]
        max_centers: usize,
        #[arg(long)]
        paper_examples: bool,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    UnderDetermined(String),
    Inconsistent(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::UnderDetermined(_) => 2,
            Failure::Inconsistent(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::UnderDetermined(m)
            | Failure::Inconsistent(m)
            | Failure::Budget(m) => m,
        }
    }
}

impl From<ArrangementError> for Failure {
    fn from(e: ArrangementError) -> Self {
        match e {
            ArrangementError::PartitionBudgetExceeded { .. }
            | ArrangementError::FeasibilityBudgetExceeded { .. } => Failure::Budget(e.to_string()),
            ArrangementError::Inconsistent { .. } => Failure::Inconsistent(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<TriangulationError> for Failure {
    fn from(e: TriangulationError) -> Self {
        match e {
            TriangulationError::UnderDetermined { .. } => Failure::UnderDetermined(e.to_string()),
            TriangulationError::Inconsistent { .. } => Failure::Inconsistent(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mvv: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

/// `--seed`, unless `MVV_SEED` is set.
fn effective_seed(flag: u64) -> Result<u64, Failure> {
    match std::env::var("MVV_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("MVV_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn meta(command: &str, seed: u64, trials: Option<usize>, common: &Common) -> Value {
    json!({
        "command": command,
        "seed": seed,
        "trials": trials,
        "entry_bound": common.entry_bound,
        "caps": common.caps(),
        "version": mvv_core::VERSION,
    })
}

/// Serializes `body` as an object and adds `"meta"`.
fn with_meta<T: Serialize>(body: &T, meta: Value) -> Value {
    let mut v = serde_json::to_value(body).expect("serializable output");
    match &mut v {
        Value::Object(map) => {
            map.insert("meta".into(), meta);
            v
        }
        other => json!({ "result": other.take(), "meta": meta }),
    }
}

fn emit(value: &Value, out: Option<&Path>) -> Outcome {
    let text = serde_json::to_string_pretty(value).expect("json") + "\n";
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text).map_err(|m| Failure::Usage(format!("{}: {m}", path.display())))
}

/// Parses JSON, reporting line, column and the path of the offending field.
pub(crate) fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            e.inner().to_string()
        } else {
            format!("field `{path}`: {}", e.inner())
        }
    })
}

/// An arrangement file, or the centers of a scene file.
fn read_arrangement(path: &Path) -> Result<CenterArrangement, Failure> {
    let raw: Value = read_json(path)?;
    if raw.get("cameras").is_some() {
        let scene: Scene = read_json(path)?;
        return scene.arrangement().map_err(Failure::from);
    }
    read_json(path)
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Analyze {
            input,
            k,
            trials,
            common,
        } => cmd_analyze(&input, k, trials, &common),
        Command::Gen {
            ambient,
            centers,
            scene,
            cameras,
            k,
            common,
        } => cmd_gen(ambient, &centers, scene, &cameras, k, &common),
        Command::Synthesize {
            scene,
            plane,
            common,
        } => cmd_synthesize(&scene, plane.as_deref(), &common),
        Command::Triangulate {
            scene,
            tuple,
            common,
        } => cmd_triangulate(&scene, &tuple, &common),
        Command::Verify {
            cases,
            max_ambient,
            max_centers,
            paper_examples,
            common,
        } => cmd_verify(
            cases.unwrap_or(if paper_examples { 0 } else { 100 }),
            max_ambient,
            max_centers,
            paper_examples,
            &common,
        ),
    }
}

fn cmd_analyze(input: &Path, k: Dim, trials: usize, common: &Common) -> Outcome {
    let seed = effective_seed(common.seed)?;
    let arr = read_arrangement(input)?;
    let opts = AnalyzeOptions {
        seed,
        trials,
        caps: common.caps(),
    };
    let trials = trials.max(mvv_core::arrangement::MIN_ORACLE_TRIALS);
    match analyze(&arr, k, &opts) {
        Ok(report) => emit(&with_meta(&report, meta("analyze", seed, Some(trials), common)), common.out.as_deref()),
        Err(ArrangementError::Inconsistent {
            check,
            expected,
            found,
            report,
        }) => {
            let mut v = with_meta(&*report, meta("analyze", seed, Some(trials), common));
            v["status"] = json!("inconsistent");
            emit(&v, common.out.as_deref())?;
            Err(Failure::Inconsistent(format!(
                "cross-check `{check}` failed: {expected} vs {found}"
            )))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_gen(
    ambient: usize,
    centers: &[Dim],
    scene: bool,
    cameras: &[usize],
    k: Option<Dim>,
    common: &Common,
) -> Outcome {
    let seed = effective_seed(common.seed)?;
    if common.entry_bound < 2 {
        return Err(Failure::Usage("--entry-bound must be at least 2".into()));
    }
    let mut s = Sampler::with_bound(seed, 0, common.entry_bound);
    let m = meta("gen", seed, None, common);
    if scene {
        let k = k.ok_or_else(|| Failure::Usage("--scene needs --k".into()))?;
        if cameras.is_empty() {
            return Err(Failure::Usage("--scene needs --cameras h_1,...,h_n".into()));
        }
        if let Some(&h) = cameras.iter().find(|&&h| h > ambient || (h as Dim) < k) {
            return Err(Failure::Usage(format!(
                "image dimension {h} must satisfy k <= h <= N (k = {k}, N = {ambient})"
            )));
        }
        let sc = Scene::sample(&mut s, ambient, k, cameras)?;
        return emit(&with_meta(&sc, m), common.out.as_deref());
    }
    if centers.is_empty() {
        return Err(Failure::Usage("--centers needs at least one dimension".into()));
    }
    let max = ambient as Dim - k.unwrap_or(0) - 1;
    if let Some(&d) = centers.iter().find(|&&d| d < -1 || d > max) {
        return Err(Failure::Usage(format!(
            "center dimension {d} must lie in -1..={max} (dim c_i <= N-k-1)"
        )));
    }
    let cs: Vec<Subspace> = centers.iter().map(|&d| s.subspace(ambient, d)).collect();
    let arr = CenterArrangement::new(ambient, cs)?.assume_generic();
    emit(&with_meta(&arr, m), common.out.as_deref())
}

fn cmd_synthesize(scene_path: &Path, plane: Option<&Path>, common: &Common) -> Outcome {
    let seed = effective_seed(common.seed)?;
    let scene: Scene = read_json(scene_path)?;
    let world = match plane {
        Some(p) => read_json::<Subspace>(p)?,
        None => {
            let arr = scene.arrangement()?;
            Sampler::with_bound(seed, 0, common.entry_bound.max(2))
                .subspace_avoiding(scene.ambient(), scene.k(), arr.centers())
                .ok_or_else(|| Failure::Usage("no center-avoiding plane found".into()))?
        }
    };
    let tuple = scene.synthesize(&world)?;
    let mut v = with_meta(&tuple, meta("synthesize", seed, None, common));
    v["world"] = serde_json::to_value(&world).expect("json");
    emit(&v, common.out.as_deref())
}

fn cmd_triangulate(scene_path: &Path, tuple_path: &Path, common: &Common) -> Outcome {
    let seed = effective_seed(common.seed)?;
    let scene: Scene = read_json(scene_path)?;
    let tuple: ImageTuple = read_json(tuple_path)?;
    let m = meta("triangulate", seed, None, common);
    match scene.triangulate(&tuple) {
        Ok(plane) => emit(
            &json!({ "status": "ok", "plane": plane, "meta": m }),
            common.out.as_deref(),
        ),
        Err(e @ (TriangulationError::UnderDetermined { dim } | TriangulationError::Inconsistent { dim })) => {
            let status = if matches!(e, TriangulationError::UnderDetermined { .. }) {
                "under-determined"
            } else {
                "inconsistent"
            };
            emit(
                &json!({ "status": status, "dim": dim, "meta": m }),
                common.out.as_deref(),
            )?;
            Err(e.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_verify(
    cases: usize,
    max_ambient: usize,
    max_centers: usize,
    with_examples: bool,
    common: &Common,
) -> Outcome {
    let seed = effective_seed(common.seed)?;
    if max_ambient < 1 || max_centers < 1 {
        return Err(Failure::Usage("--maxN and --maxn must be at least 1".into()));
    }
    let caps = common.caps();
    let sweep = verify::sweep(cases, max_ambient, max_centers, seed, &caps);
    let mut body = Map::new();
    let mut passed = sweep.passed();
    body.insert("sweep".into(), serde_json::to_value(&sweep).expect("json"));
    if with_examples {
        let examples = verify::paper_examples(&caps);
        let replays = fixtures::replay_all(seed, &caps);
        passed &= examples.iter().all(|o| o.passed) && replays.iter().all(|r| r.passed);
        body.insert("paper_examples".into(), serde_json::to_value(&examples).expect("json"));
        body.insert("fixtures".into(), serde_json::to_value(&replays).expect("json"));
    }
    body.insert("passed".into(), json!(passed));
    let v = with_meta(&Value::Object(body), meta("verify", seed, Some(verify::ORACLE_TRIALS), common));
    emit(&v, common.out.as_deref())?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Inconsistent("verification found failures; see report".into()))
    }
}
