use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use sheafrig::associated::extend_associated;
use sheafrig::graphs::{generate_tight, is_sparse, is_sparse_hypergraph, multiply_edges, ExtensionMove};
use sheafrig::io::{
    incidence_to_dot, multigraph_to_dot, subspace_from_json, ArrangementJson, AssociatedSpecJson, FrameworkJson, GraphJson, JsonRational, MotionSpecJson,
};
use sheafrig::lie::{bar_joint_spec, parallel_spec, Arrangement, EuclideanModel, ParallelModel};
use sheafrig::motion::{analyze, check_main_theorem, maxwell_defect, necessary_condition, MotionSheafSpec};
use sheafrig::motion_ext::{check_motion_extension, extend_motion};
use sheafrig::{associated, Error, Result, VERSION};

#[derive(Parser)]
#[command(name = "sheafrig", version = VERSION, about = "Exact infinitesimal rigidity checks via cellular sheaf cohomology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Model {
    Euclidean,
    Parallel,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology and rigidity verdict of a motion sheaf, framework or arrangement.
    Analyze(AnalyzeArgs),
    /// (d, ℓ)-sparsity of a graph or uniform hypergraph.
    Sparsity(SparsityArgs),
    /// Random (n−1, n)-tight multigraph grown from K₂ⁿ⁻².
    Generate(GenerateArgs),
    /// Apply a list of extension moves to an associated or motion spec.
    Extend(ExtendArgs),
    /// Compare sampled independence with sparsity of (n−2)Γ.
    Maintheorem(MainTheoremArgs),
    /// Parallel redrawings of a point or subspace arrangement.
    Parallel(ParallelArgs),
}

#[derive(Args, Serialize)]
struct AnalyzeArgs {
    /// Motion-sheaf spec JSON.
    #[arg(long, conflicts_with_all = ["framework", "arrangement"])]
    spec: Option<PathBuf>,
    /// Bar-joint framework JSON.
    #[arg(long)]
    framework: Option<PathBuf>,
    /// Affine subspace arrangement JSON.
    #[arg(long, conflicts_with = "framework")]
    arrangement: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<Model>,
    /// Spatial dimension; must match the input when given.
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Args, Serialize)]
struct SparsityArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    l: usize,
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    vertices: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Serialize)]
struct ExtendArgs {
    /// Associated-sheaf spec JSON; moves are a list of extension moves.
    #[arg(long, conflicts_with = "motion")]
    associated: Option<PathBuf>,
    /// Motion-sheaf spec JSON; moves carry {"move", "new_subspace"}.
    #[arg(long)]
    motion: Option<PathBuf>,
    #[arg(long)]
    moves: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Serialize)]
struct MainTheoremArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Serialize)]
struct ParallelArgs {
    /// Graph JSON; a random arrangement is drawn from the seed.
    #[arg(long, conflicts_with = "arrangement")]
    graph: Option<PathBuf>,
    #[arg(long)]
    arrangement: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Dimension of the affine subspaces when sampling.
    #[arg(long, default_value_t = 0)]
    s: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(serde::Deserialize)]
struct MotionMoveJson {
    #[serde(rename = "move")]
    mv: ExtensionMove,
    new_subspace: Vec<Vec<JsonRational>>,
}

struct Output {
    result: Value,
    dot: Option<String>,
    seed: Option<u64>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

fn motion_report(spec: &MotionSheafSpec) -> Result<Value> {
    let verdict = analyze(spec)?;
    let condition = necessary_condition(spec).ok();
    Ok(merge(
        to_value(&verdict),
        json!({ "maxwell_defect": maxwell_defect(spec), "necessary_condition": condition }),
    ))
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<Output> {
    let (spec, graph) = if let Some(p) = &a.spec {
        let spec = parse::<MotionSpecJson>(p)?.to_spec()?;
        let g = spec.base().clone();
        (spec, g)
    } else if let Some(p) = &a.framework {
        if a.model == Some(Model::Parallel) {
            return Err(Error::InvalidInput(
                "frameworks use the euclidean model; pass --arrangement for parallel".into(),
            ));
        }
        let fw = parse::<FrameworkJson>(p)?.to_framework()?;
        if a.d.is_some_and(|d| d != fw.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "--d {} but the framework lives in dimension {}",
                a.d.unwrap(),
                fw.dim()
            )));
        }
        (bar_joint_spec(&EuclideanModel::new(fw.dim())?, &fw)?, fw.graph().clone())
    } else if let Some(p) = &a.arrangement {
        let arr = parse::<ArrangementJson>(p)?.to_arrangement()?;
        if a.d.is_some_and(|d| d != arr.ambient_dim()) {
            return Err(Error::DimensionMismatch("--d does not match the arrangement".into()));
        }
        (parallel_spec(&ParallelModel::new(arr.ambient_dim())?, &arr)?, arr.graph().clone())
    } else {
        return Err(Error::InvalidInput("give one of --spec, --framework or --arrangement".into()));
    };
    Ok(Output {
        result: motion_report(&spec)?,
        dot: Some(incidence_to_dot(&graph)),
        seed: None,
    })
}

fn labels_of(labels: &[sheafrig::graphs::Label], ids: &[usize]) -> Vec<sheafrig::graphs::Label> {
    ids.iter().map(|&i| labels[i].clone()).collect()
}

fn cmd_sparsity(a: &SparsityArgs) -> Result<Output> {
    let j: GraphJson = parse(&a.graph)?;
    let h = j.to_hypergraph()?;
    let rep = if h.is_graph() || h.edge_count() == 0 {
        is_sparse(&j.to_multigraph()?, a.d, a.l)?
    } else {
        is_sparse_hypergraph(&h, a.d, a.l)?
    };
    let witness = rep.violating_set.as_ref().map(|w| labels_of(h.labels(), w));
    let result = json!({ "sparse": rep.sparse, "tight": rep.tight, "witness": witness });
    Ok(Output {
        result,
        dot: Some(incidence_to_dot(&h)),
        seed: None,
    })
}

fn cmd_generate(a: &GenerateArgs) -> Result<Output> {
    let gen = generate_tight(a.n, a.vertices, a.seed)?;
    let result = json!({ "graph": GraphJson::from_multigraph(&gen.graph), "moves": gen.moves });
    Ok(Output {
        result,
        dot: Some(multigraph_to_dot(&gen.graph)),
        seed: Some(a.seed),
    })
}

fn cmd_extend(a: &ExtendArgs) -> Result<Output> {
    if let Some(p) = &a.associated {
        let Some(seed) = a.seed else {
            return Err(Error::InvalidInput("--seed is required when extending associated sheaves".into()));
        };
        let mut spec = parse::<AssociatedSpecJson>(p)?.to_spec()?;
        let moves: Vec<ExtensionMove> = parse(&a.moves)?;
        for (i, mv) in moves.iter().enumerate() {
            spec = extend_associated(&spec, mv, sheafrig::rng::derive_seed(seed, i as u64))?;
        }
        let dims = associated::associated_dims(&spec)?;
        let result = json!({ "spec": AssociatedSpecJson::from_spec(&spec), "h0": dims.h0, "h1": dims.h1 });
        return Ok(Output {
            result,
            dot: Some(multigraph_to_dot(spec.base())),
            seed: Some(seed),
        });
    }
    let Some(p) = &a.motion else {
        return Err(Error::InvalidInput("give --associated or --motion".into()));
    };
    let mut spec = parse::<MotionSpecJson>(p)?.to_spec()?;
    let moves: Vec<MotionMoveJson> = parse(&a.moves)?;
    let mut certificates = Vec::with_capacity(moves.len());
    for m in &moves {
        let sub = subspace_from_json(spec.ambient_dim(), &m.new_subspace)?;
        let cert = check_motion_extension(&spec, &m.mv, &sub)?;
        certificates.push(to_value(&cert));
        if !cert.valid() {
            let result = json!({ "certificates": certificates, "applied": false });
            return Ok(Output {
                result,
                dot: None,
                seed: a.seed,
            });
        }
        spec = extend_motion(&spec, &cert)?;
    }
    let result = json!({ "certificates": certificates, "applied": true, "spec": MotionSpecJson::from_spec(&spec), "verdict": analyze(&spec)? });
    Ok(Output {
        result,
        dot: Some(incidence_to_dot(spec.base())),
        seed: a.seed,
    })
}

fn cmd_maintheorem(a: &MainTheoremArgs) -> Result<Output> {
    let g = parse::<GraphJson>(&a.graph)?.to_multigraph()?;
    let rep = check_main_theorem(&g, a.n, a.trials, a.seed)?;
    Ok(Output {
        result: to_value(&rep),
        dot: Some(multigraph_to_dot(&g)),
        seed: Some(a.seed),
    })
}

fn cmd_parallel(a: &ParallelArgs) -> Result<Output> {
    let arr = match (&a.graph, &a.arrangement) {
        (Some(p), None) => {
            let (Some(n), Some(seed)) = (a.n, a.seed) else {
                return Err(Error::InvalidInput("sampling an arrangement needs --n and --seed".into()));
            };
            Arrangement::random(&parse::<GraphJson>(p)?.to_hypergraph()?, n, a.s, seed)?
        }
        (None, Some(p)) => parse::<ArrangementJson>(p)?.to_arrangement()?,
        _ => return Err(Error::InvalidInput("give --graph or --arrangement".into())),
    };
    let n = arr.ambient_dim();
    let spec = parallel_spec(&ParallelModel::new(n)?, &arr)?;
    let mut result = motion_report(&spec)?;
    if arr.subspaces().first().map_or(0, |s| s.dim()) == 0 && arr.graph().is_graph() {
        let g = arr.graph().to_multigraph()?;
        // Group of dimension n + 1 with one-dimensional point stabilizers: (n − 1)Γ against (n, n + 1).
        let general = is_sparse(&multiply_edges(&g, n - 1)?, n, n + 1)?.sparse;
        let literal = if n > 2 {
            Some(is_sparse(&multiply_edges(&g, n - 2)?, n, n + 1)?.sparse)
        } else {
            None
        };
        result = merge(result, json!({ "sparse_general_reading": general, "sparse_literal_reading": literal }));
    }
    Ok(Output {
        result,
        dot: Some(incidence_to_dot(arr.graph())),
        seed: a.seed,
    })
}

/// Hash of the command, its flags and the contents of every input file.
fn config_hash(command: &str, args: Value) -> Result<String> {
    let mut inputs = BTreeMap::new();
    if let Value::Object(m) = &args {
        for v in m.values() {
            if let Value::String(p) = v {
                let path = Path::new(p);
                if path.is_file() {
                    inputs.insert(p.clone(), hex(&Sha256::digest(fs::read(path)?)));
                }
            }
        }
    }
    let canonical = serde_json::to_string(&json!({ "command": command, "args": args, "inputs": inputs }))?;
    Ok(hex(&Sha256::digest(canonical.as_bytes())))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn write_atomic(path: &Path, body: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidInput(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

fn run(cli: &Cli) -> Result<String> {
    let (name, args, out) = match &cli.command {
        Command::Analyze(a) => ("analyze", to_value(a), cmd_analyze(a)),
        Command::Sparsity(a) => ("sparsity", to_value(a), cmd_sparsity(a)),
        Command::Generate(a) => ("generate", to_value(a), cmd_generate(a)),
        Command::Extend(a) => ("extend", to_value(a), cmd_extend(a)),
        Command::Maintheorem(a) => ("maintheorem", to_value(a), cmd_maintheorem(a)),
        Command::Parallel(a) => ("parallel", to_value(a), cmd_parallel(a)),
    };
    let out = out?;
    if cli.format == Format::Dot {
        return out.dot.ok_or_else(|| Error::InvalidInput(format!("{name} has no DOT output here")));
    }
    let mut report = Map::new();
    report.insert("tool".into(), json!("sheafrig"));
    report.insert("command".into(), json!(name));
    report.insert("tool_version".into(), json!(VERSION));
    report.insert("config_hash".into(), json!(config_hash(name, args)?));
    report.insert("seed".into(), json!(out.seed));
    let mut body = Value::Object(report);
    body = merge(
        body,
        if out.result.is_object() {
            out.result
        } else {
            json!({ "result": out.result })
        },
    );
    Ok(serde_json::to_string_pretty(&body)? + "\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|body| match &cli.out {
        Some(path) => write_atomic(path, &body),
        None => {
            print!("{body}");
            Ok(())
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 1 } else { 2 })
        }
    }
}
