mod json;
mod selftest;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperseg::centrality::pseudo_betweenness;
use hyperseg::dhrg::{self, Connection, DhrgInstance, DhrgModel, Radial};
use hyperseg::metrics::{compute_d_bound, growth_constant};
use hyperseg::rght::{Grid, GridParams, VertexAddress, VertexId};
use hyperseg::stg::{stg_distance, BinaryStg, RghtStg};
use hyperseg::{Error, Result};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hyperseg", version, about = "Hyperbolic grids, distance oracles and random graphs")]
struct Cli {
    /// Read flags from a JSON object instead of the command line.
    #[arg(long, value_name = "F", global = true)]
    config_json: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Triangulations of the hyperbolic plane.
    #[command(subcommand)]
    Grid(GridCommand),
    /// Binary grids of any dimension.
    #[command(subcommand)]
    Binary(BinaryCommand),
    /// Discrete hyperbolic random graphs.
    #[command(subcommand)]
    Dhrg(DhrgCommand),
    /// Pseudo-betweenness of every embedded vertex, as CSV.
    Betweenness {
        #[command(flatten)]
        files: GraphFiles,
        #[arg(long)]
        gamma: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Counting structures.
    #[command(subcommand)]
    Count(CountCommand),
    /// Compare the fast structures against brute force on small inputs.
    Selftest {
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum GridCommand {
    /// Ring sizes, type count, D-bound and growth constant as JSON.
    Info {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 5)]
        radius: u32,
    },
    /// Edges of a ball, one `ADDR1 ADDR2` pair per line.
    Export {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        radius: u32,
        #[arg(long, value_enum, default_value_t = ExportFormat::Edgelist)]
        format: ExportFormat,
    },
    /// Distance between two addresses (empty string for the root).
    Distance {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(allow_hyphen_values = true)]
        from: String,
        #[arg(allow_hyphen_values = true)]
        to: String,
    },
}

#[derive(Subcommand, Debug)]
enum BinaryCommand {
    /// Distance between two points given as lateral coordinates then depth.
    Distance {
        #[arg(long)]
        dims: usize,
        #[arg(num_args = 2.., required = true)]
        coords: Vec<i64>,
    },
}

#[derive(Subcommand, Debug)]
enum DhrgCommand {
    /// Sample a graph and its embedding.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_name = "F")]
        edges_out: PathBuf,
        #[arg(long, value_name = "F")]
        emb_out: PathBuf,
    },
    /// Log-likelihood of an embedded graph.
    Loglik {
        #[command(flatten)]
        files: GraphFiles,
        #[command(flatten)]
        conn: FitArgs,
    },
    /// Improve an embedding by local search.
    Embed {
        #[command(flatten)]
        files: GraphFiles,
        #[command(flatten)]
        conn: FitArgs,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_name = "F")]
        emb_out: PathBuf,
    },
    /// Expected average degree, degree by depth and clustering.
    Stats {
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Subcommand, Debug)]
enum CountCommand {
    /// Counter against brute-force enumeration.
    Selftest,
}

#[derive(Args, Debug, Clone, Copy)]
struct GridArgs {
    #[arg(long, default_value_t = 7)]
    q: u32,
    #[arg(long, default_value_t = 1)]
    a: u32,
    #[arg(long, default_value_t = 0)]
    b: u32,
}

impl GridArgs {
    fn build(self) -> Result<Grid> {
        Grid::new(GridParams::new(self.q, self.a, self.b))
    }
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    radius: u32,
    /// Depth weights grow as exp(alpha r); defaults to 0.75 ln(growth).
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long = "T", default_value_t = 1.0, allow_negative_numbers = true)]
    t: f64,
    #[arg(long = "Rprime", allow_negative_numbers = true)]
    rprime: Option<f64>,
}

impl ModelArgs {
    fn build(&self, grid: &Grid) -> Result<DhrgModel> {
        let alpha = self.alpha.unwrap_or_else(|| 0.75 * growth_constant(grid, 1e-12).ln());
        let shift = self.rprime.unwrap_or(-(self.radius as f64));
        DhrgModel::new(self.n, self.radius, Radial::Exponential { alpha }, Connection::Logistic { t: self.t, shift })
    }
}

#[derive(Args, Debug)]
struct GraphFiles {
    #[arg(long, value_name = "F")]
    edges: PathBuf,
    #[arg(long, value_name = "F")]
    emb: PathBuf,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Ball radius; defaults to the deepest embedded vertex.
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long = "T", default_value_t = 1.0, allow_negative_numbers = true)]
    t: f64,
    #[arg(long = "Rprime", allow_negative_numbers = true)]
    rprime: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ExportFormat {
    Edgelist,
    Dot,
}

/// Parse and execute; returns the process exit code.
pub fn run(argv: Vec<OsString>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => return clap_exit(e),
    };
    let cli = match cli.config_json {
        Some(path) if cli.command.is_none() => match config_argv(&argv[0], &path) {
            Ok(args) => match Cli::try_parse_from(args) {
                Ok(cli) => cli,
                Err(e) => return clap_exit(e),
            },
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        },
        Some(_) => {
            eprintln!("error: --config-json replaces the subcommand; give one or the other");
            return EXIT_USAGE;
        }
        None => cli,
    };
    let Some(command) = cli.command else {
        eprintln!("error: no subcommand given; see --help");
        return EXIT_USAGE;
    };
    match execute(command) {
        Ok(out) => {
            print!("{out}");
            out.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn clap_exit(e: clap::Error) -> i32 {
    let _ = e.print();
    if e.use_stderr() {
        EXIT_USAGE
    } else {
        0
    }
}

/// `{"command": "dhrg generate", "args": [...], "n": 10, "emb-out": "F", ...}`
/// becomes `dhrg generate --n 10 --emb-out F ... args...`.
fn config_argv(program: &OsString, path: &Path) -> Result<Vec<OsString>> {
    let text = fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(Error::Parse("config must be a JSON object".into()));
    };
    let mut argv = vec![program.clone()];
    match map.get("command") {
        Some(Value::String(c)) => argv.extend(c.split_whitespace().map(OsString::from)),
        _ => return Err(Error::Parse("config needs a \"command\" string".into())),
    }
    for (key, v) in &map {
        let flag = OsString::from(format!("--{}", key.replace('_', "-")));
        match (key.as_str(), v) {
            ("command" | "args", _) => {}
            (_, Value::Bool(true)) => argv.push(flag),
            (_, Value::Bool(false) | Value::Null) => {}
            (_, Value::String(s)) => argv.extend([flag, s.into()]),
            (_, Value::Number(n)) => argv.extend([flag, n.to_string().into()]),
            _ => return Err(Error::Parse(format!("unsupported value for \"{key}\""))),
        }
    }
    if let Some(args) = map.get("args") {
        let Value::Array(items) = args else {
            return Err(Error::Parse("\"args\" must be an array".into()));
        };
        for item in items {
            argv.push(match item {
                Value::String(s) => s.into(),
                other => other.to_string().into(),
            });
        }
    }
    Ok(argv)
}

enum Output {
    Text(String),
    Json(Value),
    Failed(Value),
}

impl Output {
    fn exit_code(&self) -> i32 {
        match self {
            Output::Failed(_) => EXIT_RUNTIME,
            _ => 0,
        }
    }
}

impl std::fmt::Display for Output {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Output::Text(s) => f.write_str(s),
            Output::Json(v) | Output::Failed(v) => writeln!(f, "{}", json::to_string(v)),
        }
    }
}

fn execute(command: Command) -> Result<Output> {
    match command {
        Command::Grid(GridCommand::Info { grid, radius }) => grid_info(grid, radius),
        Command::Grid(GridCommand::Export { grid, radius, format }) => grid_export(grid, radius, format),
        Command::Grid(GridCommand::Distance { grid, from, to }) => {
            let mut stg = RghtStg::new(grid.build()?)?;
            let v = stg.grid_mut().vertex_at(&VertexAddress::from_str(&from)?)?;
            let w = stg.grid_mut().vertex_at(&VertexAddress::from_str(&to)?)?;
            let (s, t) = (stg.vertex_node(v), stg.vertex_node(w));
            Ok(Output::Text(format!("{}\n", stg_distance(&mut stg, s, t))))
        }
        Command::Binary(BinaryCommand::Distance { dims, coords }) => {
            if coords.len() != 2 * dims {
                return Err(Error::InvalidParams(format!("expected {} coordinates, got {}", 2 * dims, coords.len())));
            }
            let mut stg = BinaryStg::new(dims)?;
            let point = |c: &[i64]| -> Result<_> {
                let depth = u32::try_from(c[dims - 1]).map_err(|_| Error::InvalidParams("negative depth".into()))?;
                stg.node(&c[..dims - 1], depth)
            };
            let (s, t) = (point(&coords[..dims])?, point(&coords[dims..])?);
            Ok(Output::Text(format!("{}\n", stg_distance(&mut stg, s, t))))
        }
        Command::Dhrg(cmd) => dhrg_command(cmd),
        Command::Betweenness { files, gamma, grid } => {
            let mut grid = grid.build()?;
            let positions = dhrg::read_embedding(&fs::read_to_string(&files.emb)?, &mut grid)?;
            // read for validation only
            dhrg::read_edges(&fs::read_to_string(&files.edges)?)?;
            let radius = positions.iter().map(|&v| grid.depth(v)).max().unwrap_or(0);
            let result = pseudo_betweenness(grid, &positions, radius, gamma)?;
            let mut out = String::from("id,score\n");
            for (i, s) in result.scores.iter().enumerate() {
                writeln!(out, "{},{}", i + 1, json::float(*s)).unwrap();
            }
            Ok(Output::Text(out))
        }
        Command::Count(CountCommand::Selftest) => Ok(selftest::run(Some("counter"))?),
        Command::Selftest { suite } => Ok(selftest::run(suite.as_deref())?),
    }
}

fn grid_info(args: GridArgs, radius: u32) -> Result<Output> {
    let mut grid = args.build()?;
    let ring_sizes: Vec<Value> = (0..=radius).map(|k| json::big(&grid.ring_size(k))).collect();
    let gamma = growth_constant(&grid, 1e-12);
    let type_count = grid.table().len();
    let d_bound = compute_d_bound(&mut grid)?;
    Ok(Output::Json(json!({
        "q": args.q, "a": args.a, "b": args.b,
        "ring_sizes": ring_sizes,
        "type_count": type_count,
        "d_bound": d_bound,
        "gamma": gamma,
    })))
}

fn grid_export(args: GridArgs, radius: u32, format: ExportFormat) -> Result<Output> {
    let mut grid = args.build()?;
    let ball = grid.ball(radius);
    let mut out = String::new();
    if format == ExportFormat::Dot {
        out.push_str("graph G {\n");
    }
    for &v in &ball {
        for w in grid.neighbors(v) {
            if grid.depth(w) > radius || !is_forward(&grid, v, w) {
                continue;
            }
            let (a, b) = (grid.address_of(v), grid.address_of(w));
            match format {
                ExportFormat::Edgelist => writeln!(out, "{a} {b}"),
                ExportFormat::Dot => writeln!(out, "  \"{a}\" -- \"{b}\";"),
            }
            .unwrap();
        }
    }
    if format == ExportFormat::Dot {
        out.push_str("}\n");
    }
    Ok(Output::Text(out))
}

// Orders the two ends of an undirected edge so each is written once.
fn is_forward(grid: &Grid, v: VertexId, w: VertexId) -> bool {
    (grid.depth(v), v.index()) < (grid.depth(w), w.index())
}

fn dhrg_command(cmd: DhrgCommand) -> Result<Output> {
    match cmd {
        DhrgCommand::Generate { model, seed, edges_out, emb_out } => {
            let grid = model.grid.build()?;
            let m = model.build(&grid)?;
            let inst = DhrgInstance::generate(m, grid, seed)?;
            fs::write(&edges_out, dhrg::write_edges(inst.edges()))?;
            fs::write(&emb_out, dhrg::write_embedding(inst.grid(), inst.positions()))?;
            Ok(Output::Json(json!({
                "n": inst.n(),
                "edges": inst.edges().len(),
                "loglik": inst.loglik(),
                "edge_histogram": inst.edge_histogram(),
            })))
        }
        DhrgCommand::Loglik { files, conn } => {
            let inst = load(&files, &conn)?;
            Ok(Output::Json(json!({
                "n": inst.n(),
                "edges": inst.edges().len(),
                "loglik": inst.loglik(),
                "edge_histogram": inst.edge_histogram(),
                "pair_histogram": inst.pair_histogram(),
            })))
        }
        DhrgCommand::Embed { files, conn, iters, seed, emb_out } => {
            let mut inst = load(&files, &conn)?;
            let initial = inst.loglik();
            let log = inst.local_search(iters, seed)?;
            fs::write(&emb_out, dhrg::write_embedding(inst.grid(), inst.positions()))?;
            Ok(Output::Json(json!({
                "initial_loglik": initial,
                "final_loglik": inst.loglik(),
                "iterations": iters,
                "accepted": log.iter().filter(|m| m.accepted).count(),
            })))
        }
        DhrgCommand::Stats { model } => {
            let grid = model.grid.build()?;
            let m = model.build(&grid)?;
            let s = dhrg::expected_stats(&m, grid)?;
            let clustering = if s.clustering.is_nan() { Value::Null } else { json!(s.clustering) };
            Ok(Output::Json(json!({
                "avg_degree": s.avg_degree,
                "degree_by_radius": s.degree_by_radius,
                "clustering": clustering,
                "wedge_probability": s.wedge_probability,
                "clustering_defined": !s.clustering.is_nan(),
            })))
        }
    }
}

fn load(files: &GraphFiles, fit: &FitArgs) -> Result<DhrgInstance> {
    let mut grid = fit.grid.build()?;
    let positions = dhrg::read_embedding(&fs::read_to_string(&files.emb)?, &mut grid)?;
    let edges = dhrg::read_edges(&fs::read_to_string(&files.edges)?)?;
    let deepest = positions.iter().map(|&v| grid.depth(v)).max().unwrap_or(0);
    let radius = fit.radius.unwrap_or(deepest);
    let shift = fit.rprime.unwrap_or(-(radius as f64));
    let n = positions.len();
    // the radial law does not enter the likelihood
    let radial = Radial::Exponential { alpha: 0.0 };
    let model = DhrgModel::new(n, radius, radial, Connection::Logistic { t: fit.t, shift })?;
    DhrgInstance::from_embedding(model, grid, positions, &edges)
}
