//! The `weakdiam` command line.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::colorer::{colour_bounded_treewidth, colour_partitioned, colour_strong, Certified};
use crate::colouring::{brute_force_optimal_d, monochromatic_components, verify_mrd, DEFAULT_BRUTE_FORCE_LIMIT};
use crate::decomposition::{part_centre, validate_td, Partition, TreeDecomposition, DEFAULT_TREEWIDTH_LIMIT};
use crate::generators::{self, rng};
use crate::graph::{all_pairs_distances, DistanceMatrix, VertexId, WeightedGraph};
use crate::io;
use crate::rational::{Distance, Rational};
use crate::reductions::{exponential_grid_weighting, integerize, minor_weighting, subdivision_blowup, MinorModel};
use crate::rerouting::Mode;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input or a failed precondition; exit code 2.
    #[error("{0}")]
    Input(String),
    /// A verification that ran and failed; exit code 1.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

fn input<E: std::fmt::Display>(context: impl std::fmt::Display) -> impl FnOnce(E) -> CliError {
    move |e| CliError::Input(format!("{context}: {e}"))
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "weakdiam", version, about = "Weak-diameter colourings of weighted graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance.
    Gen(GenArgs),
    /// Colour a graph for each radius and write certificates.
    Color(ColorArgs),
    /// Check a colouring against a weak-diameter bound.
    Verify(VerifyArgs),
    /// Exact minimum weak diameter over all m-colourings of a small graph.
    Oracle(OracleArgs),
    /// Run a pipeline over an instance family and print CSV.
    Bench(BenchArgs),
    /// Reweight or subdivide a graph.
    Reduce(ReduceArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Fast,
    Test,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Fast => Mode::Fast,
            ModeArg::Test => Mode::Test,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Grid,
    Tree,
    RandomConnected,
    Subdivide,
    ExpGrid,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub kind: GenKind,
    /// Number of vertices (tree, random-connected).
    #[arg(long)]
    pub n: Option<u64>,
    /// Grid side.
    #[arg(long)]
    pub m: Option<u64>,
    /// Grid dimension.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Extra chords for random-connected.
    #[arg(long, default_value_t = 0)]
    pub extra: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Root of the exponential grid.
    #[arg(long, default_value_t = 0)]
    pub root: u64,
    /// Input graph (subdivide).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decomposition of the tree, or of the row quotient of a 2-d grid.
    #[arg(long)]
    pub td_out: Option<PathBuf>,
    /// Row partition of a 2-d grid.
    #[arg(long)]
    pub partition_out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pipeline {
    Treewidth,
    Partition,
    Strong,
}

impl Pipeline {
    fn name(self) -> &'static str {
        match self {
            Pipeline::Treewidth => "treewidth",
            Pipeline::Partition => "partition",
            Pipeline::Strong => "strong",
        }
    }
}

#[derive(Args, Debug)]
pub struct ColorArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Tree-decomposition of the graph (treewidth) or of the quotient.
    #[arg(long)]
    pub td: Option<PathBuf>,
    #[arg(long)]
    pub partition: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Pipeline::Treewidth)]
    pub pipeline: Pipeline,
    #[arg(long = "r", required = true)]
    pub r: Vec<Rational>,
    /// Width (treewidth, partition) or adhesion (strong); defaults to the
    /// decomposition's own.
    #[arg(long)]
    pub k: Option<usize>,
    /// Part radius bound; defaults to the largest part radius.
    #[arg(long)]
    pub ell: Option<Rational>,
    /// Largest graph for which a missing decomposition is computed exactly.
    #[arg(long, default_value_t = DEFAULT_TREEWIDTH_LIMIT)]
    pub limit: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
    pub mode: ModeArg,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub colouring: PathBuf,
    #[arg(long)]
    pub r: Rational,
    #[arg(long)]
    pub d: Rational,
    /// Also write the component CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub r: Rational,
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
    pub limit: usize,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// `<family>:<from>..<to>:<step>` with family trees, paths, random or grids.
    #[arg(long)]
    pub family: FamilySpec,
    #[arg(long = "r", required = true)]
    pub r: Vec<Rational>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Oracle column only for instances with at most this many vertices.
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
    pub limit: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Fast)]
    pub mode: ModeArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceOp {
    Minor,
    Integerize,
    Blowup,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(value_enum)]
    pub op: ReduceOp,
    /// The host graph G.
    #[arg(long)]
    pub graph: PathBuf,
    /// The minor H.
    #[arg(long)]
    pub minor: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<Rational>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Trees,
    Paths,
    Random,
    Grids,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub sizes: Vec<u64>,
}

impl FromStr for FamilySpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("expected <family>:<from>..<to>[:<step>], got `{s}`");
        let mut it = s.split(':');
        let family = match it.next() {
            Some("trees") => Family::Trees,
            Some("paths") => Family::Paths,
            Some("random") => Family::Random,
            Some("grids") => Family::Grids,
            Some(other) => return Err(format!("unknown family `{other}`")),
            None => return Err(bad()),
        };
        let (from, to) = it.next().and_then(|r| r.split_once("..")).ok_or_else(bad)?;
        let from: u64 = from.parse().map_err(|_| bad())?;
        let to: u64 = to.parse().map_err(|_| bad())?;
        let step: u64 = it.next().map_or(Ok(1), |x| x.parse()).map_err(|_| bad())?;
        if it.next().is_some() || step == 0 || from == 0 || from > to {
            return Err(bad());
        }
        Ok(FamilySpec { family, sizes: (from..=to).step_by(step as usize).collect() })
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(input(path.display()))
}

fn load_graph(path: &Path) -> Result<WeightedGraph> {
    io::read_graph(&read_file(path)?).map_err(input(path.display()))
}

fn load_td(path: &Path) -> Result<TreeDecomposition> {
    io::read_td(&read_file(path)?).map_err(input(path.display()))
}

fn load_parts(path: &Path) -> Result<io::PartFile> {
    io::read_parts(&read_file(path)?).map_err(input(path.display()))
}

/// Writes through a temporary file in the same directory and renames it.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(input(dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(input(dir.display()))?;
    tmp.write_all(contents.as_bytes()).map_err(input(path.display()))?;
    tmp.persist(path).map_err(input(path.display()))?;
    Ok(())
}

fn emit(out: &mut String, path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            out.push_str(contents);
            Ok(())
        }
    }
}

fn positive(r: &Rational) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(CliError::Input(format!("r must be positive, got {r}")))
    }
}

pub fn cmd_gen(args: &GenArgs, out: &mut String) -> Result<()> {
    let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| CliError::Input(format!("{flag} is required")));
    let graph = match args.kind {
        GenKind::Grid => {
            let m = need(args.m, "--m")?;
            if m == 0 || args.d == 0 {
                return Err(CliError::Input("grid needs d >= 1 and m >= 1".into()));
            }
            let g = generators::grid(args.d, m);
            if args.d == 2 {
                let (p, td) = generators::grid_rows(m);
                if let Some(path) = &args.partition_out {
                    write_atomic(path, &io::write_parts(&io::PartFile::from_partition(&p)))?;
                }
                if let Some(path) = &args.td_out {
                    write_atomic(path, &io::write_td(&td))?;
                }
            }
            g
        }
        GenKind::Tree => {
            let n = need(args.n, "--n")?;
            if n == 0 {
                return Err(CliError::Input("a tree needs n >= 1".into()));
            }
            let (g, td) = generators::random_tree(n, &mut rng(args.seed));
            if let Some(path) = &args.td_out {
                write_atomic(path, &io::write_td(&td))?;
            }
            g
        }
        GenKind::RandomConnected => {
            let n = need(args.n, "--n")?;
            if n == 0 {
                return Err(CliError::Input("a graph needs n >= 1".into()));
            }
            generators::random_connected(n, args.extra, &mut rng(args.seed))
        }
        GenKind::Subdivide => {
            let path = args.graph.as_ref().ok_or_else(|| CliError::Input("--graph is required".into()))?;
            subdivision_blowup(&load_graph(path)?).map_err(input("subdivide"))?.graph
        }
        GenKind::ExpGrid => {
            let m = need(args.m, "--m")?;
            exponential_grid_weighting(m, VertexId(args.root)).map_err(input("exp-grid"))?
        }
    };
    emit(out, args.out.as_deref(), &io::write_graph(&graph))
}

fn max_part_radius(g: &WeightedGraph, p: &Partition) -> Result<Rational> {
    let mut ell = Rational::zero();
    for part in p.parts() {
        let (radius, _) = part_centre(g, part).map_err(input("partition"))?;
        let radius = radius.as_finite().cloned().ok_or_else(|| CliError::Input("a part is disconnected".into()))?;
        ell = ell.max(radius);
    }
    Ok(ell)
}

fn file_stem(r: &Rational) -> String {
    r.to_string().replace('/', "_")
}

/// Runs the chosen pipeline once for each radius, writing
/// `colouring_r<r>.txt` and `certificate_r<r>.txt` into the output directory.
pub fn cmd_color(args: &ColorArgs, out: &mut String) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let dist = all_pairs_distances(&g);
    let mode = Mode::from(args.mode);
    for r in &args.r {
        positive(r)?;
    }
    let td = args.td.as_deref().map(load_td).transpose()?;
    let partition = match &args.partition {
        Some(path) => Some(load_parts(path)?.partition().map_err(input(path.display()))?),
        None => None,
    };
    let run = |r: &Rational| -> Result<Certified> {
        let res = match args.pipeline {
            Pipeline::Treewidth => {
                let td = match &td {
                    Some(td) => td.clone(),
                    None if g.vertex_count() <= args.limit => {
                        crate::decomposition::exact_tree_decomposition(&g, args.limit).map_err(input("treewidth"))?
                    }
                    None => {
                        return Err(CliError::Input(format!(
                            "no --td given and the graph has {} vertices, above the exact treewidth limit {}",
                            g.vertex_count(),
                            args.limit
                        )))
                    }
                };
                let k = match args.k {
                    Some(k) => k,
                    None => validate_td(&g, &td).map_err(input("decomposition"))?.width,
                };
                colour_bounded_treewidth(&g, &dist, Some(&td), k, r, mode)
            }
            Pipeline::Partition | Pipeline::Strong => {
                let p = partition.clone().ok_or_else(|| CliError::Input("--partition is required".into()))?;
                let td = td.clone().ok_or_else(|| CliError::Input("--td (of the quotient) is required".into()))?;
                let ell = match &args.ell {
                    Some(ell) => ell.clone(),
                    None => max_part_radius(&g, &p)?,
                };
                if r < &ell {
                    return Err(CliError::Input(format!("r = {r} is below the l-almost threshold l = {ell}")));
                }
                if args.pipeline == Pipeline::Partition {
                    let k = args.k.unwrap_or_else(|| td.width());
                    colour_partitioned(&g, &dist, p, td, k, &ell, r, mode)
                } else {
                    let k = args.k.unwrap_or_else(|| td.adhesion());
                    colour_strong(&g, &dist, p, td, k, &ell, r, mode)
                }
            }
        };
        res.map_err(input(format!("{} pipeline at r = {r}", args.pipeline.name())))
    };
    for r in &args.r {
        let cert = run(r)?;
        let achieved = achieved_d(&dist, &cert)?;
        let stem = file_stem(r);
        write_atomic(&args.out_dir.join(format!("colouring_r{stem}.txt")), &io::write_colouring(&cert.colouring))?;
        let mut certificate = io::write_certificate(&cert, args.pipeline.name());
        let _ = writeln!(certificate, "achieved {achieved}");
        write_atomic(&args.out_dir.join(format!("certificate_r{stem}.txt")), &certificate)?;
        let _ = writeln!(out, "r={r} certified_d={} achieved_d={achieved}", cert.bound);
        if !achieved.at_most(&cert.bound) {
            return Err(CliError::Failed(format!("achieved {achieved} exceeds the certified {}", cert.bound)));
        }
    }
    Ok(())
}

fn achieved_d(dist: &DistanceMatrix, cert: &Certified) -> Result<Distance> {
    Ok(monochromatic_components(dist, &cert.colouring, &cert.r).map_err(input("colouring"))?.max_weak_diameter())
}

/// Prints the component CSV; fails when a component exceeds `d`.
pub fn cmd_verify(args: &VerifyArgs, out: &mut String) -> Result<()> {
    positive(&args.r)?;
    if args.d.is_negative() {
        return Err(CliError::Input("d must be nonnegative".into()));
    }
    let g = load_graph(&args.graph)?;
    let c = io::read_colouring(&read_file(&args.colouring)?, None).map_err(input(args.colouring.display()))?;
    let dist = all_pairs_distances(&g);
    let verdict = verify_mrd(&dist, &c, &args.r, &Distance::finite(args.d.clone())).map_err(input("colouring"))?;
    let csv = io::report_csv(&verdict.report);
    if let Some(path) = &args.csv {
        write_atomic(path, &csv)?;
    }
    out.push_str(&csv);
    match verdict.violation {
        None => Ok(()),
        Some(v) => Err(CliError::Failed(format!(
            "component {} has {} and {} at distance {} > {}",
            v.component, v.u, v.v, v.distance, args.d
        ))),
    }
}

pub fn cmd_oracle(args: &OracleArgs, out: &mut String) -> Result<()> {
    positive(&args.r)?;
    if args.limit == 0 || args.m == 0 {
        return Err(CliError::Input("m and --limit must be at least 1".into()));
    }
    let g = load_graph(&args.graph)?;
    let d = brute_force_optimal_d(&all_pairs_distances(&g), args.m, &args.r, args.limit).map_err(input("oracle"))?;
    let _ = writeln!(out, "{d}");
    Ok(())
}

struct Instance {
    name: String,
    graph: WeightedGraph,
    td: TreeDecomposition,
    partition: Option<Partition>,
}

fn family_instances(spec: &FamilySpec, seed: u64) -> Result<Vec<Instance>> {
    let mut out = Vec::with_capacity(spec.sizes.len());
    for &n in &spec.sizes {
        let mut rng = rng(seed.wrapping_mul(1_000_003).wrapping_add(n));
        let inst = match spec.family {
            Family::Trees => {
                let (graph, td) = generators::random_tree(n, &mut rng);
                Instance { name: format!("tree-n{n}"), graph, td, partition: None }
            }
            Family::Paths => {
                let (graph, td) = (generators::path(n), path_decomposition(n));
                Instance { name: format!("path-n{n}"), graph, td, partition: None }
            }
            Family::Random => {
                if n as usize > DEFAULT_TREEWIDTH_LIMIT {
                    return Err(CliError::Input(format!("random instances need n <= {DEFAULT_TREEWIDTH_LIMIT}")));
                }
                let graph = generators::random_connected(n, n as usize / 2, &mut rng);
                let td = crate::decomposition::exact_tree_decomposition(&graph, DEFAULT_TREEWIDTH_LIMIT).map_err(input("treewidth"))?;
                Instance { name: format!("random-n{n}"), graph, td, partition: None }
            }
            Family::Grids => {
                let (p, td) = generators::grid_rows(n);
                Instance { name: format!("grid-m{n}"), graph: generators::grid(2, n), td, partition: Some(p) }
            }
        };
        out.push(inst);
    }
    Ok(out)
}

fn path_decomposition(n: u64) -> TreeDecomposition {
    let g = generators::path(n);
    let order: Vec<VertexId> = g.vertices().collect();
    crate::decomposition::elimination_decomposition(&g, &order)
}

/// CSV rows `instance,r,certified_d,achieved_d,oracle_d`; grid rows with
/// `r` below the part radius are omitted.
pub fn cmd_bench(args: &BenchArgs, out: &mut String) -> Result<()> {
    for r in &args.r {
        positive(r)?;
    }
    let mode = Mode::from(args.mode);
    let mut csv = String::from("instance,r,certified_d,achieved_d,oracle_d\n");
    for inst in family_instances(&args.family, args.seed)? {
        let dist = all_pairs_distances(&inst.graph);
        for r in &args.r {
            let cert = match &inst.partition {
                None => {
                    let k = inst.td.width().max(1);
                    colour_bounded_treewidth(&inst.graph, &dist, Some(&inst.td), k, r, mode)
                }
                Some(p) => {
                    let ell = max_part_radius(&inst.graph, p)?;
                    if r < &ell {
                        continue;
                    }
                    colour_partitioned(&inst.graph, &dist, p.clone(), inst.td.clone(), 1, &ell, r, mode)
                }
            }
            .map_err(input(format!("{} at r = {r}", inst.name)))?;
            let achieved = achieved_d(&dist, &cert)?;
            if !achieved.at_most(&cert.bound) {
                return Err(CliError::Failed(format!("{}: achieved {achieved} exceeds {}", inst.name, cert.bound)));
            }
            let oracle = if inst.graph.vertex_count() <= args.limit {
                brute_force_optimal_d(&dist, 2, r, args.limit).map_err(input("oracle"))?.to_string()
            } else {
                String::new()
            };
            let _ = writeln!(csv, "{},{r},{},{achieved},{oracle}", inst.name, cert.bound);
        }
    }
    emit(out, args.out.as_deref(), &csv)
}

pub fn cmd_reduce(args: &ReduceArgs, out: &mut String) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let text = match args.op {
        ReduceOp::Integerize => {
            let (w, k) = integerize(&g).map_err(input("integerize"))?;
            format!("# scale {k}\n{}", io::write_graph(&w))
        }
        ReduceOp::Blowup => io::write_graph(&subdivision_blowup(&g).map_err(input("blowup"))?.graph),
        ReduceOp::Minor => {
            let h_path = args.minor.as_ref().ok_or_else(|| CliError::Input("--minor is required".into()))?;
            let m_path = args.model.as_ref().ok_or_else(|| CliError::Input("--model is required".into()))?;
            let eps = args.epsilon.clone().ok_or_else(|| CliError::Input("--epsilon is required".into()))?;
            let h = load_graph(h_path)?;
            let (parts, map) = load_parts(m_path)?.model_parts().map_err(input(m_path.display()))?;
            let model = MinorModel::from_parts(&g, &h, parts, map);
            let mw = minor_weighting(&g, &h, &model, &eps).map_err(input("minor weighting"))?;
            let mut text = format!("# alpha {} beta {}\n", mw.map.alpha, mw.map.beta);
            for (x, y) in &mw.map.iota {
                let _ = writeln!(text, "# iota {x} {y}");
            }
            text + &io::write_graph(&mw.graph)
        }
    };
    emit(out, args.out.as_deref(), &text)
}

/// Runs a parsed command, appending anything meant for stdout to `out`.
pub fn run(cli: &Cli, out: &mut String) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Color(a) => cmd_color(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Reduce(a) => cmd_reduce(a, out),
    }
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut out = String::new();
    let result = run(&cli, &mut out);
    print!("{out}");
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
