use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gdrst_core::{SkylineCache, SkylineQuery, DEFAULT_CACHE_CAPACITY};
use gdrst_workbench::bench::{run_algorithm, write_csv};
use gdrst_workbench::dataset::{read, write};
use gdrst_workbench::generator::{default_poi_counts, parse_poi_counts, BBox};
use gdrst_workbench::{
    cache_experiment, generate_dataset, parse_queries, parse_schedule, run_benchmark, summarize, synthetic_workload,
    Algorithm, BenchConfig, CacheConfig, Dataset, GeneratorSpec, WorkbenchError, WorkbenchResult,
};

/// Goal-directed skyline queries over road networks.
#[derive(Debug, Parser)]
#[command(name = "gdrst", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset (nodes.csv, edges.csv, pois.csv).
    Gen(GenArgs),
    /// Run one query and print its skyline.
    Query(QueryArgs),
    /// Replay a query file and emit per-run metrics as CSV.
    Bench(BenchArgs),
    /// Replay a query file through one cache with scheduled traffic updates.
    CacheBench(CacheBenchArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    #[arg(long)]
    nodes_file: PathBuf,
    #[arg(long)]
    edges_file: PathBuf,
    #[arg(long)]
    pois_file: PathBuf,
    /// Grid cell edge in degrees.
    #[arg(long)]
    cell_size: Option<f64>,
}

impl DataArgs {
    fn load(&self) -> WorkbenchResult<Dataset> {
        if let Some(c) = self.cell_size {
            if !(c.is_finite() && c > 0.0) {
                return Err(WorkbenchError::Usage(format!("cell size must be positive, got {c}")));
            }
        }
        Dataset::load(&self.nodes_file, &self.edges_file, &self.pois_file, self.cell_size)
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 1_000)]
    nodes: usize,
    #[arg(long, default_value_t = 1.3)]
    edge_factor: f64,
    /// lat_min,lon_min,lat_max,lon_max
    #[arg(long)]
    bbox: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// category:count,...
    #[arg(long)]
    pois: Option<String>,
    /// `paper`: 21,050 nodes and 21,693 edges; overrides --nodes and --edge-factor.
    #[arg(long)]
    preset: Option<String>,
    /// Also write a queries.txt workload with this many queries.
    #[arg(long)]
    queries: Option<usize>,
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    query: String,
    #[arg(long, default_value_t = DEFAULT_CACHE_CAPACITY)]
    cache_capacity: usize,
    #[arg(long, default_value = "gdrst")]
    algorithm: String,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    queries_file: PathBuf,
    #[arg(long, default_value = "gdrst,bbs,oracle")]
    algorithms: String,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Output path; stdout when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Require identical member sets across algorithms.
    #[arg(long)]
    compare: bool,
    #[arg(long, default_value_t = 0)]
    cache_capacity: usize,
    #[arg(long)]
    parallel: bool,
    /// Where a failing comparison's reproducer is written.
    #[arg(long, default_value = "counterexample")]
    dump_dir: PathBuf,
}

#[derive(Debug, Args)]
struct CacheBenchArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    queries_file: PathBuf,
    #[arg(long)]
    schedule: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CACHE_CAPACITY)]
    cache_capacity: usize,
    /// Changed-edge fraction below which cached entries survive an update.
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Check recomputed answers against the oracle.
    #[arg(long)]
    verify: bool,
}

fn csv_sink(path: &Option<PathBuf>) -> WorkbenchResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| WorkbenchError::io(p, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn gen(args: GenArgs) -> WorkbenchResult<()> {
    let mut spec = match args.preset.as_deref() {
        Some("paper") => GeneratorSpec::full_scale(args.seed),
        Some(other) => return Err(WorkbenchError::Usage(format!("unknown preset {other:?}"))),
        None => GeneratorSpec {
            node_count: args.nodes,
            edge_factor: args.edge_factor,
            bbox: BBox::SOCAL,
            poi_counts: default_poi_counts(),
            seed: args.seed,
        },
    };
    if let Some(b) = &args.bbox {
        spec.bbox = BBox::parse(b)?;
    }
    if let Some(p) = &args.pois {
        spec.poi_counts = parse_poi_counts(p)?;
    }
    let data = generate_dataset(&spec)?;
    let dir = &args.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| WorkbenchError::io(dir, e))?;
    write(&dir.join("nodes.csv"), &data.nodes)?;
    write(&dir.join("edges.csv"), &data.edges)?;
    write(&dir.join("pois.csv"), &data.pois)?;
    if let Some(n) = args.queries {
        let net = gdrst_core::load_network(&data.nodes, &data.edges).map_err(|e| WorkbenchError::data("network", e))?;
        write(&dir.join("queries.txt"), &synthetic_workload(&net, n, spec.seed))?;
    }
    eprintln!("{} nodes, {} edges written to {}", spec.node_count, data.edge_count, dir.display());
    Ok(())
}

fn query(args: QueryArgs) -> WorkbenchResult<()> {
    let ds = args.data.load()?;
    let q = SkylineQuery::parse(&args.query).map_err(|e| WorkbenchError::data("query", e))?;
    let alg: Algorithm = args.algorithm.parse()?;
    let cache = SkylineCache::new(args.cache_capacity);
    let (r, _) = run_algorithm(&ds, &cache, alg, &q).map_err(|e| WorkbenchError::data("query", e))?;
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    let schema = q.schema();
    let mut out = io::stdout().lock();
    let header: Vec<String> = schema.iter().map(|d| format!("{}({})", d.name, d.sense.as_str())).collect();
    let _ = writeln!(out, "poi_id\t{}", header.join("\t"));
    for m in &r.members {
        let vals: Vec<String> = (0..schema.len()).map(|i| m.natural(i).to_string()).collect();
        let _ = writeln!(out, "{}\t{}", m.owner, vals.join("\t"));
    }
    eprintln!(
        "{} member(s), {} expansions, {} ns, revision {}",
        r.members.len(),
        r.expansions,
        r.cpu_nanos,
        r.revision
    );
    Ok(())
}

fn bench(args: BenchArgs) -> WorkbenchResult<()> {
    let ds = args.data.load()?;
    let queries = parse_queries(&read(&args.queries_file)?)?;
    let config = BenchConfig {
        algorithms: Algorithm::parse_list(&args.algorithms)?,
        repetitions: args.reps,
        compare: args.compare,
        cache_capacity: args.cache_capacity,
        parallel: args.parallel,
    };
    let report = run_benchmark(&ds, &queries, &config)?;
    write_csv(csv_sink(&args.csv)?, &report.records)?;
    if let Some(cx) = report.mismatch {
        cx.write_to(&args.dump_dir)?;
        return Err(WorkbenchError::Mismatch(format!(
            "{}\nreproducer written to {}",
            cx.summary(),
            args.dump_dir.display()
        )));
    }
    for s in summarize(&report.records) {
        eprintln!(
            "{:<7} rows {:>6}  median expansions {:>12.1}  median cpu {:>12.0} ns",
            s.algorithm.as_str(),
            s.rows,
            s.median_expansions,
            s.median_cpu_nanos
        );
    }
    Ok(())
}

fn cache_bench(args: CacheBenchArgs) -> WorkbenchResult<()> {
    let mut ds = args.data.load()?;
    let queries = parse_queries(&read(&args.queries_file)?)?;
    let schedule = match &args.schedule {
        Some(p) => parse_schedule(&read(p)?)?,
        None => Default::default(),
    };
    let config =
        CacheConfig { capacity: args.cache_capacity, changed_edge_fraction: args.threshold, verify: args.verify };
    let (records, _) = cache_experiment(&mut ds, &queries, &config, &schedule)?;
    write_csv(csv_sink(&args.csv)?, &records)?;
    let hits = records.iter().filter(|r| r.cache_hit).count();
    eprintln!("{hits} hit(s) out of {} queries", records.len());
    Ok(())
}

fn run(cli: Cli) -> WorkbenchResult<()> {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Query(a) => query(a),
        Command::Bench(a) => bench(a),
        Command::CacheBench(a) => cache_bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
