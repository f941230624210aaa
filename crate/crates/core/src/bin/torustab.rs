use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

use torustab::bracket::KeyConvention;
use torustab::enumerate::EnumConfig;
use torustab::pipeline::verify::verify;
use torustab::pipeline::{
    diagram_stats_file, projection_file, projection_stats_file, read_json, read_jsonl, stage_diagrams,
    stage_projections, DiagramConfig, DiagramRecord, DiagramStats, KeyLibrary, ProjectionRecord, ProjectionStats,
};
use torustab::{selfcheck, Result};

/// Tabulates knot and link projections and diagrams on the torus.
#[derive(Parser, Debug)]
#[command(name = "torustab", version, arg_required_else_help = true)]
struct Cli {
    /// Worker threads (TORUSTAB_THREADS takes precedence).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Run the randomized property checks with this seed before any command.
    #[arg(long, value_name = "SEED", num_args = 0..=1, default_missing_value = "0")]
    seed_check: Option<u64>,

    /// Trials per property check.
    #[arg(long, default_value_t = 1000, requires = "seed_check")]
    check_trials: usize,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
struct EnumArgs {
    /// Keep projections with an edge joining a vertex to itself.
    #[arg(long)]
    allow_loops: bool,
    /// Keep projections with a face of degree one.
    #[arg(long)]
    keep_monogons: bool,
}

impl EnumArgs {
    fn config(&self) -> EnumConfig {
        EnumConfig { allow_loops: self.allow_loops, forbid_monogons: !self.keep_monogons }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate unsensed projections and write proj_n<N>.jsonl.
    Projections {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        enumeration: EnumArgs,
    },
    /// Classify diagrams on the prime projections and write diag_n<N>.jsonl.
    /// Missing lower levels are computed first.
    Diagrams {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Key library directory [default: <out>/library].
        #[arg(long)]
        library_dir: Option<PathBuf>,
        /// Identify b with its complement.
        #[arg(long, action = ArgAction::Set, default_value_t = true)]
        global_switch: bool,
        /// Drop assignments with a Reidemeister II reducible bigon.
        #[arg(long, action = ArgAction::Set, default_value_t = true)]
        bigon_rule: bool,
        /// Drop link assignments where some component is never over or never under.
        #[arg(long, action = ArgAction::Set, default_value_t = true)]
        participation: bool,
        /// Identify link brackets that differ by a factor ±a^k.
        #[arg(long, action = ArgAction::Set, default_value_t = true)]
        shift_links: bool,
        /// Count the essential crossingless curve as known before level 1.
        #[arg(long, action = ArgAction::Set, default_value_t = true)]
        crossingless_seed: bool,
        /// Also write assignments rejected by the filters.
        #[arg(long)]
        all_assignments: bool,
        #[command(flatten)]
        enumeration: EnumArgs,
    },
    /// Compare stats files in <out> with the reference tables.
    Verify {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Levels to check [default: every level with a stats file].
        #[arg(long)]
        n: Vec<usize>,
    },
    /// Pretty-print records of a dataset file.
    Show {
        file: PathBuf,
        /// 1-based record index (the header is not counted).
        #[arg(long, conflicts_with = "id")]
        index: Option<usize>,
        /// Projection id or prefix.
        #[arg(long)]
        id: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("TORUSTAB_THREADS").ok().and_then(|v| v.parse().ok()).or(cli.threads);
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(seed) = cli.seed_check {
        let outcomes = selfcheck::run(seed, cli.check_trials)?;
        let mut ok = true;
        for o in &outcomes {
            let verdict = if o.passed() { "pass" } else { "FAIL" };
            println!("{verdict}: {} ({} trials, {} failures)", o.name, o.trials, o.failures);
            ok &= o.passed();
        }
        if !ok {
            return Ok(ExitCode::FAILURE);
        }
    }
    let Some(command) = cli.command else { return Ok(ExitCode::SUCCESS) };
    match command {
        Command::Projections { n, out, enumeration } => {
            let stats = stage_projections(n, enumeration.config(), &out)?;
            print_projection_stats(&stats);
            println!("wrote {}", projection_file(&out, n).display());
        }
        Command::Diagrams {
            n,
            out,
            library_dir,
            global_switch,
            bigon_rule,
            participation,
            shift_links,
            crossingless_seed,
            all_assignments,
            enumeration,
        } => {
            let config = DiagramConfig {
                global_switch,
                bigon_rule,
                participation,
                keep_rejected: all_assignments,
                keys: KeyConvention { shift_links },
                crossingless_seed,
            };
            let library_dir = library_dir.unwrap_or_else(|| out.join("library"));
            let mut library = KeyLibrary::load(&library_dir)?;
            for k in 1..=n {
                if k < n && library.has_level(k) {
                    continue;
                }
                if !projection_file(&out, k).exists() {
                    stage_projections(k, enumeration.config(), &out)?;
                }
                let stats = stage_diagrams(k, &config, &out, &mut library, &library_dir)?;
                print_diagram_stats(&stats);
            }
        }
        Command::Verify { out, n } => {
            let levels: Vec<usize> = if n.is_empty() { (1..=64).collect() } else { n };
            let mut projections = Vec::new();
            let mut diagrams = Vec::new();
            for k in levels {
                let p = projection_stats_file(&out, k);
                if p.exists() {
                    projections.push(read_json::<ProjectionStats>(&p)?);
                }
                let d = diagram_stats_file(&out, k);
                if d.exists() {
                    diagrams.push(read_json::<DiagramStats>(&d)?);
                }
            }
            let report = verify(&projections, &diagrams);
            if report.cells.is_empty() {
                println!("no comparable stats found in {}", out.display());
            }
            for cell in &report.cells {
                println!("{cell}");
            }
            if !report.is_clean() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Show { file, index, id } => show(&file, index, id.as_deref())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn print_projection_stats(s: &ProjectionStats) {
    println!(
        "n={} unsensed={} removed_comp={} removed_split={} prime={} knots={} links={}",
        s.n, s.unsensed, s.removed_comp, s.removed_split, s.prime_total, s.prime_knots, s.prime_links
    );
    if !s.link_components.is_empty() {
        let parts: Vec<String> = s.link_components.iter().map(|(c, k)| format!("c={c}:{k}")).collect();
        println!("  links by components: {}", parts.join(" "));
    }
}

fn print_diagram_stats(s: &DiagramStats) {
    println!(
        "n={} projections={} assignments={} survivors={} new_knots={} new_links={}",
        s.n, s.projections, s.assignments, s.survivors, s.new_knots, s.new_links
    );
}

fn show(file: &Path, index: Option<usize>, id: Option<&str>) -> Result<()> {
    let (header, rows) = read_jsonl::<serde_json::Value>(file)?;
    println!("{}", serde_json::to_string_pretty(&header).expect("plain data"));
    let selected: Vec<&serde_json::Value> = match (index, id) {
        (Some(i), _) => rows.get(i.wrapping_sub(1)).into_iter().collect(),
        (None, Some(prefix)) => rows
            .iter()
            .filter(|r| {
                let field = r.get("id").or_else(|| r.get("projection_id"));
                field.and_then(|v| v.as_str()).is_some_and(|s| s.starts_with(prefix))
            })
            .collect(),
        (None, None) => rows.iter().take(1).collect(),
    };
    if selected.is_empty() {
        println!("no matching record ({} records in file)", rows.len());
    }
    for row in selected {
        println!("{}", serde_json::to_string_pretty(row).expect("plain data"));
        if header.format == "projections" {
            let rec: ProjectionRecord = serde_json::from_value(row.clone()).map_err(|e| {
                torustab::Error::Format { path: file.to_path_buf(), line: 0, message: e.to_string() }
            })?;
            println!("alpha = {}", rec.alpha);
            println!("sigma = {}", rec.sigma);
        } else if let Ok(rec) = serde_json::from_value::<DiagramRecord>(row.clone()) {
            if let Some(sk) = rec.skeleton {
                println!("skeleton = {:?}", sk.0);
            }
        }
    }
    Ok(())
}
