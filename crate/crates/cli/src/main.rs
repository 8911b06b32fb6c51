//! `julia-shift`: build certified component trees, export the shift
//! coding, verify it, query χ, render covers and run the abstract oracle.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use julia_shift::coding::{ChiStatus, CodingError, PointSpec};
use julia_shift::config::{ConfigError, MapConfig};
use julia_shift::export::{coding_json, fmt_float, tree_json};
use julia_shift::map_model::MapError;
use julia_shift::oracle::{run_cases, OracleRun};
use julia_shift::puzzle_tree::{build_tree_shrinking, cantor_diagnostic, TreeError};
use julia_shift::render::{render_svg, ColorBy, RenderOptions};
use julia_shift::{assign_symbols, build_tree, chi, verify_semiconjugacy, Coding, ExactComplex, PuzzleTree};
use thiserror::Error;

const DEFAULT_DEPTH: usize = 6;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error("{0}")]
    Failed(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 2,
            CliError::Tree(TreeError::HypothesisViolation { .. })
            | CliError::Coding(CodingError::Tree(TreeError::HypothesisViolation { .. })) => 4,
            CliError::Tree(_) | CliError::Coding(_) => 3,
            CliError::Failed(_) => 5,
            CliError::Io { .. } => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "julia-shift", version, about = "Certified puzzle trees and shift codings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TreeArgs {
    /// Map config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Tree depth; defaults to the config value, then 6.
    #[arg(long)]
    depth: Option<usize>,
    /// Cap on cells per level.
    #[arg(long, env = "JULIA_SHIFT_MAX_BOXES")]
    max_boxes: Option<usize>,
    /// Cap on refinement steps below a parent.
    #[arg(long, env = "JULIA_SHIFT_MAX_REFINE")]
    max_refine: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorKey {
    Level,
    Symbols,
}

#[derive(Subcommand)]
enum Command {
    /// Build the tree, write tree.json and print diagnostics.
    Analyze {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Write the symbol sets and fibers up to a level.
    Code {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the five coding checks at one level.
    Verify {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        level: Option<usize>,
        /// Also write verify.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximal local degree along the orbit of a point.
    Chi {
        #[command(flatten)]
        tree: TreeArgs,
        /// `RE,IM` as decimals.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 40)]
        horizon: usize,
    },
    /// Draw level covers as SVG.
    Render {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, value_enum, default_value = "level")]
        color_by: ColorKey,
        #[arg(long, default_value_t = 800)]
        size: u32,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Random abstract trees checked against brute force.
    OracleTest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Degrees to draw from, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        d: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
}

fn build(args: &TreeArgs, min_depth: usize) -> Result<PuzzleTree, CliError> {
    let cfg = MapConfig::load(&args.config)?;
    let map = cfg.map().map_err(ConfigError::from)?;
    let disk = cfg.disk(&map).map_err(ConfigError::from)?;
    let mut policy = cfg.policy();
    if let Some(b) = args.max_boxes {
        policy.max_boxes = b;
    }
    if let Some(r) = args.max_refine {
        policy.max_refine = r;
    }
    if policy.max_boxes == 0 || policy.max_refine == 0 {
        return Err(CliError::Usage("budgets must be positive".into()));
    }
    let depth = args.depth.or(cfg.depth).unwrap_or(DEFAULT_DEPTH).max(min_depth);
    let tree = match cfg.shrink_factor() {
        Some(f) => build_tree_shrinking(&map, &disk, depth, &policy, &f, cfg.shrink_attempts.unwrap_or(4))?,
        None => build_tree(&map, &disk, depth, &policy)?,
    };
    Ok(tree)
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    let io = |source| CliError::Io {
        path: dir.join(name).display().to_string(),
        source,
    };
    fs::create_dir_all(dir).map_err(io)?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(io)?;
    Ok(path)
}

fn level_or_depth(level: Option<usize>, tree: &PuzzleTree) -> Result<usize, CliError> {
    let k = level.unwrap_or(tree.depth());
    if k > tree.depth() {
        return Err(CliError::Usage(format!("level {k} exceeds depth {}", tree.depth())));
    }
    Ok(k)
}

fn analyze(args: &TreeArgs, out: &Path) -> Result<(), CliError> {
    let tree = build(args, 0)?;
    let path = write(out, "tree.json", &tree_json(&tree))?;
    let diag = cantor_diagnostic(&tree);
    println!("level  components  degree histogram  max diameter");
    for (k, lvl) in tree.levels().iter().enumerate() {
        let mut hist = std::collections::BTreeMap::new();
        for c in lvl {
            *hist.entry(c.local_degree).or_insert(0usize) += 1;
        }
        let hist: Vec<String> = hist.iter().map(|(d, n)| format!("{d}:{n}")).collect();
        println!(
            "{k:>5}  {:>10}  {:>16}  {}",
            lvl.len(),
            hist.join(" "),
            fmt_float(diag.max_diameters[k])
        );
    }
    println!(
        "diameters strictly decreasing: {}",
        if diag.strictly_decreasing { "yes" } else { "no" }
    );
    let r = tree.restriction();
    println!(
        "restriction: N = {}, degrees {:?}, compactly contained: {}, hypotheses hold: {}",
        r.n_components, r.branch_degrees, r.compactly_contained, r.hypothesis_ok
    );
    for (i, s) in r.critical_statuses.iter().enumerate() {
        println!("critical point {i}: {}", serde_json::to_string(s).expect("serializable"));
    }
    for w in &r.warnings {
        println!("warning: {w}");
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn code(args: &TreeArgs, level: Option<usize>, out: &Path) -> Result<(), CliError> {
    let tree = build(args, level.unwrap_or(0))?;
    let k = level_or_depth(level, &tree)?;
    let a = assign_symbols(&tree)?;
    let path = write(out, "coding.json", &coding_json(&tree, &a, k)?)?;
    println!("coded levels 0..={k}; wrote {}", path.display());
    Ok(())
}

fn verify(args: &TreeArgs, level: Option<usize>, out: Option<&Path>) -> Result<(), CliError> {
    let tree = build(args, level.unwrap_or(0))?;
    let k = level_or_depth(level, &tree)?;
    let a = assign_symbols(&tree)?;
    let report = verify_semiconjugacy(&Coding::new(&tree, &a), k)?;
    for c in &report.checks {
        println!("{:<18} {}", c.name, if c.passed { "pass" } else { "FAIL" });
        for ex in &c.counterexamples {
            println!("    {ex}");
        }
    }
    println!("{}", report.summary());
    if let Some(dir) = out {
        write(dir, "verify.json", &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed("verification failed".into()))
    }
}

fn chi_cmd(args: &TreeArgs, point: &str, horizon: usize) -> Result<(), CliError> {
    let z = ExactComplex::parse_pair(point).map_err(|e: MapError| CliError::Usage(e.to_string()))?;
    let tree = build(args, 0)?;
    let r = chi(&tree, &PointSpec::exact(z), horizon)?;
    println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
    let status = match r.status {
        ChiStatus::Certified => "certified",
        ChiStatus::LowerBound => "lower bound",
    };
    println!("chi = {} ({status})", r.value);
    Ok(())
}

fn render(args: &TreeArgs, level: Option<usize>, key: ColorKey, size: u32, out: &Path) -> Result<(), CliError> {
    let tree = build(args, level.unwrap_or(0))?;
    let k = level_or_depth(level, &tree)?;
    let a = assign_symbols(&tree)?;
    let opts = RenderOptions {
        level: k,
        color_by: match key {
            ColorKey::Level => ColorBy::Level,
            ColorKey::Symbols => ColorBy::Symbols,
        },
        size,
    };
    let path = write(out, &format!("level-{k}.svg"), &render_svg(&tree, Some(&a), &opts))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn oracle_test(seed: u64, cases: usize, d: Vec<usize>, depth: usize) -> Result<(), CliError> {
    if d.is_empty() || d.iter().any(|&x| x < 2) || depth == 0 {
        return Err(CliError::Usage("need degrees >= 2 and depth >= 1".into()));
    }
    let summary = run_cases(&OracleRun {
        seed,
        cases,
        degrees: d,
        max_depth: depth,
    });
    for f in summary.failures.iter().take(20) {
        println!("{f}");
    }
    println!("{}/{} cases pass", summary.passed, summary.cases);
    if summary.passed == summary.cases {
        Ok(())
    } else {
        Err(CliError::Failed("oracle mismatch".into()))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { tree, out } => analyze(&tree, &out),
        Command::Code { tree, level, out } => code(&tree, level, &out),
        Command::Verify { tree, level, out } => verify(&tree, level, out.as_deref()),
        Command::Chi { tree, point, horizon } => chi_cmd(&tree, &point, horizon),
        Command::Render {
            tree,
            level,
            color_by,
            size,
            out,
        } => render(&tree, level, color_by, size, &out),
        Command::OracleTest { seed, cases, d, depth } => oracle_test(seed, cases, d, depth),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Tree(TreeError::HypothesisViolation {
                report: Some(report), ..
            }) = &e
            {
                eprintln!("{}", serde_json::to_string_pretty(report).expect("serializable"));
            }
            ExitCode::from(e.exit_code())
        }
    }
}
