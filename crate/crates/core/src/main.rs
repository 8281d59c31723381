use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use treecolor::bounds::{bounds_exact, bounds_interval};
use treecolor::chi::{chi_exact, Budget};
use treecolor::energy::{dominant_color, energy_profile};
use treecolor::exact::{self, parity_coloring, ExactColoringParams};
use treecolor::graph::{
    augment_siblings, band_power, build_p3, build_tree_truncation, export_csv_edges, export_dimacs, read_dimacs,
};
use treecolor::interval::{self, edge_coloring, lift_to_vertices, to_f64, Fraction, IntervalParams};
use treecolor::sweep::{run_sweep, write_sweep_csv, Grid, SweepOptions};
use treecolor::verify::{verify_band_tree, verify_exact_tree, verify_lifted_band, Mode, VerifyOptions, VerifyReport, DEFAULT_SAMPLES};
use treecolor::witness::{exact_clique_witness, interval_clique_witness};
use treecolor::{ColorAssignment, FiniteGraph, Limits, TreeParams};

#[derive(Parser)]
#[command(name = "treecolor", version, about = "Distance colorings of regular trees")]
struct Cli {
    /// Seed for every random choice; recorded in each output header.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when absent).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Largest tree truncation materialized as a color array.
    #[arg(long, global = true, default_value_t = Limits::default().max_tree_vertices)]
    max_tree_vertices: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tree family and export it.
    Build {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Export::Dimacs)]
        export: Export,
    },
    /// Exact or band distance power of a family or a DIMACS graph.
    Power {
        #[command(flatten)]
        family: FamilyArgs,
        /// Read the base graph from a DIMACS file instead.
        #[arg(long = "in", conflicts_with = "source")]
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "band")]
        exact: Option<u32>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        band: Option<Vec<u32>>,
        #[arg(long, value_enum, default_value_t = Export::Dimacs)]
        export: Export,
    },
    /// Block coloring for exact distance d (even).
    ColorExact {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
        /// Block parameter, or `auto`.
        #[arg(long, default_value = "auto")]
        k: String,
        #[arg(long)]
        depth: u32,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Edge-lifted coloring for the distance band [d, cd].
    ColorInterval {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
        /// Exact fraction p/r.
        #[arg(long)]
        c: Fraction,
        #[arg(long)]
        depth: u32,
        /// Also write the edge coloring here.
        #[arg(long)]
        edges: Option<PathBuf>,
        /// Write only the edge coloring and check the lift block by block,
        /// without materializing vertex colors.
        #[arg(long, conflicts_with = "edges")]
        edges_only: bool,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Depth-parity 2-coloring for odd d.
    Parity {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        depth: u32,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Exact chromatic number of a DIMACS graph.
    Chi {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        max_nodes: u64,
        #[arg(long, default_value_t = 60)]
        max_seconds: u64,
    },
    /// Closed-form bounds.
    Bounds {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        c: Option<Fraction>,
    },
    /// Verified clique witness behind a lower bound.
    Witness {
        #[arg(long, conflicts_with = "interval")]
        exact: bool,
        #[arg(long, requires = "c")]
        interval: bool,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        c: Option<Fraction>,
    },
    /// Walk-energy profile of one color class of the block coloring.
    Energy {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
        /// Color class, or `auto` for the most frequent one.
        #[arg(long, default_value = "auto")]
        color: String,
        #[arg(long, default_value_t = 2000)]
        samples: u64,
        #[arg(long, default_value = "auto")]
        k: String,
        /// Truncation depth of the coloring (default min(2d, 20)).
        #[arg(long)]
        depth: Option<u32>,
    },
    /// One CSV row per grid point, e.g. "q=3,4 d=2:12:2 c=3/2,2 k=1,auto".
    Sweep {
        #[arg(long)]
        grid: Grid,
        #[arg(long, value_enum, default_value_t = VerifyMode::Full)]
        verify: VerifyMode,
    },
}

#[derive(Args)]
#[group(id = "source", multiple = true)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long, default_value_t = 3)]
    q: u32,
    #[arg(long)]
    depth: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = VerifyMode::Full)]
    verify: VerifyMode,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Truncation of the q-regular tree.
    Tq,
    /// Complete (q-1)-ary tree.
    Tqd,
    /// Spine with pendant paths.
    P3,
    /// Complete binary tree with sibling edges.
    U3,
    /// Spine graph with sibling edges.
    Q3,
}

#[derive(Clone, Copy, ValueEnum)]
enum Export {
    Dimacs,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Full,
    Sampled,
    None,
}

struct Ctx {
    seed: u64,
    output: Option<PathBuf>,
    limits: Limits,
}

impl Ctx {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn header(&self, extra: impl IntoIterator<Item = String>) -> Vec<String> {
        let mut h = vec![format!("seed={}", self.seed)];
        h.extend(extra);
        h
    }

    fn mode(&self, v: &VerifyArgs) -> Option<Mode> {
        match v.verify {
            VerifyMode::Full => Some(Mode::Full),
            VerifyMode::Sampled => Some(Mode::Sampled { samples: v.samples, seed: self.seed }),
            VerifyMode::None => None,
        }
    }
}

fn build_family(f: &FamilyArgs, limits: &Limits) -> Result<FiniteGraph> {
    let family = f.family.context("--family is required")?;
    let depth = f.depth.context("--depth is required")?;
    let binary = || TreeParams::complete(3, depth);
    Ok(match family {
        Family::Tq => build_tree_truncation(&TreeParams::regular(f.q, depth)?, limits)?,
        Family::Tqd => build_tree_truncation(&TreeParams::complete(f.q, depth)?, limits)?,
        Family::P3 => build_p3(depth)?,
        Family::U3 => augment_siblings(&build_tree_truncation(&binary()?, limits)?)?,
        Family::Q3 => augment_siblings(&build_p3(depth)?)?,
    })
}

fn export(g: &FiniteGraph, how: Export, header: &[String], w: impl Write) -> Result<()> {
    match how {
        Export::Dimacs => export_dimacs(g, header, w)?,
        Export::Csv => export_csv_edges(g, header, w)?,
    }
    Ok(())
}

fn parse_k(k: &str) -> Result<Option<u32>> {
    Ok(match k {
        "auto" => None,
        _ => Some(k.parse().with_context(|| format!("--k must be an integer or auto, got {k:?}"))?),
    })
}

/// Writes the coloring with its verification summary; true when proper.
fn emit_coloring(
    ctx: &Ctx,
    ca: &ColorAssignment,
    report: Option<VerifyReport>,
    extra: Vec<String>,
) -> Result<bool> {
    let mut lines = extra;
    if let Some(r) = &report {
        lines.push(format!("verify {r}"));
        if !r.is_proper() {
            for v in &r.violations {
                eprintln!(
                    "violation: {} {} color {}",
                    ca.domain().label(v.u),
                    ca.domain().label(v.v),
                    v.color
                );
            }
        }
    }
    ca.write_csv(&ctx.header(lines), ctx.writer()?)?;
    let proper = report.is_none_or(|r| r.is_proper());
    if !proper {
        eprintln!("coloring is not proper");
    }
    Ok(proper)
}

fn run(cli: Cli) -> Result<bool> {
    let ctx = Ctx {
        seed: cli.seed,
        output: cli.output,
        limits: Limits { max_tree_vertices: cli.max_tree_vertices, ..Limits::default() },
    };
    match cli.command {
        Command::Build { family, export: how } => {
            let g = build_family(&family, &ctx.limits)?;
            export(&g, how, &ctx.header([]), ctx.writer()?)?;
        }
        Command::Power { family, input, exact, band, export: how } => {
            let base = match input {
                Some(path) => read_dimacs(BufReader::new(File::open(&path)?))?,
                None => build_family(&family, &ctx.limits)?,
            };
            let (lo, hi) = match (exact, band.as_deref()) {
                (Some(d), None) => (d, d),
                (None, Some(&[lo, hi])) => (lo, hi),
                _ => bail!("give --exact d or --band lo hi"),
            };
            let g = band_power(&base, lo, hi)?;
            export(&g, how, &ctx.header([format!("power lo={lo} hi={hi}")]), ctx.writer()?)?;
        }
        Command::ColorExact { q, d, k, depth, verify } => {
            let params = match parse_k(&k)? {
                Some(k) => ExactColoringParams::new(q, d, k, depth)?,
                None => ExactColoringParams::auto(q, d, depth)?,
            };
            let ca = exact::color_truncation(&params, &ctx.limits)?;
            let report = ctx.mode(&verify).map(|m| verify_exact_tree(&ca, d, VerifyOptions::from(m))).transpose()?;
            let bound = params.palette_bound();
            let within = ca.palette_size() as u64 <= bound;
            if !within {
                eprintln!("palette {} exceeds bound {bound}", ca.palette_size());
            }
            let extra = vec![format!("palette_bound={bound}")];
            return Ok(emit_coloring(&ctx, &ca, report, extra)? && within);
        }
        Command::ColorInterval { q, d, c, depth, edges, edges_only, verify } => {
            let params = IntervalParams::new(q, d, c, depth)?;
            let ec = edge_coloring(&params, &ctx.limits)?;
            let bound = params.palette_bound();
            let extra = vec![format!("palette_bound={bound}"), format!("band=[{d},{}]", params.cap())];
            if edges_only {
                let report =
                    ctx.mode(&verify).map(|m| verify_lifted_band(&ec, &params, VerifyOptions::from(m))).transpose()?;
                let mut lines = extra;
                lines.push(format!("palette_size={}", ec.palette_size()));
                if let Some(r) = &report {
                    lines.push(format!("verify lifted {r}"));
                }
                ec.write_csv(&ctx.header(lines), ctx.writer()?)?;
                let within = interval::at_least(&bound, ec.palette_size() as u64);
                let proper = report.is_none_or(|r| r.is_proper());
                if !proper {
                    eprintln!("coloring is not proper");
                }
                return Ok(proper && within);
            }
            if let Some(path) = edges {
                ec.write_csv(&ctx.header([]), BufWriter::new(File::create(path)?))?;
            }
            let ca = lift_to_vertices(&ec, &params, &ctx.limits)?;
            let report = ctx
                .mode(&verify)
                .map(|m| verify_band_tree(&ca, d, params.cap(), VerifyOptions::from(m)))
                .transpose()?;
            let within = interval::at_least(&bound, ca.palette_size() as u64);
            if !within {
                eprintln!("palette {} exceeds bound {}", ca.palette_size(), to_f64(&bound));
            }
            return Ok(emit_coloring(&ctx, &ca, report, extra)? && within);
        }
        Command::Parity { q, d, depth, verify } => {
            if d % 2 == 0 {
                bail!("parity coloring is for odd d, got {d}");
            }
            let ca = parity_coloring(&TreeParams::regular(q, depth)?, &ctx.limits)?;
            let report = ctx.mode(&verify).map(|m| verify_exact_tree(&ca, d, VerifyOptions::from(m))).transpose()?;
            return emit_coloring(&ctx, &ca, report, vec![format!("d={d}")]);
        }
        Command::Chi { input, max_nodes, max_seconds } => {
            let g = read_dimacs(BufReader::new(File::open(&input)?))?;
            let budget = Budget { max_nodes, max_time: Duration::from_secs(max_seconds) };
            let r = chi_exact(&g, budget)?;
            let extra = vec![
                format!("family={}", g.family()),
                format!(
                    "chi={} clique_lb={} dsatur_ub={} nodes_explored={} timed_out={}",
                    r.chi, r.clique_lb, r.dsatur_ub, r.nodes_explored, r.timed_out
                ),
            ];
            if r.timed_out {
                eprintln!("budget exhausted; chi={} is an upper bound", r.chi);
            }
            r.witness_coloring.write_csv(&ctx.header(extra), ctx.writer()?)?;
        }
        Command::Bounds { q, d, c } => {
            let report = match c {
                Some(c) => bounds_interval(q, d, c)?,
                None => bounds_exact(q, d)?,
            };
            report.write_csv(&ctx.header([]), ctx.writer()?)?;
            if !report.is_consistent() {
                eprintln!("inconsistent bounds: {:?}", report.inconsistencies());
                return Ok(false);
            }
        }
        Command::Witness { exact, interval, q, d, c } => {
            let w = match (exact, interval, c) {
                (_, true, Some(c)) => {
                    let depth = c.floor_times(d, 2) as u32;
                    interval_clique_witness(&TreeParams::regular(q, depth)?, d, c)?
                }
                (true, false, _) => exact_clique_witness(&TreeParams::regular(q, d / 2)?, d)?,
                _ => bail!("give --exact, or --interval with --c"),
            };
            let mut out = ctx.writer()?;
            let (lo, hi) = w.distance_range().unwrap_or((0, 0));
            for line in ctx.header([format!("witness {w} observed=[{lo},{hi}]")]) {
                writeln!(out, "# {line}")?;
            }
            writeln!(out, "address")?;
            for v in &w.vertices {
                writeln!(out, "{v}")?;
            }
            out.flush()?;
        }
        Command::Energy { q, d, color, samples, k, depth } => {
            let depth = depth.unwrap_or((2 * d).min(20));
            let params = match parse_k(&k)? {
                Some(k) => ExactColoringParams::new(q, d, k, depth)?,
                None => ExactColoringParams::auto(q, d, depth)?,
            };
            let ca = exact::color_truncation(&params, &ctx.limits)?;
            let color = match color.as_str() {
                "auto" => dominant_color(&ca, d)?,
                s => s.parse().with_context(|| format!("--color must be an integer or auto, got {s:?}"))?,
            };
            let prof = energy_profile(&ca, d, color, samples, ctx.seed, &ctx.limits)?;
            if prof.is_empty_class() {
                eprintln!("color {color} does not occur; profile is all zeros");
            }
            let extra = [format!("coloring {} depth={depth}", ca.provenance())];
            prof.write_csv(&ctx.header(extra), ctx.writer()?)?;
        }
        Command::Sweep { grid, verify } => {
            let mode = match verify {
                VerifyMode::Full => Mode::Full,
                VerifyMode::Sampled => Mode::Sampled { samples: DEFAULT_SAMPLES, seed: ctx.seed },
                VerifyMode::None => bail!("sweep always verifies; use full or sampled"),
            };
            let opts = SweepOptions { verify: mode, ..SweepOptions::default() };
            let rows = run_sweep(&grid, &opts)?;
            write_sweep_csv(&rows, &ctx.header([]), ctx.writer()?)?;
            return Ok(rows.iter().all(|r| r.skipped.is_some() || r.is_sound()));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
