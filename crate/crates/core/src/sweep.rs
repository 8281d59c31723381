//! Parameter sweeps: one CSV row per grid point with every bound, the
//! palette of the matching construction, its verification status and, on
//! small truncations, the exact chromatic number.
//!
//! Grid syntax: whitespace-separated `key=values`, values comma-separated,
//! integer ranges as `lo:hi[:step]`. Keys are `q`, `d`, `c` (fractions),
//! `k` (integers or `auto`) and `depth` (one integer, the truncation depth
//! of exact rows; defaults to `d`). Each `(q, d)` gives one exact row per
//! `k` and one band row per `c`. Points run in parallel; row order follows
//! the grid.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bounds::{bounds_exact, bounds_interval, BoundsReport};
use crate::chi::{chi_exact, Budget};
use crate::error::{Error, Result};
use crate::exact::{self, parity_coloring, ExactColoringParams};
use crate::graph::{build_tree_truncation, exact_power};
use crate::interval::{edge_coloring, to_f64, Fraction, IntervalParams};
use crate::tree::TreeParams;
use crate::verify::{verify_exact_tree, verify_lifted_band, Mode, VerifyOptions};
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KChoice {
    Fixed(u32),
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub qs: Vec<u32>,
    pub ds: Vec<u32>,
    pub cs: Vec<Fraction>,
    pub ks: Vec<KChoice>,
    pub depth: Option<u32>,
}

fn ints(s: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("bad integer list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',') {
        let nums: Vec<u32> = part.split(':').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        match nums[..] {
            [x] => out.push(x),
            [lo, hi] => out.extend(lo..=hi),
            [lo, hi, step] if step > 0 => out.extend((lo..=hi).step_by(step as usize)),
            _ => return Err(bad()),
        }
    }
    Ok(out)
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut grid = Grid { qs: Vec::new(), ds: Vec::new(), cs: Vec::new(), ks: Vec::new(), depth: None };
        for tok in s.split_whitespace() {
            let (key, vals) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=values, got {tok:?}")))?;
            match key {
                "q" => grid.qs = ints(vals)?,
                "d" => grid.ds = ints(vals)?,
                "c" => grid.cs = vals.split(',').map(str::parse).collect::<Result<_>>()?,
                "k" => {
                    grid.ks = vals
                        .split(',')
                        .map(|v| match v {
                            "auto" => Ok(KChoice::Auto),
                            _ => v.parse().map(KChoice::Fixed).map_err(|_| Error::Parse(format!("bad k {v:?}"))),
                        })
                        .collect::<Result<_>>()?
                }
                "depth" => grid.depth = Some(vals.parse().map_err(|_| Error::Parse(format!("bad depth {vals:?}")))?),
                _ => return Err(Error::Parse(format!("unknown grid key {key:?}"))),
            }
        }
        if grid.qs.is_empty() || grid.ds.is_empty() {
            return Err(Error::Parse("grid needs q= and d=".into()));
        }
        if grid.ks.is_empty() {
            grid.ks.push(KChoice::Auto);
        }
        Ok(grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    pub limits: Limits,
    pub verify: Mode,
    /// Exact rows run the solver when the truncation has at most this many
    /// vertices.
    pub solver_max_vertices: u64,
    pub budget: Budget,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            limits: Limits { max_tree_vertices: 2_000_000, ..Limits::default() },
            verify: Mode::Full,
            solver_max_vertices: 64,
            budget: Budget { max_nodes: 1_000_000, max_time: std::time::Duration::from_secs(10) },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub q: u32,
    pub d: u32,
    pub c: Option<Fraction>,
    pub k: Option<u32>,
    pub depth: u32,
    pub bounds: BoundsReport,
    pub palette: Option<u32>,
    /// Cited bound for the palette, when the construction has one.
    pub palette_bound: Option<f64>,
    pub violations: Option<u64>,
    pub chi: Option<u32>,
    pub chi_exact: bool,
    pub skipped: Option<String>,
}

impl SweepRow {
    /// Every check the row supports holds.
    pub fn is_sound(&self) -> bool {
        let within_bound = match (self.palette, self.palette_bound) {
            (Some(p), Some(b)) => p as f64 <= b,
            _ => true,
        };
        let chi_ok = match (self.chi, self.chi_exact) {
            (Some(chi), true) => {
                let lower = self.materialized_lower();
                lower.is_none_or(|lo| chi as u64 >= lo) && self.palette.is_none_or(|p| chi <= p)
            }
            _ => true,
        };
        self.bounds.is_consistent() && within_bound && self.violations.unwrap_or(0) == 0 && chi_ok
    }

    /// The lower bound that holds on the finite truncation itself.
    fn materialized_lower(&self) -> Option<u64> {
        let name = if self.d % 2 == 0 { "clique_lower" } else { "odd_lower" };
        self.bounds.get(name).map(|e| e.value.to_f64() as u64)
    }

    fn status(&self) -> String {
        match (&self.skipped, self.is_sound()) {
            (Some(why), _) => format!("skipped:{why}"),
            (None, true) => "ok".into(),
            (None, false) => "fail".into(),
        }
    }
}

fn exact_row(q: u32, d: u32, k: KChoice, depth: u32, opts: &SweepOptions) -> Result<SweepRow> {
    let bounds = bounds_exact(q, d)?;
    let mut row = SweepRow {
        q,
        d,
        c: None,
        k: None,
        depth,
        bounds,
        palette: None,
        palette_bound: None,
        violations: None,
        chi: None,
        chi_exact: false,
        skipped: None,
    };
    let tree = TreeParams::regular(q, depth)?;
    if tree.vertex_count() > opts.limits.max_tree_vertices {
        row.skipped = Some("size".into());
        return Ok(row);
    }
    let coloring = if d % 2 == 0 {
        let params = match k {
            KChoice::Fixed(k) => ExactColoringParams::new(q, d, k, depth),
            KChoice::Auto => ExactColoringParams::auto(q, d, depth),
        };
        let params = match params {
            Ok(p) => p,
            Err(e) => {
                row.skipped = Some(format!("{e}").replace(',', ";"));
                return Ok(row);
            }
        };
        row.k = Some(params.k());
        row.palette_bound = Some(params.palette_bound() as f64);
        exact::color_truncation(&params, &opts.limits)?
    } else {
        row.palette_bound = Some(2.0);
        parity_coloring(&tree, &opts.limits)?
    };
    row.palette = Some(coloring.palette_size());
    row.violations = Some(verify_exact_tree(&coloring, d, VerifyOptions::from(opts.verify))?.violation_count);
    if tree.vertex_count() <= opts.solver_max_vertices {
        let power = exact_power(&build_tree_truncation(&tree, &opts.limits)?, d)?;
        if power.edge_count() > 0 {
            let r = chi_exact(&power, opts.budget)?;
            row.chi = Some(r.chi);
            row.chi_exact = !r.timed_out;
        }
    }
    Ok(row)
}

fn interval_row(q: u32, d: u32, c: Fraction, opts: &SweepOptions) -> Result<SweepRow> {
    let bounds = bounds_interval(q, d, c)?;
    let depth = d + c.floor_times(d, 1) as u32;
    let mut row = SweepRow {
        q,
        d,
        c: Some(c),
        k: None,
        depth,
        bounds,
        palette: None,
        palette_bound: None,
        violations: None,
        chi: None,
        chi_exact: false,
        skipped: None,
    };
    if d % 2 == 1 {
        row.skipped = Some("odd d".into());
        return Ok(row);
    }
    let params = IntervalParams::new(q, d, c, depth)?;
    if params.edge_tree()?.vertex_count() > opts.limits.max_tree_vertices {
        row.skipped = Some("size".into());
        return Ok(row);
    }
    let ec = edge_coloring(&params, &opts.limits)?;
    row.palette = Some(ec.palette_size());
    row.palette_bound = Some(to_f64(&params.palette_bound()));
    row.violations = Some(verify_lifted_band(&ec, &params, VerifyOptions::from(opts.verify))?.violation_count);
    Ok(row)
}

pub fn run_sweep(grid: &Grid, opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    enum Point {
        Exact(u32, u32, KChoice, u32),
        Interval(u32, u32, Fraction),
    }
    let mut points = Vec::new();
    for &q in &grid.qs {
        for &d in &grid.ds {
            let depth = grid.depth.unwrap_or(d);
            if d % 2 == 0 {
                points.extend(grid.ks.iter().map(|&k| Point::Exact(q, d, k, depth)));
            } else {
                points.push(Point::Exact(q, d, KChoice::Auto, depth));
            }
            points.extend(grid.cs.iter().map(|&c| Point::Interval(q, d, c)));
        }
    }
    points
        .par_iter()
        .map(|p| match *p {
            Point::Exact(q, d, k, depth) => exact_row(q, d, k, depth, opts),
            Point::Interval(q, d, c) => interval_row(q, d, c, opts),
        })
        .collect()
}

/// Every bound column, in output order, as `(name, formula)`.
pub fn bound_columns() -> Vec<(&'static str, &'static str)> {
    let c = Fraction::new(2, 1).expect("2 is a valid fraction");
    let mut out: Vec<(&'static str, &'static str)> = Vec::new();
    let reports = [bounds_exact(3, 2), bounds_exact(3, 3), bounds_interval(3, 2, c)];
    for r in reports.into_iter().map(|r| r.expect("fixed parameters are valid")) {
        for e in r.entries {
            if !out.iter().any(|(n, _)| *n == e.name) {
                out.push((e.name, e.source));
            }
        }
    }
    out
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], extra_header: &[String], mut w: W) -> Result<()> {
    for line in extra_header {
        writeln!(w, "# {line}")?;
    }
    let cols = bound_columns();
    write!(w, "q,d,c,k,depth,palette,palette_bound,violations,chi,chi_exact,status")?;
    for (name, source) in &cols {
        write!(w, ",\"{name} [{source}]\"")?;
    }
    writeln!(w)?;
    for r in rows {
        write!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.q,
            r.d,
            opt(r.c),
            opt(r.k),
            r.depth,
            opt(r.palette),
            opt(r.palette_bound),
            opt(r.violations),
            opt(r.chi),
            r.chi.map(|_| r.chi_exact.to_string()).unwrap_or_default(),
            r.status()
        )?;
        for (name, _) in &cols {
            write!(w, ",{}", opt(r.bounds.get(name).map(|e| &e.value)))?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}
