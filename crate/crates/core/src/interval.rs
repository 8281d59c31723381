//! Coloring of regular-tree truncations in which any two vertices at
//! distance in `[d, cd]` receive distinct colors.
//!
//! Tree edges are colored greedily in breadth-first order of their child
//! endpoint. Every vertex at depth at least `d/2` then takes the color of the
//! edge joining its ancestors at distances `d/2` and `d/2 - 1`; shallower
//! vertices share color 0.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::coloring::{ColorAssignment, ColorDomain, Provenance};
use crate::error::{Error, Result};
use crate::tree::{pow, Node, TreeParams};
use crate::Limits;

/// Exact positive fraction, parsed from `p/r` (or a bare integer).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction(Ratio<i64>);

impl Fraction {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom <= 0 || numer <= 0 {
            return Err(Error::InvalidParams(format!("fraction {numer}/{denom} must be positive")));
        }
        Ok(Fraction(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// `floor(self * m / div)` in integer arithmetic.
    pub fn floor_times(&self, m: u32, div: u32) -> u64 {
        let num = self.numer() as i128 * m as i128;
        let den = self.denom() as i128 * div as i128;
        num_integer::Integer::div_floor(&num, &den) as u64
    }

    pub fn to_big(self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Accepts `p/r` or `p`; decimal notation is rejected so that band
    /// boundaries stay exact.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("expected a fraction p/r, got {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        Fraction::new(n, d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalParams {
    q: u32,
    d: u32,
    c: Fraction,
    depth_cap: u32,
}

impl IntervalParams {
    pub fn new(q: u32, d: u32, c: Fraction, depth_cap: u32) -> Result<Self> {
        if q < 3 {
            return Err(Error::InvalidParams(format!("q must be at least 3, got {q}")));
        }
        if d < 2 || d % 2 == 1 {
            return Err(Error::InvalidParams(format!("d must be even and at least 2, got {d}")));
        }
        if c.numer() <= c.denom() {
            return Err(Error::InvalidParams(format!("c must exceed 1, got {c}")));
        }
        if depth_cap < d / 2 {
            return Err(Error::InvalidParams(format!(
                "truncation depth {depth_cap} is below d/2 = {}",
                d / 2
            )));
        }
        Ok(IntervalParams { q, d, c, depth_cap })
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn c(&self) -> Fraction {
        self.c
    }
    pub fn depth_cap(&self) -> u32 {
        self.depth_cap
    }

    /// `floor(cd)`, the largest constrained distance.
    pub fn cap(&self) -> u32 {
        self.c.floor_times(self.d, 1) as u32
    }

    /// `floor(cd/2) - d/2`.
    pub fn ell(&self) -> u32 {
        self.c.floor_times(self.d, 2) as u32 - self.d / 2
    }

    pub fn tree(&self) -> Result<TreeParams> {
        TreeParams::regular(self.q, self.depth_cap)
    }

    /// Edges needed to color the truncation: child depths `1 ..= D - d/2 + 1`.
    pub fn edge_tree(&self) -> Result<TreeParams> {
        TreeParams::regular(self.q, self.depth_cap + 1 - self.d / 2)
    }

    /// `(q/(q-2)) (q-1)^(ell+1) + floor(cd) + 1`.
    pub fn palette_bound(&self) -> BigRational {
        let q = BigInt::from(self.q);
        let lead = BigRational::new(q.clone(), q - 2u32) * BigRational::from_integer(BigInt::from(self.q - 1).pow(self.ell() + 1));
        lead + BigRational::from_integer(BigInt::from(self.cap() + 1))
    }
}

/// `(q/(q-2)) (q-1)^(floor(cd/2) - d/2 + 1) + cd + 1`, exact.
pub fn interval_bound(q: u32, d: u32, c: Fraction) -> Result<BigRational> {
    if q < 3 || d < 2 || d % 2 == 1 || c.numer() <= c.denom() {
        return Err(Error::InvalidParams(format!("need q >= 3, even d >= 2, c > 1; got q={q} d={d} c={c}")));
    }
    let ell = c.floor_times(d, 2) as u32 - d / 2;
    let qb = BigInt::from(q);
    let lead = BigRational::new(qb.clone(), qb - 2u32) * BigRational::from_integer(BigInt::from(q - 1).pow(ell + 1));
    Ok(lead + c.to_big() * BigRational::from_integer(BigInt::from(d)) + BigRational::one())
}

/// Edge colors indexed by the breadth-first index of the child endpoint
/// (slot 0, the root, is unused and holds 0). Colors start at 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    tree: TreeParams,
    colors: Vec<u32>,
    max_forbidden_edges: usize,
}

impl EdgeColoring {
    /// The tree whose non-root vertices stand for the colored edges.
    pub fn tree(&self) -> &TreeParams {
        &self.tree
    }

    /// Color of the edge from `child`'s parent to `child`.
    pub fn color(&self, child: Node) -> Option<u32> {
        if child.depth == 0 || child.depth > self.tree.depth_cap() {
            return None;
        }
        Some(self.colors[self.tree.index_of(child) as usize])
    }

    pub fn palette_size(&self) -> u32 {
        self.colors.iter().max().map_or(1, |m| m + 1)
    }

    /// Colors by breadth-first index of the child endpoint.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Largest number of already-colored edges enumerated as constraints for
    /// one edge.
    pub fn max_forbidden_edges(&self) -> usize {
        self.max_forbidden_edges
    }

    /// `(parent address, child address, color)` rows.
    pub fn write_csv<W: std::io::Write>(&self, extra_header: &[String], mut w: W) -> Result<()> {
        writeln!(w, "# algorithm=edge-greedy {}", self.tree)?;
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "parent,child,color")?;
        for idx in 1..self.tree.vertex_count() {
            let child = self.tree.node_at(idx)?;
            let parent = self.tree.parent(child).unwrap();
            writeln!(w, "{},{},{}", self.tree.addr_of(parent), self.tree.addr_of(child), self.colors[idx as usize])?;
        }
        w.flush()?;
        Ok(())
    }
}

struct Marks {
    stamp: Vec<u64>,
    round: u64,
}

impl Marks {
    fn mark_all(&mut self, colors: &[u32]) {
        for &c in colors {
            let c = c as usize;
            if c >= self.stamp.len() {
                self.stamp.resize(2 * c + 2, 0);
            }
            self.stamp[c] = self.round;
        }
    }

    fn smallest_free(&self) -> u32 {
        (1..).find(|&c| c >= self.stamp.len() || self.stamp[c] != self.round).unwrap() as u32
    }
}

/// Greedy edge coloring in breadth-first order. Edge `uv` (`u` the parent,
/// at depth `h`) avoids every colored edge `xy` with `x` within distance
/// `ell` of `u`'s ancestor at distance `min(ell, h)`, and every edge on the
/// path from `u` up to `floor(cd)` levels above it.
pub fn edge_coloring(params: &IntervalParams, limits: &Limits) -> Result<EdgeColoring> {
    let tree = params.edge_tree()?;
    limits.check("edge coloring", tree.vertex_count(), limits.max_tree_vertices)?;
    let ell = params.ell();
    let cap = params.cap();
    let b = tree.branch_arity() as u64;
    let offsets: Vec<u64> = (0..=tree.depth_cap() + 1).map(|t| tree.level_offset(t)).collect();
    let mut colors = vec![0u32; tree.vertex_count() as usize];
    let mut marks = Marks { stamp: vec![0; 64], round: 0 };
    let mut max_forbidden = 0usize;

    // child ranks of a rank range at `depth`, inside level `depth + 1`
    let child_range = |depth: u32, lo: u64, hi: u64| -> (u64, u64) {
        if depth == 0 {
            (0, tree.root_arity() as u64)
        } else {
            (lo * b, hi * b)
        }
    };

    for cdepth in 1..=tree.depth_cap() {
        let h = cdepth - 1;
        for crank in 0..tree.level_size(cdepth) {
            marks.round += 1;
            let mut enumerated = 0usize;
            let child = Node { depth: cdepth, rank: crank };
            let u = tree.parent(child).unwrap();
            let w = tree.ancestor_node(u, ell.min(h)).unwrap();

            // edges hanging below the ball of radius ell around w, up to depth h
            let mut ranges: Vec<(u32, u64, u64)> = Vec::new();
            for j in 0..=ell.min(w.depth) {
                let a = tree.ancestor_node(w, j).unwrap();
                let toward = if j == 0 { None } else { tree.ancestor_node(w, j - 1) };
                for s in 0..=ell - j {
                    let depth = a.depth + s;
                    if depth > h {
                        break;
                    }
                    let block = tree.block(a, s);
                    match toward {
                        Some(t) if s >= 1 => {
                            let len = tree.child_block_len(s);
                            let lo = block.start + tree.branch_of(t).unwrap() as u64 * len;
                            ranges.push((depth, block.start, lo));
                            ranges.push((depth, lo + len, block.end));
                        }
                        _ => ranges.push((depth, block.start, block.end)),
                    }
                }
            }
            for (depth, lo, hi) in ranges {
                if lo >= hi {
                    continue;
                }
                let (clo, mut chi) = child_range(depth, lo, hi);
                if depth == h {
                    chi = chi.min(crank);
                }
                if clo >= chi {
                    continue;
                }
                let base = offsets[depth as usize + 1];
                marks.mark_all(&colors[(base + clo) as usize..(base + chi) as usize]);
                enumerated += (chi - clo) as usize;
            }
            // edges (u^j, u^(j-1)) for 1 <= j <= cap
            let mut y = u;
            for _ in 0..cap.min(h) {
                let idx = offsets[y.depth as usize] + y.rank;
                marks.mark_all(&colors[idx as usize..idx as usize + 1]);
                enumerated += 1;
                y = tree.parent(y).unwrap();
            }
            max_forbidden = max_forbidden.max(enumerated);
            colors[(offsets[cdepth as usize] + crank) as usize] = marks.smallest_free();
        }
    }
    Ok(EdgeColoring { tree, colors, max_forbidden_edges: max_forbidden })
}

/// Vertex coloring of the truncation of depth `params.depth_cap()` induced by
/// an edge coloring.
pub fn lift_to_vertices(ec: &EdgeColoring, params: &IntervalParams, limits: &Limits) -> Result<ColorAssignment> {
    let tree = params.tree()?;
    limits.check("tree truncation", tree.vertex_count(), limits.max_tree_vertices)?;
    let half = params.d() / 2;
    if ec.tree.depth_cap() + half < tree.depth_cap() + 1 || ec.tree.q() != tree.q() {
        return Err(Error::KeyMismatch("edge coloring does not cover the truncation".into()));
    }
    let b = tree.branch_arity();
    let mut colors = Vec::with_capacity(tree.vertex_count() as usize);
    for depth in 0..=tree.depth_cap() {
        let size = tree.level_size(depth) as usize;
        if depth < half {
            colors.extend(std::iter::repeat_n(0, size));
            continue;
        }
        let edge_depth = depth + 1 - half;
        let run = pow(b, half - 1) as usize;
        let start = ec.tree.level_offset(edge_depth) as usize;
        let end = start + ec.tree.level_size(edge_depth) as usize;
        for &c in &ec.colors[start..end] {
            colors.extend(std::iter::repeat_n(c, run));
        }
    }
    let prov = Provenance::new("edge-lift")
        .with("q", params.q())
        .with("d", params.d())
        .with("c", params.c())
        .with("depth", params.depth_cap());
    ColorAssignment::new(ColorDomain::Tree(tree), colors, prov)
}

/// Edge coloring followed by the lift.
pub fn color_truncation(params: &IntervalParams, limits: &Limits) -> Result<ColorAssignment> {
    let ec = edge_coloring(params, limits)?;
    lift_to_vertices(&ec, params, limits)
}

/// Whether an exact rational bound is at least `n`.
pub fn at_least(bound: &BigRational, n: u64) -> bool {
    *bound >= BigRational::from_integer(BigInt::from(n))
}

/// Nearest f64, for reporting.
pub fn to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let n: f64 = x.numer().to_string().parse().unwrap_or(f64::INFINITY);
    let d: f64 = x.denom().to_string().parse().unwrap_or(f64::INFINITY);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(s: &str) -> Fraction {
        s.parse().unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn band_proper_for_even_cap() {
        use crate::verify::{verify_band_tree, VerifyOptions};
        for (q, d, c, depth) in [(3, 4, "3/2", 10), (3, 2, "2", 6), (4, 2, "2", 6), (3, 4, "2", 10)] {
            let p = IntervalParams::new(q, d, frac(c), depth).unwrap();
            let ca = color_truncation(&p, &lim()).unwrap();
            let r = verify_band_tree(&ca, d, p.cap(), VerifyOptions::default()).unwrap();
            assert!(r.is_proper(), "q={q} d={d} c={c}: {r}");
            assert!(at_least(&p.palette_bound(), ca.palette_size() as u64));
        }
    }

    #[test]
    fn parameter_arithmetic() {
        assert!(IntervalParams::new(3, 2, frac("1"), 4).is_err());
        let p = IntervalParams::new(3, 2, frac("3/2"), 4).unwrap();
        assert_eq!((p.ell(), p.cap()), (0, 3));
        let p = IntervalParams::new(3, 4, frac("3/2"), 10).unwrap();
        assert_eq!((p.ell(), p.cap()), (1, 6));
        assert!(IntervalParams::new(3, 3, frac("2"), 10).is_err());
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!(frac("6/4"), frac("3/2"));
        assert_eq!(frac("2"), frac("4/2"));
        assert!("1.5".parse::<Fraction>().is_err());
        assert!("3/0".parse::<Fraction>().is_err());
        assert!("-3/2".parse::<Fraction>().is_err());
        assert_eq!(frac("3/2").to_string(), "3/2");
    }

    #[test]
    fn scaling_the_fraction_changes_nothing() {
        for (n, d) in [(3, 2), (5, 3), (7, 4), (2, 1)] {
            for s in 1..6 {
                let a = IntervalParams::new(3, 6, Fraction::new(n, d).unwrap(), 8).unwrap();
                let b = IntervalParams::new(3, 6, Fraction::new(n * s, d * s).unwrap(), 8).unwrap();
                assert_eq!((a.cap(), a.ell()), (b.cap(), b.ell()));
                assert_eq!(a.palette_bound(), b.palette_bound());
            }
        }
    }

    #[test]
    fn floor_at_exact_boundaries() {
        // cd lands exactly on an integer: no float rounding may push it below
        assert_eq!(frac("7/3").floor_times(3, 1), 7);
        assert_eq!(frac("7/3").floor_times(3, 2), 3);
        assert_eq!(frac("10/3").floor_times(6, 2), 10);
        assert_eq!(frac("1000000001/1000000000").floor_times(1_000_000_000, 1), 1_000_000_001);
    }

    #[test]
    fn interval_bound_examples() {
        assert_eq!(interval_bound(3, 4, frac("3/2")).unwrap(), BigRational::from_integer(19.into()));
        assert_eq!(interval_bound(4, 2, frac("2")).unwrap(), BigRational::from_integer(23.into()));
        let mut last = interval_bound(3, 6, frac("11/10")).unwrap();
        for c in ["6/5", "4/3", "3/2", "5/3", "2", "7/3", "3"] {
            let next = interval_bound(3, 6, frac(c)).unwrap();
            assert!(next >= last);
            last = next;
        }
        assert!(interval_bound(3, 3, frac("2")).is_err());
    }

    #[test]
    fn forbidden_edges_within_count() {
        for (q, d, c) in [(3, 2, "3/2"), (3, 4, "3/2"), (3, 4, "2"), (4, 4, "3/2"), (3, 6, "5/3")] {
            let p = IntervalParams::new(q, d, frac(c), d + 6).unwrap();
            let ec = edge_coloring(&p, &lim()).unwrap();
            let sum: u64 = (0..=p.ell()).map(|j| q as u64 * pow(q - 1, j)).sum();
            let cd = p.c().to_big() * BigRational::from_integer(d.into());
            let bound = cd + BigRational::from_integer(sum.into());
            assert!(BigRational::from_integer(ec.max_forbidden_edges().into()) <= bound);
            assert!(at_least(&p.palette_bound(), ec.palette_size() as u64));
        }
    }

    #[test]
    fn lift_follows_the_edge() {
        let p = IntervalParams::new(3, 4, frac("3/2"), 7).unwrap();
        let ec = edge_coloring(&p, &lim()).unwrap();
        let ca = lift_to_vertices(&ec, &p, &lim()).unwrap();
        let t = ca.tree_params().unwrap();
        for idx in 0..t.vertex_count() {
            let x = t.node_at(idx).unwrap();
            if x.depth < 2 {
                assert_eq!(ca.color(idx), 0);
            } else {
                let child = t.ancestor_node(x, 1).unwrap();
                assert_eq!(Some(ca.color(idx)), ec.color(child));
            }
        }
    }

    #[test]
    fn determinism() {
        let p = IntervalParams::new(4, 4, frac("2"), 8).unwrap();
        assert_eq!(color_truncation(&p, &lim()).unwrap(), color_truncation(&p, &lim()).unwrap());
    }

    #[test]
    fn edge_csv_lists_every_edge() {
        let p = IntervalParams::new(3, 2, frac("3/2"), 2).unwrap();
        let ec = edge_coloring(&p, &lim()).unwrap();
        let mut buf = Vec::new();
        ec.write_csv(&[], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows = text.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(rows as u64, ec.tree().vertex_count());
    }
}
