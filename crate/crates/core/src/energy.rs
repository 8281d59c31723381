//! Monte Carlo estimate of the walk energy of one color class.
//!
//! The coloring is read on the complete `(q-1)`-ary tree of depth `d` (the
//! part of the truncation whose first branch is below `q-1`). A walk starts
//! at the root and moves to a uniform child each step. At step `k`, with
//! `A` the set of depths of color-`c` vertices below the current vertex,
//! the depth-conflict graph `G_k` has vertex set `A ∩ 2N ∩ (d/2, d]` and
//! joins `i, j` when `i + j - d < 2k`. The energy is
//! `E_k = sum over i in G_k of (q-1)^deg(i)`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::ColorAssignment;
use crate::error::{Error, Result};
use crate::tree::{Node, TreeParams};
use crate::Limits;

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyProfile {
    pub q: u32,
    pub d: u32,
    pub color: u32,
    pub samples: u64,
    pub seed: u64,
    /// Vertices of the class inside the depth-`d` complete tree.
    pub class_size: u64,
    /// Indexed by `k` in `0 ..= d/2`.
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Standard error of `E_k - E_(k+1)` over the same walks, `k < d/2`.
    pub diff_stderr: Vec<f64>,
}

impl EnergyProfile {
    pub fn is_empty_class(&self) -> bool {
        self.class_size == 0
    }

    /// Steps `k` where `mean[k+1] > mean[k] + sigmas * diff_stderr[k]`.
    pub fn increases(&self, sigmas: f64) -> Vec<u32> {
        (0..self.diff_stderr.len())
            .filter(|&k| self.mean[k + 1] > self.mean[k] + sigmas * self.diff_stderr[k])
            .map(|k| k as u32)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, extra_header: &[String], mut w: W) -> Result<()> {
        writeln!(
            w,
            "# energy q={} d={} color={} samples={} seed={} class_size={}",
            self.q, self.d, self.color, self.samples, self.seed, self.class_size
        )?;
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "k,mean,stderr,diff_stderr")?;
        for k in 0..self.mean.len() {
            let diff = self.diff_stderr.get(k).map(|x| x.to_string()).unwrap_or_default();
            writeln!(w, "{k},{},{},{diff}", self.mean[k], self.stderr[k])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The complete `(q-1)`-ary tree of depth `d` inside the coloring's tree.
fn restricted(ca: &ColorAssignment, d: u32) -> Result<(TreeParams, TreeParams)> {
    let p = *ca
        .tree_params()
        .ok_or_else(|| Error::KeyMismatch("energy needs a coloring keyed by tree addresses".into()))?;
    if d < 2 || d % 2 == 1 || d > 30 {
        return Err(Error::InvalidParams(format!("d must be even in [2, 30], got {d}")));
    }
    if p.depth_cap() < d {
        return Err(Error::DepthOverflow { requested: d, cap: p.depth_cap() });
    }
    Ok((p, TreeParams::complete(p.q(), d)?))
}

/// Most frequent color on the complete depth-`d` tree; ties go to the
/// smaller color.
pub fn dominant_color(ca: &ColorAssignment, d: u32) -> Result<u32> {
    let (p, t) = restricted(ca, d)?;
    let mut counts = vec![0u64; ca.palette_size().max(1) as usize];
    for depth in 0..=d {
        let base = p.level_offset(depth);
        for rank in 0..t.level_size(depth) {
            counts[ca.color(base + rank) as usize] += 1;
        }
    }
    let best = counts.iter().copied().max().unwrap_or(0);
    Ok(counts.iter().position(|&n| n == best).unwrap_or(0) as u32)
}

/// Per-vertex bitmask of depths carrying `color` in the subtree, indexed by
/// breadth-first index of the complete tree.
fn depth_masks(ca: &ColorAssignment, p: &TreeParams, t: &TreeParams, color: u32) -> (Vec<u32>, u64) {
    let mut masks = vec![0u32; t.vertex_count() as usize];
    let mut class_size = 0;
    for depth in (0..=t.depth_cap()).rev() {
        let (src, dst) = (p.level_offset(depth), t.level_offset(depth));
        for rank in 0..t.level_size(depth) {
            let n = Node { depth, rank };
            let mut m = 0u32;
            if ca.color(src + rank) == color {
                m |= 1 << depth;
                class_size += 1;
            }
            if depth < t.depth_cap() {
                for c in 0..t.arity_at(depth) {
                    m |= masks[t.index_of(t.child(n, c)) as usize];
                }
            }
            masks[(dst + rank) as usize] = m;
        }
    }
    (masks, class_size)
}

/// `E_k` for the depth set `mask`.
pub fn energy(mask: u32, q: u32, d: u32, k: u32) -> f64 {
    let verts: Vec<u32> = (d / 2 + 1..=d).filter(|&i| i % 2 == 0 && mask >> i & 1 == 1).collect();
    let b = (q - 1) as f64;
    verts
        .iter()
        .map(|&i| {
            let deg = verts.iter().filter(|&&j| j != i && i + j < d + 2 * k).count();
            b.powi(deg as i32)
        })
        .sum()
}

pub fn energy_profile(
    ca: &ColorAssignment,
    d: u32,
    color: u32,
    samples: u64,
    seed: u64,
    limits: &Limits,
) -> Result<EnergyProfile> {
    let (p, t) = restricted(ca, d)?;
    limits.check("energy tree vertices", t.vertex_count(), limits.max_tree_vertices)?;
    if samples < 2 {
        return Err(Error::InvalidParams("need at least 2 walks".into()));
    }
    let (masks, class_size) = depth_masks(ca, &p, &t, color);
    let steps = (d / 2) as usize;
    let mut sum = vec![0f64; steps + 1];
    let mut sq = vec![0f64; steps + 1];
    let mut dsum = vec![0f64; steps];
    let mut dsq = vec![0f64; steps];
    let mut walk_e = vec![0f64; steps + 1];
    for walk in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(walk);
        let mut v = t.root();
        for (k, e) in walk_e.iter_mut().enumerate() {
            *e = energy(masks[t.index_of(v) as usize], p.q(), d, k as u32);
            if k < steps {
                v = t.child(v, rng.gen_range(0..t.arity_at(v.depth)));
            }
        }
        for k in 0..=steps {
            sum[k] += walk_e[k];
            sq[k] += walk_e[k] * walk_e[k];
            if k < steps {
                let diff = walk_e[k] - walk_e[k + 1];
                dsum[k] += diff;
                dsq[k] += diff * diff;
            }
        }
    }
    let n = samples as f64;
    let se = |s: f64, s2: f64| ((s2 - s * s / n).max(0.0) / (n - 1.0) / n).sqrt();
    Ok(EnergyProfile {
        q: p.q(),
        d,
        color,
        samples,
        seed,
        class_size,
        mean: sum.iter().map(|s| s / n).collect(),
        stderr: sum.iter().zip(&sq).map(|(&s, &s2)| se(s, s2)).collect(),
        diff_stderr: dsum.iter().zip(&dsq).map(|(&s, &s2)| se(s, s2)).collect(),
    })
}
