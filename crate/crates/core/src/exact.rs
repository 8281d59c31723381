//! Coloring of regular-tree truncations in which vertices at distance
//! exactly `d` (even) receive distinct colors.
//!
//! Special vertices (non-root, depth a multiple of `k`) are colored greedily
//! in breadth-first order. Each one avoids the colors of its relatives and of
//! its ancestors at distances `2k, 3k, ..., (floor(d/k)+1)k`. Every vertex at
//! depth at least `d/2` then inherits the color of the unique special
//! ancestor whose distance to it lies in `[d/2 - k, d/2 - 1]`, and the
//! shallow vertices share color 0.

use crate::coloring::{ColorAssignment, ColorDomain, Provenance};
use crate::error::{Error, Result};
use crate::tree::{pow, Node, TreeParams, VertexAddr};
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactColoringParams {
    q: u32,
    d: u32,
    k: u32,
    depth_cap: u32,
}

impl ExactColoringParams {
    pub fn new(q: u32, d: u32, k: u32, depth_cap: u32) -> Result<Self> {
        if q < 3 {
            return Err(Error::InvalidParams(format!("q must be at least 3, got {q}")));
        }
        if d < 2 || d % 2 == 1 {
            return Err(Error::InvalidParams(format!("d must be even and at least 2, got {d}")));
        }
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if !block_fits(q, d, k) {
            return Err(Error::InvalidParams(format!("k={k} violates k(q-1)^(k-1) <= d for q={q}, d={d}")));
        }
        if depth_cap < d / 2 {
            return Err(Error::InvalidParams(format!(
                "truncation depth {depth_cap} is below d/2 = {}",
                d / 2
            )));
        }
        Ok(ExactColoringParams { q, d, k, depth_cap })
    }

    /// Uses [`choose_k`] for the block size.
    pub fn auto(q: u32, d: u32, depth_cap: u32) -> Result<Self> {
        if q < 3 || d < 2 || d % 2 == 1 {
            return Err(Error::InvalidParams(format!("need q >= 3 and even d >= 2, got q={q}, d={d}")));
        }
        Self::new(q, d, choose_k(q, d), depth_cap)
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn depth_cap(&self) -> u32 {
        self.depth_cap
    }

    pub fn tree(&self) -> Result<TreeParams> {
        TreeParams::regular(self.q, self.depth_cap)
    }

    /// `(q-1)^k + (q-1)^floor(k/2) + ceil(d/k) + 1`.
    pub fn palette_bound(&self) -> u64 {
        let b = self.q - 1;
        pow(b, self.k) + pow(b, self.k / 2) + self.d.div_ceil(self.k) as u64 + 1
    }

    /// Deepest special vertex that owns a block inside the truncation.
    fn deepest_special(&self) -> u32 {
        let reach = self.depth_cap + self.k - self.d / 2;
        (reach / self.k) * self.k
    }
}

fn block_fits(q: u32, d: u32, k: u32) -> bool {
    (q as u64 - 1)
        .checked_pow(k - 1)
        .and_then(|p| p.checked_mul(k as u64))
        .is_some_and(|need| need <= d as u64)
}

/// Block size `floor((log d - log log d + log log(q-1)) / log(q-1))`, at least
/// 1 and lowered until `k(q-1)^(k-1) <= d`.
///
/// The expression equals `floor(log_b(d / log_b d))` with `b = q - 1`. When
/// `d` and `b` are powers of a common base the logarithm is rational and the
/// floor is taken in integer arithmetic, so exact ties land on the right side.
pub fn choose_k(q: u32, d: u32) -> u32 {
    assert!(q >= 3 && d >= 2, "choose_k needs q >= 3 and d >= 2");
    let b = (q - 1) as u64;
    let raw = match common_base(b, d as u64) {
        Some((s, a, e)) => {
            // b^k <= d * a / e  <=>  s^(a k) * e <= d * a
            let (d, a, e) = (d as u128, a as u128, e as u128);
            let s = s as u128;
            let mut k: i64 = -1;
            let mut lhs = e;
            while lhs <= d * a {
                k += 1;
                lhs = lhs.saturating_mul(s.pow(a as u32));
            }
            k
        }
        None => {
            let (d, b) = (d as f64, b as f64);
            ((d.ln() - d.ln().ln() + b.ln().ln()) / b.ln()).floor() as i64
        }
    };
    let mut k = raw.max(1) as u32;
    while k > 1 && !block_fits(q, d, k) {
        k -= 1;
    }
    k
}

/// Writes `b = s^a` with `s` not a perfect power; returns `(s, a, e)` when
/// `d = s^e` as well.
fn common_base(b: u64, d: u64) -> Option<(u64, u32, u32)> {
    let (s, a) = primitive_root(b);
    if s < 2 {
        return None;
    }
    let mut e = 0u32;
    let mut x = d;
    while x % s == 0 {
        x /= s;
        e += 1;
    }
    (x == 1 && e > 0).then_some((s, a, e))
}

fn primitive_root(b: u64) -> (u64, u32) {
    for a in (2..=63u32).rev() {
        let s = (b as f64).powf(1.0 / a as f64).round() as u64;
        for cand in s.saturating_sub(1)..=s + 1 {
            if cand >= 2 && cand.checked_pow(a) == Some(b) {
                return (cand, a);
            }
        }
    }
    (b, 1)
}

/// Non-root vertex whose depth is a multiple of `k`.
pub fn is_special(a: &VertexAddr, k: u32) -> bool {
    k >= 1 && a.depth() > 0 && a.depth() % k == 0
}

/// Cousins of `v` (special vertices sharing its ancestor at distance `k`)
/// together with the special vertices at the depth of that ancestor lying
/// within distance `k` of it. Sorted breadth-first.
pub fn relatives(v: &VertexAddr, k: u32, p: &TreeParams) -> Result<Vec<VertexAddr>> {
    if !is_special(v, k) {
        return Err(Error::NotSpecial(v.to_string()));
    }
    let node = p.node_of(v)?;
    let up = p.ancestor_node(node, k).expect("special depth is at least k");
    let mut out: Vec<VertexAddr> = p
        .block(up, k)
        .filter(|&r| r != node.rank)
        .map(|rank| p.addr_of(Node { depth: node.depth, rank }))
        .collect();
    if up.depth >= 1 {
        let m = (k / 2).min(up.depth);
        let top = p.ancestor_node(up, m).unwrap();
        out.extend(p.block(top, m).map(|rank| p.addr_of(Node { depth: up.depth, rank })));
    }
    out.sort_by_key(|a| (a.depth(), a.clone()));
    Ok(out)
}

/// Greedy coloring of the special vertices, colors starting at 1.
#[derive(Clone, Debug)]
pub struct SpecialColoring {
    params: ExactColoringParams,
    tree: TreeParams,
    /// `levels[j]` holds the colors at depth `(j + 1) k`, indexed by rank.
    levels: Vec<Vec<u32>>,
    max_forbidden_top: usize,
    max_forbidden_inner: usize,
}

impl SpecialColoring {
    pub fn params(&self) -> &ExactColoringParams {
        &self.params
    }

    pub fn color(&self, n: Node) -> Option<u32> {
        let k = self.params.k;
        if n.depth == 0 || n.depth % k != 0 {
            return None;
        }
        self.levels.get((n.depth / k - 1) as usize)?.get(n.rank as usize).copied()
    }

    pub fn color_of(&self, a: &VertexAddr) -> Option<u32> {
        self.color(self.tree.node_of(a).ok()?)
    }

    /// Deepest special level that was colored.
    pub fn depth(&self) -> u32 {
        self.levels.len() as u32 * self.params.k
    }

    pub fn max_color(&self) -> u32 {
        self.levels.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Largest number of distinct forbidden colors met by a special vertex
    /// whose ancestor at distance `k` is the root.
    pub fn max_forbidden_top(&self) -> usize {
        self.max_forbidden_top
    }

    /// Same, over special vertices whose ancestor at distance `k` is not the
    /// root.
    pub fn max_forbidden_inner(&self) -> usize {
        self.max_forbidden_inner
    }
}

struct Forbidden {
    stamp: Vec<u64>,
    round: u64,
    count: usize,
}

impl Forbidden {
    fn new() -> Self {
        Forbidden { stamp: vec![0; 64], round: 0, count: 0 }
    }

    fn next(&mut self) {
        self.round += 1;
        self.count = 0;
    }

    fn mark(&mut self, c: u32) {
        let c = c as usize;
        if c >= self.stamp.len() {
            self.stamp.resize(2 * c + 2, 0);
        }
        if self.stamp[c] != self.round {
            self.stamp[c] = self.round;
            self.count += 1;
        }
    }

    fn smallest_free(&self) -> u32 {
        (1..).find(|&c| c >= self.stamp.len() || self.stamp[c] != self.round).unwrap() as u32
    }
}

pub fn special_coloring(params: &ExactColoringParams, limits: &Limits) -> Result<SpecialColoring> {
    let tree = params.tree()?;
    let k = params.k;
    let b = tree.branch_arity();
    let deepest = params.deepest_special();
    let total: u64 = (1..=deepest / k).map(|j| tree.level_size(j * k)).sum();
    limits.check("special vertices", total, limits.max_tree_vertices)?;

    let max_anc = params.d / k + 1;
    let mut levels: Vec<Vec<u32>> = Vec::new();
    let mut forbid = Forbidden::new();
    let (mut max_top, mut max_inner) = (0, 0);
    for j in 1..=deepest / k {
        let t = j * k;
        let size = tree.level_size(t) as usize;
        let mut cur = vec![0u32; size];
        let cousin_w = pow(b, k) as usize;
        for r in 0..size {
            forbid.next();
            // cousins already colored: same level, same ancestor at distance k
            let start = if t == k { 0 } else { (r / cousin_w) * cousin_w };
            for &c in &cur[start..r] {
                forbid.mark(c);
            }
            if j >= 2 {
                // special vertices near the ancestor at distance k
                let h = t - k;
                let prev = &levels[j as usize - 2];
                let m = (k / 2).min(h);
                let block = if m == h {
                    0..prev.len()
                } else {
                    let w = pow(b, m) as usize;
                    let anc = r / cousin_w;
                    (anc / w) * w..(anc / w + 1) * w
                };
                for &c in &prev[block] {
                    forbid.mark(c);
                }
                // ancestors at distance ik, 2 <= i <= floor(d/k)+1, that are special
                for i in 2..=max_anc.min(j - 1) {
                    let rank = r / pow(b, i * k) as usize;
                    forbid.mark(levels[(j - i) as usize - 1][rank]);
                }
            }
            if t == k {
                max_top = max_top.max(forbid.count);
            } else {
                max_inner = max_inner.max(forbid.count);
            }
            cur[r] = forbid.smallest_free();
        }
        levels.push(cur);
    }
    Ok(SpecialColoring {
        params: *params,
        tree,
        levels,
        max_forbidden_top: max_top,
        max_forbidden_inner: max_inner,
    })
}

fn owner_depth(depth: u32, d: u32, k: u32) -> u32 {
    // the multiple of k in (depth - d/2, depth - d/2 + k]
    k * (depth - d / 2 + 1).div_ceil(k)
}

/// Special ancestor whose block contains `x`.
pub fn block_owner(x: &VertexAddr, params: &ExactColoringParams) -> Result<VertexAddr> {
    let half = params.d / 2;
    if x.depth() < half {
        return Err(Error::InvalidParams(format!(
            "{x} lies at depth {} < d/2 = {half} and belongs to the root region",
            x.depth()
        )));
    }
    let owner = owner_depth(x.depth(), params.d, params.k);
    x.ancestor(x.depth() - owner)
}

/// Full coloring of the truncation of depth `params.depth_cap()`.
pub fn color_truncation(params: &ExactColoringParams, limits: &Limits) -> Result<ColorAssignment> {
    let tree = params.tree()?;
    limits.check("tree truncation", tree.vertex_count(), limits.max_tree_vertices)?;
    let special = special_coloring(params, limits)?;
    let (d, k) = (params.d, params.k);
    let b = tree.branch_arity();
    let mut colors = Vec::with_capacity(tree.vertex_count() as usize);
    for depth in 0..=tree.depth_cap() {
        let size = tree.level_size(depth) as usize;
        if depth < d / 2 {
            colors.extend(std::iter::repeat_n(0, size));
            continue;
        }
        let owner = owner_depth(depth, d, k);
        let owner_colors = &special.levels[(owner / k - 1) as usize];
        let run = pow(b, depth - owner) as usize;
        for &c in owner_colors {
            colors.extend(std::iter::repeat_n(c, run));
        }
    }
    let prov = Provenance::new("block-greedy")
        .with("q", params.q)
        .with("d", params.d)
        .with("k", params.k)
        .with("depth", params.depth_cap);
    ColorAssignment::new(ColorDomain::Tree(tree), colors, prov)
}

/// Color by depth parity; proper for every odd distance.
pub fn parity_coloring(p: &TreeParams, limits: &Limits) -> Result<ColorAssignment> {
    limits.check("tree truncation", p.vertex_count(), limits.max_tree_vertices)?;
    let mut colors = Vec::with_capacity(p.vertex_count() as usize);
    for depth in 0..=p.depth_cap() {
        colors.extend(std::iter::repeat_n(depth % 2, p.level_size(depth) as usize));
    }
    let prov = Provenance::new("parity").with("q", p.q()).with("depth", p.depth_cap());
    ColorAssignment::new(ColorDomain::Tree(*p), colors, prov)
}
