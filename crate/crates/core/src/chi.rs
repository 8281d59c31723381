//! Exact chromatic number of small explicit graphs.

use std::time::{Duration, Instant};

use crate::coloring::{ColorAssignment, ColorDomain, Provenance};
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 10_000_000, max_time: Duration::from_secs(60) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiResult {
    /// Exact chromatic number, or the best upper bound found when
    /// `timed_out` is set.
    pub chi: u32,
    /// Proper coloring with `chi` colors.
    pub witness_coloring: ColorAssignment,
    pub clique: Vec<usize>,
    pub clique_lb: u32,
    pub dsatur_ub: u32,
    pub nodes_explored: u64,
    pub timed_out: bool,
}

impl ChiResult {
    pub fn is_exact(&self) -> bool {
        !self.timed_out
    }
}

fn is_clique(g: &FiniteGraph, vs: &[usize]) -> bool {
    vs.iter().enumerate().all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// Vertices by increasing core number (smallest-last removal order).
fn degeneracy_order(g: &FiniteGraph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (deg[v], v)).unwrap();
        removed[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !removed[u as usize] {
                deg[u as usize] -= 1;
            }
        }
    }
    order
}

/// Greedy clique grown from every vertex, candidates taken in reverse
/// degeneracy order; the largest one found.
pub fn greedy_clique(g: &FiniteGraph) -> Vec<usize> {
    let mut order = degeneracy_order(g);
    order.reverse();
    let mut best: Vec<usize> = Vec::new();
    for &start in &order {
        let mut clique = vec![start];
        for &v in &order {
            if v != start && clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    debug_assert!(is_clique(g, &best));
    best
}

fn saturation_pick(g: &FiniteGraph, colors: &[Option<u32>], sat: &[u64]) -> Option<usize> {
    (0..g.n()).filter(|&v| colors[v].is_none()).max_by(|&a, &b| {
        (sat[a].count_ones(), g.degree(a)).cmp(&(sat[b].count_ones(), g.degree(b))).then(b.cmp(&a))
    })
}

/// DSATUR: most saturated vertex first, then highest degree, then lowest
/// index; smallest free color.
pub fn dsatur(g: &FiniteGraph) -> ColorAssignment {
    let n = g.n();
    let mut colors: Vec<Option<u32>> = vec![None; n];
    let mut seen: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut sat = vec![0u64; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v].is_none())
            .max_by(|&a, &b| (sat[a], g.degree(a)).cmp(&(sat[b], g.degree(b))).then(b.cmp(&a)))
            .unwrap();
        let c = (0..).find(|&c| !seen[v].get(c as usize).copied().unwrap_or(false)).unwrap();
        colors[v] = Some(c);
        for &u in g.neighbors(v) {
            let s = &mut seen[u as usize];
            if s.len() <= c as usize {
                s.resize(c as usize + 1, false);
            }
            if !s[c as usize] {
                s[c as usize] = true;
                sat[u as usize] += 1;
            }
        }
    }
    let colors = colors.into_iter().map(|c| c.unwrap()).collect();
    ColorAssignment::new(ColorDomain::for_graph(g), colors, Provenance::new("dsatur")).expect("one color per vertex")
}

struct Search<'a> {
    g: &'a FiniteGraph,
    k: u32,
    colors: Vec<Option<u32>>,
    /// `conflicts[v * k + c]`: colored neighbors of `v` with color `c`.
    conflicts: Vec<u32>,
    sat: Vec<u64>,
    nodes: u64,
    budget: Budget,
    start: Instant,
    out_of_budget: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a FiniteGraph, k: u32, budget: Budget, start: Instant, nodes: u64) -> Self {
        let n = g.n();
        Search {
            g,
            k,
            colors: vec![None; n],
            conflicts: vec![0; n * k as usize],
            sat: vec![0; n],
            nodes,
            budget,
            start,
            out_of_budget: false,
        }
    }

    fn assign(&mut self, v: usize, c: u32) {
        self.colors[v] = Some(c);
        let k = self.k as usize;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.conflicts[u as usize * k + c as usize];
            if *slot == 0 {
                self.sat[u as usize] |= 1 << c;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: u32) {
        self.colors[v] = None;
        let k = self.k as usize;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.conflicts[u as usize * k + c as usize];
            *slot -= 1;
            if *slot == 0 {
                self.sat[u as usize] &= !(1 << c);
            }
        }
    }

    fn exhausted(&mut self) -> bool {
        if self.nodes >= self.budget.max_nodes || (self.nodes % 1024 == 0 && self.start.elapsed() > self.budget.max_time)
        {
            self.out_of_budget = true;
        }
        self.out_of_budget
    }

    /// Extends the current partial coloring to a proper `k`-coloring.
    fn extend(&mut self, used: u32) -> bool {
        self.nodes += 1;
        if self.exhausted() {
            return false;
        }
        let Some(v) = saturation_pick(self.g, &self.colors, &self.sat) else { return true };
        // a color beyond `used` is interchangeable with any other unused one
        for c in 0..(used + 1).min(self.k) {
            if self.sat[v] >> c & 1 == 1 {
                continue;
            }
            self.assign(v, c);
            if self.extend(used.max(c + 1)) {
                return true;
            }
            self.unassign(v, c);
            if self.out_of_budget {
                return false;
            }
        }
        false
    }
}

/// Branch and bound between the greedy clique and DSATUR, one decision
/// search per candidate color count. The clique is fixed to colors
/// `0..|clique|`.
pub fn chi_exact(g: &FiniteGraph, budget: Budget) -> Result<ChiResult> {
    if g.n() == 0 {
        return Err(Error::InvalidParams("empty graph".into()));
    }
    let start = Instant::now();
    let clique = greedy_clique(g);
    let clique_lb = clique.len() as u32;
    let mut best = dsatur(g);
    let dsatur_ub = best.palette_size();
    if dsatur_ub > 64 {
        return Err(Error::InvalidParams(format!("solver handles at most 64 colors, DSATUR needed {dsatur_ub}")));
    }
    let mut nodes = 0;
    let mut timed_out = false;
    let mut k = dsatur_ub;
    while k > clique_lb {
        let target = k - 1;
        let mut s = Search::new(g, target, budget, start, nodes);
        for (c, &v) in clique.iter().enumerate() {
            s.assign(v, c as u32);
        }
        let found = s.extend(clique_lb);
        nodes = s.nodes;
        if found {
            let colors = s.colors.into_iter().map(|c| c.unwrap()).collect();
            best = ColorAssignment::new(
                ColorDomain::for_graph(g),
                colors,
                Provenance::new("branch-and-bound").with("colors", target),
            )?;
            k = target;
        } else {
            timed_out = s.out_of_budget;
            break;
        }
    }
    Ok(ChiResult {
        chi: k,
        witness_coloring: best,
        clique,
        clique_lb,
        dsatur_ub,
        nodes_explored: nodes,
        timed_out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_tree_truncation, exact_power};
    use crate::tree::TreeParams;
    use crate::verify::verify_on_graph;
    use crate::Limits;

    fn graph(n: usize, edges: &[(u32, u32)]) -> FiniteGraph {
        FiniteGraph::from_edges((0..n).map(|i| i.to_string()).collect(), edges.iter().copied(), "test").unwrap()
    }

    fn cycle(n: u32) -> FiniteGraph {
        graph(n as usize, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    fn power_t3(depth: u32, d: u32) -> FiniteGraph {
        let t = build_tree_truncation(&TreeParams::complete(3, depth).unwrap(), &Limits::default()).unwrap();
        exact_power(&t, d).unwrap()
    }

    #[test]
    fn clique_examples() {
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(greedy_clique(&k4).len(), 4);
        assert_eq!(greedy_clique(&graph(3, &[])).len(), 1);
        let g = power_t3(2, 2);
        let c = greedy_clique(&g);
        assert_eq!(c.len(), 3);
        assert!(is_clique(&g, &c));
    }

    #[test]
    fn dsatur_examples() {
        assert_eq!(dsatur(&cycle(6)).palette_size(), 2);
        assert_eq!(dsatur(&cycle(5)).palette_size(), 3);
        let g = power_t3(2, 2);
        let ca = dsatur(&g);
        assert!(ca.palette_size() <= 4);
        assert!(verify_on_graph(&ca, &g).unwrap().is_proper());
    }

    #[test]
    fn exact_examples() {
        let r = chi_exact(&cycle(5), Budget::default()).unwrap();
        assert_eq!((r.chi, r.timed_out), (3, false));
        let g = power_t3(2, 2);
        let r = chi_exact(&g, Budget::default()).unwrap();
        assert_eq!(r.chi, 3);
        assert!(verify_on_graph(&r.witness_coloring, &g).unwrap().is_proper());
        assert_eq!(r.witness_coloring.palette_size(), 3);
        let r = chi_exact(&power_t3(4, 4), Budget::default()).unwrap();
        assert!(r.clique_lb >= 3 && r.clique_lb <= r.chi && r.chi <= r.dsatur_ub);
    }

    #[test]
    fn brute_force_agrees() {
        let g = power_t3(2, 2);
        let n = g.n();
        let colorable = |k: u32| {
            (0..(k as u64).pow(n as u32)).any(|mut code| {
                let mut c = vec![0u64; n];
                for x in c.iter_mut() {
                    *x = code % k as u64;
                    code /= k as u64;
                }
                g.edges().all(|(u, v)| c[u as usize] != c[v as usize])
            })
        };
        assert!(!colorable(2));
        assert!(colorable(3));
    }

    #[test]
    fn mycielski_needs_search() {
        // Grötzsch graph: triangle-free with chromatic number 4
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (5, 1), (5, 4), (6, 0), (6, 2), (7, 1), (7, 3), (8, 2), (8, 4), (9, 3), (9, 0),
            (10, 5), (10, 6), (10, 7), (10, 8), (10, 9),
        ];
        let g = graph(11, &edges);
        let r = chi_exact(&g, Budget::default()).unwrap();
        assert_eq!(r.clique_lb, 2);
        assert_eq!(r.chi, 4);
        assert!(verify_on_graph(&r.witness_coloring, &g).unwrap().is_proper());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (5, 1), (5, 4), (6, 0), (6, 2), (7, 1), (7, 3), (8, 2), (8, 4), (9, 3), (9, 0),
            (10, 5), (10, 6), (10, 7), (10, 8), (10, 9),
        ];
        let g = graph(11, &edges);
        let tight = Budget { max_nodes: 1, max_time: Duration::from_secs(60) };
        let r = chi_exact(&g, tight).unwrap();
        if r.dsatur_ub > r.clique_lb {
            assert!(r.timed_out);
        }
        assert!(verify_on_graph(&r.witness_coloring, &g).unwrap().is_proper());
    }
}
