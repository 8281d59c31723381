//! Explicit graphs: tree truncations, the spine-with-pendants family, their
//! sibling-augmented versions, and exact/band distance powers.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::tree::{Node, TreeParams};
use crate::Limits;

/// Undirected simple graph with text labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGraph {
    labels: Vec<String>,
    adj: Vec<Vec<u32>>,
    family: String,
    parent: Option<Vec<Option<u32>>>,
    tree_edges: Vec<(u32, u32)>,
}

impl FiniteGraph {
    pub fn from_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (u32, u32)>,
        family: impl Into<String>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut seen = HashSet::with_capacity(n);
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidParams(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidParams(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidParams(format!("self-loop at vertex {u}")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(FiniteGraph { labels, adj, family: family.into(), parent: None, tree_edges: Vec::new() })
    }

    /// Rooted tree given by a parent array (`None` marks the root).
    pub fn rooted_tree(
        labels: Vec<String>,
        parent: Vec<Option<u32>>,
        family: impl Into<String>,
    ) -> Result<Self> {
        if parent.len() != labels.len() {
            return Err(Error::NotATree("parent array length differs from vertex count".into()));
        }
        if parent.iter().filter(|p| p.is_none()).count() != 1 {
            return Err(Error::NotATree("expected exactly one root".into()));
        }
        let edges: Vec<(u32, u32)> = parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v as u32)))
            .collect();
        let mut g = Self::from_edges(labels, edges.iter().copied(), family)?;
        if g.connected_components() != 1 {
            return Err(Error::NotATree("parent array is not connected".into()));
        }
        g.parent = Some(parent);
        g.tree_edges = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        g.tree_edges.sort_unstable();
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    pub fn parent(&self, v: usize) -> Option<u32> {
        self.parent.as_ref().and_then(|p| p[v])
    }

    pub fn parents(&self) -> Option<&[Option<u32>]> {
        self.parent.as_deref()
    }

    pub fn root(&self) -> Option<usize> {
        self.parent.as_ref().and_then(|p| p.iter().position(Option::is_none))
    }

    /// Edges of the original spanning tree (for sibling-augmented graphs and
    /// trees themselves).
    pub fn tree_edges(&self) -> &[(u32, u32)] {
        &self.tree_edges
    }

    pub fn connected_components(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut count = 0;
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        queue.push_back(v as usize);
                    }
                }
            }
        }
        count
    }

    /// BFS distances from `source`, stopping after `max_depth` layers.
    pub fn bfs_from(&self, source: usize, max_depth: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            if du == max_depth {
                continue;
            }
            for &v in &self.adj[u] {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = du + 1;
                    queue.push_back(v as usize);
                }
            }
        }
        dist
    }

    /// Graph on the same labels whose vertices are permuted by `perm`
    /// (vertex `v` becomes `perm[v]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<FiniteGraph> {
        if perm.len() != self.n() {
            return Err(Error::InvalidParams("permutation length differs from vertex count".into()));
        }
        let mut labels = vec![String::new(); self.n()];
        for (v, &to) in perm.iter().enumerate() {
            labels[to] = self.labels[v].clone();
        }
        let edges: Vec<_> =
            self.edges().map(|(u, v)| (perm[u as usize] as u32, perm[v as usize] as u32)).collect();
        FiniteGraph::from_edges(labels, edges, self.family.clone())
    }
}

/// All-pairs shortest-path lengths; `None` for disconnected pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        match self.dist[u * self.n + v] {
            u32::MAX => None,
            d => Some(d),
        }
    }
}

/// Truncation of the tree described by `p`; vertex `i` is the vertex with
/// breadth-first index `i` and is labelled by its address.
pub fn build_tree_truncation(p: &TreeParams, limits: &Limits) -> Result<FiniteGraph> {
    let n = p.vertex_count();
    limits.check("tree truncation", n, limits.max_graph_vertices)?;
    let mut labels = Vec::with_capacity(n as usize);
    let mut parent = Vec::with_capacity(n as usize);
    for depth in 0..=p.depth_cap() {
        let parent_offset = if depth == 0 { 0 } else { p.level_offset(depth - 1) };
        for rank in 0..p.level_size(depth) {
            let node = Node { depth, rank };
            labels.push(p.addr_of(node).to_string());
            parent.push(p.parent(node).map(|par| (parent_offset + par.rank) as u32));
        }
    }
    let family = if p.is_regular() {
        format!("tq(q={},depth={})", p.q(), p.depth_cap())
    } else {
        format!("tqd(q={},depth={})", p.q(), p.depth_cap())
    };
    FiniteGraph::rooted_tree(labels, parent, family)
}

/// Spine `v0 .. vd` with a pendant path of `i` edges ending at each `vi`
/// (`1 <= i <= d`). Rooted at `vd`, so that every pendant leaf sits at depth
/// `d` and the graph is an induced subtree of the complete binary tree of
/// depth `d`. Pendant vertex `wi.j` is at distance `j` from `vi`.
pub fn build_p3(d: u32) -> Result<FiniteGraph> {
    if d == 0 {
        return Err(Error::InvalidParams("spine length must be at least 1".into()));
    }
    let mut labels = Vec::new();
    let mut parent = Vec::new();
    // spine from the root down: vd, v(d-1), ..., v0
    for i in (0..=d).rev() {
        labels.push(format!("v{i}"));
        parent.push(if i == d { None } else { Some(d - i - 1) });
    }
    let spine = |i: u32| d - i;
    for i in 1..=d {
        for j in 1..=i {
            let up = if j == 1 { spine(i) } else { labels.len() as u32 - 1 };
            labels.push(format!("w{i}.{j}"));
            parent.push(Some(up));
        }
    }
    FiniteGraph::rooted_tree(labels, parent, format!("p3(d={d})"))
}

/// Adds an edge between every two vertices with the same parent. The
/// original tree edges stay flagged in [`FiniteGraph::tree_edges`].
pub fn augment_siblings(t: &FiniteGraph) -> Result<FiniteGraph> {
    let parents = t.parents().ok_or_else(|| Error::NotATree(t.family().to_string()))?;
    let mut kids: HashMap<u32, Vec<u32>> = HashMap::new();
    for (v, p) in parents.iter().enumerate() {
        if let Some(p) = p {
            kids.entry(*p).or_default().push(v as u32);
        }
    }
    let mut edges: Vec<(u32, u32)> = t.edges().collect();
    for list in kids.values() {
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                edges.push((a, b));
            }
        }
    }
    let mut g = FiniteGraph::from_edges(
        t.labels.clone(),
        edges,
        format!("siblings({})", t.family()),
    )?;
    g.parent = t.parent.clone();
    g.tree_edges = t.tree_edges.clone();
    Ok(g)
}

pub fn all_pairs_distances(g: &FiniteGraph, limits: &Limits) -> Result<DistanceMatrix> {
    let n = g.n();
    limits.check("all-pairs distances", n as u64, limits.max_all_pairs)?;
    let mut dist = Vec::with_capacity(n * n);
    for s in 0..n {
        dist.extend(g.bfs_from(s, u32::MAX));
    }
    Ok(DistanceMatrix { n, dist })
}

/// Edge between two vertices iff their distance lies in `[lo, hi]`.
pub fn band_power(g: &FiniteGraph, lo: u32, hi: u32) -> Result<FiniteGraph> {
    if lo == 0 || lo > hi {
        return Err(Error::InvalidParams(format!("empty or invalid band [{lo}, {hi}]")));
    }
    let mut edges = Vec::new();
    for s in 0..g.n() {
        let dist = g.bfs_from(s, hi);
        for (v, &dv) in dist.iter().enumerate().skip(s + 1) {
            if (lo..=hi).contains(&dv) {
                edges.push((s as u32, v as u32));
            }
        }
    }
    let family = if lo == hi {
        format!("exact_power({},d={lo})", g.family())
    } else {
        format!("band_power({},{lo}..{hi})", g.family())
    };
    FiniteGraph::from_edges(g.labels.clone(), edges, family)
}

/// Edge between two vertices iff they are at distance exactly `d`.
pub fn exact_power(g: &FiniteGraph, d: u32) -> Result<FiniteGraph> {
    band_power(g, d, d)
}

/// DIMACS "edge" format, 1-indexed. Labels and provenance go in comment
/// lines, so that [`read_dimacs`] restores them.
pub fn export_dimacs<W: Write>(g: &FiniteGraph, extra_comments: &[String], mut w: W) -> Result<()> {
    writeln!(w, "c family {}", g.family())?;
    for c in extra_comments {
        writeln!(w, "c {c}")?;
    }
    for (i, l) in g.labels.iter().enumerate() {
        writeln!(w, "c label {} {l}", i + 1)?;
    }
    writeln!(w, "p edge {} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "e {} {}", u + 1, v + 1)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dimacs<R: BufRead>(r: R) -> Result<FiniteGraph> {
    let mut n: Option<usize> = None;
    let mut family = String::from("dimacs");
    let mut labels: HashMap<usize, String> = HashMap::new();
    let mut edges = BTreeSet::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let mut parts = line.split_whitespace();
        let bad = |msg: &str| Error::Parse(format!("line {}: {msg}: {line:?}", lineno + 1));
        match parts.next() {
            None => {}
            Some("c") => match parts.next() {
                Some("family") => family = parts.collect::<Vec<_>>().join(" "),
                Some("label") => {
                    let idx: usize =
                        parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad label index"))?;
                    let text = parts.collect::<Vec<_>>().join(" ");
                    labels.insert(idx, text);
                }
                _ => {}
            },
            Some("p") => {
                let _format = parts.next().ok_or_else(|| bad("missing format"))?;
                let count = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad vertex count"))?;
                n = Some(count);
            }
            Some("e") => {
                let n = n.ok_or_else(|| bad("edge before problem line"))?;
                let mut end = || -> Result<u32> {
                    let v: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad endpoint"))?;
                    if v == 0 || v > n {
                        return Err(bad("endpoint out of range"));
                    }
                    Ok(v as u32 - 1)
                };
                let (u, v) = (end()?, end()?);
                edges.insert((u.min(v), u.max(v)));
            }
            Some(_) => return Err(bad("unknown line type")),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("missing problem line".into()))?;
    let labels = (1..=n).map(|i| labels.remove(&i).unwrap_or_else(|| i.to_string())).collect();
    FiniteGraph::from_edges(labels, edges, family)
}

/// Edge list with text labels.
pub fn export_csv_edges<W: Write>(g: &FiniteGraph, extra_comments: &[String], mut w: W) -> Result<()> {
    writeln!(w, "# family={}", g.family())?;
    for c in extra_comments {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "source,target")?;
    for (u, v) in g.edges() {
        writeln!(w, "{},{}", g.label(u as usize), g.label(v as usize))?;
    }
    w.flush()?;
    Ok(())
}
