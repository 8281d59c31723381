//! Implicit rooted trees: truncations of the infinite `q`-regular tree and
//! complete `(q-1)`-ary trees.
//!
//! Vertices are never materialized for queries. A vertex is either a
//! [`VertexAddr`] (the branch indices on the path from the root) or a
//! [`Node`], its compact `(depth, rank)` form where `rank` is the position
//! of the vertex inside its level in lexicographic order. Every subtree
//! restricted to one level is a contiguous rank range, which is what the
//! colorers and the verifier build on.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported `q`. Child sets are tracked as 64-bit masks.
pub const MAX_Q: u32 = 64;

/// Which rooted tree an address lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TreeParams {
    q: u32,
    root_arity: u32,
    depth_cap: u32,
}

impl TreeParams {
    pub fn new(q: u32, root_arity: u32, depth_cap: u32) -> Result<Self> {
        if !(3..=MAX_Q).contains(&q) {
            return Err(Error::InvalidParams(format!("q must lie in [3, {MAX_Q}], got {q}")));
        }
        if root_arity != q && root_arity != q - 1 {
            return Err(Error::InvalidParams(format!(
                "root arity must be q or q-1, got {root_arity} for q={q}"
            )));
        }
        let p = TreeParams { q, root_arity, depth_cap };
        // every level size and offset must fit in a u64
        let mut total: u64 = 0;
        for depth in 0..=depth_cap {
            let size = p.checked_level_size(depth).ok_or_else(|| {
                Error::InvalidParams(format!("tree q={q} depth {depth_cap} overflows u64"))
            })?;
            total = total.checked_add(size).ok_or_else(|| {
                Error::InvalidParams(format!("tree q={q} depth {depth_cap} overflows u64"))
            })?;
        }
        Ok(p)
    }

    /// Truncation of the infinite `q`-regular tree: the root has `q` children.
    pub fn regular(q: u32, depth_cap: u32) -> Result<Self> {
        Self::new(q, q, depth_cap)
    }

    /// Complete `(q-1)`-ary tree of the given depth.
    pub fn complete(q: u32, depth_cap: u32) -> Result<Self> {
        Self::new(q, q.saturating_sub(1), depth_cap)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn root_arity(&self) -> u32 {
        self.root_arity
    }

    pub fn branch_arity(&self) -> u32 {
        self.q - 1
    }

    pub fn depth_cap(&self) -> u32 {
        self.depth_cap
    }

    pub fn is_regular(&self) -> bool {
        self.root_arity == self.q
    }

    /// Same tree family, different truncation depth.
    pub fn with_depth(&self, depth_cap: u32) -> Result<Self> {
        Self::new(self.q, self.root_arity, depth_cap)
    }

    fn checked_level_size(&self, depth: u32) -> Option<u64> {
        if depth == 0 {
            return Some(1);
        }
        (self.branch_arity() as u64)
            .checked_pow(depth - 1)?
            .checked_mul(self.root_arity as u64)
    }

    /// Number of vertices at `depth` (ignores the truncation).
    pub fn level_size(&self, depth: u32) -> u64 {
        self.checked_level_size(depth).expect("level size overflow")
    }

    /// Index of the first vertex of `depth` in breadth-first order.
    pub fn level_offset(&self, depth: u32) -> u64 {
        (0..depth).map(|t| self.level_size(t)).sum()
    }

    pub fn vertex_count(&self) -> u64 {
        self.level_offset(self.depth_cap + 1)
    }

    /// Children of a vertex at `depth`.
    pub fn arity_at(&self, depth: u32) -> u32 {
        if depth == 0 {
            self.root_arity
        } else {
            self.branch_arity()
        }
    }

    pub fn root(&self) -> Node {
        Node { depth: 0, rank: 0 }
    }

    pub fn index_of(&self, n: Node) -> u64 {
        self.level_offset(n.depth) + n.rank
    }

    /// Inverse of [`TreeParams::index_of`].
    pub fn node_at(&self, index: u64) -> Result<Node> {
        let mut rest = index;
        for depth in 0..=self.depth_cap {
            let size = self.level_size(depth);
            if rest < size {
                return Ok(Node { depth, rank: rest });
            }
            rest -= size;
        }
        Err(Error::InvalidParams(format!("index {index} beyond {} vertices", self.vertex_count())))
    }

    /// Parent of a non-root node.
    pub fn parent(&self, n: Node) -> Option<Node> {
        match n.depth {
            0 => None,
            1 => Some(self.root()),
            d => Some(Node { depth: d - 1, rank: n.rank / self.branch_arity() as u64 }),
        }
    }

    /// Ancestor of `n` at distance `i`.
    pub fn ancestor_node(&self, n: Node, i: u32) -> Option<Node> {
        if i > n.depth {
            return None;
        }
        let depth = n.depth - i;
        if depth == 0 {
            return Some(self.root());
        }
        Some(Node { depth, rank: n.rank / pow(self.branch_arity(), i) })
    }

    /// Child number of `n` under its parent.
    pub fn branch_of(&self, n: Node) -> Option<u32> {
        match n.depth {
            0 => None,
            1 => Some(n.rank as u32),
            _ => Some((n.rank % self.branch_arity() as u64) as u32),
        }
    }

    pub fn child(&self, n: Node, branch: u32) -> Node {
        debug_assert!(branch < self.arity_at(n.depth));
        if n.depth == 0 {
            Node { depth: 1, rank: branch as u64 }
        } else {
            Node { depth: n.depth + 1, rank: n.rank * self.branch_arity() as u64 + branch as u64 }
        }
    }

    /// Rank range of the descendants of `n` at distance `offset`, ignoring the
    /// truncation depth. The range is split evenly between the children of
    /// `n` when `offset >= 1`.
    pub fn block(&self, n: Node, offset: u32) -> Range<u64> {
        if offset == 0 {
            return n.rank..n.rank + 1;
        }
        if n.depth == 0 {
            return 0..self.level_size(offset);
        }
        let w = pow(self.branch_arity(), offset);
        n.rank * w..(n.rank + 1) * w
    }

    /// Size of each child's share of [`TreeParams::block`] (`offset >= 1`).
    pub fn child_block_len(&self, offset: u32) -> u64 {
        pow(self.branch_arity(), offset - 1)
    }

    /// Distance between two nodes via their lowest common ancestor.
    pub fn node_distance(&self, a: Node, b: Node) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut dist = 0;
        while a.depth > b.depth {
            a = self.parent(a).unwrap();
            dist += 1;
        }
        while b.depth > a.depth {
            b = self.parent(b).unwrap();
            dist += 1;
        }
        while a != b {
            a = self.parent(a).unwrap();
            b = self.parent(b).unwrap();
            dist += 2;
        }
        dist
    }

    /// Every vertex at distance exactly `delta` from `x` inside the
    /// truncation, as `(depth, rank range)` pieces. The walk climbs `i` edges
    /// to an ancestor and descends `delta - i` edges avoiding the branch that
    /// leads back to `x`, so each vertex appears in exactly one piece.
    pub fn distance_shell(&self, x: Node, delta: u32) -> Vec<(u32, Range<u64>)> {
        let mut out = Vec::new();
        for i in 0..=delta.min(x.depth) {
            let anc = self.ancestor_node(x, i).unwrap();
            let down = delta - i;
            let depth = anc.depth + down;
            if depth > self.depth_cap {
                continue;
            }
            if down == 0 {
                out.push((depth, anc.rank..anc.rank + 1));
                continue;
            }
            let block = self.block(anc, down);
            if i == 0 {
                out.push((depth, block));
                continue;
            }
            let toward = self.ancestor_node(x, i - 1).unwrap();
            let len = self.child_block_len(down);
            let skip = self.branch_of(toward).unwrap() as u64;
            let lo = block.start + skip * len;
            let hi = lo + len;
            if block.start < lo {
                out.push((depth, block.start..lo));
            }
            if hi < block.end {
                out.push((depth, hi..block.end));
            }
        }
        out
    }

    pub fn node_of(&self, a: &VertexAddr) -> Result<Node> {
        self.check(a)?;
        let b = self.branch_arity() as u64;
        let rank = a.0.iter().skip(1).fold(a.0.first().copied().unwrap_or(0) as u64, |r, &c| {
            r * b + c as u64
        });
        Ok(Node { depth: a.depth(), rank })
    }

    pub fn addr_of(&self, n: Node) -> VertexAddr {
        let mut branches = vec![0u32; n.depth as usize];
        let b = self.branch_arity() as u64;
        let mut rank = n.rank;
        for slot in branches.iter_mut().skip(1).rev() {
            *slot = (rank % b) as u32;
            rank /= b;
        }
        if let Some(first) = branches.first_mut() {
            *first = rank as u32;
        }
        VertexAddr(branches)
    }

    /// Validates depth and per-position arity.
    pub fn check(&self, a: &VertexAddr) -> Result<()> {
        if a.depth() > self.depth_cap {
            return Err(Error::DepthOverflow { requested: a.depth(), cap: self.depth_cap });
        }
        for (pos, &c) in a.0.iter().enumerate() {
            let arity = self.arity_at(pos as u32);
            if c >= arity {
                return Err(Error::InvalidAddress {
                    addr: a.to_string(),
                    reason: format!("branch {c} at position {pos} exceeds arity {arity}"),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for TreeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} root_arity={} depth={}", self.q, self.root_arity, self.depth_cap)
    }
}

pub(crate) fn pow(base: u32, exp: u32) -> u64 {
    (base as u64).pow(exp)
}

/// Compact vertex form: depth plus rank within the level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub depth: u32,
    pub rank: u64,
}

/// Path-from-root encoding of a vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAddr(Vec<u32>);

impl VertexAddr {
    pub fn root() -> Self {
        VertexAddr(Vec::new())
    }

    pub fn new(branches: Vec<u32>) -> Self {
        VertexAddr(branches)
    }

    pub fn branches(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ancestor(&self, i: u32) -> Result<VertexAddr> {
        if i > self.depth() {
            return Err(Error::NoSuchAncestor { depth: self.depth(), distance: i });
        }
        Ok(VertexAddr(self.0[..(self.depth() - i) as usize].to_vec()))
    }

    pub fn child(&self, branch: u32) -> VertexAddr {
        let mut b = self.0.clone();
        b.push(branch);
        VertexAddr(b)
    }

    pub fn common_prefix_len(&self, other: &VertexAddr) -> u32 {
        self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count() as u32
    }

    pub fn distance(&self, other: &VertexAddr) -> u32 {
        self.depth() + other.depth() - 2 * self.common_prefix_len(other)
    }

    pub fn children(&self, p: &TreeParams) -> Vec<VertexAddr> {
        if self.depth() >= p.depth_cap() {
            return Vec::new();
        }
        (0..p.arity_at(self.depth())).map(|c| self.child(c)).collect()
    }

    /// `L(a, offset)` in lexicographic order.
    pub fn descendants_at(
        &self,
        offset: u32,
        p: &TreeParams,
    ) -> Result<impl Iterator<Item = VertexAddr> + '_> {
        let target = self.depth() + offset;
        if target > p.depth_cap() {
            return Err(Error::DepthOverflow { requested: target, cap: p.depth_cap() });
        }
        let node = p.node_of(self)?;
        let params = *p;
        Ok(p.block(node, offset).map(move |rank| params.addr_of(Node { depth: target, rank })))
    }

    /// Position in breadth-first order (depth first, then lexicographic).
    pub fn bfs_index(&self, p: &TreeParams) -> Result<u64> {
        Ok(p.index_of(p.node_of(self)?))
    }
}

impl fmt::Display for VertexAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("r");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for VertexAddr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "r" {
            return Ok(VertexAddr::root());
        }
        s.split('.')
            .map(|part| {
                part.parse::<u32>().map_err(|_| Error::InvalidAddress {
                    addr: s.to_string(),
                    reason: format!("bad branch index {part:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(VertexAddr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> VertexAddr {
        s.parse().unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(VertexAddr::root().depth(), 0);
        assert_eq!(a("1").depth(), 1);
        assert_eq!(a("0.1.1").depth(), 3);
    }

    #[test]
    fn ancestor_examples() {
        assert_eq!(a("0.1.1").ancestor(2).unwrap(), a("0"));
        assert_eq!(a("1").ancestor(1).unwrap(), VertexAddr::root());
        assert!(matches!(a("0.1").ancestor(3), Err(Error::NoSuchAncestor { .. })));
        assert_eq!(a("0.1").ancestor(0).unwrap(), a("0.1"));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(VertexAddr::root().distance(&a("0.1")), 2);
        assert_eq!(a("0.0").distance(&a("0.1")), 2);
    }

    #[test]
    fn children_examples() {
        let t3 = TreeParams::regular(3, 4).unwrap();
        let c3 = TreeParams::complete(3, 4).unwrap();
        assert_eq!(VertexAddr::root().children(&t3), vec![a("0"), a("1"), a("2")]);
        assert_eq!(VertexAddr::root().children(&c3), vec![a("0"), a("1")]);
        assert_eq!(a("1").children(&t3), vec![a("1.0"), a("1.1")]);
        let shallow = TreeParams::regular(3, 1).unwrap();
        assert!(a("1").children(&shallow).is_empty());
    }

    #[test]
    fn descendants_examples() {
        let t3 = TreeParams::regular(3, 4).unwrap();
        let c3 = TreeParams::complete(3, 4).unwrap();
        let root = VertexAddr::root();
        assert_eq!(root.descendants_at(0, &t3).unwrap().collect::<Vec<_>>(), vec![root.clone()]);
        assert_eq!(root.descendants_at(2, &c3).unwrap().count(), 4);
        let six: Vec<_> = root.descendants_at(2, &t3).unwrap().collect();
        assert_eq!(six.len(), 6);
        assert!(six.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(root.descendants_at(5, &t3), Err(Error::DepthOverflow { .. })));
    }

    #[test]
    fn bfs_index_examples() {
        let t3 = TreeParams::regular(3, 4).unwrap();
        let c3 = TreeParams::complete(3, 4).unwrap();
        assert_eq!(VertexAddr::root().bfs_index(&t3).unwrap(), 0);
        assert_eq!(a("0").bfs_index(&t3).unwrap(), 1);
        assert_eq!(a("0").bfs_index(&c3).unwrap(), 1);
        assert_eq!(a("2").bfs_index(&t3).unwrap(), 3);
        assert_eq!(a("0.0").bfs_index(&t3).unwrap(), 4);
    }

    #[test]
    fn params_validation() {
        assert!(TreeParams::regular(2, 3).is_err());
        assert!(TreeParams::new(4, 2, 3).is_err());
        assert!(TreeParams::regular(3, 200).is_err());
        assert!(TreeParams::complete(3, 5).is_ok());
    }

    #[test]
    fn invalid_addresses() {
        let c3 = TreeParams::complete(3, 3).unwrap();
        assert!(matches!(c3.node_of(&a("2")), Err(Error::InvalidAddress { .. })));
        assert!(matches!(c3.node_of(&a("0.0.0.0")), Err(Error::DepthOverflow { .. })));
        assert!("0.x".parse::<VertexAddr>().is_err());
    }

    #[test]
    fn text_form_round_trips() {
        for s in ["r", "0", "0.1.1", "3.0.2"] {
            assert_eq!(a(s).to_string(), s);
        }
    }

    #[test]
    fn bfs_index_is_a_bijection() {
        for p in [TreeParams::regular(3, 5).unwrap(), TreeParams::complete(4, 4).unwrap()] {
            for idx in 0..p.vertex_count() {
                let n = p.node_at(idx).unwrap();
                let addr = p.addr_of(n);
                assert_eq!(addr.bfs_index(&p).unwrap(), idx);
                assert_eq!(p.node_of(&addr).unwrap(), n);
            }
            assert!(p.node_at(p.vertex_count()).is_err());
        }
    }

    #[test]
    fn node_and_address_views_agree() {
        let p = TreeParams::regular(4, 4).unwrap();
        let n = p.vertex_count();
        for i in (0..n).step_by(7) {
            for j in (0..n).step_by(11) {
                let (x, y) = (p.node_at(i).unwrap(), p.node_at(j).unwrap());
                assert_eq!(p.node_distance(x, y), p.addr_of(x).distance(&p.addr_of(y)));
            }
            let x = p.node_at(i).unwrap();
            for k in 0..=x.depth {
                let anc = p.ancestor_node(x, k).unwrap();
                assert_eq!(p.addr_of(anc), p.addr_of(x).ancestor(k).unwrap());
            }
        }
    }

    #[test]
    fn distance_shell_matches_brute_force() {
        let p = TreeParams::regular(3, 5).unwrap();
        let n = p.vertex_count();
        for i in 0..n {
            let x = p.node_at(i).unwrap();
            for delta in 1..=6 {
                let mut got: Vec<u64> = p
                    .distance_shell(x, delta)
                    .into_iter()
                    .flat_map(|(depth, r)| r.map(move |rank| p.index_of(Node { depth, rank })))
                    .collect();
                got.sort_unstable();
                let want: Vec<u64> = (0..n)
                    .filter(|&j| p.node_distance(x, p.node_at(j).unwrap()) == delta)
                    .collect();
                assert_eq!(got, want, "x={} delta={delta}", p.addr_of(x));
            }
        }
    }
}
