use std::fmt;

use crate::error::{Error, Result};
use crate::interval::Fraction;
use crate::tree::{Node, TreeParams, VertexAddr};

/// Vertices claimed to be pairwise at distance in `[lo, hi]`. Only returned
/// after every pair has been checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueWitness {
    pub vertices: Vec<VertexAddr>,
    pub lo: u32,
    pub hi: u32,
}

impl CliqueWitness {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Smallest and largest pairwise distance.
    pub fn distance_range(&self) -> Option<(u32, u32)> {
        let mut out: Option<(u32, u32)> = None;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                let dist = a.distance(b);
                out = Some(match out {
                    None => (dist, dist),
                    Some((lo, hi)) => (lo.min(dist), hi.max(dist)),
                });
            }
        }
        out
    }

    fn checked(vertices: Vec<VertexAddr>, lo: u32, hi: u32) -> Result<Self> {
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[i + 1..] {
                let dist = a.distance(b);
                if dist < lo || dist > hi {
                    return Err(Error::WitnessFailed(format!("{a} and {b} are at distance {dist}, outside [{lo}, {hi}]")));
                }
            }
        }
        Ok(CliqueWitness { vertices, lo, hi })
    }
}

impl fmt::Display for CliqueWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "size={} range=[{},{}]", self.len(), self.lo, self.hi)
    }
}

fn even_d(d: u32) -> Result<()> {
    if d < 2 || d % 2 == 1 {
        return Err(Error::InvalidParams(format!("d must be even and at least 2, got {d}")));
    }
    Ok(())
}

fn zeros_below(a: VertexAddr, steps: u32) -> VertexAddr {
    (0..steps).fold(a, |v, _| v.child(0))
}

/// One vertex at depth `d/2` in each root subtree, pairwise at distance `d`.
pub fn exact_clique_witness(p: &TreeParams, d: u32) -> Result<CliqueWitness> {
    even_d(d)?;
    if !p.is_regular() {
        return Err(Error::InvalidParams("exact witness needs the root to have q children".into()));
    }
    if p.depth_cap() < d / 2 {
        return Err(Error::DepthOverflow { requested: d / 2, cap: p.depth_cap() });
    }
    let vertices = (0..p.q()).map(|i| zeros_below(VertexAddr::new(vec![i]), d / 2 - 1)).collect();
    CliqueWitness::checked(vertices, d, d)
}

/// Every vertex at depth `t + 1`, `t = floor(cd/2) - d/2`, extended by
/// `d/2 - 1` zero branches. Pairwise distances lie in `[d, 2 floor(cd/2)]`.
pub fn interval_clique_witness(p: &TreeParams, d: u32, c: Fraction) -> Result<CliqueWitness> {
    even_d(d)?;
    if c.numer() <= c.denom() {
        return Err(Error::InvalidParams(format!("c must exceed 1, got {c}")));
    }
    if !p.is_regular() {
        return Err(Error::InvalidParams("interval witness needs the root to have q children".into()));
    }
    let half = c.floor_times(d, 2) as u32;
    if p.depth_cap() < half {
        return Err(Error::DepthOverflow { requested: half, cap: p.depth_cap() });
    }
    let t = half - d / 2;
    let vertices = (0..p.level_size(t + 1))
        .map(|rank| zeros_below(p.addr_of(Node { depth: t + 1, rank }), d / 2 - 1))
        .collect();
    CliqueWitness::checked(vertices, d, 2 * half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_examples() {
        let p = TreeParams::regular(3, 1).unwrap();
        let w = exact_clique_witness(&p, 2).unwrap();
        assert_eq!(w.vertices, vec!["0".parse().unwrap(), "1".parse().unwrap(), "2".parse().unwrap()]);
        let w = exact_clique_witness(&TreeParams::regular(3, 3).unwrap(), 6).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.distance_range(), Some((6, 6)));
        assert!(w.vertices.iter().all(|v| v.depth() == 3));
    }

    #[test]
    fn exact_size_is_q() {
        for q in 3..=6 {
            for d in (2..=12).step_by(2) {
                let w = exact_clique_witness(&TreeParams::regular(q, d / 2).unwrap(), d).unwrap();
                assert_eq!(w.len() as u32, q);
            }
        }
    }

    #[test]
    fn exact_rejects_bad_params() {
        assert!(exact_clique_witness(&TreeParams::regular(3, 1).unwrap(), 4).is_err());
        assert!(exact_clique_witness(&TreeParams::regular(3, 4).unwrap(), 3).is_err());
        assert!(exact_clique_witness(&TreeParams::complete(3, 4).unwrap(), 4).is_err());
    }

    #[test]
    fn interval_examples() {
        let c2: Fraction = "2".parse().unwrap();
        let w = interval_clique_witness(&TreeParams::regular(3, 2).unwrap(), 2, c2).unwrap();
        assert_eq!(w.len(), 6);
        let (lo, hi) = w.distance_range().unwrap();
        assert!(lo >= 2 && hi <= 4);

        let c: Fraction = "3/2".parse().unwrap();
        let w = interval_clique_witness(&TreeParams::regular(3, 3).unwrap(), 4, c).unwrap();
        assert_eq!(w.len(), 6);
        assert_eq!((w.lo, w.hi), (4, 6));
        let (lo, hi) = w.distance_range().unwrap();
        assert!(lo >= 4 && hi <= 6);
    }

    #[test]
    fn interval_needs_depth() {
        let c: Fraction = "2".parse().unwrap();
        assert!(matches!(
            interval_clique_witness(&TreeParams::regular(3, 3).unwrap(), 4, c),
            Err(Error::DepthOverflow { requested: 4, cap: 3 })
        ));
    }
}
