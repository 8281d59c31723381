use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::tree::{TreeParams, VertexAddr};

/// What a coloring is keyed by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColorDomain {
    /// Vertex `i` is the vertex with breadth-first index `i` of the truncation.
    Tree(TreeParams),
    /// Vertex `i` is vertex `i` of an explicit graph, with these labels.
    Graph(Vec<String>),
}

impl ColorDomain {
    pub fn len(&self) -> u64 {
        match self {
            ColorDomain::Tree(p) => p.vertex_count(),
            ColorDomain::Graph(labels) => labels.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, index: u64) -> String {
        match self {
            ColorDomain::Tree(p) => p.addr_of(p.node_at(index).expect("index in range")).to_string(),
            ColorDomain::Graph(labels) => labels[index as usize].clone(),
        }
    }

    pub fn for_graph(g: &FiniteGraph) -> Self {
        ColorDomain::Graph(g.labels().to_vec())
    }
}

/// Algorithm tag plus the parameters it ran with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub algorithm: String,
    pub params: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(algorithm: impl Into<String>) -> Self {
        Provenance { algorithm: algorithm.into(), params: Vec::new() }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algorithm={}", self.algorithm)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// One color per vertex of the domain. `palette_size` is one more than the
/// largest color used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorAssignment {
    domain: ColorDomain,
    colors: Vec<u32>,
    palette_size: u32,
    provenance: Provenance,
}

impl ColorAssignment {
    pub fn new(domain: ColorDomain, colors: Vec<u32>, provenance: Provenance) -> Result<Self> {
        if colors.len() as u64 != domain.len() {
            return Err(Error::CoverageGap { expected: domain.len(), got: colors.len() as u64 });
        }
        let palette_size = colors.iter().max().map_or(0, |&m| m + 1);
        Ok(ColorAssignment { domain, colors, palette_size, provenance })
    }

    pub fn domain(&self) -> &ColorDomain {
        &self.domain
    }

    pub fn tree_params(&self) -> Option<&TreeParams> {
        match &self.domain {
            ColorDomain::Tree(p) => Some(p),
            ColorDomain::Graph(_) => None,
        }
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, index: u64) -> u32 {
        self.colors[index as usize]
    }

    pub fn color_of(&self, addr: &VertexAddr) -> Result<u32> {
        match &self.domain {
            ColorDomain::Tree(p) => Ok(self.color(addr.bfs_index(p)?)),
            ColorDomain::Graph(_) => Err(Error::KeyMismatch("graph coloring queried by tree address".into())),
        }
    }

    pub fn palette_size(&self) -> u32 {
        self.palette_size
    }

    /// Number of distinct colors actually used.
    pub fn colors_used(&self) -> usize {
        self.histogram().iter().filter(|&&c| c > 0).count()
    }

    /// Vertex count per color.
    pub fn histogram(&self) -> Vec<u64> {
        let mut h = vec![0u64; self.palette_size as usize];
        for &c in &self.colors {
            h[c as usize] += 1;
        }
        h
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `address,color` rows behind a commented header carrying provenance,
    /// palette size and any extra lines (the CLI adds the seed there).
    pub fn write_csv<W: Write>(&self, extra_header: &[String], mut w: W) -> Result<()> {
        writeln!(w, "# {}", self.provenance)?;
        writeln!(w, "# palette_size={}", self.palette_size)?;
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "address,color")?;
        match &self.domain {
            ColorDomain::Tree(p) => {
                let mut idx = 0usize;
                for depth in 0..=p.depth_cap() {
                    for rank in 0..p.level_size(depth) {
                        let addr = p.addr_of(crate::tree::Node { depth, rank });
                        writeln!(w, "{addr},{}", self.colors[idx])?;
                        idx += 1;
                    }
                }
            }
            ColorDomain::Graph(labels) => {
                for (l, c) in labels.iter().zip(&self.colors) {
                    writeln!(w, "{l},{c}")?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_is_checked() {
        let p = TreeParams::complete(3, 1).unwrap();
        let err = ColorAssignment::new(ColorDomain::Tree(p), vec![0, 1], Provenance::new("x")).unwrap_err();
        assert!(matches!(err, Error::CoverageGap { expected: 3, got: 2 }));
    }

    #[test]
    fn palette_and_csv() {
        let p = TreeParams::complete(3, 1).unwrap();
        let ca = ColorAssignment::new(ColorDomain::Tree(p), vec![0, 1, 1], Provenance::new("t").with("d", 3))
            .unwrap();
        assert_eq!(ca.palette_size(), 2);
        assert_eq!(ca.colors_used(), 2);
        assert_eq!(ca.color_of(&"1".parse().unwrap()).unwrap(), 1);
        let mut buf = Vec::new();
        ca.write_csv(&["seed=7".into()], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# algorithm=t d=3\n# palette_size=2\n# seed=7\naddress,color\nr,0\n0,1\n1,1\n"
        );
    }
}
