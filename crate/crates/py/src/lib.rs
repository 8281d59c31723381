//! Python module `pytreecolor`.

use std::io::BufReader;
use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use treecolor::bounds::{bounds_exact, bounds_interval, family_name, BoundKind, BoundsReport, Parity};
use treecolor::chi::{chi_exact, Budget};
use treecolor::energy::{dominant_color, energy_profile};
use treecolor::exact::{self, ExactColoringParams};
use treecolor::graph::{band_power, build_tree_truncation, export_dimacs, read_dimacs};
use treecolor::interval::{self, edge_coloring, Fraction, IntervalParams};
use treecolor::verify::{self, Mode, VerifyOptions, VerifyReport};
use treecolor::witness;
use treecolor::{ColorAssignment, Limits, VertexAddr};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction(c: &str) -> PyResult<Fraction> {
    c.parse().map_err(err)
}

fn mode(mode: &str, samples: u64, seed: u64) -> PyResult<Mode> {
    match mode {
        "full" => Ok(Mode::Full),
        "sampled" => Ok(Mode::Sampled { samples, seed }),
        _ => Err(err(format!("mode must be full or sampled, got {mode:?}"))),
    }
}

/// Rooted tree truncation: root has `root_arity` children, others `q-1`.
#[pyclass(name = "TreeParams", frozen)]
#[derive(Clone)]
struct PyTreeParams(treecolor::TreeParams);

#[pymethods]
impl PyTreeParams {
    #[new]
    fn new(q: u32, root_arity: u32, depth: u32) -> PyResult<Self> {
        treecolor::TreeParams::new(q, root_arity, depth).map(Self).map_err(err)
    }

    #[staticmethod]
    fn regular(q: u32, depth: u32) -> PyResult<Self> {
        treecolor::TreeParams::regular(q, depth).map(Self).map_err(err)
    }

    #[staticmethod]
    fn complete(q: u32, depth: u32) -> PyResult<Self> {
        treecolor::TreeParams::complete(q, depth).map(Self).map_err(err)
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.q()
    }

    #[getter]
    fn root_arity(&self) -> u32 {
        self.0.root_arity()
    }

    #[getter]
    fn depth(&self) -> u32 {
        self.0.depth_cap()
    }

    fn vertex_count(&self) -> u64 {
        self.0.vertex_count()
    }

    /// Address such as `"0.1.1"` (`"r"` for the root) of a breadth-first index.
    fn address(&self, index: u64) -> PyResult<String> {
        Ok(self.0.addr_of(self.0.node_at(index).map_err(err)?).to_string())
    }

    fn index(&self, address: &str) -> PyResult<u64> {
        let a: VertexAddr = address.parse().map_err(err)?;
        a.bfs_index(&self.0).map_err(err)
    }

    fn distance(&self, a: &str, b: &str) -> PyResult<u32> {
        let (a, b): (VertexAddr, VertexAddr) = (a.parse().map_err(err)?, b.parse().map_err(err)?);
        self.0.check(&a).map_err(err)?;
        self.0.check(&b).map_err(err)?;
        Ok(a.distance(&b))
    }

    /// DIMACS text of the band power `[lo, hi]` of this truncation.
    #[pyo3(signature = (lo, hi=None))]
    fn power_dimacs(&self, lo: u32, hi: Option<u32>) -> PyResult<String> {
        let g = build_tree_truncation(&self.0, &Limits::default()).map_err(err)?;
        let p = band_power(&g, lo, hi.unwrap_or(lo)).map_err(err)?;
        let mut buf = Vec::new();
        export_dimacs(&p, &[], &mut buf).map_err(err)?;
        String::from_utf8(buf).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("TreeParams({})", self.0)
    }
}

/// Vertex coloring of a tree truncation, indexed by breadth-first order.
#[pyclass(name = "Coloring", frozen)]
struct PyColoring(ColorAssignment);

#[pymethods]
impl PyColoring {
    #[getter]
    fn palette_size(&self) -> u32 {
        self.0.palette_size()
    }

    #[getter]
    fn tree(&self) -> Option<PyTreeParams> {
        self.0.tree_params().copied().map(PyTreeParams)
    }

    fn colors(&self) -> Vec<u32> {
        self.0.colors().to_vec()
    }

    fn color_of(&self, address: &str) -> PyResult<u32> {
        self.0.color_of(&address.parse().map_err(err)?).map_err(err)
    }

    fn provenance(&self) -> String {
        self.0.provenance().to_string()
    }

    /// Checks every pair at distance exactly `d`.
    #[pyo3(signature = (d, mode="full", samples=verify::DEFAULT_SAMPLES, seed=0))]
    fn verify_exact(&self, py: Python<'_>, d: u32, mode: &str, samples: u64, seed: u64) -> PyResult<PyObject> {
        let opts = VerifyOptions::from(self::mode(mode, samples, seed)?);
        report(py, verify::verify_exact_tree(&self.0, d, opts).map_err(err)?)
    }

    /// Checks every pair at distance in `[lo, hi]`.
    #[pyo3(signature = (lo, hi, mode="full", samples=verify::DEFAULT_SAMPLES, seed=0))]
    fn verify_band(&self, py: Python<'_>, lo: u32, hi: u32, mode: &str, samples: u64, seed: u64) -> PyResult<PyObject> {
        let opts = VerifyOptions::from(self::mode(mode, samples, seed)?);
        report(py, verify::verify_band_tree(&self.0, lo, hi, opts).map_err(err)?)
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.0.write_csv(&[], &mut buf).map_err(err)?;
        String::from_utf8(buf).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.colors().len()
    }
}

fn report(py: Python<'_>, r: VerifyReport) -> PyResult<PyObject> {
    let d = PyDict::new_bound(py);
    d.set_item("proper", r.is_proper())?;
    d.set_item("pairs_checked", r.pairs_checked)?;
    d.set_item("violation_count", r.violation_count)?;
    let v: Vec<(u64, u64, Option<u32>, u32)> = r.violations.iter().map(|v| (v.u, v.v, v.distance, v.color)).collect();
    d.set_item("violations", v)?;
    d.set_item("seed", r.seed())?;
    Ok(d.into())
}

fn bound_rows(py: Python<'_>, r: &BoundsReport) -> PyResult<Vec<PyObject>> {
    r.entries
        .iter()
        .map(|e| {
            let d = PyDict::new_bound(py);
            d.set_item("name", e.name)?;
            d.set_item("source", e.source)?;
            d.set_item("kind", if e.kind == BoundKind::Lower { "lower" } else { "upper" })?;
            let parity = match e.parity {
                Parity::Even => "even",
                Parity::Odd => "odd",
                Parity::Any => "any",
            };
            d.set_item("parity", parity)?;
            d.set_item("family", family_name(e.family))?;
            d.set_item("value", e.value.to_f64())?;
            d.set_item("exact", e.value.to_string())?;
            Ok(d.into())
        })
        .collect()
}

#[pyfunction]
fn choose_k(q: u32, d: u32) -> u32 {
    exact::choose_k(q, d)
}

/// Block coloring of the `q`-regular tree to `depth` for exact distance `d`.
#[pyfunction]
#[pyo3(signature = (q, d, depth, k=None))]
fn color_exact(py: Python<'_>, q: u32, d: u32, depth: u32, k: Option<u32>) -> PyResult<PyColoring> {
    let params = match k {
        Some(k) => ExactColoringParams::new(q, d, k, depth),
        None => ExactColoringParams::auto(q, d, depth),
    }
    .map_err(err)?;
    py.allow_threads(|| exact::color_truncation(&params, &Limits::default())).map(PyColoring).map_err(err)
}

#[pyfunction]
fn palette_bound_exact(q: u32, d: u32, k: u32) -> PyResult<u64> {
    Ok(ExactColoringParams::new(q, d, k, d / 2).map_err(err)?.palette_bound())
}

/// Edge-lifted coloring for the distance band `[d, floor(cd)]`; `c` as `"p/r"`.
#[pyfunction]
fn color_interval(py: Python<'_>, q: u32, d: u32, c: &str, depth: u32) -> PyResult<PyColoring> {
    let params = IntervalParams::new(q, d, fraction(c)?, depth).map_err(err)?;
    let limits = Limits::default();
    py.allow_threads(|| {
        let ec = edge_coloring(&params, &limits)?;
        interval::lift_to_vertices(&ec, &params, &limits)
    })
    .map(PyColoring)
    .map_err(err)
}

#[pyfunction]
fn parity_coloring(q: u32, depth: u32) -> PyResult<PyColoring> {
    let p = treecolor::TreeParams::regular(q, depth).map_err(err)?;
    exact::parity_coloring(&p, &Limits::default()).map(PyColoring).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (q, d, c=None))]
fn bounds(py: Python<'_>, q: u32, d: u32, c: Option<&str>) -> PyResult<Vec<PyObject>> {
    let r = match c {
        Some(c) => bounds_interval(q, d, fraction(c)?),
        None => bounds_exact(q, d),
    }
    .map_err(err)?;
    bound_rows(py, &r)
}

/// Addresses of `q` vertices pairwise at distance `d`.
#[pyfunction]
fn exact_witness(q: u32, d: u32) -> PyResult<Vec<String>> {
    let p = treecolor::TreeParams::regular(q, d / 2).map_err(err)?;
    let w = witness::exact_clique_witness(&p, d).map_err(err)?;
    Ok(w.vertices.iter().map(ToString::to_string).collect())
}

/// Addresses of a clique in the band power `[d, floor(cd)]`.
#[pyfunction]
fn interval_witness(q: u32, d: u32, c: &str) -> PyResult<Vec<String>> {
    let c = fraction(c)?;
    let p = treecolor::TreeParams::regular(q, c.floor_times(d, 2) as u32).map_err(err)?;
    let w = witness::interval_clique_witness(&p, d, c).map_err(err)?;
    Ok(w.vertices.iter().map(ToString::to_string).collect())
}

/// Exact chromatic number of a graph given as DIMACS text.
#[pyfunction]
#[pyo3(signature = (dimacs, max_nodes=10_000_000, max_seconds=60.0))]
fn chi(py: Python<'_>, dimacs: &str, max_nodes: u64, max_seconds: f64) -> PyResult<PyObject> {
    let g = read_dimacs(BufReader::new(dimacs.as_bytes())).map_err(err)?;
    let budget = Budget { max_nodes, max_time: Duration::from_secs_f64(max_seconds) };
    let r = py.allow_threads(|| chi_exact(&g, budget)).map_err(err)?;
    let d = PyDict::new_bound(py);
    d.set_item("chi", r.chi)?;
    d.set_item("clique_lb", r.clique_lb)?;
    d.set_item("dsatur_ub", r.dsatur_ub)?;
    d.set_item("nodes_explored", r.nodes_explored)?;
    d.set_item("timed_out", r.timed_out)?;
    d.set_item("coloring", r.witness_coloring.colors().to_vec())?;
    d.set_item("clique", r.clique)?;
    Ok(d.into())
}

/// Walk-energy means per step for one color class of the block coloring.
#[pyfunction]
#[pyo3(signature = (q, d, depth, samples=2000, seed=0, color=None))]
fn energy(py: Python<'_>, q: u32, d: u32, depth: u32, samples: u64, seed: u64, color: Option<u32>) -> PyResult<PyObject> {
    let params = ExactColoringParams::auto(q, d, depth).map_err(err)?;
    let ca = exact::color_truncation(&params, &Limits::default()).map_err(err)?;
    let color = match color {
        Some(c) => c,
        None => dominant_color(&ca, d).map_err(err)?,
    };
    let prof = energy_profile(&ca, d, color, samples, seed, &Limits::default()).map_err(err)?;
    let out = PyDict::new_bound(py);
    out.set_item("color", prof.color)?;
    out.set_item("class_size", prof.class_size)?;
    out.set_item("mean", prof.mean)?;
    out.set_item("stderr", prof.stderr)?;
    out.set_item("diff_stderr", prof.diff_stderr)?;
    Ok(out.into())
}

#[pymodule]
fn pytreecolor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTreeParams>()?;
    m.add_class::<PyColoring>()?;
    m.add_function(wrap_pyfunction!(choose_k, m)?)?;
    m.add_function(wrap_pyfunction!(color_exact, m)?)?;
    m.add_function(wrap_pyfunction!(palette_bound_exact, m)?)?;
    m.add_function(wrap_pyfunction!(color_interval, m)?)?;
    m.add_function(wrap_pyfunction!(parity_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(exact_witness, m)?)?;
    m.add_function(wrap_pyfunction!(interval_witness, m)?)?;
    m.add_function(wrap_pyfunction!(chi, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    Ok(())
}
