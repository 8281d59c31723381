//! Closed-form bounds on the chromatic number of exact and band distance
//! powers of regular trees.
//!
//! Each entry names the graph family it bounds. Entries of one family are
//! mutually comparable: every lower bound must sit below every upper bound.

use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::choose_k;
use crate::interval::{interval_bound, to_f64, Fraction};
use crate::tree::pow;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

/// Parity of `d` an entry applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Any,
}

impl Parity {
    pub fn admits(self, d: u32) -> bool {
        match self {
            Parity::Even => d % 2 == 0,
            Parity::Odd => d % 2 == 1,
            Parity::Any => true,
        }
    }
}

/// Which chromatic number an entry bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Exact `d`-th power of the `q`-regular tree.
    Tree,
    /// Exact `d`-th power of the sibling-augmented binary trees (chordal,
    /// clique number 3).
    Augmented,
    /// Band `[d, cd]` power of the `q`-regular tree.
    Interval,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundValue {
    Exact(BigRational),
    Real(f64),
}

impl BoundValue {
    fn int(n: u64) -> Self {
        BoundValue::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(r) => to_f64(r),
            BoundValue::Real(x) => *x,
        }
    }

    fn le(&self, other: &BoundValue) -> bool {
        match (self, other) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => a <= b,
            _ => self.to_f64() <= other.to_f64(),
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            BoundValue::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            BoundValue::Real(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundEntry {
    pub name: &'static str,
    /// The formula evaluated, as written in the output tables.
    pub source: &'static str,
    pub kind: BoundKind,
    pub parity: Parity,
    pub family: Family,
    pub value: BoundValue,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsReport {
    pub q: u32,
    pub d: u32,
    pub c: Option<Fraction>,
    pub entries: Vec<BoundEntry>,
}

impl BoundsReport {
    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Pairs `(lower, upper)` of the same family where the lower bound
    /// exceeds the upper bound.
    pub fn inconsistencies(&self) -> Vec<(&'static str, &'static str)> {
        let mut out = Vec::new();
        for lo in self.entries.iter().filter(|e| e.kind == BoundKind::Lower) {
            for hi in self.entries.iter().filter(|e| e.kind == BoundKind::Upper && e.family == lo.family) {
                if !lo.value.le(&hi.value) {
                    out.push((lo.name, hi.name));
                }
            }
        }
        out
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistencies().is_empty()
    }

    /// Largest lower and smallest upper bound of a family, as floats.
    pub fn sandwich(&self, family: Family) -> (Option<f64>, Option<f64>) {
        let pick = |kind| self.entries.iter().filter(move |e| e.family == family && e.kind == kind).map(|e| e.value.to_f64());
        (pick(BoundKind::Lower).reduce(f64::max), pick(BoundKind::Upper).reduce(f64::min))
    }

    pub fn write_csv<W: Write>(&self, extra_header: &[String], mut w: W) -> Result<()> {
        match self.c {
            Some(c) => writeln!(w, "# q={} d={} c={c}", self.q, self.d)?,
            None => writeln!(w, "# q={} d={}", self.q, self.d)?,
        }
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "name,kind,family,parity,value,source")?;
        for e in &self.entries {
            writeln!(
                w,
                "{},{},{},{},{},\"{}\"",
                e.name,
                lower_or_upper(e.kind),
                family_name(e.family),
                parity_name(e.parity),
                e.value,
                e.source
            )?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn family_name(f: Family) -> &'static str {
    match f {
        Family::Tree => "tree",
        Family::Augmented => "augmented",
        Family::Interval => "interval",
    }
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
        Parity::Any => "any",
    }
}

fn lower_or_upper(k: BoundKind) -> &'static str {
    match k {
        BoundKind::Lower => "lower",
        BoundKind::Upper => "upper",
    }
}

fn entry(
    name: &'static str,
    source: &'static str,
    kind: BoundKind,
    parity: Parity,
    family: Family,
    value: BoundValue,
) -> BoundEntry {
    BoundEntry { name, source, kind, parity, family, value }
}

fn check(q: u32, d: u32) -> Result<()> {
    if q < 3 || d < 2 {
        return Err(Error::InvalidParams(format!("need q >= 3 and d >= 2, got q={q} d={d}")));
    }
    Ok(())
}

/// Bounds on the exact `d`-th power; only entries whose parity admits `d`
/// are included.
pub fn bounds_exact(q: u32, d: u32) -> Result<BoundsReport> {
    use BoundKind::*;
    check(q, d)?;
    let (qf, df) = (q as f64, d as f64);
    let b = q - 1;
    let mut entries = vec![entry(
        "linear_upper",
        "(d+1)(q-1)",
        Upper,
        Parity::Any,
        Family::Tree,
        BoundValue::int((d as u64 + 1) * b as u64),
    )];
    if d % 2 == 0 {
        let k = choose_k(q, d);
        entries.extend([
            entry("clique_lower", "q", Lower, Parity::Even, Family::Tree, BoundValue::int(q as u64)),
            entry(
                "color_set_lower",
                "log2(d/4+q-1)",
                Lower,
                Parity::Even,
                Family::Tree,
                BoundValue::Real((df / 4.0 + qf - 1.0).log2()),
            ),
            entry(
                "spine_lower",
                "log2(d+8)-2",
                Lower,
                Parity::Even,
                Family::Tree,
                BoundValue::Real((df + 8.0).log2() - 2.0),
            ),
            entry(
                "energy_lower",
                "d ln(q-1)/(4 ln(d/2)+4 ln(q-1))",
                Lower,
                Parity::Even,
                Family::Tree,
                BoundValue::Real(df * (qf - 1.0).ln() / (4.0 * (df / 2.0).ln() + 4.0 * (qf - 1.0).ln())),
            ),
            entry(
                "block_greedy_upper",
                "(q-1)^k+(q-1)^floor(k/2)+ceil(d/k)+1, k=choose_k(q,d)",
                Upper,
                Parity::Even,
                Family::Tree,
                BoundValue::int(pow(b, k) + pow(b, k / 2) + d.div_ceil(k) as u64 + 1),
            ),
            entry("block_greedy_k1_upper", "d+q+1", Upper, Parity::Even, Family::Tree, BoundValue::int((d + q + 1) as u64)),
        ]);
    } else {
        let df1 = df + 1.0;
        let ln2 = std::f64::consts::LN_2;
        entries.extend([
            entry("odd_lower", "2", Lower, Parity::Odd, Family::Tree, BoundValue::int(2)),
            entry("odd_upper", "2 (depth parity)", Upper, Parity::Odd, Family::Tree, BoundValue::int(2)),
            entry(
                "augmented_tree_lower",
                "(d+1) ln 2/(4 ln((d+1)/2)+4 ln 2)-1",
                Lower,
                Parity::Odd,
                Family::Augmented,
                BoundValue::Real(df1 * ln2 / (4.0 * (df1 / 2.0).ln() + 4.0 * ln2) - 1.0),
            ),
            entry(
                "augmented_spine_lower",
                "log2(d+8)-3",
                Lower,
                Parity::Odd,
                Family::Augmented,
                BoundValue::Real((df + 8.0).log2() - 3.0),
            ),
            entry(
                "chordal_upper",
                "binom(t,2)(d+1), t=3",
                Upper,
                Parity::Any,
                Family::Augmented,
                BoundValue::int(3 * (d as u64 + 1)),
            ),
        ]);
    }
    Ok(BoundsReport { q, d, c: None, entries })
}

/// Bounds on the band `[d, cd]` power.
pub fn bounds_interval(q: u32, d: u32, c: Fraction) -> Result<BoundsReport> {
    use BoundKind::*;
    check(q, d)?;
    if c.numer() <= c.denom() {
        return Err(Error::InvalidParams(format!("c must exceed 1, got {c}")));
    }
    let half = c.floor_times(d, 2) as u32;
    let cap = c.floor_times(d, 1);
    let b = BigInt::from(q - 1);
    let big = |n: BigInt| BoundValue::Exact(BigRational::from_integer(n));
    let mut entries = vec![
        entry(
            "ball_clique_lower",
            "q(q-1)^(floor(cd/2)-floor(d/2))",
            Lower,
            Parity::Any,
            Family::Interval,
            big(BigInt::from(q) * b.pow(half - d / 2)),
        ),
        entry(
            "product_upper",
            "(q-1)^floor(cd/2+1)(floor(cd)+1)",
            Upper,
            Parity::Any,
            Family::Interval,
            big(b.pow(half + 1) * BigInt::from(cap + 1)),
        ),
    ];
    if d % 2 == 0 {
        entries.push(entry(
            "edge_lift_upper",
            "(q/(q-2))(q-1)^(floor(cd/2)-d/2+1)+cd+1",
            Upper,
            Parity::Even,
            Family::Interval,
            BoundValue::Exact(interval_bound(q, d, c)?),
        ));
    }
    Ok(BoundsReport { q, d, c: Some(c), entries })
}

/// Value of a bound rounded to the nearest integer below, for comparison
/// with palette sizes.
pub fn floor_value(v: &BoundValue) -> Option<u64> {
    match v {
        BoundValue::Exact(r) => r.floor().to_integer().to_u64(),
        BoundValue::Real(x) => (x.is_finite() && *x >= 0.0).then(|| x.floor() as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn val(r: &BoundsReport, name: &str) -> f64 {
        r.get(name).unwrap_or_else(|| panic!("missing {name}")).value.to_f64()
    }

    #[test]
    fn exact_examples() {
        let r = bounds_exact(3, 8).unwrap();
        assert_eq!(val(&r, "color_set_lower"), 2.0);
        assert_eq!(val(&r, "spine_lower"), 2.0);
        assert!((val(&r, "energy_lower") - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(val(&r, "clique_lower"), 3.0);
        assert_eq!(val(&r, "linear_upper"), 18.0);
        assert_eq!(val(&r, "block_greedy_k1_upper"), 12.0);
        assert!(r.is_consistent());
    }

    #[test]
    fn parity_selects_entries() {
        let odd = bounds_exact(3, 7).unwrap();
        assert!(odd.get("clique_lower").is_none());
        assert_eq!(val(&odd, "odd_upper"), 2.0);
        assert_eq!(val(&odd, "chordal_upper"), 24.0);
        assert!((val(&odd, "augmented_spine_lower") - (15f64.log2() - 3.0)).abs() < 1e-12);
        let even = bounds_exact(3, 6).unwrap();
        assert!(even.get("odd_upper").is_none());
        assert!(even.entries.iter().all(|e| e.parity.admits(6)));
    }

    #[test]
    fn interval_examples() {
        let c: Fraction = "3/2".parse().unwrap();
        let r = bounds_interval(3, 4, c).unwrap();
        assert_eq!(r.get("ball_clique_lower").unwrap().value, BoundValue::int(6));
        assert_eq!(r.get("edge_lift_upper").unwrap().value, BoundValue::int(19));
        // (q-1)^(3+1) (6+1)
        assert_eq!(r.get("product_upper").unwrap().value, BoundValue::int(112));
        assert!(r.is_consistent());
        let odd = bounds_interval(3, 5, c).unwrap();
        assert!(odd.get("edge_lift_upper").is_none());
    }

    #[test]
    fn consistent_on_grid() {
        for q in 3..=5 {
            for d in 2..=20 {
                assert!(bounds_exact(q, d).unwrap().is_consistent(), "q={q} d={d}");
                for c in ["3/2", "2", "5/3"] {
                    let r = bounds_interval(q, d, c.parse().unwrap()).unwrap();
                    assert!(r.is_consistent(), "q={q} d={d} c={c}: {:?}", r.inconsistencies());
                }
            }
        }
    }

    #[test]
    fn detects_inconsistency() {
        let mut r = bounds_exact(3, 4).unwrap();
        r.entries.push(entry("bogus", "x", BoundKind::Lower, Parity::Even, Family::Tree, BoundValue::int(100)));
        assert!(!r.is_consistent());
        assert!(r.inconsistencies().iter().all(|&(lo, _)| lo == "bogus"));
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        bounds_exact(3, 8).unwrap().write_csv(&["seed=1".into()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("color_set_lower,lower,tree,even,2,\"log2(d/4+q-1)\""));
        assert!(text.contains("spine_lower,lower,tree,even,2,"));
        assert!(text.starts_with("# q=3 d=8\n# seed=1\nname,"));
    }

    #[test]
    fn floors() {
        assert_eq!(floor_value(&BoundValue::Real(2.7)), Some(2));
        let c: Fraction = "3/2".parse().unwrap();
        let r = bounds_interval(3, 4, c).unwrap();
        assert_eq!(floor_value(&r.get("edge_lift_upper").unwrap().value), Some(19));
    }
}
