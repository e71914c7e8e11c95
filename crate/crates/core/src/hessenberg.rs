//! Hessenberg functions and the matrix patterns they cut out.
//!
//! Conventions: `b` is the upper triangular Borel, `H = {x : x_ij = 0 for i > h(j)}`,
//! and the trace-form annihilator `H^⊥` is the strictly upper pattern
//! `{(i, j) : j > h(i)}`. All indices are 1-based.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{check_range, Error, Result};
use crate::partitions::{join, parse_usize_list};

/// A nondecreasing map `h : [n] → [n]` with `h(i) ≥ i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HessenbergFunction {
    values: Vec<usize>,
}

impl HessenbergFunction {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidHessenberg("empty function".into()));
        }
        for (i0, &v) in values.iter().enumerate() {
            let i = i0 + 1;
            if v < i || v > n {
                return Err(Error::InvalidHessenberg(format!("h({i}) = {v} must lie in {i}..={n}")));
            }
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidHessenberg(format!("{values:?} is not nondecreasing")));
        }
        Ok(Self { values })
    }

    /// `h = (1, 2, …, n)`, i.e. `H = b`.
    pub fn borel(n: usize) -> Self {
        Self { values: (1..=n).collect() }
    }

    /// `h = (n, …, n)`, i.e. `H = g`.
    pub fn full(n: usize) -> Self {
        Self { values: vec![n; n] }
    }

    /// `h = (2, 3, …, n, n)`: the standard Hessenberg space `H_0`.
    pub fn standard(n: usize) -> Self {
        Self { values: (1..=n).map(|i| (i + 1).min(n)).collect() }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `h(i)` for `1 ≤ i ≤ n`.
    pub fn at(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Whether `H` contains the root space at matrix position `(i, j)`.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        i <= self.at(j)
    }

    pub fn is_indecomposable(&self) -> bool {
        (1..self.n()).all(|i| self.at(i) > i)
    }

    /// Pointwise `self ≤ other`.
    pub fn pointwise_leq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub fn to_comma_string(&self) -> String {
        join(&self.values, ",")
    }
}

impl fmt::Debug for HessenbergFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h({})", self.to_comma_string())
    }
}

impl fmt::Display for HessenbergFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_comma_string())
    }
}

impl FromStr for HessenbergFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let values = parse_usize_list(s).map_err(Error::InvalidHessenberg)?;
        Self::new(values)
    }
}

/// All Hessenberg functions for `n`, in lexicographic order.
pub fn enumerate_hessenberg(n: usize, indecomposable_only: bool) -> Result<Vec<HessenbergFunction>> {
    check_range("n", n, 2, 9)?;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cur: &mut Vec<usize>, indec: bool, out: &mut Vec<HessenbergFunction>) {
        let i = cur.len() + 1;
        if i > n {
            out.push(HessenbergFunction { values: cur.clone() });
            return;
        }
        let mut lo = cur.last().copied().unwrap_or(1).max(i);
        if indec && i < n {
            lo = lo.max(i + 1);
        }
        for v in lo..=n {
            cur.push(v);
            rec(n, cur, indec, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, indecomposable_only, &mut out);
    Ok(out)
}

/// Complex dimension `Σ (h(i) − i)` of every regular Hessenberg variety for `h`.
pub fn dimension(h: &HessenbergFunction) -> usize {
    h.values.iter().enumerate().map(|(i0, &v)| v - (i0 + 1)).sum()
}

/// A set of 1-based matrix positions in an `n × n` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPattern {
    pub n: usize,
    pub positions: BTreeSet<(usize, usize)>,
}

impl MatrixPattern {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn is_strictly_upper(&self) -> bool {
        self.positions.iter().all(|&(i, j)| i < j)
    }
}

/// Pattern of `H^⊥`: positions `(i, j)` with `j > h(i)`.
pub fn annihilator_pattern(h: &HessenbergFunction) -> MatrixPattern {
    let n = h.n();
    let positions = (1..=n).flat_map(|i| ((h.at(i) + 1)..=n).map(move |j| (i, j))).collect();
    MatrixPattern { n, positions }
}

/// Edges `{i, j}`, `i < j ≤ h(i)`, of the incomparability graph of the
/// natural unit interval order attached to `h`.
pub fn incomparability_graph(h: &HessenbergFunction) -> Vec<(usize, usize)> {
    (1..=h.n()).flat_map(|i| ((i + 1)..=h.at(i)).map(move |j| (i, j))).collect()
}
