use std::collections::BTreeSet;

use num_traits::Zero;

use super::graph::{compose, inverse, GkmGraph};
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::linalg::{rat, Rat};

/// A tuple of polynomials, one per fixed point, homogeneous of `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivClass {
    pub degree: usize,
    pub values: Vec<Poly>,
}

impl EquivClass {
    pub fn zero(g: &GkmGraph, degree: usize) -> Self {
        Self { degree, values: vec![Poly::zero(g.torus.nvars()); g.vertices.len()] }
    }

    pub fn one(g: &GkmGraph) -> Self {
        Self { degree: 0, values: vec![Poly::one(g.torus.nvars()); g.vertices.len()] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Poly::is_zero)
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rat) {
        assert_eq!(self.degree, other.degree, "adding classes of different degrees");
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            a.add_scaled(b, c);
        }
    }

    /// Multiplies every value by the same polynomial of degree `d`.
    pub fn mul_poly(&self, p: &Poly, d: usize) -> Self {
        Self { degree: self.degree + d, values: self.values.iter().map(|f| f.mul(p)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            degree: self.degree + other.degree,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn pow(&self, g: &GkmGraph, e: usize) -> Self {
        (0..e).fold(Self::one(g), |acc, _| acc.mul(self))
    }
}

/// Whether `f_w − f_{w'}` is divisible by the label of every edge, and every
/// value is homogeneous of the class degree.
pub fn check_edges(g: &GkmGraph, c: &EquivClass) -> bool {
    if c.values.len() != g.vertices.len() || !c.values.iter().all(|f| f.is_homogeneous_of(c.degree)) {
        return false;
    }
    g.adjacency.iter().enumerate().all(|(v, es)| {
        es.iter().filter(|e| e.to > v).all(|e| {
            let mut d = c.values[v].clone();
            d.add_scaled(&c.values[e.to], &rat(-1));
            d.restrict(&g.weight_form(e)).is_zero()
        })
    })
}

/// `f_w = w(λ) = Σ_k λ_k t_{w(k)}` for strictly decreasing `λ`.
pub fn kahler_class(g: &GkmGraph, lambda: &[i64]) -> Result<EquivClass> {
    if lambda.len() != g.n() {
        return Err(Error::InvalidWeight(format!("{lambda:?} has length {} ≠ {}", lambda.len(), g.n())));
    }
    if lambda.windows(2).any(|p| p[0] <= p[1]) {
        return Err(Error::InvalidWeight(format!("{lambda:?} is not strictly decreasing")));
    }
    let values = g
        .vertices
        .iter()
        .map(|w| {
            let mut c = vec![rat(0); g.n()];
            for (k, &x) in w.iter().enumerate() {
                c[x - 1] = rat(lambda[k]);
            }
            g.torus.weight(&c)
        })
        .collect();
    Ok(EquivClass { degree: 1, values })
}

/// `(w·f)_u = w(f_{w^{-1}u})` with `w` permuting the coordinates `t_i ↦ t_{w(i)}`.
pub fn dot_action(g: &GkmGraph, w: &[usize], c: &EquivClass) -> Result<EquivClass> {
    if w.len() != g.n() || g.vertex_index(w).is_none() {
        return Err(Error::SizeMismatch(format!("{w:?} is not a permutation of 1..={}", g.n())));
    }
    let out = dot_action_unchecked(g, w, c);
    if !check_edges(g, &out) {
        return Err(Error::Consistency(format!("dot action by {w:?} broke the edge conditions")));
    }
    Ok(out)
}

pub(crate) fn dot_action_unchecked(g: &GkmGraph, w: &[usize], c: &EquivClass) -> EquivClass {
    let images = g.torus.permutation_images(w);
    let winv = inverse(w);
    let values = g
        .vertices
        .iter()
        .map(|u| {
            let src = g.vertex_index(&compose(&winv, u)).expect("vertex set is closed under S_n");
            c.values[src].substitute(&images)
        })
        .collect();
    EquivClass { degree: c.degree, values }
}

/// `Σ_w f_w / e_w` by localization, as an exact polynomial of degree `deg c − l`.
pub fn integrate(g: &GkmGraph, c: &EquivClass) -> Result<Poly> {
    let nv = g.torus.nvars();
    if c.degree < g.l {
        return Ok(Poly::zero(nv));
    }
    // D is the product of the positive roots that occur as weights
    let roots: BTreeSet<(usize, usize)> =
        g.adjacency.iter().flatten().map(|e| (e.weight.0.min(e.weight.1), e.weight.0.max(e.weight.1))).collect();
    let mut numerator = Poly::zero(nv);
    for (v, es) in g.adjacency.iter().enumerate() {
        if c.values[v].is_zero() {
            continue;
        }
        // e_w = sign · Π (positive roots at w), so D / e_w = sign · Π (the others)
        let mut sign = 1i64;
        let mut present = BTreeSet::new();
        for e in es {
            let (a, b) = e.weight;
            if a > b {
                sign = -sign;
            }
            present.insert((a.min(b), a.max(b)));
        }
        let mut term = c.values[v].scale(&rat(sign));
        for &(a, b) in roots.difference(&present) {
            term = term.mul(&g.torus.root(a, b).to_poly());
        }
        numerator.add_scaled(&term, &rat(1));
    }
    let mut q = numerator;
    for &(a, b) in &roots {
        q = q.div_linear(&g.torus.root(a, b)).ok_or_else(|| {
            Error::Consistency(format!("localization sum is not a polynomial (t{a} − t{b} does not divide)"))
        })?;
    }
    Ok(q)
}

/// `∫ c` for a class of degree exactly `l`.
pub fn integrate_number(g: &GkmGraph, c: &EquivClass) -> Result<Rat> {
    if c.degree != g.l {
        return Err(Error::SizeMismatch(format!("class of degree {} is not top degree {}", c.degree, g.l)));
    }
    let q = integrate(g, c)?;
    let k = q.constant_term();
    if q.terms().any(|(m, _)| m.degree() != 0) {
        return Err(Error::Consistency("top-degree integral is not a constant".into()));
    }
    Ok(if q.is_zero() { Rat::zero() } else { k })
}
