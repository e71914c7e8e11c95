//! Poincaré duality, hard Lefschetz and Hodge–Riemann on invariant subrings.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::classes::{integrate_number, kahler_class, EquivClass};
use super::cohomology::Cohomology;
use super::poly::{monomials, Poly};
use crate::error::{Error, Result};
use crate::linalg::{common_kernel, rat, Matrix, Rat};
use crate::partitions::ReflectionSet;

/// Per degree `k`, a basis (in flow-up coordinates) of the `W_J`-invariants
/// of `H^{2k}`.
pub fn invariant_subring(coh: &Cohomology, j: &ReflectionSet) -> Result<Vec<Vec<Vec<Rat>>>> {
    if j.n() != coh.graph.n() {
        return Err(Error::SizeMismatch(format!("{j:?} for n = {}", coh.graph.n())));
    }
    let reflections = if j.is_empty() { None } else { Some(coh.simple_reflection_matrices()?) };
    (0..=coh.l())
        .map(|k| {
            let dim = coh.ordinary_basis(k).len();
            let maps: Vec<Matrix> = match reflections {
                None => Vec::new(),
                Some(r) => j.members().map(|s| r[s - 1][k].sub(&Matrix::identity(dim))).collect(),
            };
            Ok(common_kernel(&maps, dim))
        })
        .collect()
}

/// `[∫ F_v F_u]` on `H^{2k} × H^{2(l−k)}`.
pub fn poincare_pairing(coh: &Cohomology, k: usize) -> Result<Matrix> {
    if k > coh.l() {
        return Err(Error::OutOfRange { what: "k", value: k as i64, min: 0, max: coh.l() as i64 });
    }
    coh.pairing_matrix(k, coh.l() - k, &EquivClass::one(&coh.graph))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingVerdict {
    /// Pairs `H^{2k}` with `H^{2(l−k)}`.
    pub k: usize,
    pub size: usize,
    #[serde(serialize_with = "serialize_rat")]
    pub det: Rat,
    pub nondegenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzVerdict {
    /// `ω^{l−2k} : H^{2k} → H^{2(l−k)}`.
    pub k: usize,
    pub domain_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub isomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeRiemannVerdict {
    /// Form `(−1)^k ∫ α β ω^{l−2k}` on `H^{2k}`.
    pub k: usize,
    pub sign: i64,
    pub primitive_dim: usize,
    #[serde(serialize_with = "serialize_rats")]
    pub pivots: Vec<Rat>,
    pub positive_definite: bool,
    /// Inertia `(+, −, 0)` of the signed form on the whole invariant piece.
    pub signature: (usize, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KahlerReport {
    pub h: String,
    #[serde(rename = "J")]
    pub j: String,
    pub lambda: Vec<i64>,
    pub invariant_dims: Vec<usize>,
    pub pairing: Vec<PairingVerdict>,
    pub hard_lefschetz: Vec<LefschetzVerdict>,
    pub hodge_riemann: Vec<HodgeRiemannVerdict>,
    pub poincare_ok: bool,
    pub hard_lefschetz_ok: bool,
    pub hodge_riemann_ok: bool,
}

impl KahlerReport {
    pub fn all_ok(&self) -> bool {
        self.poincare_ok && self.hard_lefschetz_ok && self.hodge_riemann_ok
    }

    /// Human-readable reasons for each failed check.
    pub fn witnesses(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in self.pairing.iter().filter(|p| !p.nondegenerate) {
            out.push(format!("pairing H^{} × H^{} is degenerate", 2 * p.k, 2 * (self.invariant_dims.len() - 1 - p.k)));
        }
        for v in self.hard_lefschetz.iter().filter(|v| !v.isomorphism) {
            out.push(format!(
                "Lefschetz map from H^{} has rank {} on a {}-dimensional domain",
                2 * v.k,
                v.rank,
                v.domain_dim
            ));
        }
        for v in self.hodge_riemann.iter().filter(|v| !v.positive_definite) {
            let pivots: Vec<String> = v.pivots.iter().map(ToString::to_string).collect();
            out.push(format!("Hodge–Riemann form on primitive H^{} has pivots [{}]", 2 * v.k, pivots.join(", ")));
        }
        out
    }
}

fn serialize_rat<S: serde::Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn serialize_rats<S: serde::Serializer>(xs: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(ToString::to_string))
}

fn columns(basis: &[Vec<Rat>], dim: usize) -> Matrix {
    Matrix::from_columns(basis, dim)
}

/// Poincaré duality, hard Lefschetz and Hodge–Riemann for `ω = [kahler_class(λ)]`
/// on the `W_J`-invariant subring.
pub fn kahler_package(coh: &Cohomology, j: &ReflectionSet, lambda: &[i64]) -> Result<KahlerReport> {
    let g = &coh.graph;
    let l = coh.l();
    let omega = kahler_class(g, lambda)?;
    let powers: Vec<EquivClass> = {
        let mut p = vec![EquivClass::one(g)];
        for _ in 0..=l {
            let next = p.last().unwrap().mul(&omega);
            p.push(next);
        }
        p
    };
    let inv = invariant_subring(coh, j)?;
    let dims: Vec<usize> = inv.iter().map(Vec::len).collect();
    let full = |k: usize| coh.ordinary_basis(k).len();
    let a = |k: usize| columns(&inv[k], full(k));

    let mut pairing = Vec::new();
    for k in 0..=l / 2 {
        let g_full = coh.pairing_matrix(k, l - k, &powers[0])?;
        let m = a(k).transpose().mul(&g_full).mul(&a(l - k));
        let (size, det) = if m.rows() == m.cols() { (m.rows(), m.det()) } else { (m.rows(), Rat::zero()) };
        let nondegenerate = m.rows() == m.cols() && (size == 0 || !det.is_zero());
        pairing.push(PairingVerdict { k, size, det, nondegenerate });
    }

    let mut hard_lefschetz = Vec::new();
    let mut hodge_riemann = Vec::new();
    for k in 0..=l / 2 {
        let lef = coh.multiplication_matrix(&powers[l - 2 * k], k)?;
        let image = lef.mul(&a(k));
        let rank = if dims[k] == 0 { 0 } else { image.rank() };
        hard_lefschetz.push(LefschetzVerdict {
            k,
            domain_dim: dims[k],
            target_dim: dims[l - k],
            rank,
            isomorphism: rank == dims[k] && dims[k] == dims[l - k],
        });

        // primitive part: kernel of ω^{l−2k+1}
        let primitive: Vec<Vec<Rat>> = if k == 0 || dims[k] == 0 {
            inv[k].clone()
        } else {
            let kill = coh.multiplication_matrix(&powers[l - 2 * k + 1], k)?.mul(&a(k));
            kill.nullspace().iter().map(|y| a(k).mul_vec(y)).collect()
        };
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let gram = coh.pairing_matrix(k, k, &powers[l - 2 * k])?;
        let signed = |basis: &[Vec<Rat>]| -> Matrix {
            if basis.is_empty() {
                return Matrix::zeros(0, 0);
            }
            let p = columns(basis, full(k));
            let q = p.transpose().mul(&gram).mul(&p);
            let s = rat(sign);
            Matrix::from_rows((0..q.rows()).map(|i| q.row(i).iter().map(|x| x * &s).collect()).collect())
        };
        let form = signed(&primitive);
        let pivots = form.ldl_pivots();
        let positive_definite = form.rows() == 0 || form.is_positive_definite();
        let whole = signed(&inv[k]);
        let signature = if whole.rows() == 0 { (0, 0, 0) } else { whole.signature() };
        hodge_riemann.push(HodgeRiemannVerdict {
            k,
            sign,
            primitive_dim: primitive.len(),
            pivots,
            positive_definite,
            signature,
        });
    }

    Ok(KahlerReport {
        h: g.h.to_comma_string(),
        j: j.to_comma_string(),
        lambda: lambda.to_vec(),
        poincare_ok: pairing.iter().all(|p| p.nondegenerate),
        hard_lefschetz_ok: hard_lefschetz.iter().all(|v| v.isomorphism),
        hodge_riemann_ok: hodge_riemann.iter().all(|v| v.positive_definite),
        invariant_dims: dims,
        pairing,
        hard_lefschetz,
        hodge_riemann,
    })
}

pub fn hard_lefschetz_check(coh: &Cohomology, j: &ReflectionSet, lambda: &[i64]) -> Result<bool> {
    Ok(kahler_package(coh, j, lambda)?.hard_lefschetz_ok)
}

pub fn hodge_riemann_check(coh: &Cohomology, j: &ReflectionSet, lambda: &[i64]) -> Result<bool> {
    Ok(kahler_package(coh, j, lambda)?.hodge_riemann_ok)
}

/// The weight `(n−1, n−2, …, 0)`.
pub fn default_weight(n: usize) -> Vec<i64> {
    (0..n as i64).rev().collect()
}

/// Adds a random element of `S_+ · H_T` of degree `k` to `c`.
fn perturb(coh: &Cohomology, c: &EquivClass, rng: &mut ChaCha8Rng) -> EquivClass {
    let nv = coh.nvars();
    let mut out = c.clone();
    for (v, f) in coh.flowups.iter().enumerate() {
        let i = coh.index[v];
        if i >= c.degree {
            continue;
        }
        let mut p = Poly::zero(nv);
        for m in monomials(nv, c.degree - i) {
            p.add_term(m, rat(rng.random_range(-3..=3)));
        }
        out.add_scaled(&f.mul_poly(&p, c.degree - i), &Rat::one());
    }
    out
}

/// Checks `∫ α̃ β̃` is the same for random lifts `α̃, β̃` of random `α ∈ H^{2k}`,
/// `β ∈ H^{2(l−k)}`.
pub fn lift_independence(coh: &Cohomology, k: usize, trials: usize, seed: u64) -> Result<bool> {
    let l = coh.l();
    if k > l {
        return Err(Error::OutOfRange { what: "k", value: k as i64, min: 0, max: l as i64 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut coords = |d: usize| -> Vec<Rat> {
            (0..coh.ordinary_basis(d).len()).map(|_| rat(rng.random_range(-3..=3))).collect()
        };
        let (ca, cb) = (coords(k), coords(l - k));
        let (a, b) = (coh.lift(k, &ca), coh.lift(l - k, &cb));
        let base = integrate_number(&coh.graph, &a.mul(&b))?;
        let (a2, b2) = (perturb(coh, &a, &mut rng), perturb(coh, &b, &mut rng));
        if coh.project(&a2)? != ca || coh.project(&b2)? != cb {
            return Err(Error::Consistency("perturbation changed the ordinary class".into()));
        }
        if integrate_number(&coh.graph, &a2.mul(&b2))? != base {
            return Ok(false);
        }
    }
    Ok(true)
}
