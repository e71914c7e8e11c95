//! Graded dot-action characters of regular semisimple Hessenberg varieties.
//!
//! The chromatic quasisymmetric function `X_G(x; q)` of the incomparability
//! graph of `h` is computed by enumerating proper colorings, graded by
//! ascents. Its `ω`-twist is the graded Frobenius characteristic of the dot
//! action, so the multiplicity of the irreducible `λ` in `H^{2k}` is the
//! coefficient of `q^k` in `⟨X_G, s_{λ'}⟩`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hessenberg::{dimension, HessenbergFunction};
use crate::partitions::{
    conjugate, hook_length_dimension, invariant_dim, partitions_unchecked, Partition, ReflectionSet,
};
use crate::symfunc::{schur_inner_product, Basis, QPoly, QSymPoly};

/// Smallest `n` that needs an explicit override.
pub const CSF_GUARD_N: usize = 8;

/// Multiplicity of each irreducible `λ` in each even cohomology group `H^{2k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMultiplicity {
    pub h: HessenbergFunction,
    /// Complex dimension; rows have length `l + 1`.
    pub l: usize,
    /// Keyed by partition, iterated in the canonical reverse-lexicographic order
    /// via [`GradedMultiplicity::rows`].
    pub table: BTreeMap<Partition, Vec<u64>>,
}

impl GradedMultiplicity {
    pub fn n(&self) -> usize {
        self.h.n()
    }

    /// Rows in reverse-lexicographic partition order.
    pub fn rows(&self) -> impl Iterator<Item = (&Partition, &Vec<u64>)> {
        self.table.iter().rev()
    }

    pub fn row(&self, lambda: &Partition) -> &[u64] {
        self.table.get(lambda).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn total(&self, lambda: &Partition) -> u64 {
        self.row(lambda).iter().sum()
    }

    /// Irreducibles with nonzero total multiplicity.
    pub fn support(&self) -> Vec<Partition> {
        self.rows().filter(|(_, r)| r.iter().any(|&m| m > 0)).map(|(p, _)| p.clone()).collect()
    }

    /// `b_{2k} = Σ_λ mult[λ][k] · f^λ`.
    pub fn betti(&self) -> Vec<u64> {
        let mut b = vec![0u64; self.l + 1];
        for (lambda, row) in &self.table {
            let f = hook_length_dimension(lambda) as u64;
            for (k, &m) in row.iter().enumerate() {
                b[k] += m * f;
            }
        }
        b
    }

    /// `b_{2k} = Σ_λ mult[λ][k] · dim (V_λ)^{W_J}`.
    pub fn regular_betti(&self, j: &ReflectionSet) -> Result<Vec<u64>> {
        if j.n() != self.n() {
            return Err(Error::SizeMismatch(format!("{j:?} for n = {}", self.n())));
        }
        let mut b = vec![0u64; self.l + 1];
        for (lambda, row) in &self.table {
            let d = invariant_dim(lambda, j)?;
            if d == 0 {
                continue;
            }
            for (k, &m) in row.iter().enumerate() {
                b[k] += m * d;
            }
        }
        Ok(b)
    }

    /// The serialized form
    /// `{"n":3,"h":"2,3,3","l":2,"mult":{"3":[1,2,1],…},"betti":[1,4,1]}`.
    pub fn to_json(&self) -> Value {
        let mut mult = serde_json::Map::new();
        for (lambda, row) in self.rows() {
            mult.insert(lambda.to_compact_string(), json!(row));
        }
        json!({
            "n": self.n(),
            "h": self.h.to_comma_string(),
            "l": self.l,
            "mult": Value::Object(mult),
            "betti": self.betti(),
        })
    }
}

/// `X_G(x_1, …, x_n; q)` of the incomparability graph of `h`, in the monomial basis.
///
/// The coefficient of `m_μ` is the number of proper colorings using color `c`
/// exactly `μ_c` times, each weighted by `q^{asc}` where an ascent is an edge
/// `{i < j}` with `κ(i) < κ(j)`.
pub fn chromatic_qsym(h: &HessenbergFunction, override_guard: bool) -> Result<QSymPoly> {
    let n = h.n();
    if n >= CSF_GUARD_N && !override_guard {
        return Err(Error::CostGuard(format!(
            "chromatic function for n = {n} needs the override (guard at n = {CSF_GUARD_N})"
        )));
    }
    // earlier neighbours of vertex j form the range first_nbr[j]..j
    let first_nbr: Vec<usize> = (0..n).map(|j| (0..j).find(|&i| h.values()[i] > j).unwrap_or(j)).collect();

    let shards: Vec<(Partition, usize)> = partitions_unchecked(n)
        .into_iter()
        .flat_map(|mu| {
            let colors = mu.len();
            (0..colors).map(move |c| (mu.clone(), c))
        })
        .collect();

    let partials: Vec<(Partition, Vec<u64>)> = shards
        .into_par_iter()
        .map(|(mu, c0)| {
            let mut remaining = mu.parts().to_vec();
            let mut coloring = vec![0usize; n];
            let mut counts = vec![0u64; n * (n - 1) / 2 + 1];
            remaining[c0] -= 1;
            coloring[0] = c0;
            color_rec(1, 0, &first_nbr, &mut remaining, &mut coloring, &mut counts);
            (mu, counts)
        })
        .collect();

    let mut merged: BTreeMap<Partition, Vec<u64>> = BTreeMap::new();
    for (mu, counts) in partials {
        let slot = merged.entry(mu).or_insert_with(|| vec![0; counts.len()]);
        for (s, c) in slot.iter_mut().zip(counts) {
            *s += c;
        }
    }
    let mut f = QSymPoly::zero(Basis::Monomial, n);
    for (mu, counts) in merged {
        f.add_term(mu, &QPoly::from_coeffs(counts))?;
    }
    Ok(f)
}

fn color_rec(
    v: usize,
    ascents: usize,
    first_nbr: &[usize],
    remaining: &mut [usize],
    coloring: &mut [usize],
    counts: &mut [u64],
) {
    let n = coloring.len();
    if v == n {
        counts[ascents] += 1;
        return;
    }
    for c in 0..remaining.len() {
        if remaining[c] == 0 {
            continue;
        }
        let nbrs = &coloring[first_nbr[v]..v];
        if nbrs.contains(&c) {
            continue;
        }
        let asc = nbrs.iter().filter(|&&x| x < c).count();
        remaining[c] -= 1;
        coloring[v] = c;
        color_rec(v + 1, ascents + asc, first_nbr, remaining, coloring, counts);
        remaining[c] += 1;
    }
}

/// Decodes the graded multiplicities from an already computed `X_G`.
pub fn multiplicities_from_csf(h: &HessenbergFunction, x: &QSymPoly) -> Result<GradedMultiplicity> {
    let n = h.n();
    let l = dimension(h);
    let mut table = BTreeMap::new();
    for lambda in partitions_unchecked(n) {
        let pairing = schur_inner_product(x, &conjugate(&lambda))?;
        let dense = pairing.dense(l + 1).ok_or_else(|| {
            Error::Consistency(format!("⟨X, s_λ'⟩ for λ = {lambda:?} exceeds degree {l}: {pairing:?}"))
        })?;
        let row = dense.iter().map(|c| to_multiplicity(c, &lambda)).collect::<Result<Vec<u64>>>()?;
        table.insert(lambda, row);
    }
    Ok(GradedMultiplicity { h: h.clone(), l, table })
}

fn to_multiplicity(c: &BigInt, lambda: &Partition) -> Result<u64> {
    if c.is_negative() {
        return Err(Error::Consistency(format!("negative multiplicity {c} for {lambda:?}")));
    }
    c.to_u64().ok_or_else(|| Error::Consistency(format!("multiplicity {c} overflows u64")))
}

pub fn dot_action_multiplicities(h: &HessenbergFunction) -> Result<GradedMultiplicity> {
    dot_action_multiplicities_guarded(h, false)
}

/// As [`dot_action_multiplicities`], optionally lifting the size guard.
pub fn dot_action_multiplicities_guarded(h: &HessenbergFunction, override_guard: bool) -> Result<GradedMultiplicity> {
    let x = chromatic_qsym(h, override_guard)?;
    multiplicities_from_csf(h, &x)
}

/// Even Betti numbers `b_0, b_2, …, b_{2l}` of `Hess(s, H)` for regular semisimple `s`.
pub fn betti_rs(h: &HessenbergFunction) -> Result<Vec<u64>> {
    Ok(dot_action_multiplicities(h)?.betti())
}

/// Even Betti numbers of `Hess(x, H)` for regular `x` whose semisimple part has
/// stabilizer `W_J`.
pub fn regular_betti(h: &HessenbergFunction, j: &ReflectionSet) -> Result<Vec<u64>> {
    dot_action_multiplicities(h)?.regular_betti(j)
}

pub fn is_palindromic(v: &[u64]) -> bool {
    v.iter().eq(v.iter().rev())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessenberg::enumerate_hessenberg;
    use crate::hessenberg::incomparability_graph;
    use crate::partitions::partitions_of;
    use crate::symfunc::{h_dual_coefficient, powersum_csf_q1, powersum_to_monomial};

    fn hf(v: &[usize]) -> HessenbergFunction {
        HessenbergFunction::new(v.to_vec()).unwrap()
    }

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Enumerates all n^n colorings and keeps those with content exactly μ.
    fn brute_csf(h: &HessenbergFunction) -> QSymPoly {
        let n = h.n();
        let edges = incomparability_graph(h);
        let mut f = QSymPoly::zero(Basis::Monomial, n);
        for code in 0..n.pow(n as u32) {
            let mut c = code;
            let col: Vec<usize> = (0..n)
                .map(|_| {
                    let d = c % n;
                    c /= n;
                    d
                })
                .collect();
            if edges.iter().any(|&(a, b)| col[a - 1] == col[b - 1]) {
                continue;
            }
            let mut content = vec![0usize; n];
            for &x in &col {
                content[x] += 1;
            }
            if content.windows(2).any(|w| w[0] < w[1]) {
                continue;
            }
            let asc = edges.iter().filter(|&&(a, b)| col[a - 1] < col[b - 1]).count();
            f.add_term(Partition::from_unsorted(content), &QPoly::monomial(asc as u32, 1)).unwrap();
        }
        f
    }

    #[test]
    fn csf_matches_brute_force() {
        for n in 2..=5 {
            for h in enumerate_hessenberg(n, false).unwrap() {
                assert_eq!(chromatic_qsym(&h, false).unwrap(), brute_csf(&h), "{h:?}");
            }
        }
    }

    #[test]
    fn csf_of_empty_graph_is_p1_power() {
        for n in 2..=6 {
            let x = chromatic_qsym(&HessenbergFunction::borel(n), false).unwrap();
            assert_eq!(x, QSymPoly::p1_power_monomial(n));
        }
    }

    #[test]
    fn csf_of_complete_graph_is_q_factorial() {
        for n in 2..=5 {
            let x = chromatic_qsym(&HessenbergFunction::full(n), false).unwrap();
            // brute force: ascents of permutations as injective colorings
            let mut perm: Vec<usize> = (0..n).collect();
            let mut coeffs = vec![0u64; n * (n - 1) / 2 + 1];
            loop {
                let asc =
                    (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] < perm[j]).count();
                coeffs[asc] += 1;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            let want = QPoly::from_coeffs(coeffs);
            assert_eq!(want, QPoly::q_factorial(n));
            assert_eq!(h_dual_coefficient(&x, &Partition::column(n)).unwrap(), want);
            // no other content is possible on K_n
            assert_eq!(x.terms().count(), 1);
        }
    }

    fn next_permutation(v: &mut [usize]) -> bool {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return false;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }

    #[test]
    fn path_csf_has_27_colorings_and_decodes_to_hexagon() {
        let h = hf(&[2, 3, 3]);
        let x = chromatic_qsym(&h, false).unwrap();
        assert_eq!(x.coeff(&p(&[1, 1, 1])), QPoly::from_coeffs([1, 4, 1]));
        assert_eq!(x.coeff(&p(&[2, 1])), QPoly::from_coeffs([0, 1]));
        assert!(x.coeff(&p(&[3])).is_zero());
        assert_eq!(betti_rs(&h).unwrap(), vec![1, 4, 1]);
    }

    #[test]
    fn multiplicity_examples() {
        let m = dot_action_multiplicities(&hf(&[1, 2, 3])).unwrap();
        for lambda in partitions_of(3).unwrap() {
            assert_eq!(m.row(&lambda), &[hook_length_dimension(&lambda) as u64]);
        }
        let m = dot_action_multiplicities(&hf(&[3, 3, 3])).unwrap();
        assert_eq!(m.row(&p(&[3])), &[1, 2, 2, 1]);
        assert_eq!(m.row(&p(&[2, 1])), &[0, 0, 0, 0]);
        assert_eq!(m.row(&p(&[1, 1, 1])), &[0, 0, 0, 0]);
        let m = dot_action_multiplicities(&hf(&[2, 3, 3])).unwrap();
        assert_eq!(m.row(&p(&[3])), &[1, 2, 1]);
        assert_eq!(m.row(&p(&[2, 1])), &[0, 1, 0]);
        assert_eq!(m.row(&p(&[1, 1, 1])), &[0, 0, 0]);
        assert_eq!(m.support(), vec![p(&[3]), p(&[2, 1])]);
    }

    /// Totals over degrees agree with the power-sum route at q = 1.
    #[test]
    fn path_totals_match_powersum_oracle() {
        let h = hf(&[2, 3, 3]);
        let m = dot_action_multiplicities(&h).unwrap();
        let xp = powersum_csf_q1(&incomparability_graph(&h), 3).unwrap();
        for lambda in partitions_of(3).unwrap() {
            let total = crate::symfunc::schur_inner_product_powersum(&xp, &conjugate(&lambda)).unwrap();
            assert_eq!(total, QPoly::constant(m.total(&lambda)));
        }
        assert_eq!([m.total(&p(&[3])), m.total(&p(&[2, 1])), m.total(&p(&[1, 1, 1]))], [4, 1, 0]);
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti_rs(&hf(&[1, 2, 3])).unwrap(), vec![6]);
        assert_eq!(betti_rs(&hf(&[2, 3, 3])).unwrap(), vec![1, 4, 1]);
        assert_eq!(betti_rs(&hf(&[3, 3, 3])).unwrap(), vec![1, 2, 2, 1]);
        assert_eq!(betti_rs(&hf(&[2, 2])).unwrap(), vec![1, 1]);
    }

    #[test]
    fn regular_betti_examples() {
        let h = hf(&[2, 3, 3]);
        assert_eq!(regular_betti(&h, &ReflectionSet::empty(3)).unwrap(), betti_rs(&h).unwrap());
        let peterson = regular_betti(&h, &ReflectionSet::full(3)).unwrap();
        assert_eq!(peterson, vec![1, 2, 1]);
        // product formula Π [h(i) − i + 1]_q for the regular nilpotent case
        let prod = (1..=3).fold(QPoly::constant(1), |acc, i| acc * QPoly::q_integer(h.at(i) - i + 1));
        assert_eq!(prod, QPoly::from_coeffs(peterson.iter().copied()));
        assert_eq!(regular_betti(&hf(&[3, 3, 3]), &ReflectionSet::full(3)).unwrap(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn cost_guard() {
        assert!(chromatic_qsym(&HessenbergFunction::borel(7), false).is_ok());
        let h = HessenbergFunction::borel(8);
        assert!(matches!(chromatic_qsym(&h, false), Err(Error::CostGuard(_))));
        let x = chromatic_qsym(&h, true).unwrap();
        assert_eq!(x, QSymPoly::p1_power_monomial(8));
    }

    #[test]
    fn json_shape() {
        let m = dot_action_multiplicities(&hf(&[2, 3, 3])).unwrap();
        assert_eq!(
            m.to_json().to_string(),
            r#"{"n":3,"h":"2,3,3","l":2,"mult":{"3":[1,2,1],"21":[0,1,0],"111":[0,0,0]},"betti":[1,4,1]}"#
        );
    }

    #[test]
    fn sweep_invariants_up_to_six() {
        for n in 2..=6 {
            for h in enumerate_hessenberg(n, false).unwrap() {
                let x = chromatic_qsym(&h, false).unwrap();
                let m = multiplicities_from_csf(&h, &x).unwrap();
                let l = m.l;
                // q = 1 specialization agrees with the subset expansion
                let xp = powersum_csf_q1(&incomparability_graph(&h), n).unwrap();
                assert_eq!(x.at_q_one(), powersum_to_monomial(&xp).unwrap(), "{h:?}");
                // Σ_μ ⟨F, s_μ⟩ f^μ = ⟨F, p_1^n⟩ = [m_{1^n}] F
                let mut acc = QPoly::zero();
                for mu in partitions_of(n).unwrap() {
                    let s = schur_inner_product(&x, &mu).unwrap();
                    assert!(s.is_nonnegative(), "{h:?} {mu:?}");
                    acc += &s.scale(&BigInt::from(hook_length_dimension(&mu)));
                }
                assert_eq!(acc, h_dual_coefficient(&x, &Partition::column(n)).unwrap());
                // trivial isotype
                let triv = m.row(&Partition::row(n));
                assert!(triv[0] >= 1);
                assert!(is_palindromic(triv));
                let b = m.betti();
                assert!(is_palindromic(&b));
                assert_eq!(b.len(), l + 1);
                if h.is_indecomposable() {
                    assert_eq!((b[0], b[l]), (1, 1), "{h:?}");
                }
                for j in ReflectionSet::all(n) {
                    assert!(is_palindromic(&m.regular_betti(&j).unwrap()), "{h:?} {j:?}");
                }
            }
            let flag = dot_action_multiplicities(&HessenbergFunction::full(n)).unwrap();
            for (lambda, row) in flag.rows() {
                if *lambda != Partition::row(n) {
                    assert!(row.iter().all(|&m| m == 0));
                }
            }
        }
    }
}
