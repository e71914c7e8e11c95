use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::classes::{check_edges, dot_action_unchecked, integrate_number, EquivClass};
use super::graph::{simple_transposition, GkmGraph, MorseFunction};
use super::poly::{monomial_count, monomials, LinearForm, Mono, Poly};
use crate::error::{check_range, Error, Result};
use crate::linalg::{large_primes, rat, Matrix, Rat, SparseSystem};

pub const DEFAULT_MORSE_SEED: u64 = 0x006b_6d6d_6f72_7365;

/// Restrictions of the degree-`d` monomials to the hyperplane of a label.
type RestrictionTable = Vec<Vec<(Mono, Rat)>>;

fn restriction_table(label: &LinearForm, d: usize) -> RestrictionTable {
    let images = label.elimination_images();
    monomials(label.nvars(), d)
        .into_iter()
        .map(|m| {
            let mut p = Poly::zero(label.nvars());
            p.add_term(m, Rat::one());
            p.substitute(&images).terms().map(|(r, c)| (r, c.clone())).collect()
        })
        .collect()
}

/// Divisibility conditions on degree-`d` tuples, with some vertices fixed.
///
/// Unknowns are the coefficients of `f_u` for `u` with `slot[u] = Some(s)`,
/// laid out as `s · D(d) + (monomial position)`.
fn edge_system(
    g: &GkmGraph,
    d: usize,
    slot: &[Option<usize>],
    known: &dyn Fn(usize) -> Option<Poly>,
    cache: &mut HashMap<(usize, usize, usize), RestrictionTable>,
) -> SparseSystem {
    let nv = g.torus.nvars();
    let monos = monomials(nv, d);
    let dim = monos.len();
    let unknowns = slot.iter().flatten().count();
    let mut sys = SparseSystem::new(unknowns * dim);
    for (a, es) in g.adjacency.iter().enumerate() {
        for e in es.iter().filter(|e| e.to > a) {
            let b = e.to;
            if slot[a].is_none() && slot[b].is_none() {
                continue;
            }
            let key = (e.weight.0.min(e.weight.1), e.weight.0.max(e.weight.1));
            let table =
                cache.entry((key.0, key.1, d)).or_insert_with(|| restriction_table(&g.torus.root(key.0, key.1), d));
            // rows keyed by restricted monomial
            let mut rows: BTreeMap<Mono, (Vec<(usize, Rat)>, Rat)> = BTreeMap::new();
            for (vertex, sign) in [(a, rat(1)), (b, rat(-1))] {
                match slot[vertex] {
                    Some(s) => {
                        for (mi, image) in table.iter().enumerate() {
                            for (r, c) in image {
                                rows.entry(*r).or_default().0.push((s * dim + mi, c * &sign));
                            }
                        }
                    }
                    None => {
                        let Some(f) = known(vertex) else { continue };
                        let restricted = f.restrict(&g.torus.root(key.0, key.1));
                        for (r, c) in restricted.terms() {
                            rows.entry(r).or_default().1 -= c * &sign;
                        }
                    }
                }
            }
            for (_, (row, rhs)) in rows {
                sys.push(row, rhs);
            }
        }
    }
    sys
}

/// The homogeneous divisibility system for all degree-`k` tuples.
pub fn equivariant_system(g: &GkmGraph, k: usize) -> SparseSystem {
    let slot: Vec<Option<usize>> = (0..g.vertices.len()).map(Some).collect();
    edge_system(g, k, &slot, &|_| None, &mut HashMap::new())
}

/// A class from a solution vector laid out as in [`equivariant_system`].
pub fn class_from_solution(g: &GkmGraph, k: usize, x: &[Rat]) -> EquivClass {
    let nv = g.torus.nvars();
    let monos = monomials(nv, k);
    let dim = monos.len();
    let values = (0..g.vertices.len())
        .map(|v| {
            let mut p = Poly::zero(nv);
            for (mi, m) in monos.iter().enumerate() {
                p.add_term(*m, x[v * dim + mi].clone());
            }
            p
        })
        .collect();
    EquivClass { degree: k, values }
}

/// Equivariant and ordinary cohomology of `Hess(s, H)` from its moment graph,
/// using flow-up classes for a fixed generic Morse function.
#[derive(Debug)]
pub struct Cohomology {
    pub graph: GkmGraph,
    pub morse: MorseFunction,
    /// Number of down edges at each vertex.
    pub index: Vec<usize>,
    order: Vec<usize>,
    down_labels: Vec<Vec<LinearForm>>,
    /// `F_v(v)` is the product of the down labels at `v` and `F_v(u) = 0`
    /// unless `u = v` or `φ(u) > φ(v)`.
    pub flowups: Vec<EquivClass>,
    support: Vec<Vec<usize>>,
    basis: Vec<Vec<usize>>,
    reflections: OnceLock<Vec<Vec<Matrix>>>,
}

impl Cohomology {
    pub fn new(g: GkmGraph, seed: u64) -> Result<Self> {
        check_range("n", g.n(), 2, 4)?;
        let morse = MorseFunction::new(&g, seed);
        let index = morse.indices(&g);
        let order = morse.order();
        let down_labels: Vec<Vec<LinearForm>> = g
            .adjacency
            .iter()
            .enumerate()
            .map(|(v, es)| {
                es.iter().filter(|e| morse.values[e.to] < morse.values[v]).map(|e| g.weight_form(e)).collect()
            })
            .collect();
        let mut basis = vec![Vec::new(); g.l + 1];
        for &v in &order {
            basis[index[v]].push(v);
        }
        let mut cache = HashMap::new();
        let mut flowups = Vec::with_capacity(g.vertices.len());
        for (v, labels) in down_labels.iter().enumerate() {
            flowups.push(flowup(&g, &morse, v, labels, &mut cache)?);
        }
        let support =
            flowups.iter().map(|f| (0..f.values.len()).filter(|&u| !f.values[u].is_zero()).collect()).collect();
        Ok(Self { graph: g, morse, index, order, down_labels, flowups, support, basis, reflections: OnceLock::new() })
    }

    pub fn l(&self) -> usize {
        self.graph.l
    }

    pub fn nvars(&self) -> usize {
        self.graph.torus.nvars()
    }

    /// Vertices whose flow-ups form a basis of `H^{2k}`, in increasing `φ`.
    pub fn ordinary_basis(&self, k: usize) -> &[usize] {
        self.basis.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn betti(&self) -> Vec<u64> {
        self.basis.iter().map(|b| b.len() as u64).collect()
    }

    /// `Σ_v D(k − idx v)`, the rank of the degree-`k` equivariant piece.
    pub fn equivariant_dim(&self, k: usize) -> usize {
        self.index.iter().filter(|&&i| i <= k).map(|&i| monomial_count(self.nvars(), k - i)).sum()
    }

    /// Basis `{m · F_v : idx v ≤ k, deg m = k − idx v}` of the degree-`k` piece.
    pub fn equivariant_piece(&self, k: usize) -> Vec<EquivClass> {
        let nv = self.nvars();
        let mut out = Vec::new();
        for &v in &self.order {
            let i = self.index[v];
            if i > k {
                continue;
            }
            for m in monomials(nv, k - i) {
                let mut p = Poly::zero(nv);
                p.add_term(m, Rat::one());
                out.push(self.flowups[v].mul_poly(&p, k - i));
            }
        }
        out
    }

    /// Nullity of the full degree-`k` divisibility system over `F_p`.
    ///
    /// It bounds the rank over `ℚ` from above, while the flow-up multiples give
    /// a lower bound, so equality with [`Self::equivariant_dim`] certifies that
    /// they span.
    pub fn certify_piece(&self, k: usize) -> Result<bool> {
        let sys = equivariant_system(&self.graph, k);
        let p = large_primes(1)[0];
        let nullity = sys.nullity_mod(p).ok_or_else(|| Error::Consistency("unreducible coefficient".into()))?;
        Ok(nullity == self.equivariant_dim(k))
    }

    /// Coefficients `c_v` with `c = Σ c_v F_v`.
    pub fn decompose(&self, c: &EquivClass) -> Result<Vec<Poly>> {
        let nv = self.nvars();
        let mut residual = c.values.clone();
        let mut coeffs = vec![Poly::zero(nv); residual.len()];
        for &v in &self.order {
            if residual[v].is_zero() {
                continue;
            }
            let not_a_class = || Error::Consistency(format!("class of degree {} fails at vertex {v}", c.degree));
            if c.degree < self.index[v] {
                return Err(not_a_class());
            }
            let mut q = residual[v].clone();
            for lab in &self.down_labels[v] {
                q = q.div_linear(lab).ok_or_else(not_a_class)?;
            }
            for &u in &self.support[v] {
                let prod = q.mul(&self.flowups[v].values[u]);
                residual[u].add_scaled(&prod, &rat(-1));
            }
            coeffs[v] = q;
        }
        Ok(coeffs)
    }

    /// Image in `H^{2k}(X)`, `k = deg c`, in the flow-up basis.
    pub fn project(&self, c: &EquivClass) -> Result<Vec<Rat>> {
        let coeffs = self.decompose(c)?;
        Ok(self.ordinary_basis(c.degree).iter().map(|&v| coeffs[v].constant_term()).collect())
    }

    /// `Σ a_i F_{v_i}` over the degree-`k` basis.
    pub fn lift(&self, k: usize, coords: &[Rat]) -> EquivClass {
        let basis = self.ordinary_basis(k);
        assert_eq!(coords.len(), basis.len());
        let mut c = EquivClass::zero(&self.graph, k);
        for (a, &v) in coords.iter().zip(basis) {
            c.add_scaled(&self.flowups[v], a);
        }
        c
    }

    /// Matrix of `α ↦ x·α` from `H^{2k}` to `H^{2(k + deg x)}`.
    pub fn multiplication_matrix(&self, x: &EquivClass, k: usize) -> Result<Matrix> {
        let target = k + x.degree;
        let cols: Vec<Vec<Rat>> =
            self.ordinary_basis(k).iter().map(|&v| self.project(&self.flowups[v].mul(x))).collect::<Result<_>>()?;
        Ok(Matrix::from_columns(&cols, self.ordinary_basis(target).len()))
    }

    /// Matrix of the dot action of `w` on `H^{2k}`.
    pub fn dot_matrix(&self, w: &[usize], k: usize) -> Result<Matrix> {
        let cols: Vec<Vec<Rat>> = self
            .ordinary_basis(k)
            .iter()
            .map(|&v| self.project(&dot_action_unchecked(&self.graph, w, &self.flowups[v])))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(&cols, self.ordinary_basis(k).len()))
    }

    /// `[j − 1][k]`: matrix of `s_j` on `H^{2k}`.
    pub fn simple_reflection_matrices(&self) -> Result<&Vec<Vec<Matrix>>> {
        if let Some(m) = self.reflections.get() {
            return Ok(m);
        }
        let n = self.graph.n();
        let computed = (1..n)
            .map(|j| {
                let s = simple_transposition(n, j);
                (0..=self.l()).map(|k| self.dot_matrix(&s, k)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.reflections.get_or_init(|| computed))
    }

    /// `[∫ F_v F_u x]` for `v` in the degree-`a` basis and `u` in the degree-`b`
    /// basis, where `a + b + deg x = l`.
    pub fn pairing_matrix(&self, a: usize, b: usize, x: &EquivClass) -> Result<Matrix> {
        if a + b + x.degree != self.l() {
            return Err(Error::SizeMismatch(format!("degrees {a} + {b} + {} do not sum to {}", x.degree, self.l())));
        }
        let (ba, bb) = (self.ordinary_basis(a), self.ordinary_basis(b));
        let mut m = Matrix::zeros(ba.len(), bb.len());
        for (i, &v) in ba.iter().enumerate() {
            let fx = self.flowups[v].mul(x);
            for (j, &u) in bb.iter().enumerate() {
                m[(i, j)] = integrate_number(&self.graph, &fx.mul(&self.flowups[u]))?;
            }
        }
        Ok(m)
    }

    /// Sanity checks tying the ring to independently known Betti numbers.
    pub fn check_betti(&self, expected: &[u64]) -> Result<()> {
        let got = self.betti();
        if got != expected {
            return Err(Error::Consistency(format!(
                "{:?}: flow-up count {got:?} differs from Betti numbers {expected:?}",
                self.graph.h
            )));
        }
        Ok(())
    }
}

fn flowup(
    g: &GkmGraph,
    morse: &MorseFunction,
    v: usize,
    down: &[LinearForm],
    cache: &mut HashMap<(usize, usize, usize), RestrictionTable>,
) -> Result<EquivClass> {
    let nv = g.torus.nvars();
    let d = down.len();
    let top = down.iter().fold(Poly::one(nv), |acc, l| acc.mul(&l.to_poly()));
    let above: Vec<usize> = (0..g.vertices.len()).filter(|&u| morse.values[u] > morse.values[v]).collect();
    let mut slot = vec![None; g.vertices.len()];
    for (s, &u) in above.iter().enumerate() {
        slot[u] = Some(s);
    }
    let known = |u: usize| (u == v).then(|| top.clone());
    let sys = edge_system(g, d, &slot, &known, cache);
    let x = if sys.cols == 0 {
        if sys.rhs.iter().all(Zero::is_zero) {
            Some(Vec::new())
        } else {
            None
        }
    } else {
        sys.solve()
    };
    let x =
        x.ok_or_else(|| Error::Consistency(format!("{:?}: no flow-up class at vertex {:?}", g.h, g.vertices[v])))?;
    let monos = monomials(nv, d);
    let mut values = vec![Poly::zero(nv); g.vertices.len()];
    values[v] = top;
    for (s, &u) in above.iter().enumerate() {
        let mut p = Poly::zero(nv);
        for (mi, m) in monos.iter().enumerate() {
            p.add_term(*m, x[s * monos.len() + mi].clone());
        }
        values[u] = p;
    }
    let c = EquivClass { degree: d, values };
    if !check_edges(g, &c) {
        return Err(Error::Consistency(format!("flow-up at {:?} fails the edge conditions", g.vertices[v])));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dotchar::{betti_rs, dot_action_multiplicities};
    use crate::gkm::graph::{build_gkm, permutations};
    use crate::hessenberg::{enumerate_hessenberg, HessenbergFunction};
    use crate::partitions::{character_value, Partition};

    fn hf(v: &[usize]) -> HessenbergFunction {
        HessenbergFunction::new(v.to_vec()).unwrap()
    }

    fn ring(h: &HessenbergFunction) -> Cohomology {
        Cohomology::new(build_gkm(h).unwrap(), DEFAULT_MORSE_SEED).unwrap()
    }

    /// Direct nullspace of the full divisibility system.
    fn direct_piece(g: &GkmGraph, k: usize) -> Vec<EquivClass> {
        let sys = equivariant_system(g, k);
        let mut m = Matrix::zeros(sys.rows.len(), sys.cols);
        for (i, row) in sys.rows.iter().enumerate() {
            for (c, x) in row {
                m[(i, *c)] += x;
            }
        }
        m.nullspace().iter().map(|x| class_from_solution(g, k, x)).collect()
    }

    fn flatten(c: &EquivClass) -> Vec<Rat> {
        let nv = c.values[0].nvars();
        let monos = monomials(nv, c.degree);
        c.values.iter().flat_map(|p| monos.iter().map(move |m| p.coeff(*m))).collect()
    }

    #[test]
    fn equivariant_piece_examples() {
        let path = ring(&hf(&[2, 3, 3]));
        assert_eq!(path.equivariant_dim(0), 1);
        assert_eq!(path.equivariant_dim(1), 6);
        let points = ring(&hf(&[1, 2, 3]));
        assert_eq!(points.equivariant_dim(1), 12);
        assert_eq!(points.equivariant_piece(1).len(), 12);
    }

    #[test]
    fn equivariant_piece_matches_direct_nullspace() {
        let mut cases: Vec<(HessenbergFunction, usize)> = Vec::new();
        for h in enumerate_hessenberg(3, false).unwrap() {
            for k in 0..=4 {
                cases.push((h.clone(), k));
            }
        }
        for h in [hf(&[2, 3, 4, 4]), hf(&[3, 3, 4, 4]), hf(&[2, 4, 4, 4])] {
            for k in 0..=2 {
                cases.push((h.clone(), k));
            }
        }
        for (h, k) in cases {
            let r = ring(&h);
            let direct = direct_piece(&r.graph, k);
            let ours = r.equivariant_piece(k);
            assert_eq!(direct.len(), ours.len(), "{h:?} k = {k}");
            assert!(ours.iter().all(|c| check_edges(&r.graph, c)));
            let m = Matrix::from_columns(&ours.iter().map(flatten).collect::<Vec<_>>(), flatten(&ours[0]).len());
            assert_eq!(m.rank(), ours.len(), "{h:?} k = {k}");
            assert!(r.certify_piece(k).unwrap());
        }
    }

    #[test]
    fn free_module_formula() {
        for n in 2..=4 {
            for h in enumerate_hessenberg(n, false).unwrap() {
                let r = ring(&h);
                let b = betti_rs(&h).unwrap();
                r.check_betti(&b).unwrap();
                for k in 0..=2 * r.l() {
                    let formula: usize =
                        (0..=k.min(r.l())).map(|j| b[j] as usize * monomial_count(r.nvars(), k - j)).sum();
                    assert_eq!(r.equivariant_dim(k), formula);
                    assert!(r.certify_piece(k).unwrap(), "{h:?} k = {k}");
                }
            }
        }
    }

    /// `dim M_k − rank(t · M_{k−1})` by direct linear algebra.
    fn direct_ordinary_dim(g: &GkmGraph, k: usize) -> usize {
        let top = direct_piece(g, k);
        if k == 0 {
            return top.len();
        }
        let lower = direct_piece(g, k - 1);
        let nv = g.torus.nvars();
        let ideal: Vec<Vec<Rat>> =
            lower.iter().flat_map(|c| (0..nv).map(move |i| flatten(&c.mul_poly(&Poly::var(nv, i), 1)))).collect();
        if ideal.is_empty() {
            return top.len();
        }
        let len = ideal[0].len();
        top.len() - Matrix::from_columns(&ideal, len).rank()
    }

    #[test]
    fn ordinary_piece_matches_direct_quotient() {
        for h in enumerate_hessenberg(3, false).unwrap() {
            let r = ring(&h);
            for k in 0..=r.l() {
                assert_eq!(direct_ordinary_dim(&r.graph, k), r.ordinary_basis(k).len(), "{h:?} {k}");
            }
        }
        let r = ring(&hf(&[2, 3, 4, 4]));
        for k in 0..=2 {
            assert_eq!(direct_ordinary_dim(&r.graph, k), r.ordinary_basis(k).len());
        }
        assert_eq!(ring(&hf(&[2, 3, 3])).ordinary_basis(1).len(), 4);
        assert_eq!(ring(&hf(&[3, 3, 3])).ordinary_basis(3).len(), 1);
    }

    #[test]
    fn projection_kills_the_ideal() {
        let r = ring(&hf(&[2, 3, 4, 4]));
        let nv = r.nvars();
        for &v in r.ordinary_basis(1) {
            let c = r.flowups[v].mul_poly(&Poly::var(nv, 0), 1);
            assert!(r.project(&c).unwrap().iter().all(Zero::is_zero));
        }
        for (i, &v) in r.ordinary_basis(2).iter().enumerate() {
            let coords = r.project(&r.flowups[v]).unwrap();
            assert!(coords.iter().enumerate().all(|(j, x)| *x == rat(i64::from(i == j))));
        }
    }

    #[test]
    fn top_flowup_integrates_to_unit() {
        for h in enumerate_hessenberg(4, true).unwrap() {
            let r = ring(&h);
            let top = r.ordinary_basis(r.l());
            assert_eq!(top.len(), 1);
            let x = integrate_number(&r.graph, &r.flowups[top[0]]).unwrap();
            assert!(x == rat(1) || x == rat(-1), "{h:?}: {x}");
        }
    }

    /// Traces of the dot action reproduce the characters from the CSF.
    #[test]
    fn dot_action_traces_match_characters() {
        for n in 2..=4 {
            for h in enumerate_hessenberg(n, false).unwrap() {
                let r = ring(&h);
                let mult = dot_action_multiplicities(&h).unwrap();
                for w in permutations(n) {
                    let ct = cycle_type(&w);
                    for k in 0..=r.l() {
                        let trace: Rat = {
                            let m = r.dot_matrix(&w, k).unwrap();
                            (0..m.rows()).map(|i| m[(i, i)].clone()).sum()
                        };
                        let expected: i64 = mult
                            .rows()
                            .map(|(lambda, row)| row[k] as i64 * character_value(lambda, &ct).unwrap())
                            .sum();
                        assert_eq!(trace, rat(expected), "{h:?} {w:?} k = {k}");
                    }
                }
            }
        }
    }

    fn cycle_type(w: &[usize]) -> Partition {
        let mut seen = vec![false; w.len()];
        let mut parts = Vec::new();
        for s in 0..w.len() {
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = w[x] - 1;
                len += 1;
            }
            if len > 0 {
                parts.push(len);
            }
        }
        Partition::from_unsorted(parts)
    }

    #[test]
    fn path_degree_one_character() {
        // trivial twice plus the standard representation
        let r = ring(&hf(&[2, 3, 3]));
        let traces: Vec<Rat> = [[1, 2, 3], [2, 1, 3], [2, 3, 1]]
            .iter()
            .map(|w| {
                let m = r.dot_matrix(w, 1).unwrap();
                (0..m.rows()).map(|i| m[(i, i)].clone()).sum()
            })
            .collect();
        assert_eq!(traces, vec![rat(4), rat(2), rat(1)]);
    }

    #[test]
    fn cost_guard() {
        let g = build_gkm(&HessenbergFunction::full(5)).unwrap();
        assert!(Cohomology::new(g, 1).is_err());
    }
}
