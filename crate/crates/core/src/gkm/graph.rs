use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{LinearForm, Poly};
use crate::error::{check_range, Error, Result};
use crate::hessenberg::{dimension, HessenbergFunction};
use crate::linalg::{rat, Rat};

/// A permutation in one-line notation with values `1..=n`.
pub type Perm = Vec<usize>;

/// Coordinates `t_1, …, t_n` on the traceless torus, written in the first
/// `n − 1` of them with `t_n = −(t_1 + … + t_{n−1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Torus {
    pub n: usize,
}

impl Torus {
    pub fn nvars(self) -> usize {
        self.n - 1
    }

    /// Coefficient vector of `t_i`, `1 ≤ i ≤ n`.
    pub fn coordinate(self, i: usize) -> Vec<Rat> {
        let k = self.nvars();
        if i < self.n {
            (0..k).map(|j| rat(i64::from(j + 1 == i))).collect()
        } else {
            vec![rat(-1); k]
        }
    }

    /// `t_a − t_b`.
    pub fn root(self, a: usize, b: usize) -> LinearForm {
        let (x, y) = (self.coordinate(a), self.coordinate(b));
        LinearForm::new(x.iter().zip(&y).map(|(p, q)| p - q).collect())
    }

    /// `Σ c_i t_i`.
    pub fn weight(self, c: &[Rat]) -> Poly {
        assert_eq!(c.len(), self.n);
        let mut out = vec![rat(0); self.nvars()];
        for (i, ci) in c.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(self.coordinate(i + 1)) {
                *o += ci * x;
            }
        }
        Poly::linear(&out)
    }

    /// Images of the variables under `t_i ↦ t_{w(i)}`.
    pub fn permutation_images(self, w: &[usize]) -> Vec<Poly> {
        (1..self.n).map(|i| Poly::linear(&self.coordinate(w[i - 1]))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub to: usize,
    /// The edge joins `w` and `w·(j i)` for positions `j < i ≤ h(j)`.
    pub positions: (usize, usize),
    /// Tangent weight at the source: `t_a − t_b` with `(a, b) = (w(j), w(i))`.
    pub weight: (usize, usize),
}

/// Fixed points and one-dimensional orbits of the torus on `Hess(s, H)`.
#[derive(Clone, Debug)]
pub struct GkmGraph {
    pub h: HessenbergFunction,
    pub torus: Torus,
    pub l: usize,
    pub vertices: Vec<Perm>,
    pub adjacency: Vec<Vec<Edge>>,
    index: HashMap<Perm, usize>,
}

pub fn permutations(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Perm = (1..=n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&x| a[x - 1]).collect()
}

pub fn inverse(a: &[usize]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x - 1] = i + 1;
    }
    inv
}

/// The simple transposition `s_j = (j j+1)`.
pub fn simple_transposition(n: usize, j: usize) -> Perm {
    let mut w: Perm = (1..=n).collect();
    w.swap(j - 1, j);
    w
}

impl GkmGraph {
    pub fn n(&self) -> usize {
        self.torus.n
    }

    pub fn vertex_index(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn weight_form(&self, e: &Edge) -> LinearForm {
        self.torus.root(e.weight.0, e.weight.1)
    }

    /// Product of the tangent weights at vertex `v`.
    pub fn euler_class(&self, v: usize) -> Poly {
        self.adjacency[v].iter().fold(Poly::one(self.torus.nvars()), |acc, e| acc.mul(&self.weight_form(e).to_poly()))
    }
}

/// Moment graph of `Hess(s, H)`: `w ~ w·(j i)` whenever `j < i ≤ h(j)`.
pub fn build_gkm(h: &HessenbergFunction) -> Result<GkmGraph> {
    let n = h.n();
    check_range("n", n, 2, 5)?;
    let l = dimension(h);
    let vertices = permutations(n);
    let index: HashMap<Perm, usize> = vertices.iter().cloned().zip(0..).collect();
    let mut adjacency = Vec::with_capacity(vertices.len());
    for w in &vertices {
        let mut edges = Vec::new();
        for j in 1..=n {
            for i in (j + 1)..=h.at(j) {
                let mut u = w.clone();
                u.swap(j - 1, i - 1);
                edges.push(Edge { to: index[&u], positions: (j, i), weight: (w[j - 1], w[i - 1]) });
            }
        }
        if edges.len() != l {
            return Err(Error::Consistency(format!("{h:?}: vertex {w:?} has degree {} instead of {l}", edges.len())));
        }
        adjacency.push(edges);
    }
    let g = GkmGraph { h: h.clone(), torus: Torus { n }, l, vertices, adjacency, index };
    for (v, edges) in g.adjacency.iter().enumerate() {
        for e in edges {
            let back = g.adjacency[e.to].iter().find(|b| b.to == v);
            match back {
                Some(b) if b.weight == (e.weight.1, e.weight.0) => {}
                _ => return Err(Error::Consistency(format!("edge {v}–{} is not symmetric", e.to))),
            }
        }
    }
    Ok(g)
}

/// A generic linear functional `ξ` on the torus and the induced Morse function
/// `φ(w) = Σ_k ξ_{w(k)} (n − k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseFunction {
    pub seed: u64,
    pub xi: Vec<i64>,
    pub values: Vec<i64>,
}

impl MorseFunction {
    pub fn new(g: &GkmGraph, seed: u64) -> Self {
        let n = g.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let xi: Vec<i64> = (0..n).map(|_| rng.random_range(-1000..=1000)).collect();
            let values: Vec<i64> = g
                .vertices
                .iter()
                .map(|w| w.iter().enumerate().map(|(k, &x)| xi[x - 1] * (n - 1 - k) as i64).sum())
                .collect();
            let mut sorted = values.clone();
            sorted.sort_unstable();
            let distinct_xi = {
                let mut s = xi.clone();
                s.sort_unstable();
                s.windows(2).all(|p| p[0] != p[1])
            };
            if distinct_xi && sorted.windows(2).all(|p| p[0] != p[1]) {
                return Self { seed, xi, values };
            }
        }
    }

    /// Vertices in increasing order of `φ`.
    pub fn order(&self) -> Vec<usize> {
        let mut o: Vec<usize> = (0..self.values.len()).collect();
        o.sort_by_key(|&v| self.values[v]);
        o
    }

    /// Number of edges at each vertex leading to a smaller value of `φ`.
    pub fn indices(&self, g: &GkmGraph) -> Vec<usize> {
        g.adjacency
            .iter()
            .enumerate()
            .map(|(v, es)| es.iter().filter(|e| self.values[e.to] < self.values[v]).count())
            .collect()
    }

    /// Tangent weights at `v` pairing negatively with `ξ`, counted per vertex.
    pub fn negative_weight_counts(&self, g: &GkmGraph) -> Vec<usize> {
        g.adjacency
            .iter()
            .map(|es| es.iter().filter(|e| self.xi[e.weight.0 - 1] < self.xi[e.weight.1 - 1]).count())
            .collect()
    }
}

/// Betti numbers `b_0, b_2, …` as the histogram of Morse indices.
pub fn morse_betti(g: &GkmGraph, seed: u64) -> Vec<u64> {
    let m = MorseFunction::new(g, seed);
    let mut b = vec![0u64; g.l + 1];
    for i in m.negative_weight_counts(g) {
        b[i] += 1;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dotchar::betti_rs;
    use crate::hessenberg::enumerate_hessenberg;

    fn hf(v: &[usize]) -> HessenbergFunction {
        HessenbergFunction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn permutation_helpers() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(5).len(), 120);
        let w = vec![2, 3, 1];
        assert_eq!(compose(&w, &inverse(&w)), vec![1, 2, 3]);
        assert_eq!(compose(&[2, 1, 3], &[1, 3, 2]), vec![2, 3, 1]);
    }

    #[test]
    fn graph_examples() {
        let points = build_gkm(&hf(&[1, 2, 3])).unwrap();
        assert_eq!((points.vertices.len(), points.edge_count()), (6, 0));
        let flag = build_gkm(&HessenbergFunction::full(4)).unwrap();
        assert_eq!(flag.edge_count(), 24 * 6 / 2);
        // every transposition times w is a neighbour
        for (v, w) in flag.vertices.iter().enumerate() {
            for a in 1..=4 {
                for b in (a + 1)..=4 {
                    let mut t: Perm = (1..=4).collect();
                    t.swap(a - 1, b - 1);
                    let u = flag.vertex_index(&compose(&t, w)).unwrap();
                    assert!(flag.adjacency[v].iter().any(|e| e.to == u));
                }
            }
        }
    }

    #[test]
    fn path_graph_is_a_hexagon() {
        let g = build_gkm(&hf(&[2, 3, 3])).unwrap();
        assert_eq!(g.vertices.len(), 6);
        assert!(g.adjacency.iter().all(|es| es.len() == 2));
        // connected 2-regular graph on 6 vertices is a single cycle
        let mut seen = [false; 6];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend(g.adjacency[v].iter().map(|e| e.to));
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn labels_are_pairwise_independent_at_each_vertex() {
        for h in enumerate_hessenberg(4, false).unwrap() {
            let g = build_gkm(&h).unwrap();
            for es in &g.adjacency {
                for (a, e) in es.iter().enumerate() {
                    for f in &es[a + 1..] {
                        assert!(!g.weight_form(e).is_proportional(&g.weight_form(f)));
                    }
                }
            }
        }
    }

    #[test]
    fn morse_indices_match_weight_counts() {
        for h in enumerate_hessenberg(4, false).unwrap() {
            let g = build_gkm(&h).unwrap();
            let m = MorseFunction::new(&g, 11);
            let idx = m.indices(&g);
            let neg = m.negative_weight_counts(&g);
            // φ decreases along an edge iff ξ pairs positively with its weight
            assert_eq!(idx.iter().map(|&i| g.l - i).collect::<Vec<_>>(), neg);
            assert_eq!(m, MorseFunction::new(&g, 11));
        }
    }

    #[test]
    fn morse_betti_matches_csf_up_to_four() {
        for n in 2..=4 {
            for h in enumerate_hessenberg(n, false).unwrap() {
                let g = build_gkm(&h).unwrap();
                assert_eq!(morse_betti(&g, 3), betti_rs(&h).unwrap(), "{h:?}");
                assert_eq!(morse_betti(&g, 4), morse_betti(&g, 5));
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(build_gkm(&HessenbergFunction::full(6)).is_err());
    }
}
