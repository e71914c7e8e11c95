//! Degree-`n` symmetric functions with coefficients in `Z[q]`.
//!
//! Only the monomial and power-sum bases are represented. Hall inner products
//! against `h_μ` read off monomial coefficients directly, and pairings with
//! Schur functions go through the Jacobi–Trudi determinant `s_μ = det(h_{μ_i − i + j})`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{check_range, Error, Result};
use crate::partitions::{character_value, partitions_unchecked, Partition};

/// A polynomial in `q` with arbitrary-precision integer coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: BTreeMap<u32, BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: u32, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// Builds `Σ_k coeffs[k] q^k`.
    pub fn from_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (k, c) in coeffs.into_iter().enumerate() {
            out.add_term(k as u32, c.into());
        }
        out
    }

    /// `[n]_q! = Π_{i=1}^{n} (1 + q + … + q^{i−1})`.
    pub fn q_factorial(n: usize) -> Self {
        (1..=n).fold(Self::constant(1), |acc, i| acc * Self::q_integer(i))
    }

    /// `[m]_q = 1 + q + … + q^{m−1}`.
    pub fn q_integer(m: usize) -> Self {
        Self::from_coeffs(std::iter::repeat_n(1, m))
    }

    pub fn add_term(&mut self, exp: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: u32) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Dense coefficient list `[c_0, …, c_len−1]`; higher terms must be absent.
    pub fn dense(&self, len: usize) -> Option<Vec<BigInt>> {
        if self.degree().is_some_and(|d| d as usize >= len) {
            return None;
        }
        Some((0..len as u32).map(|k| self.coeff(k)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect() }
    }

    pub fn is_palindromic(&self, top: u32) -> bool {
        (0..=top).all(|k| self.coeff(k) == self.coeff(top - k)) && self.degree().is_none_or(|d| d <= top)
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}q"),
                _ => format!("{c}q^{k}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        for (&k, c) in &rhs.coeffs {
            self.add_term(k, c.clone());
        }
    }
}

impl Add for QPoly {
    type Output = QPoly;
    fn add(mut self, rhs: QPoly) -> QPoly {
        self += &rhs;
        self
    }
}

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { coeffs: self.coeffs.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl Sub for QPoly {
    type Output = QPoly;
    fn sub(self, rhs: QPoly) -> QPoly {
        self + (-rhs)
    }
}

impl Mul for QPoly {
    type Output = QPoly;
    fn mul(self, rhs: QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &rhs.coeffs {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Monomial,
    PowerSum,
}

impl Basis {
    fn name(self) -> &'static str {
        match self {
            Basis::Monomial => "monomial",
            Basis::PowerSum => "powersum",
        }
    }
}

/// A homogeneous symmetric function of degree `n` with `Z[q]` coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct QSymPoly {
    basis: Basis,
    degree: usize,
    coeffs: BTreeMap<Partition, QPoly>,
}

impl QSymPoly {
    pub fn zero(basis: Basis, degree: usize) -> Self {
        Self { basis, degree, coeffs: BTreeMap::new() }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Adds `c · b_λ` where `b` is this function's basis.
    pub fn add_term(&mut self, lambda: Partition, c: &QPoly) -> Result<()> {
        if lambda.size() != self.degree {
            return Err(Error::SizeMismatch(format!("{lambda:?} in a symmetric function of degree {}", self.degree)));
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.coeffs.entry(lambda.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&lambda);
        }
        Ok(())
    }

    pub fn coeff(&self, lambda: &Partition) -> QPoly {
        self.coeffs.get(lambda).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &QPoly)> {
        self.coeffs.iter()
    }

    /// Specialization `q = 1`, returned as constant coefficients.
    pub fn at_q_one(&self) -> Self {
        let mut out = Self::zero(self.basis, self.degree);
        for (l, c) in &self.coeffs {
            out.add_term(l.clone(), &QPoly::constant(c.at_one())).unwrap();
        }
        out
    }

    /// `p_1^n` expanded in monomials: coefficient of `m_μ` is `n!/Π μ_i!`.
    pub fn p1_power_monomial(n: usize) -> Self {
        let mut out = Self::zero(Basis::Monomial, n);
        for mu in partitions_unchecked(n) {
            let c = multinomial(n, mu.parts());
            out.add_term(mu, &QPoly::constant(c)).unwrap();
        }
        out
    }

    /// `h_n = Σ_λ m_λ`.
    pub fn complete_homogeneous_monomial(n: usize) -> Self {
        let mut out = Self::zero(Basis::Monomial, n);
        for mu in partitions_unchecked(n) {
            out.add_term(mu, &QPoly::constant(1)).unwrap();
        }
        out
    }

    fn require(&self, basis: Basis) -> Result<()> {
        if self.basis != basis {
            return Err(Error::BasisMismatch { expected: basis.name(), found: self.basis.name() });
        }
        Ok(())
    }
}

impl fmt::Debug for QSymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.basis {
            Basis::Monomial => "m",
            Basis::PowerSum => "p",
        };
        let terms: Vec<String> =
            self.coeffs.iter().map(|(l, c)| format!("({c:?}){sym}{}", l.to_compact_string())).collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

pub(crate) fn multinomial(n: usize, parts: &[usize]) -> BigInt {
    let fact = |k: usize| -> BigInt { (1..=k).fold(BigInt::one(), |a, i| a * i) };
    parts.iter().fold(fact(n), |acc, &p| acc / fact(p))
}

/// `⟨F, h_μ⟩`, which is the coefficient of `m_μ` in `F`.
pub fn h_dual_coefficient(f: &QSymPoly, mu: &Partition) -> Result<QPoly> {
    f.require(Basis::Monomial)?;
    if mu.size() != f.degree {
        return Err(Error::SizeMismatch(format!("{mu:?} paired with a degree {} function", f.degree)));
    }
    Ok(f.coeff(mu))
}

/// `⟨F, s_μ⟩` by the Jacobi–Trudi expansion over permutations `σ` of the rows
/// of `μ`: `Σ_σ sgn(σ) ⟨F, Π_i h_{μ_i − i + σ(i)}⟩`.
pub fn schur_inner_product(f: &QSymPoly, mu: &Partition) -> Result<QPoly> {
    f.require(Basis::Monomial)?;
    if mu.size() != f.degree {
        return Err(Error::SizeMismatch(format!("{mu:?} paired with a degree {} function", f.degree)));
    }
    let rows = mu.parts();
    let len = rows.len();
    let mut acc = QPoly::zero();
    let mut used = vec![false; len];
    let mut comp = Vec::with_capacity(len);

    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &QSymPoly,
        rows: &[usize],
        i: usize,
        used: &mut [bool],
        comp: &mut Vec<usize>,
        inversions: usize,
        acc: &mut QPoly,
    ) {
        let len = rows.len();
        if i == len {
            let lambda = Partition::from_unsorted(comp.clone());
            let c = f.coeff(&lambda);
            if !c.is_zero() {
                if inversions.is_multiple_of(2) {
                    *acc += &c;
                } else {
                    *acc += &(-c);
                }
            }
            return;
        }
        for s in 0..len {
            if used[s] {
                continue;
            }
            let entry = rows[i] as isize - i as isize + s as isize;
            if entry < 0 {
                continue;
            }
            // inversions contributed by placing s after the already-used values
            let inv = used[s + 1..].iter().filter(|&&u| u).count();
            used[s] = true;
            comp.push(entry as usize);
            rec(f, rows, i + 1, used, comp, inversions + inv, acc);
            comp.pop();
            used[s] = false;
        }
    }

    rec(f, rows, 0, &mut used, &mut comp, 0, &mut acc);
    Ok(acc)
}

/// `⟨F, s_μ⟩` for `F` in the power-sum basis: `Σ_ν c_ν χ^μ(ν)`.
pub fn schur_inner_product_powersum(f: &QSymPoly, mu: &Partition) -> Result<QPoly> {
    f.require(Basis::PowerSum)?;
    let mut acc = QPoly::zero();
    for (nu, c) in f.terms() {
        let chi = character_value(mu, nu)?;
        acc += &c.scale(&BigInt::from(chi));
    }
    Ok(acc)
}

/// Power-sum expansion of Stanley's chromatic symmetric function at `q = 1`:
/// `X_G = Σ_{S ⊆ E} (−1)^{|S|} p_{λ(S)}`.
///
/// Evaluated by grouping edge subsets by the set partition of their connected
/// components: the weight of a block `B` is the signed count `c(B)` of
/// connected spanning edge sets on `B`.
pub fn powersum_csf_q1(edges: &[(usize, usize)], n: usize) -> Result<QSymPoly> {
    check_range("n", n, 1, 10)?;
    let mut adj = vec![0u32; n];
    for &(a, b) in edges {
        if a == 0 || b == 0 || a > n || b > n || a == b {
            return Err(Error::SizeMismatch(format!("edge ({a}, {b}) on {n} vertices")));
        }
        adj[a - 1] |= 1 << (b - 1);
        adj[b - 1] |= 1 << (a - 1);
    }
    let full = (1u32 << n) - 1;
    let has_edge = |u: u32| (0..n).any(|v| u & (1 << v) != 0 && adj[v] & u != 0);

    // total(U) = Σ_{S ⊆ E(U)} (−1)^{|S|} = [E(U) = ∅]
    let total: Vec<i64> = (0..=full).map(|u| i64::from(!has_edge(u))).collect();
    let mut connected = vec![0i64; (full + 1) as usize];
    for u in 1..=full {
        let low = u & u.wrapping_neg();
        let mut s = 0i64;
        // proper subsets B of U containing the lowest vertex
        let rest = u & !low;
        let mut sub = rest;
        loop {
            let b = sub | low;
            if b != u {
                s += connected[b as usize] * total[(u & !b) as usize];
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        connected[u as usize] = total[u as usize] - s;
    }

    // expansion over set partitions, memoized on the uncovered vertex set
    let mut memo: HashMap<u32, BTreeMap<Vec<usize>, i64>> = HashMap::new();
    fn expand(
        u: u32,
        connected: &[i64],
        memo: &mut HashMap<u32, BTreeMap<Vec<usize>, i64>>,
    ) -> BTreeMap<Vec<usize>, i64> {
        if u == 0 {
            return BTreeMap::from([(vec![], 1)]);
        }
        if let Some(v) = memo.get(&u) {
            return v.clone();
        }
        let low = u & u.wrapping_neg();
        let rest = u & !low;
        let mut out: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        let mut sub = rest;
        loop {
            let b = sub | low;
            let w = connected[b as usize];
            if w != 0 {
                let size = b.count_ones() as usize;
                for (blocks, c) in expand(u & !b, connected, memo) {
                    let mut key = blocks.clone();
                    let pos = key.partition_point(|&x| x >= size);
                    key.insert(pos, size);
                    *out.entry(key).or_insert(0) += w * c;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        out.retain(|_, c| *c != 0);
        memo.insert(u, out.clone());
        out
    }

    let mut f = QSymPoly::zero(Basis::PowerSum, n);
    for (blocks, c) in expand(full, &connected, &mut memo) {
        f.add_term(Partition::new(blocks)?, &QPoly::constant(c))?;
    }
    Ok(f)
}

/// Number of ways to distribute the parts of `λ` into the rows of `μ` so that
/// row `j` sums to `μ_j`: the coefficient of `m_μ` in `p_λ`.
pub fn powersum_monomial_coefficient(lambda: &Partition, mu: &Partition) -> u64 {
    fn rec(parts: &[usize], caps: &mut Vec<usize>, memo: &mut HashMap<(usize, Vec<usize>), u64>) -> u64 {
        let Some((&first, rest)) = parts.split_first() else {
            return u64::from(caps.iter().all(|&c| c == 0));
        };
        let key = (parts.len(), caps.clone());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut total = 0;
        for j in 0..caps.len() {
            if caps[j] >= first {
                caps[j] -= first;
                total += rec(rest, caps, memo);
                caps[j] += first;
            }
        }
        memo.insert(key, total);
        total
    }
    if lambda.size() != mu.size() {
        return 0;
    }
    rec(lambda.parts(), &mut mu.parts().to_vec(), &mut HashMap::new())
}

/// Converts a power-sum expansion into the monomial basis.
pub fn powersum_to_monomial(f: &QSymPoly) -> Result<QSymPoly> {
    f.require(Basis::PowerSum)?;
    let mut out = QSymPoly::zero(Basis::Monomial, f.degree);
    for mu in partitions_unchecked(f.degree) {
        let mut c = QPoly::zero();
        for (lambda, cl) in f.terms() {
            let r = powersum_monomial_coefficient(lambda, &mu);
            if r != 0 {
                c += &cl.scale(&BigInt::from(r));
            }
        }
        out.add_term(mu, &c)?;
    }
    Ok(out)
}
