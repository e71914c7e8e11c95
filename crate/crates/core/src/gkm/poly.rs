//! Sparse polynomials with rational coefficients in a handful of variables.
//!
//! Monomials are packed into a `u64`, eight bits per exponent, with variable
//! 0 in the most significant byte so that key order is lexicographic.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::Rat;

pub const MAX_VARS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    fn shift(i: usize) -> u32 {
        8 * (MAX_VARS - 1 - i) as u32
    }

    pub fn var(i: usize) -> Self {
        Mono(1 << Self::shift(i))
    }

    pub fn from_exponents(e: &[u8]) -> Self {
        assert!(e.len() <= MAX_VARS);
        Mono(e.iter().enumerate().fold(0, |acc, (i, &x)| acc | (x as u64) << Self::shift(i)))
    }

    pub fn exp(self, i: usize) -> u8 {
        (self.0 >> Self::shift(i)) as u8
    }

    pub fn degree(self) -> usize {
        self.0.to_be_bytes().iter().map(|&b| b as usize).sum()
    }

    pub fn div_var(self, i: usize) -> Self {
        debug_assert!(self.exp(i) > 0);
        Mono(self.0 - Self::var(i).0)
    }
}

impl std::ops::Mul for Mono {
    type Output = Self;

    /// Packed exponents add bytewise; each must stay below 256.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Self) -> Self {
        Mono(self.0 + other.0)
    }
}

/// All monomials of total degree `d` in `nvars` variables, in decreasing lex order.
pub fn monomials(nvars: usize, d: usize) -> Vec<Mono> {
    fn rec(i: usize, nvars: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Mono>) {
        if i + 1 == nvars {
            cur.push(left as u8);
            out.push(Mono::from_exponents(cur));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u8);
            rec(i + 1, nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Mono::ONE);
        }
        return out;
    }
    rec(0, nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn monomial_count(nvars: usize, d: usize) -> usize {
    if nvars == 0 {
        return usize::from(d == 0);
    }
    // C(d + nvars − 1, nvars − 1)
    (1..nvars).fold(1usize, |acc, i| acc * (d + i) / i)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Mono, Rat>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            let vars: Vec<String> = (0..self.nvars)
                .filter(|&i| m.exp(i) > 0)
                .map(|i| match m.exp(i) {
                    1 => format!("t{}", i + 1),
                    e => format!("t{}^{e}", i + 1),
                })
                .collect();
            match (a.is_one(), vars.is_empty()) {
                (true, false) => write!(f, "{}", vars.join("*"))?,
                (_, true) => write!(f, "{a}")?,
                (false, false) => write!(f, "{a}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Mono::ONE, c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = Self::zero(nvars);
        p.add_term(Mono::var(i), Rat::one());
        p
    }

    /// `Σ c_i x_i`.
    pub fn linear(coeffs: &[Rat]) -> Self {
        let mut p = Self::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Mono::var(i), c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mono, &Rat)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, m: Mono) -> Rat {
        self.terms.get(&m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.coeff(Mono::ONE)
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rat) {
        debug_assert_eq!(self.nvars, other.nvars);
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(*m, x * c);
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(*m1 * *m2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(Rat::zero(), |acc, (m, c)| {
            let v = (0..self.nvars).fold(c.clone(), |v, i| {
                let e = m.exp(i) as i32;
                if e == 0 {
                    v
                } else {
                    v * num_traits::pow::Pow::pow(&point[i], e as u32)
                }
            });
            acc + v
        })
    }

    /// `f(g_0, …, g_{k−1})`; the images share their variable count.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, |g| g.nvars);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|g| vec![Poly::one(g.nvars)]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for i in 0..self.nvars {
                let e = m.exp(i) as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e]);
                }
            }
            out.add_scaled(&term, &Rat::one());
        }
        out
    }

    /// Exact quotient by a nonzero linear form, or `None` if it does not divide.
    pub fn div_linear(&self, l: &LinearForm) -> Option<Poly> {
        let p = l.pivot();
        let ap = l.coeffs[p].clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        // repeatedly cancel a term of highest degree in the pivot variable
        while let Some((m, c)) =
            rem.terms.iter().filter(|(m, _)| m.exp(p) > 0).max_by_key(|(m, _)| m.exp(p)).map(|(m, c)| (*m, c.clone()))
        {
            let qm = m.div_var(p);
            let qc = c / &ap;
            for (i, a) in l.coeffs.iter().enumerate() {
                if !a.is_zero() {
                    rem.add_term(qm * Mono::var(i), -(a * &qc));
                }
            }
            quot.add_term(qm, qc);
        }
        rem.is_zero().then_some(quot)
    }

    /// Restriction to the hyperplane `l = 0`, by eliminating the pivot variable.
    pub fn restrict(&self, l: &LinearForm) -> Poly {
        self.substitute(&l.elimination_images())
    }
}

/// A nonzero linear form `Σ c_i x_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearForm {
    pub coeffs: Vec<Rat>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(coeffs.iter().any(|c| !c.is_zero()), "zero linear form");
        Self { coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    /// Prefers a variable with coefficient `±1`.
    pub fn pivot(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| c.abs().is_one())
            .or_else(|| self.coeffs.iter().position(|c| !c.is_zero()))
            .unwrap()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::linear(&self.coeffs)
    }

    pub fn is_proportional(&self, other: &Self) -> bool {
        let p = self.pivot();
        if other.coeffs[p].is_zero() {
            return false;
        }
        let r = &other.coeffs[p] / &self.coeffs[p];
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a * &r == *b)
    }

    /// Images of the variables under `x_p ↦ −(Σ_{i≠p} c_i x_i)/c_p`.
    pub fn elimination_images(&self) -> Vec<Poly> {
        let n = self.nvars();
        let p = self.pivot();
        let cp = self.coeffs[p].clone();
        (0..n)
            .map(|i| {
                if i != p {
                    return Poly::var(n, i);
                }
                let mut img = Poly::zero(n);
                for (j, c) in self.coeffs.iter().enumerate() {
                    if j != p {
                        img.add_term(Mono::var(j), -(c / &cp));
                    }
                }
                img
            })
            .collect()
    }
}
