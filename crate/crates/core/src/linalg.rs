//! Exact linear algebra over `ℚ` and over prime fields.
//!
//! Dense row-major matrices of `BigRational`; modular routines work on `u64`
//! residues with primes below `2^62` so products fit in `u128`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rat>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let x = &m[(r, j)] * &inv;
                m[(r, j)] = x;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let x = &f * &m[(r, j)];
                    m[(i, j)] -= x;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : Ax = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some `x` with `Ax = b`, free variables set to zero.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in (c + 1)..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..m.cols {
                    let x = &f * &m[(c, j)];
                    m[(i, j)] -= x;
                }
            }
        }
        det
    }

    /// Pivots of the `LDLᵀ` factorization without pivoting, stopping after the
    /// first nonpositive one. A symmetric matrix is positive definite iff this
    /// returns `size` pivots, all positive.
    pub fn ldl_pivots(&self) -> Vec<Rat> {
        assert!(self.is_symmetric(), "LDLᵀ of a non-symmetric matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let d = a[(k, k)].clone();
            let positive = d.is_positive();
            pivots.push(d.clone());
            if !positive {
                break;
            }
            for i in (k + 1)..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &d;
                for j in (k + 1)..n {
                    let x = &f * &a[(k, j)];
                    a[(i, j)] -= x;
                }
            }
        }
        pivots
    }

    pub fn is_positive_definite(&self) -> bool {
        let p = self.ldl_pivots();
        p.len() == self.rows && p.iter().all(Signed::is_positive)
    }

    /// `(positive, negative, zero)` inertia by congruence diagonalization.
    pub fn signature(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric(), "signature of a non-symmetric matrix");
        let n = self.rows;
        let mut a = self.clone();
        let (mut pos, mut neg) = (0, 0);
        let mut k = 0;
        while k < n {
            if let Some(p) = (k..n).find(|&i| !a[(i, i)].is_zero()) {
                a.swap_rows(p, k);
                a.swap_cols(p, k);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero())
            {
                // row_i += row_j, col_i += col_j makes a_ii = 2 a_ij ≠ 0
                for c in 0..n {
                    let x = a[(j, c)].clone();
                    a[(i, c)] += x;
                }
                for r in 0..n {
                    let x = a[(r, j)].clone();
                    a[(r, i)] += x;
                }
                a.swap_rows(i, k);
                a.swap_cols(i, k);
            } else {
                break;
            }
            let d = a[(k, k)].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            // trailing block becomes the Schur complement, still symmetric
            for i in (k + 1)..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = &a[(i, k)] / &d;
                for j in (k + 1)..n {
                    let x = &f * &a[(k, j)];
                    a[(i, j)] -= x;
                }
            }
            for i in (k + 1)..n {
                a[(k, i)] = Rat::zero();
                a[(i, k)] = Rat::zero();
            }
            k += 1;
        }
        (pos, neg, n - pos - neg)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

/// Basis of the intersection of the nullspaces of the given maps, each a
/// matrix with `dim` columns.
pub fn common_kernel(maps: &[Matrix], dim: usize) -> Vec<Vec<Rat>> {
    let rows: Vec<Vec<Rat>> = maps
        .iter()
        .flat_map(|m| {
            assert_eq!(m.cols(), dim);
            (0..m.rows()).map(move |r| m.row(r).to_vec())
        })
        .collect();
    if rows.is_empty() {
        return (0..dim).map(|i| (0..dim).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    }
    Matrix::from_rows(rows).nullspace()
}

// ---------------------------------------------------------------------------
// prime fields

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // these bases are deterministic for all 64-bit inputs
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Largest primes below `2^62`, in decreasing order.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Image of a rational in `F_p`, or `None` if `p` divides the denominator.
pub fn rat_mod(x: &Rat, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_u64()?;
    let den = x.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, inv_mod(den, p), p))
}

/// Row-reduces in place over `F_p`; returns the pivot columns.
pub fn rref_mod(m: &mut [Vec<u64>], cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut().skip(c) {
            *x = mul_mod(*x, inv, p);
        }
        let (head, tail) = m.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(rest.iter_mut()) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(pivot_row.iter()).skip(c) {
                if y != 0 {
                    *x = (*x + p - mul_mod(f, y, p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod(m: &[Vec<u64>], cols: usize, p: u64) -> usize {
    let mut w = m.to_vec();
    rref_mod(&mut w, cols, p).len()
}

/// Solution of `Ax = b` over `F_p` with free variables zero, plus the pivot
/// columns; `None` if inconsistent.
pub fn solve_mod(a: &[Vec<u64>], b: &[u64], cols: usize, p: u64) -> Option<(Vec<u64>, Vec<usize>)> {
    let mut aug: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref_mod(&mut aug, cols + 1, p);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols];
    }
    Some((x, pivots))
}

/// The unique `n/d` with `|n|, d ≤ √(m/2)` and `n ≡ a·d (mod m)`, if any.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound {
        return None;
    }
    if !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Rat::new(r1, s1))
}

/// Sparse linear system over `ℚ`: each row is a list of `(column, coefficient)`.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    pub cols: usize,
    pub rows: Vec<Vec<(usize, Rat)>>,
    pub rhs: Vec<Rat>,
}

impl SparseSystem {
    pub fn new(cols: usize) -> Self {
        Self { cols, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<(usize, Rat)>, rhs: Rat) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn is_satisfied_by(&self, x: &[Rat]) -> bool {
        self.rows
            .iter()
            .zip(&self.rhs)
            .all(|(row, b)| row.iter().fold(Rat::zero(), |acc, (c, a)| acc + a * &x[*c]) == *b)
    }

    fn reduce_mod(&self, p: u64) -> Option<(Vec<Vec<u64>>, Vec<u64>)> {
        let mut a = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut dense = vec![0u64; self.cols];
            for (c, x) in row {
                dense[*c] = (dense[*c] + rat_mod(x, p)?) % p;
            }
            a.push(dense);
        }
        let b = self.rhs.iter().map(|x| rat_mod(x, p)).collect::<Option<Vec<_>>>()?;
        Some((a, b))
    }

    /// Nullity of the coefficient matrix over `F_p`; an upper bound for the
    /// nullity over `ℚ`.
    pub fn nullity_mod(&self, p: u64) -> Option<usize> {
        let (a, _) = self.reduce_mod(p)?;
        Some(self.cols - rank_mod(&a, self.cols, p))
    }

    /// A rational solution, found by multi-modular elimination with rational
    /// reconstruction and checked exactly; falls back to exact elimination.
    pub fn solve(&self) -> Option<Vec<Rat>> {
        let primes = large_primes(6);
        let mut modulus = BigInt::one();
        let mut residues: Vec<BigInt> = vec![BigInt::zero(); self.cols];
        let mut reference_pivots: Option<Vec<usize>> = None;
        for &p in &primes {
            let Some((a, b)) = self.reduce_mod(p) else { continue };
            let Some((x, pivots)) = solve_mod(&a, &b, self.cols, p) else {
                // inconsistent mod p: either unlucky or inconsistent over ℚ
                return self.solve_exact();
            };
            match &reference_pivots {
                None => reference_pivots = Some(pivots),
                Some(r) if *r != pivots => return self.solve_exact(),
                _ => {}
            }
            // CRT-combine into residues modulo modulus · p
            let pb = BigInt::from(p);
            let minv = BigInt::from(inv_mod((&modulus % &pb).to_u64().unwrap(), p));
            for (res, &xi) in residues.iter_mut().zip(&x) {
                let diff = (BigInt::from(xi) - &*res).mod_floor(&pb);
                *res += &modulus * ((diff * &minv) % &pb);
            }
            modulus *= &pb;
            let candidate: Option<Vec<Rat>> = residues.iter().map(|r| rational_reconstruction(r, &modulus)).collect();
            if let Some(c) = candidate {
                if self.is_satisfied_by(&c) {
                    return Some(c);
                }
            }
        }
        self.solve_exact()
    }

    pub fn solve_exact(&self) -> Option<Vec<Rat>> {
        let mut dense = Matrix::zeros(self.rows.len(), self.cols);
        for (i, row) in self.rows.iter().enumerate() {
            for (c, x) in row {
                dense[(i, *c)] += x;
            }
        }
        dense.solve(&self.rhs)
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(m: &[Vec<BigInt>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}
