//! Type A Springer correspondence and the support criterion.
//!
//! `λ_H` is the Jordan type of a generic nilpotent matrix supported on the
//! `H^⊥` pattern. An irreducible `λ` may occur in the cohomology of regular
//! semisimple Hessenberg varieties only if its orbit meets `H^⊥`, i.e. only if
//! its Springer orbit label is dominated by `λ_H`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dotchar::GradedMultiplicity;
use crate::error::{check_range, Error, Result};
use crate::hessenberg::{annihilator_pattern, HessenbergFunction};
use crate::linalg::{mul_mod, next_prime, rank_mod, Matrix};
use crate::partitions::{conjugate, dominance_leq, partitions_unchecked, Partition};

/// Sizes of Jordan blocks, as a partition of the matrix size.
pub type JordanType = Partition;

pub const DEFAULT_SEED: u64 = 0x4865_7373_4C61_6221;
pub const MIN_SAMPLES: usize = 32;
/// Required share of samples attaining the maximum, in percent.
pub const AGREEMENT_PERCENT: usize = 90;
const MAX_ATTEMPTS: usize = 4;

/// Blocks of size `≥ k` number `r_{k−1} − r_k`, where `r_k = rank(M^k)`.
fn partition_from_ranks(n: usize, ranks: &[usize]) -> Result<JordanType> {
    // ranks[k] = rank(M^k), ranks[0] = n, ending in 0
    if ranks.last() != Some(&0) {
        return Err(Error::NotNilpotent);
    }
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for k in 1..=at_least.len() {
        let next = at_least.get(k).copied().unwrap_or(0);
        let exactly = at_least[k - 1] - next;
        parts.extend(std::iter::repeat_n(k, exactly));
    }
    let jt = Partition::from_unsorted(parts);
    debug_assert_eq!(jt.size(), n);
    Ok(jt)
}

/// Jordan type of a nilpotent rational matrix.
pub fn jordan_type(m: &Matrix) -> Result<JordanType> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::SizeMismatch(format!("{}x{} is not square", n, m.cols())));
    }
    let mut ranks = vec![n];
    let mut power = Matrix::identity(n);
    for _ in 0..n {
        power = power.mul(m);
        let r = power.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    partition_from_ranks(n, &ranks)
}

/// Jordan type of a nilpotent matrix over `F_p`.
pub fn jordan_type_mod(m: &[Vec<u64>], p: u64) -> Result<JordanType> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::SizeMismatch("matrix is not square".into()));
    }
    let mut ranks = vec![n];
    let mut power = m.to_vec();
    for step in 0..n {
        let r = rank_mod(&power, n, p);
        ranks.push(r);
        if r == 0 || step + 1 == n {
            break;
        }
        power = mat_mul_mod(&power, m, p);
    }
    partition_from_ranks(n, &ranks)
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = (out[i][j] + mul_mod(a[i][k], b[k][j], p)) % p;
            }
        }
    }
    out
}

/// How `λ_H` was obtained by sampling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplingReport {
    pub seed: u64,
    pub prime: u64,
    pub samples: usize,
    /// Samples whose Jordan type equals the maximum.
    pub agreeing: usize,
    pub attempts: usize,
    #[serde(serialize_with = "crate::partitions::serialize_comma")]
    pub jordan_type: JordanType,
}

fn stream_id(h: &HessenbergFunction) -> u64 {
    h.values().iter().fold(0u64, |acc, &v| acc.wrapping_mul(16).wrapping_add(v as u64))
}

/// Dominance maximum of the samples, if one sample dominates all others.
fn dominance_max(types: &[JordanType]) -> Option<JordanType> {
    let mut best = types.first()?.clone();
    for t in types {
        if dominance_leq(&best, t).ok()? {
            best = t.clone();
        }
    }
    types.iter().all(|t| dominance_leq(t, &best).unwrap_or(false)).then_some(best)
}

/// `λ_H` by sampling matrices with uniform nonzero entries over `F_p` on the
/// `H^⊥` pattern, taking the dominance maximum.
pub fn generic_jordan_type_sampled(h: &HessenbergFunction, seed: u64) -> Result<SamplingReport> {
    let n = h.n();
    check_range("n", n, 1, 9)?;
    let pattern = annihilator_pattern(h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(h));
    let mut p = next_prime((n * n) as u64);
    for attempt in 1..=MAX_ATTEMPTS {
        let types: Vec<JordanType> = (0..MIN_SAMPLES)
            .map(|_| {
                let mut m = vec![vec![0u64; n]; n];
                for &(i, j) in &pattern.positions {
                    m[i - 1][j - 1] = rng.random_range(1..p);
                }
                jordan_type_mod(&m, p)
            })
            .collect::<Result<_>>()?;
        if let Some(best) = dominance_max(&types) {
            let agreeing = types.iter().filter(|t| **t == best).count();
            if agreeing * 100 >= AGREEMENT_PERCENT * types.len() {
                return Ok(SamplingReport {
                    seed,
                    prime: p,
                    samples: types.len(),
                    agreeing,
                    attempts: attempt,
                    jordan_type: best,
                });
            }
        }
        p = next_prime(p * 16);
    }
    Err(Error::UnstableSampling(format!(
        "{h:?}: no Jordan type reached {AGREEMENT_PERCENT}% of {MIN_SAMPLES} samples \
         after {MAX_ATTEMPTS} attempts (last p = {p}, seed = {seed})"
    )))
}

/// `λ_H` using the default seed.
pub fn generic_jordan_type(h: &HessenbergFunction) -> Result<JordanType> {
    Ok(generic_jordan_type_sampled(h, DEFAULT_SEED)?.jordan_type)
}

/// `λ_H` without sampling, as the chain shape of the poset `i ≺ j ⇔ j > h(i)`.
///
/// `H^⊥` is the incidence pattern of this poset, so a generic matrix on it has
/// Jordan type whose first `k` parts sum to the largest union of `k` chains,
/// which is the largest subset of width at most `k`.
pub fn chain_shape(h: &HessenbergFunction) -> Result<JordanType> {
    let n = h.n();
    check_range("n", n, 1, 12)?;
    let less = |i: usize, j: usize| j > h.at(i);
    // width of a vertex set = largest antichain inside it
    let mut width = vec![0usize; 1 << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        // antichains through `low` avoid everything comparable to it
        let mut compatible = rest;
        for j in 0..n {
            if rest >> j & 1 == 1 && (less(low + 1, j + 1) || less(j + 1, low + 1)) {
                compatible &= !(1 << j);
            }
        }
        width[mask] = width[rest].max(1 + width[compatible]);
    }
    let mut best = vec![0usize; n + 1];
    for (mask, &w) in width.iter().enumerate() {
        let size = mask.count_ones() as usize;
        for slot in best.iter_mut().skip(w.max(1)) {
            *slot = (*slot).max(size);
        }
    }
    let parts: Vec<usize> = (1..=n).map(|k| best[k] - best[k - 1]).filter(|&x| x > 0).collect();
    Partition::new(parts)
}

/// Whether the nilpotent orbit of Jordan type `λ` meets `H^⊥`.
pub fn orbit_meets_annihilator(lambda: &Partition, h: &HessenbergFunction) -> Result<bool> {
    orbit_meets_given(lambda, h, &generic_jordan_type(h)?)
}

fn orbit_meets_given(lambda: &Partition, h: &HessenbergFunction, lambda_h: &JordanType) -> Result<bool> {
    if lambda.size() != h.n() {
        return Err(Error::SizeMismatch(format!("{lambda:?} for n = {}", h.n())));
    }
    dominance_leq(lambda, lambda_h)
}

/// How irreducibles are matched with nilpotent orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpringerConvention {
    /// Trivial representation ↔ zero orbit: irreducible `λ` labels orbit `λ'`.
    Fourier,
    /// Irreducible `λ` labels orbit `λ`. Used only as a falsification control.
    Unconjugated,
}

impl SpringerConvention {
    pub fn orbit_of(self, lambda: &Partition) -> Partition {
        match self {
            Self::Fourier => conjugate(lambda),
            Self::Unconjugated => lambda.clone(),
        }
    }
}

/// Irreducibles whose Springer orbit meets `H^⊥`, in reverse-lex order.
pub fn allowed_irreps(h: &HessenbergFunction) -> Result<Vec<Partition>> {
    let lambda_h = generic_jordan_type(h)?;
    allowed_irreps_given(h, &lambda_h, SpringerConvention::Fourier)
}

pub fn allowed_irreps_given(
    h: &HessenbergFunction,
    lambda_h: &JordanType,
    convention: SpringerConvention,
) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for lambda in partitions_unchecked(h.n()) {
        if orbit_meets_given(&convention.orbit_of(&lambda), h, lambda_h)? {
            out.push(lambda);
        }
    }
    Ok(out)
}

/// Irreducibles present in the cohomology whose orbit misses `H^⊥`.
pub fn support_violations(
    mult: &GradedMultiplicity,
    lambda_h: &JordanType,
    convention: SpringerConvention,
) -> Result<Vec<Partition>> {
    let allowed = allowed_irreps_given(&mult.h, lambda_h, convention)?;
    Ok(mult.support().into_iter().filter(|l| !allowed.contains(l)).collect())
}

/// Exhaustive search over all matrices on `H^⊥` with entries in `F_p`.
pub fn brute_force_orbit_oracle(lambda: &Partition, h: &HessenbergFunction, p: u64) -> Result<bool> {
    let n = h.n();
    check_range("n", n, 1, 4)?;
    if ![2, 3, 5].contains(&p) {
        return Err(Error::OutOfRange { what: "p", value: p as i64, min: 2, max: 5 });
    }
    if lambda.size() != n {
        return Err(Error::SizeMismatch(format!("{lambda:?} for n = {n}")));
    }
    let positions: Vec<(usize, usize)> = annihilator_pattern(h).positions.into_iter().collect();
    let total = p.pow(positions.len() as u32);
    for code in 0..total {
        let mut m = vec![vec![0u64; n]; n];
        let mut c = code;
        for &(i, j) in &positions {
            m[i - 1][j - 1] = c % p;
            c /= p;
        }
        if jordan_type_mod(&m, p)? == *lambda {
            return Ok(true);
        }
    }
    Ok(false)
}
