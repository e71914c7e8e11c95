//! Integer partitions, dominance order and the character theory of `S_n`.
//!
//! Partitions index both the irreducible representations of `S_n` and the
//! nilpotent orbits of `sl_n` (by Jordan type). Characters are evaluated with
//! the Murnaghan–Nakayama rule on beta-sets, memoized per
//! `(shape, remaining cycle type)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// Largest `n` for which partitions are enumerated.
pub const MAX_PARTITION_N: usize = 12;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

/// Cycle type of a permutation, i.e. a conjugacy class of `S_n`.
pub type CycleType = Partition;

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    /// Sorts the given positive parts into a partition, dropping zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        Self { parts: if n == 0 { vec![] } else { vec![n] } }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Comma-joined parts, e.g. `"2,1"`.
    pub fn to_comma_string(&self) -> String {
        join(&self.parts, ",")
    }

    /// Concatenated parts, e.g. `"21"`. Only unambiguous while all parts are < 10.
    pub fn to_compact_string(&self) -> String {
        join(&self.parts, "")
    }

    /// Multiplicity of each part size: `m[i]` counts parts equal to `i`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.parts.first().copied().unwrap_or(0) + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    /// `z_λ = Π i^{m_i} m_i!`, the order of the centralizer of a permutation of this cycle type.
    pub fn z(&self) -> u128 {
        let mut z: u128 = 1;
        for (i, &m) in self.multiplicities().iter().enumerate().skip(1) {
            for k in 1..=m {
                z *= (i as u128) * (k as u128);
            }
        }
        z
    }

    /// Size of the conjugacy class of this cycle type in `S_n`.
    pub fn class_size(&self) -> u128 {
        factorial(self.size()) / self.z()
    }

    /// Sign of a permutation with this cycle type.
    pub fn sign(&self) -> i64 {
        if (self.size() - self.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_comma_string())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_comma_string())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"2,1"`; whitespace around parts is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_usize_list(s).map_err(Error::InvalidPartition)?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// Serializes a partition as its comma-joined parts, `"2,1"`.
pub fn serialize_comma<S: serde::Serializer>(p: &Partition, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_comma_string())
}

pub(crate) fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub(crate) fn parse_usize_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All partitions of `n` in reverse-lexicographic order, `(n)` first and `(1^n)` last.
pub fn partitions_of(n: usize) -> Result<Vec<Partition>> {
    check_range("n", n, 1, MAX_PARTITION_N)?;
    Ok(partitions_unchecked(n))
}

pub(crate) fn partitions_unchecked(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `λ ⊴ μ`: every partial sum of `λ` is bounded by the corresponding partial sum of `μ`.
pub fn dominance_leq(lambda: &Partition, mu: &Partition) -> Result<bool> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!("cannot compare {lambda:?} and {mu:?} in dominance order")));
    }
    let len = lambda.len().max(mu.len());
    let (mut a, mut b) = (0, 0);
    for i in 0..len {
        a += lambda.parts.get(i).copied().unwrap_or(0);
        b += mu.parts.get(i).copied().unwrap_or(0);
        if a > b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Transpose of the Young diagram.
pub fn conjugate(lambda: &Partition) -> Partition {
    let first = lambda.parts.first().copied().unwrap_or(0);
    let parts = (1..=first).map(|c| lambda.parts.iter().filter(|&&p| p >= c).count()).collect();
    Partition { parts }
}

/// Number of standard Young tableaux of shape `λ`, i.e. `χ^λ(1^n)`.
pub fn hook_length_dimension(lambda: &Partition) -> u128 {
    let conj = conjugate(lambda);
    let mut hooks: u128 = 1;
    for (i, &row) in lambda.parts.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = conj.parts[j] - i - 1;
            hooks *= (arm + leg + 1) as u128;
        }
    }
    factorial(lambda.size()) / hooks
}

type CharKey = (Vec<u8>, Vec<u8>);

fn char_cache() -> &'static Mutex<HashMap<CharKey, i64>> {
    static CACHE: OnceLock<Mutex<HashMap<CharKey, i64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `χ^λ(μ)` by the Murnaghan–Nakayama rule.
pub fn character_value(lambda: &Partition, mu: &CycleType) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!("character of {lambda:?} evaluated on class {mu:?}")));
    }
    Ok(mn_rec(&lambda.parts, &mu.parts))
}

fn mn_rec(shape: &[usize], cycles: &[usize]) -> i64 {
    if cycles.is_empty() {
        return if shape.is_empty() { 1 } else { 0 };
    }
    let key: CharKey = (shape.iter().map(|&x| x as u8).collect(), cycles.iter().map(|&x| x as u8).collect());
    if let Some(&v) = char_cache().lock().expect("character cache poisoned").get(&key) {
        return v;
    }

    let r = cycles[0];
    let rest = &cycles[1..];
    let len = shape.len();
    // beta-set: first-column hook lengths, strictly decreasing
    let beta: Vec<usize> = shape.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beta.iter().filter(|&&c| c > target && c < b).count();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        let mut nb = beta.clone();
        nb[idx] = target;
        nb.sort_unstable_by(|x, y| y.cmp(x));
        let l = nb.len();
        let new_shape: Vec<usize> = nb.iter().enumerate().map(|(i, &x)| x - (l - 1 - i)).filter(|&p| p > 0).collect();
        total += sign * mn_rec(&new_shape, rest);
    }

    char_cache().lock().expect("character cache poisoned").insert(key, total);
    total
}

/// A subset `J ⊆ {1, …, n−1}` of simple transpositions `s_j = (j, j+1)`,
/// generating the Young subgroup `W_J`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReflectionSet {
    n: usize,
    members: BTreeSet<usize>,
}

impl ReflectionSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&j| j == 0 || j >= n) {
            return Err(Error::InvalidSubset(format!("{bad} is not in 1..={}", n.saturating_sub(1))));
        }
        Ok(Self { n, members })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, members: BTreeSet::new() }
    }

    pub fn full(n: usize) -> Self {
        Self { n, members: (1..n).collect() }
    }

    /// Parses `"1,2"`; the empty string is the empty subset.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let items = parse_usize_list(s).map_err(Error::InvalidSubset)?;
        Self::new(n, items)
    }

    /// All `2^{n−1}` subsets, ordered by bitmask.
    pub fn all(n: usize) -> Vec<Self> {
        let r = n.saturating_sub(1);
        (0u32..(1 << r))
            .map(|mask| Self { n, members: (1..n).filter(|j| mask & (1 << (j - 1)) != 0).collect() })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.members.contains(&j)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Block sizes of the Young subgroup `W_J ≅ S_{b_1} × … × S_{b_r}`.
    pub fn blocks(&self) -> Vec<usize> {
        if self.n == 0 {
            return vec![];
        }
        let mut blocks = vec![1];
        for j in 1..self.n {
            if self.members.contains(&j) {
                *blocks.last_mut().unwrap() += 1;
            } else {
                blocks.push(1);
            }
        }
        blocks
    }

    pub fn group_order(&self) -> u128 {
        self.blocks().into_iter().map(factorial).product()
    }

    pub fn to_comma_string(&self) -> String {
        join(&self.members.iter().copied().collect::<Vec<_>>(), ",")
    }
}

impl fmt::Debug for ReflectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J{{{}}}", self.to_comma_string())
    }
}

/// Dimension of the `W_J`-fixed subspace of the irreducible representation `λ`.
///
/// Averages `χ^λ` over `W_J` class by class: a class of the Young subgroup is
/// a tuple of per-block cycle types, of size `Π b_i!/z_{ν_i}`.
pub fn invariant_dim(lambda: &Partition, j: &ReflectionSet) -> Result<u64> {
    if lambda.size() != j.n() {
        return Err(Error::SizeMismatch(format!("{lambda:?} is not a partition of {}", j.n())));
    }
    let blocks = j.blocks();
    let per_block: Vec<Vec<(Partition, u128)>> = blocks
        .iter()
        .map(|&b| {
            partitions_unchecked(b)
                .into_iter()
                .map(|nu| {
                    let size = nu.class_size();
                    (nu, size)
                })
                .collect()
        })
        .collect();

    fn walk(
        lambda: &Partition,
        per_block: &[Vec<(Partition, u128)>],
        parts: &mut Vec<usize>,
        weight: u128,
        acc: &mut i128,
    ) {
        match per_block.split_first() {
            None => {
                let mu = Partition::from_unsorted(parts.clone());
                let chi = mn_rec(&lambda.parts, &mu.parts);
                *acc += chi as i128 * weight as i128;
            }
            Some((classes, rest)) => {
                for (nu, size) in classes {
                    let before = parts.len();
                    parts.extend_from_slice(nu.parts());
                    walk(lambda, rest, parts, weight * size, acc);
                    parts.truncate(before);
                }
            }
        }
    }

    let mut acc = 0i128;
    walk(lambda, &per_block, &mut Vec::new(), 1, &mut acc);
    let order = j.group_order() as i128;
    if acc < 0 || acc % order != 0 {
        return Err(Error::Consistency(format!("character average of {lambda:?} over {j:?} is {acc}/{order}")));
    }
    Ok((acc / order) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Coin-change count of partitions, independent of the enumerator.
    fn partition_count(n: usize) -> usize {
        let mut ways = vec![0usize; n + 1];
        ways[0] = 1;
        for part in 1..=n {
            for total in part..=n {
                ways[total] += ways[total - part];
            }
        }
        ways[n]
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(partitions_of(1).unwrap(), vec![p(&[1])]);
        assert_eq!(partitions_of(4).unwrap().len(), 5);
        assert_eq!(partitions_of(8).unwrap().len(), 22);
        for n in 1..=12 {
            assert_eq!(partitions_of(n).unwrap().len(), partition_count(n));
        }
        assert!(partitions_of(0).is_err());
        assert!(partitions_of(13).is_err());
    }

    #[test]
    fn enumeration_is_reverse_lex_and_unique() {
        let ps = partitions_of(7).unwrap();
        for w in ps.windows(2) {
            assert!(w[0].parts() > w[1].parts());
        }
        assert_eq!(ps.first().unwrap(), &Partition::row(7));
        assert_eq!(ps.last().unwrap(), &Partition::column(7));
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&p(&[2, 1]), &p(&[3])).unwrap());
        assert!(!dominance_leq(&p(&[3]), &p(&[2, 1])).unwrap());
        assert!(dominance_leq(&p(&[2, 2]), &p(&[3, 1])).unwrap());
        assert!(dominance_leq(&p(&[2, 1]), &p(&[3, 1])).is_err());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&Partition::row(5)), Partition::column(5));
        assert_eq!(conjugate(&p(&[2, 1])), p(&[2, 1]));
        assert_eq!(conjugate(&p(&[3, 1])), p(&[2, 1, 1]));
    }

    #[test]
    fn dominance_antisymmetric_and_reversed_by_conjugation() {
        for n in 1..=8 {
            let ps = partitions_of(n).unwrap();
            for a in &ps {
                for b in &ps {
                    let ab = dominance_leq(a, b).unwrap();
                    let ba = dominance_leq(b, a).unwrap();
                    if ab && ba {
                        assert_eq!(a, b);
                    }
                    assert_eq!(ab, dominance_leq(&conjugate(b), &conjugate(a)).unwrap());
                }
            }
        }
    }

    #[test]
    fn trivial_and_sign_characters() {
        for n in 1..=7 {
            for mu in partitions_of(n).unwrap() {
                assert_eq!(character_value(&Partition::row(n), &mu).unwrap(), 1);
                assert_eq!(character_value(&Partition::column(n), &mu).unwrap(), mu.sign());
            }
        }
    }

    /// Trace of the 3-cycle on the standard representation of `S_3`, realized
    /// on the basis `e1 − e2, e2 − e3` of the sum-zero subspace.
    #[test]
    fn standard_rep_of_s3_on_three_cycle() {
        // (1 2 3): e1→e2, e2→e3, e3→e1.
        // v1 = e1−e2 ↦ e2−e3 = v2; v2 = e2−e3 ↦ e3−e1 = −v1−v2.
        let m = [[0i64, -1], [1, -1]];
        let trace = m[0][0] + m[1][1];
        assert_eq!(character_value(&p(&[2, 1]), &p(&[3])).unwrap(), trace);
        assert_eq!(trace, -1);
    }

    #[test]
    fn column_orthogonality_and_dimension_sum() {
        for n in 1..=7 {
            let ps = partitions_of(n).unwrap();
            let nf = factorial(n) as i128;
            for a in &ps {
                for b in &ps {
                    let s: i128 = ps
                        .iter()
                        .map(|mu| {
                            mu.class_size() as i128
                                * character_value(a, mu).unwrap() as i128
                                * character_value(b, mu).unwrap() as i128
                        })
                        .sum();
                    assert_eq!(s, if a == b { nf } else { 0 }, "{a:?} {b:?}");
                }
            }
            let id = Partition::column(n);
            let sq: i128 = ps.iter().map(|l| (character_value(l, &id).unwrap() as i128).pow(2)).sum();
            assert_eq!(sq, nf);
            for l in &ps {
                assert_eq!(character_value(l, &id).unwrap() as u128, hook_length_dimension(l));
            }
        }
    }

    #[test]
    fn character_at_n12_is_exact() {
        let lambda = p(&[4, 3, 2, 2, 1]);
        let id = Partition::column(12);
        assert_eq!(character_value(&lambda, &id).unwrap() as u128, hook_length_dimension(&lambda));
    }

    #[test]
    fn invariant_dim_examples() {
        for n in 2..=6 {
            for j in ReflectionSet::all(n) {
                assert_eq!(invariant_dim(&Partition::row(n), &j).unwrap(), 1);
                let expect_sign = if j.is_empty() { 1 } else { 0 };
                assert_eq!(invariant_dim(&Partition::column(n), &j).unwrap(), expect_sign);
            }
        }
        let j1 = ReflectionSet::new(3, [1]).unwrap();
        assert_eq!(invariant_dim(&p(&[2, 1]), &j1).unwrap(), 1);
    }

    #[test]
    fn invariant_dim_extremes() {
        for n in 2..=7 {
            for l in partitions_of(n).unwrap() {
                let empty = invariant_dim(&l, &ReflectionSet::empty(n)).unwrap();
                assert_eq!(empty as u128, hook_length_dimension(&l));
                let full = invariant_dim(&l, &ReflectionSet::full(n)).unwrap();
                assert_eq!(full, u64::from(l == Partition::row(n)));
            }
        }
    }

    #[test]
    fn reflection_set_blocks() {
        let j = ReflectionSet::new(5, [1, 3, 4]).unwrap();
        assert_eq!(j.blocks(), vec![2, 3]);
        assert_eq!(j.group_order(), 12);
        assert!(ReflectionSet::new(3, [3]).is_err());
        assert_eq!(ReflectionSet::parse(3, "").unwrap(), ReflectionSet::empty(3));
        assert_eq!(ReflectionSet::all(4).len(), 8);
    }

    #[test]
    fn parse_and_display() {
        let l: Partition = "3, 1,1".parse().unwrap();
        assert_eq!(l, p(&[3, 1, 1]));
        assert_eq!(l.to_string(), "3,1,1");
        assert_eq!(l.to_compact_string(), "311");
        assert!("1,2".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
    }
}
