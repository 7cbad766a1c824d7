//! Partitions, dominance, tableau counts and the dimension identities of
//! skew Howe duality.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition stored without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Builds a partition from weakly decreasing parts; trailing zeros are dropped.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Sorts arbitrary nonnegative entries into a partition.
    pub fn sorted_from(entries: &[usize]) -> Self {
        let mut parts: Vec<usize> = entries.iter().copied().filter(|&x| x > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Result<Vec<usize>> {
        if self.len() > len {
            return Err(Error::Precondition(format!(
                "partition {:?} has more than {len} parts",
                self.0
            )));
        }
        let mut out = self.0.clone();
        out.resize(len, 0);
        Ok(out)
    }

    /// The conjugate partition: `result_k = #{i : parts_i >= k}`.
    pub fn transpose(&self) -> Partition {
        let cols = self.largest();
        Partition((1..=cols).map(|k| self.0.iter().filter(|&&p| p >= k).count()).collect())
    }

    /// `sum_k (transpose_k)^2 = sum_{i,j} min(parts_i, parts_j)`.
    pub fn sum_conjugate_squares(&self) -> usize {
        self.transpose().0.iter().map(|c| c * c).sum()
    }

    /// Dimension of the nilpotent orbit of Jordan type `self` in `gl_N`.
    pub fn nilpotent_orbit_dim(&self) -> usize {
        let n = self.size();
        n * n - self.sum_conjugate_squares()
    }

    /// Dominance `self <= other`.
    pub fn is_dominated_by(&self, other: &Partition) -> Result<bool> {
        is_dominated(self, other)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// An ordered sequence of nonnegative integers, e.g. a weight `a`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(pub Vec<usize>);

impl Composition {
    pub fn new(entries: Vec<usize>) -> Self {
        Composition(entries)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn sorted(&self) -> Partition {
        Partition::sorted_from(&self.0)
    }
}

/// Dominance test `lambda <= mu`: every partial sum of `lambda` is at most the
/// matching partial sum of `mu`.
pub fn is_dominated(lambda: &Partition, mu: &Partition) -> Result<bool> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!(
            "|{lambda}| = {} but |{mu}| = {}",
            lambda.size(),
            mu.size()
        )));
    }
    let len = lambda.len().max(mu.len());
    let (mut sl, mut sm) = (0usize, 0usize);
    for k in 0..len {
        sl += lambda.part(k);
        sm += mu.part(k);
        if sl > sm {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
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

/// Partitions of `n` with at most `rows` parts, each at most `cols`.
pub fn partitions_in_box(n: usize, rows: usize, cols: usize) -> Vec<Partition> {
    partitions_of(n)
        .into_iter()
        .filter(|p| p.len() <= rows && p.largest() <= cols)
        .collect()
}

/// All compositions of `n` into exactly `parts` nonnegative entries.
pub fn compositions_of(n: usize, parts: usize) -> Vec<Composition> {
    fn rec(rest: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if slots == 1 {
            cur.push(rest);
            out.push(Composition(cur.clone()));
            cur.pop();
            return;
        }
        for x in 0..=rest {
            cur.push(x);
            rec(rest - x, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if n == 0 {
            out.push(Composition(Vec::new()));
        }
        return out;
    }
    rec(n, parts, &mut Vec::new(), &mut out);
    out
}

/// Subshapes `mu` of `lambda` such that `lambda / mu` is a horizontal strip of
/// `size` boxes (at most one box per column).
fn horizontal_strips(lambda: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn rec(lambda: &[usize], row: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if row == lambda.len() {
            if left == 0 {
                let mut mu = cur.clone();
                while mu.last() == Some(&0) {
                    mu.pop();
                }
                out.push(mu);
            }
            return;
        }
        let lower = lambda.get(row + 1).copied().unwrap_or(0);
        let hi = lambda[row];
        // mu_row ranges over [lambda_{row+1}, lambda_row]
        for mu_row in (lower..=hi).rev() {
            let removed = hi - mu_row;
            if removed > left {
                break;
            }
            cur.push(mu_row);
            rec(lambda, row + 1, left - removed, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lambda, 0, size, &mut Vec::new(), &mut out);
    out
}

type KostkaKey = (Vec<usize>, Vec<usize>);

fn kostka_memo() -> &'static Mutex<HashMap<KostkaKey, u128>> {
    static MEMO: OnceLock<Mutex<HashMap<KostkaKey, u128>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn kostka_rec(shape: &[usize], content: &[usize]) -> u128 {
    let Some((&last, rest)) = content.split_last() else {
        return u128::from(shape.is_empty());
    };
    let key = (shape.to_vec(), content.to_vec());
    if let Some(&v) = kostka_memo().lock().expect("kostka memo poisoned").get(&key) {
        return v;
    }
    // the boxes holding the largest letter form a horizontal strip
    let total = horizontal_strips(shape, last)
        .iter()
        .map(|mu| kostka_rec(mu, rest))
        .sum();
    kostka_memo().lock().expect("kostka memo poisoned").insert(key, total);
    total
}

/// Number of semistandard Young tableaux of shape `shape` and content `content`.
pub fn kostka(shape: &Partition, content: &Composition) -> Result<u128> {
    if shape.size() != content.sum() {
        return Err(Error::SizeMismatch(format!(
            "|{shape}| = {} but content {:?} sums to {}",
            shape.size(),
            content.0,
            content.sum()
        )));
    }
    Ok(kostka_rec(shape.parts(), content.entries()))
}

/// Number of SSYT of shape `lambda` with entries in `1..=m`, i.e. `dim V_lambda`
/// for `GL(m)`.
pub fn dim_gl(lambda: &Partition, m: usize) -> u128 {
    fn rec(shape: &[usize], m: usize, memo: &mut HashMap<(Vec<usize>, usize), u128>) -> u128 {
        if shape.is_empty() {
            return 1;
        }
        if m == 0 || shape.len() > m {
            return 0;
        }
        if let Some(&v) = memo.get(&(shape.to_vec(), m)) {
            return v;
        }
        let size: usize = shape.iter().sum();
        let mut total = 0;
        for strip in 0..=size {
            for mu in horizontal_strips(shape, strip) {
                total += rec(&mu, m - 1, memo);
            }
        }
        memo.insert((shape.to_vec(), m), total);
        total
    }
    rec(lambda.parts(), m, &mut HashMap::new())
}

pub(crate) fn check_prime(q: u64) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::NotPrime(q))
    }
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Gaussian binomial `[n choose k]_q` by the exact running product.
pub fn q_binomial(n: usize, k: usize, q: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let q = u128::from(q);
    let pow = |e: usize| -> Result<u128> {
        let e = u32::try_from(e).map_err(|_| Error::Overflow)?;
        q.checked_pow(e).ok_or(Error::Overflow)
    };
    let mut acc: u128 = 1;
    for j in 1..=k {
        let num = pow(n - j + 1)? - 1;
        let den = pow(j)? - 1;
        // partial products are themselves Gaussian binomials, so the division is exact
        acc = acc.checked_mul(num).ok_or(Error::Overflow)? / den;
    }
    Ok(acc)
}

/// Number of flags of type `a` in `F_q^N`, `N = sum(a)`.
pub fn q_multinomial(a: &Composition, q: u64) -> Result<u128> {
    check_prime(q)?;
    let mut acc: u128 = 1;
    let mut running = 0usize;
    for &ai in a.entries() {
        running += ai;
        acc = acc
            .checked_mul(q_binomial(running, ai, q)?)
            .ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Adds a vertical strip of `k` boxes (no two in one row) to `shape` in every
/// possible way, keeping shapes with at most `max_rows` rows.
fn vertical_strips(shape: &[usize], k: usize, max_rows: usize) -> Vec<Vec<usize>> {
    fn rec(
        shape: &[usize],
        row: usize,
        left: usize,
        total_rows: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if row == total_rows {
            if left == 0 {
                let mut grown = cur.clone();
                while grown.last() == Some(&0) {
                    grown.pop();
                }
                out.push(grown);
            }
            return;
        }
        let old = shape.get(row).copied().unwrap_or(0);
        let above = if row == 0 { usize::MAX } else { cur[row - 1] };
        if left > 0 && old < above {
            cur.push(old + 1);
            rec(shape, row + 1, left - 1, total_rows, cur, out);
            cur.pop();
        }
        cur.push(old);
        rec(shape, row + 1, left, total_rows, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    let total_rows = (shape.len() + k).min(max_rows.max(shape.len()));
    rec(shape, 0, k, total_rows, &mut Vec::new(), &mut out);
    out
}

/// Multiplicity of `V_lambda` in `wedge^{a_1} V ⊗ ... ⊗ wedge^{a_n} V`,
/// `dim V = m`, by iterated column-Pieri expansion.
pub fn hom_dim_pieri(a: &Composition, lambda: &Partition, m: usize) -> Result<u128> {
    if a.sum() != lambda.size() {
        return Err(Error::SizeMismatch(format!(
            "composition {:?} sums to {} but |{lambda}| = {}",
            a.0,
            a.sum(),
            lambda.size()
        )));
    }
    if let Some(&big) = a.entries().iter().find(|&&x| x > m) {
        return Err(Error::Precondition(format!(
            "wedge^{big} of an {m}-dimensional space vanishes"
        )));
    }
    let mut layer: HashMap<Vec<usize>, u128> = HashMap::from([(Vec::new(), 1)]);
    for &k in a.entries() {
        let mut next: HashMap<Vec<usize>, u128> = HashMap::new();
        for (shape, mult) in &layer {
            for grown in vertical_strips(shape, k, m) {
                *next.entry(grown).or_default() += mult;
            }
        }
        layer = next;
    }
    Ok(layer.get(lambda.parts()).copied().unwrap_or(0))
}

/// Both sides of `dim wedge^N(C^m ⊗ C^n) = sum_lambda dim V_lambda · dim W_{lambda^t}`.
pub fn howe_sides(m: usize, n: usize, total: usize) -> (u128, u128) {
    let lhs = partitions_in_box(total, m, n)
        .iter()
        .map(|lambda| dim_gl(lambda, m) * dim_gl(&lambda.transpose(), n))
        .sum();
    (lhs, binomial(m * n, total))
}

pub fn howe_sum_check(m: usize, n: usize, total: usize) -> bool {
    let (lhs, rhs) = howe_sides(m, n, total);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn c(v: &[usize]) -> Composition {
        Composition::new(v.to_vec())
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p(&[2, 1]).transpose(), p(&[2, 1]));
        assert_eq!(p(&[]).transpose(), p(&[]));
        assert_eq!(p(&[3, 1]).transpose(), p(&[2, 1, 1]));
        assert_eq!(p(&[3, 1, 0, 0]), p(&[3, 1]));
    }

    #[test]
    fn rejects_increasing_parts() {
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert!(is_dominated(&p(&[1, 1]), &p(&[2])).unwrap());
        assert!(is_dominated(&p(&[2, 1]), &p(&[2, 1])).unwrap());
        let a = p(&[3, 1, 1, 1]);
        let b = p(&[2, 2, 2]);
        assert!(!is_dominated(&a, &b).unwrap());
        assert!(!is_dominated(&b, &a).unwrap());
        assert!(matches!(
            is_dominated(&p(&[2]), &p(&[1])),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn kostka_examples() {
        assert_eq!(kostka(&p(&[2, 1]), &c(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(kostka(&p(&[3, 2, 2]), &c(&[3, 2, 2])).unwrap(), 1);
        assert_eq!(kostka(&p(&[1, 1]), &c(&[2])).unwrap(), 0);
        assert_eq!(kostka(&p(&[2, 1]), &c(&[0, 1, 0, 2])).unwrap(), 1);
        assert!(kostka(&p(&[2]), &c(&[1])).is_err());
    }

    #[test]
    fn dim_gl_examples() {
        assert_eq!(dim_gl(&p(&[2]), 2), 3);
        assert_eq!(dim_gl(&p(&[1, 1]), 2), 1);
        assert_eq!(dim_gl(&p(&[1, 1, 1]), 2), 0);
        assert_eq!(dim_gl(&p(&[]), 4), 1);
    }

    #[test]
    fn q_multinomial_examples() {
        assert_eq!(q_multinomial(&c(&[1, 1]), 2).unwrap(), 3);
        assert_eq!(q_multinomial(&c(&[4]), 5).unwrap(), 1);
        assert_eq!(q_multinomial(&c(&[1, 1, 1]), 2).unwrap(), 21);
        assert_eq!(q_multinomial(&c(&[1, 1]), 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn pieri_examples() {
        assert_eq!(hom_dim_pieri(&c(&[1, 1, 1]), &p(&[2, 1]), 2).unwrap(), 2);
        assert_eq!(hom_dim_pieri(&c(&[3]), &p(&[1, 1, 1]), 3).unwrap(), 1);
        assert_eq!(hom_dim_pieri(&c(&[2, 1]), &p(&[3]), 3).unwrap(), 0);
        assert!(hom_dim_pieri(&c(&[3]), &p(&[1, 1, 1]), 2).is_err());
    }

    #[test]
    fn howe_examples() {
        assert_eq!(howe_sides(2, 2, 2), (6, 6));
        assert_eq!(howe_sides(3, 3, 0), (1, 1));
        assert_eq!(howe_sides(2, 3, 3), (20, 20));
    }

    #[test]
    fn counts_of_partitions() {
        let counts: Vec<usize> = (0..=8).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(compositions_of(3, 2).len(), 4);
    }
}
