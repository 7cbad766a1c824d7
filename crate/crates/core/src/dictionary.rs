//! Translation between quiver data `(v, d)` of type `A_{n-1}` and pairs of
//! partitions `(lambda, mu)`, in both directions.

use serde::{Deserialize, Serialize};

use crate::combinatorics::{compositions_of, is_dominated, Composition, Partition};
use crate::error::{Error, Result};

/// Dimension vectors `v`, `d` on the vertices `1..n-1` of the `A_{n-1}` quiver.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuiverData {
    pub n: usize,
    pub v: Vec<usize>,
    pub d: Vec<usize>,
}

impl QuiverData {
    pub fn new(n: usize, v: Vec<usize>, d: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("n = {n}; the quiver needs n >= 2")));
        }
        if v.len() != n - 1 || d.len() != n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "v has {} and d has {} entries, expected {}",
                v.len(),
                d.len(),
                n - 1
            )));
        }
        Ok(QuiverData { n, v, d })
    }

    /// Builds data from `v` and `d` of possibly different lengths, padding
    /// the shorter with zeros.
    pub fn from_vectors(v: &[usize], d: &[usize]) -> Result<Self> {
        let len = v.len().max(d.len()).max(1);
        let pad = |x: &[usize]| {
            let mut x = x.to_vec();
            x.resize(len, 0);
            x
        };
        Self::new(len + 1, pad(v), pad(d))
    }

    /// Vertex count `n - 1`.
    pub fn vertices(&self) -> usize {
        self.n - 1
    }

    /// `N = sum_j j d_j`.
    pub fn total(&self) -> usize {
        self.d.iter().enumerate().map(|(j, dj)| (j + 1) * dj).sum()
    }

    /// `m = sum_j d_j`.
    pub fn rank(&self) -> usize {
        self.d.iter().sum()
    }

    /// The same data with trailing vertices carrying `v_i = d_i = 0` removed.
    pub fn trimmed(&self) -> QuiverData {
        let mut k = self.vertices();
        while k > 1 && self.v[k - 1] == 0 && self.d[k - 1] == 0 {
            k -= 1;
        }
        QuiverData { n: k + 1, v: self.v[..k].to_vec(), d: self.d[..k].to_vec() }
    }

    /// Weight `d - Cv` for the Cartan matrix of type `A_{n-1}`.
    pub fn weight(&self) -> Vec<i64> {
        let r = self.vertices();
        let v = |i: isize| -> i64 {
            if i < 0 || i as usize >= r {
                0
            } else {
                self.v[i as usize] as i64
            }
        };
        (0..r)
            .map(|i| {
                let i = i as isize;
                self.d[i as usize] as i64 - (2 * v(i) - v(i - 1) - v(i + 1))
            })
            .collect()
    }
}

/// The full translated datum `(n, m, N, v, d, lambda^t, a, mu^t, lambda, mu)`.
/// `lambda_check`, `a` and `mu_check` have `n` entries; `lambda` and `mu` have
/// `m` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryRecord {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub total: usize,
    pub v: Vec<usize>,
    pub d: Vec<usize>,
    pub lambda_check: Vec<usize>,
    pub a: Vec<usize>,
    pub mu_check: Vec<usize>,
    pub lambda: Vec<usize>,
    pub mu: Vec<usize>,
}

impl DictionaryRecord {
    pub fn lambda(&self) -> Partition {
        Partition::new(self.lambda.clone()).expect("stored padded partition")
    }

    pub fn mu(&self) -> Partition {
        Partition::new(self.mu.clone()).expect("stored padded partition")
    }

    pub fn lambda_check(&self) -> Partition {
        Partition::new(self.lambda_check.clone()).expect("stored padded partition")
    }

    pub fn mu_check(&self) -> Partition {
        Partition::new(self.mu_check.clone()).expect("stored padded partition")
    }

    pub fn weight(&self) -> Composition {
        Composition::new(self.a.clone())
    }

    pub fn quiver_data(&self) -> QuiverData {
        QuiverData { n: self.n, v: self.v.clone(), d: self.d.clone() }
    }
}

/// Quiver data to partitions: `lambda^t_i = sum_{j>=i} d_j` and
/// `a_i = v_{n-1} + sum_{j>=i} (d - Cv)_j`, then `mu^t = sort(a)` and
/// `lambda`, `mu` by conjugation.
pub fn forward(q: &QuiverData) -> Result<DictionaryRecord> {
    let n = q.n;
    let r = q.vertices();
    let lambda_check: Vec<usize> = (0..n).map(|i| q.d[i.min(r)..].iter().sum()).collect();
    let w = q.weight();
    let top = q.v[r - 1] as i64;
    let mut a = Vec::with_capacity(n);
    for i in 0..n {
        let tail: i64 = w[i.min(r)..].iter().sum();
        let ai = top + tail;
        if ai < 0 {
            return Err(Error::NegativeWeightEntry { index: i + 1, value: ai });
        }
        a.push(ai as usize);
    }
    let m = q.rank();
    let lambda_check_p = Partition::new(lambda_check.clone())?;
    let mu_check_p = Partition::sorted_from(&a);
    let lambda = lambda_check_p.transpose();
    let mu = mu_check_p.transpose();
    if !is_dominated(&lambda, &mu)? {
        return Err(Error::EmptyVariety { lambda: lambda.parts().to_vec(), mu: mu.parts().to_vec() });
    }
    Ok(DictionaryRecord {
        n,
        m,
        total: q.total(),
        v: q.v.clone(),
        d: q.d.clone(),
        lambda_check,
        mu_check: mu_check_p.padded(n)?,
        a,
        lambda: lambda.padded(m)?,
        mu: mu.padded(m)?,
    })
}

pub fn is_nonempty_datum(q: &QuiverData) -> bool {
    forward(q).is_ok()
}

/// Inverse dictionary for a given weight `a` (in any order). `n` is
/// `max(lambda_1 + 1, len(a))`.
pub fn backward_with_weight(lambda: &Partition, a: &Composition) -> Result<(QuiverData, DictionaryRecord)> {
    let mu = a.sorted().transpose();
    if lambda.size() != a.sum() {
        return Err(Error::SizeMismatch(format!(
            "|{lambda}| = {} but the weight sums to {}",
            lambda.size(),
            a.sum()
        )));
    }
    if !is_dominated(lambda, &mu)? {
        return Err(Error::DominanceViolation { lambda: lambda.parts().to_vec(), mu: mu.parts().to_vec() });
    }
    let n = (lambda.largest() + 1).max(a.entries().len()).max(2);
    let lambda_check = lambda.transpose().padded(n)?;
    let mut a_pad = a.entries().to_vec();
    a_pad.resize(n, 0);
    let d: Vec<i64> = (0..n - 1).map(|j| lambda_check[j] as i64 - lambda_check[j + 1] as i64).collect();
    let a_i = |i: usize| a_pad[i - 1] as i64;

    // v[i] holds v_i for i = 0..=n with v_0 = v_n = 0 as boundary slots
    let mut v = vec![0i64; n + 1];
    v[n - 1] = a_i(n);
    for i in (2..n).rev() {
        v[i - 1] = 2 * v[i] - v[i + 1] - d[i - 1] + (a_i(i) - a_i(i + 1));
    }
    let leftover = 2 * v[1] - v[2] - d[0] + (a_i(1) - a_i(2));
    if leftover != 0 {
        return Err(Error::NonIntegralOrNegativeV(format!(
            "consistency at vertex 1 fails (residual {leftover}) for lambda = {lambda}, a = {:?}",
            a.entries()
        )));
    }
    if let Some(bad) = v[1..n].iter().find(|&&x| x < 0) {
        return Err(Error::NonIntegralOrNegativeV(format!(
            "negative entry {bad} in v for lambda = {lambda}, a = {:?}",
            a.entries()
        )));
    }
    let q = QuiverData::new(
        n,
        v[1..n].iter().map(|&x| x as usize).collect(),
        d.iter().map(|&x| x as usize).collect(),
    )?;
    let rec = forward(&q)?;
    Ok((q, rec))
}

/// Inverse dictionary with the canonical weight `a = mu^t` in decreasing order
/// and minimal `n = max(lambda_1, mu_1) + 1`.
pub fn backward(lambda: &Partition, mu: &Partition) -> Result<(QuiverData, DictionaryRecord)> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!("|{lambda}| != |{mu}|")));
    }
    if !is_dominated(lambda, mu)? {
        return Err(Error::DominanceViolation { lambda: lambda.parts().to_vec(), mu: mu.parts().to_vec() });
    }
    let n = lambda.largest().max(mu.largest()) + 1;
    let a = Composition::new(mu.transpose().padded(n)?);
    backward_with_weight(lambda, &a)
}

/// Every nonempty datum with `N = total` on at most `N` vertices, listed once
/// up to zero-padding of trailing vertices. Without the bound on vertices the
/// list is infinite: `v = (1, ..., 1), d = (1, 0, ..., 0)` is valid for every `n`.
pub fn data_with_total(total: usize) -> Vec<QuiverData> {
    let mut out = Vec::new();
    for n in 2..=total + 1 {
        for d in d_vectors(n - 1, total) {
            for a in compositions_of(total, n) {
                let q_d: Vec<usize> = d.clone();
                let lambda = Partition::new(
                    (0..n).map(|i| q_d[i.min(n - 1)..].iter().sum::<usize>()).collect(),
                )
                .expect("tail sums decrease")
                .transpose();
                let Ok((q, _)) = backward_with_weight(&lambda, &a) else {
                    continue;
                };
                if q.n != n {
                    continue;
                }
                if q.v[n - 2] == 0 && q.d[n - 2] == 0 && n > 2 {
                    continue;
                }
                out.push(q);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `d` vectors of the given length with `sum_j j d_j = total`.
fn d_vectors(len: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(j: usize, len: usize, rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if j > len {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for dj in 0..=rest / j {
            cur.push(dj);
            rec(j + 1, len, rest - dj * j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, len, total, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn forward_a1_example() {
        let rec = forward(&QuiverData::new(2, vec![1], vec![2]).unwrap()).unwrap();
        assert_eq!((rec.total, rec.m), (2, 2));
        assert_eq!(rec.lambda_check, vec![2, 0]);
        assert_eq!(rec.a, vec![1, 1]);
        assert_eq!(rec.mu_check, vec![1, 1]);
        assert_eq!(rec.lambda, vec![1, 1]);
        assert_eq!(rec.mu, vec![2, 0]);
    }

    #[test]
    fn forward_a2_example() {
        let rec = forward(&QuiverData::new(3, vec![1, 1], vec![1, 1]).unwrap()).unwrap();
        assert_eq!((rec.total, rec.m), (3, 2));
        assert_eq!(rec.lambda_check, vec![2, 1, 0]);
        assert_eq!(rec.a, vec![1, 1, 1]);
        assert_eq!(rec.lambda, vec![2, 1]);
        assert_eq!(rec.mu, vec![3, 0]);
    }

    #[test]
    fn zero_v_gives_lambda_equal_mu() {
        let rec = forward(&QuiverData::new(4, vec![0, 0, 0], vec![1, 0, 2]).unwrap()).unwrap();
        assert_eq!(rec.a, rec.lambda_check);
        assert_eq!(rec.lambda, rec.mu);
    }

    #[test]
    fn negative_weight_is_rejected() {
        let q = QuiverData::new(2, vec![2], vec![1]).unwrap();
        assert_eq!(forward(&q), Err(Error::NegativeWeightEntry { index: 1, value: -1 }));
        assert!(!is_nonempty_datum(&q));
        assert!(is_nonempty_datum(&QuiverData::new(2, vec![1], vec![2]).unwrap()));
    }

    #[test]
    fn backward_examples() {
        let (q, _) = backward(&p(&[1, 1]), &p(&[2])).unwrap();
        assert_eq!((q.n, q.d.clone(), q.v.clone()), (3, vec![2, 0], vec![1, 0]));
        let (q, _) = backward(&p(&[2, 1]), &p(&[3])).unwrap();
        assert_eq!((q.n, q.d.clone(), q.v.clone()), (4, vec![1, 1, 0], vec![1, 1, 0]));
        let (q, _) = backward(&p(&[2, 2, 1]), &p(&[2, 2, 1])).unwrap();
        assert!(q.v.iter().all(|&x| x == 0));
        assert_eq!(q.d, vec![1, 2]);
    }

    #[test]
    fn backward_rejects_dominance_violation() {
        assert!(matches!(backward(&p(&[2]), &p(&[1, 1])), Err(Error::DominanceViolation { .. })));
    }

    #[test]
    fn padding_does_not_change_the_record_partitions() {
        let a = forward(&QuiverData::new(2, vec![1], vec![2]).unwrap()).unwrap();
        let b = forward(&QuiverData::new(4, vec![1, 0, 0], vec![2, 0, 0]).unwrap()).unwrap();
        assert_eq!((a.lambda, a.mu), (b.lambda, b.mu));
        assert_eq!(&b.a[..2], &a.a[..]);
    }
}
