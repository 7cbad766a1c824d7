//! The transverse slice `T_x` to the nilpotent orbit of Jordan type `lambda`
//! at the standard nilpotent `x`, and `F_q`-point counts of `T_x ∩ closure(O_mu)`.
//!
//! Basis order is global: `e_{k,i}` sorted by block `i` ascending, then `k`
//! ascending (`k = 1..lambda_i`). Zero parts of `lambda` carry no basis vectors.

use rayon::prelude::*;

use crate::combinatorics::{is_dominated, Partition};
use crate::error::{Error, Result};
use crate::linalg::{subspace, Field, Matrix, PrimeField};

/// Default cap on the number of candidate matrices in a brute-force count.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceFrame {
    lambda: Partition,
    offsets: Vec<usize>,
}

impl SliceFrame {
    pub fn new(lambda: &Partition) -> Self {
        let mut offsets = Vec::with_capacity(lambda.len());
        let mut acc = 0;
        for &part in lambda.parts() {
            offsets.push(acc);
            acc += part;
        }
        SliceFrame { lambda: lambda.clone(), offsets }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.lambda.size()
    }

    /// Position of `e_{k,i}` (`k` 1-based, block `i` 0-based).
    pub fn index(&self, k: usize, i: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.lambda.part(i));
        self.offsets[i] + k - 1
    }

    /// Label `(k, i)` of a basis position.
    pub fn label(&self, pos: usize) -> (usize, usize) {
        let i = self.offsets.iter().rposition(|&o| o <= pos).expect("position in range");
        (pos - self.offsets[i] + 1, i)
    }

    /// Entries `(row, col)` of `A - x` allowed to be nonzero: row `e_{lambda_i, i}`,
    /// column `e_{l, j}` with `l <= min(lambda_i, lambda_j)`.
    pub fn free_positions(&self) -> Vec<(usize, usize)> {
        let parts = self.lambda.parts();
        let mut out = Vec::new();
        for (i, &li) in parts.iter().enumerate() {
            for (j, &lj) in parts.iter().enumerate() {
                for l in 1..=li.min(lj) {
                    out.push((self.index(li, i), self.index(l, j)));
                }
            }
        }
        out
    }

    /// The standard nilpotent `x : e_{k,i} -> e_{k-1,i}`.
    pub fn x<F: Field>(&self, field: &F) -> Matrix<F> {
        let n = self.dim();
        let mut x = Matrix::zeros(field, n, n);
        for (i, &li) in self.lambda.parts().iter().enumerate() {
            for k in 2..=li {
                x.set(self.index(k - 1, i), self.index(k, i), field.one());
            }
        }
        x
    }
}

pub fn x_of<F: Field>(field: &F, lambda: &Partition) -> Matrix<F> {
    SliceFrame::new(lambda).x(field)
}

pub fn slice_dim(lambda: &Partition) -> usize {
    lambda.sum_conjugate_squares()
}

fn check_square<F: Field>(a: &Matrix<F>, lambda: &Partition) -> Result<()> {
    let n = lambda.size();
    if a.rows() != n || a.cols() != n {
        return Err(Error::SizeMismatch(format!(
            "{}x{} matrix for |{lambda}| = {n}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// `A - x` vanishes outside the free positions.
pub fn in_slice<F: Field>(a: &Matrix<F>, lambda: &Partition) -> Result<bool> {
    check_square(a, lambda)?;
    let frame = SliceFrame::new(lambda);
    let f = a.field();
    let diff = a.sub(&frame.x(f))?;
    let n = frame.dim();
    let mut allowed = vec![false; n * n];
    for (r, c) in frame.free_positions() {
        allowed[r * n + c] = true;
    }
    Ok((0..n * n).all(|idx| allowed[idx] || f.is_zero(diff.get(idx / n, idx % n))))
}

/// `A ∈ T_x`, `A` nilpotent and its Jordan type is dominated by `mu`.
pub fn in_slice_mu<F: Field>(a: &Matrix<F>, lambda: &Partition, mu: &Partition) -> Result<bool> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!("|{lambda}| != |{mu}|")));
    }
    if !in_slice(a, lambda)? {
        return Ok(false);
    }
    match a.jordan_type() {
        Ok(nu) => is_dominated(&nu, mu),
        Err(Error::NotNilpotent) => Ok(false),
        Err(e) => Err(e),
    }
}

fn trace(a: &Matrix<PrimeField>) -> u64 {
    let f = a.field();
    (0..a.rows()).fold(0, |acc, i| f.add(&acc, a.get(i, i)))
}

/// Number of `F_q`-points of `T_x ∩ closure(O_mu)`, by enumerating the free
/// coordinates.
pub fn count_slice_points(lambda: &Partition, mu: &Partition, q: u64, budget: u128) -> Result<u128> {
    let field = PrimeField::new(q)?;
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!("|{lambda}| != |{mu}|")));
    }
    if !is_dominated(lambda, mu)? {
        return Err(Error::DominanceViolation { lambda: lambda.parts().to_vec(), mu: mu.parts().to_vec() });
    }
    let frame = SliceFrame::new(lambda);
    let free = frame.free_positions();
    let needed = u128::from(q)
        .checked_pow(free.len() as u32)
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, limit: budget });
    }
    let x = frame.x(&field);
    if free.is_empty() {
        return Ok(u128::from(in_slice_mu(&x, lambda, mu)?));
    }
    let (lead, rest) = free.split_first().expect("nonempty");
    let counts: Vec<u128> = (0..q)
        .into_par_iter()
        .map(|first| {
            let mut count = 0u128;
            let mut digits = vec![0u64; rest.len()];
            let mut a = x.clone();
            a.set(lead.0, lead.1, first);
            loop {
                for (&(r, c), &d) in rest.iter().zip(&digits) {
                    a.set(r, c, d);
                }
                if trace(&a) == 0 {
                    if let Ok(nu) = a.jordan_type() {
                        if is_dominated(&nu, mu).expect("same size") {
                            count += 1;
                        }
                    }
                }
                if !subspace::increment(&mut digits, q) {
                    break;
                }
            }
            count
        })
        .collect();
    Ok(counts.iter().sum())
}
