//! Partial flags stable under a nilpotent, finite-field fiber counts, and
//! count polynomials.
//!
//! A flag of type `a` is `0 = F_0 ⊆ F_1 ⊆ ... ⊆ F_n = F_q^N` with
//! `dim F_i / F_{i-1} = a_i`; it lies in the fiber over `x` when
//! `x F_i ⊆ F_{i-1}` for every `i`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{hom_dim_pieri, is_dominated, is_prime, kostka, Composition, Partition};
use crate::dictionary::{forward, is_nonempty_datum, QuiverData};
use crate::error::{Error, Result};
use crate::linalg::{subspace, Matrix, PrimeField};
use crate::slice::x_of;

/// Number of flags of type `a` in `F_q^N` stable under `x`, by stepwise
/// enumeration of `F_i / F_{i-1}` inside `x^-1(F_{i-1}) / F_{i-1}`.
pub fn fiber_count(x: &Matrix<PrimeField>, a: &Composition, budget: u128) -> Result<u128> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", x.rows(), x.cols())));
    }
    if a.sum() != x.rows() {
        return Err(Error::SizeMismatch(format!("flag type sums to {}, matrix has size {}", a.sum(), x.rows())));
    }
    if !x.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let field = *x.field();
    let whole = Matrix::identity(&field, x.rows());
    let start = Matrix::zeros(&field, 0, x.rows());
    let mut visited = 0u128;
    count_from(x, &whole, &start, a.entries(), budget, &mut visited)
}

fn count_from(
    x: &Matrix<PrimeField>,
    whole: &Matrix<PrimeField>,
    current: &Matrix<PrimeField>,
    rest: &[usize],
    budget: u128,
    visited: &mut u128,
) -> Result<u128> {
    let Some((&step, tail)) = rest.split_first() else {
        return Ok(u128::from(current.rows() == x.rows()));
    };
    let field = x.field();
    let pre = subspace::preimage_within(x, whole, current)?;
    let complement = subspace::complement(current, &pre);
    let mut total = 0u128;
    let mut err = None;
    subspace::for_each_subspace(field, complement.rows(), step, &mut |choice| {
        if err.is_some() {
            return;
        }
        *visited += 1;
        if *visited > budget {
            err = Some(Error::BudgetExceeded { needed: *visited, limit: budget });
            return;
        }
        let next = current.vstack(&choice.mul(&complement).expect("shapes")).expect("shapes");
        match count_from(x, whole, &next, tail, budget, visited) {
            Ok(c) => total += c,
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Same count for `x` of Jordan type `lambda`, recursing on the Jordan type of
/// the induced nilpotent on `F_q^N / F_1` and memoizing on `(type, tail of a)`.
pub fn fiber_count_by_type(lambda: &Partition, a: &Composition, q: u64) -> Result<u128> {
    if a.sum() != lambda.size() {
        return Err(Error::SizeMismatch(format!("flag type sums to {}, |{lambda}| = {}", a.sum(), lambda.size())));
    }
    let field = PrimeField::new(q)?;
    let mut memo = TypeMemo { field, counts: HashMap::new(), quotients: HashMap::new() };
    Ok(memo.count(lambda, a.entries()))
}

struct TypeMemo {
    field: PrimeField,
    counts: HashMap<(Partition, Vec<usize>), u128>,
    quotients: HashMap<(Partition, usize), Vec<(Partition, u128)>>,
}

impl TypeMemo {
    fn count(&mut self, lambda: &Partition, rest: &[usize]) -> u128 {
        let Some((&step, tail)) = rest.split_first() else {
            return u128::from(lambda.is_empty());
        };
        let key = (lambda.clone(), rest.to_vec());
        if let Some(&c) = self.counts.get(&key) {
            return c;
        }
        let mut total = 0;
        for (nu, mult) in self.quotient_types(lambda, step) {
            total += mult * self.count(&nu, tail);
        }
        self.counts.insert(key, total);
        total
    }

    /// Jordan types of `x` on `V / W` for `W` ranging over the `k`-dimensional
    /// subspaces of `ker x`, with multiplicities.
    fn quotient_types(&mut self, lambda: &Partition, k: usize) -> Vec<(Partition, u128)> {
        let key = (lambda.clone(), k);
        if let Some(v) = self.quotients.get(&key) {
            return v.clone();
        }
        let field = self.field;
        let n = lambda.size();
        let parts = lambda.parts();
        let offsets: Vec<usize> = parts.iter().scan(0, |acc, &p| {
            let o = *acc;
            *acc += p;
            Some(o)
        }).collect();
        // image of x^t is spanned by e_{j,i} with j <= lambda_i - t
        let images: Vec<Matrix<PrimeField>> = (0..=lambda.largest())
            .map(|t| {
                let idx: Vec<usize> = parts
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &li)| (1..=li.saturating_sub(t)).map(move |j| (i, j)))
                    .map(|(i, j)| offsets[i] + j - 1)
                    .collect();
                Matrix::from_fn(&field, idx.len(), n, |r, c| u64::from(idx[r] == c))
            })
            .collect();
        let mut tally: HashMap<Partition, u128> = HashMap::new();
        subspace::for_each_subspace(&field, parts.len(), k, &mut |choice| {
            let w = Matrix::from_fn(&field, k, n, |r, c| {
                parts
                    .iter()
                    .enumerate()
                    .find(|(i, _)| offsets[*i] == c)
                    .map_or(0, |(i, _)| *choice.get(r, i))
            });
            let ranks: Vec<usize> = images
                .iter()
                .map(|img| w.vstack(img).expect("same width").rank() - k)
                .collect();
            let conj: Vec<usize> = ranks.windows(2).map(|p| p[0] - p[1]).filter(|&d| d > 0).collect();
            let nu = Partition::new(conj).expect("rank drops decrease").transpose();
            *tally.entry(nu).or_default() += 1;
        });
        let out: Vec<(Partition, u128)> = tally.into_iter().collect();
        self.quotients.insert(key, out.clone());
        out
    }
}

/// First `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    (2u64..).filter(|&p| is_prime(p)).take(k).collect()
}

/// Integer polynomial in `q`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountPolynomial {
    pub coefficients: Vec<i128>,
}

impl CountPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn leading(&self) -> i128 {
        self.coefficients.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, q: i128) -> i128 {
        self.coefficients.iter().rev().fold(0, |acc, &c| acc * q + c)
    }
}

impl fmt::Display for CountPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| match (e, c) {
                (0, c) => c.to_string(),
                (1, 1) => "q".into(),
                (1, c) => format!("{c}q"),
                (e, 1) => format!("q^{e}"),
                (e, c) => format!("{c}q^{e}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Expected degree `(dim O_mu - dim O_lambda) / 2` with `mu` the transpose of
/// `a` sorted.
pub fn expected_degree(lambda: &Partition, a: &Composition) -> Result<usize> {
    let mu = a.sorted().transpose();
    if !is_dominated(lambda, &mu)? {
        return Err(Error::DominanceViolation { lambda: lambda.parts().to_vec(), mu: mu.parts().to_vec() });
    }
    Ok((mu.nilpotent_orbit_dim() - lambda.nilpotent_orbit_dim()) / 2)
}

/// Primes used by default: enough to fit the expected degree and validate at
/// least one more, and never fewer than 2, 3, 5, 7.
pub fn default_primes(lambda: &Partition, a: &Composition) -> Result<Vec<u64>> {
    Ok(first_primes((expected_degree(lambda, a)? + 2).max(4)))
}

/// Interpolates through `(q, fiber count at q)`: the first `deg + 1` primes
/// determine the polynomial, the rest validate it.
pub fn fit_count_polynomial(lambda: &Partition, a: &Composition, primes: &[u64]) -> Result<CountPolynomial> {
    let deg = expected_degree(lambda, a)?;
    if primes.len() < deg + 1 {
        return Err(Error::Precondition(format!("{} primes given, degree {deg} needs {}", primes.len(), deg + 1)));
    }
    let counts: Vec<u128> = primes
        .par_iter()
        .map(|&q| fiber_count_by_type(lambda, a, q))
        .collect::<Result<_>>()?;
    fit_points(primes, &counts, deg)
}

/// Fits a polynomial of degree at most `deg` through the first `deg + 1`
/// points and checks it against the rest.
fn fit_points(xs: &[u64], ys: &[u128], deg: usize) -> Result<CountPolynomial> {
    let (fit_q, check_q) = xs.split_at(deg + 1);
    let coeffs = interpolate(fit_q, &ys[..deg + 1]);
    let integral: Option<Vec<i128>> = coeffs
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer().to_i128()).flatten())
        .collect();
    let render = || coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    let Some(mut coefficients) = integral else {
        return Err(Error::InterpolationMismatch { q: fit_q[0], fitted: render(), counted: ys[0] });
    };
    while coefficients.len() > 1 && coefficients.last() == Some(&0) {
        coefficients.pop();
    }
    let poly = CountPolynomial { coefficients };
    for (&q, &counted) in check_q.iter().zip(&ys[deg + 1..]) {
        if poly.eval(i128::from(q)) != counted as i128 {
            return Err(Error::InterpolationMismatch { q, fitted: poly.to_string(), counted });
        }
    }
    Ok(poly)
}

/// Coefficients (lowest first) of the Lagrange interpolant.
fn interpolate(xs: &[u64], ys: &[u128]) -> Vec<BigRational> {
    let k = xs.len();
    let mut out = vec![BigRational::zero(); k];
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, &xj) in xs.iter().enumerate() {
            if j == i {
                continue;
            }
            let xj = BigRational::from_integer(BigInt::from(xj));
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (e, c) in basis.iter().enumerate() {
                next[e + 1] += c;
                next[e] -= c * &xj;
            }
            basis = next;
            denom *= BigRational::from_integer(BigInt::from(xi)) - xj;
        }
        let scale = BigRational::from_integer(BigInt::from(yi)) / denom;
        for (o, c) in out.iter_mut().zip(&basis) {
            *o += c * &scale;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub v: Vec<usize>,
    pub d: Vec<usize>,
    pub lambda: Vec<usize>,
    pub a: Vec<usize>,
    pub primes: Vec<u64>,
    pub polynomial: CountPolynomial,
    pub degree: usize,
    pub expected_degree: usize,
    pub leading: i128,
    pub kostka: u128,
    pub hom_dim: u128,
    pub holds: bool,
}

/// Leading coefficient of the fiber count polynomial against the Kostka
/// number and the Pieri count of the same weight space.
pub fn multiplicity_check(data: &QuiverData) -> Result<MultiplicityReport> {
    if !is_nonempty_datum(data) {
        let rec = forward(data)?;
        return Err(Error::EmptyVariety { lambda: rec.lambda, mu: rec.mu });
    }
    let rec = forward(data)?;
    let lambda = rec.lambda();
    let a = rec.weight();
    let primes = default_primes(&lambda, &a)?;
    let polynomial = fit_count_polynomial(&lambda, &a, &primes)?;
    let expected_degree = expected_degree(&lambda, &a)?;
    let kostka = kostka(&rec.lambda_check(), &a)?;
    let hom_dim = hom_dim_pieri(&a, &lambda, rec.m)?;
    let leading = polynomial.leading();
    let holds = polynomial.degree() == expected_degree && leading == kostka as i128 && kostka == hom_dim;
    Ok(MultiplicityReport {
        v: data.v.clone(),
        d: data.d.clone(),
        lambda: rec.lambda.clone(),
        a: rec.a.clone(),
        primes,
        degree: polynomial.degree(),
        polynomial,
        expected_degree,
        leading,
        kostka,
        hom_dim,
        holds,
    })
}

/// Fiber count over `x_of(lambda)` reduced mod `q`.
pub fn fiber_count_at(lambda: &Partition, a: &Composition, q: u64, budget: u128) -> Result<u128> {
    let field = PrimeField::new(q)?;
    fiber_count(&x_of(&field, lambda), a, budget)
}
