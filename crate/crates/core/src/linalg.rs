//! Dense exact linear algebra over the rationals and prime fields.

use std::fmt::{self, Debug};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{check_prime, Partition};
use crate::error::{Error, Result};

/// Which exact field a matrix lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(FieldSpec::Prime(p))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let p = s
            .strip_prefix('F')
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("unknown field {s:?}; expected \"Q\" or \"F<p>\"")))?;
        FieldSpec::prime(p)
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FieldSpec> for String {
    fn from(f: FieldSpec) -> Self {
        f.to_string()
    }
}

/// Arithmetic context of an exact field. Elements do not carry their field;
/// the context value does.
pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn render(&self, a: &Self::Elem) -> String;
    /// Rescales a nonzero vector to a convenient representative of its line.
    fn normalize_line(&self, _v: &mut [Self::Elem]) {}
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        match s.split_once('/') {
            Some((num, den)) => {
                let num: BigInt = num.trim().parse().map_err(|_| bad())?;
                let den: BigInt = den.trim().parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(num, den))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        }
    }
    /// Primitive integer vector.
    fn normalize_line(&self, v: &mut [BigRational]) {
        let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return;
        }
        for (x, n) in v.iter_mut().zip(ints) {
            *x = BigRational::from_integer(n / &g);
        }
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// `Z/pZ` for a prime `p`; elements are canonical residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        check_prime(p)?;
        if p >= 1 << 31 {
            return Err(Error::Precondition(format!("prime {p} too large")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce(v)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn parse_elem(&self, s: &str) -> Result<u64> {
        let r = Rationals.parse_elem(s)?;
        let p = BigInt::from(self.p);
        let reduce = |x: &BigInt| -> u64 {
            let r = ((x % &p) + &p) % &p;
            u64::try_from(r).expect("residue fits")
        };
        let num = reduce(r.numer());
        let den = reduce(r.denom());
        let den_inv = self
            .inv(&den)
            .ok_or_else(|| Error::Parse(format!("{s:?} has a denominator divisible by {}", self.p)))?;
        Ok(num * den_inv % self.p)
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// A dense row-major matrix over `F`.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix over {} ({}x{})", self.field.spec(), self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.field.render(self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Integer literal rows; all rows must have equal length.
    pub fn from_i64_rows(field: &F, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Self::from_fn(field, rows.len(), cols, |r, c| field.from_i64(rows[r][c])))
    }

    /// Matrix whose columns are the given vectors of length `len`.
    pub fn from_columns(field: &F, len: usize, columns: &[Vec<F::Elem>]) -> Self {
        Self::from_fn(field, len, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !f.is_zero(b) {
                        let idx = r * other.cols + c;
                        out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F::Elem, &F::Elem) -> F::Elem) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| f.mul(x, s)).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        Ok(Self::from_fn(&self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        }))
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Sub-block `rows r0..r0+h`, `cols c0..c0+w`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(&self.field, h, w, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c).clone());
            }
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("nonzero pivot");
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || f.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> Self {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    /// One solution of `self * x = b` (free variables set to zero), if any.
    pub fn solve(&self, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let f = &self.field;
        let rhs = Self::from_fn(f, self.rows, 1, |r, _| b[r].clone());
        let aug = self.hstack(&rhs)?;
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n))?;
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return Err(Error::Singular);
        }
        Ok(r.block(0, n, n, n))
    }

    /// `self^k = 0` for `k = rows`; checked by repeated multiplication.
    pub fn is_nilpotent(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut acc = self.clone();
        for _ in 1..self.rows.max(1) {
            if acc.is_zero() {
                return true;
            }
            acc = acc.mul(self).expect("square");
        }
        acc.is_zero()
    }

    /// Jordan type of a nilpotent matrix from the rank sequence of its powers.
    pub fn jordan_type(&self) -> Result<Partition> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("Jordan type of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut ranks = vec![n];
        let mut acc = self.clone();
        while *ranks.last().expect("nonempty") > 0 {
            if ranks.len() > n {
                return Err(Error::NotNilpotent);
            }
            ranks.push(acc.rank());
            acc = acc.mul(self)?;
        }
        let conj: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
        Ok(Partition::new(conj)?.transpose())
    }
}

impl Matrix<PrimeField> {
    pub fn from_residues(field: &PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        let p = field.modulus();
        Self::from_vec(field, rows, cols, data.into_iter().map(|x| x % p).collect())
    }
}

impl Matrix<Rationals> {
    /// Reduces an integral rational matrix mod `p`; fails on a denominator divisible by `p`.
    pub fn reduce_mod(&self, field: &PrimeField) -> Result<Matrix<PrimeField>> {
        let data = self
            .data
            .iter()
            .map(|x| field.parse_elem(&Rationals.render(x)))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(field, self.rows, self.cols, data)
    }

    pub fn max_abs_numerator_bits(&self) -> u64 {
        self.data.iter().map(|x| x.numer().abs().bits()).max().unwrap_or(0)
    }
}

/// A matrix over a field chosen at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactMatrix {
    Rational(Matrix<Rationals>),
    Prime(Matrix<PrimeField>),
}

/// JSON form: `{"field": "Q" | "F<p>", "matrix": [[entry, ...], ...]}` with
/// entries given as integers or strings such as `"3/4"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldSpec,
    pub matrix: Vec<Vec<serde_json::Value>>,
}

pub(crate) fn parse_entry<F: Field>(field: &F, v: &serde_json::Value) -> Result<F::Elem> {
    match v {
        serde_json::Value::Number(n) => field.parse_elem(&n.to_string()),
        serde_json::Value::String(s) => field.parse_elem(s),
        other => Err(Error::Parse(format!("matrix entry {other} is neither a number nor a string"))),
    }
}

pub(crate) fn parse_rows<F: Field>(field: &F, rows: &[Vec<serde_json::Value>], ncols: Option<usize>) -> Result<Matrix<F>> {
    let cols = ncols.unwrap_or_else(|| rows.first().map_or(0, Vec::len));
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(Error::Parse(format!("row {i} has {} entries, expected {cols}", r.len())));
    }
    let data = rows.iter().flatten().map(|v| parse_entry(field, v)).collect::<Result<Vec<_>>>()?;
    Matrix::from_vec(field, rows.len(), cols, data)
}

pub(crate) fn render_rows<F: Field>(m: &Matrix<F>) -> Vec<Vec<serde_json::Value>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| serde_json::Value::String(m.field().render(m.get(r, c))))
                .collect()
        })
        .collect()
}

impl ExactMatrix {
    pub fn from_json(j: &MatrixJson) -> Result<Self> {
        Ok(match j.field {
            FieldSpec::Rationals => ExactMatrix::Rational(parse_rows(&Rationals, &j.matrix, None)?),
            FieldSpec::Prime(p) => ExactMatrix::Prime(parse_rows(&PrimeField::new(p)?, &j.matrix, None)?),
        })
    }

    pub fn to_json(&self) -> MatrixJson {
        match self {
            ExactMatrix::Rational(m) => MatrixJson { field: FieldSpec::Rationals, matrix: render_rows(m) },
            ExactMatrix::Prime(m) => MatrixJson { field: m.field().spec(), matrix: render_rows(m) },
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            ExactMatrix::Rational(_) => FieldSpec::Rationals,
            ExactMatrix::Prime(m) => m.field().spec(),
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            ExactMatrix::Rational(m) => m.rows(),
            ExactMatrix::Prime(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            ExactMatrix::Rational(m) => m.cols(),
            ExactMatrix::Prime(m) => m.cols(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            ExactMatrix::Rational(m) => m.rank(),
            ExactMatrix::Prime(m) => m.rank(),
        }
    }

    pub fn rref(&self) -> ExactMatrix {
        match self {
            ExactMatrix::Rational(m) => ExactMatrix::Rational(m.rref()),
            ExactMatrix::Prime(m) => ExactMatrix::Prime(m.rref()),
        }
    }

    pub fn jordan_type(&self) -> Result<Partition> {
        match self {
            ExactMatrix::Rational(m) => m.jordan_type(),
            ExactMatrix::Prime(m) => m.jordan_type(),
        }
    }
}

/// Subspaces stored as the row space of a matrix in rref.
pub mod subspace {
    use super::*;

    /// Canonical basis (rref rows, zero rows dropped) of the row space.
    pub fn canonical<F: Field>(m: &Matrix<F>) -> Matrix<F> {
        let (r, pivots) = m.rref_with_pivots();
        r.block(0, 0, pivots.len(), m.cols())
    }

    /// Rows spanning the annihilator `{w : w · s = 0 for all rows s of basis}`.
    pub fn annihilator<F: Field>(basis: &Matrix<F>) -> Matrix<F> {
        let ker = basis.kernel_basis();
        let f = basis.field();
        Matrix::from_fn(f, ker.len(), basis.cols(), |r, c| ker[r][c].clone())
    }

    /// Rows spanning `{x in row space of domain : map * x in row space of target}`.
    pub fn preimage_within<F: Field>(map: &Matrix<F>, domain: &Matrix<F>, target: &Matrix<F>) -> Result<Matrix<F>> {
        let f = map.field();
        if domain.rows() == 0 {
            return Ok(Matrix::zeros(f, 0, map.cols()));
        }
        let ann = annihilator(target);
        // coefficients c with ann * map * domain^T * c = 0
        let cond = ann.mul(map)?.mul(&domain.transpose())?;
        let coeffs = cond.kernel_basis();
        let rows: Vec<Vec<F::Elem>> = coeffs
            .iter()
            .map(|c| domain.transpose().mul_vec(c))
            .collect::<Result<_>>()?;
        Ok(canonical(&Matrix::from_fn(f, rows.len(), map.cols(), |r, c| rows[r][c].clone())))
    }

    /// Rows of `sup` extending a basis of `sub` to a basis of `sup`.
    pub fn complement<F: Field>(sub: &Matrix<F>, sup: &Matrix<F>) -> Matrix<F> {
        let mut acc = sub.clone();
        let mut rank = acc.rank();
        let mut picked = Matrix::zeros(sub.field(), 0, sup.cols());
        for r in 0..sup.rows() {
            let row = sup.block(r, 0, 1, sup.cols());
            let cand = acc.vstack(&row).expect("same width");
            let cand_rank = cand.rank();
            if cand_rank > rank {
                acc = cand;
                rank = cand_rank;
                picked = picked.vstack(&row).expect("same width");
            }
        }
        picked
    }

    pub fn contains<F: Field>(basis: &Matrix<F>, v: &[F::Elem]) -> Result<bool> {
        let f = basis.field();
        let row = Matrix::from_fn(f, 1, v.len(), |_, c| v[c].clone());
        Ok(basis.vstack(&row)?.rank() == basis.rank())
    }

    /// Calls `visit` with the rref basis of every `k`-dimensional subspace of
    /// `F_p^dim`.
    pub fn for_each_subspace(field: &PrimeField, dim: usize, k: usize, visit: &mut dyn FnMut(&Matrix<PrimeField>)) {
        if k > dim {
            return;
        }
        let p = field.modulus();
        let mut pivots: Vec<usize> = (0..k).collect();
        loop {
            // free slots: entries right of each pivot in non-pivot columns
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| {
                    let piv = &pivots;
                    (piv[r] + 1..dim).filter(move |c| !piv.contains(c)).map(move |c| (r, c))
                })
                .collect();
            let mut digits = vec![0u64; free.len()];
            loop {
                let mut m = Matrix::zeros(field, k, dim);
                for (r, &c) in pivots.iter().enumerate() {
                    m.set(r, c, 1);
                }
                for (&(r, c), &d) in free.iter().zip(&digits) {
                    m.set(r, c, d);
                }
                visit(&m);
                if !increment(&mut digits, p) {
                    break;
                }
            }
            if !next_combination(&mut pivots, dim) {
                break;
            }
        }
    }

    /// Odometer increment in base `p`; false when it wraps around.
    pub fn increment(digits: &mut [u64], p: u64) -> bool {
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                return true;
            }
            *d = 0;
        }
        false
    }

    fn next_combination(c: &mut [usize], n: usize) -> bool {
        let k = c.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> Matrix<Rationals> {
        Matrix::from_i64_rows(&Rationals, rows).unwrap()
    }

    fn jordan_block_diag(parts: &[usize]) -> Matrix<Rationals> {
        let n: usize = parts.iter().sum();
        let mut m = Matrix::zeros(&Rationals, n, n);
        let mut off = 0;
        for &b in parts {
            for k in 1..b {
                m.set(off + k - 1, off + k, Rationals.one());
            }
            off += b;
        }
        m
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(&Rationals, 4).rank(), 4);
        assert_eq!(Matrix::zeros(&Rationals, 3, 5).rank(), 0);
        assert_eq!(q(&[vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn rref_is_reduced() {
        let m = q(&[vec![2, 4, 1], vec![1, 2, 3]]);
        let r = m.rref();
        assert_eq!(r, q(&[vec![1, 2, 0], vec![0, 0, 1]]));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = q(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(m.mul_vec(&v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn jordan_type_examples() {
        assert_eq!(Matrix::zeros(&Rationals, 3, 3).jordan_type().unwrap().parts(), &[1, 1, 1]);
        assert_eq!(jordan_block_diag(&[3]).jordan_type().unwrap().parts(), &[3]);
        assert_eq!(jordan_block_diag(&[2, 1]).jordan_type().unwrap().parts(), &[2, 1]);
        assert_eq!(Matrix::identity(&Rationals, 2).jordan_type(), Err(Error::NotNilpotent));
    }

    #[test]
    fn inverse_and_singular() {
        let m = q(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&Rationals, 2));
        assert_eq!(q(&[vec![1, 2], vec![2, 4]]).inverse(), Err(Error::Singular));
        let f5 = PrimeField::new(5).unwrap();
        let m5 = Matrix::from_i64_rows(&f5, &[vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(m5.mul(&m5.inverse().unwrap()).unwrap(), Matrix::identity(&f5, 2));
        assert_eq!(Matrix::identity(&Rationals, 0).inverse().unwrap().rows(), 0);
    }

    #[test]
    fn parses_fractions_and_residues() {
        assert_eq!(Rationals.render(&Rationals.parse_elem("6/-4").unwrap()), "-3/2");
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.parse_elem("1/2").unwrap(), 4);
        assert!(f7.parse_elem("1/7").is_err());
        assert_eq!("F5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert!("F6".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn subspace_enumeration_counts() {
        let f2 = PrimeField::new(2).unwrap();
        let mut n = 0;
        subspace::for_each_subspace(&f2, 4, 2, &mut |_| n += 1);
        assert_eq!(n, 35);
        let f3 = PrimeField::new(3).unwrap();
        let mut n = 0;
        subspace::for_each_subspace(&f3, 3, 1, &mut |_| n += 1);
        assert_eq!(n, 13);
    }

    #[test]
    fn preimage_of_a_line() {
        // x = e2 -> e1; preimage of span(e1) is everything
        let x = q(&[vec![0, 1], vec![0, 0]]);
        let whole = Matrix::identity(&Rationals, 2);
        let line = q(&[vec![1, 0]]);
        assert_eq!(subspace::preimage_within(&x, &whole, &line).unwrap().rows(), 2);
        let zero = Matrix::zeros(&Rationals, 0, 2);
        assert_eq!(subspace::preimage_within(&x, &whole, &zero).unwrap(), line);
    }
}
