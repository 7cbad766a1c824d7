//! Truncated lattice model of the affine Grassmannian of `GL(m)`.
//!
//! A lattice `L ⊇ L_0` with `dim L / L_0 = N` is stored as the subspace
//! `U = L / L_0` of the slab `W_K = V ⊗ span(z^-1, ..., z^-K)`, where `z`
//! lowers the pole order and kills `z^-1 V`. Coordinates are ordered
//! `z^-1 e_1, ..., z^-1 e_m, z^-2 e_1, ...`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{is_dominated, q_multinomial, Composition, Partition};
use crate::error::{Error, Result};
use crate::linalg::{parse_rows, render_rows, subspace, Field, FieldSpec, Matrix, PrimeField};
use crate::slice::{count_slice_points, in_slice, SliceFrame};

/// Coordinate of `z^-k e_i` (`k` 1-based, `i` 0-based).
pub fn coord(m: usize, k: usize, i: usize) -> usize {
    (k - 1) * m + i
}

/// Matrix of `z` acting on column vectors of `W_depth`.
pub fn z_operator<F: Field>(field: &F, m: usize, depth: usize) -> Matrix<F> {
    let mut z = Matrix::zeros(field, m * depth, m * depth);
    for k in 2..=depth {
        for i in 0..m {
            z.set(coord(m, k - 1, i), coord(m, k, i), field.one());
        }
    }
    z
}

/// Applies `z^power` to every row of `rows` (rows are vectors of `W_depth`).
fn shift_rows<F: Field>(rows: &Matrix<F>, m: usize, power: usize) -> Matrix<F> {
    let f = rows.field();
    Matrix::from_fn(f, rows.rows(), rows.cols(), |r, c| {
        let src = c + power * m;
        if src < rows.cols() {
            rows.get(r, src).clone()
        } else {
            f.zero()
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeRep<F: Field> {
    m: usize,
    depth: usize,
    basis: Matrix<F>,
}

impl<F: Field> LatticeRep<F> {
    /// Checks z-stability and stores the canonical rref basis.
    pub fn from_basis(m: usize, depth: usize, basis: &Matrix<F>) -> Result<Self> {
        if basis.cols() != m * depth {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} columns, expected m*K = {}",
                basis.cols(),
                m * depth
            )));
        }
        let basis = subspace::canonical(basis);
        let shifted = shift_rows(&basis, m, 1);
        if basis.vstack(&shifted)?.rank() != basis.rows() {
            return Err(Error::Precondition("subspace is not z-stable".into()));
        }
        Ok(LatticeRep { m, depth, basis })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `N = dim L / L_0`.
    pub fn codim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn field(&self) -> F {
        self.basis.field().clone()
    }

    /// The same lattice in a deeper slab.
    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        if depth < self.depth {
            let tail_zero = (0..self.basis.rows())
                .all(|r| (depth * self.m..self.depth * self.m).all(|c| self.field().is_zero(self.basis.get(r, c))));
            if !tail_zero {
                return Err(Error::Precondition(format!("lattice does not fit in depth {depth}")));
            }
        }
        let f = self.field();
        let b = Matrix::from_fn(&f, self.basis.rows(), depth * self.m, |r, c| {
            if c < self.depth * self.m {
                self.basis.get(r, c).clone()
            } else {
                f.zero()
            }
        });
        Ok(LatticeRep { m: self.m, depth, basis: b })
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            schema: crate::SCHEMA.to_string(),
            m: self.m,
            k: self.depth,
            field: self.field().spec(),
            basis: render_rows(&self.basis),
        }
    }

    pub fn from_json(field: &F, j: &LatticeJson) -> Result<Self> {
        if j.field != field.spec() {
            return Err(Error::Parse(format!("lattice is over {}, expected {}", j.field, field.spec())));
        }
        let basis = parse_rows(field, &j.basis, Some(j.m * j.k))?;
        Self::from_basis(j.m, j.k, &basis)
    }
}

/// `{m, K, field, basis}` with `basis` a row-major matrix of entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeJson {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub m: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub field: FieldSpec,
    pub basis: Vec<Vec<serde_json::Value>>,
}

fn default_schema() -> String {
    crate::SCHEMA.to_string()
}

fn check_fits(lambda: &Partition, m: usize, depth: usize) -> Result<()> {
    if lambda.len() > m {
        return Err(Error::Precondition(format!("{lambda} has more than m = {m} parts")));
    }
    if lambda.largest() > depth {
        return Err(Error::Precondition(format!("{lambda} does not fit in depth K = {depth}")));
    }
    Ok(())
}

/// `L_lambda = ⊕ C[[z]] z^{-lambda_i} e_i`.
pub fn l_lambda<F: Field>(field: &F, lambda: &Partition, m: usize, depth: usize) -> Result<LatticeRep<F>> {
    check_fits(lambda, m, depth)?;
    let mut rows = Vec::new();
    for (i, &li) in lambda.parts().iter().enumerate() {
        for k in 1..=li {
            rows.push(coord(m, k, i));
        }
    }
    let basis = Matrix::from_fn(field, rows.len(), m * depth, |r, c| {
        if rows[r] == c {
            field.one()
        } else {
            field.zero()
        }
    });
    LatticeRep::from_basis(m, depth, &basis)
}

/// Orbit type of `L`: the Jordan type of `z` on `L / L_0`.
pub fn lattice_type<F: Field>(lattice: &LatticeRep<F>) -> Partition {
    let mut ranks = vec![lattice.codim()];
    let mut power = 1;
    while *ranks.last().expect("nonempty") > 0 {
        ranks.push(shift_rows(&lattice.basis, lattice.m, power).rank());
        power += 1;
    }
    let conj: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    Partition::new(conj).expect("rank drops of a nilpotent decrease").transpose()
}

/// `L` lies in the closure of the orbit of type `mu`.
pub fn in_orbit_closure<F: Field>(lattice: &LatticeRep<F>, mu: &Partition) -> Result<bool> {
    is_dominated(&lattice_type(lattice), mu)
}

/// `g = 1 + sum_s g_s z^-s` in the congruence subgroup; `coeffs[s - 1] = g_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceElement<F: Field> {
    pub coeffs: Vec<Matrix<F>>,
}

impl<F: Field> CongruenceElement<F> {
    pub fn identity() -> Self {
        CongruenceElement { coeffs: Vec::new() }
    }

    pub fn new(coeffs: Vec<Matrix<F>>) -> Result<Self> {
        if let Some(m) = coeffs.first().map(Matrix::rows) {
            if coeffs.iter().any(|g| g.rows() != m || g.cols() != m) {
                return Err(Error::DimensionMismatch("congruence coefficients must be m x m".into()));
            }
        }
        Ok(CongruenceElement { coeffs })
    }
}

/// An accepted translate `g · L_lambda` together with its generators
/// `w_i = g z^{-lambda_i} e_i mod L_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceTranslate<F: Field> {
    pub lambda: Partition,
    pub lattice: LatticeRep<F>,
    pub generators: Vec<Vec<F::Elem>>,
}

/// `g · L_lambda` when it contains `L_0` with `dim g L_lambda / L_0 = |lambda|`,
/// otherwise `None`.
///
/// The z-closure of the generators is computed in a slab deep enough to hold
/// every term of `g z^{-lambda_i} e_i`, so nothing is truncated away.
pub fn translate_slice<F: Field>(
    field: &F,
    lambda: &Partition,
    g: &CongruenceElement<F>,
    m: usize,
    depth: usize,
) -> Result<Option<SliceTranslate<F>>> {
    check_fits(lambda, m, depth)?;
    let n = lambda.size();
    if depth < n {
        return Err(Error::Precondition(format!("depth K = {depth} < N = {n}")));
    }
    if g.coeffs.first().is_some_and(|g1| g1.rows() != m) {
        return Err(Error::DimensionMismatch("congruence element has the wrong rank".into()));
    }
    let big = depth.max(lambda.largest() + g.coeffs.len()).max(1);
    let gens: Vec<Vec<F::Elem>> = (0..m)
        .map(|i| {
            let li = lambda.part(i);
            let mut w = vec![field.zero(); m * big];
            if li > 0 {
                w[coord(m, li, i)] = field.one();
            }
            for (s0, gs) in g.coeffs.iter().enumerate() {
                let k = li + s0 + 1;
                for j in 0..m {
                    let idx = coord(m, k, j);
                    w[idx] = field.add(&w[idx], gs.get(j, i));
                }
            }
            w
        })
        .collect();
    let gen_rows = Matrix::from_fn(field, m, m * big, |r, c| gens[r][c].clone());
    let mut span = gen_rows.clone();
    for t in 1..big {
        span = span.vstack(&shift_rows(&gen_rows, m, t))?;
    }
    let closure = subspace::canonical(&span);
    if closure.rows() != n {
        return Ok(None);
    }
    // dim = N forces z^N to vanish on the closure, so it sits inside W_N
    let trunc = |rows: &Matrix<F>| Matrix::from_fn(field, rows.rows(), m * depth, |r, c| rows.get(r, c).clone());
    let lattice = LatticeRep::from_basis(m, depth, &trunc(&closure))?;
    let generators = gens.iter().map(|w| w[..m * depth].to_vec()).collect();
    Ok(Some(SliceTranslate { lambda: lambda.clone(), lattice, generators }))
}

/// Matrix of `z` on `L / L_0` as a point of the slice `T_x`.
///
/// In the adapted basis `z^{lambda_i - k} w_i` the operator is the standard
/// nilpotent plus corrections in the columns `e_{1,i}`. The generators are
/// first normalized: `w_i` is reduced by shifts of the generators of longer
/// blocks until `z^{lambda_i} w_i` has no component along `e_{k,j}` with
/// `k <= lambda_j - lambda_i`. That normal form depends only on the lattice.
/// Reading the operator through the dual basis in reversed order
/// (`e_{k,i} <-> e_{lambda_i + 1 - k, i}`) then puts the corrections in the
/// rows `e_{lambda_i, i}`, which is the shape of `T_x`.
pub fn z_matrix_on_quotient<F: Field>(t: &SliceTranslate<F>) -> Result<Matrix<F>> {
    let gens = normalized_generators(t)?;
    let z_adapted = adapted_matrix(&t.lattice, &t.lambda, &gens)?;
    let frame = SliceFrame::new(&t.lambda);
    let n = frame.dim();
    let f = z_adapted.field().clone();
    let rev: Vec<usize> = (0..n)
        .map(|pos| {
            let (k, i) = frame.label(pos);
            frame.index(t.lambda.part(i) + 1 - k, i)
        })
        .collect();
    let out = Matrix::from_fn(&f, n, n, |r, c| z_adapted.get(rev[c], rev[r]).clone());
    if !in_slice(&out, &t.lambda)? {
        return Err(Error::Precondition("z-matrix is not in the slice".into()));
    }
    if out.jordan_type()? != lattice_type(&t.lattice) {
        return Err(Error::Precondition("z-matrix type differs from the lattice type".into()));
    }
    Ok(out)
}

/// Matrix of `z` in the basis `e_{k,i} = z^{lambda_i - k} w_i` built from the
/// generators as given.
pub fn z_matrix_adapted<F: Field>(t: &SliceTranslate<F>) -> Result<Matrix<F>> {
    adapted_matrix(&t.lattice, &t.lambda, &t.generators)
}

fn adapted_basis<F: Field>(lattice: &LatticeRep<F>, lambda: &Partition, gens: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let m = lattice.m;
    let frame = SliceFrame::new(lambda);
    let mut cols: Vec<Vec<F::Elem>> = vec![Vec::new(); frame.dim()];
    for (i, &li) in lambda.parts().iter().enumerate() {
        for k in 1..=li {
            cols[frame.index(k, i)] = shift_vec(&lattice.field(), &gens[i], m, li - k);
        }
    }
    cols
}

fn shift_vec<F: Field>(field: &F, v: &[F::Elem], m: usize, power: usize) -> Vec<F::Elem> {
    (0..v.len())
        .map(|c| v.get(c + power * m).cloned().unwrap_or_else(|| field.zero()))
        .collect()
}

fn adapted_matrix<F: Field>(lattice: &LatticeRep<F>, lambda: &Partition, gens: &[Vec<F::Elem>]) -> Result<Matrix<F>> {
    let f = lattice.field();
    let cols = adapted_basis(lattice, lambda, gens);
    let n = cols.len();
    let basis = Matrix::from_columns(&f, lattice.m * lattice.depth, &cols);
    if basis.rank() != n {
        return Err(Error::BasisDegenerate);
    }
    let mut out = Matrix::zeros(&f, n, n);
    for (c, col) in cols.iter().enumerate() {
        let image = shift_vec(&f, col, lattice.m, 1);
        let coords = basis.solve(&image)?.ok_or(Error::BasisDegenerate)?;
        for (r, x) in coords.into_iter().enumerate() {
            out.set(r, c, x);
        }
    }
    Ok(out)
}

fn normalized_generators<F: Field>(t: &SliceTranslate<F>) -> Result<Vec<Vec<F::Elem>>> {
    let lambda = &t.lambda;
    let f = t.lattice.field();
    let m = t.lattice.m;
    let frame = SliceFrame::new(lambda);
    let n = frame.dim();
    let mut gens = t.generators.clone();
    for _ in 0..=n * n * t.lattice.depth {
        let a = adapted_matrix(&t.lattice, lambda, &gens)?;
        let offending = (0..lambda.len()).find_map(|i| {
            let col = frame.index(1, i);
            (0..n).find_map(|row| {
                let (k, j) = frame.label(row);
                let li = lambda.part(i);
                (k + li <= lambda.part(j) && !f.is_zero(a.get(row, col))).then(|| (i, j, k, a.get(row, col).clone()))
            })
        });
        let Some((i, j, k, c)) = offending else {
            return Ok(gens);
        };
        // z^{lambda_i} of z^{lambda_j - k - lambda_i} w_j is the basis vector e_{k,j}
        let li = lambda.part(i);
        let correction = shift_vec(&f, &gens[j], m, lambda.part(j) - k - li);
        for (x, y) in gens[i].iter_mut().zip(&correction) {
            *x = f.sub(x, &f.mul(&c, y));
        }
    }
    Err(Error::BasisDegenerate)
}

/// `|GL_m(F_q) · L_lambda|`: the q-multinomial of the multiplicities of the
/// distinct values of `lambda` padded to `m` parts.
pub fn count_orbit_points(lambda: &Partition, m: usize, q: u64) -> Result<u128> {
    let padded = lambda.padded(m)?;
    let mut mults: Vec<usize> = Vec::new();
    let mut prev = None;
    for &x in &padded {
        if prev == Some(x) {
            *mults.last_mut().expect("nonempty") += 1;
        } else {
            mults.push(1);
            prev = Some(x);
        }
    }
    q_multinomial(&Composition::new(mults), q)
}

/// `|GL_m(F_q) · L_lambda|` by applying every invertible matrix and counting
/// distinct lattices. Cost is `q^(m^2)`.
pub fn count_orbit_points_by_enumeration(lambda: &Partition, m: usize, q: u64, budget: u128) -> Result<u128> {
    let field = PrimeField::new(q)?;
    let needed = u128::from(q).checked_pow((m * m) as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, limit: budget });
    }
    let depth = lambda.largest().max(1);
    let base = l_lambda(&field, lambda, m, depth)?;
    let mut seen = BTreeSet::new();
    let mut digits = vec![0u64; m * m];
    loop {
        let g = Matrix::from_vec(&field, m, m, digits.clone())?;
        if g.rank() == m {
            let blocks = Matrix::from_fn(&field, m * depth, m * depth, |r, c| {
                if r / m == c / m {
                    *g.get(r % m, c % m)
                } else {
                    0
                }
            });
            let moved = subspace::canonical(&base.basis.mul(&blocks.transpose())?);
            seen.insert(moved.entries().to_vec());
        }
        if !subspace::increment(&mut digits, q) {
            break;
        }
    }
    Ok(seen.len() as u128)
}

/// Every z-stable subspace of `W_depth` over `F_q` of dimension at most `top`,
/// grouped by dimension.
///
/// A z-stable `U` is determined by `U' = zU` (z-stable, inside `W_{depth-1}`)
/// and the subspace `U / U'` of `z^-1(U') / U'`, which has dimension `m`; the
/// only constraint is that `z` maps `U` onto `U'`.
pub fn z_stable_subspaces(field: &PrimeField, m: usize, depth: usize, top: usize, budget: u128) -> Result<Vec<Vec<Matrix<PrimeField>>>> {
    let ambient = m * depth;
    let z = z_operator(field, m, depth);
    let whole = Matrix::identity(field, ambient);
    let mut by_dim: Vec<Vec<Matrix<PrimeField>>> = vec![vec![Matrix::zeros(field, 0, ambient)]];
    let mut visited: u128 = 0;
    let inner_limit = (depth.saturating_sub(1)) * m;
    for dim in 1..=top {
        let mut found = Vec::new();
        for t in dim.saturating_sub(m)..dim {
            for image in &by_dim[t] {
                // zU must lie in the image of z, i.e. have no z^-depth component
                let fits = (0..image.rows()).all(|r| (inner_limit..ambient).all(|c| *image.get(r, c) == 0));
                if !fits {
                    continue;
                }
                let pre = subspace::preimage_within(&z, &whole, image)?;
                let complement = subspace::complement(image, &pre);
                let k = dim - t;
                let mut err = None;
                subspace::for_each_subspace(field, complement.rows(), k, &mut |x| {
                    if err.is_some() {
                        return;
                    }
                    visited += 1;
                    if visited > budget {
                        err = Some(Error::BudgetExceeded { needed: visited, limit: budget });
                        return;
                    }
                    let lift = x.mul(&complement).expect("shapes");
                    let u = image.vstack(&lift).expect("shapes");
                    if shift_rows(&u, m, 1).rank() == t {
                        found.push(subspace::canonical(&u));
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
        }
        by_dim.push(found);
    }
    Ok(by_dim)
}

/// Number of lattices `L_0 ⊆ L` with `dim L / L_0 = |mu|` in the closure of
/// the orbit of type `mu`, over `F_q`.
pub fn count_grassmannian_points(mu: &Partition, m: usize, q: u64, budget: u128) -> Result<u128> {
    if mu.len() > m {
        return Err(Error::Precondition(format!("{mu} has more than m = {m} parts")));
    }
    let field = PrimeField::new(q)?;
    let n = mu.size();
    let depth = n.max(1);
    let all = z_stable_subspaces(&field, m, depth, n, budget)?;
    let mut count = 0;
    for u in &all[n] {
        let lattice = LatticeRep { m, depth, basis: u.clone() };
        if in_orbit_closure(&lattice, mu)? {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub lambda: Vec<usize>,
    pub orbit_points: u128,
    pub slice_points: u128,
    pub contribution: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub mu: Vec<usize>,
    pub m: usize,
    pub q: u64,
    pub grassmannian_points: u128,
    pub strata: Vec<Stratum>,
    pub strata_total: u128,
    pub holds: bool,
}

/// Compares `|closure(G_mu)(F_q)|` with the sum over strata `lambda <= mu` of
/// `|G · L_lambda| · |T_x ∩ closure(O_mu)|`.
pub fn decomposition_check(mu: &Partition, m: usize, q: u64, budget: u128) -> Result<DecompositionReport> {
    let lhs = count_grassmannian_points(mu, m, q, budget)?;
    let mut strata = Vec::new();
    for lambda in crate::combinatorics::partitions_of(mu.size()) {
        if lambda.len() > m || !is_dominated(&lambda, mu)? {
            continue;
        }
        let orbit_points = count_orbit_points(&lambda, m, q)?;
        let slice_points = count_slice_points(&lambda, mu, q, budget)?;
        strata.push(Stratum {
            lambda: lambda.padded(m)?,
            orbit_points,
            slice_points,
            contribution: orbit_points * slice_points,
        });
    }
    let strata_total = strata.iter().map(|s| s.contribution).sum();
    Ok(DecompositionReport {
        mu: mu.padded(m)?,
        m,
        q,
        grassmannian_points: lhs,
        strata,
        strata_total,
        holds: lhs == strata_total,
    })
}

pub type TranslateVisitor<'a> = dyn FnMut(&CongruenceElement<PrimeField>, SliceTranslate<PrimeField>) -> Result<()> + 'a;

/// Calls `visit` on every accepted translate `g · L_lambda` for `g` ranging
/// over all congruence elements with coefficients `g_1, ..., g_{depth-1}`.
pub fn for_each_slice_translate(
    field: &PrimeField,
    lambda: &Partition,
    m: usize,
    depth: usize,
    budget: u128,
    visit: &mut TranslateVisitor<'_>,
) -> Result<()> {
    let q = field.modulus();
    let slots = m * m * depth.saturating_sub(1);
    let needed = u128::from(q).checked_pow(slots as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, limit: budget });
    }
    let mut digits = vec![0u64; slots];
    loop {
        let coeffs = digits
            .chunks(m * m)
            .map(|c| Matrix::from_vec(field, m, m, c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let g = CongruenceElement::new(coeffs)?;
        if let Some(t) = translate_slice(field, lambda, &g, m, depth)? {
            visit(&g, t)?;
        }
        if !subspace::increment(&mut digits, q) {
            break;
        }
    }
    Ok(())
}

/// Whether `lattice` lies in the congruence-subgroup orbit of `L_lambda`.
///
/// Solves the linear conditions `g z^{-lambda_i} e_i ∈ L` on the coefficients of
/// `g` (degree below the lattice depth) and searches the affine solution set
/// for an accepted translate.
pub fn slice_orbit_contains(lambda: &Partition, lattice: &LatticeRep<PrimeField>, budget: u128) -> Result<bool> {
    let field = lattice.field();
    let (m, depth) = (lattice.m, lattice.depth);
    check_fits(lambda, m, depth)?;
    if lattice.codim() != lambda.size() {
        return Ok(false);
    }
    let degree = depth.saturating_sub(1);
    let big = depth + lambda.largest() + degree;
    let deep = lattice.with_depth(big)?;
    let ann = subspace::annihilator(&deep.basis);
    let unknowns = m * m * degree;
    // entry (j, i) of g_s is unknown number (s - 1) m^2 + j m + i
    let mut sys = Matrix::zeros(&field, 0, unknowns);
    let mut rhs = Vec::new();
    for i in 0..m {
        let li = lambda.part(i);
        let mut lin = Matrix::zeros(&field, m * big, unknowns);
        let mut constant = vec![0u64; m * big];
        if li > 0 {
            constant[coord(m, li, i)] = 1;
        }
        for s in 1..=degree {
            for j in 0..m {
                lin.set(coord(m, li + s, j), (s - 1) * m * m + j * m + i, 1);
            }
        }
        let a = ann.mul(&lin)?;
        let c = ann.mul_vec(&constant)?;
        sys = sys.vstack(&a)?;
        rhs.extend(c.iter().map(|x| field.neg(x)));
    }
    let Some(base) = sys.solve(&rhs)? else {
        return Ok(false);
    };
    let kernel = sys.kernel_basis();
    let q = field.modulus();
    let needed = u128::from(q).checked_pow(kernel.len() as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, limit: budget });
    }
    let mut digits = vec![0u64; kernel.len()];
    loop {
        let mut sol = base.clone();
        for (t, kv) in digits.iter().zip(&kernel) {
            for (s, k) in sol.iter_mut().zip(kv) {
                *s = field.add(s, &field.mul(t, k));
            }
        }
        let coeffs = sol
            .chunks(m * m)
            .map(|c| Matrix::from_vec(&field, m, m, c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        if let Some(t) = translate_slice(&field, lambda, &CongruenceElement::new(coeffs)?, m, depth)? {
            if t.lattice.basis == lattice.basis {
                return Ok(true);
            }
        }
        if !subspace::increment(&mut digits, q) {
            break;
        }
    }
    Ok(false)
}
