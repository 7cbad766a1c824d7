//! Points `(B, Bbar, p, q)` of the representation space `M(v, d)` of the
//! doubled `A_{n-1}` quiver with framing, the moment map, stability, the
//! `G(V)` action, and the map `phi` into the transverse slice.
//!
//! Vertices are 1-based in the docs and 0-based in the vectors: `b[i - 1]`
//! is `B_i : V_i -> V_{i+1}`, `bbar[i - 1]` is `Bbar_i : V_{i+1} -> V_i`,
//! `p[i - 1]` is `p_i : D_i -> V_i` and `q[i - 1]` is `q_i : V_i -> D_i`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{is_dominated, Partition};
use crate::dictionary::{DictionaryRecord, QuiverData};
use crate::error::{Error, Result};
use crate::linalg::{parse_rows, render_rows, subspace, Field, FieldSpec, Matrix};
use crate::slice::{in_slice, SliceFrame};

#[derive(Clone, Debug, PartialEq)]
pub struct QuiverPoint<F: Field> {
    pub data: QuiverData,
    pub b: Vec<Matrix<F>>,
    pub bbar: Vec<Matrix<F>>,
    pub p: Vec<Matrix<F>>,
    pub q: Vec<Matrix<F>>,
}

fn expect_shape<F: Field>(m: &Matrix<F>, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::DimensionMismatch(format!(
            "{what} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

impl<F: Field> QuiverPoint<F> {
    pub fn new(
        data: QuiverData,
        b: Vec<Matrix<F>>,
        bbar: Vec<Matrix<F>>,
        p: Vec<Matrix<F>>,
        q: Vec<Matrix<F>>,
    ) -> Result<Self> {
        let pt = QuiverPoint { data, b, bbar, p, q };
        pt.validate()?;
        Ok(pt)
    }

    pub fn zero(field: &F, data: &QuiverData) -> Self {
        let (v, d) = (&data.v, &data.d);
        let r = data.vertices();
        QuiverPoint {
            data: data.clone(),
            b: (0..r - 1).map(|i| Matrix::zeros(field, v[i + 1], v[i])).collect(),
            bbar: (0..r - 1).map(|i| Matrix::zeros(field, v[i], v[i + 1])).collect(),
            p: (0..r).map(|i| Matrix::zeros(field, v[i], d[i])).collect(),
            q: (0..r).map(|i| Matrix::zeros(field, d[i], v[i])).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.data.vertices();
        let (v, d) = (&self.data.v, &self.data.d);
        if self.b.len() != r - 1 || self.bbar.len() != r - 1 || self.p.len() != r || self.q.len() != r {
            return Err(Error::DimensionMismatch(format!(
                "expected {} B, {} Bbar, {r} p and {r} q maps",
                r - 1,
                r - 1
            )));
        }
        for i in 0..r - 1 {
            expect_shape(&self.b[i], v[i + 1], v[i], &format!("B_{}", i + 1))?;
            expect_shape(&self.bbar[i], v[i], v[i + 1], &format!("Bbar_{}", i + 1))?;
        }
        for i in 0..r {
            expect_shape(&self.p[i], v[i], d[i], &format!("p_{}", i + 1))?;
            expect_shape(&self.q[i], d[i], v[i], &format!("q_{}", i + 1))?;
        }
        Ok(())
    }

    pub fn field(&self) -> F {
        self.p[0].field().clone()
    }
}

/// JSON form of a point: `{"schema", "field", "n", "v", "d", "b", "bbar",
/// "p", "q"}`, each map a list of row-major matrices with the shapes fixed by
/// `v` and `d`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuiverPointJson {
    #[serde(default = "schema_tag")]
    pub schema: String,
    pub field: FieldSpec,
    pub n: usize,
    pub v: Vec<usize>,
    pub d: Vec<usize>,
    #[serde(default)]
    pub b: Vec<Vec<Vec<serde_json::Value>>>,
    #[serde(default)]
    pub bbar: Vec<Vec<Vec<serde_json::Value>>>,
    #[serde(default)]
    pub p: Vec<Vec<Vec<serde_json::Value>>>,
    #[serde(default)]
    pub q: Vec<Vec<Vec<serde_json::Value>>>,
}

fn schema_tag() -> String {
    crate::SCHEMA.to_string()
}

impl QuiverPointJson {
    pub fn data(&self) -> Result<QuiverData> {
        QuiverData::new(self.n, self.v.clone(), self.d.clone())
    }

    /// Parses the maps over `field`; missing maps are zero.
    pub fn to_point<F: Field>(&self, field: &F) -> Result<QuiverPoint<F>> {
        let data = self.data()?;
        let (v, d) = (&data.v, &data.d);
        let r = data.vertices();
        let read = |list: &[Vec<Vec<serde_json::Value>>], count: usize, shape: &dyn Fn(usize) -> (usize, usize), name: &str| {
            if list.is_empty() {
                return Ok((0..count).map(|i| Matrix::zeros(field, shape(i).0, shape(i).1)).collect());
            }
            if list.len() != count {
                return Err(Error::Parse(format!("{name} has {} matrices, expected {count}", list.len())));
            }
            list.iter()
                .enumerate()
                .map(|(i, rows)| {
                    let (nr, nc) = shape(i);
                    if rows.len() != nr {
                        return Err(Error::Parse(format!("{name}_{} has {} rows, expected {nr}", i + 1, rows.len())));
                    }
                    parse_rows(field, rows, Some(nc))
                })
                .collect::<Result<Vec<_>>>()
        };
        let b = read(&self.b, r - 1, &|i| (v[i + 1], v[i]), "b")?;
        let bbar = read(&self.bbar, r - 1, &|i| (v[i], v[i + 1]), "bbar")?;
        let p = read(&self.p, r, &|i| (v[i], d[i]), "p")?;
        let q = read(&self.q, r, &|i| (d[i], v[i]), "q")?;
        QuiverPoint::new(data, b, bbar, p, q)
    }

    pub fn from_point<F: Field>(pt: &QuiverPoint<F>) -> Self {
        let rows = |ms: &[Matrix<F>]| ms.iter().map(render_rows).collect();
        QuiverPointJson {
            schema: schema_tag(),
            field: pt.field().spec(),
            n: pt.data.n,
            v: pt.data.v.clone(),
            d: pt.data.d.clone(),
            b: rows(&pt.b),
            bbar: rows(&pt.bbar),
            p: rows(&pt.p),
            q: rows(&pt.q),
        }
    }
}

/// Component at vertex `i`: `B_{i-1} Bbar_{i-1} - Bbar_i B_i + p_i q_i`, with
/// out-of-range terms omitted. With this sign `phi` is nilpotent on all of
/// `Lambda(v, d)`.
pub fn moment_map<F: Field>(pt: &QuiverPoint<F>) -> Result<Vec<Matrix<F>>> {
    pt.validate()?;
    let r = pt.data.vertices();
    (0..r)
        .map(|i| {
            let mut m = pt.p[i].mul(&pt.q[i])?;
            if i + 1 < r {
                m = m.sub(&pt.bbar[i].mul(&pt.b[i])?)?;
            }
            if i > 0 {
                m = m.add(&pt.b[i - 1].mul(&pt.bbar[i - 1])?)?;
            }
            Ok(m)
        })
        .collect()
}

/// `moment_map(pt)_i = c_i · Id` at every vertex.
pub fn in_lambda_c<F: Field>(pt: &QuiverPoint<F>, c: &[F::Elem]) -> Result<bool> {
    let r = pt.data.vertices();
    if c.len() != r {
        return Err(Error::DimensionMismatch(format!("{} central scalars for {r} vertices", c.len())));
    }
    let f = pt.field();
    let mm = moment_map(pt)?;
    Ok(mm.iter().zip(c).all(|(m, ci)| {
        let target = Matrix::identity(&f, m.rows()).scale(ci);
        *m == target
    }))
}

pub fn in_lambda<F: Field>(pt: &QuiverPoint<F>) -> Result<bool> {
    let f = pt.field();
    in_lambda_c(pt, &vec![f.zero(); pt.data.vertices()])
}

/// No nonzero graded subspace `S ⊆ ker q` is stable under all `B` and `Bbar`.
pub fn is_stable<F: Field>(pt: &QuiverPoint<F>) -> Result<bool> {
    pt.validate()?;
    let f = pt.field();
    let r = pt.data.vertices();
    let v = &pt.data.v;
    let mut s: Vec<Matrix<F>> = (0..r)
        .map(|i| {
            let ker = pt.q[i].kernel_basis();
            Matrix::from_fn(&f, ker.len(), v[i], |a, c| ker[a][c].clone())
        })
        .collect();
    loop {
        let mut next = Vec::with_capacity(r);
        for i in 0..r {
            let mut cur = s[i].clone();
            if i + 1 < r {
                cur = subspace::preimage_within(&pt.b[i], &cur, &s[i + 1])?;
            }
            if i > 0 {
                cur = subspace::preimage_within(&pt.bbar[i - 1], &cur, &s[i - 1])?;
            }
            next.push(cur);
        }
        let unchanged = next.iter().zip(&s).all(|(a, b)| a.rows() == b.rows());
        s = next;
        if unchanged {
            break;
        }
    }
    Ok(s.iter().all(|x| x.rows() == 0))
}

/// An element of `G(V) = prod GL(V_i)` with its inverse factors.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<F: Field> {
    factors: Vec<Matrix<F>>,
    inverses: Vec<Matrix<F>>,
}

impl<F: Field> GroupElement<F> {
    pub fn new(factors: Vec<Matrix<F>>) -> Result<Self> {
        let inverses = factors.iter().map(Matrix::inverse).collect::<Result<_>>()?;
        Ok(GroupElement { factors, inverses })
    }

    pub fn random<R: Rng + ?Sized>(field: &F, data: &QuiverData, rng: &mut R, bound: i64) -> Self {
        GroupElement::new(random_group_element(field, data, rng, bound)).expect("invertible factors")
    }

    pub fn factors(&self) -> &[Matrix<F>] {
        &self.factors
    }

    /// `g · (B, Bbar, p, q) = (g_{i+1} B_i g_i^-1, g_i Bbar_i g_{i+1}^-1, g_i p_i, q_i g_i^-1)`.
    pub fn act(&self, pt: &QuiverPoint<F>) -> Result<QuiverPoint<F>> {
        let (g, inv) = (&self.factors, &self.inverses);
        let r = pt.data.vertices();
        if g.len() != r {
            return Err(Error::DimensionMismatch(format!("{} group factors for {r} vertices", g.len())));
        }
        for (i, gi) in g.iter().enumerate() {
            expect_shape(gi, pt.data.v[i], pt.data.v[i], &format!("g_{}", i + 1))?;
        }
        let b = (0..r - 1)
            .map(|i| g[i + 1].mul(&pt.b[i])?.mul(&inv[i]))
            .collect::<Result<_>>()?;
        let bbar = (0..r - 1)
            .map(|i| g[i].mul(&pt.bbar[i])?.mul(&inv[i + 1]))
            .collect::<Result<_>>()?;
        let p = (0..r).map(|i| g[i].mul(&pt.p[i])).collect::<Result<_>>()?;
        let q = (0..r).map(|i| pt.q[i].mul(&inv[i])).collect::<Result<_>>()?;
        Ok(QuiverPoint { data: pt.data.clone(), b, bbar, p, q })
    }
}

/// Action of the group element with factors `g` (see [`GroupElement::act`]).
pub fn group_act<F: Field>(g: &[Matrix<F>], pt: &QuiverPoint<F>) -> Result<QuiverPoint<F>> {
    let r = pt.data.vertices();
    if g.len() != r {
        return Err(Error::DimensionMismatch(format!("{} group factors for {r} vertices", g.len())));
    }
    for (i, gi) in g.iter().enumerate() {
        expect_shape(gi, pt.data.v[i], pt.data.v[i], &format!("g_{}", i + 1))?;
    }
    GroupElement::new(g.to_vec())?.act(pt)
}

fn check_record<F: Field>(pt: &QuiverPoint<F>, rec: &DictionaryRecord) -> Result<()> {
    pt.validate()?;
    let mine = pt.data.trimmed();
    if mine != rec.quiver_data().trimmed() {
        return Err(Error::DimensionMismatch(format!(
            "point has data {:?} but the record is for {:?}",
            pt.data, rec.quiver_data()
        )));
    }
    Ok(())
}

/// `x + f` with `f` assembled blockwise, without checking the moment map
/// condition or the slice postconditions.
///
/// The block from `D_{j'}` (column level `h'`) to `D_j` (top row level) is
/// `q_j B_{j-1} ... B_{h'} Bbar_{h'} ... Bbar_{j'-1} p_{j'}`, vertices 1-based.
pub fn phi_unchecked<F: Field>(pt: &QuiverPoint<F>, rec: &DictionaryRecord) -> Result<Matrix<F>> {
    check_record(pt, rec)?;
    let f = pt.field();
    let lambda = rec.lambda();
    let frame = SliceFrame::new(&lambda);
    let mut out = frame.x(&f);
    let r = pt.data.vertices();
    // blocks with lambda_i = j, in increasing i, index the basis of D_j
    let mut blocks_of = vec![Vec::new(); r + 1];
    for (i, &l) in lambda.parts().iter().enumerate() {
        if l <= r {
            blocks_of[l].push(i);
        }
    }
    for jp in 1..=r {
        let sources = &blocks_of[jp];
        if sources.is_empty() {
            continue;
        }
        let mut down = pt.p[jp - 1].clone();
        for hp in (1..=jp).rev() {
            if hp < jp {
                down = pt.bbar[hp - 1].mul(&down)?;
            }
            let mut up = down.clone();
            for j in hp..=r {
                if j > hp {
                    up = pt.b[j - 2].mul(&up)?;
                }
                let targets = &blocks_of[j];
                if targets.is_empty() {
                    continue;
                }
                let block = pt.q[j - 1].mul(&up)?;
                for (a, &ti) in targets.iter().enumerate() {
                    let row = frame.index(j, ti);
                    for (bcol, &si) in sources.iter().enumerate() {
                        let col = frame.index(hp, si);
                        let v = f.add(out.get(row, col), block.get(a, bcol));
                        out.set(row, col, v);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The map `phi` into the slice. Refuses points off the zero fiber of the
/// moment map and checks that the image lies in `T_x`, is nilpotent and has
/// Jordan type dominated by `mu`.
pub fn phi<F: Field>(pt: &QuiverPoint<F>, rec: &DictionaryRecord) -> Result<Matrix<F>> {
    check_record(pt, rec)?;
    if !in_lambda(pt)? {
        return Err(Error::NotInLambda);
    }
    let out = phi_unchecked(pt, rec)?;
    let lambda = rec.lambda();
    if !in_slice(&out, &lambda)? {
        return Err(Error::Precondition("phi image left the slice".into()));
    }
    let nu = out.jordan_type()?;
    if !is_dominated(&nu, &rec.mu())? {
        return Err(Error::Precondition(format!("phi image has type {nu} not below {}", rec.mu())));
    }
    Ok(out)
}

/// Random field element with integer representative in `[-bound, bound]`.
pub fn random_elem<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, bound: i64) -> F::Elem {
    field.from_i64(rng.gen_range(-bound..=bound))
}

pub fn random_matrix<F: Field, R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R, bound: i64) -> Matrix<F> {
    Matrix::from_fn(field, rows, cols, |_, _| random_elem(field, rng, bound))
}

/// Random invertible matrix, by rejection.
pub fn random_invertible<F: Field, R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R, bound: i64) -> Matrix<F> {
    loop {
        let g = random_matrix(field, n, n, rng, bound);
        if g.rank() == n {
            return g;
        }
    }
}

pub fn random_group_element<F: Field, R: Rng + ?Sized>(field: &F, data: &QuiverData, rng: &mut R, bound: i64) -> Vec<Matrix<F>> {
    data.v.iter().map(|&vi| random_invertible(field, vi, rng, bound)).collect()
}

/// Random point of `Lambda(v, d)` from a random recipe.
pub fn sample_lambda_point<F: Field, R: Rng + ?Sized>(field: &F, data: &QuiverData, rng: &mut R, bound: i64) -> QuiverPoint<F> {
    let recipe = FiberRecipe::random(data, rng);
    LambdaFiber::draw(field, data, &recipe, rng, bound).sample(rng, bound)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    B(usize),
    Bbar(usize),
    P(usize),
    Q(usize),
}

/// Which map of each pair `(B_i, Bbar_i)` and `(p_i, q_i)` is drawn at
/// random, and its rank. The moment map equations are linear in the other
/// maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberRecipe {
    /// `true`: `B_i` is drawn and `Bbar_i` solved for.
    pub fix_b: Vec<bool>,
    /// `true`: `p_i` is drawn and `q_i` solved for.
    pub fix_p: Vec<bool>,
    pub arrow_rank: Vec<usize>,
    pub vertex_rank: Vec<usize>,
}

impl FiberRecipe {
    /// Each fixed map is zero, of full rank, or of uniform random rank with
    /// equal odds.
    pub fn random<R: Rng + ?Sized>(data: &QuiverData, rng: &mut R) -> Self {
        let (v, d) = (&data.v, &data.d);
        let pick_rank = |top: usize, rng: &mut R| match rng.gen_range(0..3) {
            0 => 0,
            1 => top,
            _ => rng.gen_range(0..=top),
        };
        let r = data.vertices();
        let fix_b: Vec<bool> = (0..r - 1).map(|_| rng.gen_bool(0.5)).collect();
        let fix_p: Vec<bool> = (0..r).map(|_| rng.gen_bool(0.5)).collect();
        let arrow_rank = (0..r - 1).map(|i| pick_rank(v[i].min(v[i + 1]), rng)).collect();
        let vertex_rank = (0..r).map(|i| pick_rank(v[i].min(d[i]), rng)).collect();
        FiberRecipe { fix_b, fix_p, arrow_rank, vertex_rank }
    }
}

fn random_of_rank<F: Field, R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rank: usize, rng: &mut R, bound: i64) -> Matrix<F> {
    let left = random_matrix(field, rows, rank, rng, bound);
    let right = random_matrix(field, rank, cols, rng, bound);
    left.mul(&right).expect("shapes")
}

/// The points of `Lambda(v, d)` with the fixed maps of a recipe: a linear
/// space in the other maps.
#[derive(Clone, Debug)]
pub struct LambdaFiber<F: Field> {
    base: QuiverPoint<F>,
    unknowns: Vec<(Slot, usize)>,
    len: usize,
    kernel: Vec<Vec<F::Elem>>,
}

impl<F: Field> LambdaFiber<F> {
    pub fn draw<R: Rng + ?Sized>(field: &F, data: &QuiverData, recipe: &FiberRecipe, rng: &mut R, bound: i64) -> Self {
        let r = data.vertices();
        let (v, d) = (&data.v, &data.d);
        let mut base = QuiverPoint::zero(field, data);
        let mut unknowns = Vec::new();
        let mut len = 0;
        for i in 0..r - 1 {
            let rank = recipe.arrow_rank[i];
            if recipe.fix_b[i] {
                base.b[i] = random_of_rank(field, v[i + 1], v[i], rank, rng, bound);
                unknowns.push((Slot::Bbar(i), len));
            } else {
                base.bbar[i] = random_of_rank(field, v[i], v[i + 1], rank, rng, bound);
                unknowns.push((Slot::B(i), len));
            }
            len += v[i] * v[i + 1];
        }
        for i in 0..r {
            let rank = recipe.vertex_rank[i];
            if recipe.fix_p[i] {
                base.p[i] = random_of_rank(field, v[i], d[i], rank, rng, bound);
                unknowns.push((Slot::Q(i), len));
            } else {
                base.q[i] = random_of_rank(field, d[i], v[i], rank, rng, bound);
                unknowns.push((Slot::P(i), len));
            }
            len += d[i] * v[i];
        }
        let offset = |slot: Slot| unknowns.iter().find(|(s, _)| *s == slot).map(|&(_, o)| o);
        let equations: usize = v.iter().map(|x| x * x).sum();
        let mut sys = Matrix::zeros(field, equations, len);
        let mut eq0 = 0;
        for i in 0..r {
            let vi = v[i];
            if i > 0 {
                let left = (&base.b[i - 1], offset(Slot::B(i - 1)));
                let right = (&base.bbar[i - 1], offset(Slot::Bbar(i - 1)));
                add_product(&mut sys, eq0, vi, v[i - 1], true, left, right);
            }
            if i + 1 < r {
                let left = (&base.bbar[i], offset(Slot::Bbar(i)));
                let right = (&base.b[i], offset(Slot::B(i)));
                add_product(&mut sys, eq0, vi, v[i + 1], false, left, right);
            }
            add_product(&mut sys, eq0, vi, d[i], true, (&base.p[i], offset(Slot::P(i))), (&base.q[i], offset(Slot::Q(i))));
            eq0 += vi * vi;
        }
        let mut kernel = sys.kernel_basis();
        for kv in &mut kernel {
            field.normalize_line(kv);
        }
        LambdaFiber { base, unknowns, len, kernel }
    }

    pub fn dim(&self) -> usize {
        self.kernel.len()
    }

    /// A random point of the fiber.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> QuiverPoint<F> {
        let field = self.base.field();
        let mut sol = vec![field.zero(); self.len];
        for kv in &self.kernel {
            let t = random_elem(&field, rng, bound);
            for (s, k) in sol.iter_mut().zip(kv) {
                *s = field.add(s, &field.mul(&t, k));
            }
        }
        let mut pt = self.base.clone();
        for &(slot, at) in &self.unknowns {
            let target = match slot {
                Slot::B(i) => &mut pt.b[i],
                Slot::Bbar(i) => &mut pt.bbar[i],
                Slot::P(i) => &mut pt.p[i],
                Slot::Q(i) => &mut pt.q[i],
            };
            let (rows, cols) = (target.rows(), target.cols());
            *target = Matrix::from_vec(&field, rows, cols, sol[at..at + rows * cols].to_vec()).expect("shape");
        }
        pt
    }
}

/// Adds `± left * right` (a `n x n` block, inner size `inner`) to the rows
/// `eq0..eq0 + n*n` of `sys`. Exactly one factor is unknown, given by its
/// offset; unknowns are stored row-major.
fn add_product<F: Field>(
    sys: &mut Matrix<F>,
    eq0: usize,
    n: usize,
    inner: usize,
    plus: bool,
    left: (&Matrix<F>, Option<usize>),
    right: (&Matrix<F>, Option<usize>),
) {
    let f = sys.field().clone();
    for row in 0..n {
        for col in 0..n {
            let eq = eq0 + row * n + col;
            for k in 0..inner {
                let (idx, coeff) = match (left.1, right.1) {
                    (None, Some(off)) => (off + k * n + col, left.0.get(row, k).clone()),
                    (Some(off), None) => (off + row * inner + k, right.0.get(k, col).clone()),
                    _ => unreachable!("exactly one factor of each product is unknown"),
                };
                let cur = sys.get(eq, idx).clone();
                let val = if plus { f.add(&cur, &coeff) } else { f.sub(&cur, &coeff) };
                sys.set(eq, idx, val);
            }
        }
    }
}

/// Random stable point of `Lambda(v, d)` by rejection, or `None` after
/// `attempts` unstable draws.
pub fn sample_stable_point<F: Field, R: Rng + ?Sized>(
    field: &F,
    data: &QuiverData,
    rng: &mut R,
    bound: i64,
    attempts: usize,
) -> Option<QuiverPoint<F>> {
    (0..attempts)
        .map(|_| sample_lambda_point(field, data, rng, bound))
        .find(|pt| is_stable(pt).unwrap_or(false))
}

/// Jordan type of `phi(pt)`.
pub fn phi_jordan_type<F: Field>(pt: &QuiverPoint<F>, rec: &DictionaryRecord) -> Result<Partition> {
    phi(pt, rec)?.jordan_type()
}
