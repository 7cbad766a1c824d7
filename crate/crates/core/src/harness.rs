//! The verification harness behind `grass-slice verify`: a catalog of small
//! quiver data and one suite per family of invariants.
//!
//! Every case draws its randomness from a generator seeded by the run seed and
//! the case key, so a single case replays identically with `--case`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{howe_sides, is_dominated, partitions_of, Partition};
use crate::dictionary::{backward, backward_with_weight, data_with_total, forward, DictionaryRecord, QuiverData};
use crate::error::{Error, Result};
use crate::flags::multiplicity_check;
use crate::grassmannian::{
    decomposition_check, for_each_slice_translate, in_orbit_closure, lattice_type, slice_orbit_contains,
    z_matrix_on_quotient, z_stable_subspaces, LatticeRep,
};
use crate::linalg::{Field, FieldSpec, Matrix, PrimeField, Rationals};
use crate::quiver::{is_stable, phi_unchecked, FiberRecipe, GroupElement, LambdaFiber, QuiverPoint};
use crate::slice::{count_slice_points, in_slice, x_of, DEFAULT_BUDGET};

/// Every nonempty datum with `1 <= N <= max_total` and at most `N` vertices,
/// with its dictionary record.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub max_total: usize,
    entries: Vec<(QuiverData, DictionaryRecord)>,
}

impl Catalog {
    pub fn new(max_total: usize) -> Result<Self> {
        let mut entries = Vec::new();
        for total in 1..=max_total {
            for data in data_with_total(total) {
                let rec = forward(&data)?;
                entries.push((data, rec));
            }
        }
        Ok(Catalog { max_total, entries })
    }

    pub fn entries(&self) -> &[(QuiverData, DictionaryRecord)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Dictionary,
    Phi,
    Slice,
    Psi,
    Decomposition,
    Howe,
    Multiplicity,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 7] = [
        Suite::Dictionary,
        Suite::Phi,
        Suite::Slice,
        Suite::Psi,
        Suite::Decomposition,
        Suite::Howe,
        Suite::Multiplicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dictionary => "dictionary",
            Suite::Phi => "phi",
            Suite::Slice => "slice",
            Suite::Psi => "psi",
            Suite::Decomposition => "decomposition",
            Suite::Howe => "howe",
            Suite::Multiplicity => "multiplicity",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::PARTS
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Lambda points per datum and field in the phi suite.
    pub samples: usize,
    /// Group elements drawn per point in the phi suite.
    pub group_elements: usize,
    /// Fibers tried per datum when searching for a stable point.
    pub stable_attempts: usize,
    /// Consecutive points drawn from one linear fiber of `Lambda(v, d)`.
    pub fiber_reuse: usize,
    /// Largest `N`; `None` uses each suite's default.
    pub max_total: Option<usize>,
    pub fields: Vec<FieldSpec>,
    pub budget: u128,
    pub time_limit: Option<Duration>,
    pub timing: bool,
    /// Replay only the case with this key.
    pub case: Option<String>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            samples: 1000,
            group_elements: 10,
            stable_attempts: 200,
            fiber_reuse: 25,
            max_total: None,
            fields: vec![FieldSpec::Prime(5), FieldSpec::Rationals],
            budget: DEFAULT_BUDGET,
            time_limit: None,
            timing: false,
            case: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub suite: Suite,
    pub case: String,
    pub seed: u64,
    pub detail: String,
    pub repro: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<CaseFailure>,
    /// Observations that are not failures, keyed by case.
    pub notes: Vec<String>,
    /// Set when a budget ran out; the report then covers only `cases` cases.
    pub budget_exceeded: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u128>,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        if self.budget_exceeded.is_some() {
            2
        } else if !self.failures.is_empty() {
            3
        } else {
            0
        }
    }

    pub fn passed(&self) -> bool {
        self.exit_code() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        let verdict = match self.exit_code() {
            0 => "ok",
            2 => "budget exceeded",
            _ => "FAILED",
        };
        let _ = writeln!(out, "suite {}: {} cases, {} failures, {verdict}", self.suite, self.cases, self.failures.len());
        if let Some(why) = &self.budget_exceeded {
            let _ = writeln!(out, "  budget: {why}");
        }
        for f in &self.failures {
            let _ = writeln!(out, "  FAIL [{}] {}: {}", f.suite, f.case, f.detail);
            let _ = writeln!(out, "    repro: {}", f.repro);
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        if let Some(ms) = self.wall_time_ms {
            let _ = writeln!(out, "  wall time: {ms} ms");
        }
        out
    }
}

/// Seed of the generator for one case.
pub fn case_seed(seed: u64, key: &str) -> u64 {
    // FNV-1a, stable across builds
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in key.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn case_rng(seed: u64, key: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(case_seed(seed, key))
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn datum_key(data: &QuiverData) -> String {
    format!("v={};d={}", join(&data.v), join(&data.d))
}

struct Outcome {
    key: String,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new(key: String) -> Self {
        Outcome { key, failures: Vec::new(), notes: Vec::new() }
    }
}

fn repro(suite: Suite, opts: &SuiteOptions, key: &str) -> String {
    let mut cmd = format!("grass-slice verify --suite {suite} --seed {}", opts.seed);
    let defaults = SuiteOptions::default();
    if suite == Suite::Phi {
        let _ = write!(cmd, " --samples {}", opts.samples);
        if opts.group_elements != defaults.group_elements {
            let _ = write!(cmd, " --group-elements {}", opts.group_elements);
        }
    }
    if opts.budget != defaults.budget {
        let _ = write!(cmd, " --budget {}", opts.budget);
    }
    let _ = write!(cmd, " --case '{key}'");
    cmd
}

struct Deadline(Option<Instant>);

impl Deadline {
    fn passed(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let deadline = Deadline(opts.time_limit.map(|d| start + d));
    let parts: Vec<Suite> = if suite == Suite::All { Suite::PARTS.to_vec() } else { vec![suite] };
    let mut report = VerificationReport {
        schema: crate::SCHEMA.to_string(),
        suite,
        seed: opts.seed,
        cases: 0,
        failures: Vec::new(),
        notes: Vec::new(),
        budget_exceeded: None,
        wall_time_ms: None,
    };
    for part in parts {
        let (outcomes, exceeded) = run_part(part, opts, &deadline)?;
        report.cases += outcomes.len();
        for o in outcomes {
            for detail in o.failures {
                report.failures.push(CaseFailure {
                    suite: part,
                    case: o.key.clone(),
                    seed: case_seed(opts.seed, &o.key),
                    detail,
                    repro: repro(part, opts, &o.key),
                });
            }
            report.notes.extend(o.notes.into_iter().map(|n| format!("[{part}] {}: {n}", o.key)));
        }
        if let Some(why) = exceeded {
            report.budget_exceeded = Some(format!("{part}: {why}"));
            break;
        }
    }
    report.failures.sort_by(|a, b| (a.suite, &a.case, &a.detail).cmp(&(b.suite, &b.case, &b.detail)));
    if opts.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

type CaseFn<'a, T> = dyn Fn(&T) -> std::result::Result<Outcome, Error> + Sync + 'a;

/// Runs the cases in parallel, stops at the deadline, keeps input order.
fn run_cases<T: Sync>(
    cases: Vec<(String, T)>,
    opts: &SuiteOptions,
    deadline: &Deadline,
    run: &CaseFn<'_, T>,
) -> Result<(Vec<Outcome>, Option<String>)> {
    let selected: Vec<(String, T)> = match &opts.case {
        Some(k) => cases.into_iter().filter(|(key, _)| key == k).collect(),
        None => cases,
    };
    let results: Vec<Option<std::result::Result<Outcome, Error>>> = selected
        .par_iter()
        .map(|(_, case)| {
            if deadline.passed() {
                return None;
            }
            Some(run(case))
        })
        .collect();
    let mut outcomes = Vec::new();
    let mut exceeded = None;
    let mut skipped = 0;
    for ((key, _), r) in selected.iter().zip(results) {
        match r {
            None => skipped += 1,
            Some(Ok(o)) => outcomes.push(o),
            Some(Err(e @ Error::BudgetExceeded { .. })) => {
                exceeded.get_or_insert(format!("{key}: {e}"));
            }
            Some(Err(e)) => {
                let mut o = Outcome::new(key.clone());
                o.failures.push(format!("error: {e}"));
                outcomes.push(o);
            }
        }
    }
    if skipped > 0 {
        exceeded.get_or_insert(format!("time limit reached with {skipped} cases not run"));
    }
    Ok((outcomes, exceeded))
}

fn run_part(part: Suite, opts: &SuiteOptions, deadline: &Deadline) -> Result<(Vec<Outcome>, Option<String>)> {
    match part {
        Suite::Dictionary => {
            let cat = Catalog::new(opts.max_total.unwrap_or(6))?;
            let cases = cat.entries().iter().map(|(d, r)| (datum_key(d), (d.clone(), r.clone()))).collect();
            run_cases(cases, opts, deadline, &|(d, r)| dictionary_case(d, r))
        }
        Suite::Phi => {
            let cat = Catalog::new(opts.max_total.unwrap_or(5))?;
            let mut cases = Vec::new();
            for field in &opts.fields {
                for (d, r) in cat.entries() {
                    cases.push((format!("{field}:{}", datum_key(d)), (*field, d.clone(), r.clone())));
                }
            }
            let stop = deadline.0;
            run_cases(cases, opts, deadline, &|(field, d, r)| {
                let key = format!("{field}:{}", datum_key(d));
                let mut rng = case_rng(opts.seed, &key);
                let stats = match field {
                    FieldSpec::Rationals => phi_case(&Rationals, d, r, opts, &mut rng, stop)?,
                    FieldSpec::Prime(p) => phi_case(&PrimeField::new(*p)?, d, r, opts, &mut rng, stop)?,
                };
                Ok(stats.into_outcome(key))
            })
        }
        Suite::Slice => {
            let max = opts.max_total.unwrap_or(4);
            let mut cases = Vec::new();
            for q in [2u64, 3] {
                for total in 1..=max {
                    for lambda in partitions_of(total) {
                        if lambda.len() <= 3 {
                            cases.push((format!("q={q}:lambda={lambda}"), (q, lambda)));
                        }
                    }
                }
            }
            run_cases(cases, opts, deadline, &|(q, lambda)| slice_case(*q, lambda, opts.budget))
        }
        Suite::Psi => {
            let mut cases = Vec::new();
            for q in [2u64, 3] {
                for total in [2, 3] {
                    for lambda in partitions_of(total).into_iter().filter(|l| l.len() <= 2) {
                        cases.push((format!("q={q}:m=2:lambda={lambda}"), (q, lambda)));
                    }
                }
            }
            run_cases(cases, opts, deadline, &|(q, lambda)| psi_case(*q, 2, lambda, opts.budget))
        }
        Suite::Decomposition => {
            let max = opts.max_total.unwrap_or(4);
            let mut cases = Vec::new();
            for q in [2u64, 3] {
                for m in 1..=3 {
                    for total in 0..=max {
                        for mu in partitions_of(total).into_iter().filter(|p| p.len() <= m) {
                            let padded = Partition::new(mu.padded(m)?)?;
                            cases.push((format!("q={q}:m={m}:mu={}", join(&mu.padded(m)?)), (q, m, padded)));
                        }
                    }
                }
            }
            run_cases(cases, opts, deadline, &|(q, m, mu)| {
                let key = format!("q={q}:m={m}:mu={}", join(mu.parts()));
                let mut o = Outcome::new(key);
                let r = decomposition_check(mu, *m, *q, opts.budget)?;
                if !r.holds {
                    let terms: Vec<String> =
                        r.strata.iter().map(|s| format!("{}*{}", s.orbit_points, s.slice_points)).collect();
                    o.failures.push(format!("{} != {} = {}", r.grassmannian_points, r.strata_total, terms.join(" + ")));
                }
                Ok(o)
            })
        }
        Suite::Howe => {
            let mut cases = Vec::new();
            for m in 1..=3 {
                for n in 1..=3 {
                    for total in 0..=m * n {
                        cases.push((format!("m={m}:n={n}:N={total}"), (m, n, total)));
                    }
                }
            }
            run_cases(cases, opts, deadline, &|&(m, n, total)| {
                let mut o = Outcome::new(format!("m={m}:n={n}:N={total}"));
                let (sum, binom) = howe_sides(m, n, total);
                if sum != binom {
                    o.failures.push(format!("sum of dimension products {sum} != binomial {binom}"));
                }
                Ok(o)
            })
        }
        Suite::Multiplicity => {
            let cat = Catalog::new(opts.max_total.unwrap_or(4))?;
            let cases = cat.entries().iter().map(|(d, _)| (datum_key(d), d.clone())).collect();
            run_cases(cases, opts, deadline, &|d| {
                let mut o = Outcome::new(datum_key(d));
                let r = multiplicity_check(d)?;
                if !r.holds {
                    o.failures.push(format!(
                        "polynomial {} (degree {}, expected {}), kostka {}, pieri {}",
                        r.polynomial, r.degree, r.expected_degree, r.kostka, r.hom_dim
                    ));
                }
                Ok(o)
            })
        }
        Suite::All => Err(Error::Precondition("`all` is not a single suite".into())),
    }
}

fn dictionary_case(data: &QuiverData, rec: &DictionaryRecord) -> Result<Outcome> {
    let mut o = Outcome::new(datum_key(data));
    if rec.a.iter().sum::<usize>() != rec.total {
        o.failures.push(format!("weight {:?} does not sum to N = {}", rec.a, rec.total));
    }
    let (back, _) = backward_with_weight(&rec.lambda(), &rec.weight())?;
    if back.trimmed() != data.trimmed() {
        o.failures.push(format!("round trip gave v={:?} d={:?}", back.v, back.d));
    }
    let (_, sorted) = backward(&rec.lambda(), &rec.mu())?;
    if sorted.lambda() != rec.lambda() || sorted.mu() != rec.mu() {
        o.failures.push(format!("backward(lambda, mu) gave lambda={:?} mu={:?}", sorted.lambda, sorted.mu));
    }
    Ok(o)
}

/// Tallies of one phi case.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiStats {
    pub points: usize,
    pub stable_points: usize,
    pub group_checks: usize,
    /// Points whose image has Jordan type not dominated by `mu`.
    pub outside_stratum: usize,
    /// Of those, the stable ones.
    pub outside_stratum_stable: usize,
    /// Whether a stable point was sampled or found by the stable search.
    pub stable_found: bool,
    pub complete: bool,
    pub failures: Vec<String>,
}

impl PhiStats {
    fn into_outcome(self, key: String) -> Outcome {
        let mut o = Outcome::new(key);
        if self.outside_stratum > self.outside_stratum_stable {
            o.notes.push(format!(
                "{} of {} unstable points have image type not below mu",
                self.outside_stratum - self.outside_stratum_stable,
                self.points - self.stable_points
            ));
        }
        if !self.stable_found {
            o.notes.push("no stable point found".into());
        }
        if !self.complete {
            o.notes.push(format!("stopped at the time limit after {} points", self.points));
        }
        o.failures = self.failures;
        o
    }
}

/// Checks `phi` on random points of `Lambda(v, d)`: image in the slice,
/// nilpotent, invariant under random group elements, `phi(0) = x`, and of
/// type dominated by `mu` on stable points. Unstable points outside the
/// stratum are tallied, not failed.
pub fn phi_case<F: Field>(
    field: &F,
    data: &QuiverData,
    rec: &DictionaryRecord,
    opts: &SuiteOptions,
    rng: &mut ChaCha8Rng,
    stop: Option<Instant>,
) -> Result<PhiStats> {
    let lambda = rec.lambda();
    let mu = rec.mu();
    let mut stats = PhiStats { complete: true, ..PhiStats::default() };
    let zero = QuiverPoint::zero(field, data);
    if phi_unchecked(&zero, rec)? != x_of(field, &lambda) {
        stats.failures.push("phi(0) != x".into());
    }
    let check_point = |pt: &QuiverPoint<F>, rng: &mut ChaCha8Rng, stats: &mut PhiStats| -> Result<()> {
        stats.points += 1;
        let image = phi_unchecked(pt, rec)?;
        if !in_slice(&image, &lambda)? {
            stats.failures.push(format!("image outside T_x at point {}", stats.points));
        }
        let stable = is_stable(pt)?;
        stats.stable_points += usize::from(stable);
        stats.stable_found |= stable;
        match image.jordan_type() {
            Err(Error::NotNilpotent) => stats.failures.push(format!("image not nilpotent at point {}", stats.points)),
            Err(e) => return Err(e),
            Ok(nu) => {
                if !is_dominated(&nu, &mu)? {
                    stats.outside_stratum += 1;
                    if stable {
                        stats.outside_stratum_stable += 1;
                        stats.failures.push(format!("stable point {} has image type {nu} not below {mu}", stats.points));
                    }
                }
            }
        }
        for _ in 0..opts.group_elements {
            let g = GroupElement::random(field, data, rng, 3);
            stats.group_checks += 1;
            if phi_unchecked(&g.act(pt)?, rec)? != image {
                stats.failures.push(format!("phi not invariant at point {}", stats.points));
                break;
            }
        }
        Ok(())
    };
    let reuse = opts.fiber_reuse.max(1);
    let mut fiber: Option<LambdaFiber<F>> = None;
    for s in 0..opts.samples {
        if stop.is_some_and(|t| Instant::now() >= t) {
            stats.complete = false;
            return Ok(stats);
        }
        if s % reuse == 0 {
            fiber = Some(LambdaFiber::draw(field, data, &FiberRecipe::random(data, rng), rng, 2));
        }
        let pt = fiber.as_ref().expect("drawn").sample(rng, 2);
        check_point(&pt, rng, &mut stats)?;
    }
    if !stats.stable_found && opts.stable_attempts > 0 {
        if let Some(recipe) = find_stable_recipe(data, rng, opts.stable_attempts)? {
            for _ in 0..8 {
                let pt = LambdaFiber::draw(field, data, &recipe, rng, 2).sample(rng, 2);
                if is_stable(&pt)? {
                    check_point(&pt, rng, &mut stats)?;
                    break;
                }
            }
        }
    }
    Ok(stats)
}

/// A recipe whose fiber over `F_5` contains a stable point, searched by
/// random draws.
pub fn find_stable_recipe(data: &QuiverData, rng: &mut ChaCha8Rng, attempts: usize) -> Result<Option<FiberRecipe>> {
    let f5 = PrimeField::new(5)?;
    for _ in 0..attempts {
        let recipe = FiberRecipe::random(data, rng);
        let pt = LambdaFiber::draw(&f5, data, &recipe, rng, 2).sample(rng, 2);
        if is_stable(&pt)? {
            return Ok(Some(recipe));
        }
    }
    Ok(None)
}

/// Compares `count_slice_points(lambda, mu, q)` with the number of lattices in
/// the slice orbit of `L_lambda` lying over `closure(G_mu)`, for every
/// `mu >= lambda` with at most `len(lambda)` parts.
fn slice_case(q: u64, lambda: &Partition, budget: u128) -> Result<Outcome> {
    let mut o = Outcome::new(format!("q={q}:lambda={lambda}"));
    let field = PrimeField::new(q)?;
    let m = lambda.len();
    let total = lambda.size();
    let subspaces = z_stable_subspaces(&field, m, total, total, budget)?;
    let mut in_slice_orbit = Vec::new();
    for u in &subspaces[total] {
        let lattice = LatticeRep::from_basis(m, total, u)?;
        if slice_orbit_contains(lambda, &lattice, budget)? {
            in_slice_orbit.push(lattice);
        }
    }
    for mu in partitions_of(total) {
        if mu.len() > m || !is_dominated(lambda, &mu)? {
            continue;
        }
        let mut lattices = 0u128;
        for l in &in_slice_orbit {
            lattices += u128::from(in_orbit_closure(l, &mu)?);
        }
        let points = count_slice_points(lambda, &mu, q, budget)?;
        if lattices != points {
            o.failures.push(format!("mu={mu}: {points} slice points but {lattices} lattices"));
        }
    }
    Ok(o)
}

/// Exhaustive translates `g · L_lambda`: every accepted lattice gives a
/// matrix in `T_x` of the lattice's type, and the distinct lattices over
/// `closure(G_mu)` are as many as the slice points.
fn psi_case(q: u64, m: usize, lambda: &Partition, budget: u128) -> Result<Outcome> {
    let mut o = Outcome::new(format!("q={q}:m={m}:lambda={lambda}"));
    let field = PrimeField::new(q)?;
    let mut lattices: BTreeMap<Vec<u64>, (Partition, Matrix<PrimeField>)> = BTreeMap::new();
    let mut bad = Vec::new();
    for_each_slice_translate(&field, lambda, m, lambda.size(), budget, &mut |_, t| {
        let image = match z_matrix_on_quotient(&t) {
            Ok(a) => a,
            Err(e) => {
                bad.push(format!("{e}"));
                return Ok(());
            }
        };
        let ty = lattice_type(&t.lattice);
        if !in_slice(&image, lambda)? || image.jordan_type()? != ty {
            bad.push(format!("translate with lattice type {ty} gives a matrix outside T_x or of another type"));
        }
        lattices.insert(t.lattice.basis().entries().to_vec(), (ty, image));
        Ok(())
    })?;
    o.failures.extend(bad.into_iter().collect::<BTreeSet<_>>());
    for mu in partitions_of(lambda.size()) {
        if mu.len() > m || !is_dominated(lambda, &mu)? {
            continue;
        }
        let mut count = 0u128;
        for (ty, _) in lattices.values() {
            count += u128::from(is_dominated(ty, &mu)?);
        }
        let points = count_slice_points(lambda, &mu, q, budget)?;
        if count != points {
            o.failures.push(format!("mu={mu}: {count} lattices but {points} slice points"));
        }
    }
    let images: BTreeSet<Vec<u64>> = lattices.values().map(|(_, a)| a.entries().to_vec()).collect();
    if images.len() != lattices.len() {
        o.failures.push(format!("{} lattices but {} distinct matrices", lattices.len(), images.len()));
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteOptions {
        SuiteOptions { samples: 20, fields: vec![FieldSpec::Prime(5)], max_total: Some(3), ..SuiteOptions::default() }
    }

    #[test]
    fn catalog_sizes_grow() {
        let c3 = Catalog::new(3).unwrap();
        let c4 = Catalog::new(4).unwrap();
        assert!(!c3.is_empty() && c3.len() < c4.len());
        assert!(c4.entries().iter().all(|(d, _)| crate::dictionary::is_nonempty_datum(d)));
    }

    #[test]
    fn suite_names_parse() {
        for s in Suite::PARTS {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn case_seeds_depend_on_key_and_seed() {
        assert_eq!(case_seed(1, "a"), case_seed(1, "a"));
        assert_ne!(case_seed(1, "a"), case_seed(2, "a"));
        assert_ne!(case_seed(1, "a"), case_seed(1, "b"));
    }

    #[test]
    fn small_suites_pass_and_are_deterministic() {
        for s in [Suite::Dictionary, Suite::Phi, Suite::Howe, Suite::Multiplicity] {
            let a = run_suite(s, &quick()).unwrap();
            assert!(a.passed(), "{}", a.render_human());
            assert_eq!(a.to_json(), run_suite(s, &quick()).unwrap().to_json());
        }
    }

    #[test]
    fn single_case_replays() {
        let opts = SuiteOptions { case: Some("F5:v=1,1;d=1,1".into()), ..quick() };
        let r = run_suite(Suite::Phi, &opts).unwrap();
        assert_eq!(r.cases, 1);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = SuiteOptions { budget: 10, max_total: Some(2), ..quick() };
        let r = run_suite(Suite::Decomposition, &opts).unwrap();
        assert_eq!(r.exit_code(), 2);
        assert!(r.budget_exceeded.is_some());
    }

    #[test]
    fn time_limit_stops_early() {
        let opts = SuiteOptions { time_limit: Some(Duration::ZERO), ..quick() };
        let r = run_suite(Suite::Dictionary, &opts).unwrap();
        assert_eq!(r.exit_code(), 2);
        assert_eq!(r.cases, 0);
    }

    #[test]
    fn timing_only_when_asked() {
        let r = run_suite(Suite::Howe, &quick()).unwrap();
        assert!(r.wall_time_ms.is_none() && !r.to_json().contains("wall_time"));
        let t = run_suite(Suite::Howe, &SuiteOptions { timing: true, ..quick() }).unwrap();
        assert!(t.wall_time_ms.is_some());
    }
}
