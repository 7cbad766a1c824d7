//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Run with `cargo test -p grass-slice --test acceptance`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use grass_slice::combinatorics::{
    binomial, compositions_of, dim_gl, hom_dim_pieri, howe_sides, is_dominated, kostka, partitions_in_box,
    partitions_of,
};
use grass_slice::dictionary::{backward, backward_with_weight, forward, QuiverData};
use grass_slice::flags::{fiber_count_at, multiplicity_check};
use grass_slice::grassmannian::decomposition_check;
use grass_slice::harness::{case_rng, datum_key, phi_case, run_suite, Catalog, PhiStats, Suite, SuiteOptions};
use grass_slice::slice::DEFAULT_BUDGET;
use grass_slice::{Composition, Field, Partition, PrimeField, Rationals};
use rayon::prelude::*;

struct Verdict {
    pass: bool,
    summary: String,
    problems: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict { pass: true, summary: String::new(), problems: Vec::new() }
    }

    fn fail(&mut self, why: impl Into<String>) {
        self.pass = false;
        self.problems.push(why.into());
    }

    fn check(&mut self, ok: bool, why: impl FnOnce() -> String) {
        if !ok {
            self.fail(why());
        }
    }

    fn within(&mut self, start: Instant, limit: Duration) {
        let took = start.elapsed();
        if took > limit {
            self.fail(format!("took {:.1} s, limit {} s", took.as_secs_f64(), limit.as_secs()));
        }
    }
}

fn p(parts: &[usize]) -> Partition {
    Partition::sorted_from(parts)
}

/// Tail sums `lambda_check_i = sum_{j >= i} d_j` and the weight
/// `a_i = v_{n-1} + sum_{j >= i} (d - Cv)_j`, straight from the definitions.
fn dictionary_oracle(v: &[usize], d: &[usize]) -> (Vec<usize>, Vec<i64>) {
    let k = v.len();
    let vi = |i: usize| if (1..=k).contains(&i) { v[i - 1] as i64 } else { 0 };
    let w: Vec<i64> = (1..=k).map(|i| d[i - 1] as i64 - 2 * vi(i) + vi(i - 1) + vi(i + 1)).collect();
    let lambda_check = (0..=k).map(|i| d[i.min(k)..].iter().sum()).collect();
    let a = (0..=k).map(|i| vi(k) + w[i.min(k)..].iter().sum::<i64>()).collect();
    (lambda_check, a)
}

fn criterion_dictionary() -> Verdict {
    let mut out = Verdict::new();
    let start = Instant::now();
    let catalog = match Catalog::new(6) {
        Ok(c) => c,
        Err(e) => {
            out.fail(format!("catalog: {e}"));
            return out;
        }
    };
    let mut known = BTreeSet::new();
    for (data, rec) in catalog.entries() {
        known.insert((data.v.clone(), data.d.clone()));
        let sum: usize = rec.a.iter().sum();
        out.check(sum == data.total(), || format!("{}: sum a = {sum}", datum_key(data)));
        match backward_with_weight(&rec.lambda(), &rec.weight()) {
            Ok((back, _)) => out.check(back.trimmed() == data.trimmed(), || {
                format!("{}: round trip gave {}", datum_key(data), datum_key(&back))
            }),
            Err(e) => out.fail(format!("{}: backward failed: {e}", datum_key(data))),
        }
        match backward(&rec.lambda(), &rec.mu()) {
            Ok((_, sorted)) => out.check(sorted.lambda() == rec.lambda() && sorted.mu() == rec.mu(), || {
                format!("{}: backward(lambda, mu) changed the pair", datum_key(data))
            }),
            Err(e) => out.fail(format!("{}: backward(lambda, mu) failed: {e}", datum_key(data))),
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(1) {
        out.fail(format!("round trips took {:.2} s, limit 1 s", elapsed.as_secs_f64()));
    }

    // completeness against the definitions: up to three vertices, at most N
    // vertices, v_i <= 6
    let mut boxed = 0;
    for k in 1..=3usize {
        let ds: Vec<Vec<usize>> = (0..7usize.pow(k as u32))
            .map(|code| (0..k).map(|i| code / 7usize.pow(i as u32) % 7).collect())
            .filter(|d: &Vec<usize>| {
                let total: usize = d.iter().enumerate().map(|(j, x)| (j + 1) * x).sum();
                (k.max(1)..=6).contains(&total)
            })
            .collect();
        for code in 0..7usize.pow(k as u32) {
            let v: Vec<usize> = (0..k).map(|i| code / 7usize.pow(i as u32) % 7).collect();
            for d in &ds {
                let (lambda_check, a) = dictionary_oracle(&v, d);
                let valid = a.iter().all(|&x| x >= 0) && {
                    let content = Composition::new(a.iter().map(|&x| x as usize).collect());
                    kostka(&p(&lambda_check), &content).is_ok_and(|n| n > 0)
                };
                let data = QuiverData::new(k + 1, v.clone(), d.clone()).expect("shapes agree");
                let trimmed = data.trimmed();
                let listed = known.contains(&(trimmed.v.clone(), trimmed.d.clone()));
                boxed += usize::from(valid);
                out.check(valid == listed, || format!("{}: valid={valid} but listed={listed}", datum_key(&data)));
                if let Ok(rec) = forward(&data) {
                    let a_rec: Vec<i64> = rec.a.iter().map(|&x| x as i64).collect();
                    out.check(valid && a_rec == a, || format!("{}: forward accepted, weight {:?}", datum_key(&data), rec.a));
                }
            }
        }
    }
    out.summary = format!(
        "{} data with N <= 6, {boxed} cross-checked against the definitions, round trips in {:.0} ms",
        catalog.len(),
        elapsed.as_secs_f64() * 1e3
    );
    out
}

#[derive(Default)]
struct PhiTally {
    data: usize,
    points: usize,
    stable: usize,
    group_checks: usize,
    outside: usize,
    outside_stable: usize,
    incomplete: usize,
    failures: Vec<String>,
    outside_examples: Vec<String>,
}

impl PhiTally {
    fn add(&mut self, key: String, s: PhiStats) {
        self.data += 1;
        self.points += s.points;
        self.stable += s.stable_points;
        self.group_checks += s.group_checks;
        self.outside += s.outside_stratum;
        self.outside_stable += s.outside_stratum_stable;
        self.incomplete += usize::from(!s.complete);
        if s.outside_stratum > 0 && self.outside_examples.len() < 3 {
            self.outside_examples.push(format!("{key} ({} of {} points)", s.outside_stratum, s.points));
        }
        self.failures.extend(s.failures.into_iter().map(|f| format!("{key}: {f}")));
    }
}

fn phi_field<F: Field>(field: &F, tag: &str, catalog: &Catalog, opts: &SuiteOptions, stop: Instant) -> PhiTally {
    let results: Vec<_> = catalog
        .entries()
        .par_iter()
        .map(|(data, rec)| {
            let key = format!("{tag}:{}", datum_key(data));
            let mut rng = case_rng(opts.seed, &key);
            let stats = phi_case(field, data, rec, opts, &mut rng, Some(stop));
            (key, stats)
        })
        .collect();
    let mut tally = PhiTally::default();
    for (key, stats) in results {
        match stats {
            Ok(s) => tally.add(key, s),
            Err(e) => tally.failures.push(format!("{key}: {e}")),
        }
    }
    tally
}

fn criterion_phi() -> Verdict {
    let mut out = Verdict::new();
    let limit = Duration::from_secs(120);
    let start = Instant::now();
    let catalog = Catalog::new(5).expect("catalog");
    let opts = SuiteOptions { samples: 1000, group_elements: 10, stable_attempts: 0, ..SuiteOptions::default() };
    let tallies = [
        ("F5", phi_field(&PrimeField::new(5).expect("prime"), "F5", &catalog, &opts, start + limit / 2)),
        ("Q", phi_field(&Rationals, "Q", &catalog, &opts, start + limit)),
    ];
    let mut parts = Vec::new();
    for (tag, t) in &tallies {
        parts.push(format!(
            "{tag}: {} points ({} stable), {} group checks",
            t.points, t.stable, t.group_checks
        ));
        for f in t.failures.iter().take(5) {
            out.fail(f.clone());
        }
        if t.failures.len() > 5 {
            out.fail(format!("{tag}: {} more failures", t.failures.len() - 5));
        }
        if t.outside > 0 {
            out.fail(format!(
                "{tag}: {} points have Jordan type not below mu ({} of them stable), e.g. {}",
                t.outside,
                t.outside_stable,
                t.outside_examples.join(", ")
            ));
        }
        let wanted = catalog.len() * opts.samples;
        if t.points < wanted {
            out.fail(format!(
                "{tag}: only {} of {wanted} points checked within {} s ({} data incomplete)",
                t.points,
                limit.as_secs(),
                t.incomplete
            ));
        }
    }
    out.within(start, limit + Duration::from_secs(5));
    out.summary = format!("{} data with N <= 5; {}", catalog.len(), parts.join("; "));
    out
}

fn suite_verdict(suite: Suite, limit: Duration) -> (Verdict, usize) {
    let mut out = Verdict::new();
    let start = Instant::now();
    let opts = SuiteOptions { time_limit: Some(limit), ..SuiteOptions::default() };
    let cases = match run_suite(suite, &opts) {
        Ok(report) => {
            for f in &report.failures {
                out.fail(format!("{}: {} (replay: {})", f.case, f.detail, f.repro));
            }
            if let Some(why) = &report.budget_exceeded {
                out.fail(format!("budget exceeded: {why}"));
            }
            report.cases
        }
        Err(e) => {
            out.fail(format!("{suite}: {e}"));
            0
        }
    };
    out.within(start, limit);
    (out, cases)
}

fn criterion_psi() -> Verdict {
    let start = Instant::now();
    let (mut out, cases) = suite_verdict(Suite::Psi, Duration::from_secs(60));
    out.check(cases == 8, || format!("expected 8 cases (q in 2,3; lambda of 2 and 3 in two rows), ran {cases}"));
    out.summary = format!("{cases} exhaustive cases over F2 and F3 in {:.2} s", start.elapsed().as_secs_f64());
    out
}

fn criterion_decomposition() -> Verdict {
    let mut out = Verdict::new();
    let start = Instant::now();
    let mut cases = 0;
    for q in [2, 3] {
        for m in 1..=3 {
            for total in 1..=4 {
                for mu in partitions_of(total) {
                    if mu.len() > m {
                        continue;
                    }
                    cases += 1;
                    match decomposition_check(&mu, m, q, DEFAULT_BUDGET) {
                        Ok(r) => out.check(r.holds, || {
                            format!("mu={mu} m={m} q={q}: {} points but strata give {}", r.grassmannian_points, r.strata_total)
                        }),
                        Err(e) => out.fail(format!("mu={mu} m={m} q={q}: {e}")),
                    }
                }
            }
        }
    }
    match decomposition_check(&p(&[2]), 2, 2, DEFAULT_BUDGET) {
        Ok(r) => {
            let mut terms: Vec<(u128, u128)> = r.strata.iter().map(|s| (s.orbit_points, s.slice_points)).collect();
            terms.sort();
            out.check(r.grassmannian_points == 7 && terms == [(1, 4), (3, 1)], || {
                format!("mu=(2,0), m=2, q=2 gave {} with terms {terms:?}", r.grassmannian_points)
            });
        }
        Err(e) => out.fail(format!("mu=(2,0), m=2, q=2: {e}")),
    }
    out.within(start, Duration::from_secs(300));
    out.summary = format!("{cases} cases, benchmark 7 = 3*1 + 1*4, {:.2} s", start.elapsed().as_secs_f64());
    out
}

fn criterion_multiplicity() -> Verdict {
    let mut out = Verdict::new();
    let start = Instant::now();
    let catalog = Catalog::new(4).expect("catalog");
    for (data, rec) in catalog.entries() {
        let key = datum_key(data);
        let report = match multiplicity_check(data) {
            Ok(r) => r,
            Err(e) => {
                out.fail(format!("{key}: {e}"));
                continue;
            }
        };
        out.check(report.holds, || {
            format!(
                "{key}: degree {} (expected {}), leading {}, kostka {}, pieri {}",
                report.degree, report.expected_degree, report.leading, report.kostka, report.hom_dim
            )
        });
        let lambda = rec.lambda();
        let mu = rec.mu();
        let gap = mu.nilpotent_orbit_dim() - lambda.nilpotent_orbit_dim();
        out.check(2 * report.expected_degree == gap, || format!("{key}: expected degree is not half of {gap}"));
        for q in [2u64, 3, 5, 7] {
            match fiber_count_at(&lambda, &rec.weight(), q, DEFAULT_BUDGET) {
                Ok(n) => out.check(report.polynomial.eval(q as i128) == n as i128, || {
                    format!("{key}: polynomial gives {} at q={q}, enumeration {n}", report.polynomial.eval(q as i128))
                }),
                Err(e) => out.fail(format!("{key}: count at q={q}: {e}")),
            }
        }
    }
    match multiplicity_check(&QuiverData::from_vectors(&[1, 1], &[1, 1]).expect("valid")) {
        Ok(r) => out.check(r.polynomial.to_string() == "2q + 1" && r.leading == 2, || {
            format!("v=(1,1), d=(1,1) gave {} with leading {}", r.polynomial, r.leading)
        }),
        Err(e) => out.fail(format!("v=(1,1), d=(1,1): {e}")),
    }
    out.within(start, Duration::from_secs(300));
    out.summary = format!(
        "{} data with N <= 4, counts matched at q = 2, 3, 5, 7, benchmark 2q + 1, {:.2} s",
        catalog.len(),
        start.elapsed().as_secs_f64()
    );
    out
}

fn criterion_howe() -> Verdict {
    let mut out = Verdict::new();
    let start = Instant::now();
    let mut cases = 0;
    for m in 1..=3 {
        for n in 1..=3 {
            for total in 0..=m * n {
                cases += 1;
                let (lhs, rhs) = howe_sides(m, n, total);
                out.check(lhs == rhs && rhs == binomial(m * n, total), || format!("m={m} n={n} N={total}: {lhs} != {rhs}"));
                // dim V_lambda as the sum of its weight multiplicities
                for lambda in partitions_in_box(total, m, n) {
                    let weights: u128 = compositions_of(total, m).iter().map(|a| kostka(&lambda, a).unwrap_or(0)).sum();
                    out.check(weights == dim_gl(&lambda, m), || format!("dim V_{lambda} for GL({m}) is not {weights}"));
                }
            }
        }
    }
    let (lhs, rhs) = howe_sides(2, 2, 2);
    out.check(lhs == 6 && rhs == 6, || format!("m=n=2, N=2 gave {lhs} and {rhs}"));
    out.within(start, Duration::from_secs(1));
    out.summary = format!("{cases} cases, m=n=2 N=2 gives 6, {:.0} ms", start.elapsed().as_secs_f64() * 1e3);
    out
}

/// Semistandard tableaux of `shape` with content `content`, filled cell by
/// cell in row-reading order.
fn ssyt_brute_force(shape: &[usize], content: &[usize]) -> u128 {
    fn fill(cells: &[(usize, usize)], at: usize, grid: &mut Vec<Vec<usize>>, left: &mut [usize]) -> u128 {
        let Some(&(r, c)) = cells.get(at) else {
            return 1;
        };
        let mut total = 0;
        for val in 0..left.len() {
            if left[val] == 0 || (c > 0 && grid[r][c - 1] > val) || (r > 0 && grid[r - 1][c] >= val) {
                continue;
            }
            left[val] -= 1;
            grid[r][c] = val;
            total += fill(cells, at + 1, grid, left);
            left[val] += 1;
        }
        total
    }
    let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();
    fill(&cells, 0, &mut grid, &mut content.to_vec())
}

fn criterion_combinatorics() -> Verdict {
    let mut out = Verdict::new();
    let start = Instant::now();
    let mut checks = 0usize;
    for total in 0..=6 {
        let shapes = partitions_of(total);
        for len in 1..=total.max(1) {
            for a in compositions_of(total, len) {
                let sorted = a.sorted();
                for lambda in &shapes {
                    checks += 1;
                    let k = kostka(lambda, &a).expect("sizes agree");
                    out.check(k == ssyt_brute_force(lambda.parts(), a.entries()), || {
                        format!("kostka({lambda}, {:?}) = {k} disagrees with direct enumeration", a.entries())
                    });
                    let dominated = is_dominated(&sorted, lambda).expect("sizes agree");
                    out.check((k > 0) == dominated, || {
                        format!("kostka({lambda}, {:?}) = {k} but dominance says {dominated}", a.entries())
                    });
                    for m in 1..=total.max(1) {
                        if lambda.len() > m || a.entries().iter().any(|&x| x > m) {
                            continue;
                        }
                        let pieri = hom_dim_pieri(&a, lambda, m).expect("entries fit");
                        let dual = kostka(&lambda.transpose(), &a).expect("sizes agree");
                        out.check(pieri == dual, || {
                            format!("pieri({:?}, {lambda}, {m}) = {pieri} but kostka of the dual is {dual}", a.entries())
                        });
                    }
                }
            }
        }
    }
    for total in 0..=8 {
        let shapes = partitions_of(total);
        for lambda in &shapes {
            out.check(lambda.transpose().transpose() == *lambda, || format!("transpose is not an involution at {lambda}"));
            out.check(lambda.transpose().size() == total, || format!("transpose changed the size of {lambda}"));
            for mu in &shapes {
                checks += 1;
                let forward = is_dominated(lambda, mu).expect("sizes agree");
                let flipped = is_dominated(&mu.transpose(), &lambda.transpose()).expect("sizes agree");
                out.check(forward == flipped, || format!("transpose does not reverse dominance for {lambda}, {mu}"));
            }
        }
    }
    out.within(start, Duration::from_secs(10));
    out.summary = format!("{checks} checks, {:.2} s", start.elapsed().as_secs_f64());
    out
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 7] = [
        ("1 dictionary round trip", criterion_dictionary),
        ("2 phi postconditions", criterion_phi),
        ("3 slice and lattice bijection", criterion_psi),
        ("4 decomposition identity", criterion_decomposition),
        ("5 multiplicity chain", criterion_multiplicity),
        ("6 skew Howe duality", criterion_howe),
        ("7 combinatorial oracles", criterion_combinatorics),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.starts_with(o.as_str())) {
            continue;
        }
        let verdict = run();
        let tag = if verdict.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {}", verdict.summary);
        for why in verdict.problems.iter().take(12) {
            println!("    {why}");
        }
        if verdict.problems.len() > 12 {
            println!("    ... {} more", verdict.problems.len() - 12);
        }
        failed += usize::from(!verdict.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
