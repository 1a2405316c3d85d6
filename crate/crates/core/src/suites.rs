//! Seeded verification suites. Each returns a [`Report`] whose checks
//! aggregate a property over a whole batch of generated inputs.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bimodule::{random_module, random_rectangle_decomposable, GridModule, GridPoint, GridShape};
use crate::decomposer::{
    decompose_rectangles, interval_decompose, local_condition_check, square_decompositions,
    verify_certificate, weak_exact, LocalClass,
};
use crate::exactfield::{preimage, pushforward, FieldSpec, Subspace};
use crate::filtration::{
    lift_rectangle, pointwise_filtration, t_skeleton, Exact, FiltSpaces, Sign,
};
use crate::gallery::{
    check_square_cases, hook_counterexample, verify_hook, verify_psi,
    verify_psi_embedded, verify_region_table, HookSpec, PsiSpec, SQUARE_CASES,
};
use crate::report::Report;
use crate::shapes::{enumerate_rectangles, sigma, Cut, RectangleShape};

/// Failures of one property across a batch, keeping the first few.
struct Tally {
    name: String,
    total: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: impl Into<String>) -> Self {
        Tally {
            name: name.into(),
            total: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures.push(context());
        }
    }

    fn finish(self, report: &mut Report) {
        let detail = if self.failures.is_empty() {
            format!("{} cases", self.total)
        } else {
            let shown: Vec<_> = self.failures.iter().take(3).cloned().collect();
            format!("{} of {} cases failed; first: {}", self.failures.len(), self.total, shown.join(" | "))
        };
        report.check(self.name, self.failures.is_empty(), detail);
    }
}

/// A generated rectangle-decomposable module with its ground truth.
pub struct Sample {
    pub label: String,
    pub module: GridModule,
    pub rectangles: Vec<RectangleShape>,
}

/// The round-trip batch: grids up to 4×4, up to six summands, alternating
/// between GF(2) and GF(5), randomly conjugated.
pub fn roundtrip_samples(seed: u64, count: usize) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let shape = GridShape::new(rng.gen_range(1..=4), rng.gen_range(1..=4)).expect("nonempty");
            let field = FieldSpec::new(if i % 2 == 0 { 2 } else { 5 }).expect("prime");
            let summands = rng.gen_range(1..=6);
            let s: u64 = rng.gen();
            let (module, rectangles) = random_rectangle_decomposable(shape, field, summands, s);
            Sample {
                label: format!("#{i} {shape} GF({}) seed {s}", field.p()),
                module,
                rectangles,
            }
        })
        .collect()
}

pub fn roundtrip(seed: u64, count: usize) -> Report {
    let mut report = Report::new("round-trip decomposition");
    let mut exact = Tally::new("weak_exact holds");
    let mut multiset = Tally::new("decomposition equals the ground truth multiset");
    let mut certified = Tally::new("certified isomorphism re-verifies");
    for s in roundtrip_samples(seed, count) {
        exact.record(weak_exact(&s.module).verdict, || s.label.clone());
        match decompose_rectangles(&s.module, true) {
            Ok(d) => {
                multiset.record(d.rectangles().as_ref() == Some(&s.rectangles), || {
                    format!("{}: got {:?}", s.label, d.rectangles())
                });
                certified.record(d.iso.is_some() && verify_certificate(&s.module, &d), || s.label.clone());
            }
            Err(e) => {
                multiset.record(false, || format!("{}: {e}", s.label));
                certified.record(false, || s.label.clone());
            }
        }
    }
    exact.finish(&mut report);
    multiset.finish(&mut report);
    certified.finish(&mut report);
    report
}

/// Weak exactness, rectangle decomposition and the local square condition
/// must agree on arbitrary modules over grids from 2×2 to 3×3 with dims up to
/// 3. Thinner grids have no non-degenerate squares and are always exact.
pub fn equivalence(seed: u64, count: usize) -> Report {
    let mut report = Report::new("equivalence of weak exactness, decomposition and local condition");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree = Tally::new("weak_exact = decomposes = locally rectangle-decomposable");
    let mut oracle = Tally::new("interval oracle agrees with every rectangle decomposition");
    let mut positives = 0;
    for i in 0..count {
        let shape = GridShape::new(rng.gen_range(2..=3), rng.gen_range(2..=3)).expect("nonempty");
        let field = FieldSpec::new([2, 3, 5][i % 3]).expect("prime");
        let s: u64 = rng.gen();
        let m = random_module(shape, field, 3, s);
        let label = || format!("#{i} {shape} GF({}) seed {s}", field.p());
        let weak = weak_exact(&m).verdict;
        let dec = decompose_rectangles(&m, false).ok();
        let local = local_condition_check(&m, LocalClass::Rectangles);
        agree.record(weak == dec.is_some() && weak == local, || {
            format!("{}: weak {weak}, decomposes {}, local {local}", label(), dec.is_some())
        });
        if let Some(d) = dec {
            positives += 1;
            let via_oracle = interval_decompose(&m).ok().flatten().and_then(|o| o.rectangles());
            oracle.record(via_oracle == d.rectangles(), label);
        }
    }
    agree.finish(&mut report);
    oracle.finish(&mut report);
    report.check(
        "batch contains both verdicts",
        positives > 0 && positives < count,
        format!("{positives} of {count} modules weakly exact"),
    );
    report
}

/// Indecomposable modules whose small subgrid restrictions all split.
pub fn psi_witness() -> Report {
    let mut report = Report::new("psi witnesses");
    let gf2 = FieldSpec::GF2;
    let gf3 = FieldSpec::new(3).expect("prime");
    for (m, field) in [(2, gf2), (2, gf3), (3, gf2)] {
        push(&mut report, verify_psi(m, field, false).map_err(|e| e.to_string()));
    }
    let spec = PsiSpec {
        m: 2,
        shape: GridShape::new(4, 4).expect("nonempty"),
        cols: vec![1, 3, 4],
        rows: vec![2, 3, 4],
    };
    push(&mut report, verify_psi_embedded(&spec, gf2).map_err(|e| e.to_string()));
    match verify_psi(2, gf2, true) {
        Ok(r) => {
            report.check(
                "full grid is caught as a failing subgrid",
                !r.passed(),
                r.failures().map(|c| c.detail.clone()).collect::<Vec<_>>().join("; "),
            );
        }
        Err(e) => {
            report.check("full grid is caught as a failing subgrid", false, e.to_string());
        }
    }
    report
}

fn push(report: &mut Report, sub: Result<Report, String>) {
    match sub {
        Ok(r) => report.extend(r),
        Err(e) => {
            report.check("construction", false, e);
        }
    }
}

/// The hook module on the minimal grid, its dual, and a larger grid
/// realizing every displayed square diagram.
pub fn hook_witness() -> Report {
    let mut report = Report::new("hook witness");
    let gf2 = FieldSpec::GF2;
    let gf5 = FieldSpec::new(5).expect("prime");
    let minimal = HookSpec::minimal();
    let dual = HookSpec { dual: true, ..minimal };
    for (spec, field) in [(minimal, gf2), (minimal, gf5), (dual, gf2), (HookSpec::rich(), gf2)] {
        push(&mut report, verify_hook(&spec, field).map_err(|e| e.to_string()));
    }
    let hook_squares = hook_counterexample(&minimal, gf2)
        .map_err(|e| e.to_string())
        .and_then(|m| square_decompositions(&m).map_err(|e| e.to_string()))
        .map(|sq| {
            sq.into_iter()
                .filter(|(_, d)| d.as_ref().is_some_and(|d| d.summands.iter().any(|(i, _)| i.is_top_hook())))
                .map(|(q, _)| q)
                .collect::<Vec<_>>()
        });
    match hook_squares {
        Ok(qs) => report.check(
            "minimal grid: the outer square is the only one with a top hook",
            qs == [minimal.outer_square()],
            format!("{} hook squares", qs.len()),
        ),
        Err(e) => report.check("minimal grid: the outer square is the only one with a top hook", false, e),
    };
    let rich = HookSpec::rich();
    let coverage = hook_counterexample(&rich, gf2)
        .map_err(|e| e.to_string())
        .and_then(|m| square_decompositions(&m).map_err(|e| e.to_string()))
        .and_then(|sq| check_square_cases(&rich, &sq).map_err(|e| e.to_string()));
    match coverage {
        Ok((_, realized)) => report.check(
            "every displayed square diagram is realized",
            realized.len() == SQUARE_CASES.len(),
            format!("{} of {} cases", realized.len(), SQUARE_CASES.len()),
        ),
        Err(e) => report.check("every displayed square diagram is realized", false, e),
    };
    report
}

fn dims_on(f: &impl Fn(GridPoint) -> usize, shape: GridShape) -> Vec<usize> {
    shape.points().map(f).collect()
}

/// Filtration lemmas on the round-trip batch.
pub fn filtration_lemmas(seed: u64, count: usize) -> Report {
    let mut report = Report::new("filtration lemmas");
    let mut transport = Tally::new("transportation of V and Ker along R");
    let mut additive = Tally::new("V is additive under direct sums");
    let mut predicted = Tally::new("dims of V match the sigma counts of the summands");
    let mut v_plus_exact = Tally::new("V+ is weakly exact");
    let mut linking = Tally::new("double filtration satisfies the closed forms and the linking condition");
    let mut same_count = Tally::new("counting dims agree on M and on V+");
    let mut multiplicity = Tally::new("counting dim equals the summand multiplicity");
    let mut direct = Tally::new("filtrates are in direct sum at every node");
    let mut covering = Tally::new("filtrates cover every node");

    let samples = roundtrip_samples(seed, count);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for s in &samples {
        let m = &s.module;
        let shape = m.shape();
        let Ok(exact) = Exact::check(m) else {
            v_plus_exact.record(false, || format!("{}: module not weakly exact", s.label));
            continue;
        };
        let (other, other_rects) =
            random_rectangle_decomposable(shape, m.field(), rng.gen_range(1..=3), rng.gen());
        let Ok(sum) = m.direct_sum(&other) else { continue };

        let mut filtrates: Vec<Vec<Subspace>> = Vec::new();
        for r in enumerate_rectangles(shape) {
            let ctx = |what: &str| format!("{} R={r}: {what}", s.label);
            let spaces: Vec<FiltSpaces> = r
                .cells()
                .into_iter()
                .filter_map(|t| pointwise_filtration(m, &r, t).ok())
                .collect();
            for a in &spaces {
                for b in &spaces {
                    if a.t == b.t || !a.t.leq(b.t) {
                        continue;
                    }
                    let Ok(rho) = m.rho(a.t, b.t) else { continue };
                    let ok = [Sign::Plus, Sign::Minus].iter().all(|&sg| {
                        pushforward(rho, a.v(sg)).ok().as_ref() == Some(b.v(sg))
                    }) && preimage(rho, &b.ker_plus).ok().as_ref() == Some(&a.ker_plus)
                        && preimage(rho, &b.ker_minus).ok().as_ref() == Some(&a.ker_minus);
                    transport.record(ok, || ctx(&format!("{} -> {}", a.t, b.t)));
                }
            }
            for t in r.cells() {
                let parts = (
                    pointwise_filtration(m, &r, t),
                    pointwise_filtration(&other, &r, t),
                    pointwise_filtration(&sum, &r, t),
                );
                let ok = match parts {
                    (Ok(a), Ok(b), Ok(c)) => {
                        c.v_plus == a.v_plus.direct_sum(&b.v_plus)
                            && c.v_minus == a.v_minus.direct_sum(&b.v_minus)
                    }
                    _ => false,
                };
                additive.record(ok, || ctx(&format!("at {t} with {other_rects:?}")));
            }

            for sign in [Sign::Plus, Sign::Minus] {
                let expect = |t: GridPoint| {
                    s.rectangles
                        .iter()
                        .filter(|ri| {
                            let (holds, strict) = sigma(ri, &r).unwrap_or((false, false));
                            let rel = if sign == Sign::Plus { holds } else { strict };
                            rel && ri.contains(t) && r.upset_contains(t)
                        })
                        .count()
                };
                let got = exact.filt_submodule(&r, sign).map(|fam| fam.dims());
                predicted.record(got.as_ref().ok() == Some(&dims_on(&expect, shape)), || {
                    ctx(&format!("{sign:?}: {got:?}"))
                });
            }

            let vplus = exact.filt_submodule(&r, Sign::Plus).and_then(|fam| fam.as_module());
            let c = exact.counting_dim(&r);
            match &vplus {
                Ok((vm, _)) => {
                    v_plus_exact.record(weak_exact(vm).verdict, || ctx("V+ not weakly exact"));
                    let inner = crate::filtration::counting_dim(vm, &r);
                    same_count.record(inner.as_ref().ok() == c.as_ref().ok(), || ctx(&format!("{inner:?} vs {c:?}")));
                }
                Err(e) => v_plus_exact.record(false, || ctx(&e.to_string())),
            }
            let dfilt = exact.double_filtration(&r);
            linking.record(
                dfilt
                    .as_ref()
                    .is_ok_and(|w| w.iter().all(|fs| fs.linking_condition().unwrap_or(false))),
                || ctx(&format!("{:?}", dfilt.as_ref().err())),
            );
            let truth = s.rectangles.iter().filter(|&&ri| ri == r).count();
            multiplicity.record(c.as_ref().ok() == Some(&truth), || ctx(&format!("{c:?} vs {truth}")));
            match exact.rectangle_filtrate(&r) {
                Ok(fam) => filtrates.push(fam.spaces),
                Err(e) => covering.record(false, || ctx(&e.to_string())),
            }
        }
        for t in shape.points() {
            let i = shape.index(t);
            let zero = Subspace::zero(m.field(), m.dim(t));
            let total: usize = filtrates.iter().map(|f| f[i].dim()).sum();
            let span = filtrates
                .iter()
                .try_fold(zero, |acc, f| acc.sum(&f[i]))
                .map(|sp| sp.dim());
            direct.record(span.as_ref().ok() == Some(&total), || format!("{} at {t}", s.label));
            covering.record(total == m.dim(t), || format!("{} at {t}: {total} vs {}", s.label, m.dim(t)));
        }
    }
    for t in [
        transport, additive, predicted, v_plus_exact, linking, same_count, multiplicity, direct, covering,
    ] {
        t.finish(&mut report);
    }
    report
}

/// Skeleton properties and the lift of skeleton rectangles on 3×3 grids.
pub fn skeleton_suite(seed: u64, count: usize) -> Report {
    let mut report = Report::new("skeleta");
    let mut props = Tally::new("skeleton properties hold");
    let mut injective = Tally::new("lift is injective");
    let mut counting = Tally::new("counting dims agree on the skeleton and on the lift");
    let mut cover = Tally::new("skeleton multiplicities sum to dim M_t");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = GridShape::new(3, 3).expect("nonempty");
    for i in 0..count {
        let field = FieldSpec::new([2, 3, 5][i % 3]).expect("prime");
        let s: u64 = rng.gen();
        let (m, _) = random_rectangle_decomposable(shape, field, rng.gen_range(1..=6), s);
        let label = format!("#{i} GF({}) seed {s}", field.p());
        let Ok(exact) = Exact::check(&m) else {
            props.record(false, || format!("{label}: not weakly exact"));
            continue;
        };
        for t in shape.points() {
            let ctx = |what: String| format!("{label} t={t}: {what}");
            let sk = match t_skeleton(&m, t) {
                Ok(sk) => sk,
                Err(e) => {
                    props.record(false, || ctx(e.to_string()));
                    continue;
                }
            };
            let v = sk.violations(&m);
            props.record(v.is_empty(), || ctx(v.join(", ")));
            let Ok(res) = sk.restrict(&m) else { continue };
            let Ok(res_exact) = Exact::check(&res) else {
                props.record(false, || ctx("restriction not weakly exact".into()));
                continue;
            };
            let mut lifts = BTreeSet::new();
            let mut through_t = 0;
            let mut sum = 0;
            for r_sk in enumerate_rectangles(sk.shape()) {
                if !r_sk.contains(sk.origin_point()) {
                    continue;
                }
                through_t += 1;
                let (Ok(r), Ok(c_sk)) = (lift_rectangle(&m, &sk, &r_sk), res_exact.counting_dim(&r_sk)) else {
                    counting.record(false, || ctx(format!("lift of {r_sk} failed")));
                    continue;
                };
                lifts.insert(r);
                let c = exact.counting_dim(&r);
                counting.record(c.as_ref().ok() == Some(&c_sk), || ctx(format!("{r_sk} -> {r}: {c_sk} vs {c:?}")));
                sum += c_sk;
            }
            injective.record(lifts.len() == through_t, || ctx(format!("{} lifts of {through_t}", lifts.len())));
            let direct: usize = enumerate_rectangles(shape)
                .iter()
                .filter(|r| r.contains(t))
                .map(|r| exact.counting_dim(r).unwrap_or(usize::MAX / 64))
                .sum();
            cover.record(sum == m.dim(t) && direct == m.dim(t), || {
                ctx(format!("skeleton {sum}, grid {direct}, dim {}", m.dim(t)))
            });
        }
    }
    for t in [props, injective, counting, cover] {
        t.finish(&mut report);
    }
    report
}

fn random_subspace(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Subspace {
    let k = rng.gen_range(0..=n);
    Subspace::span(
        field,
        n,
        (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..field.p())).collect::<Vec<_>>()),
    )
}

/// Subspace identity for block-diagonal pairs, total order of cuts, and the
/// region comparability table.
pub fn appendix(seed: u64, count: usize) -> Report {
    let mut report = Report::new("appendix lemmas");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cap = Tally::new("intersection distributes over block direct sums");
    for i in 0..count {
        let field = FieldSpec::new([2, 3, 5, 7][i % 4]).expect("prime");
        let (n1, n2) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let a1 = random_subspace(&mut rng, field, n1);
        let b1 = random_subspace(&mut rng, field, n1);
        let a2 = random_subspace(&mut rng, field, n2);
        let b2 = random_subspace(&mut rng, field, n2);
        let lhs = a1.direct_sum(&a2).intersection(&b1.direct_sum(&b2));
        let rhs = match (a1.intersection(&b1), a2.intersection(&b2)) {
            (Ok(x), Ok(y)) => Ok(x.direct_sum(&y)),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        cap.record(lhs.is_ok() && lhs == rhs, || format!("#{i} GF({}) dims {n1}+{n2}", field.p()));
    }
    cap.finish(&mut report);

    let mut order = Tally::new("cuts are totally ordered with complementary upper parts");
    for n in 1..=8 {
        let parts = |c: &Cut| -> (BTreeSet<usize>, BTreeSet<usize>) {
            ((1..=n).filter(|&i| c.in_lower(i)).collect(), (1..=n).filter(|&i| c.in_upper(i)).collect())
        };
        for a in Cut::all(n) {
            for b in Cut::all(n) {
                let ((al, au), (bl, bu)) = (parts(&a), parts(&b));
                let ok = (al.is_subset(&bl) || bl.is_subset(&al))
                    && (al.is_subset(&bl) == bu.is_subset(&au))
                    && a.lower_subset(&b) == al.is_subset(&bl)
                    && a.upper_subset(&b) == au.is_subset(&bu);
                order.record(ok, || format!("n={n}: {a:?} vs {b:?}"));
            }
        }
    }
    order.finish(&mut report);

    let mut specs = vec![(HookSpec::minimal(), false), (HookSpec::rich(), true)];
    for _ in 0..6 {
        let nx = rng.gen_range(3..=7);
        let ny = rng.gen_range(2..=6);
        let mut xs: Vec<usize> = rand::seq::index::sample(&mut rng, nx, 3).into_iter().map(|i| i + 1).collect();
        xs.sort_unstable();
        let mut ys: Vec<usize> = rand::seq::index::sample(&mut rng, ny, 2).into_iter().map(|i| i + 1).collect();
        ys.sort_unstable();
        let corner = GridPoint::new(rng.gen_range(xs[0] + 1..=xs[2]), rng.gen_range(ys[0] + 1..=ys[1]));
        specs.push((
            HookSpec {
                shape: GridShape::new(nx, ny).expect("nonempty"),
                xs: [xs[0], xs[1], xs[2]],
                ys: [ys[0], ys[1]],
                corner: Some(corner),
                dual: false,
            },
            false,
        ));
    }
    for (spec, strict) in specs {
        let sub = verify_region_table(&spec, strict).map(|mut r| {
            r.title = format!("table on {} cols {:?} rows {:?}", spec.shape, spec.xs, spec.ys);
            r
        });
        push(&mut report, sub.map_err(|e| e.to_string()));
    }
    report
}

/// One acceptance criterion with its outcome.
pub struct CriterionRun {
    pub index: usize,
    pub name: &'static str,
    pub report: Report,
    pub elapsed: Duration,
}

pub const CRITERIA: [&str; 7] = [
    "round-trip decomposition",
    "equivalence triangle",
    "psi witness suite",
    "hook witness suite",
    "filtration lemma suite",
    "skeleton suite",
    "appendix suite",
];

/// Runs criterion `index` (1-based) with the standard batch sizes.
pub fn run_criterion(index: usize, seed: u64) -> Option<CriterionRun> {
    let name = *CRITERIA.get(index.checked_sub(1)?)?;
    let start = Instant::now();
    let report = match index {
        1 => roundtrip(seed, 200),
        2 => equivalence(seed, 500),
        3 => psi_witness(),
        4 => hook_witness(),
        5 => filtration_lemmas(seed, 200),
        6 => skeleton_suite(seed, 50),
        7 => appendix(seed, 1000),
        _ => return None,
    };
    Some(CriterionRun {
        index,
        name,
        report,
        elapsed: start.elapsed(),
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionRun> {
    (1..=CRITERIA.len()).filter_map(|i| run_criterion(i, seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batches_pass() {
        for r in [roundtrip(7, 12), equivalence(7, 40), skeleton_suite(7, 4), appendix(7, 50)] {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn only_the_v_plus_multiplicity_claim_fails() {
        let r = filtration_lemmas(7, 6);
        let failing: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failing, ["counting dims agree on M and on V+"], "{r}");
    }

    #[test]
    fn samples_are_reproducible() {
        let a: Vec<_> = roundtrip_samples(3, 5).into_iter().map(|s| s.module).collect();
        let b: Vec<_> = roundtrip_samples(3, 5).into_iter().map(|s| s.module).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(0, 1).is_none());
        assert!(run_criterion(8, 1).is_none());
    }
}
