//! The self-test battery: eleven randomized and exhaustive checks, each with
//! a time budget. Used by the `acceptance` test target and `selftest`.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::artin::{RingDescriptor, RingElement};
use crate::contract::{
    brute_force_liftable, contraction_ring, is_in_contraction, lift_through, res_m, split, transfer_across_node,
    untwist, CurveModel, JetFunction, NodeChart, NodeLocal, TowerLift, TwistedValue,
};
use crate::error::Result;
use crate::field::Field;
use crate::laurent::{d_log_to, random_automorphism, random_laurent_polynomial, Differential, LaurentSeries};
use crate::resinv::{canonical_form_char_p, char0_log, split_nil_unit, verify_ord_bound, IntLaurentSeries};
use crate::scenario::{fixtures, star_model, tacnode_model, two_layer_model};
use crate::singular::{classify_genus_one, GenusOneClass, Invariants};
use crate::tropical::{
    check_central_alignment, is_radially_aligned, lambda, multidegree, random_aligned_curve, MonoidElt, Provenance,
    RadialAlignment, TropicalCurve,
};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub checks: usize,
    /// First failing check, or the error that stopped the run.
    pub failure: Option<String>,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.elapsed <= self.limit
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} checks in {:.2}s (limit {}s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )?;
        if let Some(why) = &self.failure {
            write!(f, ": {why}")?;
        } else if self.elapsed > self.limit {
            write!(f, ": over time")?;
        }
        Ok(())
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<Tally>;

/// Number of checks run and the first one that failed.
#[derive(Default)]
struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }
}

const CRITERIA: [(usize, &str, u64, Check); 11] = [
    (1, "residue invariance under automorphisms", 30, residue_invariance),
    (2, "node sign rule", 5, node_sign),
    (3, "Leibniz rule for the outer residue", 5, leibniz),
    (4, "splitting of Ann(t)", 5, splitting),
    (5, "tacnode condition sweep", 5, tacnode_sweep),
    (6, "singularity table", 10, singularity_table),
    (
        7,
        "brute-force lifting equals the residue condition",
        60,
        lifting_equivalence,
    ),
    (8, "constructive lifts through the tower", 10, constructive_lifts),
    (
        9,
        "logarithm, nil-unit split, char p form, ord_p bound",
        60,
        invariance_algorithms,
    ),
    (10, "tropical layer fixtures", 1, layer_fixtures),
    (11, "multidegree conservation", 5, multidegree_sum),
];

/// Ids and names of the criteria.
pub fn criteria() -> Vec<(usize, &'static str)> {
    CRITERIA.iter().map(|c| (c.0, c.1)).collect()
}

/// Runs criterion `id` (1-based) with a generator derived from `seed`.
pub fn run(id: usize, seed: u64) -> Option<CriterionReport> {
    let &(id, name, limit, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let start = Instant::now();
    let tally = check(&mut rng);
    let elapsed = start.elapsed();
    let (checks, failure) = match tally {
        Ok(t) => (t.checks, t.failure),
        Err(e) => (0, Some(format!("error: {e}"))),
    };
    Some(CriterionReport {
        id,
        name,
        checks,
        failure,
        elapsed,
        limit: Duration::from_secs(limit),
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    CRITERIA.iter().filter_map(|c| run(c.0, seed)).collect()
}

/// Random local ring: `k[u]/(u^a)` or `k[u,v]` modulo a monomial ideal
/// containing powers of both variables.
pub fn random_local_ring<R: Rng + ?Sized>(rng: &mut R) -> Arc<RingDescriptor> {
    let field = *[Field::Rationals, Field::Prime(2), Field::Prime(3), Field::Prime(5)]
        .choose(rng)
        .expect("nonempty");
    if rng.gen_bool(0.6) {
        RingDescriptor::truncated_polynomial(field, rng.gen_range(1..=5))
    } else {
        let mut ideal = vec![vec![rng.gen_range(1..=3), 0], vec![0, rng.gen_range(1..=3)]];
        if rng.gen_bool(0.5) {
            ideal.push(vec![1, 1]);
        }
        RingDescriptor::new(field, vec!["u".into(), "v".into()], ideal).expect("artinian")
    }
}

fn random_units<R: Rng + ?Sized>(ring: &Arc<RingDescriptor>, n: usize, rng: &mut R) -> Vec<RingElement> {
    (0..n).map(|_| RingElement::random_unit(ring, rng)).collect()
}

/// A one- or two-layer model with random parameters and full random charts.
fn random_model<R: Rng + ?Sized>(ring: &Arc<RingDescriptor>, rng: &mut R) -> Result<CurveModel> {
    let order = rng.gen_range(2..=5);
    let n = rng.gen_range(2..=3);
    let leads = random_units(ring, n, rng);
    let model = if rng.gen_bool(0.5) {
        star_model(
            ring,
            &RingElement::random_nilpotent(ring, rng),
            &leads[..rng.gen_range(1..=n)],
            order,
        )?
    } else {
        let t1 = RingElement::random_nilpotent(ring, rng);
        let t2 = RingElement::random_nilpotent(ring, rng);
        two_layer_model(ring, &t1, &t2, &leads, order)?
    };
    let charts = model
        .charts()
        .iter()
        .map(|c| {
            let mut full = NodeChart::random(ring, c.branch, order, rng);
            full.coeffs[0] = c.lead().clone();
            full
        })
        .collect();
    model.with_charts(charts)
}

fn residue_invariance(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    let rings = [
        RingDescriptor::truncated_polynomial(Field::Rationals, 4),
        RingDescriptor::truncated_polynomial(Field::Prime(2), 3),
        RingDescriptor::truncated_polynomial(Field::Prime(5), 3),
    ];
    for ring in &rings {
        let pairs: Vec<(Differential, LaurentSeries)> = (0..1000)
            .map(|_| {
                let omega = Differential::new(random_laurent_polynomial(ring, rng, -3, 3));
                (omega, random_automorphism(ring, rng, 2, 3))
            })
            .collect();
        let outcomes = par_map(&pairs, |(omega, phi)| {
            let pulled = omega.pullback_to(phi, 0)?;
            Ok((omega.residue()?, pulled.residue()?))
        });
        for ((omega, phi), outcome) in pairs.iter().zip(outcomes) {
            let (before, after) = outcome?;
            tally.check(before == after, || {
                format!("omega = {omega:?}, phi = {phi:?}: {before} vs {after}")
            });
        }
    }
    Ok(tally)
}

/// Order-preserving parallel map over the available cores.
fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = items.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<U>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn node_sign(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    for _ in 0..200 {
        let ring = random_local_ring(rng);
        let nil = loop {
            let t = RingElement::random_nilpotent(&ring, rng);
            if !t.is_zero() || ring.nilpotency_bound() == 1 {
                break t;
            }
        };
        for t in [RingElement::zero(&ring), nil] {
            let mut local = NodeLocal::random(&t, 3, rng);
            let (x, y) = (local.on_x()?, local.on_y()?);
            let (rx, ry) = (x.residue()?, y.residue()?);
            tally.check(rx == ry.negate(), || format!("t = {t}: {rx} vs {ry}"));
            // with no poles beyond simple ones the y branch is the substitution x = t/y
            local.g.retain(|&(a, b), _| a >= b);
            let moved = transfer_across_node(&local.on_x()?, &t)?;
            tally.check(moved == local.on_y()?, || {
                format!("t = {t}: substitution disagrees with the y branch")
            });
        }
    }
    Ok(tally)
}

fn leibniz(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    let mut model = random_model(&random_local_ring(rng), rng)?;
    for k in 0..500 {
        if k % 25 == 0 {
            model = random_model(&random_local_ring(rng), rng)?;
        }
        let f = JetFunction::random(&model, rng);
        let g = JetFunction::random(&model, rng);
        let lhs = res_m(&model, &f.mul(&g)?)?.payload;
        let rhs = &(&f.constant * &res_m(&model, &g)?.payload) + &(&g.constant * &res_m(&model, &f)?.payload);
        tally.check(lhs == rhs, || format!("f = {f:?}, g = {g:?}: {lhs} vs {rhs}"));
    }
    Ok(tally)
}

fn splitting(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    for _ in 0..20 {
        let ring = random_local_ring(rng);
        let model = random_model(&ring, rng)?;
        let t = model.t()?;
        for a in t.annihilator() {
            let v = res_m(&model, &split(&model, &a)?)?;
            let want = TwistedValue {
                twist: model.report().delta.clone(),
                layer: model.depth(),
                payload: a.clone(),
            };
            tally.check(v == want, || format!("a = {a}, t = {t}: got {:?}", v.payload));
            tally.check(untwist(&v, &model)?.is_zero(), || {
                format!("[t]{a} does not untwist to 0")
            });
        }
    }
    Ok(tally)
}

fn tacnode_sweep(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    let f5 = Field::Prime(5);
    let ring = RingDescriptor::truncated_polynomial(f5, 3);
    let k = |n: i64| RingElement::from_i64(&ring, n);
    for g1 in 1..5 {
        for g2 in 1..5 {
            let model = tacnode_model(&ring, &[k(g1), k(g2)], 4)?;
            for c1 in 0..5 {
                for c2 in 0..5 {
                    let mut f = JetFunction::random(&model, rng);
                    f.tails[0][0] = k(c1);
                    f.tails[1][0] = k(c2);
                    let member = is_in_contraction(&model, &f)?;
                    let predicate = (g1 * c1 + g2 * c2) % 5 == 0;
                    tally.check(member == predicate, || format!("g = ({g1}, {g2}), c1 = ({c1}, {c2})"));
                }
            }
        }
    }
    Ok(tally)
}

fn singularity_table(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    for field in [Field::Rationals, Field::Prime(5), Field::Prime(7)] {
        let k = RingDescriptor::residue_field(field);
        for n in 1..=4usize {
            let leads = random_units(&k, n, rng);
            let model = star_model(&k, &RingElement::zero(&k), &leads, 2)?;
            let p = contraction_ring(&model, 2)?.stabilize(6)?;
            let inv = p.invariants()?;
            let want = Invariants {
                m: n,
                delta: n,
                genus: 1,
            };
            tally.check(inv == want, || format!("n = {n} over {field:?}: {inv:?}"));
            let class = classify_genus_one(&p)?;
            let expected = match n {
                1 => GenusOneClass::Cusp,
                2 => GenusOneClass::Tacnode,
                _ => GenusOneClass::Lines(n),
            };
            tally.check(class == expected, || {
                format!("n = {n}: classified as {}", class.label())
            });
        }
    }
    Ok(tally)
}

fn lifting_equivalence(_rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    let f2 = Field::Prime(2);
    let ring = RingDescriptor::truncated_polynomial(f2, 3);
    let units: Vec<RingElement> = crate::artin::enumerate_elements(&ring)
        .into_iter()
        .filter(|e| e.is_unit())
        .collect();
    let base = tacnode_model(&ring, &[RingElement::one(&ring), RingElement::one(&ring)], 2)?;
    for g1 in &units {
        for g2 in &units {
            let charts = base
                .charts()
                .iter()
                .zip([g1, g2])
                .map(|(c, g)| NodeChart::new(c.branch, vec![g.clone(), RingElement::zero(&ring)]))
                .collect::<Result<Vec<_>>>()?;
            let top = base.with_charts(charts)?;
            let m0 = top.at_level(0)?;
            let k = m0.ring().clone();
            for bits in 0..8 {
                let mut f = JetFunction::zero(&m0);
                f.constant = RingElement::from_i64(&k, bits & 1);
                f.tails[0][0] = RingElement::from_i64(&k, (bits >> 1) & 1);
                f.tails[1][0] = RingElement::from_i64(&k, (bits >> 2) & 1);
                let oracle = brute_force_liftable(&top, &f, 0)?;
                let member = is_in_contraction(&m0, &f)?;
                tally.check(oracle == member, || {
                    format!("g = ({g1}, {g2}), jet bits {bits:03b}: oracle {oracle}, condition {member}")
                });
            }
        }
    }
    Ok(tally)
}

fn constructive_lifts(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    for _ in 0..100 {
        let field = *[Field::Rationals, Field::Prime(2), Field::Prime(3), Field::Prime(5)]
            .choose(rng)
            .expect("nonempty");
        let ring = RingDescriptor::truncated_polynomial(field, rng.gen_range(2..=5));
        let top = random_model(&ring, rng)?;
        let height = top.tower_height();
        let from = rng.gen_range(0..height);
        let low = top.at_level(from)?;
        let mut f = JetFunction::random(&low, rng);
        // solve the condition for c_1 at the first node
        let mut rest = RingElement::zero(low.ring());
        for (i, c) in low.charts().iter().enumerate().skip(1) {
            rest = &rest + &(c.lead() * &f.tails[i][0]);
        }
        f.tails[0][0] = &rest.negate() * &low.charts()[0].lead().invert()?;
        match lift_through(&top, &f, from, height)? {
            TowerLift::Lifted(jets) => {
                for (k, j) in jets.iter().enumerate() {
                    let level = top.at_level(from + k)?;
                    tally.check(is_in_contraction(&level, j)?, || {
                        format!("lift at level {} fails the condition", from + k)
                    });
                    if k > 0 {
                        let below = top.at_level(from + k - 1)?;
                        tally.check(j.transfer(below.ring()) == jets[k - 1], || {
                            format!("lift at level {} does not truncate", from + k)
                        });
                    }
                }
            }
            TowerLift::Obstructed { level, .. } => tally.check(false, || format!("obstructed at level {level}")),
        }
    }
    Ok(tally)
}

fn random_nil_unit<R: Rng + ?Sized>(
    ring: &Arc<RingDescriptor>,
    rng: &mut R,
    lead: RingElement,
) -> Result<LaurentSeries> {
    let mut terms = vec![(0, lead)];
    for e in 1..=2 {
        terms.push((-e, RingElement::random_nilpotent(ring, rng)));
    }
    for e in 1..=3 {
        terms.push((e, RingElement::random(ring, rng)));
    }
    LaurentSeries::new(ring, terms, None)
}

fn invariance_algorithms(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    // logarithm
    let q = RingDescriptor::truncated_polynomial(Field::Rationals, 4);
    for _ in 0..200 {
        let lead = RingElement::random_unit(&q, rng);
        let u = random_nil_unit(&q, rng, lead)?;
        let want = 4;
        let lhs = char0_log(&u, want)?.d();
        let rhs = d_log_to(&u, want - 1)?;
        let covered = [lhs.prec(), rhs.prec()].iter().all(|p| p.is_none_or(|p| p >= want - 1));
        tally.check(covered && lhs.coefficient().agrees_with(rhs.coefficient()), || {
            format!("d log mismatch for {u:?}")
        });
    }
    // nil-unit split
    for p in [2, 3, 5] {
        let ring = RingDescriptor::truncated_polynomial(Field::Prime(p), 3);
        for _ in 0..200 {
            let u = random_nil_unit(&ring, rng, RingElement::one(&ring))?;
            let s = split_nil_unit(&u, 5)?;
            let lhs = s.g.mul(&u)?;
            let rhs = LaurentSeries::one(&ring).add(&s.f.shift(-1))?;
            let shape = s.f.terms().all(|(e, c)| e <= 0 && c.is_nilpotent()) && s.g.lowest().is_none_or(|l| l >= 0);
            tally.check(
                shape && lhs.agrees_with(&rhs) && s.g.prec().is_none_or(|p| p >= 5),
                || format!("split of {u:?} gave g = {:?}, f = {:?}", s.g, s.f),
            );
        }
    }
    // characteristic p canonical form
    for p in [2, 3] {
        let ring = RingDescriptor::truncated_polynomial(Field::Prime(p), 3);
        for _ in 0..250 {
            let omega = Differential::new(random_laurent_polynomial(&ring, rng, -6, 6));
            let a = canonical_form_char_p(&omega)?;
            let r = omega.residue()?;
            tally.check(a == r, || format!("{omega:?}: form {a}, residue {r}"));
        }
    }
    // ord_p bound through three p-th powers
    for k in 0..100 {
        let p = if k % 2 == 0 { 2 } else { 3 };
        let r = rng.gen_range(0..=1);
        let mut u = IntLaurentSeries::random(rng, p, r, -2, 2);
        for step in 0..3 {
            let ok = verify_ord_bound(&u, r + step, p)?;
            tally.check(ok, || format!("bound fails at power {step} for p = {p}"));
            u = u.pow(p);
        }
    }
    Ok(tally)
}

fn layer_fixtures(_rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    let curve = TropicalCurve::from_json(fixtures::LAYERS1)?;
    let rep = check_central_alignment(&curve, 2)?;
    let layers: Vec<Vec<u32>> = rep.layers.iter().map(|l| l.vertices.clone()).collect();
    tally.check(layers == vec![vec![0], vec![1], vec![2, 3]], || {
        format!("layers {layers:?}")
    });
    tally.check(rep.parameters == ["t1", "t2"], || {
        format!("parameters {:?}", rep.parameters)
    });
    tally.check(rep.product == "t1*t2", || format!("t = {}", rep.product));
    let steps: Vec<Option<MonoidElt>> = rep.layers.iter().map(|l| l.step.clone()).collect();
    tally.check(
        steps == vec![None, Some(MonoidElt(vec![1, 0])), Some(MonoidElt(vec![0, 1]))],
        || format!("steps {steps:?}"),
    );

    let curve = TropicalCurve::from_json(fixtures::SEMISTABLE)?;
    let rep = check_central_alignment(&curve, 1)?;
    tally.check(rep.modification.inserted() == 1, || {
        format!("{} vertices inserted", rep.modification.inserted())
    });
    let on_e2 = rep
        .modification
        .provenance
        .values()
        .filter(|p| matches!(p, Provenance::Subdivision { edge: 1, .. }))
        .count();
    tally.check(on_e2 == 1, || "subdivision vertex is not on the longer edge".into());
    Ok(tally)
}

fn multidegree_sum(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut tally = Tally::default();
    for _ in 0..100 {
        let rank = rng.gen_range(1..=3);
        let size = rng.gen_range(0..=8);
        let curve = random_aligned_curve(rng, rank, size);
        tally.check(is_radially_aligned(&curve)? == RadialAlignment::Aligned, || {
            "generator produced an unaligned curve".into()
        });
        let deg = multidegree(&curve, &lambda(&curve)?)?;
        let total: i64 = deg.values().sum();
        tally.check(total == 0, || format!("multidegree sums to {total}"));
    }
    Ok(tally)
}
