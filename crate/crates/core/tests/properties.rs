use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use contraction::artin::{RingDescriptor, RingElement};
use contraction::battery::random_local_ring;
use contraction::contract::{
    brute_force_liftable, contraction_ring, is_in_contraction, lift_through, res_m, res_twisted, split, untwist,
    CurveModel, JetFunction, NodeChart, NodeLocal, TowerLift,
};
use contraction::field::Field;
use contraction::laurent::{d_log, random_automorphism, random_laurent_polynomial, Differential, LaurentSeries};
use contraction::scenario::{star_model, two_layer_model, JetFile, ScenarioFile};
use contraction::tropical::{
    lambda, multidegree, random_aligned_curve, semistable_modification, MonoidElt, TropicalCurve,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn units(ring: &Arc<RingDescriptor>, n: usize, rng: &mut ChaCha8Rng) -> Vec<RingElement> {
    (0..n).map(|_| RingElement::random_unit(ring, rng)).collect()
}

/// Star or two-layer model with full random charts.
fn model(ring: &Arc<RingDescriptor>, rng: &mut ChaCha8Rng) -> CurveModel {
    let order = rng.gen_range(2..=4);
    let n = rng.gen_range(2..=3);
    let leads = units(ring, n, rng);
    let m = if rng.gen_bool(0.5) {
        star_model(ring, &RingElement::random_nilpotent(ring, rng), &leads, order).unwrap()
    } else {
        let t1 = RingElement::random_nilpotent(ring, rng);
        let t2 = RingElement::random_nilpotent(ring, rng);
        two_layer_model(ring, &t1, &t2, &leads, order).unwrap()
    };
    let charts = m
        .charts()
        .iter()
        .map(|c| {
            let mut full = NodeChart::random(ring, c.branch, order, rng);
            full.coeffs[0] = c.lead().clone();
            full
        })
        .collect();
    m.with_charts(charts).unwrap()
}

/// Forces the residue condition by solving for `c_1` at the first node.
fn member(m: &CurveModel, rng: &mut ChaCha8Rng) -> JetFunction {
    let mut f = JetFunction::random(m, rng);
    let mut rest = RingElement::zero(m.ring());
    for (i, c) in m.charts().iter().enumerate().skip(1) {
        rest = &rest + &(c.lead() * &f.tails[i][0]);
    }
    f.tails[0][0] = &rest.negate() * &m.charts()[0].lead().invert().unwrap();
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_multiplication_is_associative_and_distributive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = random_local_ring(&mut r);
        let [a, b, c] = [0; 3].map(|_| RingElement::random(&ring, &mut r));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn series_derivative_is_a_derivation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = random_local_ring(&mut r);
        let f = random_laurent_polynomial(&ring, &mut r, -3, 3);
        let g = random_laurent_polynomial(&ring, &mut r, -3, 3);
        let lhs = f.mul(&g).unwrap().derivative();
        let rhs = f.derivative().mul(&g).unwrap().add(&f.mul(&g.derivative()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn residue_survives_pullback_in_small_characteristic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = RingDescriptor::truncated_polynomial(Field::Prime(3), 3);
        let omega = Differential::new(random_laurent_polynomial(&ring, &mut r, -4, 2));
        let phi = random_automorphism(&ring, &mut r, 2, 2);
        prop_assert_eq!(omega.pullback_to(&phi, 0).unwrap().residue().unwrap(), omega.residue().unwrap());
    }

    #[test]
    fn exact_differentials_have_no_residue(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = random_local_ring(&mut r);
        let f = random_laurent_polynomial(&ring, &mut r, -4, 4);
        prop_assert!(f.d().residue().unwrap().is_zero());
    }

    #[test]
    fn dlog_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = RingDescriptor::truncated_polynomial(Field::Rationals, 3);
        let s = random_automorphism(&ring, &mut r, 1, 2);
        let t = random_automorphism(&ring, &mut r, 1, 2);
        let lhs = d_log(&s.mul(&t).unwrap()).unwrap();
        let rhs = d_log(&s).unwrap().add(&d_log(&t).unwrap()).unwrap();
        prop_assert!(lhs.coefficient().agrees_with(rhs.coefficient()));
    }

    #[test]
    fn branch_residues_at_a_node_cancel(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = random_local_ring(&mut r);
        let t = RingElement::random_nilpotent(&ring, &mut r);
        let local = NodeLocal::random(&t, 3, &mut r);
        let (x, y) = (local.on_x().unwrap(), local.on_y().unwrap());
        prop_assert_eq!(x.residue().unwrap(), y.residue().unwrap().negate());
    }

    #[test]
    fn res_m_is_a_derivation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = model(&random_local_ring(&mut r), &mut r);
        let f = JetFunction::random(&m, &mut r);
        let g = JetFunction::random(&m, &mut r);
        let lhs = res_m(&m, &f.mul(&g).unwrap()).unwrap().payload;
        let rhs = &(&f.constant * &res_m(&m, &g).unwrap().payload) + &(&g.constant * &res_m(&m, &f).unwrap().payload);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn split_inverts_res_m_on_the_annihilator(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = model(&random_local_ring(&mut r), &mut r);
        let t = m.t().unwrap();
        for a in t.annihilator() {
            let v = res_m(&m, &split(&m, &a).unwrap()).unwrap();
            prop_assert_eq!(&v.payload, &a);
            prop_assert!(untwist(&v, &m).unwrap().is_zero());
        }
    }

    #[test]
    fn contraction_is_closed_under_products(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = model(&random_local_ring(&mut r), &mut r);
        let f = member(&m, &mut r);
        let g = member(&m, &mut r);
        prop_assert!(is_in_contraction(&m, &f.add(&g).unwrap()).unwrap());
        prop_assert!(is_in_contraction(&m, &f.mul(&g).unwrap()).unwrap());
    }

    #[test]
    fn lifts_truncate_and_keep_the_condition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let field = [Field::Rationals, Field::Prime(2), Field::Prime(3)][r.gen_range(0..3)];
        let ring = RingDescriptor::truncated_polynomial(field, r.gen_range(2..=4));
        let top = model(&ring, &mut r);
        let low = top.at_level(0).unwrap();
        let f = member(&low, &mut r);
        let TowerLift::Lifted(jets) = lift_through(&top, &f, 0, top.tower_height()).unwrap() else {
            return Err(TestCaseError::fail("obstructed"));
        };
        for (k, j) in jets.iter().enumerate().skip(1) {
            let here = top.at_level(k).unwrap();
            let below = top.at_level(k - 1).unwrap();
            prop_assert_eq!(&j.transfer(below.ring()), &jets[k - 1]);
            for node in 0..here.nodes() {
                let hi = res_twisted(&here, j, node).unwrap().payload;
                let lo = res_twisted(&below, &jets[k - 1], node).unwrap().payload;
                prop_assert_eq!(hi.transfer(below.ring()), lo);
            }
        }
    }

    #[test]
    fn delta_does_not_depend_on_the_charts(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let k = RingDescriptor::residue_field(Field::Prime(7));
        let zero = RingElement::zero(&k);
        let a = star_model(&k, &zero, &units(&k, n, &mut r), 2).unwrap();
        let b = star_model(&k, &zero, &units(&k, n, &mut r), 2).unwrap();
        let da = contraction_ring(&a, 2).unwrap().stabilize(6).unwrap().delta_invariant().unwrap();
        let db = contraction_ring(&b, 2).unwrap().stabilize(6).unwrap().delta_invariant().unwrap();
        prop_assert_eq!(da, db);
        prop_assert_eq!(da, n);
    }

    #[test]
    fn multidegree_of_lambda_sums_to_zero(seed in any::<u64>(), rank in 1usize..=3, size in 0usize..=8) {
        let curve = random_aligned_curve(&mut rng(seed), rank, size);
        let deg = multidegree(&curve, &lambda(&curve).unwrap()).unwrap();
        prop_assert_eq!(deg.values().sum::<i64>(), 0);
    }

    #[test]
    fn subdivision_preserves_edge_lengths_and_genus(seed in any::<u64>(), size in 1usize..=8) {
        let curve = random_aligned_curve(&mut rng(seed), 2, size);
        let lam = lambda(&curve).unwrap();
        let far = lam
            .values
            .values()
            .fold(MonoidElt::zero(2), |acc, v| if acc.le(v) { v.clone() } else { acc });
        let sub = semistable_modification(&curve, &far).unwrap();
        prop_assert_eq!(sub.curve.genus(), curve.genus());
        let mut total: BTreeMap<usize, MonoidElt> = BTreeMap::new();
        for (e, &origin) in sub.curve.edges.iter().zip(&sub.edge_origin) {
            let acc = total.entry(origin).or_insert_with(|| MonoidElt::zero(2));
            *acc = acc.add(&e.length);
        }
        for (i, e) in curve.edges.iter().enumerate() {
            prop_assert_eq!(&total[&i], &e.length);
        }
    }

    #[test]
    fn scenario_and_jet_files_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = model(&random_local_ring(&mut r), &mut r);
        let curve: TropicalCurve = m.report().modification.curve.clone();
        let file = ScenarioFile::from_model(&m, &curve);
        let text = serde_json::to_string(&file).unwrap();
        let back = ScenarioFile::parse(&text).unwrap();
        prop_assert_eq!(&back, &file);
        let m2 = back.model().unwrap();
        prop_assert_eq!(m2.charts(), m.charts());

        let f = JetFunction::random(&m, &mut r);
        let jf = JetFile::from_jet(&m, &f, None);
        let again = JetFile::parse(&serde_json::to_string(&jf).unwrap()).unwrap();
        prop_assert_eq!(again.jet(&m2).unwrap(), f);
    }

    #[test]
    fn series_literals_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ring = random_local_ring(&mut r);
        let s = random_laurent_polynomial(&ring, &mut r, -3, 3).truncated(r.gen_range(-1..5));
        prop_assert_eq!(LaurentSeries::from_literal(&ring, &s.to_literal()).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Over a tower of height 3 with `ord(t) = 1`, jets at levels 0 and 1
    /// extend to the top exactly when they satisfy the residue condition.
    #[test]
    fn residue_condition_matches_exhaustive_lifting(seed in any::<u64>(), level in 0usize..=1) {
        let mut r = rng(seed);
        let ring = RingDescriptor::truncated_polynomial(Field::Prime(3), 4);
        let u = RingElement::var(&ring, 0);
        let top = star_model(&ring, &u, &units(&ring, 2, &mut r), 2).unwrap();
        let m = top.at_level(level).unwrap();
        let f = if r.gen_bool(0.5) { member(&m, &mut r) } else { JetFunction::random(&m, &mut r) };
        prop_assert_eq!(brute_force_liftable(&top, &f, level).unwrap(), is_in_contraction(&m, &f).unwrap());
    }
}
