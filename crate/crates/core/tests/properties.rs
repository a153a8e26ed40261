use std::sync::OnceLock;

use arcforge::arc::scratch_coverage;
use arcforge::bounds::{self, BoundRecord};
use arcforge::certify::Certificate;
use arcforge::greedy::{greedy_trial, trial_rng, SearchConfig};
use arcforge::{verify_arc, verify_complete, Arc, CoverageState, Field, FieldElement, PlaneIndex};
use proptest::prelude::*;

const ORDERS: [u64; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27];

const LARGE_ORDERS: [u64; 12] = [49, 64, 81, 121, 243, 256, 343, 729, 1024, 2048, 3125, 4096];

fn large_fields() -> &'static [Field] {
    static FIELDS: OnceLock<Vec<Field>> = OnceLock::new();
    FIELDS.get_or_init(|| {
        LARGE_ORDERS
            .iter()
            .map(|&q| Field::from_order(q).unwrap())
            .collect()
    })
}

fn plane(q: u64) -> PlaneIndex {
    PlaneIndex::build(Field::from_order(q).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws_on_random_elements(
        which in 0..LARGE_ORDERS.len(),
        a in any::<u32>(), b in any::<u32>(), c in any::<u32>(),
    ) {
        let f = &large_fields()[which];
        let q = f.order() as u64;
        let [a, b, c] = [a, b, c].map(|x| f.element(x as u64 % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
        prop_assert_eq!(f.pow(a, q), a);
    }

    #[test]
    fn lines_through_pairs(q in prop::sample::select(ORDERS.to_vec()), x in any::<u32>(), y in any::<u32>()) {
        let pi = plane(q);
        let n = pi.n_points();
        let (a, b) = (x % n, y % n);
        prop_assume!(a != b);
        let l = pi.line_through(a, b).unwrap();
        prop_assert_eq!(pi.line_through(b, a).unwrap(), l);
        prop_assert!(pi.incidence(a, l) && pi.incidence(b, l));
        prop_assert_eq!(pi.points_on_line(l).len() as u64, q + 1);
        let m = pi.line_through(a, (b + 1) % n);
        if let Ok(m) = m {
            if m != l {
                prop_assert_eq!(pi.meet(l, m).unwrap(), a);
            }
        }
    }

    #[test]
    fn scaling_preserves_points(q in prop::sample::select(ORDERS.to_vec()), x in any::<u32>(), s in 1u64..) {
        let pi = plane(q);
        let f = pi.field();
        let id = x % pi.n_points();
        let lambda = f.element(1 + s % (q - 1)).unwrap();
        let scaled = pi.coords(id).map(|c| f.mul(lambda, c));
        prop_assert_eq!(pi.id_of(scaled).unwrap(), id);
        prop_assert_eq!(pi.normalize(scaled).unwrap(), pi.coords(id));
    }

    #[test]
    fn incremental_coverage_matches_scratch(q in prop::sample::select(ORDERS[..8].to_vec()), seed in any::<u64>()) {
        let pi = plane(q);
        let mut rng = trial_rng(seed, 0);
        let arc = arcforge::greedy::complete_extension(&pi, &Arc::new(&pi), &mut rng).unwrap();
        let mut state = CoverageState::new(&pi);
        let mut built = Arc::new(&pi);
        for (k, &p) in arc.points().iter().enumerate() {
            state.add(&pi, &mut built, p).unwrap();
            let scratch = scratch_coverage(&pi, &arc.points()[..=k]);
            prop_assert_eq!(state.covered(), &scratch);
        }
        prop_assert!(state.is_complete(&pi));
    }

    #[test]
    fn record_formulas_are_monotone(row in 0usize..1180) {
        let r = bounds::KnownTable::embedded().rows().nth(row).unwrap();
        let a = BoundRecord::compute(r.q, r.t2bar, false);
        let b = BoundRecord::compute(r.q, r.t2bar + 1, false);
        if let (Some(x), Some(y)) = (a.big_a_q, b.big_a_q) {
            prop_assert!(x - y == 0 || x - y == 1);
        }
        prop_assert!(b.big_b_q > a.big_b_q);
        prop_assert!(b.delta > a.delta && b.p_q > a.p_q);
        prop_assert_eq!(a.t_hat, b.t_hat);
    }
}

#[test]
fn certificates_round_trip_found_arcs() {
    let dir = tempfile::tempdir().unwrap();
    let mut count = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let pi = plane(q);
        let cfg = SearchConfig::new(q as u32).unwrap();
        for i in 0..10 {
            let arc = greedy_trial(&pi, &cfg, &mut trial_rng(42, i));
            let path = dir.path().join(format!("{q}-{i}.txt"));
            arcforge::write_certificate(&pi, &arc, true, &path).unwrap();
            let first = std::fs::read(&path).unwrap();
            arcforge::write_certificate(&pi, &arc, true, &path).unwrap();
            assert_eq!(std::fs::read(&path).unwrap(), first);

            let cert = arcforge::certify::read_certificate(&path).unwrap();
            let (_, ids) = cert.resolve().unwrap();
            let mut ids = ids;
            ids.sort_unstable();
            assert_eq!(ids, arc.sorted_points());
            let v = arcforge::read_and_verify(&path).unwrap();
            assert!(v.is_arc && v.is_complete && v.holds());
            assert_eq!(v.uncovered, 0);
            count += 1;
        }
    }
    assert_eq!(count, 100);
}

#[test]
fn verifier_agrees_with_engine_up_to_32() {
    for q in [17u64, 19, 23, 25, 27, 29, 31, 32] {
        let pi = plane(q);
        let cfg = SearchConfig::new(q as u32).unwrap();
        for i in 0..5 {
            let arc = greedy_trial(&pi, &cfg, &mut trial_rng(7, i));
            let (state, _) = CoverageState::for_arc(&pi, &arc).unwrap();
            assert!(state.is_complete(&pi));
            let text = Certificate::from_arc(&pi, &arc, true).to_text();
            let v = Certificate::parse(&text).unwrap().verify().unwrap();
            assert!(v.is_arc && v.is_complete);
            // Dropping a point must leave the smaller arc incomplete.
            let fewer = &arc.points()[..arc.len() - 1];
            assert!(verify_arc(&pi, fewer));
            assert!(!verify_complete(&pi, fewer).unwrap().complete);
        }
    }
}

#[test]
fn odd_prime_conics_are_complete() {
    for q in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let pi = plane(q);
        let f = pi.field();
        let mut pts = vec![pi
            .id_of([FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE])
            .unwrap()];
        pts.extend(
            f.elements()
                .map(|t| pi.id_of([FieldElement::ONE, t, f.mul(t, t)]).unwrap()),
        );
        assert!(verify_arc(&pi, &pts));
        assert!(verify_complete(&pi, &pts).unwrap().complete, "q={q}");
    }
}

#[test]
fn even_order_conics_extend_by_the_nucleus() {
    // For even q every tangent of a conic passes through one nucleus, so the
    // conic alone is incomplete and the hyperoval is still an arc.
    for q in [4u64, 8, 16] {
        let pi = plane(q);
        let f = pi.field();
        let mut pts = vec![pi
            .id_of([FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE])
            .unwrap()];
        pts.extend(
            f.elements()
                .map(|t| pi.id_of([FieldElement::ONE, t, f.mul(t, t)]).unwrap()),
        );
        let c = verify_complete(&pi, &pts).unwrap();
        assert_eq!(c.uncovered.len(), 1);
        pts.push(c.uncovered[0]);
        assert!(verify_complete(&pi, &pts).unwrap().complete);
    }
}
