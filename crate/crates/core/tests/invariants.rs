use std::f64::consts::TAU;

use mublp::fourier::{column_sum, g_single};
use mublp::gamma::{canonical_rep, canonicalize, expand_orbit, ExponentVector};
use mublp::karlsson::{self, Branches, KarlssonParams};
use mublp::lp::{build_lp, mps, CrossVariant, Family, Sense};
use mublp::verify::canonical_rhos;
use mublp::Error;
use proptest::prelude::*;

fn branches() -> impl Strategy<Value = Branches> {
    (0usize..8).prop_map(|k| Branches::all()[k])
}

fn gamma6() -> impl Strategy<Value = ExponentVector> {
    prop::collection::vec(-3i32..=3, 6).prop_map(ExponentVector::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn karlsson_members_are_hadamard_and_kill_rho(
        theta in 0.0..TAU, phi in 0.0..TAU, z in 0.0..TAU, br in branches()
    ) {
        let p = KarlssonParams::new(theta, phi, z).with_branches(br);
        match karlsson::build(&p) {
            Ok(k) => {
                prop_assert!(k.unitarity_residual() < 1e-9);
                for rho in canonical_rhos() {
                    prop_assert!(column_sum(&k, &rho).unwrap().norm() < 1e-9);
                }
            }
            // near-singular Möbius denominators are reported, never silently wrong
            Err(Error::SingularTransform { .. }) | Err(Error::ConsistencyViolation { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn g_is_symmetric_and_conjugates_under_negation(gamma in gamma6(), shift in 0usize..6) {
        let k = karlsson::build(&KarlssonParams::new(0.4, 2.0, 1.3)).unwrap();
        let g = g_single(&k, &gamma).unwrap();
        let mut rotated = gamma.components().to_vec();
        rotated.rotate_left(shift);
        let h = g_single(&k, &ExponentVector::new(rotated)).unwrap();
        prop_assert!((g - h).norm() < 1e-9);
        let neg = g_single(&k, &gamma.neg()).unwrap();
        prop_assert!((neg - g.conj()).norm() < 1e-9);
    }

    #[test]
    fn canonical_form_is_an_orbit_invariant(gamma in gamma6(), shift in 0usize..6) {
        let rep = canonical_rep(&gamma);
        prop_assert_eq!(canonical_rep(&rep), rep.clone());
        prop_assert_eq!(rep.l1(), gamma.l1());
        let mut moved = gamma.components().to_vec();
        moved.rotate_right(shift);
        prop_assert_eq!(canonical_rep(&ExponentVector::new(moved)), rep.clone());
        let orbit = canonicalize(&gamma);
        prop_assert!(expand_orbit(&orbit.rep).iter().any(|v| v == &gamma || v == &gamma.neg()));
    }
}

#[test]
fn mps_export_is_deterministic_and_round_trips() {
    let p = build_lp(6, 6, true, CrossVariant::Minus)
        .unwrap()
        .set_objective(
            Sense::Min,
            Family::F,
            &ExponentVector::new(vec![3, -3, 0, 0, 0, 0]),
        )
        .unwrap();
    let a = mps::to_mps(&p).unwrap();
    let b = mps::to_mps(
        &build_lp(6, 6, true, CrossVariant::Minus)
            .unwrap()
            .set_objective(
                Sense::Min,
                Family::F,
                &ExponentVector::new(vec![3, -3, 0, 0, 0, 0]),
            )
            .unwrap(),
    )
    .unwrap();
    assert_eq!(a, b);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d6.mps");
    mps::export_mps(&p, &path).unwrap();
    let back = mps::import_mps(&path).unwrap();
    assert_eq!(mps::to_mps(&back).unwrap(), a);
    assert_eq!(back.rows.len(), p.rows.len());
    assert_eq!(back.nonzeros(), p.nonzeros());
}
