mod common;

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use common::{q, s3_on_three};
use proptest::prelude::*;
use stackvol::scalar::rational_to_f64;
use stackvol::smooth::{
    run_example, symplectic_bk_volume, CatalogOutput, Coefficient, Density, DensityMode, Params,
    PoissonFamilyModel, SymplecticModel,
};
use stackvol::{Error, FiniteGroup, RealActionModel};

#[test]
fn plane_volumes_and_densities() {
    let so2 = RealActionModel::plane_so2(2.0).unwrap();
    // ∫_{|x|≤2} 1/(2π) dx = 4π/(2π)
    assert!((so2.volume_def1(1e-8).unwrap().value - 4.0 * PI / TAU).abs() < 1e-6);
    let o2 = RealActionModel::plane_o2(2.0).unwrap();
    assert!((o2.volume_def1(1e-8).unwrap().value - 4.0 * PI / (2.0 * TAU)).abs() < 1e-6);
    for r in [0.5, 1.0, 1.5, 2.0] {
        assert!((so2.pushforward_density(r).unwrap() - r).abs() < 1e-8);
        assert!((o2.pushforward_density(r).unwrap() - r / 2.0).abs() < 1e-8);
    }
    assert!(matches!(so2.pushforward_density(0.0), Err(Error::SingularOrbit { .. })));
    assert!(matches!(so2.pushforward_density(3.0), Err(Error::OutOfDomain { .. })));
}

#[test]
fn definition_and_pushforward_agree_on_annuli() {
    let so2 = RealActionModel::plane_so2(2.0).unwrap();
    let cmp = so2.def1_vs_pushforward(0.5, 1.5, 1e-9).unwrap();
    assert!(cmp.passed, "{cmp:?}");
    // ∫_{0.5}^{1.5} r dr = 1
    assert!((cmp.def1.value - 1.0).abs() < 1e-7);
}

#[test]
fn signed_form_is_not_defined_for_reflections() {
    let o2 = RealActionModel::plane_o2(1.0).unwrap();
    assert!(o2.with_density_mode(DensityMode::SignedForm).is_err());
    let so2 = RealActionModel::plane_so2(1.0).unwrap();
    assert!(so2.with_density_mode(DensityMode::SignedForm).is_ok());
}

#[test]
fn free_torus_is_homogeneous() {
    let torus = RealActionModel::torus_free();
    let def1 = torus.volume_def1(1e-10).unwrap().value;
    let homogeneous = torus.homogeneous_volume(1e-10).unwrap().value;
    let oracle = TAU * TAU / TAU;
    assert!((homogeneous - oracle).abs() < 1e-8);
    assert!((def1 - homogeneous).abs() < 1e-8);
}

#[test]
fn invariance_of_plane_weights() {
    let so2 = RealActionModel::plane_so2(2.0).unwrap();
    assert!(so2.check_invariance(64, 1e-6, 3).passed);
    // b = 1 + x is not rotation invariant
    let mut skewed = so2.clone();
    skewed.b = Density::function(|x: &[f64]| 1.0 + x[0]);
    let report = skewed.check_invariance(64, 1e-6, 3);
    assert!(!report.passed);
    assert!(report.witness.is_some());
}

#[test]
fn rescaling_leaves_the_plane_volume_unchanged() {
    let so2 = RealActionModel::plane_so2(2.0).unwrap();
    let theta = Arc::new(|x: &[f64]| 1.0 + x[0] * x[0] + x[1] * x[1]);
    let v = so2.rescaled(theta).volume_def1(1e-9).unwrap().value;
    assert!((v - 2.0).abs() < 1e-6, "{v}");
}

#[test]
fn symplectic_bk_values() {
    let one = SymplecticModel { c: q(1, 1), k_order: 1, dimension: 2 };
    assert_eq!(symplectic_bk_volume(&one).unwrap(), q(1, 1));
    let m = SymplecticModel { c: q(3, 2), k_order: 4, dimension: 4 };
    assert_eq!(symplectic_bk_volume(&m).unwrap(), q(3, 8));
    let odd = SymplecticModel { c: q(1, 1), k_order: 1, dimension: 3 };
    assert!(symplectic_bk_volume(&odd).is_err());
}

#[test]
fn poisson_families() {
    let su2 = PoissonFamilyModel::<f64>::su2_dual(Coefficient::DerivativeSquared).unwrap();
    let bundle = PoissonFamilyModel::<f64>::sphere_bundle(1.0, 3.0, Coefficient::DerivativeSquared).unwrap();
    for t in [0.1, 0.5, 1.0, 2.0, 7.5] {
        assert!((su2.poisson_stack_density(t).unwrap() - 4.0 * PI).abs() < 1e-6);
        assert!((su2.natural_leaf_measure(t).unwrap() - 4.0 * PI).abs() < 1e-8);
        assert!((bundle.poisson_stack_density(t).unwrap() - (2.0 * t + 3.0)).abs() < 1e-6);
    }
    assert!(matches!(su2.derivative(0.0), Err(Error::OutOfDomain { .. })));
    // V(t) = (t - 1)² has a critical point at t = 1
    let flat = PoissonFamilyModel::with_coefficient(
        Arc::new(|t: f64| (t - 1.0).powi(2)),
        None,
        Coefficient::One,
        (1.5, 4.0),
    )
    .unwrap();
    assert!(flat.derivative(2.0).is_ok());
    let crit = PoissonFamilyModel::with_coefficient(
        Arc::new(|t: f64| (t - 1.0).powi(2)),
        None,
        Coefficient::One,
        (0.0, 4.0),
    );
    assert!(matches!(crit, Err(Error::CriticalPoint { .. })));
}

#[test]
fn catalog_runs_every_model() {
    for name in stackvol::smooth::MODEL_NAMES {
        let out = run_example(name, &Params::default());
        assert!(out.is_ok(), "{name}: {:?}", out.err());
    }
    let params = Params::parse(&["c=2", "k=3"]).unwrap();
    match run_example("symplectic-bk", &params).unwrap() {
        CatalogOutput::Exact(v) => assert_eq!(v, q(2, 3)),
        other => panic!("{other:?}"),
    }
    assert!(run_example("no-such-model", &Params::default()).is_err());
}

#[test]
fn s3_permutation_action_matches_finite_side() {
    let w = (vec![1.0, 2.0, 3.0], vec![1.0, 1.0, 1.0]);
    let model = RealActionModel::finite_action(FiniteGroup::symmetric(3), 3, s3_on_three, w.0, w.1).unwrap();
    // each fiber sums a over the orbit twice: 2·6 = 12, three points
    assert!((model.volume_def1(1e-12).unwrap().value - 3.0 / 12.0).abs() < 1e-15);
    let bad = RealActionModel::finite_action(FiniteGroup::cyclic(2), 2, |_, _| 0, vec![1.0; 2], vec![1.0; 2]);
    assert!(matches!(bad, Err(Error::InvalidAction(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn finite_smooth_consistency(seed in any::<u64>()) {
        let (model, groupoid, w) = common::finite_action_pair(seed);
        let numeric = model.volume_def1(1e-12).unwrap().value;
        let exact = rational_to_f64(&groupoid.fiber_volume(&w).unwrap());
        prop_assert!((numeric - exact).abs() <= 1e-12 * exact.abs().max(1e-300), "{} vs {}", numeric, exact);
    }

    #[test]
    fn plane_density_scales_linearly(r in 0.01f64..2.0) {
        let so2 = RealActionModel::plane_so2(2.0).unwrap();
        prop_assert!((so2.pushforward_density(r).unwrap() - r).abs() < 1e-10);
    }
}
