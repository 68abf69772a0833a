use ssb_core::breaking::{compute_spectrum, SpectrumOptions};
use ssb_core::electroweak::{build_model, vacuum, ElectroweakParams};
use ssb_core::lattice::study::{constant_gauge_invariance, cubic_remainder_ratio, unitary_perturbation};
use ssb_core::lattice::{covariance_convergence, quadratic_expansion_check, Grid, Metric, MultipletField};
use ssb_core::lie::element;
use ssb_core::SsbError;

#[test]
fn covariance_is_second_order() {
    let p = ElectroweakParams::default();
    let model = build_model(&p).unwrap();
    let study = covariance_convergence(&model.gens, model.potential.as_ref(), 2, &[16, 32, 64], Metric::Euclidean, 7)
        .unwrap();
    let orders = study.covariance_orders();
    assert_eq!(orders.len(), 4);
    assert!(orders.iter().all(|p| (1.9..=2.1).contains(p)), "{:?}", study.orders);
    assert!(study.within(1.8, 2.1), "{:?}", study.orders);
    for pair in study.errors.windows(2) {
        assert!(pair[1].projection_defect < pair[0].projection_defect);
    }
}

#[test]
fn lorentzian_covariance_is_second_order() {
    let model = build_model(&ElectroweakParams::default()).unwrap();
    let study =
        covariance_convergence(&model.gens, model.potential.as_ref(), 2, &[16, 32], Metric::Lorentzian, 3).unwrap();
    assert!(study.covariance_orders().iter().all(|p| (1.9..=2.1).contains(p)), "{:?}", study.orders);
}

#[test]
fn constant_transformations_are_exact_symmetries() {
    let model = build_model(&ElectroweakParams::default()).unwrap();
    let grid = Grid::new(vec![8, 8], 0.125, Metric::Euclidean).unwrap();
    for seed in 0..3 {
        let x = element(&[0.7, -0.4, 1.3, 0.9]);
        let d = constant_gauge_invariance(&model.gens, model.potential.as_ref(), &grid, &x, seed).unwrap();
        assert!(d < 1e-10, "{d}");
    }
}

#[test]
fn quadratic_remainder_is_cubic() {
    let p = ElectroweakParams::default();
    let model = build_model(&p).unwrap();
    let spec = compute_spectrum(&model, &vacuum(&p), SpectrumOptions::default()).unwrap();
    let grid = Grid::new(vec![8, 8], 0.125, Metric::Euclidean).unwrap();
    let pert = unitary_perturbation(&model.gens, &spec, &grid, 11).unwrap();
    let zero = quadratic_expansion_check(&model, &spec, &grid, &pert, 0.0).unwrap();
    assert_eq!(zero.remainder, 0.0);
    let (ratio, big, small) = cubic_remainder_ratio(&model, &spec, &grid, &pert, 1e-2).unwrap();
    assert!((6.5..=9.5).contains(&ratio));
    assert!(big.cross_term < 1e-10 && small.cross_term < 1e-10);
}

#[test]
fn quadratic_check_rejects_goldstone_shifts() {
    let p = ElectroweakParams::default();
    let model = build_model(&p).unwrap();
    let spec = compute_spectrum(&model, &vacuum(&p), SpectrumOptions::default()).unwrap();
    let grid = Grid::new(vec![4, 4], 0.25, Metric::Euclidean).unwrap();
    let mut pert = unitary_perturbation(&model.gens, &spec, &grid, 1).unwrap();
    pert.dphi = MultipletField::constant(&grid, &ssb_core::lie::unrealify(&spec.orbit_basis[0]));
    assert!(matches!(
        quadratic_expansion_check(&model, &spec, &grid, &pert, 0.1),
        Err(SsbError::AtSite { .. })
    ));
}
