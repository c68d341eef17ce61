use eulerlab_core::surfacereps::fixtures::rotation_rep;
use eulerlab_core::surfacereps::{fingerprint, semi_conjugacy_map, SurfacePresentation};
use eulerlab_core::Lift;

fn conjugator() -> Lift {
    Lift::pl(vec![(0.0, 0.0), (0.3, 0.5), (0.7, 0.8)], 0).unwrap()
}

fn pair() -> (eulerlab_core::surfacereps::LiftedRep, eulerlab_core::surfacereps::LiftedRep) {
    let r1 = rotation_rep(SurfacePresentation::new(1, 1), &[0.618_033_988_749_895, 0.414_213_562_373_095]);
    let r2 = r1.conjugate(&conjugator());
    (r1, r2)
}

#[test]
fn pl_conjugate_residual_decreases_with_radius() {
    let (r1, r2) = pair();
    let h = conjugator();
    let mut residuals = Vec::new();
    let mut offsets = Vec::new();
    for radius in 1..=4 {
        let s = semi_conjugacy_map(&r1, &r2, radius, 64).unwrap();
        assert_eq!(s.monotonicity_violations, 0);
        assert!(s.translation_defect <= 1e-9);
        residuals.push(s.equivariance_residual);
        // distance from the known conjugacy, up to the rotation centralizer
        let diffs: Vec<f64> = s.xs.iter().zip(&s.values).map(|(&x, &v)| v - h.eval(x)).collect();
        let spread = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - diffs.iter().cloned().fold(f64::INFINITY, f64::min);
        offsets.push(spread);
    }
    println!("residuals {residuals:?} spreads {offsets:?}");
    for w in residuals.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{residuals:?}");
    }
    assert!(residuals[3] < residuals[0]);
    for w in offsets.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{offsets:?}");
    }
}

#[test]
fn conjugate_fingerprints_agree() {
    let (r1, r2) = pair();
    let f1 = fingerprint(&r1, 1, 1e-5).unwrap();
    let f2 = fingerprint(&r2, 1, 1e-5).unwrap();
    assert!(f1.agrees_with(&f2, 1e-9));
    let other = rotation_rep(SurfacePresentation::new(1, 1), &[0.3, 0.414_213_562_373_095]);
    assert!(!fingerprint(&other, 1, 1e-5).unwrap().agrees_with(&f1, 1e-9));
}
