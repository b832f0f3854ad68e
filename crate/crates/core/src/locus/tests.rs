use super::*;
use crate::characteristics::enumerate;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn generic_omega() -> PeriodMatrix {
    PeriodMatrix::new(DMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.1, 0.2), c(0.1, 0.2), c(0.0, 1.0)])).unwrap()
}

fn halves() -> Characteristic {
    Characteristic::all_halves(2)
}

#[test]
fn jacobi_odd_theta_has_one_simple_zero_per_cell() {
    let tau = PeriodMatrix::diagonal(&[c(0.0, 1.0)]).unwrap();
    let slice = Slice::coordinate(&tau, 0, DVector::from_element(1, c(0.0, 0.0))).unwrap();
    let delta = Characteristic::all_halves(1);
    let zeros = slice_zeros(&delta, &tau, &slice, 1e-13).unwrap();
    assert_eq!(zeros.len(), 1);
    assert_eq!(zeros[0].multiplicity, 1);
    assert!(zeros[0].local_coord.norm() < 1e-10);
    assert!((zeros[0].winding_integral - 1.0).abs() < 0.1);
}

#[test]
fn even_elliptic_theta_zero_sits_at_half_period() {
    // θ₀(τ, ·) vanishes at ½ + τ/2
    let tau = PeriodMatrix::diagonal(&[c(0.2, 1.3)]).unwrap();
    let mut slice = Slice::coordinate(&tau, 0, DVector::from_element(1, c(0.0, 0.0))).unwrap();
    slice.origin = c(0.01, 0.01);
    let zeros = slice_zeros(&Characteristic::zero(1), &tau, &slice, 1e-13).unwrap();
    assert_eq!(zeros.len(), 1);
    assert!((zeros[0].local_coord - c(0.6, 0.65)).norm() < 1e-9);
}

#[test]
fn generic_random_slices_see_simple_zeros() {
    let omega = generic_omega();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut seen = 0;
    for _ in 0..5 {
        let slice = Slice {
            base: DVector::from_fn(2, |_, _| c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))),
            direction: DVector::from_fn(2, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
            origin: c(-1.0, -1.0),
            side1: c(2.0, 0.0),
            side2: c(0.0, 2.0),
        };
        for z in slice_zeros(&halves(), &omega, &slice, 1e-13).unwrap() {
            assert_eq!(z.multiplicity, 1);
            assert!((z.winding_integral - 1.0).abs() <= 0.1);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn block_slice_zeros_follow_the_elliptic_factor() {
    let omega = PeriodMatrix::diagonal(&[c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
    let tau1 = PeriodMatrix::diagonal(&[c(0.0, 1.0)]).unwrap();
    let slice = Slice::coordinate(&omega, 0, DVector::from_vec(vec![c(0.0, 0.0), c(0.31, 0.47)])).unwrap();
    let zeros = slice_zeros(&halves(), &omega, &slice, 1e-13).unwrap();
    assert_eq!(zeros.len(), 1);
    for z in zeros {
        assert!(tau1.torus_norm(&DVector::from_element(1, z.z[0])).unwrap() < 1e-8);
    }
}

#[test]
fn slice_inside_a_branch_is_degenerate() {
    let omega = PeriodMatrix::diagonal(&[c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
    let slice = Slice::coordinate(&omega, 0, DVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0)])).unwrap();
    assert_eq!(slice_zeros(&halves(), &omega, &slice, 1e-13), Err(Error::DegenerateSlice));
}

#[test]
fn empty_trace() {
    assert!(trace_zero_curve(&halves(), &generic_omega(), 0).unwrap().is_empty());
}

#[test]
fn reducible_trace_lies_on_the_branches() {
    let omega = PeriodMatrix::diagonal(&[c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
    let tau1 = PeriodMatrix::diagonal(&[c(0.0, 1.0)]).unwrap();
    let tau2 = PeriodMatrix::diagonal(&[c(0.0, 2.0)]).unwrap();
    for axis in 0..2 {
        let cloud = trace_zero_curve_along(&halves(), &omega, 9, axis, 1e-13).unwrap();
        assert_eq!(cloud.len(), 9);
        for p in &cloud {
            let d1 = tau1.torus_norm(&DVector::from_element(1, p.z[0])).unwrap();
            let d2 = tau2.torus_norm(&DVector::from_element(1, p.z[1])).unwrap();
            assert!(d1.min(d2) <= 1e-6);
        }
    }
}

#[test]
fn slice_degree_is_constant_for_block_matrices() {
    let omega = PeriodMatrix::diagonal(&[c(0.1, 1.2), c(-0.2, 0.9)]).unwrap();
    for delta in enumerate(2).unwrap() {
        let cloud = trace_zero_curve_along(&delta, &omega, 10, 0, 1e-13).unwrap();
        for k in 0..10 {
            let total: u32 = cloud.iter().filter(|z| z.slice_index == k).map(|z| z.multiplicity).sum();
            assert_eq!(total, 1, "{delta} slice {k}");
        }
    }
}

#[test]
fn generic_cloud_is_connected_and_smooth() {
    let omega = generic_omega();
    let cloud = trace_zero_curve(&halves(), &omega, 400).unwrap();
    assert!(!cloud.is_empty());
    assert_eq!(cloud_components(&cloud, &omega, 0.25).unwrap(), 1);
    for p in cloud.iter().step_by(7) {
        let class = classify_point(&halves(), &omega, &p.z, &ClassifyTolerances::default()).unwrap();
        assert_eq!(class.kind, PointKind::Smooth);
        assert!(class.full_grad_norm > 1e-8);
    }
}

#[test]
fn classification_examples() {
    let omega = PeriodMatrix::diagonal(&[c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
    let tol = ClassifyTolerances::default();
    let node = classify_point(&halves(), &omega, &DVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0)]), &tol).unwrap();
    assert_eq!(node.kind, PointKind::Node);
    assert!(node.hess_det.norm() > 1e-8);
    let branch = classify_point(&halves(), &omega, &DVector::from_vec(vec![c(0.0, 0.0), c(0.3, 0.4)]), &tol).unwrap();
    assert_eq!(branch.kind, PointKind::Smooth);
    let off = classify_point(&halves(), &omega, &DVector::from_vec(vec![c(0.2, 0.1), c(0.3, 0.4)]), &tol);
    assert!(matches!(off, Err(Error::NotOnLocus(_))));
}

#[test]
fn reducible_structure_reports() {
    let t = |im: f64| PeriodMatrix::diagonal(&[c(0.0, im)]).unwrap();
    for (a, b) in [(1.0, 2.0), (1.0, 1.0), (2.0, 3.0)] {
        let report = verify_reducible_structure(&halves(), &t(a), &t(b), 9).unwrap();
        assert_eq!(report.node_count, 1, "diag({a}i, {b}i)");
        assert_eq!(report.node_order, 2);
        assert!(report.branch_residual <= 1e-6);
        assert!(report.nodes[0].norm() < 1e-9);
    }
    let even = Characteristic::zero(2);
    assert!(matches!(verify_reducible_structure(&even, &t(1.0), &t(2.0), 4), Err(Error::Domain(_))));
}
