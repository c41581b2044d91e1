use super::charts::*;
use super::curvature::curvature_at;
use super::linalg::*;
use super::*;

fn max_abs(m: &Mat4<f64>) -> f64 {
    m.iter().flatten().fold(0.0, |a, &x| a.max(x.abs()))
}

fn max_abs3(m: &Mat3<f64>) -> f64 {
    m.iter().flatten().fold(0.0, |a, &x| a.max(x.abs()))
}

fn pts(seed: u64, n: usize, lo: f64, hi: f64) -> Vec<Point<f64>> {
    sample_points(seed, n, lo, hi)
}

#[test]
fn euclidean_is_flat() {
    let c = curvature_at(&euclidean::<f64>(), &[0.3, 0.1, -0.2, 0.5]).unwrap();
    assert_eq!(c.scalar, 0.0);
    assert_eq!(max_abs(&c.ricci), 0.0);
    assert_eq!(max_abs3(&c.weyl_plus), 0.0);
}

#[test]
fn round_sphere_closed_forms() {
    let m = round_s4::<f64>();
    for p in pts(1, 5, 0.0, 1.5) {
        let c = curvature_at(&m, &p).unwrap();
        assert!((c.scalar - 12.0).abs() < 1e-6, "s = {}", c.scalar);
        let r = sub(&c.ricci, &scale(&c.metric, 3.0));
        assert!(max_abs(&r) < 1e-6);
        assert!(max_abs3(&c.weyl_plus) < 1e-6 && max_abs3(&c.weyl_minus) < 1e-6);
        let e = add(&c.einstein_tensor, &scale(&c.metric, 3.0));
        assert!(max_abs(&e) < 1e-6);
        // sectional curvature one in every frame plane
        let f = curvature::to_frame(&c.riemann, &c.frame);
        assert!((f[0][1][0][1] - 1.0).abs() < 1e-6 && (f[1][3][1][3] - 1.0).abs() < 1e-6);
    }
}

#[test]
fn fubini_study_spectrum() {
    let m = fubini_study::<f64>();
    for p in pts(2, 5, 0.0, 2.0) {
        let c = curvature_at(&m, &p).unwrap();
        assert!((c.scalar - 24.0).abs() < 1e-6, "s = {}", c.scalar);
        let ev = c.weyl_plus_eigen().0;
        assert!((ev[0] + 2.0).abs() < 1e-6 && (ev[1] + 2.0).abs() < 1e-6 && (ev[2] - 4.0).abs() < 1e-6, "{ev:?}");
        assert!(max_abs3(&c.weyl_minus) < 1e-6);
        let tr = c.weyl_plus[0][0] + c.weyl_plus[1][1] + c.weyl_plus[2][2];
        assert!(tr.abs() < 1e-8);
    }
}

#[test]
fn eguchi_hanson_anti_self_dual_ricci_flat() {
    let m = eguchi_hanson(1.0f64);
    for p in pts(3, 5, 0.6, 3.0) {
        let c = curvature_at(&m, &p).unwrap();
        let scale_ = c.riemann_norm();
        assert!(scale_ > 1e-3);
        assert!(max_abs(&c.ricci_frame()) < 1e-6 * scale_.max(1.0));
        assert!(max_abs3(&c.weyl_plus) < 1e-6 * scale_.max(1.0));
        assert!(max_abs3(&c.weyl_minus) > 1e-3 * scale_);
    }
}

#[test]
fn product_of_spheres_kahler_spectrum() {
    let m = s2xs2::<f64>();
    for p in pts(4, 4, 0.0, 1.5) {
        let c = curvature_at(&m, &p).unwrap();
        assert!((c.scalar - 4.0).abs() < 1e-6);
        let ev = c.weyl_plus_eigen().0;
        let s = c.scalar;
        assert!((ev[0] + s / 12.0).abs() < 1e-6 && (ev[1] + s / 12.0).abs() < 1e-6 && (ev[2] - s / 6.0).abs() < 1e-6);
    }
}

#[test]
fn orientation_flip_swaps_blocks_exactly() {
    let m = PolynomialPerturbation::<f64>::random(7, 0.05).chart("p");
    let p = [0.1, -0.05, 0.2, 0.12];
    let c = curvature_at(&m, &p).unwrap();
    let f = curvature_at(&m.clone().with_orientation(-1), &p).unwrap();
    assert_eq!(c.weyl_plus, f.weyl_minus);
    assert_eq!(c.weyl_minus, f.weyl_plus);
}

#[test]
fn scaling_rescales_spectrum() {
    let m = fubini_study::<f64>();
    let p = [0.3, 0.2, -0.4, 0.1];
    let ev = curvature_at(&m, &p).unwrap().weyl_plus_eigen().0;
    let ev2 = curvature_at(&m.scaled(2.5), &p).unwrap().weyl_plus_eigen().0;
    for i in 0..3 {
        assert!((ev2[i] - ev[i] / 2.5).abs() < 1e-6);
    }
}

#[test]
fn einstein_tensor_two_forms_agree() {
    let m = PolynomialPerturbation::<f64>::random(9, 0.05).chart("p");
    let c = curvature_at(&m, &[0.1, 0.2, 0.0, -0.1]).unwrap();
    let alt = sub(&c.traceless_ricci, &scale(&c.metric, c.scalar / 4.0));
    assert!(max_abs(&sub(&alt, &c.einstein_tensor)) < 1e-12);
    let tr = c.weyl_plus[0][0] + c.weyl_plus[1][1] + c.weyl_plus[2][2];
    assert!(tr.abs() < 1e-8);
}

#[test]
fn single_precision_metric_evaluation() {
    let m = fubini_study::<f32>();
    let c = curvature_at(&m, &[0.2, 0.1, 0.0, 0.3]).unwrap();
    assert!((c.scalar - 24.0).abs() < 0.5, "s = {}", c.scalar);
}

mod operator_tests {
    use std::sync::Arc;

    use super::*;
    use crate::geomkit::operators::*;

    fn rel_close(a: &Mat4<f64>, b: &Mat4<f64>, tol: f64) -> bool {
        (0..4).all(|i| (0..4).all(|j| (a[i][j] - b[i][j]).abs() <= tol * a[i][j].abs().max(1.0)))
    }

    fn generic_h() -> TensorField<f64> {
        Arc::new(|p: &Point<f64>| {
            let mut h = zero4();
            for i in 0..4 {
                for j in 0..4 {
                    h[i][j] = 0.1 * ((i + 2 * j + 1) as f64 * p[(i + j) % 4]).sin() + if i == j { 0.05 } else { 0.02 };
                }
            }
            symmetrize(&h)
        })
    }

    #[test]
    fn gauged_operator_vanishes_on_einstein_backgrounds() {
        let e = gauged_operator(&OperatorContext::at_background(euclidean::<f64>(), 0.0), &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(max_abs(&e.total), 0.0);
        let s = gauged_operator(&OperatorContext::at_background(round_s4::<f64>(), 3.0), &[0.3, -0.1, 0.2, 0.4]).unwrap();
        assert!(max_abs(&s.total) < 1e-6);
        let f = gauged_operator(&OperatorContext::at_background(fubini_study::<f64>(), 6.0), &[0.3, -0.1, 0.2, 0.4]).unwrap();
        assert!(max_abs(&f.total) < 1e-6);
    }

    #[test]
    fn gauge_term_isolated_on_pulled_back_flat_metric() {
        // g = φ*δ with φ = id + εX exactly flat, so ℱ_δ(g) is the gauge term alone
        let eps = 0.05;
        let jac = move |p: &Point<f64>| -> Mat4<f64> {
            let mut j = identity4();
            j[0][1] += eps * p[2];
            j[0][2] += eps * p[1];
            j[1][3] += eps * 2.0 * p[3];
            j[2][0] += eps * p[0].cos();
            j
        };
        let pulled = ChartMetric::new("pullback", Domain::All, Arc::new(move |p| matmul(&transpose(&jac(p)), &jac(p))));
        let ctx = OperatorContext { background: euclidean(), metric: pulled, lambda: 0.0, fd: FdScheme::default() };
        let out = gauged_operator(&ctx, &[0.2, -0.3, 0.1, 0.25]).unwrap();
        assert!(max_abs(&out.einstein) < 1e-6);
        assert!(max_abs(&out.gauge) > 1e-3);
        assert!(rel_close(&out.total, &out.gauge, 1e-5));
    }

    #[test]
    fn two_path_linearization() {
        let h = generic_h();
        let cases: Vec<(ChartMetric<f64>, f64, Point<f64>)> = vec![
            (euclidean(), 0.0, [0.1, 0.2, -0.3, 0.05]),
            (round_s4(), 3.0, [0.3, -0.2, 0.1, 0.4]),
            (fubini_study(), 6.0, [0.2, 0.1, -0.3, 0.2]),
            (s2xs2(), 1.0, [0.3, 0.2, -0.1, 0.4]),
            (eguchi_hanson(1.0), 0.0, [0.7, 0.3, -0.5, 0.2]),
            (PolynomialPerturbation::random(5, 0.05).chart("p"), 0.0, [0.1, -0.1, 0.2, 0.05]),
        ];
        for (m, lambda, p) in cases {
            let ctx = OperatorContext::at_background(m, lambda);
            let a = linearized_operator(&ctx, &h, &p).unwrap();
            let b = linearized_fd(&ctx, &h, &p).unwrap();
            assert!(rel_close(&a, &b, 1e-3), "{}: {a:?} vs {b:?}", ctx.background.name);
        }
        let ctx = OperatorContext::at_background(round_s4::<f64>(), 3.0);
        let g0 = ctx.background.components.clone();
        let h: TensorField<f64> = Arc::new(move |p| g0(p));
        let p = [0.2, 0.1, 0.0, -0.3];
        assert!(rel_close(&linearized_operator(&ctx, &h, &p).unwrap(), &linearized_fd(&ctx, &h, &p).unwrap(), 1e-3));
    }

    #[test]
    fn flat_kernel() {
        let ctx = OperatorContext::at_background(euclidean::<f64>(), 0.0);
        let mut c = zero4();
        c[0][1] = 1.0;
        c[1][0] = 1.0;
        c[2][2] = 0.5;
        c[3][3] = -0.5;
        let constant: TensorField<f64> = Arc::new(move |_| c);
        let harmonic: TensorField<f64> = Arc::new(|p| {
            let mut h = zero4();
            h[0][0] = p[2] * p[3];
            h[1][1] = -p[2] * p[3];
            h
        });
        for p in [[0.1, 0.2, 0.3, 0.4], [-0.5, 0.2, 0.7, -0.1]] {
            assert!(max_abs(&linearized_operator(&ctx, &constant, &p).unwrap()) < 1e-9);
            assert!(max_abs(&linearized_operator(&ctx, &harmonic, &p).unwrap()) < 1e-6);
            assert!(max_abs(&lichnerowicz_half(&ctx, &harmonic, &p).unwrap()) < 1e-6);
        }
    }

    #[test]
    fn einstein_tt_reduces_to_half_lichnerowicz() {
        let s4 = OperatorContext::at_background(round_s4::<f64>(), 3.0);
        let tt: TensorField<f64> = Arc::new(|p| {
            let u: f64 = p.iter().map(|x| x * x).sum();
            let phi_inv2 = (1.0 + u / 4.0).powi(2);
            let mut h = zero4();
            h[0][1] = phi_inv2;
            h[1][0] = phi_inv2;
            h[2][2] = phi_inv2;
            h[3][3] = -phi_inv2;
            h
        });
        let p = [0.2, -0.4, 0.3, 0.1];
        let div = operators::divergence(&s4.background, &|q| Ok(tt(q)), None, &p).unwrap();
        assert!(div.iter().all(|x| x.abs() < 1e-8));
        let a = linearized_operator(&s4, &tt, &p).unwrap();
        assert!(rel_close(&a, &lichnerowicz_half(&s4, &tt, &p).unwrap(), 1e-3));

        let prod = OperatorContext::at_background(s2xs2::<f64>(), 1.0);
        let g = prod.background.components.clone();
        let split: TensorField<f64> = Arc::new(move |p| {
            let mut h = g(p);
            h[2][2] = -h[2][2];
            h[3][3] = -h[3][3];
            h
        });
        let p = [0.3, 0.1, -0.2, 0.5];
        let a = linearized_operator(&prod, &split, &p).unwrap();
        assert!(rel_close(&a, &lichnerowicz_half(&prod, &split, &p).unwrap(), 1e-3));
        assert!(rel_close(&a, &linearized_fd(&prod, &split, &p).unwrap(), 1e-3));
    }
}

mod criteria_tests {
    use super::*;

    #[test]
    fn wu_criterion() {
        let s = pts(8, 6, 0.0, 2.0);
        let fs = wu_check(&fubini_study::<f64>(), &s, 1e-9).unwrap();
        assert!(fs.verdict);
        assert!((fs.min_det - 24.0f64.powi(3) / 864.0).abs() < 1e-4);
        assert!(!wu_check(&round_s4::<f64>(), &s, 1e-9).unwrap().verdict);
        assert!(wu_check(&s2xs2::<f64>(), &s, 1e-9).unwrap().verdict);
        assert_eq!(wu_check(&euclidean::<f64>(), &[], 1e-9).unwrap_err(), GeomError::EmptySamples);
        // constant rescaling keeps the verdict
        assert!(wu_check(&fubini_study::<f64>().scaled(3.0), &s, 1e-9).unwrap().verdict);
    }

    #[test]
    fn hermitian_report_cases() {
        let s = pts(9, 4, 0.1, 1.5);
        let fs = fubini_study::<f64>();
        let fs2 = fs.clone();
        let omega = move |p: &Point<f64>| kahler_form(&fs2.metric(p).unwrap());
        let r = hermitian_criteria_report(&fs, &s, Some(&omega), 1e-4).unwrap();
        assert!(r.all_equal_negative_pair && r.all_det_positive && r.all_omega_positive == Some(true));
        for x in &r.samples {
            assert!((x.conformal_factor - 4f64.powf(2.0 / 3.0)).abs() < 1e-4);
        }

        let flat_omega = |_: &Point<f64>| kahler_form(&identity4());
        let e = hermitian_criteria_report(&euclidean::<f64>(), &s, Some(&flat_omega), 1e-4).unwrap();
        assert_eq!(e.all_omega_positive, Some(false));

        let eh = hermitian_criteria_report(&eguchi_hanson(1.0f64), &pts(9, 4, 0.8, 2.0), None, 1e-4).unwrap();
        assert!(eh.samples.iter().all(|x| !x.equal_negative_pair));

        let mut anti = zero4();
        anti[0][1] = 1.0;
        anti[1][0] = -1.0;
        anti[2][3] = -1.0;
        anti[3][2] = 1.0;
        let anti_omega = move |_: &Point<f64>| anti;
        assert!(matches!(
            hermitian_criteria_report(&euclidean::<f64>(), &s, Some(&anti_omega), 1e-4),
            Err(GeomError::NotSelfDual(_))
        ));
    }

    #[test]
    fn scan_rows() {
        let s = pts(14, 5, -1.0, 1.0);
        let rows = curvature_scan(&fubini_study::<f64>(), &s, None).unwrap();
        for r in &rows {
            assert!((r.scalar - 24.0).abs() < 1e-6);
            assert!((r.weyl_plus[0] - r.weyl_plus[1]).abs() < 1e-6 && r.weyl_plus[0] < 0.0);
            assert!(r.einstein_defect < 1e-6);
        }
        let fixed = curvature_scan(&fubini_study::<f64>(), &s, Some(0.0)).unwrap();
        // 𝓔 = r − (s/2)g = −6g
        assert!(fixed.iter().all(|r| (r.einstein_defect - 6.0).abs() < 1e-5));
    }

    #[test]
    fn einstein_residuals() {
        let s = pts(10, 5, 0.0, 1.5);
        assert!(einstein_residual(&round_s4::<f64>(), 3.0, &s).unwrap() < 1e-6);
        assert!(einstein_residual(&eguchi_hanson(1.0f64), 0.0, &pts(10, 5, 0.7, 2.0)).unwrap() < 1e-5);
        assert!(einstein_residual(&fubini_study::<f64>(), 3.0, &s).unwrap() > 1.0);
    }

    #[test]
    fn contracted_bianchi_on_non_einstein_metrics() {
        let s = pts(12, 3, 0.0, 0.25);
        for seed in 0..3 {
            let m = PolynomialPerturbation::random(seed, 0.05).chart("p");
            assert!(einstein_residual(&m, 0.0, &s).unwrap() > 1e-3);
            assert!(bianchi_divergence_check(&m, &s).unwrap() < 1e-3);
        }
        let mut sym = identity4();
        sym[0][1] = 0.7;
        sym[1][0] = 0.7;
        sym[2][2] = -0.3;
        let bump = bump_perturbation(0.2f64, sym);
        assert!(bianchi_divergence_check(&bump, &pts(13, 2, 0.1, 0.6)).unwrap() < 1e-3);
        assert!(bianchi_divergence_check(&round_s4::<f64>(), &s).unwrap() < 1e-3);
    }
}
