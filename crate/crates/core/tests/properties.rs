use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use corona_lab::blaschke::carleson_diagnostics;
use corona_lab::corona::{bezout_exact, check_certificate, cluster_scenario, measure_delta, GridSpec};
use corona_lab::disc::{orthogonal_arc_midpoint, pseudo_distance};
use corona_lab::measures::{poisson_integral, pushforward_density, quartiles, Piece, SimpleDensity};
use corona_lab::{BlaschkeProduct, DiscPoint, DiscSequence, FunctionSpec, MobiusAut};

fn point(rmax: f64) -> impl Strategy<Value = DiscPoint> {
    (0.0..rmax, -PI..PI).prop_map(|(r, t)| DiscPoint::from_polar(r, t).unwrap())
}

fn product() -> impl Strategy<Value = BlaschkeProduct> {
    (prop::collection::vec(point(0.98), 1..12), -PI..PI)
        .prop_map(|(zeros, rot)| BlaschkeProduct::with_rotation(zeros, rot))
}

fn density() -> impl Strategy<Value = SimpleDensity> {
    prop::collection::vec((-PI..PI, 0.1f64..3.0), 2..10).prop_filter_map("degenerate", |raw| {
        let mut cuts: Vec<f64> = raw.iter().map(|p| p.0).collect();
        cuts.sort_by(f64::total_cmp);
        let pieces: Vec<Piece> = cuts
            .windows(2)
            .zip(&raw)
            .step_by(2)
            .filter(|(w, _)| w[1] - w[0] > 1e-6)
            .map(|(w, p)| Piece { a: w[0], b: w[1], coeff: p.1 })
            .collect();
        SimpleDensity::normalized(pieces).ok()
    })
}

fn plane_point(rmax: f64) -> impl Strategy<Value = Complex64> {
    (0.0..rmax, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn circle_grid(n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pseudo_distance_is_a_metric(a in point(0.99), b in point(0.99), c in point(0.99)) {
        let (ab, bc, ac) = (pseudo_distance(a, b), pseudo_distance(b, c), pseudo_distance(a, c));
        prop_assert!((0.0..1.0).contains(&ab));
        prop_assert!((ab - pseudo_distance(b, a)).abs() < 1e-12);
        prop_assert_eq!(pseudo_distance(a, a), 0.0);
        // the strong triangle inequality of the pseudo-hyperbolic metric
        prop_assert!(ac <= (ab + bc) / (1.0 + ab * bc) + 1e-12);
    }

    #[test]
    fn mobius_maps_are_isometries(c in point(0.95), z in point(0.95), w in point(0.95), rot in -PI..PI) {
        let m = MobiusAut::with_rotation(c, rot);
        let (mz, mw) = (m.apply_disc(z).unwrap(), m.apply_disc(w).unwrap());
        prop_assert!((pseudo_distance(mz, mw) - pseudo_distance(z, w)).abs() < 1e-9);
        let back = m.inverse_apply(m.apply(z.z()).unwrap()).unwrap();
        prop_assert!((back - z.z()).norm() < 1e-12);
        prop_assert!((m.apply(Complex64::new(0.0, 0.0)).unwrap() - Complex64::from_polar(1.0, rot) * c.z()).norm() < 1e-15);
    }

    #[test]
    fn blaschke_products_are_unimodular(b in product()) {
        for z in circle_grid(200) {
            prop_assert!((b.evaluate(z).unwrap().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn modulus_bound_is_sound(b in product(), eta in 0.05f64..0.9) {
        let bound = b.modulus_lower_bound(eta).unwrap();
        for i in 0..=20 {
            for z in circle_grid(96) {
                let v = b.evaluate(z * (eta * i as f64 / 20.0)).unwrap().norm();
                prop_assert!(v >= bound, "{} < {}", v, bound);
            }
        }
    }

    #[test]
    fn composition_is_exact(b in product(), c in point(0.9)) {
        let composed = b.compose_with_mobius(c).unwrap().product;
        let m = MobiusAut::new(c);
        for i in 1..=5 {
            for z in circle_grid(40) {
                let z = z * (i as f64 / 5.0);
                prop_assert!((b.evaluate(m.apply(z).unwrap()).unwrap() - composed.evaluate(z).unwrap()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn carleson_constant_matches_brute_force(pts in prop::collection::vec(point(0.99), 2..10)) {
        let d = carleson_diagnostics(&pts);
        let mut brute = 1.0f64;
        for (j, zj) in pts.iter().enumerate() {
            let mut p = 1.0;
            for (k, zk) in pts.iter().enumerate() {
                if j != k {
                    p *= pseudo_distance(*zk, *zj);
                }
            }
            prop_assert_eq!(d.tail[j], p);
            brute = brute.min(p);
        }
        prop_assert_eq!(d.constant, brute);
    }

    #[test]
    fn arc_midpoint_lies_on_the_orthogonal_circle(alpha in -PI..PI, span in 1e-3..(PI - 1e-3)) {
        let m = orthogonal_arc_midpoint(alpha, alpha + span).unwrap();
        let phi = alpha + span / 2.0;
        let gamma = span / 2.0;
        let center = Complex64::from_polar(1.0 / gamma.cos(), phi);
        prop_assert!(((m.z() - center).norm() - gamma.tan()).abs() < 1e-9 * (1.0 + gamma.tan()));
    }

    #[test]
    fn jensen_inequality(roots in prop::collection::vec(plane_point(3.0), 1..6), z in point(0.9)) {
        let f = roots.iter().fold(vec![Complex64::new(1.0, 0.0)], |acc, r| {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i] -= a * r;
                next[i + 1] += a;
            }
            next
        });
        prop_assume!(roots.iter().all(|r| (r.norm() - 1.0).abs() > 0.05));
        let f = FunctionSpec::polynomial(f);
        let logf = |t: f64| Complex64::new(f.eval(Complex64::from_polar(1.0, t)).norm().ln(), 0.0);
        let mean = corona_lab::measures::poisson_integral_with(logf, z, 8192, 1e-7).unwrap().value.re;
        prop_assert!(f.eval(z.z()).norm().ln() <= mean + 1e-8);
    }

    #[test]
    fn poisson_reproduces_polynomials(c in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6), z in point(0.9)) {
        let f = FunctionSpec::polynomial(c.iter().map(|&(a, b)| Complex64::new(a, b)).collect());
        let p = poisson_integral(&f, z, 4096, 1e-9).unwrap();
        prop_assert!((p.value - f.eval(z.z())).norm() < 1e-10);
    }

    #[test]
    fn pushforward_preserves_mass_and_integrals(s in density(), c in point(0.8)) {
        let u = pushforward_density(&s, c);
        prop_assert!((u.mass(4096) - 1.0).abs() < 1e-10);
        let f = FunctionSpec::real_polynomial(&[0.3, -0.7, 0.2]);
        prop_assert!((u.integrate_composed(&f, 4096).unwrap() - s.integrate(&f, 4096)).norm() < 1e-8);
    }

    #[test]
    fn quartiles_split_mass(s in density()) {
        let q = quartiles(&s);
        prop_assert!(q.alpha <= q.beta);
        prop_assert!((s.cdf(q.alpha) - 0.25).abs() < 1e-10);
        prop_assert!((s.mass_on(q.beta, PI) - 0.25).abs() < 1e-10);
    }

    #[test]
    fn delta_refinement_is_monotone(a in prop::collection::vec(-1.0f64..1.0, 1..4), b in prop::collection::vec(-1.0f64..1.0, 1..4)) {
        let f = vec![FunctionSpec::real_polynomial(&a), FunctionSpec::real_polynomial(&b)];
        let g = GridSpec::new(8, 8, 8, 0.5).unwrap();
        let coarse = measure_delta(&f, &g).unwrap().delta;
        prop_assert!(measure_delta(&f, &g.refine()).unwrap().delta <= coarse);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn passing_certificates_are_sound(r1 in point(0.9), r2 in (1.2f64..3.0, -PI..PI), seed in any::<u64>()) {
        // (z - r1) and (z - r2) share no zero, so the pair is solvable exactly
        let r2 = Complex64::from_polar(r2.0, r2.1);
        let f = vec![
            FunctionSpec::polynomial(vec![-r1.z(), Complex64::new(1.0, 0.0)]),
            FunctionSpec::polynomial(vec![-r2, Complex64::new(1.0, 0.0)]),
        ];
        let cert = bezout_exact(&f, &GridSpec::default()).unwrap();
        let inst = corona_lab::corona::CoronaInstance::new(f, GridSpec::default()).unwrap();
        let rep = check_certificate(&inst, &cert, 1e-10, seed);
        prop_assert!(rep.passed);
        prop_assert!(rep.residual_sup <= 1e-10);
    }

    #[test]
    fn cluster_limits_survive_re_extraction(q in 0.3f64..0.7, eps in 1e-5f64..1e-2) {
        let n = (1e-14f64.ln() / q.ln()) as i32;
        let pts: Vec<DiscPoint> = (1..=n).map(|j| DiscPoint::real(1.0 - q.powi(j))).collect();
        let seq = DiscSequence::new(pts.clone());
        let f = [FunctionSpec::identity(), FunctionSpec::real_polynomial(&[0.0, 0.0, 0.5])];
        let first = cluster_scenario(&f, &seq, eps).unwrap();
        let sub = DiscSequence::new(first.indices.iter().map(|&j| pts[j]).collect());
        let again = cluster_scenario(&f, &sub, eps).unwrap();
        for (a, b) in first.limit.iter().zip(&again.limit) {
            prop_assert!((a - b).norm() < eps);
        }
    }
}
