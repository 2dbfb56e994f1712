//! Seeded invariant suites behind `--selftest`, one per module.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use corona_lab::blaschke::carleson_diagnostics;
use corona_lab::corona::{
    bezout_exact, bezout_numeric, check_certificate, cluster_scenario, measure_delta, CoronaInstance, GridSpec,
};
use corona_lab::disc::{pseudo_disc_euclidean, pseudo_distance};
use corona_lab::hoffman::{compose_trace, l2_distance_to_identity, schwarz_check};
use corona_lab::ladder::{ladder_construct, LadderConfig};
use corona_lab::measures::{
    align_arcs, fit_simple_density, graded_partition, poisson_integral, pushforward_density, quartiles, AlignCase,
    FitOptions, Piece, SimpleDensity, TargetEntry, TargetFunctional,
};
use corona_lab::{BlaschkeProduct, DiscPoint, DiscSequence, FunctionSpec, MobiusAut, OrthogonalArc};

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub module: &'static str,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

type Suite = Vec<(&'static str, Box<dyn Fn(&mut ChaCha8Rng) -> (bool, String)>)>;

pub fn run(command: &str, seed: u64) -> Report {
    let (module, suite) = match command {
        "corona-solve" | "corona-check" | "delta" | "cluster-scenario" => ("corona", corona_suite()),
        "blaschke-eval" | "interp-check" | "ladder" => ("blaschke", blaschke_suite()),
        "hoffman-trace" | "l2-identity" => ("hoffman", hoffman_suite()),
        _ => ("measures", measures_suite()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks: Vec<Check> = suite
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = f(&mut rng);
            Check { name, passed, detail }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    Report {
        command: command.to_string(),
        module,
        seed,
        passed,
        failed: checks.len() - passed,
        checks,
    }
}

fn point(rng: &mut ChaCha8Rng, rmax: f64) -> DiscPoint {
    DiscPoint::from_polar(rmax * rng.gen::<f64>(), rng.gen_range(-PI..PI)).expect("inside the disc")
}

fn product(rng: &mut ChaCha8Rng) -> BlaschkeProduct {
    let n = rng.gen_range(1..=12);
    BlaschkeProduct::with_rotation((0..n).map(|_| point(rng, 0.98)).collect(), rng.gen_range(-PI..PI))
}

fn circle(n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
}

fn anchor_pair() -> Vec<FunctionSpec> {
    vec![
        FunctionSpec::real_polynomial(&[0.0, 0.0, 1.0]),
        FunctionSpec::real_polynomial(&[-0.5, 1.0]),
    ]
}

fn corona_suite() -> Suite {
    vec![
        (
            "exact anchor residual",
            Box::new(|_| match bezout_exact(&anchor_pair(), &GridSpec::default()) {
                Ok(c) => (c.residual_sup < 1e-12, format!("{:e}", c.residual_sup)),
                Err(e) => (false, e.to_string()),
            }),
        ),
        (
            "numeric solver reaches exact residual",
            Box::new(|_| {
                let inst = CoronaInstance::new(anchor_pair(), GridSpec::default()).expect("valid grid");
                match bezout_numeric(&inst, 8, 1e-8) {
                    Ok(c) => (c.residual_sup < 1e-8, format!("{:e}", c.residual_sup)),
                    Err(e) => (false, e.to_string()),
                }
            }),
        ),
        (
            "random coprime pairs certify on independent grids",
            Box::new(|rng| {
                let mut worst: f64 = 0.0;
                for _ in 0..10 {
                    let a = point(rng, 0.9).z();
                    let b = Complex64::from_polar(rng.gen_range(1.2..3.0), rng.gen_range(-PI..PI));
                    let f = vec![
                        FunctionSpec::polynomial(vec![-a, Complex64::new(1.0, 0.0)]),
                        FunctionSpec::polynomial(vec![-b, Complex64::new(1.0, 0.0)]),
                    ];
                    let Ok(cert) = bezout_exact(&f, &GridSpec::default()) else {
                        return (false, "exact solve failed".into());
                    };
                    let inst = CoronaInstance::new(f, GridSpec::default()).expect("valid grid");
                    worst = worst.max(check_certificate(&inst, &cert, 1e-10, rng.gen()).residual_sup);
                }
                (worst <= 1e-10, format!("worst residual {worst:e}"))
            }),
        ),
        (
            "perturbed certificate is rejected",
            Box::new(|rng| {
                let f = anchor_pair();
                let mut cert = bezout_exact(&f, &GridSpec::default()).expect("solvable");
                cert.solutions[0] = FunctionSpec::real_polynomial(&[4.01]);
                let inst = CoronaInstance::new(f, GridSpec::default()).expect("valid grid");
                let rep = check_certificate(&inst, &cert, 1e-12, rng.gen());
                (!rep.passed && (rep.residual_sup - 0.01).abs() < 1e-9, format!("{:e}", rep.residual_sup))
            }),
        ),
        (
            "grid refinement never raises delta",
            Box::new(|rng| {
                let f: Vec<FunctionSpec> = (0..2)
                    .map(|_| FunctionSpec::real_polynomial(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]))
                    .collect();
                let g = GridSpec::new(8, 8, 8, 0.5).expect("valid grid");
                let coarse = measure_delta(&f, &g).map(|d| d.delta).unwrap_or(f64::NAN);
                let fine = measure_delta(&f, &g.refine()).map(|d| d.delta).unwrap_or(f64::NAN);
                (fine <= coarse, format!("{coarse} -> {fine}"))
            }),
        ),
        (
            "cluster limits of identity, B, B²",
            Box::new(|_| {
                let seq = DiscSequence::new((1..=40).map(|j| DiscPoint::real(1.0 - 0.5f64.powi(j))).collect());
                let b = seq.blaschke_product();
                let f = [
                    FunctionSpec::identity(),
                    FunctionSpec::FiniteBlaschke(b.clone()),
                    FunctionSpec::FiniteBlaschke(b.multiply(&b)),
                ];
                match cluster_scenario(&f, &seq, 1e-6) {
                    Ok(r) => {
                        let ok = (r.limit[0] - 1.0).norm() < 1e-6 && r.limit[1].norm() < 1e-6 && r.all_hit;
                        (ok, format!("{} tail indices", r.tail.len()))
                    }
                    Err(e) => (false, e.to_string()),
                }
            }),
        ),
    ]
}

fn blaschke_suite() -> Suite {
    vec![
        (
            "boundary unimodularity",
            Box::new(|rng| {
                let mut worst: f64 = 0.0;
                for _ in 0..20 {
                    let b = product(rng);
                    for z in circle(500) {
                        worst = worst.max((b.evaluate(z).map(|v| v.norm()).unwrap_or(f64::NAN) - 1.0).abs());
                    }
                }
                (worst < 1e-10, format!("{worst:e}"))
            }),
        ),
        (
            "modulus lower bound is sound",
            Box::new(|rng| {
                let mut margin = f64::INFINITY;
                for _ in 0..20 {
                    let b = product(rng);
                    let eta = rng.gen_range(0.1..0.9);
                    let bound = b.modulus_lower_bound(eta).unwrap_or(f64::NAN);
                    for i in 0..=10 {
                        for z in circle(64) {
                            let v = b.evaluate(z * (eta * i as f64 / 10.0)).map(|v| v.norm()).unwrap_or(f64::NAN);
                            margin = margin.min(v - bound);
                        }
                    }
                }
                (margin >= 0.0, format!("smallest margin {margin:e}"))
            }),
        ),
        (
            "composition with automorphisms is exact",
            Box::new(|rng| {
                let mut worst: f64 = 0.0;
                for _ in 0..20 {
                    let b = product(rng);
                    let c = point(rng, 0.9);
                    let Ok(comp) = b.compose_with_mobius(c) else {
                        return (false, "composition failed".into());
                    };
                    let m = MobiusAut::new(c);
                    for z in circle(50) {
                        let z = z * 0.7;
                        let direct = m.apply(z).and_then(|w| b.evaluate(w));
                        let via = comp.product.evaluate(z);
                        if let (Ok(a), Ok(v)) = (direct, via) {
                            worst = worst.max((a - v).norm());
                        } else {
                            return (false, "evaluation failed".into());
                        }
                    }
                }
                (worst < 1e-10, format!("{worst:e}"))
            }),
        ),
        (
            "pseudo-disc circles have constant distance",
            Box::new(|rng| {
                let mut worst: f64 = 0.0;
                for _ in 0..20 {
                    let c = point(rng, 0.95);
                    let eta = rng.gen_range(0.05..0.95);
                    let Ok((center, radius)) = pseudo_disc_euclidean(c, eta) else {
                        return (false, "formula failed".into());
                    };
                    for z in circle(32) {
                        let p = DiscPoint::from_complex(center.z() + z * radius).expect("inside the disc");
                        worst = worst.max((pseudo_distance(p, c) - eta).abs());
                    }
                }
                (worst < 1e-10, format!("{worst:e}"))
            }),
        ),
        (
            "carleson constant matches brute force",
            Box::new(|rng| {
                let pts: Vec<DiscPoint> = (0..8).map(|_| point(rng, 0.99)).collect();
                let d = carleson_diagnostics(&pts);
                let brute = (0..pts.len())
                    .map(|j| {
                        (0..pts.len())
                            .filter(|&k| k != j)
                            .map(|k| pseudo_distance(pts[k], pts[j]))
                            .product::<f64>()
                    })
                    .fold(1.0, f64::min);
                (d.constant == brute, format!("{}", d.constant))
            }),
        ),
        (
            "geometric ladder passes every rung",
            Box::new(|_| {
                let zeros: Vec<DiscPoint> = (1..=30).map(|k| DiscPoint::real(1.0 - 0.5f64.powi(k))).collect();
                let cands = DiscSequence::new((1..=30).map(|n| DiscPoint::real(1.0 - 3f64.powi(-n))).collect());
                let cfg = LadderConfig::new(
                    0.5,
                    (1..=3).map(|j| 0.5f64.powi(j)).collect(),
                    (1..=3).map(|j| 1.0 - 0.5f64.powi(j)).collect(),
                );
                match ladder_construct(&zeros, &cands, &cfg) {
                    Ok(l) => (l.all_passed(), format!("rungs at {:?}", l.indices)),
                    Err(e) => (false, e.to_string()),
                }
            }),
        ),
    ]
}

fn hoffman_suite() -> Suite {
    vec![
        (
            "identity has zero L2 distance",
            Box::new(|_| match l2_distance_to_identity(&BlaschkeProduct::identity(), DiscPoint::ORIGIN, 256) {
                Ok(r) => (r.distance < 1e-14, format!("{:e}", r.distance)),
                Err(e) => (false, e.to_string()),
            }),
        ),
        (
            "FFT coefficients match direct values",
            Box::new(|rng| {
                let b = BlaschkeProduct::new((0..4).map(|_| point(rng, 0.7)).collect());
                let c = point(rng, 0.3);
                match l2_distance_to_identity(&b, c, 2048) {
                    Ok(r) => {
                        let gap = (r.coeffs[0] - r.a0_direct).norm().max((r.coeffs[1] - r.a1_direct).norm());
                        (gap < 1e-8 && r.parseval_ok, format!("gap {gap:e}, parseval {}", r.parseval))
                    }
                    Err(e) => (false, e.to_string()),
                }
            }),
        ),
        (
            "single zero has unit derivative invariant",
            Box::new(|rng| {
                let c = point(rng, 0.99);
                match schwarz_check(&DiscSequence::new(vec![c]), &BlaschkeProduct::new(vec![c])) {
                    Ok(v) => ((v[0].derivative_invariant - 1.0).abs() < 1e-12, format!("{}", v[0].derivative_invariant)),
                    Err(e) => (false, e.to_string()),
                }
            }),
        ),
        (
            "constant functions give flat traces",
            Box::new(|rng| {
                let k = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let seq = DiscSequence::new((1..=10).map(|j| DiscPoint::real(1.0 - 0.5f64.powi(j))).collect());
                match compose_trace(&FunctionSpec::constant(k), &seq, 0.5, 4, 1e-6) {
                    Ok(t) => (t.cauchy_profile.iter().all(|&d| d == 0.0), format!("{} rows", t.samples.len())),
                    Err(e) => (false, e.to_string()),
                }
            }),
        ),
    ]
}

fn random_density(rng: &mut ChaCha8Rng) -> SimpleDensity {
    let mut cuts: Vec<f64> = (0..6).map(|_| rng.gen_range(-PI..PI)).collect();
    cuts.sort_by(f64::total_cmp);
    let pieces = cuts
        .chunks(2)
        .filter(|w| w[1] > w[0])
        .map(|w| Piece {
            a: w[0],
            b: w[1],
            coeff: rng.gen_range(0.1..3.0),
        })
        .collect();
    SimpleDensity::normalized(pieces).expect("positive mass")
}

fn measures_suite() -> Suite {
    vec![
        (
            "Poisson integral reproduces polynomials",
            Box::new(|rng| {
                let f = FunctionSpec::polynomial((0..4).map(|_| Complex64::new(rng.gen(), rng.gen())).collect());
                let z = point(rng, 0.9);
                match poisson_integral(&f, z, 4096, 1e-9) {
                    Ok(p) => {
                        let gap = (p.value - f.eval(z.z())).norm();
                        (gap < 1e-10, format!("{gap:e}"))
                    }
                    Err(e) => (false, e.to_string()),
                }
            }),
        ),
        (
            "quartiles split the mass",
            Box::new(|rng| {
                let mut worst: f64 = 0.0;
                for _ in 0..20 {
                    let s = random_density(rng);
                    let q = quartiles(&s);
                    worst = worst.max((s.cdf(q.alpha) - 0.25).abs()).max((s.mass_on(q.beta, PI) - 0.25).abs());
                }
                (worst < 1e-10, format!("{worst:e}"))
            }),
        ),
        (
            "symmetric densities have antisymmetric quartiles",
            Box::new(|rng| {
                let w = rng.gen_range(0.1..1.0);
                let s = SimpleDensity::normalized(vec![
                    Piece { a: -2.0 * w, b: -w, coeff: 1.0 },
                    Piece { a: -w, b: w, coeff: 2.0 },
                    Piece { a: w, b: 2.0 * w, coeff: 1.0 },
                ])
                .expect("positive mass");
                let q = quartiles(&s);
                (q.beta == -q.alpha, format!("alpha {} beta {}", q.alpha, q.beta))
            }),
        ),
        (
            "pushforward preserves integrals",
            Box::new(|rng| {
                let s = random_density(rng);
                let c = point(rng, 0.8);
                let u = pushforward_density(&s, c);
                let f = FunctionSpec::real_polynomial(&[0.2, -0.4, 0.9]);
                match u.integrate_composed(&f, 4096) {
                    Ok(lhs) => {
                        let gap = (lhs - s.integrate(&f, 4096)).norm();
                        let mass = (u.mass(4096) - 1.0).abs();
                        (gap < 1e-8 && mass < 1e-10, format!("gap {gap:e}, mass error {mass:e}"))
                    }
                    Err(e) => (false, e.to_string()),
                }
            }),
        ),
        (
            "density fit matches Poisson values",
            Box::new(|rng| {
                let z = point(rng, 0.9);
                let entries = [FunctionSpec::identity(), FunctionSpec::real_polynomial(&[0.0, 0.0, 1.0])]
                    .into_iter()
                    .map(|f| {
                        let value = f.eval(z.z());
                        TargetEntry { f, value }
                    })
                    .collect();
                let cells = graded_partition(PI, 16, 0.8).expect("valid partition");
                match fit_simple_density(&TargetFunctional::new(entries), &cells, 1e-3, &FitOptions::default()) {
                    Ok(fit) => {
                        let worst = fit.residuals.iter().copied().fold(0.0, f64::max);
                        (worst < 1e-3, format!("{worst:e}"))
                    }
                    Err(e) => (false, e.to_string()),
                }
            }),
        ),
        (
            "aligned arcs pass through the target midpoint",
            Box::new(|_| {
                let s = SimpleDensity::uniform(-0.4, 0.4).expect("valid density");
                let Ok(target) = OrthogonalArc::new(-0.1, 0.15) else {
                    return (false, "bad arc".into());
                };
                match align_arcs(&s, &target, AlignCase::A) {
                    Ok(a) => {
                        let q = quartiles(&a);
                        let miss = OrthogonalArc::new(q.alpha, q.beta)
                            .map(|arc| arc.distance_to(target.midpoint().z()))
                            .unwrap_or(f64::NAN);
                        (miss < 1e-8, format!("{miss:e}"))
                    }
                    Err(e) => (false, e.to_string()),
                }
            }),
        ),
    ]
}
