//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{gaussian_moment, quat_rel_err, rel_err};
use num_complex::Complex64;
use rand::Rng;
use slice_fock::checks::norm_equivalence_check;
use slice_fock::fock::{slice_norm_p, slice_norm_p_refined};
use slice_fock::kernels::{atomic_synthesis, lattice_points};
use slice_fock::sphere::sphere_with_axes;
use slice_fock::verify::{
    self, corpus, instance_rng, random_in_ball, random_orthogonal_pair, random_quaternion, random_series, random_unit,
    Status, VerifyConfig, VerifyReport,
};
use slice_fock::{
    default_sphere, extend, fock_norm_p, split, star_exp_eval, sup_norm, AtomicData, Error, FockParams, ImaginaryUnit,
    QuadratureGrid, Quaternion, SliceSeries, SupSampling,
};

const SEED: u64 = 0;
/// Generator streams for this suite, disjoint from the ones `verify` uses.
const STREAM_BASE: u64 = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// Running maximum of a residual against its tolerance.
struct Worst {
    label: &'static str,
    tol: f64,
    value: f64,
    count: usize,
}

impl Worst {
    fn new(label: &'static str, tol: f64) -> Self {
        Self { label, tol, value: 0.0, count: 0 }
    }

    fn record(&mut self, v: f64) {
        self.count += 1;
        if v.is_nan() || v > self.value {
            self.value = if v.is_nan() { f64::INFINITY } else { v };
        }
    }

    fn ok(&self) -> bool {
        self.value <= self.tol
    }

    fn summary(&self) -> String {
        format!("{} {:.2e}/{:.0e} (n={})", self.label, self.value, self.tol, self.count)
    }
}

fn combine(parts: &[&Worst], extra: &[(bool, String)]) -> Outcome {
    let pass = parts.iter().all(|w| w.ok()) && extra.iter().all(|e| e.0);
    let mut detail: Vec<String> = parts.iter().map(|w| w.summary()).collect();
    detail.extend(extra.iter().map(|e| e.1.clone()));
    Outcome::new(pass, detail.join("; "))
}

fn grid() -> QuadratureGrid {
    QuadratureGrid::with_defaults(1.0).unwrap()
}

const INSTANCES: usize = 10_000;

fn algebra_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = instance_rng(SEED, STREAM_BASE + 1, 0);
    let mut assoc = Worst::new("assoc", 1e-12);
    let mut modulus = Worst::new("|ab|", 1e-12);
    let mut unit = Worst::new("star-unit", 1e-12);
    let mut pointwise = Worst::new("star-pointwise", 1e-10);
    let mut zero = Worst::new("zero-rule", 1e-10);
    let mut real = Worst::new("sym-real", 1e-12);
    let mut inverse = Worst::new("star-inverse", 1e-10);
    let one = SliceSeries::constant(Quaternion::ONE);
    for _ in 0..INSTANCES {
        let (a, b, c) = (random_quaternion(&mut rng), random_quaternion(&mut rng), random_quaternion(&mut rng));
        assoc.record(((a * b) * c - a * (b * c)).norm());
        modulus.record(((a * b).norm() - a.norm() * b.norm()).abs());

        let f = random_series(&mut rng, 12);
        let g = random_series(&mut rng, 12);
        let q = random_in_ball(&mut rng, 1.0);
        unit.record(f.star_mul(&one).max_coeff_diff(&f).max(one.star_mul(&f).max_coeff_diff(&f)));

        // Points where f nearly vanishes make f(q)^{-1} q f(q) ill-conditioned;
        // the zero rule covers f(q) = 0 itself.
        if f.eval(q).norm() > 1e-6 {
            let lhs = f.star_mul(&g).eval(q);
            let rhs = f.eval(q) * g.eval(f.transform_point(q).unwrap());
            pointwise.record(quat_rel_err(lhs, rhs));
            match f.star_inverse_eval(f.transform_point(q).unwrap()) {
                Ok(inv) => inverse.record((f.eval(q) * inv - Quaternion::ONE).norm()),
                Err(Error::SingularPoint { .. }) => {}
                Err(e) => inverse.record(if matches!(e, Error::ZeroValue { .. }) { 0.0 } else { f64::NAN }),
            }
        }
        let shifted = &f - &SliceSeries::constant(f.eval(q));
        zero.record(shifted.star_mul(&g).eval(q).norm());
        real.record(f.symmetrization().coeffs().iter().map(|c| c.im().norm()).fold(0.0, f64::max));
    }
    let elapsed = start.elapsed();
    combine(
        &[&assoc, &modulus, &unit, &pointwise, &zero, &real, &inverse],
        &[(elapsed < Duration::from_secs(60), format!("{:.1}s/60s", elapsed.as_secs_f64()))],
    )
}

fn splitting_and_representation() -> Outcome {
    let mut round_trip = Worst::new("extend(split)", 1e-14);
    let funcs = corpus(SEED, 200, 12);
    for (k, f) in funcs.iter().enumerate() {
        let mut rng = instance_rng(SEED, STREAM_BASE + 2, k as u64);
        for _ in 0..20 {
            let (i, j) = random_orthogonal_pair(&mut rng);
            let (a, b) = split(f, i, j).unwrap();
            round_trip.record(extend(&a, &b, j).unwrap().max_coeff_diff(f));
        }
    }
    let mut rep = Worst::new("rep_eval", 1e-11);
    let mut rng = instance_rng(SEED, STREAM_BASE + 3, 0);
    for _ in 0..1000 {
        let f = random_series(&mut rng, 12);
        let i = random_unit(&mut rng);
        let q = random_in_ball(&mut rng, 1.0);
        rep.record((f.rep_eval(i, q) - f.eval(q)).norm());
    }
    combine(&[&round_trip, &rep], &[])
}

fn closed_forms() -> Outcome {
    let start = Instant::now();
    let params = FockParams::default();
    let e1 = (-1f64).exp();
    let one = slice_norm_p(&SliceSeries::constant(Quaternion::ONE), ImaginaryUnit::I, &params, &grid()).unwrap();
    let q = SliceSeries::monomial(1, Quaternion::ONE);
    let ident = slice_norm_p(&q, ImaginaryUnit::I, &params, &grid()).unwrap();
    let mut c1 = Worst::new("||1||^2", 1e-8);
    c1.record(rel_err(one * one, (1.0 - e1) / PI));
    let mut c2 = Worst::new("||q||^2", 1e-8);
    c2.record(rel_err(ident * ident, (1.0 - 2.0 * e1) / PI));
    let sup = sup_norm(&q, &params, &SupSampling::default()).unwrap().value;
    let mut c3 = Worst::new("sup q", 1e-9);
    c3.record((sup - (-0.5f64).exp()).abs());
    let elapsed = start.elapsed();
    combine(
        &[&c1, &c2, &c3],
        &[(elapsed < Duration::from_secs(30), format!("{:.2}s", elapsed.as_secs_f64()))],
    )
}

fn sandwiches(report: &VerifyReport, verify_time: Duration) -> Outcome {
    let line = |name: &str| report.results.iter().find(|r| r.name == name).unwrap();
    let (fp, finf) = (line("fock-p-sandwich"), line("fock-inf-sandwich"));
    let mut extra = vec![
        (fp.status == Status::Pass, format!("p=2 ratio {:.4} <= 4", fp.worst)),
        (finf.status == Status::Pass, format!("inf ratio {:.4} <= 2", finf.worst)),
        (
            report.all_pass() && verify_time < Duration::from_secs(300),
            format!("verify all-pass={} in {:.0}s/300s", report.all_pass(), verify_time.as_secs_f64()),
        ),
    ];

    // p = 2 slice norms coincide for every series, so p = 3 is where the
    // sandwich has content.
    let funcs = corpus(SEED, 200, 12);
    let sphere = default_sphere();
    let params3 = FockParams::default().with_p(3.0);
    let mut worst3 = 0.0f64;
    let mut err3 = None;
    for f in &funcs {
        match norm_equivalence_check(f, &params3, &grid(), &sphere) {
            Ok(r) => worst3 = worst3.max(r.max_ratio.max(r.max_pair_ratio)),
            Err(e) => err3 = Some(e.to_string()),
        }
    }
    extra.push((
        err3.is_none() && worst3 <= 8.0 + 1e-9,
        format!("p=3 ratio {:.4} <= 8{}", worst3, err3.map(|e| format!(" ({e})")).unwrap_or_default()),
    ));

    let mut spread = Worst::new("real-coeff slice spread", 1e-9);
    let sampling = SupSampling::default();
    for f in &funcs {
        let real = SliceSeries::new(f.coeffs().iter().map(|c| Quaternion::real(c.w)).collect());
        for p in [2.0, 3.0] {
            let r = fock_norm_p(&real, &FockParams::default().with_p(p), &grid(), &sphere).unwrap();
            let lo = r.per_slice.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
            spread.record(rel_err(lo, r.value));
        }
        let r = sup_norm(&real, &FockParams::default(), &sampling).unwrap();
        let lo = r.per_slice.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
        spread.record(rel_err(lo, r.value));
    }
    combine(&[&spread], &extra)
}

fn quadrature_certification() -> Outcome {
    let mut moments = Worst::new("moments", 1e-12);
    for &alpha in &[0.5, 1.0, 2.0] {
        for &radius in &[0.5, 1.0, 2.0] {
            let g = QuadratureGrid::with_defaults(radius).unwrap();
            // Node values in the order `integrate` visits them.
            let mut nodes = Vec::new();
            let _: f64 = g.integrate(|z| {
                nodes.push(z);
                0.0
            });
            let powers: Vec<Vec<Complex64>> = nodes
                .iter()
                .map(|&z| (0..64).scan(Complex64::new(1.0, 0.0), |acc, _| {
                    let v = *acc;
                    *acc *= z;
                    Some(v)
                }).collect())
                .collect();
            let weight: Vec<f64> = nodes.iter().map(|z| (-alpha * z.norm_sqr()).exp()).collect();
            // 64 Gauss-Legendre nodes are exact to radial degree 127 and 128
            // trapezoid points to angular frequency 127.
            for k in 0..=63usize {
                for l in 0..=(126 - k).min(63) {
                    let mut idx = 0;
                    let got: Complex64 = g.integrate(|_| {
                        let v = powers[idx][k] * powers[idx][l].conj() * weight[idx];
                        idx += 1;
                        v
                    });
                    let scale = gaussian_moment(0.5 * (k + l) as f64, alpha, radius);
                    let err = if k == l {
                        (got - gaussian_moment(k as f64, alpha, radius)).norm() / scale
                    } else {
                        got.norm() / scale
                    };
                    moments.record(err);
                }
            }
        }
    }

    let mut doubling = Worst::new("grid doubling", 1e-8);
    let sphere = sphere_with_axes(16);
    let fine = grid().doubled();
    for f in corpus(SEED, 200, 12) {
        for p in [2.0, 3.0] {
            let params = FockParams::default().with_p(p);
            let a = fock_norm_p(&f, &params, &grid(), &sphere).unwrap();
            let b = fock_norm_p(&f, &params, &fine, &sphere).unwrap();
            doubling.record(rel_err(a.value, b.value));
        }
    }
    combine(&[&moments, &doubling], &[])
}

fn kernels_and_synthesis() -> Outcome {
    let mut collapse = Worst::new("collapse excess", 1e-12);
    let mut rng = instance_rng(SEED, STREAM_BASE + 6, 0);
    for _ in 0..100 {
        let unit = random_unit(&mut rng);
        let alpha = rng.gen_range(0.1..2.0);
        let (z, w) = (disk_point(&mut rng), disk_point(&mut rng));
        let k = star_exp_eval(unit.point(z.re, z.im), unit.point(w.re, w.im), alpha, 40);
        let e = (z * w.conj() * alpha).exp();
        let diff = (k.value - unit.point(e.re, e.im)).norm();
        collapse.record((diff - k.tail_bound).max(0.0));
    }

    let mut parity = Worst::new("odd coeffs", 1e-15);
    for unit in [ImaginaryUnit::I, ImaginaryUnit::J, ImaginaryUnit::K] {
        for alpha in [0.5, 1.0, 2.0] {
            let data = AtomicData::new(
                vec![unit.point(0.5, 0.0), unit.point(-0.5, 0.0)],
                vec![Quaternion::ONE, Quaternion::ONE],
                alpha,
                40,
            )
            .unwrap();
            let f = atomic_synthesis(&data, unit).unwrap();
            for a in f.coeffs().iter().skip(1).step_by(2) {
                parity.record(a.norm());
            }
        }
    }

    let unit = ImaginaryUnit::I;
    let points = lattice_points(0.5, unit, 1.01).unwrap();
    let mut crng = instance_rng(SEED, STREAM_BASE + 7, 0);
    let coeffs = (0..points.len()).map(|_| random_quaternion(&mut crng)).collect();
    let f = atomic_synthesis(&AtomicData::new(points, coeffs, 1.0, 32).unwrap(), unit).unwrap();
    let mut converged = true;
    let mut values = Vec::new();
    for p in [1.5, 2.0, 4.0] {
        let params = FockParams::default().with_p(p);
        for &u in &[ImaginaryUnit::I, ImaginaryUnit::J, ImaginaryUnit::K] {
            match slice_norm_p_refined(&f, u, &params, &grid()) {
                Ok(r) => {
                    let last = r.trace.last().map(|t| t.1).unwrap_or(f64::NAN);
                    converged &= r.value.is_finite() && last <= 1e-8;
                }
                Err(_) => converged = false,
            }
        }
        values.push(fock_norm_p(&f, &params, &grid(), &default_sphere()).map(|r| r.value).unwrap_or(f64::NAN));
    }
    converged &= values.iter().all(|v| v.is_finite());
    combine(
        &[&collapse, &parity],
        &[(converged, format!("lattice synthesis norms {values:.4?} converged={converged}"))],
    )
}

fn disk_point<R: Rng>(rng: &mut R) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() < 1.0 {
            return z;
        }
    }
}

fn derivative_criterion(report: &VerifyReport) -> Outcome {
    let mut fd = Worst::new("central difference", 1e-8);
    let h = 1e-5;
    for (k, f) in corpus(SEED, 200, 12).iter().enumerate() {
        let mut rng = instance_rng(SEED, STREAM_BASE + 8, k as u64);
        let df = f.derivative(1);
        for _ in 0..5 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let diff = (f.eval(Quaternion::real(x + h)) - f.eval(Quaternion::real(x - h))) / (2.0 * h);
            let exact = df.eval(Quaternion::real(x));
            if f.degree() == 0 {
                fd.record(diff.norm());
            } else {
                fd.record(quat_rel_err(diff, exact));
            }
        }
    }
    let line = |name: &str| report.results.iter().find(|r| r.name == name).unwrap();
    let (d, dil) = (line("derivative-criterion"), line("dilation"));
    combine(
        &[&fd],
        &[
            (
                d.status == Status::Pass && d.instances == 150,
                format!("split-sum excess {:.2e} over {} (f, t)", d.worst, d.instances),
            ),
            (dil.status == Status::Pass, format!("dilation ratio {:.4} < 1 over {}", dil.worst, dil.instances)),
        ],
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let config = VerifyConfig::new(SEED);
    let props = verify::select(None).unwrap();
    let verify_report = verify::run(&config, &props);
    let verify_time = start.elapsed();

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("algebra suite", Box::new(algebra_suite)),
        ("splitting / representation", Box::new(splitting_and_representation)),
        ("closed-form norms", Box::new(closed_forms)),
        ("norm sandwiches", Box::new(|| sandwiches(&verify_report, verify_time))),
        ("quadrature", Box::new(quadrature_certification)),
        ("kernels / synthesis", Box::new(kernels_and_synthesis)),
        ("derivative / dilation", Box::new(|| derivative_criterion(&verify_report))),
    ];

    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {} {:<28} {}  [{:.1}s] {}",
            k + 1,
            title,
            if outcome.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    print!("{verify_report}");
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
