//! End-to-end acceptance checks. Each test prints a single PASS/FAIL line
//! before asserting, so `cargo test -- --nocapture` gives a compact summary.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_core::bounds::{product_sphere_spectrum, rescale_bound, solve_extremal_s};
use toric_core::calabi::{
    alpha_beta_exact, closed_form_bound, find_critical_a, gram_matrices, normalization,
    ode_residual, quotient_coefficients, rayleigh_ritz, scalar_curvature_check, sweep, z_profile,
    Branch, DEFAULT_A_MAX, DEFAULT_A_MIN,
};
use toric_core::integrate::{
    brion_linear_power, integrate_over_boundary, integrate_polynomial_simplex, moments_up_to,
    monte_carlo_estimate,
};
use toric_core::numerics::rational::{factorial, int, rat, to_f64};
use toric_core::polytope::{AffineFunctional, Simplex};
use toric_core::{
    cpn_simplex, rectangle, theorem1_bound, theorem2_bound, trapezoid, DelzantPolytope, Polynomial,
    Rational,
};

/// Collects named sub-checks and reports them as one line.
struct Criterion {
    name: &'static str,
    failures: Vec<String>,
    checks: usize,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            failures: Vec::new(),
            checks: 0,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("PASS {} ({} checks)", self.name, self.checks);
        } else {
            println!(
                "FAIL {} ({}/{} checks failed)",
                self.name,
                self.failures.len(),
                self.checks
            );
            for f in &self.failures {
                println!("    {f}");
            }
            panic!("{} failed: {:?}", self.name, self.failures);
        }
    }
}

fn x1_power(n: usize, k: u32) -> Polynomial {
    let mut e = vec![0; n];
    e[0] = k;
    Polynomial::monomial(n, e, int(1))
}

/// Rational grid `−99/100 + i·(298/100)/99`, `i = 0..100`.
fn rational_grid() -> Vec<Rational> {
    (0..100)
        .map(|i| rat(-99, 100) + rat(298, 9900) * int(i))
        .collect()
}

#[test]
fn criterion_1_cpn_bound() {
    let mut c = Criterion::new("criterion 1: CP^n bound n+2 and exact moment ratios");
    for n in 1..=5usize {
        let p = cpn_simplex(n).unwrap();
        let r = theorem1_bound(&p).unwrap();
        c.check((r.value - (n + 2) as f64).abs() < 1e-10, || {
            format!("n = {n}: bound {} != {}", r.value, n + 2)
        });
        let nn = n as i64;
        let nf = Rational::from_integer(factorial(n as u32));
        let vol = Rational::from_integer(num_bigint::BigInt::from(nn + 1).pow(n as u32)) / &nf;
        let t = moments_up_to(&p, 2);
        c.check(*t.volume() == vol, || {
            format!("n = {n}: volume {}", t.volume())
        });
        let second = t.interior(&{
            let mut e = vec![0; n];
            e[0] = 2;
            e
        });
        c.check(*second == &vol * rat(nn, nn + 2), || {
            format!("n = {n}: second moment {second}")
        });
        let boundary = integrate_over_boundary(&p, &x1_power(n, 2));
        let expected = Rational::from_integer(
            num_bigint::BigInt::from(nn) * num_bigint::BigInt::from(nn + 1).pow(n as u32 + 1),
        ) / Rational::from_integer(factorial(n as u32 + 1));
        c.check(boundary == expected, || {
            format!("n = {n}: boundary integral {boundary}")
        });
        c.check(&boundary / second == int(nn + 2), || {
            format!("n = {n}: exact ratio")
        });
    }
    c.finish();
}

#[test]
fn criterion_2_extremal_scalar_curvature() {
    let mut c =
        Criterion::new("criterion 2: extremal S on trapezoid(a) equals alpha, beta exactly");
    let values: Vec<Rational> = (1..=20).map(|k| rat(-1, 1) + rat(3 * k, 21)).collect();
    for a in values {
        let s = solve_extremal_s(&trapezoid(&a).unwrap()).unwrap();
        let (alpha, beta) = alpha_beta_exact(&a);
        c.check(s.a0 == beta && s.grad == vec![alpha.clone(), alpha], || {
            format!("a = {a}: solved {s}")
        });
    }
    c.finish();
}

#[test]
fn criterion_3_product_tightness() {
    let mut c =
        Criterion::new("criterion 3: rectangle(a) bound 2/a equals product-sphere lambda_1");
    for a in [int(1), rat(3, 2), int(2), int(3)] {
        let af = to_f64(&a);
        let r = theorem2_bound(&rectangle(&a).unwrap()).unwrap();
        let spectrum = product_sphere_spectrum(af, 4).unwrap();
        let first = spectrum.iter().copied().find(|&v| v > 0.0).unwrap();
        c.check((r.value - 2.0 / af).abs() < 1e-12, || {
            format!("a = {a}: {}", r.value)
        });
        c.check((r.value - first).abs() < 1e-12, || {
            format!("a = {a}: spectrum first nonzero {first}")
        });
    }
    c.finish();
}

#[test]
fn criterion_4_closed_form_theorem() {
    let mut c = Criterion::new(
        "criterion 4: normalised pipeline matches closed form; a_c and a -> 2 limit",
    );
    let a_c = find_critical_a();
    c.check((a_c - 1.2877).abs() < 5e-5, || format!("a_c = {a_c}"));
    let grid = rational_grid();
    let mut branches = Vec::new();
    for a in &grid {
        let af = to_f64(a);
        let r = theorem2_bound(&trapezoid(a).unwrap()).unwrap();
        let normalised = rescale_bound(&r, normalization(af)).unwrap().value;
        let (closed, branch) = closed_form_bound(af).unwrap();
        c.check((normalised - closed).abs() < 1e-9, || {
            format!("a = {af}: pipeline {normalised} vs closed form {closed}")
        });
        // pipeline branch from the minimiser sign
        let pipeline_branch = if r.minimizer_b[1] < 0.0 {
            Branch::AntiInvariant
        } else {
            Branch::Invariant
        };
        branches.push((af, pipeline_branch, branch));
    }
    let switches: Vec<usize> = (1..branches.len())
        .filter(|&i| branches[i].1 != branches[i - 1].1)
        .collect();
    c.check(switches.len() == 1, || {
        format!("pipeline branch switches at {switches:?}")
    });
    if let Some(&i) = switches.first() {
        let (lo, hi) = (branches[i - 1].0, branches[i].0);
        let step = hi - lo;
        c.check(lo - step <= a_c && a_c <= hi + step, || {
            format!("switch bracket [{lo}, {hi}] misses a_c = {a_c}")
        });
    }
    c.check(branches.iter().all(|b| b.1 == b.2), || {
        "pipeline and closed-form branches disagree".into()
    });
    let (limit, _) = closed_form_bound(1.999).unwrap();
    let target = 1.5 * std::f64::consts::SQRT_2;
    c.check((limit - target).abs() < 1e-2, || {
        format!("closed form at 1.999: {limit}")
    });
    let r = theorem2_bound(&trapezoid(&rat(1999, 1000)).unwrap()).unwrap();
    let pipeline_limit = r.value / normalization(1.999);
    c.check((pipeline_limit - target).abs() < 1e-2, || {
        format!("pipeline at 1.999: {pipeline_limit}")
    });
    c.finish();
}

#[test]
fn criterion_5_ode_and_abreu() {
    let mut c =
        Criterion::new("criterion 5: profile ODE residual and Abreu second-order convergence");
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let a = -0.9 + 2.8 * i as f64 / 9.0;
        for k in 1..=50 {
            let t = -a + (1.0 + a) * k as f64 / 51.0;
            worst = worst.max(ode_residual(a, t).unwrap().abs());
        }
        c.check(z_profile(a, 1.0).unwrap().abs() < 1e-14, || {
            format!("z(1) at a = {a}")
        });
        c.check(z_profile(a, -a).unwrap().abs() < 1e-14, || {
            format!("z(-a) at a = {a}")
        });
    }
    c.check(worst < 1e-10, || format!("max ODE residual {worst:e}"));
    for (a, x) in [
        (1.0, [0.0, 0.0]),
        (0.0, [-0.2, 0.3]),
        (-0.5, [0.4, 0.3]),
        (1.7, [-0.5, 0.8]),
    ] {
        let r = scalar_curvature_check(a, x, 1e-3).unwrap();
        c.check(r.abs() < 1e-5, || {
            format!("Abreu residual {r:e} at a = {a}, x = {x:?}")
        });
        let coarse = scalar_curvature_check(a, x, 0.02).unwrap();
        let fine = scalar_curvature_check(a, x, 0.01).unwrap();
        let ratio = coarse / fine;
        c.check((3.5..=4.5).contains(&ratio), || {
            format!("Richardson ratio {ratio} at a = {a}, x = {x:?}")
        });
    }
    c.finish();
}

#[test]
fn criterion_6_rayleigh_ritz() {
    let mut c = Criterion::new(
        "criterion 6: Rayleigh-Ritz below closed form, order-stable, IBP-consistent",
    );
    let records = sweep(DEFAULT_A_MIN, DEFAULT_A_MAX, 100, 40).unwrap();
    c.check(records.len() == 100, || "grid size".into());
    for r in &records {
        let rr = r.rayleigh_ritz.expect("Rayleigh-Ritz value");
        let (closed, _) = closed_form_bound(r.a).unwrap();
        c.check(rr <= closed + 1e-8, || {
            format!("a = {}: RR {rr} > closed {closed}", r.a)
        });
        c.check(rr > 0.0, || format!("a = {}: RR {rr} not positive", r.a));
        c.check(r.gap.unwrap() >= -1e-8, || {
            format!("a = {}: gap {:?}", r.a, r.gap)
        });
    }
    for a in [-0.99, -0.5, 0.0, 0.7, 1.2877, 1.6, 1.99] {
        let r32 = rayleigh_ritz(a, 32).unwrap();
        let r64 = rayleigh_ritz(a, 64).unwrap();
        c.check((r32 - r64).abs() < 1e-8, || {
            format!("a = {a}: order 32 {r32} vs 64 {r64}")
        });
    }
    // M̃ for linear test functions equals the extremal numerator matrix
    for a in [rat(-1, 2), rat(1, 4), int(1), rat(7, 4)] {
        let af = to_f64(&a);
        let g = gram_matrices(af, 40).unwrap();
        let r = theorem2_bound(&trapezoid(&a).unwrap()).unwrap();
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            let exact = to_f64(&r.numerator_matrix[i][j]);
            let quad = g.m_tilde.get(i + 1, j + 1);
            c.check((quad - exact).abs() < 1e-6 * exact.abs().max(1.0), || {
                format!("a = {af}: M~[{}][{}] = {quad} vs {exact}", i + 1, j + 1)
            });
        }
    }
    c.finish();
}

fn random_simplex(rng: &mut ChaCha8Rng) -> Option<Simplex> {
    let n = rng.random_range(1..=3usize);
    let d = rng.random_range(1..=n);
    let vertices: Vec<Vec<Rational>> = (0..=d)
        .map(|_| (0..n).map(|_| int(rng.random_range(-3..=3))).collect())
        .collect();
    if d == n {
        Simplex::lebesgue(vertices).ok()
    } else {
        Simplex::new(
            vertices,
            rat(rng.random_range(1..=5), rng.random_range(1..=4)),
        )
        .ok()
    }
}

#[test]
fn criterion_7_integration_oracles() {
    let mut c =
        Criterion::new("criterion 7: Brion vs barycentric, Monte Carlo, lattice hypotenuse");
    let mut rng = ChaCha8Rng::seed_from_u64(20240607);
    let mut instances = 0;
    while instances < 200 {
        let Some(s) = random_simplex(&mut rng) else {
            continue;
        };
        let n = s.ambient_dim();
        let coeffs: Vec<Rational> = (0..n).map(|_| int(rng.random_range(-4..=4))).collect();
        let constant = int(rng.random_range(-2..=2));
        let phi = Polynomial::affine(&coeffs, constant);
        let q = rng.random_range(0..=4u32);
        let brion = brion_linear_power(&s, &phi, q);
        let bary = integrate_polynomial_simplex(&s, &phi.pow(q));
        c.check(brion == bary, || {
            format!("instance {instances}: {brion} vs {bary}")
        });
        instances += 1;
    }
    let cases: [(DelzantPolytope, Polynomial, Rational); 3] = [
        (trapezoid(&int(1)).unwrap(), Polynomial::one(2), int(4)),
        (rectangle(&int(1)).unwrap(), x1_power(2, 1), int(0)),
        (cpn_simplex(2).unwrap(), x1_power(2, 2), rat(9, 4)),
    ];
    for (p, f, exact) in &cases {
        let est = monte_carlo_estimate(p, f, 200_000, 7).unwrap();
        let again = monte_carlo_estimate(p, f, 200_000, 7).unwrap();
        let err = (est.value - to_f64(exact)).abs();
        c.check(err <= 3.0 * est.std_error, || {
            format!(
                "{}: MC {} ± {} vs {exact}",
                p.label(),
                est.value,
                est.std_error
            )
        });
        c.check(est == again, || {
            format!("{}: seeded estimate not reproducible", p.label())
        });
    }
    let triangle = DelzantPolytope::new(
        2,
        vec![
            AffineFunctional::new(vec![1, 0], int(0)).unwrap(),
            AffineFunctional::new(vec![0, 1], int(0)).unwrap(),
            AffineFunctional::new(vec![-1, -1], int(1)).unwrap(),
        ],
    )
    .unwrap();
    let hyp = triangle
        .facet_decomposition()
        .iter()
        .find(|f| f.functional.normal() == [-1, -1])
        .unwrap()
        .measure();
    c.check(hyp.is_one(), || format!("hypotenuse sigma-length {hyp}"));
    c.check(triangle.boundary_measure() == int(3), || {
        "triangle perimeter".into()
    });
    c.finish();
}

fn non_unimodular_square() -> DelzantPolytope {
    let f = |n: [i64; 2]| AffineFunctional::new(n.to_vec(), int(1)).unwrap();
    DelzantPolytope::new(2, vec![f([1, 1]), f([1, -1]), f([-1, 1]), f([-1, -1])]).unwrap()
}

#[test]
fn criterion_8_property_suite() {
    let mut c = Criterion::new("criterion 8: Delzant checks, dilation law, minimiser direction");
    let mut builtins: Vec<DelzantPolytope> = (1..=5).map(|n| cpn_simplex(n).unwrap()).collect();
    for a in [int(1), rat(3, 2), int(3)] {
        builtins.push(rectangle(&a).unwrap());
    }
    for a in [rat(-9, 10), int(0), int(1), rat(19, 10)] {
        builtins.push(trapezoid(&a).unwrap());
    }
    for p in &builtins {
        c.check(p.check_delzant().passed(), || {
            format!("{} fails Delzant", p.label())
        });
    }
    let bad = non_unimodular_square();
    c.check(!bad.check_delzant().passed(), || {
        "non-unimodular square passes".into()
    });

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let families = [
        cpn_simplex(2).unwrap(),
        cpn_simplex(3).unwrap(),
        rectangle(&rat(3, 2)).unwrap(),
        trapezoid(&rat(1, 3)).unwrap(),
    ];
    for p in &families {
        let t = rat(rng.random_range(1..=9), rng.random_range(1..=9));
        let q = p.dilate(&t).unwrap();
        let n = p.dim() as i32;
        let tf = to_f64(&t);
        for (base, scaled) in [
            (theorem1_bound(p).unwrap(), theorem1_bound(&q).unwrap()),
            (theorem2_bound(p).unwrap(), theorem2_bound(&q).unwrap()),
        ] {
            c.check(
                ((scaled.value - base.value / tf) / base.value).abs() < 1e-10,
                || {
                    format!(
                        "{} by {t}: {} vs {}",
                        p.label(),
                        scaled.value,
                        base.value / tf
                    )
                },
            );
            let tn1 = num_traits::pow(t.clone(), (n + 1) as usize);
            let tn2 = num_traits::pow(t.clone(), (n + 2) as usize);
            let num_ok = base
                .numerator_matrix
                .iter()
                .flatten()
                .zip(scaled.numerator_matrix.iter().flatten())
                .all(|(x, y)| x * &tn1 == *y || (x.is_zero() && y.is_zero()));
            let den_ok = base
                .denominator_matrix
                .iter()
                .flatten()
                .zip(scaled.denominator_matrix.iter().flatten())
                .all(|(x, y)| x * &tn2 == *y);
            c.check(den_ok, || {
                format!("{} by {t}: denominator not scaled by t^(n+2)", p.label())
            });
            // only the non-negative-curvature numerator is purely a boundary moment
            if base.warnings.iter().any(|w| w.contains("non-negative")) {
                c.check(num_ok, || {
                    format!("{} by {t}: numerator not scaled by t^(n+1)", p.label())
                });
            }
        }
    }

    let a_c = find_critical_a();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for a in [
        rat(-1, 2),
        int(0),
        int(1),
        rat(5, 4),
        rat(13, 10),
        rat(3, 2),
        rat(19, 10),
    ] {
        let af = to_f64(&a);
        let r = theorem2_bound(&trapezoid(&a).unwrap()).unwrap();
        let expected = if af < a_c { [s, -s] } else { [s, s] };
        let ok = (r.minimizer_b[0] - expected[0]).abs() < 1e-8
            && (r.minimizer_b[1] - expected[1]).abs() < 1e-8;
        c.check(ok, || format!("a = {a}: minimiser {:?}", r.minimizer_b));
        // printed coefficients agree with the pipeline matrices
        let q = quotient_coefficients(af).unwrap();
        let n = &r.numerator_matrix;
        let d = &r.denominator_matrix;
        let close = |x: f64, y: &Rational| (x - to_f64(y)).abs() < 1e-9;
        c.check(
            close(q.a, &n[0][0])
                && close(q.b, &(int(2) * &n[0][1]))
                && close(q.c, &d[0][0])
                && close(q.d, &(int(2) * &d[0][1])),
            || format!("a = {a}: A, B, C, D disagree with pipeline"),
        );
    }
    c.finish();
}
