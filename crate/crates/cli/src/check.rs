//! The acceptance criteria as a runnable self-check.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_core::bounds::product_sphere_spectrum;
use toric_core::calabi::{
    alpha_beta_exact, closed_form_bound, find_critical_a, gram_matrices, normalization,
    ode_residual, rayleigh_ritz, scalar_curvature_check, sweep, DEFAULT_A_MAX, DEFAULT_A_MIN,
};
use toric_core::integrate::{
    brion_linear_power, integrate_over_boundary, integrate_polynomial_simplex, moments_up_to,
    monte_carlo_estimate,
};
use toric_core::numerics::rational::{int, rat, to_f64};
use toric_core::polytope::{AffineFunctional, Simplex};
use toric_core::{
    cpn_simplex, rectangle, solve_extremal_s, theorem1_bound, theorem2_bound, trapezoid,
    DelzantPolytope, Polynomial, Rational,
};

pub struct Options {
    pub seed: u64,
    pub order: usize,
    pub tamper_alpha: bool,
}

type Outcome = Result<String, String>;
type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn x1_power(n: usize, k: u32) -> Polynomial {
    let mut e = vec![0; n];
    e[0] = k;
    Polynomial::monomial(n, e, int(1))
}

fn cpn_bound() -> Outcome {
    for n in 1..=5usize {
        let p = cpn_simplex(n).unwrap();
        let r = theorem1_bound(&p).map_err(|e| e.to_string())?;
        ensure((r.value - (n + 2) as f64).abs() < 1e-10, || {
            format!("n = {n}: {}", r.value)
        })?;
        let t = moments_up_to(&p, 2);
        let mut e = vec![0; n];
        e[0] = 2;
        let ratio = integrate_over_boundary(&p, &x1_power(n, 2)) / t.interior(&e);
        ensure(ratio == int(n as i64 + 2), || {
            format!("n = {n}: exact ratio {ratio}")
        })?;
    }
    Ok("n = 1..5".into())
}

fn extremal_s(tamper: bool) -> Outcome {
    for k in 1..=20 {
        let a = rat(-1, 1) + rat(3 * k, 21);
        let s = solve_extremal_s(&trapezoid(&a).unwrap()).map_err(|e| e.to_string())?;
        let (mut alpha, beta) = alpha_beta_exact(&a);
        if tamper {
            alpha += rat(1, 1000);
        }
        ensure(s.a0 == beta && s.grad == vec![alpha.clone(), alpha], || {
            format!("a = {a}: solved {s}")
        })?;
    }
    Ok("20 rational parameters, exact".into())
}

fn product_tightness() -> Outcome {
    for a in [int(1), rat(3, 2), int(2), int(3)] {
        let af = to_f64(&a);
        let r = theorem2_bound(&rectangle(&a).unwrap()).map_err(|e| e.to_string())?;
        let first = product_sphere_spectrum(af, 4)
            .map_err(|e| e.to_string())?
            .into_iter()
            .find(|&v| v > 0.0)
            .unwrap();
        ensure(
            (r.value - 2.0 / af).abs() < 1e-12 && (r.value - first).abs() < 1e-12,
            || format!("a = {a}: {} vs {first}", r.value),
        )?;
    }
    Ok("a in {1, 3/2, 2, 3}".into())
}

fn closed_form() -> Outcome {
    let a_c = find_critical_a();
    ensure((a_c - 1.2877).abs() < 5e-5, || format!("a_c = {a_c}"))?;
    let mut worst: f64 = 0.0;
    let mut prev: Option<(f64, bool)> = None;
    let mut bracket = None;
    for i in 0..100 {
        let a = rat(-99, 100) + rat(298, 9900) * int(i);
        let af = to_f64(&a);
        let r = theorem2_bound(&trapezoid(&a).unwrap()).map_err(|e| e.to_string())?;
        let (closed, _) = closed_form_bound(af).map_err(|e| e.to_string())?;
        worst = worst.max((r.value / normalization(af) - closed).abs());
        let anti = r.minimizer_b[1] < 0.0;
        if let Some((pa, panti)) = prev {
            if panti != anti {
                bracket = Some((pa, af));
            }
        }
        prev = Some((af, anti));
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    let (lo, hi) = bracket.ok_or("no branch switch on the grid")?;
    let step = hi - lo;
    ensure(lo - step <= a_c && a_c <= hi + step, || {
        format!("switch [{lo}, {hi}]")
    })?;
    let (limit, _) = closed_form_bound(1.999).map_err(|e| e.to_string())?;
    ensure(
        (limit - 1.5 * std::f64::consts::SQRT_2).abs() < 1e-2,
        || format!("limit {limit}"),
    )?;
    Ok(format!(
        "a_c = {a_c:.6}, max deviation {worst:.1e}, switch in [{lo:.4}, {hi:.4}]"
    ))
}

fn ode_abreu() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let a = -0.9 + 2.8 * i as f64 / 9.0;
        for k in 1..=50 {
            let t = -a + (1.0 + a) * k as f64 / 51.0;
            worst = worst.max(ode_residual(a, t).map_err(|e| e.to_string())?.abs());
        }
    }
    ensure(worst < 1e-10, || format!("ODE residual {worst:e}"))?;
    for (a, x) in [(1.0, [0.0, 0.0]), (0.0, [-0.2, 0.3])] {
        let r = scalar_curvature_check(a, x, 1e-3).map_err(|e| e.to_string())?;
        ensure(r.abs() < 1e-5, || format!("Abreu residual {r:e}"))?;
        let ratio = scalar_curvature_check(a, x, 0.02).unwrap()
            / scalar_curvature_check(a, x, 0.01).unwrap();
        ensure((3.5..=4.5).contains(&ratio), || {
            format!("Richardson ratio {ratio}")
        })?;
    }
    Ok(format!("max ODE residual {worst:.1e}"))
}

fn rayleigh_ritz_checks(order: usize) -> Outcome {
    let records = sweep(DEFAULT_A_MIN, DEFAULT_A_MAX, 100, order).map_err(|e| e.to_string())?;
    let mut min_gap = f64::INFINITY;
    for r in &records {
        let rr = r
            .rayleigh_ritz
            .ok_or_else(|| format!("a = {}: {:?}", r.a, r.error))?;
        let (closed, _) = closed_form_bound(r.a).unwrap();
        min_gap = min_gap.min(closed - rr);
    }
    ensure(min_gap >= -1e-8, || format!("min gap {min_gap:e}"))?;
    for a in [-0.99, 0.0, 1.2877, 1.99] {
        let (r32, r64) = (rayleigh_ritz(a, 32), rayleigh_ritz(a, 64));
        let (r32, r64) = (
            r32.map_err(|e| e.to_string())?,
            r64.map_err(|e| e.to_string())?,
        );
        ensure((r32 - r64).abs() < 1e-8, || {
            format!("a = {a}: {r32} vs {r64}")
        })?;
    }
    for a in [rat(-1, 2), int(1), rat(7, 4)] {
        let g = gram_matrices(to_f64(&a), order).map_err(|e| e.to_string())?;
        let n = theorem2_bound(&trapezoid(&a).unwrap())
            .unwrap()
            .numerator_matrix;
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            let exact = to_f64(&n[i][j]);
            let quad = g.m_tilde.get(i + 1, j + 1);
            ensure((quad - exact).abs() < 1e-6 * exact.abs().max(1.0), || {
                format!("a = {a}: IBP entry {quad} vs {exact}")
            })?;
        }
    }
    Ok(format!("min gap {min_gap:.3e} over 100 points"))
}

fn integration_oracles(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = 0;
    while count < 200 {
        let n = rng.random_range(1..=3usize);
        let d = rng.random_range(1..=n);
        let verts: Vec<Vec<Rational>> = (0..=d)
            .map(|_| (0..n).map(|_| int(rng.random_range(-3..=3))).collect())
            .collect();
        let s = if d == n {
            Simplex::lebesgue(verts)
        } else {
            Simplex::new(verts, rat(rng.random_range(1..=5), 2))
        };
        let Ok(s) = s else { continue };
        let coeffs: Vec<Rational> = (0..n).map(|_| int(rng.random_range(-4..=4))).collect();
        let phi = Polynomial::affine(&coeffs, int(rng.random_range(-2..=2)));
        let q = rng.random_range(0..=4u32);
        ensure(
            brion_linear_power(&s, &phi, q) == integrate_polynomial_simplex(&s, &phi.pow(q)),
            || format!("instance {count} disagrees"),
        )?;
        count += 1;
    }
    let cases = [
        (trapezoid(&int(1)).unwrap(), Polynomial::one(2), 4.0),
        (rectangle(&int(1)).unwrap(), x1_power(2, 1), 0.0),
        (cpn_simplex(2).unwrap(), x1_power(2, 2), 2.25),
    ];
    for (p, f, exact) in &cases {
        let est = monte_carlo_estimate(p, f, 200_000, seed).map_err(|e| e.to_string())?;
        let again = monte_carlo_estimate(p, f, 200_000, seed).map_err(|e| e.to_string())?;
        ensure((est.value - exact).abs() <= 3.0 * est.std_error, || {
            format!("{}: {} ± {}", p.label(), est.value, est.std_error)
        })?;
        ensure(est == again, || "Monte Carlo not reproducible".into())?;
    }
    let tri = DelzantPolytope::new(
        2,
        vec![
            AffineFunctional::new(vec![1, 0], int(0)).unwrap(),
            AffineFunctional::new(vec![0, 1], int(0)).unwrap(),
            AffineFunctional::new(vec![-1, -1], int(1)).unwrap(),
        ],
    )
    .unwrap();
    ensure(tri.boundary_measure() == int(3), || {
        "hypotenuse sigma-length is not 1".into()
    })?;
    Ok("200 Brion instances, 3 Monte Carlo families".into())
}

fn properties(seed: u64) -> Outcome {
    let mut polytopes: Vec<DelzantPolytope> = (1..=5).map(|n| cpn_simplex(n).unwrap()).collect();
    polytopes.push(rectangle(&rat(3, 2)).unwrap());
    polytopes.push(trapezoid(&rat(1, 2)).unwrap());
    for p in &polytopes {
        ensure(p.check_delzant().passed(), || {
            format!("{} fails Delzant", p.label())
        })?;
    }
    let f = |n: [i64; 2]| AffineFunctional::new(n.to_vec(), int(1)).unwrap();
    let bad =
        DelzantPolytope::new(2, vec![f([1, 1]), f([1, -1]), f([-1, 1]), f([-1, -1])]).unwrap();
    ensure(!bad.check_delzant().passed(), || {
        "non-unimodular square passes".into()
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in [cpn_simplex(2).unwrap(), trapezoid(&rat(1, 3)).unwrap()] {
        let t = rat(rng.random_range(1..=9), rng.random_range(1..=9));
        let q = p.dilate(&t).unwrap();
        let (v, w) = (
            theorem2_bound(&p).unwrap().value,
            theorem2_bound(&q).unwrap().value,
        );
        ensure(((w - v / to_f64(&t)) / v).abs() < 1e-10, || {
            format!("dilation by {t}")
        })?;
    }
    let a_c = find_critical_a();
    for a in [rat(-1, 2), int(1), rat(3, 2)] {
        let b = theorem2_bound(&trapezoid(&a).unwrap()).unwrap().minimizer_b;
        let anti = to_f64(&a) < a_c;
        ensure(
            (b[1] < 0.0) == anti && (b[0].abs() - b[1].abs()).abs() < 1e-8,
            || format!("a = {a}: minimiser {b:?}"),
        )?;
    }
    Ok("Delzant, dilation law, minimiser direction".into())
}

/// Runs every check, printing one line each; returns whether all passed.
pub fn run(opts: &Options) -> bool {
    let checks: Vec<Check> = vec![
        ("1 CP^n bound n+2", Box::new(cpn_bound)),
        (
            "2 extremal S on trapezoid",
            Box::new(|| extremal_s(opts.tamper_alpha)),
        ),
        ("3 CP1xCP1 tightness", Box::new(product_tightness)),
        ("4 closed-form theorem", Box::new(closed_form)),
        ("5 ODE and Abreu", Box::new(ode_abreu)),
        (
            "6 Rayleigh-Ritz dominance",
            Box::new(|| rayleigh_ritz_checks(opts.order)),
        ),
        (
            "7 integration oracles",
            Box::new(|| integration_oracles(opts.seed)),
        ),
        ("8 property suite", Box::new(|| properties(opts.seed))),
    ];
    let mut all = true;
    let start = Instant::now();
    for (name, f) in checks {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name:<28} {secs:>7.3}s  {detail}"),
            Err(why) => {
                all = false;
                println!("[FAIL] {name:<28} {secs:>7.3}s  {why}");
            }
        }
    }
    println!(
        "{} in {:.3}s",
        if all {
            "all checks passed"
        } else {
            "some checks FAILED"
        },
        start.elapsed().as_secs_f64()
    );
    all
}
