use std::fmt::{self, Display, Write};

use toric_core::calabi::SweepRecord;
use toric_core::numerics::rational::to_f64;
use toric_core::polytope::format_point;
use toric_core::{format_rational, BoundResult, DelzantPolytope, ScalarAffine};

/// `# key: value` lines opening every report.
pub struct Metadata {
    lines: Vec<(String, String)>,
}

impl Metadata {
    pub fn new(command: &str) -> Self {
        Self {
            lines: vec![
                ("toric-bounds".into(), toric_core::VERSION.into()),
                ("command".into(), command.into()),
                (
                    "eigensolver".into(),
                    "Cholesky + cyclic Jacobi, tol 1e-14".into(),
                ),
            ],
        }
    }

    pub fn entry(mut self, key: &str, value: impl Display) -> Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }
}

impl Display for Metadata {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "# {k}: {v}")?;
        }
        Ok(())
    }
}

fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.10}")).collect();
    format!("({})", parts.join(", "))
}

pub fn polytope_summary(p: &DelzantPolytope) -> String {
    let mut s = String::new();
    writeln!(s, "polytope {} (dimension {})", p.label(), p.dim()).unwrap();
    for f in p.facets() {
        writeln!(s, "  facet {f} >= 0").unwrap();
    }
    let verts: Vec<String> = p.vertices().iter().map(|v| format_point(v)).collect();
    writeln!(s, "  vertices: {}", verts.join(" ")).unwrap();
    let vol = p.volume();
    let per = p.boundary_measure();
    writeln!(
        s,
        "  volume: {} = {:.12}",
        format_rational(&vol),
        to_f64(&vol)
    )
    .unwrap();
    writeln!(
        s,
        "  sigma-perimeter: {} = {:.12}",
        format_rational(&per),
        to_f64(&per)
    )
    .unwrap();
    writeln!(s, "{}", p.check_delzant()).unwrap();
    s
}

pub fn bound_report(p: &DelzantPolytope, r: &BoundResult, kind: &str) -> String {
    let mut s = polytope_summary(p);
    writeln!(s, "bound ({kind}): {:.12}", r.value).unwrap();
    if r.scale != 1.0 {
        writeln!(
            s,
            "  metric scale: {:.12} (unscaled bound {:.12})",
            r.scale,
            r.value * r.scale
        )
        .unwrap();
    }
    writeln!(s, "  minimizer b: {}", vector(&r.minimizer_b)).unwrap();
    for w in &r.warnings {
        writeln!(s, "warning: {w}").unwrap();
    }
    s
}

pub fn scalar_curvature_report(sc: &ScalarAffine) -> String {
    let mut s = String::new();
    writeln!(s, "extremal scalar curvature S = {sc}").unwrap();
    let (a0, grad) = sc.to_f64();
    writeln!(s, "  a0 = {} = {a0:.12}", format_rational(&sc.a0)).unwrap();
    for (i, (q, f)) in sc.grad.iter().zip(grad).enumerate() {
        writeln!(s, "  a{} = {} = {f:.12}", i + 1, format_rational(q)).unwrap();
    }
    s
}

pub fn sweep_summary(records: &[SweepRecord], a_c: f64) -> String {
    let mut s = String::new();
    writeln!(s, "critical parameter a_c = {a_c:.12}").unwrap();
    let gaps: Vec<f64> = records.iter().filter_map(|r| r.gap).collect();
    let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    writeln!(
        s,
        "gap bound - rayleigh_ritz: min {min_gap:.3e}, max {max_gap:.6}"
    )
    .unwrap();
    if let Some(last) = records.last() {
        writeln!(
            s,
            "bound at a = {}: {:.12} (a -> 2 limit 3*sqrt(2)/2 = {:.12})",
            last.a,
            last.bound,
            1.5 * std::f64::consts::SQRT_2
        )
        .unwrap();
    }
    let switch = records.windows(2).find(|w| w[0].branch != w[1].branch);
    if let Some(w) = switch {
        writeln!(s, "branch switch between a = {} and a = {}", w[0].a, w[1].a).unwrap();
    }
    let over = records
        .iter()
        .filter(|r| r.bound > 1.5 * std::f64::consts::SQRT_2 + 1e-6)
        .count();
    if over > 0 {
        writeln!(
            s,
            "note: {over} grid points exceed the Kähler-Einstein value 3*sqrt(2)/2"
        )
        .unwrap();
    }
    for r in records {
        if let Some(e) = &r.error {
            writeln!(s, "error at a = {}: {e}", r.a).unwrap();
        }
        for w in &r.warnings {
            writeln!(s, "warning: {w}").unwrap();
        }
    }
    s
}
