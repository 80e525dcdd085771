//! One-dimensional adaptive Gauss–Kronrod integration, its nested tensor
//! extension, and Gauss–Legendre rules for fixed panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae on [0, 1]; the odd entries are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Integral estimate with an error estimate and the number of integrand calls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: u64,
}

/// Stopping rule for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveRule {
    pub abs_tolerance: f64,
    pub rel_tolerance: f64,
    pub max_subdivisions: usize,
}

impl AdaptiveRule {
    pub fn new(abs_tolerance: f64, max_subdivisions: usize) -> Self {
        Self { abs_tolerance, rel_tolerance: 0.0, max_subdivisions }
    }

    pub fn with_relative(mut self, rel_tolerance: f64) -> Self {
        self.rel_tolerance = rel_tolerance;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tolerance.max(self.rel_tolerance * value.abs())
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    roundoff: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Single G7K15 panel on [a, b]: (Kronrod value, error estimate).
///
/// The error uses the QUADPACK scaling of |K − G| with a round-off floor.
pub fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let panel = kronrod_panel(f, a, b);
    (panel.value, panel.error)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    value: f64,
    error: f64,
    roundoff: f64,
}

fn kronrod_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = kronrod.abs();
    let mut samples = [(0.0, 0.0); 7];
    for (j, slot) in samples.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        kronrod += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
        *slot = (f1, f2);
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, &(f1, f2)) in samples.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let abs_value = abs_k * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * abs_value;
    if abs_value > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(roundoff);
    }
    Panel { value, error, roundoff }
}

/// Globally adaptive bisection: always split the panel with the largest error.
///
/// An accumulated error at the round-off floor of the panels counts as
/// converged, since bisecting further cannot lower it.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rule: &AdaptiveRule) -> Result<QuadratureEstimate> {
    let first = kronrod_panel(&mut f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: first.value, error: first.error, roundoff: first.roundoff });
    let (mut total, mut total_err, mut floor) = (first.value, first.error, first.roundoff);
    let mut subdivisions = 0;
    while total_err > rule.target(total).max(2.0 * floor) {
        if subdivisions >= rule.max_subdivisions {
            return Err(Error::QuadratureNotConverged { estimate: total_err, tolerance: rule.target(total) });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let left = kronrod_panel(&mut f, worst.a, mid);
        let right = kronrod_panel(&mut f, mid, worst.b);
        evaluations += 30;
        subdivisions += 1;
        heap.push(Segment { a: worst.a, b: mid, value: left.value, error: left.error, roundoff: left.roundoff });
        heap.push(Segment { a: mid, b: worst.b, value: right.value, error: right.error, roundoff: right.roundoff });
        // Re-sum from scratch now and then so incremental drift cannot stall the loop.
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
            floor = heap.iter().map(|s| s.roundoff).sum();
        } else {
            total += left.value + right.value - worst.value;
            total_err += left.error + right.error - worst.error;
            floor += left.roundoff + right.roundoff - worst.roundoff;
        }
        if !total.is_finite() {
            return Err(Error::domain("non-finite integrand value"));
        }
    }
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok(QuadratureEstimate { value, error, evaluations })
}

/// Iterated adaptive integration over the box `lower × upper`.
///
/// Each inner axis runs with a tighter tolerance than the axis outside it,
/// and the reported error adds the worst inner error times the outer width.
pub fn integrate_nested<F: Fn(&[f64]) -> f64>(
    f: F,
    lower: &[f64],
    upper: &[f64],
    rule: &AdaptiveRule,
) -> Result<QuadratureEstimate> {
    assert_eq!(lower.len(), upper.len(), "box bounds differ in dimension");
    assert!(!lower.is_empty(), "empty box");
    let mut point = vec![0.0; lower.len()];
    nested_level(&f, 0, &mut point, lower, upper, rule)
}

fn nested_level<F: Fn(&[f64]) -> f64>(
    f: &F,
    axis: usize,
    point: &mut [f64],
    lower: &[f64],
    upper: &[f64],
    rule: &AdaptiveRule,
) -> Result<QuadratureEstimate> {
    let (a, b) = (lower[axis], upper[axis]);
    if axis + 1 == point.len() {
        return integrate_adaptive(
            |x| {
                point[axis] = x;
                f(point)
            },
            a,
            b,
            rule,
        );
    }
    let width = (b - a).abs();
    let inner_rule = AdaptiveRule {
        abs_tolerance: rule.abs_tolerance / (10.0 * width),
        rel_tolerance: rule.rel_tolerance / 10.0,
        max_subdivisions: rule.max_subdivisions,
    };
    let mut inner_error = 0.0_f64;
    let mut evaluations = 0u64;
    let mut failure = None;
    let outer = integrate_adaptive(
        |x| {
            point[axis] = x;
            match nested_level(f, axis + 1, point, lower, upper, &inner_rule) {
                Ok(r) => {
                    inner_error = inner_error.max(r.error);
                    evaluations += r.evaluations;
                    r.value
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        a,
        b,
        rule,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let outer = outer?;
    Ok(QuadratureEstimate { value: outer.value, error: outer.error + width * inner_error, evaluations })
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on Pₙ.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        if 2 * i + 1 == n {
            let (_, d) = legendre_with_derivative(n, 0.0);
            nodes[i] = 0.0;
            weights[i] = 2.0 / (d * d);
            continue;
        }
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_weights_are_consistent() {
        let k: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_is_exact_for_high_degree_polynomials() {
        for deg in [0, 5, 13, 22] {
            let (v, _) = gauss_kronrod_15(&mut |x: f64| x.powi(deg), 0.0, 1.0);
            assert!((v - 1.0 / (deg as f64 + 1.0)).abs() < 1e-15, "degree {deg}");
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let rule = AdaptiveRule::new(1e-12, 200);
        let r = integrate_adaptive(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &rule).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        assert!(r.error <= 1e-12);
    }

    #[test]
    fn adaptive_error_estimate_covers_peaked_integrand() {
        let rule = AdaptiveRule::new(1e-10, 500);
        let eps: f64 = 1e-3;
        let r = integrate_adaptive(|x: f64| eps / (x * x + eps * eps), -1.0, 1.0, &rule).unwrap();
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((r.value - exact).abs() <= r.error.max(1e-12));
    }

    #[test]
    fn adaptive_reports_exhausted_budget() {
        let rule = AdaptiveRule::new(1e-14, 3);
        let err = integrate_adaptive(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &rule).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }

    #[test]
    fn nested_integral_of_product() {
        let rule = AdaptiveRule::new(1e-10, 200);
        let r = integrate_nested(|p| p[0].sin() * p[1].cos().powi(2) * (1.0 + p[2]), &[0.0; 3], &[PI, PI, 1.0], &rule).unwrap();
        let exact = 2.0 * (PI / 2.0) * 1.5;
        assert!((r.value - exact).abs() < 1e-10, "{}", r.value);
        assert!(r.evaluations > 0);
    }

    #[test]
    fn gauss_legendre_exactness_and_weights() {
        for n in [1, 2, 5, 20, 64] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
            let deg = 2 * n as i32 - 2;
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            assert!((q - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n = {n}");
        }
        let (x, _) = gauss_legendre(5);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(x[2], 0.0);
    }
}
