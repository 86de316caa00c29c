//! Quadrature rules: Gauss–Legendre panels along polygonal contours,
//! exp-sinh for half-lines and the composite trapezoid rule.

use core::f64::consts::FRAC_PI_2;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::Complex;

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// `int f(z) dz` along the closed polygon through `vertices`, with `panels`
/// five-point Gauss–Legendre panels on every edge.
pub fn contour_integral<F>(vertices: &[Complex], panels: usize, mut f: F) -> Result<Complex>
where
    F: FnMut(Complex) -> Result<Complex>,
{
    if vertices.len() < 2 || panels == 0 {
        return Err(Error::InvalidParameter("contour needs two vertices and one panel"));
    }
    let mut total = Complex::new(0.0, 0.0);
    for s in 0..vertices.len() {
        let (a, b) = (vertices[s], vertices[(s + 1) % vertices.len()]);
        let step = (b - a) / panels as f64;
        let half = step * 0.5;
        for k in 0..panels {
            let mid = a + step * (k as f64 + 0.5);
            let mut acc = Complex::new(0.0, 0.0);
            for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
                acc += f(mid + half * *x)? * w;
            }
            total += acc * half;
        }
    }
    Ok(total)
}

/// `int_0^inf g(s) ds` by the exp-sinh substitution `s = exp(pi/2 sinh t)`,
/// halving the step until two successive sums agree to `rel_tol`.
pub fn exp_sinh<G>(mut g: G, rel_tol: f64) -> Result<Complex>
where
    G: FnMut(f64) -> Complex,
{
    const T_MAX: f64 = 4.5;
    const MAX_LEVELS: u32 = 12;
    let mut eval = |t: f64| {
        let s = (FRAC_PI_2 * t.sinh()).exp();
        let jac = FRAC_PI_2 * t.cosh() * s;
        let v = g(s) * jac;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex::new(0.0, 0.0)
        }
    };
    let mut h = 0.5;
    let n0 = (T_MAX / h) as i64;
    let mut sum = Complex::new(0.0, 0.0);
    for k in -n0..=n0 {
        sum += eval(k as f64 * h);
    }
    let mut prev = sum * h;
    for _ in 0..MAX_LEVELS {
        // only the new midpoints are evaluated at each level
        let n = (T_MAX / h) as i64;
        for k in -n..n {
            sum += eval((k as f64 + 0.5) * h);
        }
        h *= 0.5;
        let cur = sum * h;
        if (cur - prev).norm() <= rel_tol * (1.0 + cur.norm()) {
            return Ok(cur);
        }
        prev = cur;
    }
    if (prev.re).is_finite() && prev.im.is_finite() {
        Err(Error::NonConvergent)
    } else {
        Err(Error::NonFinite)
    }
}

/// Composite trapezoid rule for `int_a^b g` on `n` equal subintervals.
pub fn trapezoid<G>(a: f64, b: f64, n: usize, mut g: G) -> f64
where
    G: FnMut(f64) -> f64,
{
    let h = (b - a) / n as f64;
    let mut s = 0.5 * (g(a) + g(b));
    for i in 1..n {
        s += g(a + i as f64 * h);
    }
    s * h
}
