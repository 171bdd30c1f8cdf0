//! Piecewise Chebyshev interpolation used to memoize expensive smooth
//! functions (the interference kernel over its working range).

use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

const DEGREE: usize = 24;

struct Panel {
    a: f64,
    b: f64,
    coef: [f64; DEGREE + 1],
}

impl Panel {
    fn eval(&self, x: f64) -> f64 {
        // Clenshaw recurrence on the mapped coordinate.
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let t2 = 2.0 * t;
        let mut d = 0.0;
        let mut dd = 0.0;
        for j in (1..=DEGREE).rev() {
            let sv = d;
            d = t2 * d - dd + self.coef[j];
            dd = sv;
        }
        t * d - dd + self.coef[0]
    }
}

/// A function table built once at kernel construction and immutable (hence
/// freely shareable) afterwards.
pub(crate) struct PiecewiseCheb {
    panels: Vec<Panel>,
}

fn fit_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> ([f64; DEGREE + 1], f64) {
    let n = DEGREE;
    let mut values = [0.0f64; DEGREE + 1];
    for (k, v) in values.iter_mut().enumerate() {
        let theta = core::f64::consts::PI * k as f64 / n as f64;
        let x = 0.5 * (a + b) + 0.5 * (b - a) * math::cos(theta);
        *v = f(x);
    }
    // Chebyshev coefficients from the extrema grid (type-I, O(n^2) is fine
    // at this degree).
    let mut coef = [0.0f64; DEGREE + 1];
    for (j, c) in coef.iter_mut().enumerate() {
        let mut acc = 0.5 * (values[0] + if j % 2 == 0 { values[n] } else { -values[n] });
        for (k, v) in values.iter().enumerate().take(n).skip(1) {
            acc += v * math::cos(core::f64::consts::PI * (j * k) as f64 / n as f64);
        }
        *c = 2.0 * acc / n as f64;
    }
    coef[0] *= 0.5;
    coef[n] *= 0.5;
    // Coefficient tail as the truncation-error proxy.
    let err = coef[n - 3].abs() + coef[n - 2].abs() + coef[n - 1].abs() + coef[n].abs();
    (coef, err)
}

impl PiecewiseCheb {
    pub(crate) fn build<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Self> {
        let mut panels = Vec::new();
        let mut stack = alloc::vec![(a, b, 0u32)];
        while let Some((lo, hi, depth)) = stack.pop() {
            let (coef, err) = fit_panel(&f, lo, hi);
            if err <= tol || depth >= 24 {
                if err > tol {
                    return Err(Error::Quadrature("interpolation did not converge"));
                }
                panels.push(Panel { a: lo, b: hi, coef });
            } else {
                let mid = 0.5 * (lo + hi);
                stack.push((mid, hi, depth + 1));
                stack.push((lo, mid, depth + 1));
            }
        }
        panels.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());
        Ok(PiecewiseCheb { panels })
    }

    #[cfg(test)]
    pub(crate) fn domain(&self) -> (f64, f64) {
        (
            self.panels.first().map(|p| p.a).unwrap_or(0.0),
            self.panels.last().map(|p| p.b).unwrap_or(0.0),
        )
    }

    /// Evaluate; caller guarantees `x` lies inside the build domain.
    pub(crate) fn eval(&self, x: f64) -> f64 {
        let idx = self.panels.partition_point(|p| p.b < x);
        let panel = &self.panels[idx.min(self.panels.len() - 1)];
        panel.eval(x)
    }
}
