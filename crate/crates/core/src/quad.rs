//! Globally adaptive Gauss–Kronrod quadrature on finite intervals.
//!
//! Improper integrals never reach this module directly: the analytic layer
//! maps every semi-infinite or endpoint-singular integral onto a finite
//! interval with a smooth integrand first (reciprocal and power-law
//! substitutions), so a plain 7–15 point rule with bisection of the
//! worst-error segment is all that is needed here.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Tolerances and budget for every quadrature in the analytic pipeline,
/// plus the step policy for the finite-difference derivatives of the
/// interference functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: u32,
    pub derivative_step: DerivativeStep,
}

/// Central-difference step policy: start at `rel_step * phi` and halve
/// `halvings` times, Richardson-extrapolating each refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeStep {
    pub rel_step: f64,
    pub halvings: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            derivative_step: DerivativeStep {
                rel_step: 1e-3,
                halvings: 2,
            },
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 64 {
            return Err(Error::Domain("max_subdivisions must be at least 64"));
        }
        if !(self.derivative_step.rel_step > 0.0) {
            return Err(Error::Domain("derivative step must be positive"));
        }
        Ok(())
    }

    /// Same budget with tolerances scaled by `factor` (used for inner
    /// integrals nested below an outer adaptive pass).
    pub fn scaled(&self, factor: f64) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: (self.rel_tol * factor).max(1e-15),
            abs_tol: (self.abs_tol * factor).max(1e-300),
            ..*self
        }
    }
}

// 15-point Kronrod abscissae (positive half), 7-point Gauss embedded.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
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

struct PanelEstimate {
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = libm::pow(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> PanelEstimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();

    for j in 0..3 {
        let idx = 2 * j + 1;
        let x = half * XGK[idx];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[idx] = f1;
        fv2[idx] = f2;
        res_gauss += WG[j] * (f1 + f2);
        res_kronrod += WGK[idx] * (f1 + f2);
        res_abs += WGK[idx] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let idx = 2 * j;
        let x = half * XGK[idx];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[idx] = f1;
        fv2[idx] = f2;
        res_kronrod += WGK[idx] * (f1 + f2);
        res_abs += WGK[idx] * (f1.abs() + f2.abs());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half;
    PanelEstimate {
        value: res_kronrod * half,
        error: rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Integrate `f` over the finite interval `[a, b]` to the spec tolerances.
///
/// Returns `Error::Quadrature` when the subdivision budget is exhausted or
/// the integrand produced non-finite values.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("integration bounds must be finite"));
    }

    let first = gk15(&f, a, b);
    let mut segments: Vec<Segment> = Vec::with_capacity(32);
    segments.push(Segment {
        a,
        b,
        value: first.value,
        error: first.error,
    });

    loop {
        let mut total = 0.0;
        let mut total_err = 0.0;
        let mut worst = 0usize;
        let mut worst_err = -1.0;
        for (i, s) in segments.iter().enumerate() {
            total += s.value;
            total_err += s.error;
            if s.error > worst_err {
                worst_err = s.error;
                worst = i;
            }
        }
        if !total.is_finite() {
            return Err(Error::Quadrature("integrand produced non-finite values"));
        }
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(total);
        }
        if segments.len() as u32 >= spec.max_subdivisions {
            // A last chance: the rescaled per-panel errors are conservative.
            if total_err <= 1e3 * tol {
                return Ok(total);
            }
            return Err(Error::Quadrature("subdivision limit exhausted"));
        }

        let seg = &segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            return Err(Error::Quadrature("interval too narrow to split"));
        }
        let (sa, sb) = (seg.a, seg.b);
        let left = gk15(&f, sa, mid);
        let right = gk15(&f, mid, sb);
        segments[worst] = Segment {
            a: sa,
            b: mid,
            value: left.value,
            error: left.error,
        };
        segments.push(Segment {
            a: mid,
            b: sb,
            value: right.value,
            error: right.error,
        });
    }
}
