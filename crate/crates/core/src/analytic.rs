//! Closed-form and quadrature-based quantities: shot-noise functionals,
//! connection intensities, multicast outage, maximum contention intensity,
//! rate bounds, transmission capacity, multihop scaling and the
//! tessellation-gain optimizer.
//!
//! The central object is the interference kernel `delta1(phi, r)`, the
//! exponent of the Laplace functional of Poisson shot noise with unit-mean
//! Nakagami-m marks and bounded power-law path loss over a disk of radius
//! `r`:
//!
//! ```text
//! delta1(phi, r) = 2 * int_1^r [1 - (1 + phi/(m x^alpha))^-m] x dx
//!                = (2/alpha) (phi/m)^(2/alpha)
//!                  * int_{m/phi}^{m r^alpha/phi} t^(2/alpha - 1) [1 - (t/(1+t))^m] dt
//! ```
//!
//! so that `E[exp(-phi I)] = exp(-pi * delta1(phi, r) * lambda)`. Improper
//! upper limits and the endpoint singularities of the `t` form are removed
//! by power-law substitutions before any quadrature runs; see the private
//! helpers below.

use alloc::vec::Vec;
use core::cell::Cell;
use core::f64::consts::{LN_10, LN_2, PI};

use crate::interp::PiecewiseCheb;
use crate::math;
use crate::model::NetworkConfig;
use crate::quad::{integrate, QuadratureSpec};
use crate::{Error, Result};

/// 1 - (t/(1+t))^m evaluated without cancellation for any t > 0.
#[inline]
fn survival_factor(t: f64, m: f64) -> f64 {
    -math::expm1(-m * math::ln_1p(1.0 / t))
}

/// Integrate expressions that may fail inside the integrand; the first
/// inner error wins over the quadrature status.
fn integrate_checked<F: Fn(f64) -> Result<f64>>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let failure: Cell<Option<Error>> = Cell::new(None);
    let wrapped = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            f64::NAN
        }
    };
    let out = integrate(wrapped, a, b, spec);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    out
}

/// Kernel integral J(lo, hi) = int_lo^hi t^(2/alpha - 1) [1 - (t/(1+t))^m] dt
/// with `hi` possibly infinite and `lo >= 0`.
fn kernel_integral(t_lo: f64, t_hi: f64, m: u32, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    let mf = m as f64;
    let two_over_alpha = 2.0 / alpha;

    // Finite stretch in w = t^(2/alpha): the integrand becomes
    // (alpha/2) [1 - (t/(1+t))^m] at t = w^(alpha/2), smooth down to w = 0.
    let finite = |lo: f64, hi: f64| -> Result<f64> {
        if hi <= lo {
            return Ok(0.0);
        }
        let w_lo = math::powf(lo, two_over_alpha);
        let w_hi = math::powf(hi, two_over_alpha);
        let v = integrate(
            |w| survival_factor(math::powf(w, 0.5 * alpha), mf),
            w_lo,
            w_hi,
            spec,
        )?;
        Ok(0.5 * alpha * v)
    };

    if t_hi.is_finite() {
        return finite(t_lo, t_hi);
    }

    // Tail past c = max(lo, 1): under u = 1/t followed by u = w^p with
    // p = alpha/(alpha-2), the integrand p * [1 - (1+u)^-m] / u is smooth.
    let c = t_lo.max(1.0);
    let p = alpha / (alpha - 2.0);
    let w_hi = math::powf(1.0 / c, 1.0 / p);
    let tail_integrand = |w: f64| {
        let u = math::powf(w, p);
        p * (-math::expm1(-mf * math::ln_1p(u))) / u
    };
    let tail = integrate(tail_integrand, 0.0, w_hi, spec)?;
    Ok(finite(t_lo, 1.0)? + tail)
}

/// Laplace-functional exponent of the interference field over the disk of
/// radius `r` (`f64::INFINITY` for the whole plane): nonnegative,
/// nondecreasing in both `phi` and `r`, and zero at `r = 1`.
pub fn delta1(phi: f64, r: f64, m: u32, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain("Nakagami shape m must be >= 1"));
    }
    if !(alpha > 2.0) {
        return Err(Error::Domain("alpha must exceed 2"));
    }
    if !(phi > 0.0) || !phi.is_finite() {
        return Err(Error::Domain("phi must be positive and finite"));
    }
    if r.is_nan() || (r.is_finite() && r < 1.0) {
        return Err(Error::Domain("disk radius must satisfy r >= 1"));
    }
    let mf = m as f64;
    let t_lo = mf / phi;
    let t_hi = if r.is_finite() {
        mf * math::powf(r, alpha) / phi
    } else {
        f64::INFINITY
    };
    let j = kernel_integral(t_lo, t_hi, m, alpha, spec)?;
    Ok((2.0 / alpha) * math::powf(phi / mf, 2.0 / alpha) * j)
}

/// d delta1(phi, infinity) / d phi, by quadrature of the differentiated
/// radial integrand (mapped onto [0, 1]; smooth for every alpha > 2).
pub fn delta1_derivative(phi: f64, m: u32, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain("Nakagami shape m must be >= 1"));
    }
    if !(alpha > 2.0) {
        return Err(Error::Domain("alpha must exceed 2"));
    }
    if !(phi >= 0.0) {
        return Err(Error::Domain("phi must be nonnegative"));
    }
    let mf = m as f64;
    let p = alpha / (alpha - 2.0);
    let v = integrate(
        |w| math::powf(1.0 + (phi / mf) * math::powf(w, p), -(mf + 1.0)),
        0.0,
        1.0,
        spec,
    )?;
    Ok(2.0 / (alpha - 2.0) * v)
}

/// Scaling-law kernel: (delta1(phi, inf) - delta1(phi, a_hat)) times the
/// Nakagami correction prod_{j=1}^{m-1} (1 - 2/(j alpha)). The difference
/// extends the kernel integral down to m a_hat^alpha / phi, so inner
/// cutoffs a_hat in [0, 1] need no evaluation of `delta1` below its r >= 1
/// domain.
pub fn delta1_hat(phi: f64, a_hat: f64, m: u32, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&a_hat) {
        return Err(Error::Domain("a_hat must lie in [0, 1]"));
    }
    if !(phi > 0.0) || !phi.is_finite() {
        return Err(Error::Domain("phi must be positive and finite"));
    }
    if m < 1 {
        return Err(Error::Domain("Nakagami shape m must be >= 1"));
    }
    if !(alpha > 2.0) {
        return Err(Error::Domain("alpha must exceed 2"));
    }
    let mf = m as f64;
    let t_lo = mf * math::powf(a_hat, alpha) / phi;
    let j = kernel_integral(t_lo, f64::INFINITY, m, alpha, spec)?;
    Ok((2.0 / alpha) * math::powf(phi / mf, 2.0 / alpha) * j * nakagami_product(m, alpha))
}

/// prod_{j=1}^{m-1} (1 - 2/(j alpha)); empty (= 1) for Rayleigh fading.
pub fn nakagami_product(m: u32, alpha: f64) -> f64 {
    let mut acc = 1.0;
    for j in 1..m {
        acc *= 1.0 - 2.0 / (j as f64 * alpha);
    }
    acc
}

/// Moment-generating-functional exponent of the interference field over the
/// disk of radius `r`: `E[exp(+phi I)] = exp(pi * delta2(phi, r) * lambda)`.
///
/// Finite only while the per-link moment generating function exists
/// everywhere on the disk; past the inner cutoff (`phi >= m`) the integral
/// diverges, which surfaces as a quadrature error.
pub fn delta2(phi: f64, r: f64, m: u32, alpha: f64, spec: &QuadratureSpec) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain("Nakagami shape m must be >= 1"));
    }
    if !(alpha > 2.0) {
        return Err(Error::Domain("alpha must exceed 2"));
    }
    if !r.is_finite() || r < 1.0 {
        return Err(Error::Domain("disk radius must be finite and >= 1"));
    }
    let mf = m as f64;
    if !(phi > 0.0 && phi < mf * math::powf(r, alpha)) {
        return Err(Error::Domain("phi must lie in (0, m r^alpha)"));
    }
    // 2 * int_1^r [(1 - phi/(m x^alpha))^-m - 1] x dx, through expm1/log1p
    // so small exponents lose no precision.
    let v = integrate(
        |x| {
            let y = phi / (mf * math::powf(x, alpha));
            math::expm1(-mf * math::ln_1p(-y)) * x
        },
        1.0,
        r,
        spec,
    )?;
    Ok(2.0 * v)
}

/// Laplace functional of the summed interference from independent fields of
/// total intensity `lambda_sum` on the disk of radius `r`:
/// `E[exp(-phi I)] = exp(-pi * delta1(phi, r) * lambda_sum)`.
pub fn laplace_interference(
    phi: f64,
    lambda_sum: f64,
    r: f64,
    m: u32,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(phi >= 0.0) {
        return Err(Error::Domain("phi must be nonnegative"));
    }
    if !(lambda_sum >= 0.0) {
        return Err(Error::Domain("lambda_sum must be nonnegative"));
    }
    if phi == 0.0 || lambda_sum == 0.0 {
        return Ok(1.0);
    }
    let d = delta1(phi, r, m, alpha, spec)?;
    Ok(math::exp(-PI * d * lambda_sum))
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Per-attempt success probability Psi^(m-1)(phi) for Nakagami-m fading:
///
/// ```text
/// Psi^(n)(phi) = (-1)^n phi^(n+1) / n! * d^n/dphi^n [ L(phi) / phi ],
/// L(phi) = exp(-pi lambda_t delta1(phi, inf)),    n = m - 1.
/// ```
///
/// m = 1 is the exact exponential; m = 2 uses the analytic first derivative
/// with d delta1/d phi by quadrature; m >= 3 falls back to
/// Richardson-extrapolated central differences with the configured step
/// policy.
pub fn psi_derivative(
    m: u32,
    phi: f64,
    lambda_t: f64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let d1 = |p: f64| delta1(p, f64::INFINITY, m, alpha, spec);
    psi_with(m, phi, lambda_t, alpha, spec, &d1)
}

fn psi_with<F: Fn(f64) -> Result<f64>>(
    m: u32,
    phi: f64,
    lambda_t: f64,
    alpha: f64,
    spec: &QuadratureSpec,
    d1: &F,
) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain("Nakagami shape m must be >= 1"));
    }
    if !(phi > 0.0) || !phi.is_finite() {
        return Err(Error::Domain("phi must be positive and finite"));
    }
    if !(lambda_t >= 0.0) {
        return Err(Error::Domain("lambda_t must be nonnegative"));
    }
    if lambda_t == 0.0 {
        // No interference: the derivative of 1/phi cancels the prefactor.
        return Ok(1.0);
    }
    match m {
        1 => Ok(math::exp(-PI * lambda_t * d1(phi)?)),
        2 => {
            let l = math::exp(-PI * lambda_t * d1(phi)?);
            let dp = delta1_derivative(phi, m, alpha, spec)?;
            Ok(l * (1.0 + phi * PI * lambda_t * dp))
        }
        _ => {
            let n = m - 1;
            let g = |p: f64| -> Result<f64> { Ok(math::exp(-PI * lambda_t * d1(p)?) / p) };
            let d = central_derivative(&g, phi, n, spec)?;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign * math::powf(phi, (n + 1) as f64) / factorial(n) * d)
        }
    }
}

/// n-th derivative by Richardson-extrapolated central differences.
fn central_derivative<F: Fn(f64) -> Result<f64>>(
    g: &F,
    x: f64,
    n: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let stencil = |h: f64| -> Result<f64> {
        let mut acc = 0.0;
        for i in 0..=n {
            let coeff = math::binomial(n, i) * if i % 2 == 0 { 1.0 } else { -1.0 };
            let offset = (n as f64 / 2.0 - i as f64) * h;
            acc += coeff * g(x + offset)?;
        }
        Ok(acc / math::powi(h, n))
    };
    let levels = spec.derivative_step.halvings as usize + 1;
    let mut table: Vec<f64> = Vec::with_capacity(levels);
    let mut h = x * spec.derivative_step.rel_step;
    for _ in 0..levels {
        table.push(stencil(h)?);
        h *= 0.5;
    }
    // table[k] holds the estimate at step h/2^k; extrapolate in h^2.
    for j in 1..levels {
        let weight = math::powi(4.0, j as u32);
        for k in (j..levels).rev() {
            table[k] = (weight * table[k] - table[k - 1]) / (weight - 1.0);
        }
    }
    Ok(table[levels - 1])
}

/// Maximum-contention-intensity estimate from a closed-form scaling law.
/// The large-cluster hypothesis of the law is flagged rather than enforced,
/// so sweeps can show where the scaling breaks down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingEstimate {
    pub lambda_bar: f64,
    pub hypothesis_ok: bool,
}

/// Two-sided bracket on the boundary multicast rate, bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBounds {
    pub lower: f64,
    pub upper: f64,
}

/// All analytic quantities for one parameter set. Construction precomputes
/// a Chebyshev table of the interference kernel over the working `phi`
/// range, so root solvers and radial averages stay cheap; the kernel is
/// immutable afterwards and safe to share read-only across threads.
pub struct AnalyticKernel {
    cfg: NetworkConfig,
    spec: QuadratureSpec,
    tight: QuadratureSpec,
    cache: PiecewiseCheb,
    cache_lo: f64,
    cache_hi: f64,
}

impl AnalyticKernel {
    pub fn new(cfg: NetworkConfig, spec: QuadratureSpec) -> Result<Self> {
        cfg.validate()?;
        spec.validate()?;
        let tight = QuadratureSpec {
            rel_tol: spec.rel_tol.min(1e-12),
            abs_tol: spec.abs_tol.min(1e-14),
            ..spec
        };
        // ln delta1(e^u, inf) over the phi range touched by the connection
        // laws (beta r^alpha, m beta r^alpha, and the derivative stencils
        // around them).
        let phi_lo = 0.9 * cfg.beta;
        let phi_hi = 1.1 * cfg.m as f64 * cfg.beta * math::powf(cfg.s, cfg.alpha);
        let failure: Cell<Option<Error>> = Cell::new(None);
        let table = {
            let f = |u: f64| match delta1(math::exp(u), f64::INFINITY, cfg.m, cfg.alpha, &tight) {
                Ok(v) => math::ln(v),
                Err(e) => {
                    failure.set(Some(e));
                    f64::NAN
                }
            };
            PiecewiseCheb::build(f, math::ln(phi_lo), math::ln(phi_hi), 5e-12)
        };
        if let Some(e) = failure.take() {
            return Err(e);
        }
        Ok(AnalyticKernel {
            cfg,
            spec,
            tight,
            cache: table?,
            cache_lo: phi_lo,
            cache_hi: phi_hi,
        })
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.cfg
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// delta1(phi, inf) through the precomputed table where possible.
    pub fn delta1_inf(&self, phi: f64) -> Result<f64> {
        if phi >= self.cache_lo && phi <= self.cache_hi {
            Ok(math::exp(self.cache.eval(math::ln(phi))))
        } else {
            delta1(phi, f64::INFINITY, self.cfg.m, self.cfg.alpha, &self.tight)
        }
    }

    /// Per-attempt connection probability of a receiver at radius r >= 1.
    pub fn connection_success(&self, lambda_t: f64, r: f64) -> Result<f64> {
        debug_assert!(r >= 1.0);
        if !(lambda_t >= 0.0) {
            return Err(Error::Domain("lambda_t must be nonnegative"));
        }
        if lambda_t == 0.0 {
            return Ok(1.0);
        }
        let cfg = &self.cfg;
        let p = if cfg.m == 1 {
            let phi = cfg.beta * math::powf(r, cfg.alpha);
            math::exp(-PI * lambda_t * self.delta1_inf(phi)?)
        } else {
            let phi = cfg.m as f64 * cfg.beta * math::powf(r, cfg.alpha);
            let d1 = |p: f64| self.delta1_inf(p);
            psi_with(cfg.m, phi, lambda_t, cfg.alpha, &self.tight, &d1)?
        };
        Ok(p.clamp(0.0, 1.0))
    }

    /// Intensity of the connected-receiver process at radius r after tau
    /// attempts (the Rayleigh branch for m = 1, the Nakagami branch above).
    pub fn lambda_c(&self, lambda_t: f64, r: f64, tau: u32) -> Result<f64> {
        if !(1.0 <= r && r <= self.cfg.s) {
            return Err(Error::Domain("radius must lie in [1, s]"));
        }
        if tau < 1 {
            return Err(Error::Domain("tau must be >= 1"));
        }
        let p = self.connection_success(lambda_t, r)?;
        Ok(self.cfg.lambda_r * (1.0 - math::powi(1.0 - p, tau)))
    }

    /// The Nakagami-branch connection intensity evaluated through the
    /// Psi-derivative machinery for any m >= 1; coincides with
    /// [`AnalyticKernel::lambda_c`] at m = 1 (pipeline-equivalence check).
    pub fn lambda_c_via_psi(&self, lambda_t: f64, r: f64, tau: u32) -> Result<f64> {
        if !(1.0 <= r && r <= self.cfg.s) {
            return Err(Error::Domain("radius must lie in [1, s]"));
        }
        if tau < 1 {
            return Err(Error::Domain("tau must be >= 1"));
        }
        let cfg = &self.cfg;
        let p = if lambda_t == 0.0 {
            1.0
        } else {
            let phi = cfg.m as f64 * cfg.beta * math::powf(r, cfg.alpha);
            let d1 = |p: f64| self.delta1_inf(p);
            psi_with(cfg.m, phi, lambda_t, cfg.alpha, &self.tight, &d1)?.clamp(0.0, 1.0)
        };
        Ok(cfg.lambda_r * (1.0 - math::powi(1.0 - p, tau)))
    }

    /// E_R[(1 - p(max(R,1)))^tau] under f_R(r) = 2r/s^2 on [0, s]. Receivers
    /// inside unit distance share the clamped r = 1 connection law, so the
    /// same event law drives analytics and simulation.
    fn mean_failure(&self, lambda_t: f64, tau: u32) -> Result<f64> {
        let s = self.cfg.s;
        let fail_at = |r: f64| -> Result<f64> {
            let p = self.connection_success(lambda_t, r)?;
            Ok(math::powi(1.0 - p, tau))
        };
        let inner = fail_at(1.0)? / (s * s);
        let outer = integrate_checked(|r| Ok(fail_at(r)? * 2.0 * r / (s * s)), 1.0, s, &self.spec)?;
        Ok((inner + outer).clamp(0.0, 1.0))
    }

    /// Exact radial average of the connected intensity, E_R[lambda_c(R, tau)].
    pub fn mean_lambda_c(&self, lambda_t: f64, tau: u32) -> Result<f64> {
        Ok(self.cfg.lambda_r * (1.0 - self.mean_failure(lambda_t, tau)?))
    }

    /// Upper bound on E_R[lambda_c(R, tau)] obtained by pushing the radial
    /// average inside the tau-th power (Hoelder; tight at tau = 1).
    pub fn mean_lambda_c_upper(&self, lambda_t: f64, tau: u32) -> Result<f64> {
        let one_try = self.mean_failure(lambda_t, 1)?;
        Ok(self.cfg.lambda_r * (1.0 - math::powi(one_try, tau)))
    }

    /// Multicast outage probability: the void probability of the
    /// disconnected-receiver process after tau attempts,
    /// 1 - exp(-pi s^2 (lambda_r - E_R[lambda_c(R, tau)])).
    pub fn outage_probability(&self, lambda_t: f64, tau: u32) -> Result<f64> {
        if !(lambda_t >= 0.0) {
            return Err(Error::Domain("lambda_t must be nonnegative"));
        }
        let fail = self.mean_failure(lambda_t, tau)?;
        Ok((-math::expm1(-self.cfg.k() * fail)).clamp(0.0, 1.0))
    }

    /// Largest transmitter intensity whose multicast outage stays at the
    /// configured epsilon, by bisection on log lambda_t (valid because the
    /// outage is monotone nondecreasing in lambda_t).
    pub fn solve_max_intensity(&self) -> Result<f64> {
        let eps = self.cfg.epsilon;
        let tau = self.cfg.tau;
        let seed = self.closed_form_max_intensity()?.lambda_bar;
        if !(seed > 0.0) || !seed.is_finite() {
            return Err(Error::Bracket("closed-form seed is not positive"));
        }

        let mut lo = seed;
        let mut guard = 0;
        while self.outage_probability(lo, tau)? > eps {
            lo /= 8.0;
            guard += 1;
            if guard > 80 {
                return Err(Error::Bracket("could not find intensity below epsilon"));
            }
        }
        let mut hi = lo.max(seed);
        guard = 0;
        while self.outage_probability(hi, tau)? < eps {
            hi *= 8.0;
            guard += 1;
            if guard > 80 {
                return Err(Error::Bracket("outage never exceeds epsilon in bracket"));
            }
        }

        for _ in 0..200 {
            let mid = math::sqrt(lo * hi);
            let out = self.outage_probability(mid, tau)?;
            if (out - eps).abs() <= 1e-4 * eps || (hi - lo) <= 1e-14 * hi {
                return Ok(mid);
            }
            if out < eps {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::Bracket("bisection failed to reach tolerance"))
    }

    /// Single-hop closed-form maximum contention intensity,
    /// eta (eps (tau+1))^(1/tau) / (pi s^2 beta^(2/alpha) k^(1/tau)) with
    /// eta the reciprocal scaling kernel at the SIR threshold.
    pub fn closed_form_max_intensity(&self) -> Result<ScalingEstimate> {
        let cfg = &self.cfg;
        let eta = 1.0 / delta1_hat(cfg.beta, cfg.a_hat, cfg.m, cfg.alpha, &self.tight)?;
        let tau = cfg.tau as f64;
        let k = cfg.k();
        let lambda_bar = eta * math::powf(cfg.epsilon * (tau + 1.0), 1.0 / tau)
            / (PI
                * cfg.s
                * cfg.s
                * math::powf(cfg.beta, 2.0 / cfg.alpha)
                * math::powf(k, 1.0 / tau));
        let hypothesis_ok = k >= math::powf(cfg.epsilon, -(tau - 1.0));
        Ok(ScalingEstimate {
            lambda_bar,
            hypothesis_ok,
        })
    }

    /// Multihop closed-form maximum contention intensity for the configured
    /// tessellation count v (reduces to the single-hop law at v = 1):
    /// eta k^(-v/tau) v^(v/tau + 1) tau^2 rho / (pi s^2 beta^(2/alpha)),
    /// rho = (eps (tau/v + 1))^(v/tau) / tau^2.
    pub fn multihop_closed_form_max_intensity(&self) -> Result<ScalingEstimate> {
        let cfg = &self.cfg;
        if cfg.v < 1 || cfg.v > cfg.tau || cfg.tau % cfg.v != 0 {
            return Err(Error::Domain("v must divide tau with 1 <= v <= tau"));
        }
        let eta = 1.0 / delta1_hat(cfg.beta, cfg.a_hat, cfg.m, cfg.alpha, &self.tight)?;
        let tau = cfg.tau as f64;
        let v = cfg.v as f64;
        let k = cfg.k();
        let rho = math::powf(cfg.epsilon * (tau / v + 1.0), v / tau) / (tau * tau);
        let lambda_bar = eta * math::powf(k, -v / tau) * math::powf(v, v / tau + 1.0) * tau * tau
            * rho
            / (PI * cfg.s * cfg.s * math::powf(cfg.beta, 2.0 / cfg.alpha));
        let hypothesis_ok = k >= v * math::powf(cfg.epsilon, -(tau / v - 1.0));
        Ok(ScalingEstimate {
            lambda_bar,
            hypothesis_ok,
        })
    }

    /// CCDF of the best fading gain over the tau attempts.
    pub fn ccdf_h_max(&self, x: f64) -> f64 {
        math::fading_max_ccdf(self.cfg.m, self.cfg.tau, x)
    }

    /// E[H_max] for the best of tau unit-mean Nakagami-m power gains.
    pub fn mean_h_max(&self) -> Result<f64> {
        let m = self.cfg.m;
        let tau = self.cfg.tau;
        let cutoff = fading_tail_cutoff(m, tau, 0.0);
        integrate(
            |h| math::fading_max_ccdf(m, tau, h),
            0.0,
            cutoff,
            &self.spec,
        )
    }

    /// E[ln I_0] of the whole-plane interference at intensity lambda_t,
    /// from the Laplace functional via ln x = int_0^inf (e^-t - e^-xt)/t dt.
    pub fn mean_ln_interference(&self, lambda_t: f64) -> Result<f64> {
        if !(lambda_t > 0.0) {
            return Err(Error::Domain("lambda_t must be positive"));
        }
        let exponent = |t: f64| -> Result<f64> { Ok(PI * lambda_t * self.delta1_inf(t)?) };
        // Near field: both exponentials stay close to 1; expm1 keeps the
        // difference exact.
        let near = integrate_checked(
            |t| Ok((math::expm1(-t) - math::expm1(-exponent(t)?)) / t),
            0.0,
            1.0,
            &self.spec,
        )?;
        let y_max = self.log_tail_cutoff(lambda_t)?;
        let far = integrate_checked(
            |y| {
                let t = math::exp(y);
                Ok(math::exp(-t) - math::exp(-exponent(t)?))
            },
            0.0,
            y_max,
            &self.spec,
        )?;
        Ok(near + far)
    }

    /// ln t beyond which exp(-pi lambda delta1(t, inf)) is negligible.
    fn log_tail_cutoff(&self, lambda_t: f64) -> Result<f64> {
        let cfg = &self.cfg;
        let d_inf = (2.0 / cfg.alpha)
            * math::powf(cfg.m as f64, -2.0 / cfg.alpha)
            * kernel_integral(0.0, f64::INFINITY, cfg.m, cfg.alpha, &self.tight)?;
        let t_star = math::powf(45.0 / (PI * lambda_t * d_inf), 0.5 * cfg.alpha);
        Ok(math::ln(t_star.max(3.0)).min(700.0))
    }

    /// Exact boundary-receiver multicast rate (bits/s/Hz),
    /// b = E[log2(1 + H_max s^-alpha / I_0)], through
    /// E[ln(1 + S/I)] = int_0^inf L_I(z) (1 - L_S(z)) / z dz with
    /// S = H_max s^-alpha.
    pub fn multicast_rate(&self, lambda_t: f64) -> Result<f64> {
        if !(lambda_t > 0.0) {
            return Err(Error::Domain("lambda_t must be positive"));
        }
        let cfg = &self.cfg;
        let w_scale = math::powf(cfg.s, -cfg.alpha);
        let inner_spec = self.spec.scaled(0.1);
        let signal_term =
            |z: f64| -> Result<f64> { one_minus_laplace_h_max(cfg.m, cfg.tau, z * w_scale, &inner_spec) };
        let shot = |z: f64| -> Result<f64> { Ok(math::exp(-PI * lambda_t * self.delta1_inf(z)?)) };
        let near = integrate_checked(|z| Ok(shot(z)? * signal_term(z)? / z), 0.0, 1.0, &self.spec)?;
        let y_max = self.log_tail_cutoff(lambda_t)?;
        let far = integrate_checked(
            |y| {
                let z = math::exp(y);
                Ok(shot(z)? * signal_term(z)?)
            },
            0.0,
            y_max,
            &self.spec,
        )?;
        Ok((near + far) / LN_2)
    }

    /// Rigorous bracket on the boundary multicast rate: the lower bound
    /// conditions on a strong fading draw, the upper bound is Jensen with
    /// the exact log-moment of the interference.
    pub fn rate_bounds(&self, lambda_t: f64) -> Result<RateBounds> {
        if !(lambda_t > 0.0) {
            return Err(Error::Domain("lambda_t must be positive"));
        }
        let cfg = &self.cfg;
        let mean_i = 2.0 * PI * lambda_t / (cfg.alpha - 2.0);
        let lower = math::ln_1p(1.0 / (PI * math::powf(cfg.s, cfg.alpha) * lambda_t))
            * self.ccdf_h_max(2.0 / (cfg.alpha - 2.0))
            / LN_2;
        let upper = (math::ln(mean_i + self.mean_h_max()? * math::powf(cfg.s, -cfg.alpha))
            - self.mean_ln_interference(lambda_t)?)
            / LN_2;
        debug_assert!(lower <= upper);
        Ok(RateBounds { lower, upper })
    }

    /// Multicast transmission capacity for a given maximum contention
    /// intensity and rate: (1/tau) b lambda_bar (1 - epsilon), bits/s/Hz/m^2.
    pub fn mtc(&self, lambda_bar: f64, b: f64) -> f64 {
        b * lambda_bar * (1.0 - self.cfg.epsilon) / self.cfg.tau as f64
    }
}

/// Upper truncation point for integrals against the H_max tail.
fn fading_tail_cutoff(m: u32, tau: u32, w: f64) -> f64 {
    let mf = m as f64;
    let poly_margin = 3.0 * (mf - 1.0) * math::ln(3.0 + mf);
    (90.0 + math::ln(1.0 + tau as f64) + poly_margin) / (mf + w)
}

/// 1 - E[exp(-w H_max)] = w int_0^inf e^{-wh} P(H_max > h) dh, positive and
/// cancellation-free.
fn one_minus_laplace_h_max(m: u32, tau: u32, w: f64, spec: &QuadratureSpec) -> Result<f64> {
    if w == 0.0 {
        return Ok(0.0);
    }
    let cutoff = fading_tail_cutoff(m, tau, w);
    let v = integrate(
        |h| math::exp(-w * h) * math::fading_max_ccdf(m, tau, h),
        0.0,
        cutoff,
        spec,
    )?;
    Ok((w * v).clamp(0.0, 1.0))
}

/// Divisors of tau in ascending order (the feasible tessellation counts).
pub fn divisors(tau: u32) -> Vec<u32> {
    (1..=tau).filter(|v| tau % v == 0).collect()
}

fn log_capacity_scale(v: f64, tau: f64, k: f64, epsilon: f64) -> f64 {
    (v / tau) * (math::ln(epsilon * (tau / v + 1.0)) - math::ln(k)) + (v / tau + 1.0) * math::ln(v)
}

/// Capacity gain (dB) of v-region multihop multicast over single hop: the
/// direct ratio of the two closed-form capacity scalings at equal tau, k
/// and epsilon. Exactly 0 dB at v = 1.
pub fn capacity_gain(v: u32, tau: u32, k: f64, epsilon: f64) -> Result<f64> {
    if tau < 1 {
        return Err(Error::Domain("tau must be >= 1"));
    }
    if v < 1 || v > tau || tau % v != 0 {
        return Err(Error::Domain("v must divide tau with 1 <= v <= tau"));
    }
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain("k must be positive and finite"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain("epsilon must lie in (0, 1)"));
    }
    let tau = tau as f64;
    let scale = log_capacity_scale(v as f64, tau, k, epsilon);
    let base = log_capacity_scale(1.0, tau, k, epsilon);
    Ok(10.0 / LN_10 * (scale - base))
}

/// Tessellation count maximizing the capacity gain, by exhaustive search
/// over the divisors of tau (the gain is unimodal, so the argmax is global).
pub fn optimize_tessellation(tau: u32, k: f64, epsilon: f64) -> Result<u32> {
    let mut best_v = 1;
    let mut best_gain = f64::NEG_INFINITY;
    for v in divisors(tau) {
        let g = capacity_gain(v, tau, k, epsilon)?;
        if g > best_gain {
            best_gain = g;
            best_v = v;
        }
    }
    Ok(best_v)
}

/// Concavity certificate of the continuous gain relaxation,
/// (1 + tau/v) sqrt((2 tau - v)/(2 tau + v)); values above 1 on
/// 1 <= v <= tau certify a unique interior optimum.
pub fn unimodality_certificate(v: u32, tau: u32) -> f64 {
    let v = v as f64;
    let tau = tau as f64;
    (1.0 + tau / v) * math::sqrt((2.0 * tau - v) / (2.0 * tau + v))
}

/// Multiplicative MTC factor of the three capacity-improvement routes:
/// interference avoidance g_a, interference suppression g_s^(2/alpha) and
/// area shrinking g_v^(1 + 1/tau).
pub fn gain_scaling_factor(alpha: f64, tau: u32, g_a: f64, g_s: f64, g_v: f64) -> Result<f64> {
    if !(alpha > 2.0) {
        return Err(Error::Domain("alpha must exceed 2"));
    }
    if tau < 1 {
        return Err(Error::Domain("tau must be >= 1"));
    }
    if !(g_a >= 1.0 && g_s >= 1.0 && g_v >= 1.0) {
        return Err(Error::Domain("gain parameters must be >= 1"));
    }
    Ok(g_a * math::powf(g_s, 2.0 / alpha) * math::powf(g_v, 1.0 + 1.0 / tau as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn config() -> NetworkConfig {
        NetworkConfig {
            lambda_t: 0.001,
            lambda_r: 0.1,
            s: 5.0,
            alpha: 4.0,
            beta: 1.0,
            m: 1,
            epsilon: 0.1,
            tau: 1,
            v: 1,
            window_radius: 50.0,
            a_hat: 1.0,
        }
    }

    #[test]
    fn delta1_closed_form_alpha_four() {
        // sqrt(phi) atan(sqrt(phi)) for m = 1, alpha = 4.
        for &phi in &[0.3, 1.0, 3.0, 12.0, 250.0] {
            let got = delta1(phi, f64::INFINITY, 1, 4.0, &spec()).unwrap();
            let want = math::sqrt(phi) * math::atan(math::sqrt(phi));
            assert!((got / want - 1.0).abs() < 1e-10, "phi={phi} got={got}");
        }
    }

    #[test]
    fn delta1_vanishes_at_unit_radius() {
        for &phi in &[0.5, 2.0, 9.0] {
            assert!(delta1(phi, 1.0, 2, 3.5, &spec()).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn delta1_domain_errors() {
        assert!(delta1(1.0, 0.8, 1, 4.0, &spec()).is_err());
        assert!(delta1(0.0, 2.0, 1, 4.0, &spec()).is_err());
        assert!(delta1(-3.0, f64::INFINITY, 1, 4.0, &spec()).is_err());
        assert!(delta1(1.0, f64::INFINITY, 0, 4.0, &spec()).is_err());
        assert!(delta1(1.0, f64::INFINITY, 1, 2.0, &spec()).is_err());
    }

    #[test]
    fn delta1_monotone_in_phi_and_r() {
        let s = spec();
        let mut prev = 0.0;
        for i in 1..=20 {
            let phi = 0.25 * i as f64;
            let d = delta1(phi, f64::INFINITY, 2, 3.0, &s).unwrap();
            assert!(d >= prev);
            prev = d;
        }
        let mut prev = 0.0;
        for i in 1..=20 {
            let r = 1.0 + 0.5 * i as f64;
            let d = delta1(2.0, r, 2, 3.0, &s).unwrap();
            assert!(d >= prev);
            prev = d;
        }
        let whole_plane = delta1(2.0, f64::INFINITY, 2, 3.0, &s).unwrap();
        assert!(prev < whole_plane);
    }

    #[test]
    fn delta2_domain_and_limits() {
        let s = spec();
        // Coincident limits.
        assert!(delta2(0.5, 1.0, 1, 4.0, &s).unwrap().abs() < 1e-14);
        // phi -> 0+ drives the value to zero.
        assert!(delta2(1e-10, 2.0, 1, 4.0, &s).unwrap() < 1e-9);
        // Stated domain (0, m r^alpha).
        assert!(delta2(0.0, 2.0, 1, 4.0, &s).is_err());
        assert!(delta2(16.0, 2.0, 1, 4.0, &s).is_err());
        assert!(delta2(-1.0, 2.0, 1, 4.0, &s).is_err());
        assert!(delta2(0.5, f64::INFINITY, 1, 4.0, &s).is_err());
        // Inside the stated domain but past the inner-cutoff pole the
        // integral diverges; that surfaces as a numerical failure.
        assert!(matches!(
            delta2(2.0, 2.0, 1, 4.0, &s),
            Err(Error::Quadrature(_))
        ));
    }

    #[test]
    fn laplace_interference_basics() {
        let s = spec();
        assert_eq!(
            laplace_interference(0.0, 0.3, f64::INFINITY, 1, 4.0, &s).unwrap(),
            1.0
        );
        // Choose lambda so the exponent is ln 2.
        let d = delta1(1.0, f64::INFINITY, 1, 4.0, &s).unwrap();
        let lambda = core::f64::consts::LN_2 / (PI * d);
        let l = laplace_interference(1.0, lambda, f64::INFINITY, 1, 4.0, &s).unwrap();
        assert!((l - 0.5).abs() < 1e-10);
        // Decreasing in phi and in lambda.
        let l2 = laplace_interference(2.0, lambda, f64::INFINITY, 1, 4.0, &s).unwrap();
        let l3 = laplace_interference(1.0, 2.0 * lambda, f64::INFINITY, 1, 4.0, &s).unwrap();
        assert!(l2 < l && l3 < l);
        assert!(l > 0.0 && l <= 1.0);
    }

    #[test]
    fn psi_reduces_to_exponential_for_rayleigh() {
        let s = spec();
        let lam = 0.02;
        for &phi in &[0.7, 3.0, 40.0] {
            let psi = psi_derivative(1, phi, lam, 4.0, &s).unwrap();
            let want = math::exp(-PI * lam * math::sqrt(phi) * math::atan(math::sqrt(phi)));
            assert!((psi - want).abs() < 1e-10);
        }
    }

    #[test]
    fn psi_is_one_without_interference() {
        let s = spec();
        for m in 1..=5 {
            assert_eq!(psi_derivative(m, 2.0, 0.0, 4.0, &s).unwrap(), 1.0);
        }
    }

    #[test]
    fn delta1_derivative_closed_form() {
        // m = 1, alpha = 4: d/dphi [sqrt(phi) atan sqrt(phi)]
        //                 = atan(sqrt(phi))/(2 sqrt(phi)) + 1/(2 (1+phi)).
        let s = spec();
        for &phi in &[0.5, 1.0, 4.0, 30.0] {
            let got = delta1_derivative(phi, 1, 4.0, &s).unwrap();
            let sp = math::sqrt(phi);
            let want = math::atan(sp) / (2.0 * sp) + 0.5 / (1.0 + phi);
            assert!((got / want - 1.0).abs() < 1e-10, "phi={phi}");
        }
    }

    #[test]
    fn kernel_connection_probability_monotone_in_radius() {
        let kernel = AnalyticKernel::new(config(), spec()).unwrap();
        let mut prev = 1.0;
        for i in 0..=20 {
            let r = 1.0 + 4.0 * i as f64 / 20.0;
            let p = kernel.connection_success(2e-3, r).unwrap();
            assert!(p <= prev + 1e-12);
            assert!((0.0..=1.0).contains(&p));
            prev = p;
        }
    }

    #[test]
    fn lambda_c_edge_cases() {
        let kernel = AnalyticKernel::new(config(), spec()).unwrap();
        // No interference: every receiver connects.
        let lc = kernel.lambda_c(0.0, 3.0, 1).unwrap();
        assert_eq!(lc, kernel.config().lambda_r);
        // Exponent inversion: pi lambda delta1 = ln 2 at tau = 1 halves it.
        let r: f64 = 2.0;
        let d = delta1(r.powi(4), f64::INFINITY, 1, 4.0, &spec()).unwrap();
        let lam = core::f64::consts::LN_2 / (PI * d);
        let lc = kernel.lambda_c(lam, r, 1).unwrap();
        assert!((lc / kernel.config().lambda_r - 0.5).abs() < 1e-9);
        // tau = 2 stacks two independent attempts.
        let lc2 = kernel.lambda_c(lam, r, 2).unwrap();
        assert!((lc2 / kernel.config().lambda_r - 0.75).abs() < 1e-9);
        // Domain.
        assert!(kernel.lambda_c(lam, 0.5, 1).is_err());
        assert!(kernel.lambda_c(lam, 6.0, 1).is_err());
    }

    #[test]
    fn outage_zero_without_interference() {
        let kernel = AnalyticKernel::new(config(), spec()).unwrap();
        assert_eq!(kernel.outage_probability(0.0, 1).unwrap(), 0.0);
    }

    #[test]
    fn outage_monotonicity_grid() {
        let kernel = AnalyticKernel::new(config(), spec()).unwrap();
        // Nondecreasing in lambda_t (20 points) and nonincreasing in tau (5).
        for tau in 1..=5u32 {
            let mut prev = 0.0;
            for i in 1..=20 {
                let lam = 1e-5 * math::powf(10.0, 3.0 * i as f64 / 20.0);
                let p = kernel.outage_probability(lam, tau).unwrap();
                assert!(p >= prev - 1e-12, "tau={tau} i={i}");
                prev = p;
            }
        }
        for i in 1..=6 {
            let lam = 3e-4 * i as f64;
            let mut prev = 1.0;
            for tau in 1..=5u32 {
                let p = kernel.outage_probability(lam, tau).unwrap();
                assert!(p <= prev + 1e-12);
                prev = p;
            }
        }
    }

    #[test]
    fn hoelder_upper_bound_dominates() {
        let kernel = AnalyticKernel::new(config(), spec()).unwrap();
        for tau in [1u32, 3] {
            for &lam in &[1e-4, 1e-3, 1e-2] {
                let exact = kernel.mean_lambda_c(lam, tau).unwrap();
                let upper = kernel.mean_lambda_c_upper(lam, tau).unwrap();
                assert!(upper >= exact - 1e-12, "tau={tau} lam={lam}");
                if tau == 1 {
                    assert!((upper - exact).abs() < 1e-12);
                } else {
                    assert!(upper > exact);
                }
            }
        }
        // lambda_t = 0: both collapse to lambda_r.
        assert_eq!(
            kernel.mean_lambda_c_upper(0.0, 3).unwrap(),
            kernel.config().lambda_r
        );
        assert_eq!(
            kernel.mean_lambda_c(0.0, 3).unwrap(),
            kernel.config().lambda_r
        );
    }

    #[test]
    fn solver_hits_the_outage_target() {
        let kernel = AnalyticKernel::new(config(), spec()).unwrap();
        let root = kernel.solve_max_intensity().unwrap();
        let out = kernel.outage_probability(root, 1).unwrap();
        let eps = kernel.config().epsilon;
        assert!(out >= eps * (1.0 - 1e-3) && out <= eps * (1.0 + 1e-3));
        // Halving epsilon shrinks the root.
        let mut cfg = config();
        cfg.epsilon = 0.05;
        let kernel2 = AnalyticKernel::new(cfg, spec()).unwrap();
        assert!(kernel2.solve_max_intensity().unwrap() < root);
    }

    #[test]
    fn closed_form_eta_matches_rayleigh_alpha_four() {
        // m = 1, a_hat = 1: eta = 1/delta1(beta, inf); at beta = 1 it is 4/pi.
        let kernel = AnalyticKernel::new(config(), spec()).unwrap();
        let est = kernel.closed_form_max_intensity().unwrap();
        let eta = 4.0 / PI;
        let cfg = kernel.config();
        let want = eta * (cfg.epsilon * 2.0) / (PI * 25.0 * cfg.k());
        assert!((est.lambda_bar / want - 1.0).abs() < 1e-10);
    }

    #[test]
    fn closed_form_scales_as_k_to_minus_inv_tau() {
        let mut cfg = config();
        cfg.tau = 3;
        let base = AnalyticKernel::new(cfg.clone(), spec())
            .unwrap()
            .closed_form_max_intensity()
            .unwrap()
            .lambda_bar;
        cfg.lambda_r *= 2.0;
        let doubled = AnalyticKernel::new(cfg, spec())
            .unwrap()
            .closed_form_max_intensity()
            .unwrap()
            .lambda_bar;
        let want = base * math::powf(2.0, -1.0 / 3.0);
        assert!((doubled / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multihop_closed_form_reductions() {
        let mut cfg = config();
        cfg.tau = 6;
        cfg.v = 1;
        let kernel = AnalyticKernel::new(cfg.clone(), spec()).unwrap();
        let single = kernel.closed_form_max_intensity().unwrap().lambda_bar;
        let multi = kernel
            .multihop_closed_form_max_intensity()
            .unwrap()
            .lambda_bar;
        assert!((multi / single - 1.0).abs() < 1e-12);

        // v = tau reduces to 2 eps eta tau^2 / (pi s^2 beta^(2/alpha) k).
        cfg.v = 6;
        let kernel = AnalyticKernel::new(cfg.clone(), spec()).unwrap();
        let got = kernel
            .multihop_closed_form_max_intensity()
            .unwrap()
            .lambda_bar;
        let eta = 1.0 / delta1_hat(cfg.beta, cfg.a_hat, cfg.m, cfg.alpha, &spec()).unwrap();
        let tau = cfg.tau as f64;
        let want = 2.0 * cfg.epsilon * eta * tau * tau
            / (PI * cfg.s * cfg.s * math::powf(cfg.beta, 2.0 / cfg.alpha) * cfg.k());
        assert!((got / want - 1.0).abs() < 1e-12);

        // Invalid tessellation count is rejected at construction.
        cfg.v = 4;
        assert!(AnalyticKernel::new(cfg, spec()).is_err());
    }

    #[test]
    fn capacity_gain_zero_at_v_one_and_unimodal() {
        assert_eq!(capacity_gain(1, 20, 100.0, 0.1).unwrap(), 0.0);
        let gains: Vec<f64> = divisors(20)
            .into_iter()
            .map(|v| capacity_gain(v, 20, 100.0, 0.1).unwrap())
            .collect();
        let signs: Vec<bool> = gains.windows(2).map(|w| w[1] > w[0]).collect();
        let flips = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert!(flips <= 1, "gain sequence not unimodal: {gains:?}");
        assert!(capacity_gain(3, 20, 100.0, 0.1).is_err());
        assert!(capacity_gain(0, 20, 100.0, 0.1).is_err());
        assert!(capacity_gain(2, 20, 100.0, 1.5).is_err());
    }

    #[test]
    fn optimizer_returns_exhaustive_argmax() {
        let v_star = optimize_tessellation(20, 100.0, 0.1).unwrap();
        let best = capacity_gain(v_star, 20, 100.0, 0.1).unwrap();
        for v in divisors(20) {
            assert!(capacity_gain(v, 20, 100.0, 0.1).unwrap() <= best);
        }
        assert!(v_star > 1 && v_star < 20);
        assert_eq!(optimize_tessellation(1, 100.0, 0.1).unwrap(), 1);
    }

    #[test]
    fn certificate_exceeds_one_on_grid() {
        for tau in [1u32, 2, 5, 20, 50] {
            for v in divisors(tau) {
                assert!(unimodality_certificate(v, tau) > 1.0, "v={v} tau={tau}");
            }
        }
    }

    #[test]
    fn gain_factor_ordering() {
        // Equal gains: shrinking > avoidance > suppression for alpha > 2.
        let alpha = 3.0;
        let g = 2.5;
        let avoid = gain_scaling_factor(alpha, 4, g, 1.0, 1.0).unwrap();
        let suppress = gain_scaling_factor(alpha, 4, 1.0, g, 1.0).unwrap();
        let shrink = gain_scaling_factor(alpha, 4, 1.0, 1.0, g).unwrap();
        assert!(shrink > avoid && avoid > suppress);
        assert_eq!(gain_scaling_factor(alpha, 4, 1.0, 1.0, 1.0).unwrap(), 1.0);
        assert!(gain_scaling_factor(alpha, 4, 0.5, 1.0, 1.0).is_err());
        // Avoidance over suppression is g^(1 - 2/alpha) > 1.
        assert!((avoid / suppress - math::powf(g, 1.0 - 2.0 / alpha)).abs() < 1e-12);
    }

    #[test]
    fn mtc_linearity() {
        let kernel = AnalyticKernel::new(config(), spec()).unwrap();
        let c1 = kernel.mtc(2e-3, 1.5);
        let c2 = kernel.mtc(2e-3, 3.0);
        assert!((c2 / c1 - 2.0).abs() < 1e-12);
        // epsilon -> 0, tau = 1 gives b * lambda_bar.
        let mut cfg = config();
        cfg.epsilon = 1e-12;
        let kernel = AnalyticKernel::new(cfg, spec()).unwrap();
        assert!((kernel.mtc(2e-3, 1.5) / (1.5 * 2e-3) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rate_bounds_are_ordered_and_collapse_at_high_intensity() {
        let kernel = AnalyticKernel::new(config(), spec()).unwrap();
        let b = kernel.rate_bounds(1e-3).unwrap();
        assert!(b.lower >= 0.0 && b.lower <= b.upper);
        // tau = 1, m = 1: CCDF of H_max at 2/(alpha-2) = 1 is e^-1.
        assert!((kernel.ccdf_h_max(1.0) - math::exp(-1.0)).abs() < 1e-12);
        // log(1 + .) terms vanish as lambda_t grows.
        let big = kernel.rate_bounds(1e3).unwrap();
        assert!(big.lower < 1e-4);
        assert!(big.upper < 0.5);
        assert!(big.lower <= big.upper);
    }

    #[test]
    fn mean_h_max_harmonic_for_rayleigh() {
        let mut cfg = config();
        cfg.tau = 4;
        let kernel = AnalyticKernel::new(cfg, spec()).unwrap();
        let want = 1.0 + 0.5 + 1.0 / 3.0 + 0.25;
        assert!((kernel.mean_h_max().unwrap() / want - 1.0).abs() < 1e-9);
    }

    #[test]
    fn divisor_enumeration() {
        assert_eq!(divisors(20), alloc::vec![1, 2, 4, 5, 10, 20]);
        assert_eq!(divisors(1), alloc::vec![1]);
    }
}
