//! Scalar math shims and the few special functions the model needs.
//!
//! The crate is `no_std`, so `f64` transcendentals are routed through `libm`.

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn log10(x: f64) -> f64 {
    libm::log10(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn atan(x: f64) -> f64 {
    libm::atan(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

/// Binomial coefficient C(n, k) as f64; n stays small (Nakagami shape).
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// CDF of a Gamma(shape = m, rate = 1) variable at `x`, for integer shape:
/// P(m, x) = 1 - e^{-x} * sum_{j<m} x^j / j!.
pub fn gamma_cdf_int(m: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..m {
        term *= x / j as f64;
        sum += term;
    }
    let cdf = 1.0 - exp(-x) * sum;
    cdf.clamp(0.0, 1.0)
}

/// CDF of the unit-mean fading power gain H ~ Gamma(m, rate m).
#[inline]
pub fn fading_cdf(m: u32, h: f64) -> f64 {
    gamma_cdf_int(m, m as f64 * h)
}

/// CCDF of the maximum of `tau` i.i.d. fading power gains.
pub fn fading_max_ccdf(m: u32, tau: u32, h: f64) -> f64 {
    let f = fading_cdf(m, h);
    1.0 - powi(f, tau)
}

/// Integer power by squaring (exponents are attempt counts, always small).
pub fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(1, 0), 1.0);
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(5, 5), 1.0);
        assert_eq!(binomial(3, 7), 0.0);
    }

    #[test]
    fn gamma_cdf_matches_exponential_for_shape_one() {
        for &x in &[0.1, 1.0, 3.5] {
            let expected = 1.0 - exp(-x);
            assert!((gamma_cdf_int(1, x) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_cdf_is_monotone_and_bounded() {
        let mut prev = 0.0;
        for i in 0..200 {
            let x = i as f64 * 0.1;
            let c = gamma_cdf_int(4, x);
            assert!((0.0..=1.0).contains(&c));
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn powi_matches_powf() {
        for n in 0..12u32 {
            assert!((powi(0.87, n) - powf(0.87, n as f64)).abs() < 1e-14);
        }
    }
}
