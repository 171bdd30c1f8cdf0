//! Geometric and channel primitives: the network configuration, point
//! process sampling, path loss, Nakagami fading, SIR evaluation and the
//! equal-area cluster tessellation.

use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::rand_core::RngCore;

use crate::math;
use crate::rng;
use crate::{Error, Result};

/// A planar location or displacement.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub fn dist_sq(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        math::sqrt(self.x * self.x + self.y * self.y)
    }
}

/// Whether a link carries the desired signal or interference. The power-law
/// gain saturates inside unit distance: a desired link is clamped to gain 1
/// (receivers closer than the reference distance stay decodable) while an
/// interference link keeps the literal zero of the bounded model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkRole {
    Desired,
    Interference,
}

/// Path gain over distance `d` with exponent `alpha`.
pub fn path_loss(d: f64, alpha: f64, role: LinkRole) -> Result<f64> {
    if !(d >= 0.0) {
        return Err(Error::Domain("distance must be nonnegative"));
    }
    Ok(if d >= 1.0 {
        math::powf(d, -alpha)
    } else {
        match role {
            LinkRole::Desired => 1.0,
            LinkRole::Interference => 0.0,
        }
    })
}

#[inline]
pub(crate) fn interference_gain_sq(dist_sq: f64, alpha: f64) -> f64 {
    if dist_sq >= 1.0 {
        math::powf(dist_sq, -0.5 * alpha)
    } else {
        0.0
    }
}

/// One issue found while validating a [`NetworkConfig`], tagged with the
/// offending field so front ends can aggregate reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigIssue {
    pub field: &'static str,
    pub message: String,
}

/// Full parameter set of the clustered network model.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    /// Transmitter (cluster) intensity, nodes per unit area.
    pub lambda_t: f64,
    /// Intended-receiver intensity inside a cluster.
    pub lambda_r: f64,
    /// Cluster radius (> 1).
    pub s: f64,
    /// Path-loss exponent (> 2).
    pub alpha: f64,
    /// SIR decoding threshold, linear scale.
    pub beta: f64,
    /// Nakagami shape (positive integer; 1 = Rayleigh).
    pub m: u32,
    /// Multicast outage budget in (0, 1).
    pub epsilon: f64,
    /// Decoding-delay budget: total transmission attempts.
    pub tau: u32,
    /// Tessellation count (divides tau; 1 = single hop).
    pub v: u32,
    /// Simulation window radius.
    pub window_radius: f64,
    /// Inner cutoff used by the scaling-law kernel, in [0, 1].
    pub a_hat: f64,
}

impl NetworkConfig {
    /// Average number of intended receivers per cluster, k = pi s^2 lambda_r.
    #[inline]
    pub fn k(&self) -> f64 {
        core::f64::consts::PI * self.s * self.s * self.lambda_r
    }

    /// Window radius keeping the expected interference beyond the window
    /// under 1e-4: max(10 s, (2 pi lambda_t / ((alpha-2) 1e-4))^(1/(alpha-2))).
    pub fn default_window_radius(lambda_t: f64, s: f64, alpha: f64) -> f64 {
        let tail_budget = 1e-4;
        let from_tail = if lambda_t > 0.0 {
            math::powf(
                2.0 * core::f64::consts::PI * lambda_t / ((alpha - 2.0) * tail_budget),
                1.0 / (alpha - 2.0),
            )
        } else {
            0.0
        };
        (10.0 * s).max(from_tail)
    }

    /// Expected interference from transmitters beyond the window; added back
    /// to every sampled interference sum so the truncated window only drops
    /// the (negligible) far-field fluctuation, not its mean.
    pub fn interference_tail_mean(&self) -> f64 {
        Self::tail_mean(self.lambda_t, self.window_radius, self.alpha)
    }

    pub(crate) fn tail_mean(lambda_t: f64, window_radius: f64, alpha: f64) -> f64 {
        if lambda_t <= 0.0 {
            return 0.0;
        }
        2.0 * core::f64::consts::PI * lambda_t * math::powf(window_radius, 2.0 - alpha)
            / (alpha - 2.0)
    }

    /// Collect every constraint violation (empty means valid).
    pub fn issues(&self) -> Vec<ConfigIssue> {
        let mut out = Vec::new();
        let mut push = |field: &'static str, message: String| {
            out.push(ConfigIssue { field, message });
        };
        if !(self.lambda_t >= 0.0) || !self.lambda_t.is_finite() {
            push("lambda_t", String::from("lambda_t must be finite and >= 0"));
        }
        if !(self.lambda_r >= 0.0) || !self.lambda_r.is_finite() {
            push("lambda_r", String::from("lambda_r must be finite and >= 0"));
        }
        if !(self.s > 1.0) || !self.s.is_finite() {
            push("s", String::from("s must exceed 1"));
        }
        if !(self.alpha > 2.0) || !self.alpha.is_finite() {
            push("alpha", String::from("alpha must exceed 2"));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            push("beta", String::from("beta must be positive"));
        }
        if self.m < 1 {
            push("m", String::from("m must be a positive integer"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            push("epsilon", String::from("epsilon must lie in (0, 1)"));
        }
        if self.tau < 1 {
            push("tau", String::from("tau must be a positive integer"));
        }
        if self.v < 1 || self.v > self.tau.max(1) {
            push("v", String::from("v must satisfy 1 <= v <= tau"));
        } else if self.tau >= 1 && self.tau % self.v != 0 {
            push("v", String::from("v must divide tau"));
        }
        if !(self.window_radius > self.s) || !self.window_radius.is_finite() {
            push(
                "window_radius",
                String::from("window_radius must exceed the cluster radius"),
            );
        }
        if !(0.0..=1.0).contains(&self.a_hat) {
            push("a_hat", String::from("a_hat must lie in [0, 1]"));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.issues().is_empty() {
            Ok(())
        } else {
            Err(Error::Domain("invalid network configuration"))
        }
    }
}

/// One sampled network: the typical transmitter at the origin, its intended
/// receivers inside the cluster disk, and the interfering transmitters
/// inside the window.
#[derive(Debug, Clone)]
pub struct NetworkRealization {
    pub receivers: Vec<Point>,
    pub interferers: Vec<Point>,
}

impl NetworkRealization {
    #[inline]
    pub fn typical_tx(&self) -> Point {
        Point::ORIGIN
    }
}

/// Sample the receiver and interferer point processes for one trial.
pub fn sample_network(config: &NetworkConfig, rng: &mut impl RngCore) -> NetworkRealization {
    NetworkRealization {
        receivers: sample_disk_ppp(rng, config.lambda_r, config.s),
        interferers: sample_disk_ppp(rng, config.lambda_t, config.window_radius),
    }
}

pub(crate) fn sample_disk_ppp(rng: &mut impl RngCore, intensity: f64, radius: f64) -> Vec<Point> {
    let mean = intensity * core::f64::consts::PI * radius * radius;
    let n = rng::poisson(rng, mean);
    (0..n).map(|_| rng::point_in_disk(rng, radius)).collect()
}

/// One unit-mean Nakagami-m power gain: Gamma(m, rate m), drawn as the
/// normalized sum of m standard exponentials (exact for integer shape).
pub fn sample_fading_power(m: u32, rng: &mut impl RngCore) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain("Nakagami shape m must be >= 1"));
    }
    let mut sum = 0.0;
    for _ in 0..m {
        sum += rng::exponential(rng);
    }
    Ok(sum / m as f64)
}

/// Aggregate interference at `location` from `interferers` with per-link
/// fading gains (`fading` aligned with `interferers`).
pub fn interference_at(
    location: Point,
    interferers: &[Point],
    fading: &[f64],
    alpha: f64,
) -> f64 {
    debug_assert_eq!(interferers.len(), fading.len());
    let mut sum = 0.0;
    for (p, h) in interferers.iter().zip(fading) {
        sum += h * interference_gain_sq(location.dist_sq(*p), alpha);
    }
    sum
}

/// SIR at a receiver served by the typical transmitter at the origin.
/// Returns the infinity sentinel when the interference sum is exactly zero.
pub fn sir_at(
    receiver: Point,
    interferers: &[Point],
    fading_sig: f64,
    fading_int: &[f64],
    alpha: f64,
) -> f64 {
    sir_from(
        Point::ORIGIN,
        receiver,
        interferers,
        fading_sig,
        fading_int,
        alpha,
        0.0,
    )
}

/// SIR for an arbitrary transmitter position with an optional deterministic
/// extra interference term (the far-field window compensation).
pub fn sir_from(
    tx: Point,
    receiver: Point,
    interferers: &[Point],
    fading_sig: f64,
    fading_int: &[f64],
    alpha: f64,
    extra_interference: f64,
) -> f64 {
    let d = math::sqrt(receiver.dist_sq(tx));
    let gain = if d >= 1.0 { math::powf(d, -alpha) } else { 1.0 };
    let denom = interference_at(receiver, interferers, fading_int, alpha) + extra_interference;
    if denom == 0.0 {
        return f64::INFINITY;
    }
    fading_sig * gain / denom
}

/// Equal-area tessellation of the cluster disk: a central disk of area
/// pi s^2 / v plus v-1 equal-angle sectors of the remaining annulus, visited
/// in index order (the source region first).
#[derive(Debug, Clone)]
pub struct Tessellation {
    v: u32,
    s: f64,
    core_radius: f64,
    regions: Vec<Region>,
}

/// Geometric descriptor of one tessellated region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Disk {
        radius: f64,
    },
    Sector {
        r_inner: f64,
        r_outer: f64,
        theta_start: f64,
        theta_end: f64,
    },
}

impl Region {
    pub fn area(&self) -> f64 {
        match *self {
            Region::Disk { radius } => core::f64::consts::PI * radius * radius,
            Region::Sector {
                r_inner,
                r_outer,
                theta_start,
                theta_end,
            } => 0.5 * (theta_end - theta_start) * (r_outer * r_outer - r_inner * r_inner),
        }
    }
}

/// Partition the disk of radius `s` into `v` equal-area regions.
pub fn tessellate(s: f64, v: u32) -> Result<Tessellation> {
    if v < 1 {
        return Err(Error::Domain("tessellation count v must be >= 1"));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain("cluster radius must be positive"));
    }
    let core_radius = s / math::sqrt(v as f64);
    let mut regions = Vec::with_capacity(v as usize);
    regions.push(Region::Disk {
        radius: core_radius,
    });
    if v > 1 {
        let step = 2.0 * core::f64::consts::PI / (v - 1) as f64;
        for i in 0..(v - 1) {
            regions.push(Region::Sector {
                r_inner: core_radius,
                r_outer: s,
                theta_start: i as f64 * step,
                theta_end: (i + 1) as f64 * step,
            });
        }
    }
    Ok(Tessellation {
        v,
        s,
        core_radius,
        regions,
    })
}

impl Tessellation {
    #[inline]
    pub fn count(&self) -> u32 {
        self.v
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Index (0-based, equal to the visit order) of the region containing a
    /// point of the cluster disk.
    pub fn region_of(&self, p: Point) -> usize {
        let r = p.norm();
        if self.v == 1 || r <= self.core_radius {
            return 0;
        }
        let mut theta = math::atan2(p.y, p.x);
        if theta < 0.0 {
            theta += 2.0 * core::f64::consts::PI;
        }
        let step = 2.0 * core::f64::consts::PI / (self.v - 1) as f64;
        let idx = (theta / step) as usize;
        1 + idx.min(self.v as usize - 2)
    }

    #[inline]
    pub fn cluster_radius(&self) -> f64 {
        self.s
    }
}
