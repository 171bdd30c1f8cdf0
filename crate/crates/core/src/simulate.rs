//! Deterministic Monte Carlo engine: outage, connection-profile, rate and
//! maximum-contention-intensity estimators plus the cluster-duality void
//! test.
//!
//! Every estimate is a pure function of `(master_seed, trials, config)`.
//! Trials draw from counter-based substreams keyed by
//! `(master_seed, trial, slot)` and are grouped into fixed-size blocks;
//! workers may execute blocks in any order because the reduction folds
//! block partials in block-index order. Integer counts and per-block
//! partial sums therefore reproduce bit-identically for any worker count.
//!
//! By default each receiver sees its own independent interference
//! realization per attempt, matching the independently-thinned
//! connected-receiver law behind the analytic outage formula (its void
//! probability multiplies per-receiver marginals). Setting
//! [`TrialPlan::shared_interference_field`] instead exposes all receivers
//! to one common field per attempt, which measures the spatial correlation
//! the thinned model neglects; likewise
//! [`TrialPlan::resample_interferers_per_slot`] = false freezes interferer
//! positions across a cluster's attempts to measure the neglected temporal
//! correlation.

use alloc::vec::Vec;

use rand_chacha::rand_core::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::analytic::AnalyticKernel;
use crate::math;
use crate::model::{sample_disk_ppp, NetworkConfig, Point};
use crate::quad::QuadratureSpec;
use crate::rng::{derive_seed, exponential, point_in_disk, poisson, substream, uniform};
use crate::{Error, Result};

/// Trials per scheduling block; fixed so that results never depend on how
/// blocks are spread over workers.
pub const TRIALS_PER_BLOCK: u64 = 250;

/// How a batch of independent blocks is executed. The serial executor runs
/// them in order; a thread-pool implementation may run them in any order
/// provided the returned vector is indexed by block.
pub trait Executor {
    fn run_blocks<T, F>(&self, blocks: u64, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync;
}

/// In-order single-threaded execution.
#[derive(Debug, Clone, Copy, Default)]
pub struct SerialExecutor;

impl Executor for SerialExecutor {
    fn run_blocks<T, F>(&self, blocks: u64, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync,
    {
        (0..blocks).map(job).collect()
    }
}

/// Reproducibility contract for one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialPlan {
    pub master_seed: u64,
    pub trials: u64,
    /// Fresh interferer positions on every transmission attempt (matches
    /// the temporal-independence assumption of the connection law); false
    /// keeps positions fixed per cluster with fresh fading only.
    pub resample_interferers_per_slot: bool,
    /// One common interference field for all receivers of an attempt
    /// instead of independent per-receiver realizations.
    pub shared_interference_field: bool,
    /// Advisory worker count for executors; estimates never depend on it.
    pub worker_count: u32,
}

impl TrialPlan {
    pub fn new(master_seed: u64, trials: u64) -> Self {
        TrialPlan {
            master_seed,
            trials,
            resample_interferers_per_slot: true,
            shared_interference_field: false,
            worker_count: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Domain("trials must be positive"));
        }
        Ok(())
    }

    fn blocks(&self) -> u64 {
        self.trials.div_ceil(TRIALS_PER_BLOCK)
    }

    fn block_range(&self, block: u64) -> core::ops::Range<u64> {
        let lo = block * TRIALS_PER_BLOCK;
        lo..(lo + TRIALS_PER_BLOCK).min(self.trials)
    }
}

/// Frequency estimate with its binomial standard error and 95% interval
/// (clipped to [0, 1]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub std_err: f64,
    pub ci95: (f64, f64),
}

impl OutageEstimate {
    fn from_counts(events: u64, trials: u64) -> Self {
        let p = events as f64 / trials as f64;
        let se = math::sqrt(p * (1.0 - p) / trials as f64);
        OutageEstimate {
            p_hat: p,
            trials,
            std_err: se,
            ci95: ((p - 1.96 * se).max(0.0), (p + 1.96 * se).min(1.0)),
        }
    }
}

/// Mean estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub trials: u64,
}

// Slot layout inside one trial: geometry first, then the fixed-position
// stream and per-attempt streams of the shared-field mode, then one stream
// per (receiver, attempt) pair, then relay elections.
const SLOT_GEOMETRY: u64 = 0;
const SLOT_SHARED_POSITIONS: u64 = 1;
const SLOT_ATTEMPT_BASE: u64 = 2;

fn shared_attempt_slot(t: u32) -> u64 {
    SLOT_ATTEMPT_BASE + t as u64
}

fn receiver_slot(tau: u32, receiver: usize, attempt: u32) -> u64 {
    // attempt 0 is the receiver's fixed-position stream.
    SLOT_ATTEMPT_BASE + tau as u64 + 2 + receiver as u64 * (tau as u64 + 1) + attempt as u64
}

fn relay_slot(region: usize) -> u64 {
    0x4000_0000_0000_0000u64 + region as u64
}

#[inline]
fn desired_gain(dist: f64, alpha: f64) -> f64 {
    if dist >= 1.0 {
        math::powf(dist, -alpha)
    } else {
        1.0
    }
}

#[inline]
fn interference_gain(dist_sq: f64, alpha: f64) -> f64 {
    if dist_sq >= 1.0 {
        math::powf(dist_sq, -0.5 * alpha)
    } else {
        0.0
    }
}

#[inline]
fn fading(m: u32, rng: &mut impl RngCore) -> f64 {
    let mut sum = 0.0;
    for _ in 0..m {
        sum += exponential(rng);
    }
    sum / m as f64
}

/// Draw one interference value at `at`: a fresh Poisson field when
/// `positions` is None, otherwise fresh per-link fading against the fixed
/// `positions`. The far-field mean `tail` is always added.
fn draw_interference(
    cfg: &NetworkConfig,
    rng: &mut ChaCha8Rng,
    positions: Option<&[Point]>,
    at: Point,
    tail: f64,
) -> f64 {
    let mut sum = tail;
    match positions {
        Some(points) => {
            for p in points {
                let h = fading(cfg.m, rng);
                sum += h * interference_gain(at.dist_sq(*p), cfg.alpha);
            }
        }
        None => {
            let mean = cfg.lambda_t * core::f64::consts::PI * cfg.window_radius * cfg.window_radius;
            let n = poisson(rng, mean);
            for _ in 0..n {
                let p = point_in_disk(rng, cfg.window_radius);
                let h = fading(cfg.m, rng);
                sum += h * interference_gain(at.dist_sq(p), cfg.alpha);
            }
        }
    }
    sum
}

/// Whether a receiver at `rx` decodes from `tx` in one attempt, given its
/// interference realization.
#[inline]
fn decodes(cfg: &NetworkConfig, tx: Point, rx: Point, h: f64, interference: f64) -> bool {
    let gain = desired_gain(math::sqrt(rx.dist_sq(tx)), cfg.alpha);
    if interference == 0.0 {
        return true;
    }
    h * gain >= cfg.beta * interference
}

/// One interference draw for receiver `j` at attempt `t` under the plan's
/// replication mode, together with the receiver's fading draw.
fn receiver_attempt(
    cfg: &NetworkConfig,
    plan: &TrialPlan,
    trial: u64,
    j: usize,
    t: u32,
    rx: Point,
    tail: f64,
) -> (f64, f64) {
    let mut rng = substream(plan.master_seed, trial, receiver_slot(cfg.tau, j, t));
    let interference = if plan.resample_interferers_per_slot {
        draw_interference(cfg, &mut rng, None, rx, tail)
    } else {
        let mut pos_rng = substream(plan.master_seed, trial, receiver_slot(cfg.tau, j, 0));
        let positions = sample_disk_ppp(&mut pos_rng, cfg.lambda_t, cfg.window_radius);
        draw_interference(cfg, &mut rng, Some(&positions), rx, tail)
    };
    let h = fading(cfg.m, &mut rng);
    (h, interference)
}

/// Run one single-hop trial, optionally recording the per-attempt connected
/// counts (the filtration of the connected process). Returns
/// (connected, total) receiver counts; outage iff connected < total.
fn single_hop_trial(
    cfg: &NetworkConfig,
    plan: &TrialPlan,
    trial: u64,
    mut filtration: Option<&mut Vec<usize>>,
) -> (usize, usize) {
    let seed = plan.master_seed;
    let mut geo = substream(seed, trial, SLOT_GEOMETRY);
    let receivers = sample_disk_ppp(&mut geo, cfg.lambda_r, cfg.s);
    let n = receivers.len();
    if n == 0 {
        if let Some(tr) = filtration.as_deref_mut() {
            tr.resize(cfg.tau as usize, 0);
        }
        return (0, 0);
    }
    let tail = cfg.interference_tail_mean();
    let mut connected = alloc::vec![false; n];
    let mut connected_count = 0usize;

    if plan.shared_interference_field {
        let fixed_positions = if plan.resample_interferers_per_slot {
            None
        } else {
            let mut pos_rng = substream(seed, trial, SLOT_SHARED_POSITIONS);
            Some(sample_disk_ppp(
                &mut pos_rng,
                cfg.lambda_t,
                cfg.window_radius,
            ))
        };
        for t in 1..=cfg.tau {
            let mut rng = substream(seed, trial, shared_attempt_slot(t));
            let attempt_positions = if plan.resample_interferers_per_slot {
                Some(sample_disk_ppp(&mut rng, cfg.lambda_t, cfg.window_radius))
            } else {
                None
            };
            let positions: &[Point] = attempt_positions
                .as_deref()
                .or(fixed_positions.as_deref())
                .unwrap_or(&[]);
            for (j, rx) in receivers.iter().enumerate() {
                if connected[j] {
                    continue;
                }
                let interference = draw_interference(cfg, &mut rng, Some(positions), *rx, tail);
                let h = fading(cfg.m, &mut rng);
                if decodes(cfg, Point::ORIGIN, *rx, h, interference) {
                    connected[j] = true;
                    connected_count += 1;
                }
            }
            if let Some(tr) = filtration.as_deref_mut() {
                tr.push(connected_count);
            } else if connected_count == n {
                break;
            }
        }
    } else {
        for t in 1..=cfg.tau {
            for (j, rx) in receivers.iter().enumerate() {
                if connected[j] {
                    continue;
                }
                let (h, interference) = receiver_attempt(cfg, plan, trial, j, t, *rx, tail);
                if decodes(cfg, Point::ORIGIN, *rx, h, interference) {
                    connected[j] = true;
                    connected_count += 1;
                }
            }
            if let Some(tr) = filtration.as_deref_mut() {
                tr.push(connected_count);
            } else if connected_count == n {
                break;
            }
        }
    }
    (connected_count, n)
}

/// Connected-receiver counts after each attempt of one trial; nondecreasing
/// by construction.
pub fn connection_filtration(
    config: &NetworkConfig,
    master_seed: u64,
    trial: u64,
) -> Result<Vec<usize>> {
    config.validate()?;
    let plan = TrialPlan::new(master_seed, 1);
    let mut trace = Vec::with_capacity(config.tau as usize);
    single_hop_trial(config, &plan, trial, Some(&mut trace));
    Ok(trace)
}

/// Multicast outage frequency: a trial is an outage iff some intended
/// receiver stays unconnected after the tau attempts (an empty cluster is
/// never in outage).
pub fn estimate_outage<E: Executor>(
    config: &NetworkConfig,
    plan: &TrialPlan,
    executor: &E,
) -> Result<OutageEstimate> {
    config.validate()?;
    plan.validate()?;
    let counts = executor.run_blocks(plan.blocks(), |block| {
        let mut outages = 0u64;
        for trial in plan.block_range(block) {
            let (connected, total) = single_hop_trial(config, plan, trial, None);
            if connected < total {
                outages += 1;
            }
        }
        outages
    });
    let events: u64 = counts.iter().sum();
    Ok(OutageEstimate::from_counts(events, plan.trials))
}

/// Empirical connection probability of probe receivers pinned at the given
/// radii. Probes only measure: they contribute no interference and do not
/// perturb the point process.
pub fn estimate_connection_profile<E: Executor>(
    config: &NetworkConfig,
    plan: &TrialPlan,
    r_grid: &[f64],
    executor: &E,
) -> Result<Vec<(f64, f64)>> {
    config.validate()?;
    plan.validate()?;
    if r_grid.iter().any(|&r| !(1.0 <= r && r <= config.s)) {
        return Err(Error::Domain("probe radii must lie in [1, s]"));
    }
    let tail = config.interference_tail_mean();
    let probes: Vec<Point> = r_grid.iter().map(|&r| Point { x: r, y: 0.0 }).collect();
    let counts = executor.run_blocks(plan.blocks(), |block| {
        let mut connected = alloc::vec![0u64; probes.len()];
        for trial in plan.block_range(block) {
            for (j, probe) in probes.iter().enumerate() {
                for t in 1..=config.tau {
                    let (h, interference) =
                        receiver_attempt(config, plan, trial, j, t, *probe, tail);
                    if decodes(config, Point::ORIGIN, *probe, h, interference) {
                        connected[j] += 1;
                        break;
                    }
                }
            }
        }
        connected
    });
    let mut totals = alloc::vec![0u64; probes.len()];
    for block in &counts {
        for (t, c) in totals.iter_mut().zip(block) {
            *t += c;
        }
    }
    Ok(r_grid
        .iter()
        .zip(&totals)
        .map(|(&r, &c)| (r, c as f64 / plan.trials as f64))
        .collect())
}

/// Monte Carlo boundary multicast rate, bits/s/Hz: the mean of
/// log2(1 + H_max s^-alpha / I_0) with H_max the best of tau fading draws
/// and I_0 sampled at the cluster boundary.
pub fn estimate_rate<E: Executor>(
    config: &NetworkConfig,
    plan: &TrialPlan,
    executor: &E,
) -> Result<MeanEstimate> {
    config.validate()?;
    plan.validate()?;
    if !(config.lambda_t > 0.0) {
        return Err(Error::Domain("rate estimation requires lambda_t > 0"));
    }
    let tail = config.interference_tail_mean();
    let boundary = Point {
        x: config.s,
        y: 0.0,
    };
    let signal_gain = math::powf(config.s, -config.alpha);
    let partials = executor.run_blocks(plan.blocks(), |block| {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for trial in plan.block_range(block) {
            let mut rng = substream(plan.master_seed, trial, 1);
            let interference = draw_interference(config, &mut rng, None, boundary, tail);
            let mut h_rng = substream(plan.master_seed, trial, 2);
            let mut h_max = 0.0f64;
            for _ in 0..config.tau {
                h_max = h_max.max(fading(config.m, &mut h_rng));
            }
            let b = math::log2(1.0 + h_max * signal_gain / interference);
            sum += b;
            sum_sq += b * b;
        }
        (sum, sum_sq)
    });
    Ok(mean_from_partials(&partials, plan.trials))
}

/// Sample mean of the interference at the origin (the Campbell target for
/// the whole plane is 2 pi lambda_t / (alpha - 2)).
pub fn estimate_interference_mean<E: Executor>(
    config: &NetworkConfig,
    plan: &TrialPlan,
    executor: &E,
) -> Result<MeanEstimate> {
    config.validate()?;
    plan.validate()?;
    let tail = config.interference_tail_mean();
    let partials = executor.run_blocks(plan.blocks(), |block| {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for trial in plan.block_range(block) {
            let mut rng = substream(plan.master_seed, trial, 1);
            let i0 = draw_interference(config, &mut rng, None, Point::ORIGIN, tail);
            sum += i0;
            sum_sq += i0 * i0;
        }
        (sum, sum_sq)
    });
    Ok(mean_from_partials(&partials, plan.trials))
}

fn mean_from_partials(partials: &[(f64, f64)], trials: u64) -> MeanEstimate {
    let (sum, sum_sq) = partials
        .iter()
        .fold((0.0, 0.0), |(a, b), (s, q)| (a + s, b + q));
    let n = trials as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    MeanEstimate {
        mean,
        std_err: math::sqrt(var / n),
        trials,
    }
}

/// One multihop trial. The packet walks the tessellation path; each region
/// gets tau/v attempts from the current transmitter. A slot fails when some
/// receiver of the current region is still unconnected at its end, or when
/// a nonempty next region has no connected receiver to relay from (an empty
/// next region is vacuously seeded and the transmitter carries over).
/// Connections accumulate across slots for receivers of every region.
fn multihop_trial(cfg: &NetworkConfig, plan: &TrialPlan, trial: u64) -> bool {
    let seed = plan.master_seed;
    let mut geo = substream(seed, trial, SLOT_GEOMETRY);
    let receivers = sample_disk_ppp(&mut geo, cfg.lambda_r, cfg.s);
    let n = receivers.len();
    if n == 0 {
        return false;
    }
    let tess = crate::model::tessellate(cfg.s, cfg.v).expect("validated config");
    let region_of: Vec<usize> = receivers.iter().map(|p| tess.region_of(*p)).collect();
    let tail = cfg.interference_tail_mean();
    let mut connected = alloc::vec![false; n];
    let mut connected_count = 0usize;
    let attempts_per_slot = cfg.tau / cfg.v;
    let mut tx = Point::ORIGIN;
    let mut t = 0u32;

    for region in 0..cfg.v as usize {
        for _ in 0..attempts_per_slot {
            t += 1;
            if connected_count == n {
                continue;
            }
            for (j, rx) in receivers.iter().enumerate() {
                if connected[j] {
                    continue;
                }
                let (h, interference) = receiver_attempt(cfg, plan, trial, j, t, *rx, tail);
                if decodes(cfg, tx, *rx, h, interference) {
                    connected[j] = true;
                    connected_count += 1;
                }
            }
        }
        // Every intended receiver of the current region must have decoded.
        if region_of
            .iter()
            .zip(&connected)
            .any(|(&reg, &ok)| reg == region && !ok)
        {
            return true;
        }
        // Elect the relay among the connected receivers of the next region.
        if region + 1 < cfg.v as usize {
            let mut next_total = 0usize;
            let mut candidates: Vec<usize> = Vec::new();
            for (j, &reg) in region_of.iter().enumerate() {
                if reg == region + 1 {
                    next_total += 1;
                    if connected[j] {
                        candidates.push(j);
                    }
                }
            }
            if next_total == 0 {
                continue; // vacuously seeded; transmitter carries over
            }
            if candidates.is_empty() {
                return true;
            }
            let mut relay_rng = substream(seed, trial, relay_slot(region));
            let pick = (uniform(&mut relay_rng) * candidates.len() as f64) as usize;
            tx = receivers[candidates[pick.min(candidates.len() - 1)]];
        }
    }
    false
}

/// Multihop multicast outage frequency over the tessellation path.
pub fn simulate_multihop_outage<E: Executor>(
    config: &NetworkConfig,
    plan: &TrialPlan,
    executor: &E,
) -> Result<OutageEstimate> {
    config.validate()?;
    plan.validate()?;
    if config.tau % config.v != 0 {
        return Err(Error::Domain("v must divide tau"));
    }
    let counts = executor.run_blocks(plan.blocks(), |block| {
        let mut outages = 0u64;
        for trial in plan.block_range(block) {
            if multihop_trial(config, plan, trial) {
                outages += 1;
            }
        }
        outages
    });
    let events: u64 = counts.iter().sum();
    Ok(OutageEstimate::from_counts(events, plan.trials))
}

/// Root estimate of the maximum contention intensity together with the
/// bracket the stochastic bisection ended on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxIntensityEstimate {
    pub lambda_bar: f64,
    pub bracket: (f64, f64),
    pub evaluations: u32,
    pub trials_used: u64,
}

enum Side {
    Below,
    Above,
}

/// Stochastic bisection of estimated outage = epsilon on log lambda_t.
/// Each probe escalates its trial count (x4 from 1000) until the 95% CI
/// excludes epsilon or is narrower than 0.1 epsilon; the outage event
/// follows the configured tessellation count (v = 1 is single hop).
/// Identical master seeds reproduce identical roots.
pub fn estimate_max_intensity<E: Executor>(
    config: &NetworkConfig,
    plan: &TrialPlan,
    executor: &E,
) -> Result<MaxIntensityEstimate> {
    config.validate()?;
    plan.validate()?;
    let eps = config.epsilon;
    let kernel = AnalyticKernel::new(config.clone(), QuadratureSpec::default())?;
    let guess = if config.v > 1 {
        kernel.multihop_closed_form_max_intensity()?.lambda_bar
    } else {
        kernel.closed_form_max_intensity()?.lambda_bar
    };
    if !(guess > 0.0) || !guess.is_finite() {
        return Err(Error::Bracket("closed-form seed is not positive"));
    }

    let mut evaluations = 0u32;
    let mut trials_used = 0u64;
    let mut classify = |lambda: f64| -> Result<Side> {
        let mut cfg = config.clone();
        cfg.lambda_t = lambda;
        let mut trials = 1000u64;
        loop {
            let probe_plan = TrialPlan {
                master_seed: derive_seed(plan.master_seed, evaluations as u64),
                trials,
                ..*plan
            };
            evaluations += 1;
            trials_used += trials;
            let est = if config.v > 1 {
                simulate_multihop_outage(&cfg, &probe_plan, executor)?
            } else {
                estimate_outage(&cfg, &probe_plan, executor)?
            };
            if est.ci95.1 < eps {
                return Ok(Side::Below);
            }
            if est.ci95.0 > eps {
                return Ok(Side::Above);
            }
            let width = est.ci95.1 - est.ci95.0;
            if width < 0.1 * eps || trials >= 64_000 {
                return Ok(if est.p_hat < eps {
                    Side::Below
                } else {
                    Side::Above
                });
            }
            trials *= 4;
        }
    };

    let mut lo = guess;
    let mut guard = 0;
    while matches!(classify(lo)?, Side::Above) {
        lo /= 4.0;
        guard += 1;
        if guard > 40 {
            return Err(Error::Bracket("no intensity with outage below epsilon"));
        }
    }
    let mut hi = lo * 4.0;
    guard = 0;
    while matches!(classify(hi)?, Side::Below) {
        hi *= 4.0;
        guard += 1;
        if guard > 40 {
            return Err(Error::Bracket("estimated outage never exceeds epsilon"));
        }
    }

    while hi / lo > 1.05 {
        let mid = math::sqrt(lo * hi);
        match classify(mid)? {
            Side::Below => lo = mid,
            Side::Above => hi = mid,
        }
    }
    Ok(MaxIntensityEstimate {
        lambda_bar: math::sqrt(lo * hi),
        bracket: (lo, hi),
        evaluations,
        trials_used,
    })
}

/// Axis-aligned rectangular test set for the duality void test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn area(&self) -> f64 {
        (self.x1 - self.x0).max(0.0) * (self.y1 - self.y0).max(0.0)
    }

    fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }
}

/// Per-set outcome of the duality void test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualitySetReport {
    pub rect: Rect,
    pub target_void: f64,
    pub empirical_void: f64,
    pub z_score: f64,
}

/// Void-probability test of the cluster-process duality: selecting one
/// member (parent or daughter, uniformly) from every cluster of a parent
/// process of intensity lambda_t yields again a Poisson process, so its
/// void probability on a set A must be exp(-lambda_t |A|). Reports a
/// z-score per test set.
pub fn duality_void_test(
    config: &NetworkConfig,
    plan: &TrialPlan,
    test_sets: &[Rect],
) -> Result<Vec<DualitySetReport>> {
    config.validate()?;
    plan.validate()?;
    if test_sets.is_empty() {
        return Err(Error::Domain("at least one test set is required"));
    }
    // Parents farther than s from every set cannot place their selected
    // point inside one; sample them on the joint bounding box inflated by
    // the cluster radius.
    let mut bounds = test_sets[0];
    for r in test_sets {
        bounds.x0 = bounds.x0.min(r.x0);
        bounds.y0 = bounds.y0.min(r.y0);
        bounds.x1 = bounds.x1.max(r.x1);
        bounds.y1 = bounds.y1.max(r.y1);
    }
    let window = Rect {
        x0: bounds.x0 - config.s,
        y0: bounds.y0 - config.s,
        x1: bounds.x1 + config.s,
        y1: bounds.y1 + config.s,
    };
    let mean_parents = config.lambda_t * window.area();
    let k = config.k();

    let mut void_counts = alloc::vec![0u64; test_sets.len()];
    let mut hit = alloc::vec![false; test_sets.len()];
    for trial in 0..plan.trials {
        let mut rng = substream(plan.master_seed, trial, 0);
        let parents = poisson(&mut rng, mean_parents);
        hit.fill(false);
        for _ in 0..parents {
            let parent = Point {
                x: window.x0 + uniform(&mut rng) * (window.x1 - window.x0),
                y: window.y0 + uniform(&mut rng) * (window.y1 - window.y0),
            };
            // Uniform pick over the parent and its Poisson(k) daughters;
            // only the selected point's position matters.
            let daughters = poisson(&mut rng, k);
            let pick = (uniform(&mut rng) * (daughters + 1) as f64) as u64;
            let selected = if pick == 0 {
                parent
            } else {
                let offset = point_in_disk(&mut rng, config.s);
                Point {
                    x: parent.x + offset.x,
                    y: parent.y + offset.y,
                }
            };
            for (set, h) in test_sets.iter().zip(hit.iter_mut()) {
                if set.contains(selected) {
                    *h = true;
                }
            }
        }
        for (c, h) in void_counts.iter_mut().zip(&hit) {
            if !h {
                *c += 1;
            }
        }
    }

    Ok(test_sets
        .iter()
        .zip(&void_counts)
        .map(|(&rect, &voids)| {
            let target = math::exp(-config.lambda_t * rect.area());
            let empirical = voids as f64 / plan.trials as f64;
            let var = target * (1.0 - target) / plan.trials as f64;
            let z_score = if var > 0.0 {
                (empirical - target) / math::sqrt(var)
            } else if (empirical - target).abs() < f64::EPSILON {
                0.0
            } else {
                f64::INFINITY
            };
            DualitySetReport {
                rect,
                target_void: target,
                empirical_void: empirical,
                z_score,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> NetworkConfig {
        NetworkConfig {
            lambda_t: 3.5e-4,
            lambda_r: 0.1,
            s: 5.0,
            alpha: 4.0,
            beta: 1.0,
            m: 1,
            epsilon: 0.15,
            tau: 1,
            v: 1,
            window_radius: 50.0,
            a_hat: 1.0,
        }
    }

    #[test]
    fn outage_is_zero_without_interference() {
        let mut cfg = config();
        cfg.lambda_t = 0.0;
        let plan = TrialPlan::new(1, 2000);
        let est = estimate_outage(&cfg, &plan, &SerialExecutor).unwrap();
        assert_eq!(est.p_hat, 0.0);
    }

    #[test]
    fn outage_is_zero_for_empty_clusters() {
        let mut cfg = config();
        cfg.lambda_r = 0.0;
        cfg.lambda_t = 0.01;
        let plan = TrialPlan::new(2, 2000);
        let est = estimate_outage(&cfg, &plan, &SerialExecutor).unwrap();
        assert_eq!(est.p_hat, 0.0);
    }

    #[test]
    fn zero_trials_is_a_domain_error() {
        let plan = TrialPlan::new(1, 0);
        assert!(estimate_outage(&config(), &plan, &SerialExecutor).is_err());
    }

    #[test]
    fn estimates_are_reproducible() {
        let plan = TrialPlan::new(42, 3000);
        let a = estimate_outage(&config(), &plan, &SerialExecutor).unwrap();
        let b = estimate_outage(&config(), &plan, &SerialExecutor).unwrap();
        assert_eq!(a.p_hat.to_bits(), b.p_hat.to_bits());
        let mut other = plan;
        other.master_seed = 43;
        let c = estimate_outage(&config(), &other, &SerialExecutor).unwrap();
        assert_ne!(a.p_hat.to_bits(), c.p_hat.to_bits());
    }

    #[test]
    fn filtration_is_nondecreasing() {
        let mut cfg = config();
        cfg.tau = 5;
        cfg.lambda_t = 2e-3;
        for trial in 0..200 {
            let trace = connection_filtration(&cfg, 7, trial).unwrap();
            assert_eq!(trace.len(), 5);
            for w in trace.windows(2) {
                assert!(w[0] <= w[1], "filtration shrank: {trace:?}");
            }
        }
    }

    #[test]
    fn std_err_shrinks_like_inverse_sqrt_trials() {
        let cfg = config();
        let small = estimate_outage(&cfg, &TrialPlan::new(5, 1000), &SerialExecutor).unwrap();
        let large = estimate_outage(&cfg, &TrialPlan::new(5, 100_000), &SerialExecutor).unwrap();
        let ratio = small.std_err / large.std_err;
        let want = math::sqrt(100.0);
        assert!((ratio / want - 1.0).abs() < 0.2, "ratio={ratio} want={want}");
    }

    #[test]
    fn multihop_reduces_to_single_hop_at_v_one() {
        let mut cfg = config();
        cfg.lambda_t = 2e-3;
        cfg.tau = 2;
        let plan = TrialPlan::new(11, 4000);
        let single = estimate_outage(&cfg, &plan, &SerialExecutor).unwrap();
        let multi = simulate_multihop_outage(&cfg, &plan, &SerialExecutor).unwrap();
        let se = math::sqrt(single.std_err * single.std_err + multi.std_err * multi.std_err);
        assert!(
            (single.p_hat - multi.p_hat).abs() <= 3.0 * se.max(1e-9),
            "single={} multi={}",
            single.p_hat,
            multi.p_hat
        );
    }

    #[test]
    fn multihop_without_interference_has_no_outage() {
        let mut cfg = config();
        cfg.lambda_t = 0.0;
        cfg.tau = 20;
        cfg.v = 5;
        cfg.lambda_r = 0.05;
        let plan = TrialPlan::new(3, 2000);
        let est = simulate_multihop_outage(&cfg, &plan, &SerialExecutor).unwrap();
        assert_eq!(est.p_hat, 0.0);
    }

    #[test]
    fn multihop_rejects_non_divisor() {
        let mut cfg = config();
        cfg.tau = 20;
        cfg.v = 3;
        let plan = TrialPlan::new(3, 100);
        assert!(simulate_multihop_outage(&cfg, &plan, &SerialExecutor).is_err());
    }

    #[test]
    fn rate_estimate_runs_and_orders_with_tau() {
        let mut cfg = config();
        cfg.lambda_t = 1e-3;
        let plan = TrialPlan::new(9, 20_000);
        let b1 = estimate_rate(&cfg, &plan, &SerialExecutor).unwrap();
        cfg.tau = 4;
        let b4 = estimate_rate(&cfg, &plan, &SerialExecutor).unwrap();
        // Best of four fading draws beats best of one.
        assert!(b4.mean > b1.mean);
        cfg.lambda_t = 0.0;
        assert!(estimate_rate(&cfg, &plan, &SerialExecutor).is_err());
    }

    #[test]
    fn duality_void_probability_edge_cases() {
        let mut cfg = config();
        cfg.lambda_t = 0.0;
        let plan = TrialPlan::new(17, 2000);
        let sets = [Rect {
            x0: -2.0,
            y0: -2.0,
            x1: 2.0,
            y1: 2.0,
        }];
        let report = duality_void_test(&cfg, &plan, &sets).unwrap();
        assert_eq!(report[0].empirical_void, 1.0);
        assert_eq!(report[0].z_score, 0.0);
        // Zero-measure set: void probability 1.
        cfg.lambda_t = 0.05;
        let degenerate = [Rect {
            x0: 1.0,
            y0: 1.0,
            x1: 1.0,
            y1: 5.0,
        }];
        let report = duality_void_test(&cfg, &plan, &degenerate).unwrap();
        assert_eq!(report[0].empirical_void, 1.0);
    }
}
