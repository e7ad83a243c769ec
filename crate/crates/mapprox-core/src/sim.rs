//! Monte Carlo harness: path generation for finite chains and
//! coefficient-driven processes, empirical second moments, empirical
//! martingale residuals, and conditional-CLT distances.
//!
//! Reproducibility contract: every routine takes an explicit seed and
//! derives one counter-based substream per (path, column) via the
//! ChaCha stream index, so results are bit-identical regardless of how
//! work would be batched, and columns/paths could be generated in
//! parallel without communication. Aggregation is compensated and runs
//! in a fixed order.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::chain::{PairKernel, StationaryChain};
use crate::linalg::CompensatedSum;
use crate::seq::{CoeffArray, CoeffSeq, SeqError};

/// Mean-0, variance-1 innovation laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    Gaussian,
    /// ±1 with probability 1/2 each.
    Rademacher,
    /// Uniform on (−√3, √3).
    CenteredUniform,
    /// ±1/√p with probability p/2 each, 0 otherwise.
    TwoPoint { p: f64 },
}

impl NoiseSpec {
    pub fn sample(&self, rng: &mut ChaCha12Rng) -> f64 {
        match self {
            NoiseSpec::Gaussian => rng.sample(StandardNormal),
            NoiseSpec::Rademacher => {
                if rng.gen::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            NoiseSpec::CenteredUniform => {
                (rng.gen::<f64>() - 0.5) * (2.0 * 3.0f64.sqrt())
            }
            NoiseSpec::TwoPoint { p } => {
                let u = rng.gen::<f64>();
                if u < p / 2.0 {
                    1.0 / p.sqrt()
                } else if u < *p {
                    -1.0 / p.sqrt()
                } else {
                    0.0
                }
            }
        }
    }
}

/// Seeded generator on its own substream.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws an initial state from π by inverse CDF.
pub fn sample_initial(chain: &StationaryChain, rng: &mut ChaCha12Rng) -> u32 {
    categorical(chain.pi(), rng)
}

/// One transition from `state`.
pub fn step_state(chain: &StationaryChain, state: u32, rng: &mut ChaCha12Rng) -> u32 {
    categorical(chain.q().row(state as usize), rng)
}

fn categorical(weights: &[f64], rng: &mut ChaCha12Rng) -> u32 {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i as u32;
        }
    }
    (weights.len() - 1) as u32
}

/// Labeled samples of `(W_0, S_n/√n)` from stationary chain paths.
#[derive(Debug, Clone)]
pub struct ChainSamples {
    pub w0: Vec<u32>,
    /// `S_n/√n` per path.
    pub values: Vec<f64>,
    pub n: usize,
    pub paths: usize,
    pub seed: u64,
}

/// Path `p` runs on substream `p`; `W_0 ~ π`, steps by row sampling.
pub fn simulate_chain(
    chain: &StationaryChain,
    g: &[f64],
    n: usize,
    paths: usize,
    seed: u64,
) -> ChainSamples {
    assert!(paths >= 1 && n >= 1);
    let scale = 1.0 / (n as f64).sqrt();
    let mut w0 = Vec::with_capacity(paths);
    let mut values = Vec::with_capacity(paths);
    for p in 0..paths {
        let mut rng = stream_rng(seed, p as u64);
        let start = sample_initial(chain, &mut rng);
        let mut state = start;
        let mut s = 0.0f64;
        for _ in 0..n {
            state = step_state(chain, state, &mut rng);
            s += g[state as usize];
        }
        w0.push(start);
        values.push(s * scale);
    }
    ChainSamples { w0, values, n, paths, seed }
}

/// Empirical `E[S_n²]/n` of a sample set of `S_n/√n` values.
pub fn kappa_sq_hat(values: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &v in values {
        acc.add(v * v);
    }
    acc.value() / values.len() as f64
}

#[derive(Debug, Clone, Copy)]
pub struct ResidualEstimate {
    pub n: usize,
    /// Monte Carlo estimate of `E[R_{nn}²]/n`.
    pub mean_over_n: f64,
    /// Standard error of that estimate.
    pub std_err_over_n: f64,
}

/// Per path computes `R_n = S_n − Σ_k H(W_{k−1}, W_k)` with the limiting
/// kernel `H`, checkpointing at every grid point in one pass.
pub fn empirical_residual(
    chain: &StationaryChain,
    g: &[f64],
    kernel: &PairKernel,
    n_grid: &[usize],
    paths: usize,
    seed: u64,
) -> Vec<ResidualEstimate> {
    assert!(!n_grid.is_empty() && paths >= 1);
    let n_max = *n_grid.last().unwrap();
    let mut sum_sq = vec![CompensatedSum::new(); n_grid.len()];
    let mut sum_quad = vec![CompensatedSum::new(); n_grid.len()];
    for p in 0..paths {
        let mut rng = stream_rng(seed, p as u64);
        let mut state = sample_initial(chain, &mut rng);
        let mut s = 0.0f64;
        let mut m = 0.0f64;
        let mut next = 0usize;
        for k in 1..=n_max {
            let prev = state;
            state = step_state(chain, state, &mut rng);
            s += g[state as usize];
            m += kernel.value(prev as usize, state as usize);
            if next < n_grid.len() && k == n_grid[next] {
                let r = s - m;
                sum_sq[next].add(r * r);
                sum_quad[next].add(r * r * r * r);
                next += 1;
            }
        }
    }
    n_grid
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let pf = paths as f64;
            let mean_sq = sum_sq[i].value() / pf;
            let mean_quad = sum_quad[i].value() / pf;
            let var = (mean_quad - mean_sq * mean_sq).max(0.0);
            ResidualEstimate {
                n,
                mean_over_n: mean_sq / n as f64,
                std_err_over_n: (var / pf).sqrt() / n as f64,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    Kolmogorov,
    Levy,
}

impl DistanceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DistanceKind::Kolmogorov => "kolmogorov",
            DistanceKind::Levy => "levy",
        }
    }
}

/// Reference law for the distance: a centered normal, or the point mass
/// at 0 when κ² is degenerate.
#[derive(Debug, Clone, Copy)]
enum Reference {
    Normal { kappa: f64 },
    PointMass,
}

/// κ² at or below this is treated as degenerate.
pub const DEGENERATE_KAPPA: f64 = 1e-12;

fn normal_cdf(kappa: f64, x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2 / kappa)
}

fn reference_cdf(r: Reference, x: f64) -> f64 {
    match r {
        Reference::Normal { kappa } => normal_cdf(kappa, x),
        Reference::PointMass => {
            if x >= 0.0 {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Sup-CDF distance of sorted samples against the reference.
fn kolmogorov(sorted: &[f64], r: Reference) -> f64 {
    let m = sorted.len() as f64;
    match r {
        Reference::Normal { .. } => {
            let mut d = 0.0f64;
            for (i, &x) in sorted.iter().enumerate() {
                let f = reference_cdf(r, x);
                d = d.max(f - i as f64 / m).max((i as f64 + 1.0) / m - f);
            }
            d
        }
        Reference::PointMass => {
            let below = sorted.partition_point(|&x| x < 0.0) as f64 / m;
            let upto = sorted.partition_point(|&x| x <= 0.0) as f64 / m;
            below.max(1.0 - upto)
        }
    }
}

/// Lévy distance: the smallest ε with
/// `R(z−ε)−ε ≤ F̂(z) ≤ R(z+ε)+ε` for all z, by bisection (the feasible
/// set is an up-interval). For step functions it suffices to check the
/// constraints at the sample jumps (and at the reference jump for the
/// point mass).
fn levy(sorted: &[f64], r: Reference) -> f64 {
    let m = sorted.len() as f64;
    let feasible = |eps: f64| -> bool {
        match r {
            Reference::Normal { .. } => {
                for (i, &x) in sorted.iter().enumerate() {
                    if (i as f64 + 1.0) / m > reference_cdf(r, x + eps) + eps {
                        return false;
                    }
                    if reference_cdf(r, x - eps) - eps > i as f64 / m {
                        return false;
                    }
                }
                true
            }
            Reference::PointMass => {
                let below = sorted.partition_point(|&x| x < -eps) as f64 / m;
                let upto = sorted.partition_point(|&x| x <= eps) as f64 / m;
                below <= eps && 1.0 - upto <= eps
            }
        }
    };
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn distance(sorted: &[f64], r: Reference, kind: DistanceKind) -> f64 {
    match kind {
        DistanceKind::Kolmogorov => kolmogorov(sorted, r),
        DistanceKind::Levy => levy(sorted, r),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PerStateDistance {
    pub state: u32,
    pub count: usize,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct CcltReport {
    pub n: usize,
    pub paths: usize,
    pub kappa_sq_hat: f64,
    pub distance: f64,
    pub distance_kind: DistanceKind,
    /// Present for exact (per-initial-state) conditioning.
    pub per_state: Option<Vec<PerStateDistance>>,
    /// Set when conditioning was impossible and the unconditional law was
    /// compared instead.
    pub unconditional_surrogate: bool,
    /// Set when κ² was degenerate and the point mass at 0 was used.
    pub degenerate_kappa: bool,
}

/// Sample sets the distance check accepts: labeled by the initial state
/// (finite chains, exact conditioning) or unlabeled (shift-type models).
pub enum Samples<'a> {
    Labeled { pi: &'a [f64], w0: &'a [u32], values: &'a [f64], n: usize },
    Unlabeled { values: &'a [f64], n: usize },
}

impl ChainSamples {
    pub fn as_samples<'a>(&'a self, chain: &'a StationaryChain) -> Samples<'a> {
        Samples::Labeled { pi: chain.pi(), w0: &self.w0, values: &self.values, n: self.n }
    }
}

/// Distance between the (conditional) law of `S_n/√n` and the centered
/// normal with variance `kappa_sq`. For labeled samples the distance is
/// computed per initial state and π-averaged; unlabeled samples get the
/// unconditional distance, flagged as a surrogate.
pub fn cclt_check(samples: Samples<'_>, kappa_sq: f64, kind: DistanceKind) -> CcltReport {
    let degenerate = kappa_sq <= DEGENERATE_KAPPA;
    let reference = if degenerate {
        Reference::PointMass
    } else {
        Reference::Normal { kappa: kappa_sq.sqrt() }
    };
    match samples {
        Samples::Labeled { pi, w0, values, n } => {
            let n_states = pi.len();
            let mut groups: Vec<Vec<f64>> = vec![Vec::new(); n_states];
            for (&s, &v) in w0.iter().zip(values) {
                groups[s as usize].push(v);
            }
            let mut per_state = Vec::with_capacity(n_states);
            let mut avg = 0.0;
            for (s, group) in groups.iter_mut().enumerate() {
                group.sort_by(|a, b| a.partial_cmp(b).expect("samples are finite"));
                let d = if group.is_empty() { 1.0 } else { distance(group, reference, kind) };
                avg += pi[s] * d;
                per_state.push(PerStateDistance { state: s as u32, count: group.len(), distance: d });
            }
            CcltReport {
                n,
                paths: values.len(),
                kappa_sq_hat: kappa_sq_hat(values),
                distance: avg,
                distance_kind: kind,
                per_state: Some(per_state),
                unconditional_surrogate: false,
                degenerate_kappa: degenerate,
            }
        }
        Samples::Unlabeled { values, n } => {
            let mut sorted = values.to_vec();
            sorted.sort_by(|a, b| a.partial_cmp(b).expect("samples are finite"));
            CcltReport {
                n,
                paths: values.len(),
                kappa_sq_hat: kappa_sq_hat(values),
                distance: distance(&sorted, reference, kind),
                distance_kind: kind,
                per_state: None,
                unconditional_surrogate: true,
                degenerate_kappa: degenerate,
            }
        }
    }
}

/// Certified truncation facts for a superlinear simulation.
#[derive(Debug, Clone, Copy)]
pub struct TruncationReport {
    /// Bound on `Σ_j Σ_{i>warmup} c_{i,j}²` from the columns' tail rules.
    pub coeff_tail_sq: f64,
    /// Same, relative to the total materialized `Σ c²`.
    pub relative: f64,
    /// Bound on the missing part of `E[S_n²]`: `n²·coeff_tail_sq`.
    pub sn_tail_bound: f64,
}

#[derive(Debug, Clone)]
pub struct SuperlinearSamples {
    /// `S_n/√n` per path.
    pub values: Vec<f64>,
    pub n: usize,
    pub paths: usize,
    pub seed: u64,
    pub warmup: usize,
    pub truncation: TruncationReport,
}

/// Relative variance contribution the truncated tail may carry.
pub const TRUNCATION_REL_TOL: f64 = 1e-6;

/// Simulates `S_n/√n` for `X_k = Σ_j Σ_i c_{i,j} ξ_{k−i,j}` by collapsing
/// the double sum into one weight per innovation:
/// `S_n = Σ_j [ Σ_{m≤0} (b_{n−m,j} − b_{−m,j}) ξ_{m,j} + Σ_{m=1}^n b_{n−m,j} ξ_{m,j} ]`
/// (same random variables, exact algebra), so one path costs
/// O(warmup + n) draws per column. Column `j` of path `p` runs on
/// substream `p·|J| + j`.
pub fn simulate_superlinear(
    arr: &CoeffArray,
    noise: &[NoiseSpec],
    n: usize,
    paths: usize,
    seed: u64,
    warmup: usize,
) -> Result<SuperlinearSamples, SeqError> {
    assert!(paths >= 1 && n >= 1);
    assert_eq!(noise.len(), arr.columns().len());
    let needed = n + warmup;
    if needed > arr.horizon() {
        return Err(SeqError::HorizonExceeded { needed, materialized: arr.horizon() });
    }

    // certify the dropped coefficient tail
    let mut tail = 0.0f64;
    let mut total = 0.0f64;
    for c in arr.columns() {
        tail += c.tail_sq(warmup)?;
        total += c.a().iter().map(|x| x * x).sum::<f64>();
    }
    let relative = if tail == 0.0 { 0.0 } else { tail / total.max(f64::MIN_POSITIVE) };
    if relative >= TRUNCATION_REL_TOL {
        return Err(SeqError::TailNotCertified);
    }
    let truncation = TruncationReport {
        coeff_tail_sq: tail,
        relative,
        sn_tail_bound: (n as f64) * (n as f64) * tail,
    };

    // per-column innovation weights, index runs m = −warmup ..= n
    let weights: Vec<Vec<f64>> = arr
        .columns()
        .iter()
        .map(|c| weight_vector(c, n, warmup))
        .collect();

    let n_cols = arr.columns().len() as u64;
    let scale = 1.0 / (n as f64).sqrt();
    let mut values = Vec::with_capacity(paths);
    for p in 0..paths {
        let mut s = 0.0f64;
        for (j, w) in weights.iter().enumerate() {
            let mut rng = stream_rng(seed, (p as u64) * n_cols + j as u64);
            s += match noise[j] {
                NoiseSpec::Rademacher => rademacher_dot(w, &mut rng),
                spec => {
                    let mut acc = 0.0f64;
                    for &wi in w {
                        acc += wi * spec.sample(&mut rng);
                    }
                    acc
                }
            };
        }
        values.push(s * scale);
    }
    Ok(SuperlinearSamples { values, n, paths, seed, warmup, truncation })
}

fn weight_vector(c: &CoeffSeq, n: usize, warmup: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(warmup + n + 1);
    for m in -(warmup as isize)..=(n as isize) {
        let v = if m <= 0 {
            c.b_at(n as isize - m) - c.b_at(-m)
        } else {
            c.b_at(n as isize - m)
        };
        w.push(v);
    }
    w
}

/// ±1 dot product using 64 sign bits per generator word.
fn rademacher_dot(w: &[f64], rng: &mut ChaCha12Rng) -> f64 {
    let mut acc = 0.0f64;
    for chunk in w.chunks(64) {
        let mut bits = rng.next_u64();
        for &wi in chunk {
            acc += if bits & 1 == 1 { wi } else { -wi };
            bits >>= 1;
        }
    }
    acc
}

/// Monte Carlo estimate of `‖H̄_n − H̄_m‖²` for a linear process, from the
/// defining kernels evaluated on truncated innovation histories:
/// `H̄_n(W_0,W_1) = V̄_n g(W_1) − QV̄_n g(W_0)`, both sums evaluated
/// numerically per path (their algebraic collapse to `b̄_n ξ_1` is the
/// identity under test).
pub fn hbar_diff_norm_sq_mc(
    seq: &CoeffSeq,
    n: usize,
    m: usize,
    paths: usize,
    warmup: usize,
    seed: u64,
    noise: NoiseSpec,
) -> Result<(f64, f64), SeqError> {
    let needed = warmup + 1 + n.max(m);
    if needed > seq.horizon() {
        return Err(SeqError::HorizonExceeded { needed, materialized: seq.horizon() });
    }
    // v̄ⁿ_i = Σ_{k<n} (1−k/n) a_{i+k}
    let vbar_profile = |nn: usize| -> Vec<f64> {
        (0..=warmup + 1)
            .map(|i| {
                let mut acc = CompensatedSum::new();
                for k in 0..nn {
                    acc.add((1.0 - k as f64 / nn as f64) * seq.a()[i + k]);
                }
                acc.value()
            })
            .collect()
    };
    let vn = vbar_profile(n);
    let vm = vbar_profile(m);

    let mut sq = CompensatedSum::new();
    let mut quad = CompensatedSum::new();
    for p in 0..paths {
        let mut rng = stream_rng(seed, p as u64);
        let xi_1: f64 = noise.sample(&mut rng);
        let xi_past: Vec<f64> = (0..=warmup).map(|_| noise.sample(&mut rng)).collect();
        // V̄ g(W_1) uses (ξ_1, ξ_0, ξ_{−1}, …); QV̄ g(W_0) uses (ξ_0, ξ_{−1}, …)
        let eval = |profile: &[f64]| -> f64 {
            let mut fw1 = profile[0] * xi_1;
            for i in 1..=warmup {
                fw1 += profile[i] * xi_past[i - 1];
            }
            let mut fw0 = 0.0;
            for i in 0..=warmup {
                fw0 += profile[i + 1] * xi_past[i];
            }
            fw1 - fw0
        };
        let d = eval(&vn) - eval(&vm);
        sq.add(d * d);
        quad.add(d * d * d * d);
    }
    let pf = paths as f64;
    let mean = sq.value() / pf;
    let var = (quad.value() / pf - mean * mean).max(0.0);
    Ok((mean, (var / pf).sqrt()))
}
