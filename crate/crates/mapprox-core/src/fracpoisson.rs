//! The square root `√(I−Q)` as a truncated binomial series,
//! `√(I−Q) = I − Σ_{k≥1} β_k Q^k` with `β_k = (−1)^{k−1}·C(1/2, k)`.
//!
//! The coefficients are positive, sum to 1, and behave like
//! `1/(2√π k^{3/2})`; partial-sum tails satisfy the exact identity
//! `Σ_{k>K} β_k = 2(K+1)β_{K+1}` (induction on the recurrence), which is
//! what the adaptive truncation uses. The coarser closed-form majorant
//! `1/√(πK)` is exposed as the documented `tail_bound`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::chain::{Observable, StationaryChain};
use crate::linalg::CompensatedSum;

#[derive(Debug, Clone, PartialEq)]
pub enum FracError {
    /// ‖Q^k h‖ failed to contract enough to certify the remainder within
    /// the configured number of terms.
    NoConvergence {
        k_max: usize,
        remainder_bound: f64,
        contraction_ratio: f64,
    },
    /// The coefficient source is shorter than `j_max + K`.
    InsufficientHorizon { needed: usize, supplied: usize },
}

impl fmt::Display for FracError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FracError::NoConvergence { k_max, remainder_bound, contraction_ratio } => write!(
                f,
                "series remainder {remainder_bound} not below tolerance after {k_max} terms \
                 (contraction ratio {contraction_ratio})"
            ),
            FracError::InsufficientHorizon { needed, supplied } => {
                write!(f, "need {needed} coefficients, got {supplied}")
            }
        }
    }
}

impl FracError {
    pub fn code(&self) -> &'static str {
        match self {
            FracError::NoConvergence { .. } => "NoConvergence",
            FracError::InsufficientHorizon { .. } => "InsufficientHorizon",
        }
    }
}

/// Truncated series coefficients β_1…β_K with a certified tail bound.
#[derive(Debug, Clone)]
pub struct BetaSeries {
    pub k: usize,
    /// β_1..β_K (index 0 holds β_1).
    pub beta: Vec<f64>,
    /// Upper bound on Σ_{k>K} β_k: the 1/√(πK) majorant.
    pub tail_bound: f64,
}

/// Multiplicative recurrence β_1 = 1/2, β_{k+1} = β_k (k − 1/2)/(k + 1);
/// stable far beyond the factorial formula's overflow range.
pub fn beta_coefficients(k: usize) -> BetaSeries {
    assert!(k >= 1);
    let mut beta = Vec::with_capacity(k);
    let mut b = 0.5f64;
    beta.push(b);
    for i in 1..k {
        let kf = i as f64;
        b *= (kf - 0.5) / (kf + 1.0);
        beta.push(b);
    }
    BetaSeries { k, beta, tail_bound: tail_majorant(k) }
}

/// `1/√(πK)`, a closed-form upper bound on the tail Σ_{k>K} β_k
/// (validated against computed partial sums in the test suites).
pub fn tail_majorant(k: usize) -> f64 {
    1.0 / (PI * k as f64).sqrt()
}

/// Exact tail: Σ_{k>K} β_k = 2(K+1)β_{K+1}, given β_{K+1}.
pub fn tail_exact(k: usize, beta_k_plus_1: f64) -> f64 {
    2.0 * (k as f64 + 1.0) * beta_k_plus_1
}

/// Direct product evaluation of β_k = (−1)^{k−1}·C(1/2,k); an independent
/// route used to cross-check the recurrence.
pub fn beta_direct(k: usize) -> f64 {
    assert!(k >= 1);
    // C(1/2,k) = Π_{j=0}^{k−1} (1/2 − j)/(j + 1); strip the sign.
    let mut acc = 1.0f64;
    for j in 0..k {
        acc *= (0.5 - j as f64) / (j as f64 + 1.0);
    }
    let signed = if k % 2 == 1 { acc } else { -acc };
    debug_assert!(signed > 0.0);
    signed
}

/// Result of applying the truncated series to a chain observable.
#[derive(Debug, Clone)]
pub struct SqrtApply {
    pub g: Observable,
    pub k_used: usize,
    /// Certified bound on ‖truncation error‖: tail(K)·‖Q^K h‖.
    pub err_bound: f64,
    /// Contraction ratio of ‖Q^k h‖ measured over the last window.
    pub contraction_ratio: f64,
}

pub const DEFAULT_K_MAX: usize = 200_000;
/// Window length for the empirical contraction estimate.
const RATIO_WINDOW: usize = 8;

/// `g = √(I−Q) h = h − Σ_{k≤K} β_k Q^k h`, with K chosen adaptively:
/// since Q contracts L²(π), ‖Q^k h‖ is nonincreasing and the remainder is
/// certified by `Σ_{k>K} β_k ‖Q^k h‖ ≤ tail(K)·‖Q^K h‖ ≤ tol`.
pub fn sqrt_apply_chain(
    chain: &StationaryChain,
    h: &Observable,
    tol: f64,
    k_max: usize,
) -> Result<SqrtApply, FracError> {
    assert!(tol > 0.0);
    let mut g = h.values().to_vec();
    let mut qk = h.values().to_vec(); // Q^k h
    let mut beta = 0.5f64; // β_{k} for the upcoming term
    let mut norms: Vec<f64> = Vec::new();
    let mut norm_k = chain.norm_sq(&qk).sqrt();

    let mut k_used = 0usize;
    let mut bound = tail_exact(0, 0.5) * norm_k; // K = 0 certificate: Σβ = 1
    if bound <= tol {
        return Ok(SqrtApply {
            g: Observable::from_raw(g),
            k_used,
            err_bound: bound,
            contraction_ratio: 0.0,
        });
    }

    let mut k = 0usize;
    loop {
        k += 1;
        qk = chain.step(&qk);
        for i in 0..g.len() {
            g[i] -= beta * qk[i];
        }
        norm_k = chain.norm_sq(&qk).sqrt();
        norms.push(norm_k);
        let beta_next = beta * (k as f64 - 0.5) / (k as f64 + 1.0);
        bound = tail_exact(k, beta_next) * norm_k;
        k_used = k;
        if bound <= tol {
            break;
        }
        if k >= k_max {
            let ratio = window_ratio(&norms);
            return Err(FracError::NoConvergence {
                k_max,
                remainder_bound: bound,
                contraction_ratio: ratio,
            });
        }
        beta = beta_next;
    }

    Ok(SqrtApply {
        g: Observable::from_raw(g),
        k_used,
        err_bound: bound,
        contraction_ratio: window_ratio(&norms),
    })
}

fn window_ratio(norms: &[f64]) -> f64 {
    if norms.len() < 2 {
        return 0.0;
    }
    let w = RATIO_WINDOW.min(norms.len() - 1);
    let last = norms[norms.len() - 1];
    let first = norms[norms.len() - 1 - w];
    if first <= 0.0 {
        return 0.0;
    }
    (last / first).powf(1.0 / w as f64)
}

/// ‖√(I−Q)(√(I−Q)h) − (I−Q)h‖_π; contract: ≤ 10·tol.
pub fn verify_square(
    chain: &StationaryChain,
    h: &Observable,
    tol: f64,
    k_max: usize,
) -> Result<f64, FracError> {
    let first = sqrt_apply_chain(chain, h, tol, k_max)?;
    let second = sqrt_apply_chain(chain, &first.g, tol, k_max)?;
    let qh = chain.step(h.values());
    let dev_sq: f64 = {
        let mut acc = 0.0;
        for i in 0..h.values().len() {
            let target = h.values()[i] - qh[i];
            let d = second.g.values()[i] - target;
            acc += chain.pi()[i] * d * d;
        }
        acc
    };
    Ok(dev_sq.sqrt())
}

/// Report for the sequence-side application `c_j = Σ_k β_k (a_j − a_{j+k})`.
#[derive(Debug, Clone)]
pub struct SqrtSequence {
    pub c: Vec<f64>,
    pub k: usize,
    /// β-tail · max|a|: bound on the per-coefficient truncation error.
    pub truncation_error: f64,
    /// True when `a` is nonnegative and nonincreasing over the supplied
    /// horizon; then every omitted term is ≥ 0 and each c_j is a
    /// certified lower bound of the untruncated coefficient.
    pub lower_bound_certified: bool,
}

/// Applies the truncated series to a coefficient sequence:
/// `c_j = Σ_{k=1}^{K} β_k (a_j − a_{j+k})` for `0 ≤ j ≤ j_max`.
/// Needs `a` materialized through `j_max + K`.
pub fn sqrt_apply_sequence(a: &[f64], j_max: usize, k: usize) -> Result<SqrtSequence, FracError> {
    assert!(k >= 1);
    let needed = j_max + k + 1;
    if a.len() < needed {
        return Err(FracError::InsufficientHorizon { needed, supplied: a.len() });
    }
    let series = beta_coefficients(k);
    let mut c = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let aj = a[j];
        let mut acc = CompensatedSum::new();
        for (i, &b) in series.beta.iter().enumerate() {
            acc.add(b * (aj - a[j + i + 1]));
        }
        c.push(acc.value());
    }
    let max_a = a.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let monotone = a.windows(2).all(|w| w[0] >= w[1]) && a.iter().all(|&x| x >= 0.0);
    Ok(SqrtSequence {
        c,
        k,
        truncation_error: series.tail_bound * max_a,
        lower_bound_certified: monotone,
    })
}
