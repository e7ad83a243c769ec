//! Slope-fit surrogates for asymptotic decay conditions.
//!
//! The decision criteria are limits (`o(√n)`, averages tending to 0); a
//! finite tool replaces them by the least-squares slope of `log y` against
//! `log n` over a dyadic grid, with a declared margin band around the
//! threshold inside which the verdict is `Inconclusive`.

use alloc::vec::Vec;

/// Default half-width of the inconclusive band around the threshold.
pub const DEFAULT_MARGIN: f64 = 0.1;

/// Values at or below this floor are treated as exact zeros of the
/// underlying sequence (log undefined).
const ZERO_FLOOR: f64 = 1e-280;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Outcome of a log-log slope fit against a decay threshold.
#[derive(Debug, Clone)]
pub struct SlopeVerdict {
    pub grid: Vec<usize>,
    pub values: Vec<f64>,
    pub log_values: Vec<f64>,
    pub slope: f64,
    pub threshold: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

/// `[2^lo, 2^(lo+1), …, 2^hi]`.
pub fn dyadic_grid(lo_exp: u32, hi_exp: u32) -> Vec<usize> {
    assert!(lo_exp <= hi_exp && hi_exp < usize::BITS);
    (lo_exp..=hi_exp).map(|e| 1usize << e).collect()
}

/// Strictly increasing and each entry twice its predecessor.
pub fn is_dyadic(grid: &[usize]) -> bool {
    !grid.is_empty()
        && grid[0] >= 1
        && grid.windows(2).all(|w| w[1] == 2 * w[0])
}

/// Fits `log(values)` against `log(grid)` and compares the slope with
/// `threshold`: `Holds` iff slope < threshold − margin, `Fails` iff
/// slope > threshold + margin.
///
/// A sequence that is identically zero (to the floor) trivially decays:
/// slope is reported as −∞ and the verdict is `Holds`. Zero entries in an
/// otherwise nonzero sequence are excluded from the fit.
pub fn fit_slope(grid: &[usize], values: &[f64], threshold: f64, margin: f64) -> SlopeVerdict {
    assert_eq!(grid.len(), values.len());
    assert!(margin >= 0.0);
    let log_values: Vec<f64> = values
        .iter()
        .map(|&v| if v > ZERO_FLOOR { v.ln() } else { f64::NEG_INFINITY })
        .collect();

    let pts: Vec<(f64, f64)> = grid
        .iter()
        .zip(&log_values)
        .filter(|(_, lv)| lv.is_finite())
        .map(|(&n, &lv)| ((n as f64).ln(), lv))
        .collect();

    let slope = if pts.len() < 2 {
        // nothing left to fit: the sequence is (numerically) zero
        f64::NEG_INFINITY
    } else {
        let m = pts.len() as f64;
        let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
        sxy / sxx
    };

    let verdict = if slope < threshold - margin {
        Verdict::Holds
    } else if slope > threshold + margin {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };

    SlopeVerdict {
        grid: grid.to_vec(),
        values: values.to_vec(),
        log_values,
        slope,
        threshold,
        margin,
        verdict,
    }
}
