//! Coefficient-level analysis of causal linear processes
//! `X_k = Σ_{i≥0} a_i ξ_{k−i}` and superpositions of independent columns
//! `X_k = Σ_j Σ_i c_{i,j} ξ_{k−i,j}`.
//!
//! Everything is phrased in terms of the partial sums `b_n = a_0 + … + a_n`
//! (`b_{−1} = 0`) and their Cesàro averages
//! `b̄_n = (b_0 + … + b_{n−1})/n = Σ_{k<n} (1−k/n) a_k`,
//! the coefficient of the averaged kernel `H̄_n = b̄_n ξ_1` (the index-
//! shifted average matches the kernel identities exactly at finite n;
//! the limit is the same): a martingale approximation exists iff the
//! decay condition `(1/n) Σ_i (b_{i+n} − b_i)² → 0` holds and `b̄_n`
//! converges (in ℓ²(J) for arrays), with `κ² = lim ‖b̄_n‖²`.
//!
//! "Numerically Cauchy" means: oscillation over the last dyadic window
//! `[n_max/2, n_max]` below `tol_cauchy` (default 1e-3); `inconclusive`
//! between `tol_cauchy` and `10·tol_cauchy`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fracpoisson::{sqrt_apply_sequence, FracError, SqrtSequence};
use crate::linalg::CompensatedSum;
use crate::slope::{fit_slope, is_dyadic, SlopeVerdict, Verdict};

/// Default oscillation tolerance for the windowed Cauchy test.
pub const TOL_CAUCHY: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum SeqError {
    /// A computation needs coefficients beyond the materialized horizon.
    HorizonExceeded { needed: usize, materialized: usize },
    /// No square-summability tail bound can be established for the source.
    TailNotCertified,
    /// Array columns were materialized to different horizons.
    RaggedColumns { lengths: Vec<usize> },
    Frac(FracError),
}

impl fmt::Display for SeqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqError::HorizonExceeded { needed, materialized } => {
                write!(f, "need horizon {needed}, materialized {materialized}")
            }
            SeqError::TailNotCertified => {
                write!(f, "no tail bound available for the coefficient source")
            }
            SeqError::RaggedColumns { lengths } => {
                write!(f, "columns have differing horizons {lengths:?}")
            }
            SeqError::Frac(e) => write!(f, "{e}"),
        }
    }
}

impl SeqError {
    pub fn code(&self) -> &'static str {
        match self {
            SeqError::HorizonExceeded { .. } => "HorizonExceeded",
            SeqError::TailNotCertified => "TailNotCertified",
            SeqError::RaggedColumns { .. } => "RaggedColumns",
            SeqError::Frac(e) => e.code(),
        }
    }
}

impl From<FracError> for SeqError {
    fn from(e: FracError) -> Self {
        SeqError::Frac(e)
    }
}

/// Closed-form coefficient generators (named, parameterized — no
/// expression language).
#[derive(Debug, Clone, PartialEq)]
pub enum SeqSource {
    /// Explicit finite array; zero beyond its length.
    Array(Vec<f64>),
    /// `a_j = ρ^j`, |ρ| < 1.
    Geometric { rho: f64 },
    /// `a_j = 1/(√(j+1)·ln(j+2))`: square-summable but slowly decaying.
    Example5,
}

impl SeqSource {
    pub fn coefficient(&self, j: usize) -> f64 {
        match self {
            SeqSource::Array(v) => v.get(j).copied().unwrap_or(0.0),
            SeqSource::Geometric { rho } => rho.powi(j as i32),
            SeqSource::Example5 => {
                let jf = j as f64;
                1.0 / ((jf + 1.0).sqrt() * (jf + 2.0).ln())
            }
        }
    }
}

/// Certified bound on `Σ_{j>I} a_j²`, the square-summability tail.
#[derive(Debug, Clone, PartialEq)]
pub enum TailRule {
    /// Coefficients vanish beyond `len`.
    ZeroBeyond { len: usize },
    /// `Σ_{j>I} ρ^{2j} = ρ^{2(I+1)}/(1−ρ²)`.
    Geometric { rho: f64 },
    /// `Σ_{j>I} 1/((j+1)ln²(j+2)) ≤ 2/ln(I+2)`; also valid for any
    /// sequence dominated pointwise by it.
    SlowLog,
    /// Increments of a unit-speed phase `√ln n`:
    /// `Σ_{j>I} c_j² ≤ 1/(4(I−1)·ln(I−1))` for I ≥ 4.
    PhaseIncrement,
    /// No certification available from the supplied data.
    Uncertified,
}

/// One coefficient sequence with materialized partial sums and Cesàro
/// averages (compensated summation throughout).
#[derive(Debug, Clone)]
pub struct CoeffSeq {
    a: Vec<f64>,
    b: Vec<f64>,
    bbar: Vec<f64>,
    tail: TailRule,
    analytic_bbar_limit: Option<f64>,
}

/// Materializes `a_0..a_{n_max}`, `b_0..b_{n_max}` and `b̄_1..b̄_{n_max}`.
pub fn partial_sums(source: &SeqSource, n_max: usize) -> CoeffSeq {
    assert!(n_max >= 1);
    let mut a = Vec::with_capacity(n_max + 1);
    let mut b = Vec::with_capacity(n_max + 1);
    let mut bbar = Vec::with_capacity(n_max);
    let mut acc_b = CompensatedSum::new();
    let mut acc_bbar = CompensatedSum::new();
    for j in 0..=n_max {
        let aj = source.coefficient(j);
        a.push(aj);
        if j >= 1 {
            // bbar_n = (b_0 + … + b_{n−1})/n, so b̄_{j} consumes b_{j−1}
            acc_bbar.add(acc_b.value());
            bbar.push(acc_bbar.value() / j as f64);
        }
        acc_b.add(aj);
        b.push(acc_b.value());
    }
    let (tail, limit) = match source {
        SeqSource::Array(v) => {
            (TailRule::ZeroBeyond { len: v.len() }, Some(v.iter().sum::<f64>()))
        }
        SeqSource::Geometric { rho } => {
            (TailRule::Geometric { rho: *rho }, Some(1.0 / (1.0 - rho)))
        }
        SeqSource::Example5 => (TailRule::SlowLog, None),
    };
    CoeffSeq { a, b, bbar, tail, analytic_bbar_limit: limit }
}

impl CoeffSeq {
    /// Wraps already-computed coefficients with an explicit tail rule.
    pub fn from_parts(a: Vec<f64>, tail: TailRule, analytic_bbar_limit: Option<f64>) -> CoeffSeq {
        let n_max = a.len().saturating_sub(1).max(1);
        let mut seq = partial_sums(&SeqSource::Array(a), n_max);
        seq.tail = tail;
        seq.analytic_bbar_limit = analytic_bbar_limit;
        seq
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `b̄_n` for `n = 1..=horizon` (entry 0 is `b̄_1`).
    pub fn bbar(&self) -> &[f64] {
        &self.bbar
    }

    /// Largest index with a materialized coefficient.
    pub fn horizon(&self) -> usize {
        self.a.len() - 1
    }

    pub fn tail_rule(&self) -> &TailRule {
        &self.tail
    }

    pub fn analytic_bbar_limit(&self) -> Option<f64> {
        self.analytic_bbar_limit
    }

    /// `b_i` with the `b_{−1} = 0` convention.
    pub fn b_at(&self, i: isize) -> f64 {
        if i < 0 {
            0.0
        } else {
            self.b[i as usize]
        }
    }

    /// Certified `Σ_{j>I} a_j²`, or Err when the source carries no rule.
    pub fn tail_sq(&self, i: usize) -> Result<f64, SeqError> {
        match &self.tail {
            TailRule::ZeroBeyond { len } => {
                if i + 1 >= *len {
                    Ok(0.0)
                } else {
                    Ok(self.a[i + 1..*len].iter().map(|x| x * x).sum())
                }
            }
            TailRule::Geometric { rho } => {
                let r2 = rho * rho;
                Ok(r2.powi(i as i32 + 1) / (1.0 - r2))
            }
            TailRule::SlowLog => Ok(2.0 / ((i as f64) + 2.0).ln()),
            TailRule::PhaseIncrement => {
                if i < 4 {
                    return Err(SeqError::TailNotCertified);
                }
                let x = (i - 1) as f64;
                Ok(1.0 / (4.0 * x * x.ln()))
            }
            TailRule::Uncertified => Err(SeqError::TailNotCertified),
        }
    }

    /// `|b_n|/√n` over the horizon; the square-summability consequence
    /// `b_n = O(√n)` means this stays bounded.
    pub fn b_over_sqrt_n_max(&self) -> f64 {
        self.b
            .iter()
            .enumerate()
            .skip(1)
            .fold(0.0f64, |m, (n, &b)| m.max(b.abs() / (n as f64).sqrt()))
    }
}

/// `‖V_n g‖² = Σ_{i=−1}^{i_max} (b_{i+n} − b_i)²` plus a certified bound
/// on the dropped tail (`Σ_{i>i_max} (b_{i+n}−b_i)² ≤ n²·Σ_{j>i_max} a_j²`
/// by Cauchy–Schwarz on each window).
#[derive(Debug, Clone, Copy)]
pub struct VnNormSq {
    pub value: f64,
    pub tail_bound: f64,
}

pub fn vn_norm_sq_linear(seq: &CoeffSeq, n: usize, i_max: usize) -> Result<VnNormSq, SeqError> {
    assert!(n >= 1);
    let needed = i_max + n;
    if needed > seq.horizon() {
        return Err(SeqError::HorizonExceeded { needed, materialized: seq.horizon() });
    }
    let mut acc = CompensatedSum::new();
    for i in -1..=(i_max as isize) {
        let d = seq.b_at(i + n as isize) - seq.b_at(i);
        acc.add(d * d);
    }
    let tail_a = seq.tail_sq(i_max)?;
    Ok(VnNormSq { value: acc.value(), tail_bound: (n as f64) * (n as f64) * tail_a })
}

/// Condition on `(1/n)‖V_n g‖²` trending to zero: slope of its log
/// against `log n` must be negative.
pub fn vn_decay_diagnostic(
    seq: &CoeffSeq,
    n_grid: &[usize],
    i_max: usize,
    margin: f64,
) -> Result<SlopeVerdict, SeqError> {
    assert!(is_dyadic(n_grid), "grid must be dyadic");
    let mut values = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let v = vn_norm_sq_linear(seq, n, i_max)?;
        values.push(v.value / n as f64);
    }
    Ok(fit_slope(n_grid, &values, 0.0, margin))
}

/// Windowed numerically-Cauchy check.
#[derive(Debug, Clone)]
pub struct CauchyCheck {
    pub window: (usize, usize),
    /// For scalars: exact max−min of b̄ over the window. For vectors: a
    /// rigorous upper bound on the max pairwise ℓ² distance.
    pub oscillation: f64,
    /// Rigorous lower bound witness (sampled pairwise distance); equals
    /// `oscillation` in the scalar case.
    pub oscillation_lower: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

fn scalar_cauchy(bbar: &[f64], n_max: usize, tol: f64) -> CauchyCheck {
    let lo = (n_max / 2).max(1);
    let slice = &bbar[lo - 1..n_max];
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in slice {
        min = min.min(v);
        max = max.max(v);
    }
    let osc = max - min;
    let verdict = if osc < tol {
        Verdict::Holds
    } else if osc > 10.0 * tol {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    CauchyCheck { window: (lo, n_max), oscillation: osc, oscillation_lower: osc, tol, verdict }
}

/// Outcome of a martingale-approximation decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exists {
    Yes,
    No,
    Inconclusive,
}

impl Exists {
    pub fn as_str(&self) -> &'static str {
        match self {
            Exists::Yes => "yes",
            Exists::No => "no",
            Exists::Inconclusive => "inconclusive",
        }
    }
}

/// Verdict plus the two sub-criteria it was derived from.
#[derive(Debug, Clone)]
pub struct MAVerdict {
    pub exists: Exists,
    /// `(lim b̄_n)²` (or `lim ‖b̄_n‖²`); present only when `exists` is yes.
    pub kappa_sq: Option<f64>,
    /// Whether kappa came from a closed-form limit rather than the window.
    pub kappa_analytic: bool,
    pub norm_condition: SlopeVerdict,
    pub bbar_cauchy: CauchyCheck,
    /// Sampled (n, b̄_n) trace (scalar) or (n, ‖b̄_n‖²) trace (arrays).
    pub trace: Vec<(usize, f64)>,
}

fn combine(norm_condition: &SlopeVerdict, cauchy: &CauchyCheck) -> Exists {
    match (norm_condition.verdict, cauchy.verdict) {
        (Verdict::Holds, Verdict::Holds) => Exists::Yes,
        (Verdict::Fails, _) | (_, Verdict::Fails) => Exists::No,
        _ => Exists::Inconclusive,
    }
}

fn default_grid(n_max: usize) -> Vec<usize> {
    // dyadic grid from 32 (or lower for short sequences) up to ~n_max/2
    let hi = (n_max / 2).max(2);
    let hi_exp = hi.ilog2();
    let lo_exp = hi_exp.saturating_sub(7).max(1);
    crate::slope::dyadic_grid(lo_exp, hi_exp)
}

fn sampled_trace(values: &[f64], n_max: usize) -> Vec<(usize, f64)> {
    // bbar[n-1] = b̄_n; sample ≤ 64 points log-spaced plus the endpoint
    let mut pts = Vec::new();
    let mut n = 1usize;
    while n < n_max {
        pts.push((n, values[n - 1]));
        n = (n * 2).max(n + 1);
    }
    pts.push((n_max, values[n_max - 1]));
    pts
}

/// Equivalence for one column: MA exists iff the decay condition holds
/// and b̄_n converges; then κ² = (lim b̄_n)².
pub fn ma_verdict_linear(seq: &CoeffSeq, n_max: usize) -> Result<MAVerdict, SeqError> {
    ma_verdict_linear_with(seq, n_max, TOL_CAUCHY, None)
}

pub fn ma_verdict_linear_with(
    seq: &CoeffSeq,
    n_max: usize,
    tol_cauchy: f64,
    i_max: Option<usize>,
) -> Result<MAVerdict, SeqError> {
    if n_max > seq.bbar.len() {
        return Err(SeqError::HorizonExceeded { needed: n_max, materialized: seq.bbar.len() });
    }
    let grid = default_grid(n_max);
    let i_max = i_max.unwrap_or_else(|| {
        let biggest = *grid.last().unwrap();
        (seq.horizon() - biggest).min(4 * biggest)
    });
    let norm_condition = vn_decay_diagnostic(seq, &grid, i_max, crate::slope::DEFAULT_MARGIN)?;
    let cauchy = scalar_cauchy(&seq.bbar, n_max, tol_cauchy);
    let exists = combine(&norm_condition, &cauchy);
    let (kappa_sq, kappa_analytic) = if exists == Exists::Yes {
        match seq.analytic_bbar_limit {
            Some(l) => (Some(l * l), true),
            None => {
                let last = seq.bbar[n_max - 1];
                (Some(last * last), false)
            }
        }
    } else {
        (None, false)
    };
    Ok(MAVerdict {
        exists,
        kappa_sq,
        kappa_analytic,
        norm_condition,
        bbar_cauchy: cauchy,
        trace: sampled_trace(&seq.bbar, n_max),
    })
}

/// A finite family of columns, all materialized to the same horizon.
#[derive(Debug, Clone)]
pub struct CoeffArray {
    labels: Vec<String>,
    columns: Vec<CoeffSeq>,
}

impl CoeffArray {
    pub fn new(labels: Vec<String>, columns: Vec<CoeffSeq>) -> Result<CoeffArray, SeqError> {
        assert_eq!(labels.len(), columns.len());
        assert!(!columns.is_empty());
        let h = columns[0].horizon();
        if columns.iter().any(|c| c.horizon() != h) {
            return Err(SeqError::RaggedColumns {
                lengths: columns.iter().map(|c| c.horizon() + 1).collect(),
            });
        }
        Ok(CoeffArray { labels, columns })
    }

    /// Explicit columns are finitely supported (zero beyond their data);
    /// they are materialized out to `n_max`.
    pub fn from_columns(columns: Vec<Vec<f64>>, n_max: usize) -> Result<CoeffArray, SeqError> {
        if columns.is_empty() {
            return Err(SeqError::RaggedColumns { lengths: vec![] });
        }
        let len = columns[0].len();
        if columns.iter().any(|c| c.len() != len) {
            return Err(SeqError::RaggedColumns {
                lengths: columns.iter().map(|c| c.len()).collect(),
            });
        }
        let labels = (0..columns.len()).map(|j| format!("j{j}")).collect();
        let cols = columns
            .into_iter()
            .map(|c| partial_sums(&SeqSource::Array(c), n_max.max(1)))
            .collect();
        CoeffArray::new(labels, cols)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn columns(&self) -> &[CoeffSeq] {
        &self.columns
    }

    pub fn horizon(&self) -> usize {
        self.columns[0].horizon()
    }
}

/// Element of ℓ²(J): one entry per column.
#[derive(Debug, Clone)]
pub struct L2JVector {
    pub entries: Vec<f64>,
    pub norm_sq: f64,
}

impl L2JVector {
    pub fn new(entries: Vec<f64>) -> L2JVector {
        let norm_sq = entries.iter().map(|x| x * x).sum();
        L2JVector { entries, norm_sq }
    }

    pub fn dist(&self, other: &L2JVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// `(𝐛_n, 𝐛̄_n)` assembled across columns at the requested indices.
pub fn superlinear_bars(
    arr: &CoeffArray,
    points: &[usize],
) -> Result<Vec<(usize, L2JVector, L2JVector)>, SeqError> {
    let mut out = Vec::with_capacity(points.len());
    for &n in points {
        if n < 1 || n > arr.horizon() {
            return Err(SeqError::HorizonExceeded { needed: n, materialized: arr.horizon() });
        }
        let b = L2JVector::new(arr.columns.iter().map(|c| c.b[n]).collect());
        let bbar = L2JVector::new(arr.columns.iter().map(|c| c.bbar[n - 1]).collect());
        out.push((n, b, bbar));
    }
    Ok(out)
}

/// ℓ²(J)-valued analogue of the scalar decay condition:
/// `(1/n) Σ_{i=−1}^{i_max} ‖𝐛_{i+n} − 𝐛_i‖²` fitted over the grid.
pub fn vn_decay_diagnostic_array(
    arr: &CoeffArray,
    n_grid: &[usize],
    i_max: usize,
    margin: f64,
) -> Result<SlopeVerdict, SeqError> {
    assert!(is_dyadic(n_grid), "grid must be dyadic");
    let mut values = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let needed = i_max + n;
        if needed > arr.horizon() {
            return Err(SeqError::HorizonExceeded { needed, materialized: arr.horizon() });
        }
        // certify the dropped tail is bounded for every column
        for c in &arr.columns {
            let _ = c.tail_sq(i_max)?;
        }
        let mut acc = CompensatedSum::new();
        for i in -1..=(i_max as isize) {
            let mut d2 = 0.0;
            for c in &arr.columns {
                let d = c.b_at(i + n as isize) - c.b_at(i);
                d2 += d * d;
            }
            acc.add(d2);
        }
        values.push(acc.value() / n as f64);
    }
    Ok(fit_slope(n_grid, &values, 0.0, margin))
}

fn vector_cauchy(arr: &CoeffArray, n_max: usize, tol: f64) -> CauchyCheck {
    let lo = (n_max / 2).max(1);
    // componentwise ranges give a rigorous upper bound on any pairwise
    // distance within the window; sampled pairs give a lower bound
    let mut mins = vec![f64::INFINITY; arr.columns.len()];
    let mut maxs = vec![f64::NEG_INFINITY; arr.columns.len()];
    for n in lo..=n_max {
        for (j, c) in arr.columns.iter().enumerate() {
            let v = c.bbar[n - 1];
            mins[j] = mins[j].min(v);
            maxs[j] = maxs[j].max(v);
        }
    }
    let upper = mins
        .iter()
        .zip(&maxs)
        .map(|(lo, hi)| (hi - lo) * (hi - lo))
        .sum::<f64>()
        .sqrt();

    let mut sample_points = Vec::new();
    let mut n = lo;
    while n < n_max {
        sample_points.push(n);
        n += ((n_max - lo) / 32).max(1);
    }
    sample_points.push(n_max);
    let vecs: Vec<L2JVector> = sample_points
        .iter()
        .map(|&n| L2JVector::new(arr.columns.iter().map(|c| c.bbar[n - 1]).collect()))
        .collect();
    let mut lower = 0.0f64;
    for i in 0..vecs.len() {
        for k in i + 1..vecs.len() {
            lower = lower.max(vecs[i].dist(&vecs[k]));
        }
    }

    let verdict = if upper < tol {
        Verdict::Holds
    } else if lower > 10.0 * tol {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    CauchyCheck { window: (lo, n_max), oscillation: upper, oscillation_lower: lower, tol, verdict }
}

/// Array-level decision: MA exists iff the ℓ²(J) decay condition holds
/// and `𝐛̄_n` is numerically Cauchy; `κ² = lim ‖𝐛̄_n‖²` when it does.
pub fn ma_verdict_array(arr: &CoeffArray, n_max: usize) -> Result<MAVerdict, SeqError> {
    ma_verdict_array_with(arr, n_max, TOL_CAUCHY, None, None)
}

pub fn ma_verdict_array_with(
    arr: &CoeffArray,
    n_max: usize,
    tol_cauchy: f64,
    grid: Option<&[usize]>,
    i_max: Option<usize>,
) -> Result<MAVerdict, SeqError> {
    if n_max > arr.horizon() {
        return Err(SeqError::HorizonExceeded { needed: n_max, materialized: arr.horizon() });
    }
    let default = default_grid(n_max);
    let grid = grid.unwrap_or(&default);
    let i_max = i_max.unwrap_or_else(|| {
        let biggest = *grid.last().unwrap();
        (arr.horizon() - biggest).min(4 * biggest)
    });
    let norm_condition = vn_decay_diagnostic_array(arr, grid, i_max, crate::slope::DEFAULT_MARGIN)?;
    let cauchy = vector_cauchy(arr, n_max, tol_cauchy);
    let exists = combine(&norm_condition, &cauchy);

    let norm_sq_at = |n: usize| -> f64 {
        arr.columns.iter().map(|c| c.bbar[n - 1] * c.bbar[n - 1]).sum()
    };
    let (kappa_sq, kappa_analytic) = if exists == Exists::Yes {
        let analytic: Option<f64> = arr
            .columns
            .iter()
            .map(|c| c.analytic_bbar_limit.map(|l| l * l))
            .try_fold(0.0, |acc, x| x.map(|v| acc + v));
        match analytic {
            Some(k) => (Some(k), true),
            None => (Some(norm_sq_at(n_max)), false),
        }
    } else {
        (None, false)
    };

    let mut trace = Vec::new();
    let mut n = 1usize;
    while n < n_max {
        trace.push((n, norm_sq_at(n)));
        n *= 2;
    }
    trace.push((n_max, norm_sq_at(n_max)));

    Ok(MAVerdict {
        exists,
        kappa_sq,
        kappa_analytic,
        norm_condition,
        bbar_cauchy: cauchy,
        trace,
    })
}

/// Report from building the slowly-decaying fixture: `a` as above,
/// `c = √(I−Q) a` truncated at order K, and the certified growth facts.
#[derive(Debug, Clone)]
pub struct Example5Report {
    pub a: CoeffSeq,
    pub c: CoeffSeq,
    pub sqrt_report: SqrtSequence,
    /// First index from which `c_j ≥ a_j/(9√j)` holds through the horizon
    /// (the truncated c_j are certified lower bounds, so this is sound).
    pub j0: Option<usize>,
    /// min over j ≥ j0 of c_j/(a_j/(9√j)).
    pub min_bound_ratio: f64,
    /// Partial sums of c at decade checkpoints (n, b_n).
    pub b_checkpoints: Vec<(usize, f64)>,
    pub b_strictly_increasing_from: Option<usize>,
}

/// Builds the slow-log sequence, applies the series, and verifies the
/// coefficient lower bound and the divergence evidence.
pub fn example5_build(j_max: usize, k: usize) -> Result<Example5Report, SeqError> {
    let source = SeqSource::Example5;
    let a = partial_sums(&source, j_max + k);
    let sqrt_report = sqrt_apply_sequence(a.a(), j_max, k)?;
    // c_j ≤ a_j pointwise (all terms positive, Σβ = 1), so the slow-log
    // tail rule dominates c as well; b̄ of c has no closed-form limit.
    let c = CoeffSeq::from_parts(sqrt_report.c.clone(), TailRule::SlowLog, None);

    let mut j0 = None;
    let mut min_ratio = f64::INFINITY;
    for j in (1..=j_max).rev() {
        let bound = a.a()[j] / (9.0 * (j as f64).sqrt());
        let ratio = c.a()[j] / bound;
        if c.a()[j] >= bound {
            j0 = Some(j);
            min_ratio = min_ratio.min(ratio);
        } else {
            break;
        }
    }

    let mut increasing_from = None;
    for j in (0..=j_max).rev() {
        if c.a()[j] > 0.0 {
            increasing_from = Some(j);
        } else {
            break;
        }
    }
    let mut checkpoints = Vec::new();
    let mut n = 1usize;
    while n <= j_max {
        checkpoints.push((n, c.b()[n]));
        n *= 10;
    }
    Ok(Example5Report {
        a,
        c,
        sqrt_report,
        j0,
        min_bound_ratio: min_ratio,
        b_checkpoints: checkpoints,
        b_strictly_increasing_from: increasing_from,
    })
}

/// The oscillating two-column fixture: partial sums follow a unit circle
/// at phase `√ln n` (zero convention at n = 0, 1 pinned by the first two
/// coefficients being zero).
pub fn example6_b(n: usize, col: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let phase = ((n as f64).ln()).sqrt();
    if col == 0 {
        phase.cos()
    } else {
        phase.sin()
    }
}

#[derive(Debug, Clone)]
pub struct Example6Traces {
    /// Checkpoints (n, b̄_{n,0}, b̄_{n,1}, b_{n,0}, b_{n,1}).
    pub checkpoints: Vec<(usize, f64, f64, f64, f64)>,
    /// At the final horizon: (b̄_0 − b_0, b̄_1 − b_1, b̄_0² + b̄_1²).
    pub final_dev0: f64,
    pub final_dev1: f64,
    pub final_norm_sq: f64,
}

/// Materializes the two-column array to `n_max` and returns convergence
/// traces of the Cesàro averages.
pub fn example6_build(n_max: usize) -> Result<(CoeffArray, Example6Traces), SeqError> {
    assert!(n_max >= 4);
    let mut c0 = Vec::with_capacity(n_max + 1);
    let mut c1 = Vec::with_capacity(n_max + 1);
    let mut prev0 = 0.0;
    let mut prev1 = 0.0;
    for n in 0..=n_max {
        let b0 = example6_b(n, 0);
        let b1 = example6_b(n, 1);
        c0.push(b0 - prev0);
        c1.push(b1 - prev1);
        prev0 = b0;
        prev1 = b1;
    }
    let col0 = CoeffSeq::from_parts(c0, TailRule::PhaseIncrement, None);
    let col1 = CoeffSeq::from_parts(c1, TailRule::PhaseIncrement, None);
    let arr = CoeffArray::new(
        vec![String::from("cos"), String::from("sin")],
        vec![col0, col1],
    )?;

    let mut checkpoints = Vec::new();
    let mut n = 4usize;
    while n < n_max {
        checkpoints.push(checkpoint(&arr, n));
        n *= 4;
    }
    checkpoints.push(checkpoint(&arr, n_max));
    let (_, bb0, bb1, b0, b1) = *checkpoints.last().unwrap();
    let traces = Example6Traces {
        checkpoints,
        final_dev0: bb0 - b0,
        final_dev1: bb1 - b1,
        final_norm_sq: bb0 * bb0 + bb1 * bb1,
    };
    Ok((arr, traces))
}

fn checkpoint(arr: &CoeffArray, n: usize) -> (usize, f64, f64, f64, f64) {
    (
        n,
        arr.columns()[0].bbar[n - 1],
        arr.columns()[1].bbar[n - 1],
        arr.columns()[0].b[n],
        arr.columns()[1].b[n],
    )
}

/// Streaming extremes of `b̄_{n,0}` up to `n_limit` from the closed form;
/// nothing is materialized, so horizons of 10⁸ are reachable.
#[derive(Debug, Clone, Copy)]
pub struct Extremes {
    pub min: f64,
    pub argmin: usize,
    pub max: f64,
    pub argmax: usize,
}

impl Extremes {
    pub fn range(&self) -> f64 {
        self.max - self.min
    }
}

pub fn example6_stream_extremes(n_limit: usize) -> Extremes {
    let mut acc = CompensatedSum::new();
    let mut ext = Extremes { min: f64::INFINITY, argmin: 0, max: f64::NEG_INFINITY, argmax: 0 };
    for n in 1..=n_limit {
        acc.add(example6_b(n - 1, 0));
        let bbar = acc.value() / n as f64;
        if bbar < ext.min {
            ext.min = bbar;
            ext.argmin = n;
        }
        if bbar > ext.max {
            ext.max = bbar;
            ext.argmax = n;
        }
    }
    ext
}
