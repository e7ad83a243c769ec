//! Exact finite-state engine for the transition operator `Q`, its
//! adjoint, the Cesàro sums `V_n` and `V̄_n`, the plus norm, the limiting
//! martingale kernel, and residual second moments.
//!
//! Conventions used throughout:
//! - All inner products are π-weighted: `⟨f,g⟩ = Σ_w π(w) f(w) g(w)`.
//! - `V_n g = Σ_{k=0}^{n−1} Q^k g` and `V̄_n g = Σ_{k=0}^{n−1} (1−k/n) Q^k g`,
//!   computed by one vector recurrence (no matrix powers materialized).
//! - Pair kernels live in L²(π₁), π₁ the joint law of two consecutive
//!   states: `‖h‖² = Σ_{w0} π(w0) Σ_{w1} Q(w0,w1) h(w0,w1)²`.
//!
//! The Poisson solve `(I−Q)u = g` is restricted to the mean-zero subspace
//! by deflation: `I − Q + 𝟙πᵀ` is nonsingular on all of ℝⁿ for an ergodic
//! chain and agrees with `I − Q` on mean-zero inputs.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{dot, LuFactors, Matrix};
use crate::slope::{fit_slope, is_dyadic, SlopeVerdict};

/// Row sums may deviate from 1 by at most this much before the input is
/// rejected; anything closer is renormalized.
pub const ROW_SUM_TOL: f64 = 1e-9;
/// Residual tolerance for a user-supplied stationary vector.
pub const PI_RESIDUAL_TOL: f64 = 1e-10;
/// Mean-zero tolerance for observables.
pub const MEAN_ZERO_TOL: f64 = 1e-10;
/// Relative tolerance for the dual evaluation of the second moment.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum ChainError {
    /// A row of the raw transition matrix is too far from summing to 1.
    NonStochasticRow { row: usize, sum: f64 },
    /// A transition probability is negative.
    NegativeEntry { row: usize, col: usize, value: f64 },
    /// The support graph is reducible or periodic.
    NotErgodic { reason: ErgodicFailure },
    /// The supplied stationary vector fails `π·Q = π` or positivity.
    BadPi { residual: f64 },
    /// An observable is not mean zero under π.
    MeanNotZero { mean: f64 },
    /// The two evaluations of `E[S_n²]` disagree beyond tolerance.
    CrossCheckFailed { primary: f64, alternate: f64 },
    /// The deflated `(I−Q)` system is numerically singular.
    SingularSolve,
    /// Vector length does not match the chain's state count.
    DimensionMismatch { expected: usize, got: usize },
    /// Input matrix is not square.
    NotSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErgodicFailure {
    Reducible,
    Periodic { period: usize },
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::NonStochasticRow { row, sum } => {
                write!(f, "row {row} sums to {sum}, not 1 (tolerance {ROW_SUM_TOL})")
            }
            ChainError::NegativeEntry { row, col, value } => {
                write!(f, "negative transition probability {value} at ({row},{col})")
            }
            ChainError::NotErgodic { reason } => match reason {
                ErgodicFailure::Reducible => write!(f, "transition graph is not strongly connected"),
                ErgodicFailure::Periodic { period } => {
                    write!(f, "transition graph is periodic with period {period}")
                }
            },
            ChainError::BadPi { residual } => {
                write!(f, "supplied pi fails pi·Q = pi (residual {residual})")
            }
            ChainError::MeanNotZero { mean } => {
                write!(f, "observable has pi-mean {mean}, expected 0")
            }
            ChainError::CrossCheckFailed { primary, alternate } => {
                write!(f, "second-moment evaluations disagree: {primary} vs {alternate}")
            }
            ChainError::SingularSolve => write!(f, "deflated (I-Q) solve is singular"),
            ChainError::DimensionMismatch { expected, got } => {
                write!(f, "expected length {expected}, got {got}")
            }
            ChainError::NotSquare => write!(f, "transition matrix is not square"),
        }
    }
}

/// Stable machine-readable code for each error kind.
impl ChainError {
    pub fn code(&self) -> &'static str {
        match self {
            ChainError::NonStochasticRow { .. } => "NonStochasticRow",
            ChainError::NegativeEntry { .. } => "NegativeEntry",
            ChainError::NotErgodic { .. } => "NotErgodic",
            ChainError::BadPi { .. } => "BadPi",
            ChainError::MeanNotZero { .. } => "MeanNotZero",
            ChainError::CrossCheckFailed { .. } => "CrossCheckFailed",
            ChainError::SingularSolve => "SingularSolve",
            ChainError::DimensionMismatch { .. } => "DimensionMismatch",
            ChainError::NotSquare => "NotSquare",
        }
    }
}

/// Finite-state ergodic chain: row-stochastic `Q` and stationary `π`.
#[derive(Debug, Clone)]
pub struct StationaryChain {
    q: Matrix,
    pi: Vec<f64>,
}

/// Mean-zero (under π) state function, the `g` in `S_n = Σ g(W_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    values: Vec<f64>,
}

/// Function on consecutive state pairs, an element of L²(π₁).
#[derive(Debug, Clone)]
pub struct PairKernel {
    values: Matrix,
}

/// Solution of `(I−Q)u = g` on the mean-zero subspace.
#[derive(Debug, Clone)]
pub struct PoissonSolution {
    pub u: Observable,
    /// Max-abs residual of `(I−Q)u − g`.
    pub residual: f64,
}

/// Adjoint `Q*` together with the operator classification.
#[derive(Debug, Clone)]
pub struct AdjointReport {
    pub qstar: Matrix,
    /// `Q* = Q` within 1e-10.
    pub reversible: bool,
    /// `QQ* = Q*Q` within 1e-10.
    pub normal: bool,
    /// Columns of `Q` sum to 1 within 1e-10.
    pub doubly_stochastic: bool,
    pub note: String,
}

impl StationaryChain {
    /// Validates a raw nonnegative matrix: renormalizes rows within
    /// `ROW_SUM_TOL` of stochastic, computes π by direct linear solve when
    /// absent (or checks a supplied one), and verifies ergodicity
    /// structurally (strong connectivity + aperiodicity of the support
    /// graph).
    pub fn validate(q_raw: &[Vec<f64>], pi_opt: Option<&[f64]>) -> Result<Self, ChainError> {
        let n = q_raw.len();
        if n == 0 || q_raw.iter().any(|r| r.len() != n) {
            return Err(ChainError::NotSquare);
        }
        let mut q = Matrix::zeros(n);
        for (i, row) in q_raw.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < 0.0 {
                    return Err(ChainError::NegativeEntry { row: i, col: j, value: v });
                }
                q.set(i, j, v);
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(ChainError::NonStochasticRow { row: i, sum });
            }
            if sum != 1.0 {
                for j in 0..n {
                    q.set(i, j, q.get(i, j) / sum);
                }
            }
        }

        check_ergodic(&q)?;

        let pi = match pi_opt {
            Some(p) => {
                if p.len() != n {
                    return Err(ChainError::DimensionMismatch { expected: n, got: p.len() });
                }
                let mut residual = 0.0f64;
                for j in 0..n {
                    let mut acc = 0.0;
                    for w in 0..n {
                        acc += p[w] * q.get(w, j);
                    }
                    residual = residual.max((acc - p[j]).abs());
                }
                let total: f64 = p.iter().sum();
                residual = residual.max((total - 1.0).abs());
                if residual > PI_RESIDUAL_TOL || p.iter().any(|&x| x <= 0.0) {
                    return Err(ChainError::BadPi { residual });
                }
                p.to_vec()
            }
            None => stationary_vector(&q)?,
        };

        Ok(StationaryChain { q, pi })
    }

    pub fn n_states(&self) -> usize {
        self.q.n()
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    /// π-weighted inner product.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n_states() {
            acc += self.pi[i] * f[i] * g[i];
        }
        acc
    }

    pub fn norm_sq(&self, f: &[f64]) -> f64 {
        self.inner(f, f)
    }

    pub fn pi_mean(&self, f: &[f64]) -> f64 {
        dot(&self.pi, f)
    }

    /// One application of the transition operator (a matrix-vector product).
    pub fn step(&self, v: &[f64]) -> Vec<f64> {
        self.q.matvec(v)
    }
}

/// Direct linear solve for the stationary vector: `(Qᵀ − I)` with the last
/// row replaced by the normalization `Σ π = 1`.
fn stationary_vector(q: &Matrix) -> Result<Vec<f64>, ChainError> {
    let n = q.n();
    let mut a = q.transpose();
    for i in 0..n {
        a.set(i, i, a.get(i, i) - 1.0);
    }
    for j in 0..n {
        a.set(n - 1, j, 1.0);
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    let lu = LuFactors::factor(&a).ok_or(ChainError::SingularSolve)?;
    let pi = lu.solve(&b);
    if pi.iter().any(|&x| x <= 0.0) {
        // an ergodic chain has strictly positive stationary mass
        return Err(ChainError::SingularSolve);
    }
    Ok(pi)
}

/// Structural ergodicity: strong connectivity of the support graph plus
/// aperiodicity (gcd of cycle lengths is 1). Spectral checks would be
/// tolerance-fragile; this is exact on the support pattern.
fn check_ergodic(q: &Matrix) -> Result<(), ChainError> {
    let n = q.n();
    let edge = |i: usize, j: usize| q.get(i, j) > 0.0;

    // forward and backward reachability from state 0
    let reach = |reverse: bool| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                let connected = if reverse { edge(v, u) } else { edge(u, v) };
                if connected && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    };
    if !reach(false).iter().all(|&s| s) || !reach(true).iter().all(|&s| s) {
        return Err(ChainError::NotErgodic { reason: ErgodicFailure::Reducible });
    }

    // period = gcd over edges (u,v) of dist(u) + 1 − dist(v), BFS from 0
    let mut dist = vec![usize::MAX; n];
    let mut queue = vec![0usize];
    dist[0] = 0;
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for v in 0..n {
            if edge(u, v) && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push(v);
            }
        }
    }
    let mut g: i64 = 0;
    for u in 0..n {
        for v in 0..n {
            if edge(u, v) {
                let d = dist[u] as i64 + 1 - dist[v] as i64;
                g = gcd(g, d.abs());
            }
        }
    }
    if g != 1 {
        return Err(ChainError::NotErgodic {
            reason: ErgodicFailure::Periodic { period: g as usize },
        });
    }
    Ok(())
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Observable {
    /// Checks the mean-zero invariant against the chain's π.
    pub fn new(chain: &StationaryChain, values: Vec<f64>) -> Result<Self, ChainError> {
        if values.len() != chain.n_states() {
            return Err(ChainError::DimensionMismatch {
                expected: chain.n_states(),
                got: values.len(),
            });
        }
        let mean = chain.pi_mean(&values);
        if mean.abs() > MEAN_ZERO_TOL {
            return Err(ChainError::MeanNotZero { mean });
        }
        Ok(Observable { values })
    }

    /// Subtracts the π-mean, then wraps.
    pub fn centered(chain: &StationaryChain, mut values: Vec<f64>) -> Result<Self, ChainError> {
        if values.len() != chain.n_states() {
            return Err(ChainError::DimensionMismatch {
                expected: chain.n_states(),
                got: values.len(),
            });
        }
        let mean = chain.pi_mean(&values);
        for v in values.iter_mut() {
            *v -= mean;
        }
        Ok(Observable { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn from_raw(values: Vec<f64>) -> Self {
        Observable { values }
    }
}

impl PairKernel {
    pub fn new(values: Matrix) -> Self {
        PairKernel { values }
    }

    pub fn value(&self, w0: usize, w1: usize) -> f64 {
        self.values.get(w0, w1)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.values
    }

    /// Squared L²(π₁) norm.
    pub fn norm_sq(&self, chain: &StationaryChain) -> f64 {
        let n = chain.n_states();
        let mut acc = 0.0;
        for w0 in 0..n {
            let mut row = 0.0;
            for w1 in 0..n {
                let h = self.values.get(w0, w1);
                row += chain.q().get(w0, w1) * h * h;
            }
            acc += chain.pi()[w0] * row;
        }
        acc
    }

    /// Conditional mean given the first coordinate, per starting state;
    /// identically ~0 for martingale-difference kernels.
    pub fn conditional_means(&self, chain: &StationaryChain) -> Vec<f64> {
        let n = chain.n_states();
        (0..n)
            .map(|w0| {
                (0..n)
                    .map(|w1| chain.q().get(w0, w1) * self.values.get(w0, w1))
                    .sum()
            })
            .collect()
    }

    pub fn sub(&self, other: &PairKernel) -> PairKernel {
        PairKernel { values: self.values.sub(&other.values) }
    }
}

/// `Q^k g`; `k = 0` is the identity. Mean zero is preserved (exactly up
/// to rounding) since `πQ = π`.
pub fn apply_q(chain: &StationaryChain, g: &Observable, k: usize) -> Observable {
    let mut v = g.values.clone();
    for _ in 0..k {
        v = chain.step(&v);
    }
    Observable { values: v }
}

/// `Q*(w,z) = π(z) Q(z,w) / π(w)` plus the classification report.
pub fn adjoint(chain: &StationaryChain) -> AdjointReport {
    let n = chain.n_states();
    let mut qstar = Matrix::zeros(n);
    for w in 0..n {
        for z in 0..n {
            qstar.set(w, z, chain.pi()[z] * chain.q().get(z, w) / chain.pi()[w]);
        }
    }
    let tol = 1e-10;
    let reversible = qstar.max_abs_diff(chain.q()) <= tol;
    let qq = chain.q().matmul(&qstar);
    let qq2 = qstar.matmul(chain.q());
    let normal = qq.max_abs_diff(&qq2) <= tol;
    let mut doubly = true;
    for j in 0..n {
        let col: f64 = (0..n).map(|i| chain.q().get(i, j)).sum();
        if (col - 1.0).abs() > tol {
            doubly = false;
        }
    }
    AdjointReport {
        qstar,
        reversible,
        normal,
        doubly_stochastic: doubly,
        note: String::from(
            "on a finite state space a co-isometry (QQ* = I on the mean-zero \
             subspace) is automatically unitary, hence normal; genuine \
             co-isometry examples live in the sequence and shift modules",
        ),
    }
}

/// `(V_n g, V̄_n g)` by a single vector recurrence.
pub fn v_sums(chain: &StationaryChain, g: &Observable, n: usize) -> (Observable, Observable) {
    assert!(n >= 1);
    let mut cur = g.values.clone();
    let mut v = cur.clone();
    let mut vbar = cur.clone();
    for k in 1..n {
        cur = chain.step(&cur);
        let w = 1.0 - (k as f64) / (n as f64);
        for i in 0..cur.len() {
            v[i] += cur[i];
            vbar[i] += w * cur[i];
        }
    }
    (Observable { values: v }, Observable { values: vbar })
}

/// `E[S_n(g)²] = 2n⟨g, V̄_n g⟩ − n‖g‖²`, cross-checked against the
/// autocovariance expansion `nγ(0) + 2Σ_{k=1}^{n−1} (n−k)γ(k)`.
pub fn sn_second_moment(chain: &StationaryChain, g: &Observable, n: usize) -> Result<f64, ChainError> {
    assert!(n >= 1);
    let (_, vbar) = v_sums(chain, g, n);
    let nf = n as f64;
    let primary = 2.0 * nf * chain.inner(g.values(), vbar.values()) - nf * chain.norm_sq(g.values());

    let mut alternate = nf * chain.norm_sq(g.values());
    let mut cur = g.values.clone();
    for k in 1..n {
        cur = chain.step(&cur);
        alternate += 2.0 * ((n - k) as f64) * chain.inner(g.values(), &cur);
    }

    let scale = primary.abs().max(alternate.abs()).max(f64::MIN_POSITIVE);
    if (primary - alternate).abs() > CROSS_CHECK_TOL * scale {
        return Err(ChainError::CrossCheckFailed { primary, alternate });
    }
    Ok(primary)
}

/// Limit of `E[S_n²]/n` on an ergodic finite chain: solve `(I−Q)u = g`
/// (deflated) and return `2⟨g,u⟩ − ‖g‖²` together with the solution.
pub fn plus_norm_sq(
    chain: &StationaryChain,
    g: &Observable,
) -> Result<(f64, PoissonSolution), ChainError> {
    let lu = poisson_factors(chain)?;
    let u = poisson_solve_with(chain, &lu, g);
    let value = 2.0 * chain.inner(g.values(), u.u.values()) - chain.norm_sq(g.values());
    Ok((value, u))
}

/// LU factors of the deflated operator `I − Q + 𝟙πᵀ`; reusable across many
/// right-hand sides (the m-grid diagnostics solve hundreds).
pub fn poisson_factors(chain: &StationaryChain) -> Result<LuFactors, ChainError> {
    let n = chain.n_states();
    let mut a = Matrix::identity(n).sub(chain.q());
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, a.get(i, j) + chain.pi()[j]);
        }
    }
    LuFactors::factor(&a).ok_or(ChainError::SingularSolve)
}

/// Solves `(I−Q)u = g` on the mean-zero subspace given the deflated factors.
pub fn poisson_solve_with(
    chain: &StationaryChain,
    lu: &LuFactors,
    g: &Observable,
) -> PoissonSolution {
    let mut u = lu.solve(g.values());
    let mean = chain.pi_mean(&u);
    for x in u.iter_mut() {
        *x -= mean;
    }
    let qu = chain.step(&u);
    let residual = u
        .iter()
        .zip(&qu)
        .zip(g.values())
        .fold(0.0f64, |m, ((&ui, &qi), &gi)| m.max((ui - qi - gi).abs()));
    PoissonSolution { u: Observable { values: u }, residual }
}

/// The limiting martingale kernel `H(w0,w1) = u(w1) − Qu(w0)` and its
/// squared norm `κ²` (equal to the plus norm squared up to rounding).
pub fn martingale_kernel(
    chain: &StationaryChain,
    g: &Observable,
) -> Result<(PairKernel, f64), ChainError> {
    let (_, sol) = plus_norm_sq(chain, g)?;
    let kernel = kernel_from_potential(chain, sol.u.values());
    let kappa_sq = kernel.norm_sq(chain);
    Ok((kernel, kappa_sq))
}

/// `h(w0,w1) = f(w1) − Qf(w0)` for a state function `f`.
pub fn kernel_from_potential(chain: &StationaryChain, f: &[f64]) -> PairKernel {
    let n = chain.n_states();
    let qf = chain.step(f);
    let mut m = Matrix::zeros(n);
    for w0 in 0..n {
        for w1 in 0..n {
            m.set(w0, w1, f[w1] - qf[w0]);
        }
    }
    PairKernel { values: m }
}

/// `H̄_n(w0,w1) = V̄_n g(w1) − QV̄_n g(w0)`; a martingale-difference kernel
/// (zero conditional mean per starting state).
pub fn hbar_kernel(chain: &StationaryChain, g: &Observable, n: usize) -> PairKernel {
    let (_, vbar) = v_sums(chain, g, n);
    kernel_from_potential(chain, vbar.values())
}

/// Exact `E[R_{nk}²]` for `R_{nk} = QV̄_n g(W_0) − QV̄_n g(W_k) + S_k(QV_n g)/n`,
/// expanded into π-weighted inner products by stationarity.
pub fn residual_second_moment(chain: &StationaryChain, g: &Observable, n: usize, k: usize) -> f64 {
    assert!(k >= 1 && k <= n);
    residual_profile(chain, g, n)[k - 1]
}

/// `E[R_{nk}²]` for every `k = 1..=n`, sharing the O(1)-per-step
/// recurrences. Terms:
/// `E[R²] = 2‖f‖² − 2⟨f,Q^k f⟩ + E[S_k(h)²] + 2⟨f, QV_k h⟩ − 2⟨h, V_k f⟩`
/// with `f = QV̄_n g`, `h = QV_n g / n`.
pub fn residual_profile(chain: &StationaryChain, g: &Observable, n: usize) -> Vec<f64> {
    assert!(n >= 1);
    let (vn, vbarn) = v_sums(chain, g, n);
    let f = chain.step(vbarn.values());
    let h: Vec<f64> = chain.step(vn.values()).iter().map(|x| x / n as f64).collect();

    let norm_f = chain.norm_sq(&f);
    let norm_h = chain.norm_sq(&h);

    let mut out = Vec::with_capacity(n);
    // running quantities at step k
    let mut qk_f = f.clone(); // Q^k f
    let mut qk_h = h.clone(); // Q^k h
    let mut vk_f = vec![0.0; f.len()]; // V_k f = Σ_{j<k} Q^j f
    let mut vk_h = vec![0.0; h.len()]; // V_k h
    let mut sum_vm_h = vec![0.0; h.len()]; // Σ_{m=1..k} V_m h
    for k in 1..=n {
        for i in 0..f.len() {
            vk_f[i] += if k == 1 { f[i] } else { qk_f[i] };
            vk_h[i] += if k == 1 { h[i] } else { qk_h[i] };
        }
        if k > 1 {
            qk_f = chain.step(&qk_f);
            qk_h = chain.step(&qk_h);
        } else {
            qk_f = chain.step(&f);
            qk_h = chain.step(&h);
        }
        for i in 0..h.len() {
            sum_vm_h[i] += vk_h[i];
        }
        let kf = k as f64;
        // E[S_k(h)²] = 2k⟨h, V̄_k h⟩ − k‖h‖² with V̄_k h = (Σ_m V_m h)/k
        let es2 = 2.0 * chain.inner(&h, &sum_vm_h) - kf * norm_h;
        let q_vk_h = chain.step(&vk_h);
        let r2 = 2.0 * norm_f - 2.0 * chain.inner(&f, &qk_f)
            + es2
            + 2.0 * chain.inner(&f, &q_vk_h)
            - 2.0 * chain.inner(&h, &vk_f);
        out.push(r2.max(0.0));
    }
    out
}

/// Exact `E[(S_n − M_n)²]` for the martingale built from the *limiting*
/// kernel: the sum telescopes to `Qu(W_0) − Qu(W_n)`, so
/// `E[R_n²] = 2(‖Qu‖² − ⟨Qu, Q^n Qu⟩)`. This is what the Monte Carlo
/// residual estimates; the Cesàro-kernel residual of
/// [`residual_second_moment`] differs at finite n and converges to the
/// same constant.
pub fn limit_residual_second_moment(
    chain: &StationaryChain,
    g: &Observable,
    n: usize,
) -> Result<f64, ChainError> {
    let (_, sol) = plus_norm_sq(chain, g)?;
    let qu = chain.step(sol.u.values());
    let mut qn_qu = qu.clone();
    for _ in 0..n {
        qn_qu = chain.step(&qn_qu);
    }
    Ok(2.0 * (chain.norm_sq(&qu) - chain.inner(&qu, &qn_qu)))
}

/// The two martingale-approximation criteria as slope fits.
///
/// First verdict: the slope of `log ‖V_n g‖` against `log n` must be
/// < 1/2. Second verdict: the slope of `log[(1/m) Σ_{k≤m} ‖Q^k g‖₊²]`
/// against `log m` must be < 0.
pub fn criteria_diagnostic(
    chain: &StationaryChain,
    g: &Observable,
    n_grid: &[usize],
    m_grid: &[usize],
    margin: f64,
) -> Result<(SlopeVerdict, SlopeVerdict), ChainError> {
    assert!(is_dyadic(n_grid), "n grid must be dyadic and increasing");
    assert!(is_dyadic(m_grid), "m grid must be dyadic and increasing");

    let vn_norms: Vec<f64> = n_grid
        .iter()
        .map(|&n| chain.norm_sq(v_sums(chain, g, n).0.values()).sqrt())
        .collect();
    let vn_growth = fit_slope(n_grid, &vn_norms, 0.5, margin);

    // cumulative averages of ‖Q^k g‖₊², reusing one factorization
    let lu = poisson_factors(chain)?;
    let m_max = *m_grid.last().unwrap();
    let mut cur = g.values().to_vec();
    let mut running = 0.0;
    let mut averages = Vec::with_capacity(m_grid.len());
    let mut next = 0usize;
    for k in 1..=m_max {
        cur = chain.step(&cur);
        let qkg = Observable { values: cur.clone() };
        let sol = poisson_solve_with(chain, &lu, &qkg);
        let plus = 2.0 * chain.inner(qkg.values(), sol.u.values()) - chain.norm_sq(qkg.values());
        running += plus;
        if next < m_grid.len() && k == m_grid[next] {
            averages.push(running / k as f64);
            next += 1;
        }
    }
    let plus_average = fit_slope(m_grid, &averages, 0.0, margin);
    Ok((vn_growth, plus_average))
}

/// Convenience: the p=q=1/4 two-state fixture used across the test suites.
pub fn two_state_fixture() -> (StationaryChain, Observable) {
    let chain = StationaryChain::validate(
        &[vec![0.75, 0.25], vec![0.25, 0.75]],
        None,
    )
    .expect("fixture chain is valid");
    let g = Observable::new(&chain, vec![1.0, -1.0]).expect("fixture observable");
    (chain, g)
}
