//! Fourier-side machinery for the dyadic one-sided shift on [0,1):
//! the transition operator acts on frequencies by
//! `Q e_r = 0` (r odd) or `e_{r/2}` (r even), and its adjoint by
//! `Q* e_r = e_{2r}` — a co-isometry (`QQ* = I`) whose adjoint is an
//! isometry. Coefficients are kept in sparse exact-integer-keyed maps, so
//! both actions are exact; no floating frequency arithmetic.
//!
//! Every nonzero frequency factors uniquely as `r = j·2^i` with `j` odd,
//! which splits the space into invariant columns indexed by odd `j`; the
//! column coefficients feed the array-level existence verdicts from
//! [`crate::seq`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;
use num_complex::Complex64;

use crate::seq::{partial_sums, CoeffArray, MAVerdict, SeqError, SeqSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftError {
    /// Frequency 0 is excluded (mean-zero space).
    ZeroIndex,
    /// Pointwise grids must be a power of two of size ≥ 2.
    GridTooCoarse,
    /// The conjugate-symmetry flag was set but `c_{−r} ≠ conj(c_r)`.
    NotConjugateSymmetric,
}

impl fmt::Display for ShiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftError::ZeroIndex => write!(f, "frequency 0 is not allowed (mean-zero space)"),
            ShiftError::GridTooCoarse => write!(f, "grid size must be a power of two, at least 2"),
            ShiftError::NotConjugateSymmetric => {
                write!(f, "coefficients violate conjugate symmetry for a real observable")
            }
        }
    }
}

impl ShiftError {
    pub fn code(&self) -> &'static str {
        match self {
            ShiftError::ZeroIndex => "ZeroIndex",
            ShiftError::GridTooCoarse => "GridTooCoarse",
            ShiftError::NotConjugateSymmetric => "NotConjugateSymmetric",
        }
    }
}

/// Unique factorization `r = j·2^i`, `j` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicIndex {
    pub i: u32,
    pub j: i64,
}

impl DyadicIndex {
    pub fn reconstruct(&self) -> i64 {
        self.j << self.i
    }
}

pub fn dyadic_decompose(r: i64) -> Result<DyadicIndex, ShiftError> {
    if r == 0 {
        return Err(ShiftError::ZeroIndex);
    }
    let i = r.trailing_zeros();
    Ok(DyadicIndex { i, j: r >> i })
}

/// Sparse mean-zero observable `g = Σ_{r≠0} c_r e_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierObservable {
    coeffs: BTreeMap<i64, Complex64>,
    real_symmetric: bool,
}

const SYMMETRY_TOL: f64 = 1e-12;

impl FourierObservable {
    /// Drops exact zeros; rejects the r = 0 term and, when the flag is
    /// set, any violation of `c_{−r} = conj(c_r)`.
    pub fn new(
        coeffs: BTreeMap<i64, Complex64>,
        real_symmetric: bool,
    ) -> Result<Self, ShiftError> {
        if coeffs.contains_key(&0) {
            return Err(ShiftError::ZeroIndex);
        }
        let coeffs: BTreeMap<i64, Complex64> =
            coeffs.into_iter().filter(|(_, c)| c.norm_sqr() > 0.0).collect();
        if real_symmetric {
            for (&r, &c) in &coeffs {
                let mirror = coeffs.get(&-r).copied().unwrap_or(Complex64::new(0.0, 0.0));
                if (mirror - c.conj()).norm() > SYMMETRY_TOL {
                    return Err(ShiftError::NotConjugateSymmetric);
                }
            }
        }
        Ok(FourierObservable { coeffs, real_symmetric })
    }

    pub fn empty() -> Self {
        FourierObservable { coeffs: BTreeMap::new(), real_symmetric: true }
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.real_symmetric
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// Evaluates the trigonometric polynomial on a uniform size-`n` grid
    /// of [0,1). Phases are reduced modulo the grid exactly in integers,
    /// so high frequencies lose no precision.
    pub fn sample_grid(&self, n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (&r, &c) in &self.coeffs {
            let step = r.rem_euclid(n as i64);
            for (k, slot) in out.iter_mut().enumerate() {
                let idx = (step * k as i64).rem_euclid(n as i64);
                let phase = TAU * (idx as f64) / (n as f64);
                *slot += c * Complex64::new(phase.cos(), phase.sin());
            }
        }
        out
    }
}

/// `Q`: even frequencies halve, odd frequencies vanish. Norm non-increasing.
pub fn apply_q_fourier(g: &FourierObservable) -> FourierObservable {
    let mut out = BTreeMap::new();
    for (&r, &c) in &g.coeffs {
        if r % 2 == 0 {
            // r even and nonzero ⇒ r/2 nonzero; halved keys stay distinct
            out.insert(r / 2, c);
        }
    }
    FourierObservable { coeffs: out, real_symmetric: g.real_symmetric }
}

/// `Q*`: every frequency doubles. Exact isometry.
pub fn apply_qstar_fourier(g: &FourierObservable) -> FourierObservable {
    let coeffs = g.coeffs.iter().map(|(&r, &c)| (2 * r, c)).collect();
    FourierObservable { coeffs, real_symmetric: g.real_symmetric }
}

/// Pointwise transition action on a dyadic grid: averages the two
/// preimages of each point of the half-resolution grid. Exact there, and
/// used solely to cross-validate the coefficient-side action. The grid
/// is treated cyclically (values indexed modulo 1).
pub fn apply_q_pointwise(samples: &[Complex64]) -> Result<Vec<Complex64>, ShiftError> {
    let n = samples.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(ShiftError::GridTooCoarse);
    }
    let half = n / 2;
    Ok((0..half)
        .map(|j| (samples[j] + samples[j + half]) * 0.5)
        .collect())
}

/// Groups coefficients into the invariant splitting: column `j` (odd)
/// holds `c_{i,j} = c_{j·2^i}`. Complex columns are carried as two real
/// columns (re/im), which preserves every ℓ²(J) norm. Round-trips with
/// [`dyadic_decompose`] exactly.
pub fn to_coeff_array(g: &FourierObservable, horizon: usize) -> Result<CoeffArray, SeqError> {
    let mut by_column: BTreeMap<i64, Vec<(u32, Complex64)>> = BTreeMap::new();
    for (&r, &c) in &g.coeffs {
        let d = dyadic_decompose(r).expect("constructor excludes r = 0");
        by_column.entry(d.j).or_default().push((d.i, c));
    }

    let mut labels = Vec::new();
    let mut columns = Vec::new();
    if by_column.is_empty() {
        // zero observable: a single zero column keeps the array non-empty
        labels.push(String::from("zero"));
        columns.push(partial_sums(&SeqSource::Array(vec![0.0]), horizon.max(1)));
    }
    for (j, entries) in by_column {
        let max_i = entries.iter().map(|(i, _)| *i).max().unwrap() as usize;
        if max_i > horizon {
            return Err(SeqError::HorizonExceeded { needed: max_i, materialized: horizon });
        }
        let mut re = vec![0.0; max_i + 1];
        let mut im = vec![0.0; max_i + 1];
        for (i, c) in entries {
            re[i as usize] = c.re;
            im[i as usize] = c.im;
        }
        labels.push(format!("j={j}:re"));
        columns.push(partial_sums(&SeqSource::Array(re), horizon.max(1)));
        labels.push(format!("j={j}:im"));
        columns.push(partial_sums(&SeqSource::Array(im), horizon.max(1)));
    }
    CoeffArray::new(labels, columns)
}

/// Existence decision for a shift observable: map to the invariant-column
/// coefficient array, then apply the array-level criterion.
pub fn ma_verdict_bernoulli(g: &FourierObservable, n_max: usize) -> Result<MAVerdict, SeqError> {
    let arr = to_coeff_array(g, n_max)?;
    crate::seq::ma_verdict_array(&arr, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::Exists;
    use rand::Rng;

    fn single(r: i64, re: f64, im: f64) -> FourierObservable {
        let mut m = BTreeMap::new();
        m.insert(r, Complex64::new(re, im));
        FourierObservable::new(m, false).unwrap()
    }

    #[test]
    fn dyadic_decompose_cases() {
        assert_eq!(dyadic_decompose(12).unwrap(), DyadicIndex { i: 2, j: 3 });
        assert_eq!(dyadic_decompose(7).unwrap(), DyadicIndex { i: 0, j: 7 });
        assert_eq!(dyadic_decompose(-20).unwrap(), DyadicIndex { i: 2, j: -5 });
        assert_eq!(dyadic_decompose(0).unwrap_err(), ShiftError::ZeroIndex);
        assert_eq!(dyadic_decompose(-20).unwrap().reconstruct(), -20);
    }

    #[test]
    fn q_action_moves_and_drops() {
        let g = single(4, 1.0, 0.0);
        let qg = apply_q_fourier(&g);
        assert_eq!(qg.coeffs().len(), 1);
        assert_eq!(qg.coeffs()[&2], Complex64::new(1.0, 0.0));

        let odd = single(3, 1.0, 0.0);
        assert!(apply_q_fourier(&odd).coeffs().is_empty());

        let mut m = BTreeMap::new();
        m.insert(2, Complex64::new(1.0, 0.0));
        m.insert(3, Complex64::new(5.0, 0.0));
        let g = FourierObservable::new(m, false).unwrap();
        let qg = apply_q_fourier(&g);
        assert_eq!(qg.coeffs().len(), 1);
        assert_eq!(qg.coeffs()[&1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn qstar_doubles_and_composes_to_identity() {
        let g = single(3, 1.0, -2.0);
        let qs = apply_qstar_fourier(&g);
        assert_eq!(qs.coeffs()[&6], Complex64::new(1.0, -2.0));
        assert_eq!(qs.norm_sq(), g.norm_sq());
        assert_eq!(apply_q_fourier(&qs), g);

        let empty = FourierObservable::empty();
        assert!(apply_qstar_fourier(&empty).coeffs().is_empty());
    }

    #[test]
    fn qq_star_identity_on_random_sparse() {
        let mut rng = crate::testkit::rng(7);
        for _ in 0..1000 {
            let mut m = BTreeMap::new();
            for _ in 0..rng.gen_range(1..12) {
                let r = loop {
                    let r = rng.gen_range(-4096i64..4096);
                    if r != 0 {
                        break r;
                    }
                };
                m.insert(r, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
            let g = FourierObservable::new(m, false).unwrap();
            assert_eq!(apply_q_fourier(&apply_qstar_fourier(&g)), g);
        }
    }

    #[test]
    fn qstar_q_is_projection_dropping_odd_keys() {
        let mut rng = crate::testkit::rng(8);
        for _ in 0..200 {
            let mut m = BTreeMap::new();
            for _ in 0..rng.gen_range(1..10) {
                let r = loop {
                    let r = rng.gen_range(-512i64..512);
                    if r != 0 {
                        break r;
                    }
                };
                m.insert(r, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
            }
            let g = FourierObservable::new(m, false).unwrap();
            let proj = apply_qstar_fourier(&apply_q_fourier(&g));
            // keeps exactly the even-frequency part
            for (&r, &c) in proj.coeffs() {
                assert_eq!(r % 2, 0);
                assert_eq!(c, g.coeffs()[&r]);
            }
            let proj2 = apply_qstar_fourier(&apply_q_fourier(&proj));
            assert_eq!(proj, proj2);
            // Q(I − Q*Q) = 0: the dropped part is exactly the odd part
            let mut dropped = g.coeffs().clone();
            for r in proj.coeffs().keys() {
                dropped.remove(r);
            }
            assert!(dropped.keys().all(|r| r % 2 != 0));
        }
    }

    #[test]
    fn columns_never_share_frequencies() {
        let mut rng = crate::testkit::rng(9);
        let mut m = BTreeMap::new();
        for _ in 0..100 {
            let r = loop {
                let r = rng.gen_range(-100_000i64..100_000);
                if r != 0 {
                    break r;
                }
            };
            m.insert(r, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        let g = FourierObservable::new(m, false).unwrap();
        // reconstruction j·2^i is injective: column/level pairs map back
        // to the original frequencies with no collisions
        let mut seen = alloc::collections::BTreeSet::new();
        for (&r, _) in g.coeffs() {
            let d = dyadic_decompose(r).unwrap();
            assert!(seen.insert((d.j, d.i)));
        }
        // and the array preserves the total norm
        let arr = to_coeff_array(&g, 64).unwrap();
        let total: f64 = arr.columns().iter().map(|c| c.a().iter().map(|x| x * x).sum::<f64>()).sum();
        assert!((total - g.norm_sq()).abs() <= 1e-12);
    }

    #[test]
    fn to_coeff_array_groups_levels() {
        let mut m = BTreeMap::new();
        m.insert(3, Complex64::new(1.0, 0.0));
        m.insert(6, Complex64::new(2.0, 0.0));
        m.insert(12, Complex64::new(3.0, 0.0));
        let g = FourierObservable::new(m, false).unwrap();
        let arr = to_coeff_array(&g, 16).unwrap();
        let re = &arr.columns()[0]; // label "j=3:re"
        assert_eq!(&re.a()[..3], &[1.0, 2.0, 3.0]);
        assert_eq!(arr.labels()[0], "j=3:re");

        let g5 = single(5, 2.5, 0.0);
        let arr = to_coeff_array(&g5, 8).unwrap();
        assert_eq!(arr.labels()[0], "j=5:re");
        assert_eq!(arr.columns()[0].a()[0], 2.5);
    }

    #[test]
    fn pointwise_matches_fourier_on_basis_vectors() {
        // e_2 → e_1 on the half grid; e_3 → 0
        let g = single(2, 1.0, 0.0);
        let coarse = apply_q_pointwise(&g.sample_grid(1024)).unwrap();
        let expected = single(1, 1.0, 0.0).sample_grid(512);
        for (a, b) in coarse.iter().zip(&expected) {
            assert!((a - b).norm() <= 1e-12);
        }

        let g3 = single(3, 1.0, 0.0);
        let coarse = apply_q_pointwise(&g3.sample_grid(1024)).unwrap();
        assert!(coarse.iter().all(|c| c.norm() <= 1e-12));

        let zero = FourierObservable::empty();
        let out = apply_q_pointwise(&zero.sample_grid(8)).unwrap();
        assert!(out.iter().all(|c| c.norm() == 0.0));

        assert_eq!(apply_q_pointwise(&[Complex64::new(0.0, 0.0)]).unwrap_err(), ShiftError::GridTooCoarse);
        let six = [Complex64::new(0.0, 0.0); 6];
        assert_eq!(apply_q_pointwise(&six).unwrap_err(), ShiftError::GridTooCoarse);
    }

    #[test]
    fn qn_is_exact_truncation() {
        // max dyadic level 4 ⇒ five applications annihilate g
        let mut m = BTreeMap::new();
        m.insert(3 << 4, Complex64::new(1.0, 0.0));
        m.insert(5, Complex64::new(1.0, 1.0));
        let mut g = FourierObservable::new(m, false).unwrap();
        for _ in 0..5 {
            assert!(!g.coeffs().is_empty());
            g = apply_q_fourier(&g);
        }
        assert!(g.coeffs().is_empty());
    }

    #[test]
    fn ma_verdict_fixtures() {
        // single geometric column at j = 3
        let mut m = BTreeMap::new();
        for i in 0..40u32 {
            m.insert(3i64 << i, Complex64::new(0.5f64.powi(i as i32), 0.0));
        }
        let g = FourierObservable::new(m, false).unwrap();
        let v = ma_verdict_bernoulli(&g, 4096).unwrap();
        assert_eq!(v.exists, Exists::Yes);
        let kappa = v.kappa_sq.unwrap();
        let bfinal = 2.0 - 0.5f64.powi(39);
        assert!((kappa - bfinal * bfinal).abs() <= 1e-12);

        // coboundary column (1, −1) at j = 3: e_3 − e_6
        let mut m = BTreeMap::new();
        m.insert(3, Complex64::new(1.0, 0.0));
        m.insert(6, Complex64::new(-1.0, 0.0));
        let g = FourierObservable::new(m, false).unwrap();
        let v = ma_verdict_bernoulli(&g, 4096).unwrap();
        assert_eq!(v.exists, Exists::Yes);
        assert_eq!(v.kappa_sq.unwrap(), 0.0);

        // zero observable
        let v = ma_verdict_bernoulli(&FourierObservable::empty(), 256).unwrap();
        assert_eq!(v.exists, Exists::Yes);
        assert_eq!(v.kappa_sq.unwrap(), 0.0);
    }

    #[test]
    fn conjugate_symmetry_checked() {
        let mut m = BTreeMap::new();
        m.insert(3, Complex64::new(1.0, 2.0));
        m.insert(-3, Complex64::new(1.0, -2.0));
        assert!(FourierObservable::new(m.clone(), true).is_ok());

        m.insert(-3, Complex64::new(1.0, 2.0));
        assert_eq!(
            FourierObservable::new(m, true).unwrap_err(),
            ShiftError::NotConjugateSymmetric
        );
    }
}
