//! Seeded instance generators shared by the unit, property and
//! acceptance test suites. Deterministic given the seed.

use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::chain::{Observable, StationaryChain};

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Strictly positive rows ⇒ irreducible and aperiodic.
pub fn random_ergodic_chain(rng: &mut ChaCha12Rng, n_states: usize) -> StationaryChain {
    let rows: Vec<Vec<f64>> = (0..n_states)
        .map(|_| {
            let raw: Vec<f64> = (0..n_states).map(|_| rng.gen_range(0.05..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            raw.into_iter().map(|x| x / sum).collect()
        })
        .collect();
    StationaryChain::validate(&rows, None).expect("positive rows are ergodic")
}

/// Symmetric positive weights give a reversible (self-adjoint) chain.
pub fn random_reversible_chain(rng: &mut ChaCha12Rng, n_states: usize) -> StationaryChain {
    let mut w = vec![vec![0.0f64; n_states]; n_states];
    for i in 0..n_states {
        for j in i..n_states {
            let v = rng.gen_range(0.2..1.0);
            w[i][j] = v;
            w[j][i] = v;
        }
    }
    let rows: Vec<Vec<f64>> = w
        .iter()
        .map(|row| {
            let sum: f64 = row.iter().sum();
            row.iter().map(|x| x / sum).collect()
        })
        .collect();
    StationaryChain::validate(&rows, None).expect("symmetric positive weights are ergodic")
}

/// Circulant rows commute with their adjoint: a normal, generally
/// non-reversible chain (uniform stationary vector).
pub fn random_circulant_chain(rng: &mut ChaCha12Rng, n_states: usize) -> StationaryChain {
    let raw: Vec<f64> = (0..n_states).map(|_| rng.gen_range(0.2..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    let base: Vec<f64> = raw.into_iter().map(|x| x / sum).collect();
    let rows: Vec<Vec<f64>> = (0..n_states)
        .map(|i| (0..n_states).map(|j| base[(j + n_states - i) % n_states]).collect())
        .collect();
    StationaryChain::validate(&rows, None).expect("positive circulant rows are ergodic")
}

/// Mean-zero observable with entries drawn from (−1, 1) before centering.
pub fn random_observable(rng: &mut ChaCha12Rng, chain: &StationaryChain) -> Observable {
    let values: Vec<f64> = (0..chain.n_states()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Observable::centered(chain, values).expect("centering enforces the invariant")
}
