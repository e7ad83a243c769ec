//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line per clause (run with `--nocapture` to see them). Tolerances are
//! pinned in the assertions.
//!
//! Three clauses are implemented exactly as specified although the
//! underlying quantities are known (by independent oracle computation)
//! to sit on the wrong side of the stated thresholds; they fail honestly
//! with the measured values rather than being loosened:
//! criterion 4's 1% residual-ratio clause, criterion 6's
//! `b(10⁴) > 2·b(10²)` clause, and criterion 7's componentwise
//! `|b̄ − b| ≤ 0.05` clause. Details accompany the assertion messages.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;

use mapprox_core::chain::{
    adjoint, apply_q, criteria_diagnostic, hbar_kernel, limit_residual_second_moment,
    martingale_kernel, plus_norm_sq, residual_profile, sn_second_moment, two_state_fixture,
    v_sums, Observable, StationaryChain,
};
use mapprox_core::fracpoisson::{
    beta_coefficients, beta_direct, sqrt_apply_chain, tail_majorant, verify_square, DEFAULT_K_MAX,
};
use mapprox_core::linalg::{CompensatedSum, Matrix};
use mapprox_core::seq::{
    vn_decay_diagnostic_array, ma_verdict_linear, example5_build, example6_build,
    example6_stream_extremes, partial_sums, ma_verdict_array_with, vn_norm_sq_linear, Exists,
    SeqSource,
};
use mapprox_core::shift::{
    apply_q_fourier, apply_q_pointwise, apply_qstar_fourier, ma_verdict_bernoulli,
    FourierObservable,
};
use mapprox_core::sim::{
    cclt_check, empirical_residual, kappa_sq_hat, sample_initial, simulate_chain,
    simulate_superlinear, step_state, stream_rng, DistanceKind, NoiseSpec, Samples,
};
use mapprox_core::slope::{dyadic_grid, Verdict};
use mapprox_core::testkit;

fn clause(name: &str, pass: bool, detail: &str) -> bool {
    println!("  [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

/// Matrix power table Q^0..Q^k.
fn power_table(chain: &StationaryChain, k: usize) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(Matrix::identity(chain.n_states()));
    for i in 1..=k {
        out.push(out[i - 1].matmul(chain.q()));
    }
    out
}

/// Max-abs of M applied to a basis of mean-zero vectors (e_j − e_0).
fn max_on_mean_zero(m: &Matrix) -> f64 {
    let n = m.n();
    let mut worst = 0.0f64;
    for j in 1..n {
        for i in 0..n {
            worst = worst.max((m.get(i, j) - m.get(i, 0)).abs());
        }
    }
    worst
}

#[test]
fn criterion_1_operator_identity_suite() {
    let start = Instant::now();
    println!("criterion 1: operator-identity suite on 100 random ergodic chains");
    let mut rng = testkit::rng(1001);
    let mut worst_cesaro_id = 0.0f64;
    let mut worst_kernel_split = 0.0f64;
    let mut worst_kernel_form = 0.0f64;
    let mut worst_cumulative = 0.0f64;

    for trial in 0..100 {
        let n_states = 2 + (trial % 7); // ≤ 8 states
        let chain = testkit::random_ergodic_chain(&mut rng, n_states);
        let g = testkit::random_observable(&mut rng, &chain);

        // second moment: the dual evaluation is cross-checked inside the call
        for n in [1usize, 2, 3, 17, 64, 128, 1000] {
            sn_second_moment(&chain, &g, n).expect("second-moment evaluations agree at 1e-9");
        }

        // Cesàro-sum operator identity V̄_n = V̄_n Q^i + V_i − (1/n)QV_nV_i
        // as matrices on the mean-zero subspace, 1 ≤ i ≤ n ≤ 64
        let n_max = 64;
        let powers = power_table(&chain, n_max);
        let mut v = Vec::with_capacity(n_max + 1); // V_k = Σ_{t<k} Q^t
        v.push(Matrix::zeros(chain.n_states()));
        for k in 1..=n_max {
            v.push(v[k - 1].add(&powers[k - 1]));
        }
        let mut vbar_sum = Matrix::zeros(chain.n_states()); // Σ_{m≤n} V_m
        for n in 1..=n_max {
            vbar_sum = vbar_sum.add(&v[n]);
            let vbar = vbar_sum.scale(1.0 / n as f64);
            for i in 1..=n {
                let lhs = vbar
                    .sub(&vbar.matmul(&powers[i]))
                    .sub(&v[i])
                    .add(&chain.q().matmul(&v[n]).matmul(&v[i]).scale(1.0 / n as f64));
                worst_cesaro_id = worst_cesaro_id.max(max_on_mean_zero(&lhs));
            }
        }

        // path telescoping identity, exact via integer visit counts
        let n = 100;
        let mut coeff_g = vec![0i64; chain.n_states()];
        let mut coeff_qg = vec![0i64; chain.n_states()];
        let mut path_rng = stream_rng(7_000 + trial as u64, 0);
        let w0 = sample_initial(&chain, &mut path_rng);
        let mut w = w0;
        let mut states = vec![w0];
        for _ in 0..n {
            w = step_state(&chain, w, &mut path_rng);
            states.push(w);
        }
        for k in 1..=n {
            coeff_g[states[k] as usize] += 1; // S_n(g)
            coeff_qg[states[k] as usize] -= 1; // −S_n(Qg)
            coeff_g[states[k] as usize] -= 1; // −Σ g(W_k)
            coeff_qg[states[k - 1] as usize] += 1; // +Σ Qg(W_{k−1})
        }
        coeff_qg[states[0] as usize] -= 1; // −Qg(W_0)
        coeff_qg[states[n] as usize] += 1; // +Qg(W_n)
        assert!(
            coeff_g.iter().all(|&c| c == 0) && coeff_qg.iter().all(|&c| c == 0),
            "path identity must cancel exactly (trial {trial})"
        );
        // and the floating evaluation of the same expression is ~0
        let qg = apply_q(&chain, &g, 1);
        let float_eval: f64 = {
            let s_g: f64 = (1..=n).map(|k| g.values()[states[k] as usize]).sum();
            let s_qg: f64 = (1..=n).map(|k| qg.values()[states[k] as usize]).sum();
            let bracket: f64 = (1..=n)
                .map(|k| {
                    g.values()[states[k] as usize] - qg.values()[states[k - 1] as usize]
                })
                .sum();
            s_g - s_qg - bracket - qg.values()[states[0] as usize]
                + qg.values()[states[n] as usize]
        };
        assert!(float_eval.abs() <= 1e-10, "float path identity {float_eval}");

        // kernel-difference and cumulative inner-product algebra
        let pi1_norm_sq = |k: &mapprox_core::chain::PairKernel| k.norm_sq(&chain);
        for (n, m) in [(8usize, 3usize), (32, 8), (64, 16)] {
            let hn = hbar_kernel(&chain, &g, n);
            let hm = hbar_kernel(&chain, &g, m);
            let lhs = pi1_norm_sq(&hn.sub(&hm));
            let (vn, vbarn) = v_sums(&chain, &g, n);
            let (vm, vbarm) = v_sums(&chain, &g, m);
            let f: Vec<f64> = vbarn
                .values()
                .iter()
                .zip(vbarm.values())
                .map(|(a, b)| a - b)
                .collect();
            let qf = chain.step(&f);
            let split = chain.norm_sq(&f) - chain.norm_sq(&qf);
            worst_kernel_split = worst_kernel_split.max((lhs - split).abs());

            let d: Vec<f64> = chain
                .step(vm.values())
                .iter()
                .zip(chain.step(vn.values()))
                .map(|(a, b)| a / m as f64 - b / n as f64)
                .collect();
            let rhs = 2.0 * chain.inner(&f, &d) - chain.norm_sq(&d);
            worst_kernel_form = worst_kernel_form.max((lhs - rhs).abs());

            // ⟨V̄_n g, QV_m g⟩ expansion over k ≤ m
            let qkg = power_applications(&chain, &g, n + m + 2);
            let vbar_apply = |x0: usize| -> Vec<f64> {
                // V̄_n applied to Q^{x0} g
                let mut acc = vec![0.0; chain.n_states()];
                for t in 0..n {
                    let w = 1.0 - t as f64 / n as f64;
                    for (i, slot) in acc.iter_mut().enumerate() {
                        *slot += w * qkg[x0 + t][i];
                    }
                }
                acc
            };
            let lhs5 = chain.inner(&vbar_apply(0), &chain.step(vm.values()));
            let mut sum_k = 0.0;
            let mut last_term = 0.0;
            for k in 1..=m {
                let vbar_qk = vbar_apply(k);
                sum_k += 2.0 * chain.inner(&vbar_qk, &qkg[k]) - chain.norm_sq(&qkg[k]);
                // (1/n)⟨Q V_n V_k g, Q^k g⟩ via offset multiplicities
                let mut qvnvk = vec![0.0; chain.n_states()];
                for t in 0..n {
                    for s in 0..k {
                        for (i, slot) in qvnvk.iter_mut().enumerate() {
                            *slot += qkg[t + s + 1][i];
                        }
                    }
                }
                last_term += chain.inner(&qvnvk, &qkg[k]) / n as f64;
            }
            let qvm = chain.step(vm.values());
            let vm_qg: Vec<f64> = {
                // V_m Qg = Σ_{t<m} Q^{t+1} g
                let mut acc = vec![0.0; chain.n_states()];
                for t in 0..m {
                    for (i, slot) in acc.iter_mut().enumerate() {
                        *slot += qkg[t + 1][i];
                    }
                }
                acc
            };
            let rhs5 = 0.5 * sum_k + 0.5 * chain.norm_sq(&qvm) + chain.inner(g.values(), &vm_qg)
                - last_term;
            worst_cumulative = worst_cumulative.max((lhs5 - rhs5).abs());
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    let mut ok = true;
    ok &= clause("second-moment dual evaluation ≤ 1e-9 rel", true, "cross-checked in every call");
    ok &= clause("Cesàro-sum operator identity ≤ 1e-10", worst_cesaro_id <= 1e-10, &format!("worst {worst_cesaro_id:.3e}"));
    ok &= clause("path telescoping identity exact", true, "integer coefficients all zero");
    ok &= clause(
        "kernel-difference norm split ≤ 1e-10",
        worst_kernel_split <= 1e-10,
        &format!("worst {worst_kernel_split:.3e}"),
    );
    ok &= clause(
        "kernel-difference inner-product form ≤ 1e-10",
        worst_kernel_form <= 1e-10,
        &format!("worst {worst_kernel_form:.3e}"),
    );
    ok &= clause("cumulative inner-product expansion ≤ 1e-9", worst_cumulative <= 1e-9, &format!("worst {worst_cumulative:.3e}"));
    ok &= clause("runtime < 10 s", elapsed < 10.0, &format!("{elapsed:.2} s"));
    println!("criterion 1: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion 1 failed");
}

/// Q^0 g .. Q^k g.
fn power_applications(chain: &StationaryChain, g: &Observable, k: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(k + 1);
    out.push(g.values().to_vec());
    for i in 1..=k {
        let next = chain.step(&out[i - 1]);
        out.push(next);
    }
    out
}

#[test]
fn criterion_2_two_state_oracle() {
    let start = Instant::now();
    println!("criterion 2: two-state oracle (p = q = 1/4, g = (1,−1))");
    let (chain, g) = two_state_fixture();
    let (plus, _) = plus_norm_sq(&chain, &g).unwrap();
    let (_, kappa_sq) = martingale_kernel(&chain, &g).unwrap();

    let mut ok = true;
    ok &= clause(
        "κ² = ‖g‖₊² = ‖H‖² = 3.0 within 1e-9",
        (plus - 3.0).abs() <= 1e-9
            && (kappa_sq - 3.0).abs() <= 1e-9
            && (plus - kappa_sq).abs() <= 1e-9,
        &format!("plus {plus:.12}, kernel {kappa_sq:.12}"),
    );

    let samples = simulate_chain(&chain, g.values(), 2000, 100_000, 42);
    let hat = kappa_sq_hat(&samples.values);
    ok &= clause(
        "E[S₂₀₀₀²]/2000 within 5% of 3.0 at 10⁵ paths",
        (hat - 3.0).abs() <= 0.15,
        &format!("estimate {hat:.4}"),
    );

    let elapsed = start.elapsed().as_secs_f64();
    ok &= clause("runtime < 30 s", elapsed < 30.0, &format!("{elapsed:.2} s"));
    println!("criterion 2: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion 2 failed");
}

#[test]
fn criterion_3_fractional_poisson() {
    println!("criterion 3: square-root series coefficients and application");
    let mut ok = true;

    let series = beta_coefficients(1000);
    let mut worst = 0.0f64;
    for k in 1..=1000usize {
        worst = worst.max((series.beta[k - 1] - beta_direct(k)).abs());
    }
    ok &= clause(
        "recurrence vs direct binomial ≤ 1e-14 for k ≤ 10³",
        worst <= 1e-14,
        &format!("worst {worst:.3e}"),
    );

    // partial sums increase to 1 under the majorant, streamed to 10⁶
    let mut beta = 0.5f64;
    let mut partial = CompensatedSum::new();
    partial.add(beta);
    let mut monotone = true;
    let mut majorant_ok = true;
    let mut prev = 0.0f64;
    for k in 1..=1_000_000usize {
        let value = partial.value();
        monotone &= value > prev && value < 1.0;
        majorant_ok &= (1.0 - value) <= tail_majorant(k);
        prev = value;
        beta *= (k as f64 - 0.5) / (k as f64 + 1.0);
        partial.add(beta);
    }
    ok &= clause(
        "partial sums increase to 1 with 1−Σ ≤ 1/√(πK), K ≤ 10⁶",
        monotone && majorant_ok,
        &format!("final partial sum {prev:.9}"),
    );

    // verify_square on 20 random normal chains
    let mut rng = testkit::rng(3003);
    let tol = 1e-10;
    let mut worst_dev = 0.0f64;
    for trial in 0..20 {
        let chain = if trial % 2 == 0 {
            testkit::random_reversible_chain(&mut rng, 3 + trial % 4)
        } else {
            testkit::random_circulant_chain(&mut rng, 3 + trial % 4)
        };
        let h = testkit::random_observable(&mut rng, &chain);
        let dev = verify_square(&chain, &h, tol, DEFAULT_K_MAX).unwrap();
        worst_dev = worst_dev.max(dev);
    }
    ok &= clause(
        "verify_square ≤ 10·tol on 20 random normal chains",
        worst_dev <= 10.0 * tol,
        &format!("worst {worst_dev:.3e} vs {:.1e}", 10.0 * tol),
    );

    println!("criterion 3: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion 3 failed");
}

#[test]
fn criterion_4_martingale_approximation_decay() {
    println!("criterion 4: kernel convergence and residual decay, 20 random normal chains");
    let mut rng = testkit::rng(4004);
    let grid = dyadic_grid(1, 8); // 2..256
    let mut monotone_ok = true;
    let mut worst_ratio = 0.0f64;
    let mut ratio_ok = true;
    for trial in 0..20 {
        let chain = if trial % 2 == 0 {
            testkit::random_reversible_chain(&mut rng, 2 + trial % 5)
        } else {
            testkit::random_circulant_chain(&mut rng, 2 + trial % 5)
        };
        let h = testkit::random_observable(&mut rng, &chain);
        let g = sqrt_apply_chain(&chain, &h, 1e-12, DEFAULT_K_MAX).unwrap().g;

        let (limit_kernel, _) = martingale_kernel(&chain, &g).unwrap();
        let mut prev = f64::INFINITY;
        for &n in &grid {
            let dist = hbar_kernel(&chain, &g, n).sub(&limit_kernel).norm_sq(&chain).sqrt();
            monotone_ok &= dist <= prev + 1e-12;
            prev = dist;
        }

        let r2 = residual_profile(&chain, &g, 2)[1] / 2.0;
        let r256 = residual_profile(&chain, &g, 256)[255] / 256.0;
        if r2 > 0.0 {
            let ratio = r256 / r2;
            worst_ratio = worst_ratio.max(ratio);
            ratio_ok &= ratio < 0.01;
        }
    }

    let mut ok = true;
    ok &= clause(
        "‖H̄_n − H‖ decreases monotonically along 2..256 (1e-12 noise)",
        monotone_ok,
        "dyadic doubling contracts every spectral term",
    );
    ok &= clause(
        "E[R_{nn}²]/n at 256 < 1% of its n = 2 value",
        ratio_ok,
        &format!(
            "worst ratio {worst_ratio:.4}; infeasible as stated: E[R²] tends to the \
             constant 2‖Qu‖², making the per-eigenvalue ratio ≥ 0.97% with \
             generic random normal chains at 1.04%–2.4%"
        ),
    );
    println!("criterion 4: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion 4 failed (see clause lines)");
}

#[test]
fn criterion_5_linear_process_fixtures() {
    println!("criterion 5: one-column fixtures");
    let mut ok = true;

    let geo = partial_sums(&SeqSource::Geometric { rho: 0.5 }, 16384);
    let v = ma_verdict_linear(&geo, 16384).unwrap();
    ok &= clause(
        "geometric ρ = 0.5: MA yes with κ² = 4 ± 1e-9 (analytic path)",
        v.exists == Exists::Yes
            && v.kappa_analytic
            && (v.kappa_sq.unwrap() - 4.0).abs() <= 1e-9,
        &format!("exists {:?}, κ² {:?}", v.exists, v.kappa_sq),
    );

    let cob = partial_sums(&SeqSource::Array(vec![1.0, -1.0]), 16384);
    let v = ma_verdict_linear(&cob, 16384).unwrap();
    ok &= clause(
        "coboundary (1,−1): MA yes with κ² = 0",
        v.exists == Exists::Yes && v.kappa_sq.unwrap() == 0.0,
        &format!("exists {:?}, κ² {:?}", v.exists, v.kappa_sq),
    );

    let mut exact = true;
    for n in [2usize, 3, 17, 64] {
        let vn = vn_norm_sq_linear(&cob, n, 256).unwrap();
        exact &= vn.value == 1.0 && vn.tail_bound == 0.0;
    }
    ok &= clause("coboundary ‖V_n g‖² = 1 exactly for n ≥ 2", exact, "bit-exact 1.0");

    println!("criterion 5: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion 5 failed");
}

#[test]
fn criterion_6_slow_log_sequence_reproduction() {
    let start = Instant::now();
    println!("criterion 6: slowly-decaying sequence, K = 10⁵, j_max = 10⁴");
    let j_max = 10_000;
    let k = 100_000;
    let rep = example5_build(j_max, k).unwrap();
    let mut ok = true;

    ok &= clause(
        "c_j ≥ a_j/(9√j) for all j ≥ j₀",
        rep.j0 == Some(1) && rep.min_bound_ratio > 1.0,
        &format!("j₀ = {:?}, min ratio {:.3}", rep.j0, rep.min_bound_ratio),
    );
    ok &= clause(
        "b_n strictly increasing from n₀",
        rep.b_strictly_increasing_from == Some(0),
        &format!("n₀ = {:?} (every c_j > 0)", rep.b_strictly_increasing_from),
    );

    let b100 = rep.c.b()[100];
    let b10k = rep.c.b()[10_000];
    ok &= clause(
        "b(10⁴) > 2·b(10²)",
        b10k > 2.0 * b100,
        &format!(
            "b(10²) = {b100:.4}, b(10⁴) = {b10k:.4}, ratio {:.3}; infeasible as stated: \
             b_n grows like ≈ 0.56·ln ln n + C (the divergence the construction \
             proves), so the two-decade ratio is ≈ 1.17",
            b10k / b100
        ),
    );

    let verdict = ma_verdict_linear(&rep.c, j_max).unwrap();
    ok &= clause(
        "MA verdict: no",
        verdict.exists == Exists::No,
        &format!(
            "exists {:?} (b̄ window oscillation {:.4} > 10·tol)",
            verdict.exists, verdict.bbar_cauchy.oscillation
        ),
    );

    let elapsed = start.elapsed().as_secs_f64();
    ok &= clause("runtime < 5 min", elapsed < 300.0, &format!("{elapsed:.1} s"));
    println!("criterion 6: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion 6 failed (see clause lines)");
}

#[test]
fn criterion_7_oscillating_array_reproduction() {
    let start = Instant::now();
    println!("criterion 7: two-column oscillating array at n = 10⁶");
    let n_max = 1_000_000;
    let (arr, traces) = example6_build(n_max).unwrap();
    let mut ok = true;

    ok &= clause(
        "|b̄²₀ + b̄²₁ − 1| ≤ 0.05 at 10⁶",
        (traces.final_norm_sq - 1.0).abs() <= 0.05,
        &format!("‖b̄‖² = {:.6}", traces.final_norm_sq),
    );
    ok &= clause(
        "|b̄_{n,j} − b_{n,j}| ≤ 0.05 at 10⁶ for j = 0, 1",
        traces.final_dev0.abs() <= 0.05 && traces.final_dev1.abs() <= 0.05,
        &format!(
            "dev₀ = {:+.5}, dev₁ = {:+.5}; infeasible as stated: the deviation decays \
             like |trig(√ln n)|/(2√ln n), and reaching 0.05 needs n ≳ e^100",
            traces.final_dev0, traces.final_dev1
        ),
    );

    let grid = dyadic_grid(12, 19);
    let decay = vn_decay_diagnostic_array(&arr, &grid, 4096, 0.1).unwrap();
    ok &= clause(
        "ℓ²-valued decay condition holds",
        decay.verdict == Verdict::Holds,
        &format!("slope {:.3}", decay.slope),
    );

    let ext = example6_stream_extremes(n_max);
    let verdict = ma_verdict_array_with(&arr, n_max, 1e-3, Some(&grid), Some(4096)).unwrap();
    ok &= clause(
        "Cauchy test fails (b̄₀ range > 0.5 over n ≤ 10⁶)",
        ext.range() > 0.5 && verdict.exists == Exists::No,
        &format!(
            "range {:.4} (min {:.4} @ {}, max {:.4} @ {}), verdict {:?}",
            ext.range(),
            ext.min,
            ext.argmin,
            ext.max,
            ext.argmax,
            verdict.exists
        ),
    );

    // CCLT half: n = 2000, 10⁵ paths, κ² = 1, bounded unit-variance noise
    let noise = [NoiseSpec::Rademacher, NoiseSpec::Rademacher];
    let sim = simulate_superlinear(&arr, &noise, 2000, 100_000, 2024, 60_000).unwrap();
    let report = cclt_check(
        Samples::Unlabeled { values: &sim.values, n: sim.n },
        1.0,
        DistanceKind::Kolmogorov,
    );
    ok &= clause(
        "CCLT distance ≤ 0.08 at n = 2000, 10⁵ paths",
        report.distance <= 0.08 && report.unconditional_surrogate,
        &format!(
            "distance {:.4} (unconditional surrogate; κ̂² = {:.4}, truncation tail {:.2e})",
            report.distance, report.kappa_sq_hat, sim.truncation.relative
        ),
    );

    let elapsed = start.elapsed().as_secs_f64();
    ok &= clause("runtime < 10 min", elapsed < 600.0, &format!("{elapsed:.1} s"));
    println!("criterion 7: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion 7 failed (see clause lines)");
}

#[test]
fn criterion_8_shift_machinery() {
    println!("criterion 8: dyadic shift (co-isometry) machinery");
    let mut ok = true;

    // QQ* = I exactly on 10³ random sparse observables
    let mut rng = testkit::rng(8008);
    let mut exact = true;
    for _ in 0..1000 {
        use rand::Rng;
        let mut m = BTreeMap::new();
        for _ in 0..rng.gen_range(1..16) {
            let r = loop {
                let r: i64 = rng.gen_range(-1_000_000..1_000_000);
                if r != 0 {
                    break r;
                }
            };
            m.insert(r, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
        let g = FourierObservable::new(m, false).unwrap();
        exact &= apply_q_fourier(&apply_qstar_fourier(&g)) == g;
    }
    ok &= clause("QQ* = I exactly on 10³ random sparse observables", exact, "key-exact");

    // coefficient action vs pointwise action for every |r| ≤ 256 on a 2¹² grid
    let mut worst = 0.0f64;
    for r in -256i64..=256 {
        if r == 0 {
            continue;
        }
        let mut m = BTreeMap::new();
        m.insert(r, Complex64::new(0.7, -0.3));
        let g = FourierObservable::new(m, false).unwrap();
        let coarse = apply_q_pointwise(&g.sample_grid(1 << 12)).unwrap();
        let expected = apply_q_fourier(&g).sample_grid(1 << 11);
        for (a, b) in coarse.iter().zip(&expected) {
            worst = worst.max((a - b).norm());
        }
    }
    ok &= clause(
        "coefficient vs pointwise action ≤ 1e-10, |r| ≤ 256, 2¹² grid",
        worst <= 1e-10,
        &format!("worst {worst:.3e}"),
    );

    // single-column geometric fixture: the shift verdict matches the
    // sequence-level verdict on the same column to 1e-9
    let mut m = BTreeMap::new();
    for i in 0..40u32 {
        m.insert(3i64 << i, Complex64::new(0.5f64.powi(i as i32), 0.0));
    }
    let g = FourierObservable::new(m, false).unwrap();
    let shift_verdict = ma_verdict_bernoulli(&g, 8192).unwrap();
    let column: Vec<f64> = (0..40).map(|i| 0.5f64.powi(i)).collect();
    let seq = partial_sums(&SeqSource::Array(column), 8192);
    let seq_verdict = ma_verdict_linear(&seq, 8192).unwrap();
    let (ks, kc) = (shift_verdict.kappa_sq.unwrap(), seq_verdict.kappa_sq.unwrap());
    ok &= clause(
        "geometric fixture: MA yes, κ² matches the sequence value to 1e-9",
        shift_verdict.exists == Exists::Yes && (ks - kc).abs() <= 1e-9 && (ks - 4.0).abs() < 1e-9,
        &format!("κ² shift {ks:.12}, sequence {kc:.12}"),
    );

    println!("criterion 8: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion 8 failed");
}

#[test]
fn criterion_9_residual_bound_and_empirics() {
    println!("criterion 9: residual bound and Monte Carlo agreement");
    let mut ok = true;

    let mut rng = testkit::rng(9009);
    let mut bound_ok = true;
    let mut worst_excess = 0.0f64;
    for trial in 0..100 {
        let n_states = 2 + (trial % 7);
        let chain = testkit::random_ergodic_chain(&mut rng, n_states);
        let g = testkit::random_observable(&mut rng, &chain);
        // prefix max of ‖V_m g‖²
        let mut vmax = vec![0.0f64; 129];
        for m in 1..=128 {
            vmax[m] = vmax[m - 1].max(chain.norm_sq(v_sums(&chain, &g, m).0.values()));
        }
        for n in 1..=128usize {
            let profile = residual_profile(&chain, &g, n);
            for (k_idx, &r) in profile.iter().enumerate() {
                let _ = k_idx;
                let bound = 9.0 * vmax[n];
                if r > bound {
                    bound_ok = false;
                    worst_excess = worst_excess.max(r - bound);
                }
            }
        }
    }
    ok &= clause(
        "E[R_{nk}²] ≤ 9·max_{m≤n}‖V_m g‖² for all k ≤ n ≤ 128",
        bound_ok,
        &format!("worst excess {worst_excess:.3e}"),
    );

    // empirical residual vs the exact limit-kernel second moment
    let (chain, g) = two_state_fixture();
    let (kernel, _) = martingale_kernel(&chain, &g).unwrap();
    let grid = [2usize, 8, 32, 128];
    let est = empirical_residual(&chain, g.values(), &kernel, &grid, 60_000, 99);
    let mut mc_ok = true;
    for e in &est {
        let exact = limit_residual_second_moment(&chain, &g, e.n).unwrap() / e.n as f64;
        mc_ok &= (e.mean_over_n - exact).abs() <= 3.0 * e.std_err_over_n.max(1e-9);
    }
    ok &= clause(
        "empirical residual within 3 s.e. of the exact value",
        mc_ok,
        &format!(
            "estimates {:?}",
            est.iter().map(|e| (e.n, e.mean_over_n)).collect::<Vec<_>>()
        ),
    );

    println!("criterion 9: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion 9 failed");
}

#[test]
fn supplementary_decay_along_dyadic_grid_on_normal_chains() {
    // the decay statements behind criterion 4, in the form that is true:
    // ‖H̄_n − H‖ → 0 and E[R_{nn}²]/n → 0 along the dyadic grid
    let mut rng = testkit::rng(2222);
    for trial in 0..20 {
        let chain = if trial % 2 == 0 {
            testkit::random_reversible_chain(&mut rng, 2 + trial % 5)
        } else {
            testkit::random_circulant_chain(&mut rng, 2 + trial % 5)
        };
        let h = testkit::random_observable(&mut rng, &chain);
        let g = sqrt_apply_chain(&chain, &h, 1e-12, DEFAULT_K_MAX).unwrap().g;
        let (limit_kernel, _) = martingale_kernel(&chain, &g).unwrap();
        let d2 = hbar_kernel(&chain, &g, 2).sub(&limit_kernel).norm_sq(&chain).sqrt();
        let d256 = hbar_kernel(&chain, &g, 256).sub(&limit_kernel).norm_sq(&chain).sqrt();
        assert!(d256 <= d2 * 0.05 + 1e-12, "kernel distance barely decayed: {d2} → {d256}");
        let r2 = residual_profile(&chain, &g, 2)[1] / 2.0;
        let r256 = residual_profile(&chain, &g, 256)[255] / 256.0;
        assert!(r256 <= r2 * 0.05 + 1e-12, "residual barely decayed: {r2} → {r256}");
    }

    // adjoint classification sanity on the same ensemble
    let chain = testkit::random_circulant_chain(&mut rng, 5);
    let rep = adjoint(&chain);
    assert!(rep.normal);
    let grid = dyadic_grid(1, 6);
    let g = testkit::random_observable(&mut rng, &chain);
    let (c2, c16) = criteria_diagnostic(&chain, &g, &grid, &grid, 0.1).unwrap();
    assert_eq!(c2.verdict, Verdict::Holds);
    assert_eq!(c16.verdict, Verdict::Holds);
}
