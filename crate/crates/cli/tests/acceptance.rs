//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `-- --nocapture`, or on failure).
//!
//! The Monte Carlo criteria run at pinned seeds so the suite is
//! deterministic; tolerances are 4 standard errors for exact oracles, with
//! stated runtime budgets. Criteria run serially so the budgets are
//! meaningful on small machines.

use std::sync::Mutex;
use std::time::Instant;

use fmfbm::montecarlo::{inverse_subordinator_draws, moment_estimate, MCEstimate};
use fmfbm::theory::{covariance_q1_tail_expansion, covariance_tc_q1, variance_tc};
use fmfbm::{
    alpha1_limit_covariance, covariance_asymptotic_q33, default_delta_r, empirical_correlation,
    empirical_cross_moment, fbm_covariance, fit_decay_exponent, generate_ensemble, laplace_check,
    lrd_condition, sample_fbm_at_times, FmfBmParams, FormulaVariant, Hurst, StableIndex,
    TimeGrid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn report(id: &str, name: &str, pass: bool, details: &str) {
    println!(
        "[acceptance] {id} {name}: {} ({details})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{id} {name} failed: {details}");
}

fn hurst(v: f64) -> Hurst {
    Hurst::new(v).unwrap()
}

fn index(v: f64) -> StableIndex {
    StableIndex::new(v).unwrap()
}

fn params(a: f64, b: f64, h1: f64, h2: f64, alpha: f64) -> FmfBmParams {
    FmfBmParams::new(a, b, hurst(h1), hurst(h2), index(alpha)).unwrap()
}

#[test]
fn c1_stable_sampler_laplace_contract() {
    let _guard = serial();
    let start = Instant::now();
    let mut worst_z: f64 = 0.0;
    for &alpha in &[0.5, 0.8] {
        let reports = laplace_check(index(alpha), &[0.5, 1.0, 2.0], 200_000, 1001).unwrap();
        for rep in &reports {
            let c = &rep.candidates[0];
            assert!(c.oracle);
            worst_z = worst_z.max(c.z_score.abs());
            assert!(c.within_4se, "{}: z = {}", rep.quantity, c.z_score);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_z <= 4.0 && elapsed < 60.0;
    report(
        "C1",
        "stable-sampler Laplace contract",
        pass,
        &format!("max |z| = {worst_z:.2}, {elapsed:.1}s for 6 (alpha, u) pairs"),
    );
}

#[test]
fn c2_inverse_subordinator_moments_and_refinement() {
    let _guard = serial();
    let start = Instant::now();
    let alpha = index(0.5);
    let draws = inverse_subordinator_draws(alpha, 1.0, 100_000, 1e-3, 6).unwrap();
    let m1 = moment_estimate(&draws, 1.0).unwrap().estimate;
    let m2 = moment_estimate(&draws, 2.0).unwrap().estimate;
    let z1 = (m1.value - 1.128_379_167_095_512_6) / m1.std_error;
    let z2 = (m2.value - 2.0) / m2.std_error;

    let halved = inverse_subordinator_draws(alpha, 1.0, 100_000, 5e-4, 6).unwrap();
    let m1_halved = moment_estimate(&halved, 1.0).unwrap().estimate;
    let shift = (m1.value - m1_halved.value).abs() / m1.std_error;

    let elapsed = start.elapsed().as_secs_f64();
    let pass = z1.abs() <= 4.0 && z2.abs() <= 4.0 && shift < 1.0 && elapsed < 60.0;
    report(
        "C2",
        "inverse-subordinator moments",
        pass,
        &format!(
            "E[T_1] z = {z1:+.2}, E[T_1^2] z = {z2:+.2}, refinement shift = {shift:.2} se, {elapsed:.1}s"
        ),
    );
}

#[test]
fn c3_fbm_sampler_exactness() {
    let _guard = serial();
    let start = Instant::now();
    let grid = TimeGrid::new(vec![1.0, 2.0, 3.0]).unwrap();
    let n = 100_000usize;
    let mut worst_z: f64 = 0.0;
    for (k, &hv) in [0.3, 0.5, 0.7].iter().enumerate() {
        let h = hurst(hv);
        let mut rng = ChaCha12Rng::seed_from_u64(3000 + k as u64);
        // running sums of products and their squares for all entries i <= j
        let mut sums = [[0.0f64; 2]; 6];
        let pairs = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
        for _ in 0..n {
            let path = sample_fbm_at_times(h, &grid, &mut rng).unwrap();
            for (slot, &(i, j)) in pairs.iter().enumerate() {
                let prod = path.values[i] * path.values[j];
                sums[slot][0] += prod;
                sums[slot][1] += prod * prod;
            }
        }
        for (slot, &(i, j)) in pairs.iter().enumerate() {
            let mean = sums[slot][0] / n as f64;
            let var = (sums[slot][1] / n as f64 - mean * mean) / (n as f64 - 1.0);
            let se = var.sqrt();
            let target = fbm_covariance(h, grid.times()[i], grid.times()[j]);
            if hv == 0.5 && (i, j) == (0, 1) {
                assert_eq!(target, 1.0); // min(1, 2)
            }
            let z = (mean - target) / se;
            worst_z = worst_z.max(z.abs());
            assert!(
                z.abs() <= 4.0,
                "H = {hv}, entry ({i},{j}): {mean} vs {target}, z = {z}"
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_z <= 4.0 && elapsed < 30.0;
    report(
        "C3",
        "fBm sampler exactness",
        pass,
        &format!("max |z| = {worst_z:.2} over 18 covariance entries, {elapsed:.1}s"),
    );
}

#[test]
fn c4_exact_time_changed_bm_oracle() {
    let _guard = serial();
    let start = Instant::now();
    let p = params(1.0, 0.0, 0.5, 0.7, 0.6);
    let grid = TimeGrid::new(vec![1.0, 2.0]).unwrap();
    let ens = generate_ensemble(&p, &grid, 100_000, 1e-3, 4004).unwrap();
    let mc = empirical_cross_moment(&ens, 0, 1).unwrap();
    let target = 1.119_174_954_070_122_1; // min(1,2)^0.6 / Gamma(1.6)
    let z = (mc.value - target) / mc.std_error;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = z.abs() <= 4.0 && elapsed < 120.0;
    report(
        "C4",
        "time-changed Brownian clock oracle",
        pass,
        &format!("mc = {:.5}, target = {target:.5}, z = {z:+.2}, {elapsed:.1}s", mc.value),
    );
}

#[test]
fn c5_identity_time_degeneracy() {
    let _guard = serial();
    let start = Instant::now();
    let p = params(1.0, 1.0, 0.3, 0.7, 1.0);
    let grid = TimeGrid::new(vec![1.0, 2.0]).unwrap();
    let ens = generate_ensemble(&p, &grid, 100_000, 1e-3, 5005).unwrap();
    let mc = empirical_cross_moment(&ens, 0, 1).unwrap();
    let target = alpha1_limit_covariance(1.0, 1.0, hurst(0.3), hurst(0.7), 1.0, 2.0).unwrap();
    assert!((target - 2.077_366_194_028_093).abs() < 1e-12);
    let z = (mc.value - target) / mc.std_error;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = z.abs() <= 4.0;
    report(
        "C5",
        "identity-time degeneracy",
        pass,
        &format!("mc = {:.5}, target = {target:.5}, z = {z:+.2}, {elapsed:.1}s", mc.value),
    );
}

#[test]
fn c6_decay_exponent_fit() {
    let _guard = serial();
    // noiseless fitter path first: exact power law recovered to 1e-9
    let ts: Vec<f64> = (0..20)
        .map(|i| 10.0 * 100.0_f64.powf(i as f64 / 19.0))
        .collect();
    let synthetic: Vec<MCEstimate> = ts
        .iter()
        .map(|t| MCEstimate {
            value: 2.5 * t.powf(-0.4),
            std_error: 0.0,
            n: 1,
        })
        .collect();
    let exact_fit = fit_decay_exponent(1.0, &ts, &synthetic).unwrap();
    assert!((exact_fit.exponent_d - 0.4).abs() < 1e-9);

    let start = Instant::now();
    let p = params(0.0, 1.0, 0.3, 0.7, 0.8);
    let scan = TimeGrid::logspace(10.0, 1000.0, 20).unwrap();
    let mut all = vec![1.0];
    all.extend_from_slice(scan.times());
    let grid = TimeGrid::new(all).unwrap();
    let delta_r = default_delta_r(p.alpha, grid.last());
    let ens = generate_ensemble(&p, &grid, 20_000, delta_r, 3).unwrap();
    let mut t_values = Vec::new();
    let mut corr = Vec::new();
    for j in 1..grid.len() {
        t_values.push(grid.times()[j]);
        corr.push(empirical_correlation(&ens, 0, j).unwrap());
    }
    let fit = fit_decay_exponent(1.0, &t_values, &corr).unwrap();
    let theory_d = 0.44; // 1 - alpha H2
    let err = (fit.exponent_d - theory_d).abs();
    let elapsed = start.elapsed().as_secs_f64();
    let pass = err <= 0.15 && elapsed < 900.0;
    report(
        "C6",
        "correlation decay exponent",
        pass,
        &format!(
            "fitted d = {:.4} vs predicted {theory_d} (|diff| = {err:.4}, tol 0.15), r2 = {:.3}, noiseless fit exact, {elapsed:.0}s",
            fit.exponent_d, fit.r_squared
        ),
    );
}

#[test]
fn c7_lrd_predicate_truth_table() {
    let _guard = serial();
    let tabulated = [
        (0.9, 0.4, 0.6, true),
        (0.9, 0.6, 0.4, false),
        (0.5, 0.2, 0.7, false),
    ];
    for &(alpha, h1, h2, expected) in &tabulated {
        let v = lrd_condition(&params(1.0, 1.0, h1, h2, alpha));
        assert_eq!(v.holds, expected, "alpha={alpha}, H=({h1},{h2})");
    }

    // decomposition invariant over 1e4 random parameter draws
    let mut rng = ChaCha12Rng::seed_from_u64(7007);
    for _ in 0..10_000 {
        let a: f64 = rng.gen_range(-2.0..2.0);
        let b: f64 = rng.gen_range(-2.0..2.0);
        if a == 0.0 && b == 0.0 {
            continue;
        }
        let h1: f64 = rng.gen_range(0.02..0.98);
        let h2: f64 = rng.gen_range(0.02..0.98);
        let alpha: f64 = rng.gen_range(0.05..1.0);
        let v = lrd_condition(&params(a, b, h1, h2, alpha));
        let mix = 2.0 * alpha * h1 - alpha * h2;
        assert_eq!(v.h_condition, h1 < h2);
        assert_eq!(v.exponent_condition, 0.0 < mix && mix < 1.0);
        assert_eq!(v.holds, v.h_condition && v.exponent_condition);
        assert_eq!(v.dominant_decay_exponent.is_some(), v.holds);
    }
    report(
        "C7",
        "LRD predicate truth table",
        true,
        "3 tabulated cases + 1e4 random decomposition draws",
    );
}

#[test]
fn c8_discrepancy_surfacing_via_cli() {
    let _guard = serial();
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_fmfbm");

    // exact oracle passes; the printed covariance is reported with its
    // z-score but cannot affect the exit code
    let out = std::process::Command::new(bin)
        .args([
            "verify", "cov", "--alpha", "0.6", "--a", "1", "--b", "0", "--h1", "0.5",
            "--h2", "0.7", "--s", "1", "--t", "2", "--paths", "100000",
            "--delta-r", "0.001", "--seed", "88",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let candidates = doc["report"]["candidates"].as_array().unwrap();
    let find = |label: &str| {
        candidates
            .iter()
            .find(|c| c["label"] == label)
            .unwrap_or_else(|| panic!("candidate {label} missing"))
    };
    let paper = find("eq_q1_paper");
    let oracle = find("bm_time_change_oracle");
    assert!((paper["value"].as_f64().unwrap() - 0.848_176_009_353_798_9).abs() < 1e-9);
    assert!(paper["z_score"].as_f64().unwrap().is_finite());
    assert_eq!(paper["oracle"], false);
    assert_eq!(oracle["within_4se"], true);
    let paper_z = paper["z_score"].as_f64().unwrap();

    // two-variant variance report at H = 0.7: both candidates shown, the
    // Monte Carlo arbiter's verdict attached to each
    let out = std::process::Command::new(bin)
        .args([
            "verify", "cov", "--alpha", "0.5", "--a", "1", "--b", "0", "--h1", "0.7",
            "--h2", "0.7", "--s", "1", "--t", "1", "--paths", "100000",
            "--delta-r", "0.001", "--seed", "89",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let candidates = doc["report"]["candidates"].as_array().unwrap();
    let find = |label: &str| {
        candidates
            .iter()
            .find(|c| c["label"] == label)
            .unwrap_or_else(|| panic!("candidate {label} missing"))
    };
    let lemma = find("eq_q1_paper");
    let moment = find("moment_oracle");
    assert!((lemma["value"].as_f64().unwrap() - 1.184_232_792_815_739_7).abs() < 1e-9);
    assert!((moment["value"].as_f64().unwrap() - 1.367_066_249_315_245_5).abs() < 1e-9);
    let lemma_pass = lemma["within_4se"].as_bool().unwrap();
    let moment_pass = moment["within_4se"].as_bool().unwrap();
    // simulation follows the conditioning identity, not the printed value
    let elapsed = start.elapsed().as_secs_f64();
    let pass = moment_pass && !lemma_pass;
    report(
        "C8",
        "discrepancy surfacing",
        pass,
        &format!(
            "printed covariance z = {paper_z:+.1} (exit untouched); variance candidates 1.18424 vs 1.36707 -> simulation matches the conditioning identity, {elapsed:.0}s"
        ),
    );
}

#[test]
fn c9_closed_form_consistency_suite() {
    let _guard = serial();
    let start = Instant::now();

    // diagonal consistency, exact
    for variant in [FormulaVariant::PaperLemma22, FormulaVariant::MomentOracle] {
        for &alpha in &[0.4, 0.7, 1.0] {
            let p = params(1.2, -0.8, 0.3, 0.7, alpha);
            for &t in &[0.25, 1.0, 7.0] {
                assert_eq!(
                    covariance_tc_q1(&p, t, t, variant).unwrap(),
                    variance_tc(&p, t, variant)
                );
            }
        }
    }

    // identity-time collapse, exact
    let p1 = params(1.0, 1.0, 0.3, 0.7, 1.0);
    for variant in [FormulaVariant::PaperLemma22, FormulaVariant::MomentOracle] {
        assert_eq!(
            covariance_tc_q1(&p1, 1.0, 2.0, variant).unwrap(),
            alpha1_limit_covariance(1.0, 1.0, hurst(0.3), hurst(0.7), 1.0, 2.0).unwrap()
        );
    }

    // variant agreement for Brownian components, 1e-12 relative
    for &alpha in &[0.3, 0.6, 0.9] {
        let p = params(1.0, 0.0, 0.5, 0.7, alpha);
        let a = covariance_tc_q1(&p, 1.0, 2.0, FormulaVariant::PaperLemma22).unwrap();
        let b = covariance_tc_q1(&p, 1.0, 2.0, FormulaVariant::MomentOracle).unwrap();
        assert!(((a - b) / b).abs() < 1e-12);
    }

    // kernel self-similarity, 1e-12 relative
    let mut rng = ChaCha12Rng::seed_from_u64(9009);
    for _ in 0..1000 {
        let h = hurst(rng.gen_range(0.05..0.95));
        let s: f64 = rng.gen_range(0.01..10.0);
        let t: f64 = rng.gen_range(0.01..10.0);
        let c: f64 = rng.gen_range(0.01..20.0);
        let scaled = fbm_covariance(h, c * s, c * t);
        let direct = c.powf(2.0 * h.value()) * fbm_covariance(h, s, t);
        assert!(((scaled - direct) / direct.abs().max(1e-300)).abs() < 1e-12);
    }

    // asymptotic consistency at t = 1e6: the closed form tracks its exact
    // tail expansion to within 1%; against the printed two-term expansion
    // the ratio settles at H2 instead (quantifying the dropped factor), and
    // that offset is asserted too rather than hidden
    let p = params(1.0, 1.0, 0.55, 0.75, 0.95);
    let t = 1e6;
    let q1 = covariance_tc_q1(&p, 1.0, t, FormulaVariant::PaperLemma22).unwrap();
    let tail = covariance_q1_tail_expansion(&p, 1.0, t).unwrap().value;
    let printed = covariance_asymptotic_q33(&p, 1.0, t).unwrap().value;
    let tail_ratio = q1 / tail;
    let printed_ratio = q1 / printed;
    assert!((tail_ratio - 1.0).abs() < 0.01, "tail ratio {tail_ratio}");
    assert!(
        (printed_ratio - 0.75).abs() < 0.01,
        "printed-form ratio {printed_ratio} should settle at H2"
    );

    let elapsed = start.elapsed().as_secs_f64();
    let pass = elapsed < 5.0;
    report(
        "C9",
        "closed-form consistency suite",
        pass,
        &format!(
            "diagonal/collapse exact, H=1/2 agreement < 1e-12, self-similarity < 1e-12, tail ratio = {tail_ratio:.4}, printed-form ratio = {printed_ratio:.4} (settles at H2), {elapsed:.2}s"
        ),
    );
}
