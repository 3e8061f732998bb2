//! Acceptance suite: one test per release criterion. Every test prints a
//! single `acceptance <id> ...: PASS|FAIL` line (run with `--nocapture` to
//! see the lines for passing tests) and then asserts, so the suite both
//! documents and enforces the bar.
//!
//! Run: `cargo test -p tsallis-rmt --test acceptance -- --nocapture`

use std::f64::consts::PI;

use rand::SeedableRng;
use tsallis_rmt::ensembles::{sample_tsallis_2x2, OracleConfig};
use tsallis_rmt::experiment::{
    berry_tabor_run, pooled_ensemble_spacings, transition_sweep, TransitionConfig,
    TransitionPoint, UnfoldParams,
};
use tsallis_rmt::fitting::{fit_q_ls, fit_q_mle, ks_distance};
use tsallis_rmt::spectral::histogram;
use tsallis_rmt::surmise::{
    tsallis_coeffs, wigner_pdf, EntropicIndex, QuantileTable, SpacingLaw, SymmetryClass,
};
use tsallis_rmt::UnfoldedSpacings;

const CLASSES: [SymmetryClass; 3] = [
    SymmetryClass::Orthogonal,
    SymmetryClass::Unitary,
    SymmetryClass::Symplectic,
];

fn report(id: &str, what: &str, pass: bool, detail: &str) -> bool {
    println!(
        "acceptance {id} {what}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn q(v: f64) -> EntropicIndex {
    EntropicIndex::new(v).expect("valid q")
}

/// Simple quadrature wrapper independent of the library's CDF path.
fn simpson_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for k in 1..panels {
        let x = a + k as f64 * h;
        acc += f(x) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn c1_coefficient_closed_forms() {
    let (a1, b1, _) = tsallis_coeffs(SymmetryClass::Orthogonal, q(0.0)).unwrap();
    let b1_exact = 25.0 * PI * PI / 1024.0;
    let (_, b2, _) = tsallis_coeffs(SymmetryClass::Unitary, q(0.0)).unwrap();
    let b2_exact = 4096.0 / (1225.0 * PI * PI);
    let err_b1 = (b1 - b1_exact).abs() / b1_exact;
    let err_a1 = (a1 - 5.0 * b1_exact).abs() / (5.0 * b1_exact);
    let err_b2 = (b2 - b2_exact).abs() / b2_exact;
    let pass = err_b1 < 1e-12 && err_a1 < 1e-12 && err_b2 < 1e-12;
    report(
        "C1",
        "coefficient closed forms",
        pass,
        &format!("rel errors: b1 {err_b1:.2e}, a1 {err_a1:.2e}, b2 {err_b2:.2e}"),
    );
    assert!(pass);
}

#[test]
fn c2_normalization_and_unit_mean() {
    let mut worst_mass = 0.0_f64;
    let mut worst_mean = 0.0_f64;
    for class in CLASSES {
        for k in 0..=9 {
            let law = SpacingLaw::new(class, q(k as f64 / 10.0));
            let mass = simpson_integral(|s| law.pdf(s), 0.0, law.s_max(), 40_000);
            let mean =
                simpson_integral(|s| s * law.pdf(s), 0.0, law.s_max(), 40_000);
            worst_mass = worst_mass.max((mass - 1.0).abs());
            worst_mean = worst_mean.max((mean - 1.0).abs());
        }
    }
    let pass = worst_mass < 1e-8 && worst_mean < 1e-8;
    report(
        "C2",
        "normalization and unit mean over beta x q grid",
        pass,
        &format!("max |mass-1| = {worst_mass:.2e}, max |mean-1| = {worst_mean:.2e}"),
    );
    assert!(pass);
}

#[test]
fn c3_wigner_limit_recovery() {
    let mut worst = 0.0_f64;
    for class in CLASSES {
        let law = SpacingLaw::new(class, q(0.999));
        let mut s = 0.0;
        while s <= 3.0 {
            worst = worst.max((law.pdf(s) - wigner_pdf(class, s)).abs());
            s += 1e-3;
        }
    }
    let pass = worst < 0.01;
    report(
        "C3",
        "q -> 1 recovers the classical surmise",
        pass,
        &format!("sup gap on [0,3] = {worst:.4}"),
    );
    assert!(pass);
}

#[test]
fn c4_oracle_matches_the_closed_form_law() {
    let cases = [
        (SymmetryClass::Orthogonal, 0.0),
        (SymmetryClass::Orthogonal, 0.5),
        (SymmetryClass::Unitary, 0.5),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (i, &(class, qv)) in cases.iter().enumerate() {
        let cfg = OracleConfig::new(class, q(qv), 1_000_000, 1000 + i as u64).unwrap();
        let spacings = sample_tsallis_2x2(&cfg).unwrap();
        let law = SpacingLaw::new(class, q(qv));
        let d = ks_distance(&spacings, &law);
        details.push(format!("beta={} q={qv}: KS={d:.5}", class.beta()));
        pass &= d < 0.005;
    }
    report("C4", "2x2 rejection oracle vs analytic CDF", pass, &details.join("; "));
    assert!(pass, "{details:?}");
}

#[test]
fn c5_fit_recovery_on_synthetic_data() {
    let class = SymmetryClass::Orthogonal;
    let mut pass = true;
    let mut details = Vec::new();
    for (i, &q_true) in [0.0, 0.3, 0.5, 0.8].iter().enumerate() {
        let law = SpacingLaw::new(class, q(q_true));
        let table = QuantileTable::new(&law);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(500 + i as u64);
        let spacings = UnfoldedSpacings::from_raw(table.sample(&mut rng, 100_000))
            .expect("positive samples");
        let hist = histogram(&spacings, 0.1).unwrap();
        let ls = fit_q_ls(&hist, class);
        let mle = fit_q_mle(spacings.values(), class).unwrap();
        details.push(format!(
            "q={q_true}: LS {:.3}, MLE {:.3}",
            ls.q_hat, mle.q_hat
        ));
        pass &= (ls.q_hat - q_true).abs() <= 0.05;
        pass &= (mle.q_hat - q_true).abs() <= 0.05;
    }
    report("C5", "estimators recover q within 0.05", pass, &details.join("; "));
    assert!(pass, "{details:?}");
}

#[test]
fn c6_pure_ensemble_baseline() {
    let mut pass = true;
    let mut details = Vec::new();
    for class in [SymmetryClass::Orthogonal, SymmetryClass::Unitary] {
        let base = pooled_ensemble_spacings(
            class,
            200,
            20,
            1.0,
            2024,
            UnfoldParams::default(),
        )
        .unwrap();
        let d = ks_distance(&base.spacings, &SpacingLaw::wigner(class));
        let fit = fit_q_ls(&histogram(&base.spacings, 0.1).unwrap(), class);
        details.push(format!(
            "beta={}: KS={d:.4}, q_hat={:.3}",
            class.beta(),
            fit.q_hat
        ));
        pass &= d < 0.03 && fit.q_hat >= 0.95;
    }
    report(
        "C6",
        "pooled GOE/GUE spacings sit at the Wigner end",
        pass,
        &details.join("; "),
    );
    assert!(pass, "{details:?}");
}

fn spearman_rho(x: &[f64], y: &[f64]) -> f64 {
    fn average_ranks(v: &[f64]) -> Vec<f64> {
        let n = v.len();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| v[i].partial_cmp(&v[j]).expect("finite"));
        let mut ranks = vec![0.0; n];
        let mut k = 0;
        while k < n {
            let mut j = k;
            while j + 1 < n && v[idx[j + 1]] == v[idx[k]] {
                j += 1;
            }
            let avg = (k + j) as f64 / 2.0 + 1.0;
            for &i in &idx[k..=j] {
                ranks[i] = avg;
            }
            k = j + 1;
        }
        ranks
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    cov / (vx * vy).sqrt()
}

fn first_g_reaching(points: &[TransitionPoint], level: f64) -> Option<f64> {
    points.iter().find(|p| p.fit.q_hat >= level).map(|p| p.g)
}

#[test]
fn c7_transition_experiment() {
    let run = |class| {
        let cfg = TransitionConfig::reference(class, 1);
        transition_sweep(&cfg).unwrap()
    };
    let goe = run(SymmetryClass::Orthogonal);
    let gue = run(SymmetryClass::Unitary);

    for (label, points) in [("beta=1", &goe), ("beta=2", &gue)] {
        let table: Vec<String> = points
            .iter()
            .map(|p| format!("g={}: q={:.3}", p.g, p.fit.q_hat))
            .collect();
        println!("acceptance C7 {label} sweep: {}", table.join(", "));
        for p in points {
            assert!(
                p.clipped_fraction() < 1e-3,
                "{label} g={}: clipped fraction {}",
                p.g,
                p.clipped_fraction()
            );
        }
    }

    // (a) The regular end of the beta = 1 chain is picket-fence-like.
    let q0 = goe[0].fit.q_hat;
    let pass_a = q0 <= 0.2;
    report("C7a", "q_hat(g=0) at the picket-fence end", pass_a, &format!("q_hat = {q0:.3}"));

    // (b) Monotone growth up to noise, both chains.
    let gs: Vec<f64> = goe.iter().map(|p| p.g).collect();
    let rho_goe =
        spearman_rho(&gs, &goe.iter().map(|p| p.fit.q_hat).collect::<Vec<_>>());
    let rho_gue =
        spearman_rho(&gs, &gue.iter().map(|p| p.fit.q_hat).collect::<Vec<_>>());
    let pass_b = rho_goe > 0.9 && rho_gue > 0.9;
    report(
        "C7b",
        "q_hat nondecreasing in g (Spearman)",
        pass_b,
        &format!("rho beta=1 {rho_goe:.3}, beta=2 {rho_gue:.3}"),
    );

    // (c) Chaotic statistics from g = 0.05 on, both chains.
    let mut pass_c = true;
    let mut det_c = Vec::new();
    for (label, points) in [("beta=1", &goe), ("beta=2", &gue)] {
        for p in points.iter().filter(|p| p.g >= 0.05) {
            if p.fit.q_hat < 0.9 {
                pass_c = false;
            }
            det_c.push(format!("{label} g={}: {:.3}", p.g, p.fit.q_hat));
        }
    }
    report("C7c", "q_hat >= 0.9 for g >= 0.05", pass_c, &det_c.join("; "));

    // (d) The unitary chain saturates no later than the orthogonal one.
    let g_goe = first_g_reaching(&goe, 0.9).expect("GOE chain saturates");
    let g_gue = first_g_reaching(&gue, 0.9).expect("GUE chain saturates");
    let pass_d = g_gue <= g_goe;
    report(
        "C7d",
        "unitary limit reached first",
        pass_d,
        &format!("first g with q>=0.9: beta=2 {g_gue} vs beta=1 {g_goe}"),
    );

    assert!(pass_a && pass_b && pass_c && pass_d);
}

#[test]
fn c8_oscillator_ladder_figure() {
    let run = berry_tabor_run(
        std::f64::consts::FRAC_1_SQRT_2,
        10_000,
        0.1,
        UnfoldParams::default(),
    )
    .unwrap();
    let peak = run.histogram.peak_location();
    let below = run.spacings.values().iter().filter(|&&s| s < 0.25).count() as f64
        / run.spacings.len() as f64;
    let ks = run.ks_vs_q0;

    let pass_peak = (0.9..=1.15).contains(&peak);
    let pass_below = below < 0.10;
    let ks_sane = ks > 0.0 && ks < 0.5;
    let in_expected_band = (0.02..=0.2).contains(&ks);
    report(
        "C8",
        "oscillator ladder vs q=0 law",
        pass_peak && pass_below && ks_sane,
        &format!(
            "peak = {peak:.3} (target [0.9, 1.15]), frac(s<0.25) = {below:.4}, \
             KS vs q=0 law = {ks:.4} (expected band [0.02, 0.2]: {in_expected_band})"
        ),
    );
    assert!(pass_below, "fraction below 0.25 = {below}");
    assert!(ks_sane, "KS = {ks}");
    // The spacing distribution of the incommensurate ladder is a mixture of
    // a few three-distance atoms whose weights oscillate with the level
    // count; at exactly 1e4 levels the modal 0.1-bin sits at [1.2, 1.3),
    // with [1.1, 1.2) second by ~2%. The target window [0.9, 1.15] is
    // therefore expected to fail; it is asserted as stated rather than
    // widened.
    assert!(pass_peak, "peak location {peak} outside [0.9, 1.15]");
}
