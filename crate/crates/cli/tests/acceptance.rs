//! Acceptance criteria. Each test prints one `[PASS]` or `[FAIL]` line and
//! asserts the criterion at its stated tolerance.
//!
//! Run with `cargo test -p ris-v2v-cli --test acceptance -- --nocapture`.
//! The tests hold a shared lock so the wall-clock budgets measure one
//! criterion at a time.

use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::Rng;
use ris_v2v::analytics::{capacity_report, outage_report};
use ris_v2v::fading::{aggregate_stats, element_moments, v_cdf, EnvelopeSampler};
use ris_v2v::montecarlo::simulate_v;
use ris_v2v::numerics::stream_rng;
use ris_v2v::{FadingParams, Scheme, SystemConfig, Thresholds, User};
use ris_v2v_cli::{sweep_rows, Metric, ResultRow, SchemeSelection, SweepParam, SweepSpec};

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(id: &str, ok: bool, detail: &str) {
    println!("[{}] {id} {detail}", if ok { "PASS" } else { "FAIL" });
}

fn ks_statistic(data: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    data.sort_by(f64::total_cmp);
    let n = data.len() as f64;
    data.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max((f - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - f).abs())
    })
}

#[test]
fn c1_moment_fidelity() {
    let _g = serial();
    let p = FadingParams::new(1.0, 3.0).unwrap();
    let (mean, var) = element_moments(p).unwrap();
    assert_eq!((mean, var), (1.5, 6.75));

    let start = Instant::now();
    let sampler = EnvelopeSampler::new(p).unwrap();
    let mut rng = stream_rng(2024, 0);
    let n = 1_000_000usize;
    let x: Vec<f64> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
    let elapsed = start.elapsed();

    let nf = n as f64;
    let m = x.iter().sum::<f64>() / nf;
    let c2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (nf - 1.0);
    let c4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / nf;
    let se_mean = (c2 / nf).sqrt();
    let se_var = ((c4 - c2 * c2) / nf).sqrt();
    let z_mean = (m - mean) / se_mean;
    let z_var = (c2 - var) / se_var;
    let ok = z_mean.abs() <= 5.0 && z_var.abs() <= 5.0 && elapsed < Duration::from_secs(10);
    verdict(
        "C1",
        ok,
        &format!(
            "moment fidelity: mean {m:.5} (z {z_mean:.2}), variance {c2:.4} (z {z_var:.2}), {:.2?} for 1e6 draws",
            elapsed
        ),
    );
    assert!(ok);
}

#[test]
fn c2_clt_validity() {
    let _g = serial();
    let ks_at = |n: usize, trials: usize| {
        let cfg = SystemConfig::default().with_elements(n);
        let stats = aggregate_stats(cfg.fading, n, n).unwrap();
        let sample = simulate_v(&cfg, trials, 77).unwrap();
        let mut v = sample.values().to_vec();
        ks_statistic(&mut v, |x| v_cdf(x, &stats))
    };
    let small = ks_at(2, 100_000);
    println!("       C2 note: KS at N1=N2=2 is {small:.4} (allowed to fail)");
    let d = ks_at(50, 100_000);
    let ok = d < 0.01;
    verdict(
        "C2",
        ok,
        &format!("CLT validity: KS at N1=N2=50 over 1e5 draws is {d:.5} (limit 0.01)"),
    );
    assert!(ok, "KS statistic {d} >= 0.01");
}

#[test]
fn c3_outage_oracle_equivalence() {
    let _g = serial();
    let th = Thresholds::default();
    let start = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    let mut failures = Vec::new();
    for n in [30usize, 50] {
        let base = SystemConfig::default().with_elements(n);
        let sample = simulate_v(&base, 100_000, 3).unwrap();
        for p in [-10.0, 0.0, 10.0, 20.0, 30.0] {
            let cfg = base.with_power_dbm(p);
            let analytic = outage_report(&cfg, &th).unwrap();
            for (scheme, user) in [
                (Scheme::Noma, User::T),
                (Scheme::Oma, User::R),
                (Scheme::Oma, User::T),
            ] {
                let mc = sample.outage(&cfg, &th, scheme, user).unwrap();
                let a = analytic.get(scheme, user);
                let budget = f64::max(0.01, 3.0 * mc.half_width());
                let diff = (a - mc.value).abs();
                worst = worst.max(diff / budget);
                if diff > budget {
                    failures.push(format!(
                        "N={n} P={p} {scheme}-{user}: analytic {a} mc {} budget {budget}",
                        mc.value
                    ));
                }
            }
            let b = sample.noma_r_breakdown(&cfg, &th).unwrap();
            println!(
                "       C3 noma-r N={n} P={p:>3}: product form {:.6}, joint {:.6} [{:.6}, {:.6}], sic {:.6}, own {:.6}, discrepancy {:+.6}",
                analytic.p_out_r_noma,
                b.joint.value,
                b.joint.ci_low,
                b.joint.ci_high,
                b.sic_failure.value,
                b.own_failure.value,
                b.joint.value - analytic.p_out_r_noma
            );
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(60);
    verdict(
        "C3",
        ok,
        &format!(
            "outage oracle: worst |diff|/budget {worst:.3} over OMA and NOMA-t, {} violations, {:.2?}",
            failures.len(),
            elapsed
        ),
    );
    assert!(ok, "{failures:#?}");
}

#[test]
fn c4_feasibility_branches() {
    let _g = serial();
    let cfg = SystemConfig::default().with_elements(30);
    assert_eq!((cfg.power.p_t, cfg.power.p_r), (0.6, 0.4));
    let sample = simulate_v(&cfg, 20_000, 5).unwrap();
    let mut bad = Vec::new();
    for gamma in [1.5, 1.5000001, 2.0, 10.0, 1e3] {
        let cases = [
            Thresholds {
                gamma_t_noma: gamma,
                ..Thresholds::default()
            },
            Thresholds {
                gamma_sic: gamma,
                ..Thresholds::default()
            },
            Thresholds {
                gamma_sic: gamma,
                gamma_t_noma: gamma,
                ..Thresholds::default()
            },
        ];
        for th in cases {
            let a = outage_report(&cfg, &th).unwrap();
            let checks = [
                (User::T, th.gamma_t_noma >= 1.5, a.p_out_t_noma),
                (User::R, th.gamma_sic >= 1.5, a.p_out_r_noma),
            ];
            for (user, infeasible, analytic) in checks {
                if !infeasible {
                    continue;
                }
                let mc = sample.outage(&cfg, &th, Scheme::Noma, user).unwrap().value;
                if analytic != 1.0 || mc != 1.0 {
                    bad.push(format!(
                        "gamma {gamma} user {user}: analytic {analytic} mc {mc}"
                    ));
                }
            }
        }
    }
    let ok = bad.is_empty();
    verdict(
        "C4",
        ok,
        &format!(
            "feasibility: NOMA thresholds >= 1.5 give OP exactly 1, {} violations",
            bad.len()
        ),
    );
    assert!(ok, "{bad:#?}");
}

/// Random valid configuration. Element counts, path-loss exponent and
/// power are kept where the mean SNR is large enough for the gap between
/// `E[log2(1 + X)]` and `log2(1 + E[X])` to exceed simulation noise.
fn fuzz_config(rng: &mut impl Rng) -> SystemConfig {
    let mut cfg = SystemConfig::default();
    let n = rng.random_range(2..=12);
    cfg.surfaces.n1 = n;
    cfg.surfaces.n2 = rng.random_range(2..=12);
    let beta_r: f64 = rng.random_range(0.1..0.95);
    cfg.surfaces.beta_r = beta_r;
    cfg.surfaces.beta_t = rng.random_range(0.1..=(1.0 - beta_r * beta_r).sqrt());
    cfg.fading = FadingParams::new(rng.random_range(0.5..4.0), rng.random_range(2.5..8.0)).unwrap();
    cfg.power.p_total_dbm = rng.random_range(20.0..50.0);
    cfg.power.p_t = rng.random_range(0.55..0.9);
    cfg.power.p_r = 1.0 - cfg.power.p_t;
    cfg.geometry.star_to_r_m = rng.random_range(2.0..30.0);
    cfg.geometry.star_to_t_m = rng.random_range(2.0..30.0);
    cfg.geometry.ris_to_star_m = rng.random_range(5.0..40.0);
    cfg.geometry.kappa = rng.random_range(2.1..3.0);
    cfg.oma_resource_fraction = rng.random_range(0.2..=1.0);
    cfg.validate().unwrap();
    cfg
}

#[test]
fn c5_jensen_dominance() {
    let _g = serial();
    let mut rng = stream_rng(5, 0);
    let mut violations = Vec::new();
    let mut min_z = f64::INFINITY;
    for i in 0..50u64 {
        let cfg = fuzz_config(&mut rng);
        let bounds = capacity_report(&cfg).unwrap();
        let sample = simulate_v(&cfg, 20_000, 1000 + i).unwrap();
        for scheme in Scheme::ALL {
            for user in User::ALL {
                let mc = sample.capacity(&cfg, scheme, user).unwrap();
                let bound = bounds.ec(scheme, user);
                let se = mc.half_width() / ris_v2v::montecarlo::Z_95;
                min_z = min_z.min((bound - mc.value) / se);
                if mc.value > bound {
                    violations.push(format!(
                        "config {i} {scheme}-{user}: mc {} > bound {bound}",
                        mc.value
                    ));
                }
            }
        }
    }
    let ok = violations.is_empty();
    verdict(
        "C5",
        ok,
        &format!(
            "Jensen dominance: 50 configs x 4 pairs, {} violations, smallest margin {min_z:.1} standard errors",
            violations.len()
        ),
    );
    assert!(ok, "{violations:#?}");
}

#[test]
fn c6_saturation() {
    let _g = serial();
    let cfg = SystemConfig::default().with_elements(200);
    let ceiling = (1.0 + cfg.power.p_t / cfg.power.p_r).log2();
    assert!((ceiling - 2.5f64.log2()).abs() < 1e-15);
    let mc = simulate_v(&cfg, 10_000, 6)
        .unwrap()
        .capacity(&cfg, Scheme::Noma, User::T)
        .unwrap();
    let bound = capacity_report(&cfg).unwrap().ec_t_noma;
    let rel = (mc.value - ceiling).abs() / ceiling;
    let ok = rel <= 0.02 && bound < ceiling;
    verdict(
        "C6",
        ok,
        &format!(
            "saturation: NOMA-t EC at N=200 is {:.6} ({:.3}% from log2(2.5)), bound {bound:.9} < {ceiling:.9}",
            mc.value,
            rel * 100.0
        ),
    );
    assert!(ok);
}

fn series(rows: &[ResultRow], scheme: Scheme, user: User, metric: Metric) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| r.scheme == scheme && r.user == user && r.metric == metric)
        .map(|r| (r.value, r.analytic))
        .collect()
}

fn non_increasing(v: &[(f64, f64)]) -> bool {
    v.windows(2).all(|w| w[1].1 <= w[0].1)
}

fn non_decreasing(v: &[(f64, f64)]) -> bool {
    v.windows(2).all(|w| w[1].1 >= w[0].1)
}

/// Rises to a single maximum strictly inside the range, then falls.
fn interior_peak(v: &[(f64, f64)]) -> Option<(f64, f64)> {
    let k = (0..v.len()).max_by(|&a, &b| v[a].1.total_cmp(&v[b].1))?;
    let rising = v[..=k].windows(2).all(|w| w[1].1 >= w[0].1);
    let falling = v[k..].windows(2).all(|w| w[1].1 <= w[0].1);
    (k > 0 && k + 1 < v.len() && rising && falling).then_some(v[k])
}

fn sweep(
    cfg: &SystemConfig,
    param: SweepParam,
    from: f64,
    to: f64,
    step: f64,
    metrics: &[Metric],
) -> Vec<ResultRow> {
    let spec = SweepSpec {
        parameter: param,
        from,
        to,
        step,
        scheme: SchemeSelection::Both,
        metrics: metrics.to_vec(),
        trials: 0,
        seed: 1,
    };
    sweep_rows(cfg, &spec, &Thresholds::default()).unwrap()
}

#[test]
fn c7_figure_shapes() {
    let _g = serial();
    let base = SystemConfig::default();
    let mut parts: Vec<(String, bool)> = Vec::new();
    let pairs = [
        (Scheme::Noma, User::R),
        (Scheme::Noma, User::T),
        (Scheme::Oma, User::R),
        (Scheme::Oma, User::T),
    ];

    let op30 = sweep(
        &base.with_elements(30),
        SweepParam::TransmitPowerDbm,
        -10.0,
        40.0,
        2.0,
        &[Metric::Op],
    );
    let op50 = sweep(
        &base.with_elements(50),
        SweepParam::TransmitPowerDbm,
        -10.0,
        40.0,
        2.0,
        &[Metric::Op],
    );
    let op_in_p = pairs.iter().all(|&(s, u)| {
        non_increasing(&series(&op30, s, u, Metric::Op))
            && non_increasing(&series(&op50, s, u, Metric::Op))
    });
    parts.push(("OP non-increasing in P (N=30, 50)".into(), op_in_p));
    let op_in_n = pairs.iter().all(|&(s, u)| {
        series(&op30, s, u, Metric::Op)
            .iter()
            .zip(series(&op50, s, u, Metric::Op))
            .all(|(a, b)| b.1 <= a.1)
    });
    parts.push(("OP non-increasing in N (30 -> 50)".into(), op_in_n));

    let ec_n = sweep(
        &base,
        SweepParam::Elements,
        10.0,
        200.0,
        10.0,
        &[Metric::Ec],
    );
    let ec_in_n = pairs
        .iter()
        .all(|&(s, u)| non_decreasing(&series(&ec_n, s, u, Metric::Ec)));
    parts.push(("EC non-decreasing in N (10..200)".into(), ec_in_n));

    let high = capacity_report(&base.with_power_dbm(40.0)).unwrap();
    parts.push((
        format!(
            "NOMA-r EC {:.3} above NOMA-t EC {:.3} at P=40 dBm",
            high.ec_r_noma, high.ec_t_noma
        ),
        high.ec_r_noma > high.ec_t_noma,
    ));

    let mut peaks = Vec::new();
    for n in [30usize, 50] {
        let ee = sweep(
            &base.with_elements(n),
            SweepParam::TransmitPowerDbm,
            -10.0,
            40.0,
            1.0,
            &[Metric::Ee],
        );
        for scheme in Scheme::ALL {
            let peak = interior_peak(&series(&ee, scheme, User::R, Metric::Ee));
            parts.push((
                match peak {
                    Some((p, v)) => {
                        format!("{scheme} EE unimodal at N={n}, peak {v:.3} at {p} dBm")
                    }
                    None => format!("{scheme} EE unimodal at N={n}"),
                },
                peak.is_some(),
            ));
            if scheme == Scheme::Noma {
                peaks.push(peak.map_or(f64::NAN, |p| p.1));
            }
        }
    }
    parts.push((
        format!(
            "larger N gives larger peak NOMA EE ({:.3} at N=30, {:.3} at N=50)",
            peaks[0], peaks[1]
        ),
        peaks[1] > peaks[0],
    ));

    let d = capacity_report(&base).unwrap();
    let noma_sum = d.ec_r_noma + d.ec_t_noma;
    let oma_sum = d.ec_r_oma + d.ec_t_oma;
    parts.push((
        format!("NOMA sum EC {noma_sum:.4} >= OMA sum EC {oma_sum:.4}"),
        noma_sum >= oma_sum,
    ));
    parts.push((
        format!("NOMA EE {:.4} >= OMA EE {:.4}", d.ee_noma, d.ee_oma),
        d.ee_noma >= d.ee_oma,
    ));

    for (what, ok) in &parts {
        println!("       C7 {} {what}", if *ok { "ok  " } else { "FAIL" });
    }
    let failed: Vec<&String> = parts.iter().filter(|p| !p.1).map(|p| &p.0).collect();
    let ok = failed.is_empty();
    verdict(
        "C7",
        ok,
        &format!(
            "figure shapes: {}/{} sub-checks hold",
            parts.len() - failed.len(),
            parts.len()
        ),
    );
    assert!(ok, "failed: {failed:#?}");
}

fn cli(workers: usize, args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_ris-v2v"))
        .arg("--workers")
        .arg(workers.to_string())
        .args(args)
        .output()
        .expect("run ris-v2v");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::read(args[args.iter().position(|a| *a == "--out").unwrap() + 1]).unwrap()
}

#[test]
fn c8_determinism() {
    let _g = serial();
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    std::fs::write(&config, r#"{"surfaces.n1": 20, "surfaces.n2": 20}"#).unwrap();
    let config = config.to_str().unwrap();
    let mut identical = Vec::new();
    for (name, args) in [
        (
            "sweep",
            vec![
                "sweep", "--config", config, "--param", "P", "--from", "-10", "--to", "10",
                "--step", "5", "--metric", "op,ec,ee", "--scheme", "both", "--trials", "4000",
                "--seed", "9",
            ],
        ),
        (
            "validate",
            vec![
                "validate", "--config", config, "--trials", "20000", "--seed", "9",
            ],
        ),
    ] {
        let mut outputs = Vec::new();
        for workers in [1usize, 8] {
            let path = dir.path().join(format!("{name}-{workers}.csv"));
            let mut a = args.clone();
            let p = path.to_str().unwrap().to_string();
            a.extend(["--out", p.as_str()]);
            outputs.push(cli(workers, &a));
        }
        assert!(!outputs[0].is_empty());
        identical.push((name, outputs[0] == outputs[1], outputs[0].len()));
    }
    let ok = identical.iter().all(|x| x.1);
    verdict(
        "C8",
        ok,
        &format!(
            "determinism: 1 vs 8 workers {}",
            identical
                .iter()
                .map(|(n, same, len)| format!(
                    "{n} {} ({len} bytes)",
                    if *same { "identical" } else { "differ" }
                ))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    assert!(ok);
}
