//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see
//! the report; the test fails if any line fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use robustcnot_cli::commands::{self, FIGURE_FILES};
use robustcnot_cli::RunConfig;
use robustcnot_core::charplan::{error_vs_measurements, exchange_uncertainty, min_measurements};
use robustcnot_core::cost::{count_recurrence, schedule_time, two_qubit_unit_time, TimingModel};
use robustcnot_core::pulse::{build_cnot, cnot_sequence_error, simulate};
use robustcnot_core::su4::{cnot, equal_up_to_global_phase};
use robustcnot_core::ErrorModel;

struct Report {
    failed: Vec<String>,
}

impl Report {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(name.to_owned());
        }
    }
}

fn error(level: u32, delta: f64) -> f64 {
    robustcnot_core::pulse::cnot_error(level, delta, 8).unwrap()
}

fn column(doc: &robustcnot_cli::output::CsvDoc, name: &str) -> Vec<f64> {
    let i = doc.header().iter().position(|h| h == name).unwrap();
    doc.rows().iter().map(|r| r[i].parse().unwrap()).collect()
}

fn slope(deltas: &[f64], level: u32) -> f64 {
    let seq = build_cnot(level, 8).unwrap();
    let pts: Vec<(f64, f64)> = deltas
        .iter()
        .map(|&d| (d.ln(), cnot_sequence_error(&seq, ErrorModel::new(d).unwrap()).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn table1(r: &mut Report) {
    let start = Instant::now();
    let doc = commands::table1(&RunConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let t1 = column(&doc, "t_1q_ns");
    let t2 = column(&doc, "t_2q_ns");
    let total = column(&doc, "t_total_ns");
    let nr = column(&doc, "N_r");
    let rendered = doc.render();
    let ok_2q = [3.92, 35.28, 2544.08]
        .iter()
        .zip(&t2)
        .all(|(want, got)| (want - got).abs() <= 0.005);
    let ok_1q = t1[0] == 180.0 && (t1[1] - 716.0).abs() <= 0.5;
    let rel = (total[2] - 55800.88) / 55800.88;
    let ok = nr.iter().all(|n| *n == 8.0)
        && ok_2q
        && ok_1q
        && rel.abs() < 0.05
        && rendered.contains("# reference level=2")
        && elapsed < Duration::from_secs(1);
    r.check(
        "table1",
        ok,
        format!(
            "N_r=8 t_2q={t2:?} t_1q=[{}, {:.3}] level-2 total {:.2} ns ({:+.2}%) in {elapsed:?}",
            t1[0],
            t1[1],
            total[2],
            100.0 * rel
        ),
    );
}

fn gate_counts(r: &mut Report) {
    let l1 = count_recurrence(1, 8);
    let l2 = count_recurrence(2, 8);
    let mut seq_ok = true;
    for level in 1..=2 {
        for nr in [1, 4, 8] {
            let (_, n2) = build_cnot(level, nr).unwrap().census();
            seq_ok &= n2 as u64 == count_recurrence(level, nr).n_2q;
        }
    }
    let ok = (l1.n, l1.n_1q, l1.n_2q) == (16, 20, 10) && (l2.n, l2.n_1q, l2.n_2q) == (1446, 1450, 800) && seq_ok;
    r.check(
        "gate_counts",
        ok,
        format!(
            "level1=({},{},{}) level2=({},{},{}) sequence two-qubit counts match={seq_ok}",
            l1.n, l1.n_1q, l1.n_2q, l2.n, l2.n_1q, l2.n_2q
        ),
    );
}

fn closed_form(r: &mut Report) {
    let start = Instant::now();
    let worst = (0..181)
        .map(|i| {
            let d = (-0.9 * (180 - i) as f64 + 0.9 * i as f64) / 180.0;
            (error(0, d) - (1.0 - (PI * d / 4.0).cos())).abs()
        })
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    r.check(
        "closed_form_level0",
        worst < 1e-12 && elapsed < Duration::from_secs(1),
        format!("max |Δerror| {worst:.2e} over 181 points in {elapsed:?}"),
    );
}

fn scaling(r: &mut Report) {
    let deltas: Vec<f64> = (0..=10).map(|i| 10f64.powf(-3.0 + 0.2 * i as f64)).collect();
    let s0 = slope(&deltas, 0);
    let s1 = slope(&deltas, 1);
    r.check(
        "scaling_exponents",
        (s0 - 2.0).abs() <= 0.1 && (s1 - 6.0).abs() <= 0.3,
        format!("level0 slope {s0:.4}, level1 slope {s1:.4}"),
    );
}

fn ordering(r: &mut Report) {
    let seqs: Vec<_> = (0..=2).map(|l| build_cnot(l, 8).unwrap()).collect();
    let mut violations = Vec::new();
    for i in 1..380 {
        let d = -0.95 + 0.005 * i as f64;
        if d.abs() < 1e-9 {
            continue;
        }
        let e: Vec<f64> = seqs
            .iter()
            .map(|s| cnot_sequence_error(s, ErrorModel::new(d).unwrap()))
            .collect();
        if !(e[2] <= e[1] && e[1] <= e[0]) {
            violations.push(d);
        }
    }
    let at_zero: Vec<f64> = seqs
        .iter()
        .map(|s| cnot_sequence_error(s, ErrorModel::exact()))
        .collect();
    let exact = at_zero.iter().all(|e| *e < 1e-12);
    let is_cnot = seqs
        .iter()
        .all(|s| equal_up_to_global_phase(&simulate(s, ErrorModel::exact()), &cnot(), 1e-9));
    r.check(
        "level_ordering",
        violations.is_empty() && exact && is_cnot,
        format!(
            "379-point grid violations {violations:?}; max error at Δ=0 {:.1e}; CNOT up to phase={is_cnot}",
            at_zero.iter().cloned().fold(0.0, f64::max)
        ),
    );
}

fn anchor(r: &mut Report) {
    let d = -0.49;
    let f: Vec<f64> = (0..=2).map(|l| 1.0 - error(l, d)).collect();
    let closed = (PI * d / 4.0).cos();
    let ok = (f[0] - 0.9269).abs() <= 1e-4 && (f[0] - closed).abs() < 1e-12 && f[1] >= 0.985 && f[2] > 0.9999;
    r.check(
        "separation_anchor",
        ok,
        format!("fidelities at Δ₀=-0.49: {:.6} {:.6} {:.8}", f[0], f[1], f[2]),
    );
}

fn characterization(r: &mut Report) {
    let n = min_measurements(0.1, 10).unwrap();
    let e = error_vs_measurements(1, &[n], 10, 8).unwrap()[0].error;
    let u = exchange_uncertainty(156, 10).unwrap();
    r.check(
        "characterization",
        n == 156 && e < 1e-4 && (u - 0.1).abs() <= 1e-12,
        format!("min N={n}, level-1 error at N={n} {e:.3e}, uncertainty(156) {u:.15}"),
    );
}

fn unit_time(r: &mut Report) {
    let t = two_qubit_unit_time(0.132).unwrap();
    r.check("two_qubit_unit_time", (t - 1.96).abs() <= 0.02, format!("{t:.4} ns at 0.132 µeV"));
}

fn figures(r: &mut Report) {
    let cfg = RunConfig::default();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let start = Instant::now();
    commands::make_figures(&cfg, a.path()).unwrap();
    let elapsed = start.elapsed();
    commands::make_figures(&cfg, b.path()).unwrap();
    let steps = build_cnot(2, 8).unwrap().steps().len();
    r.check(
        "make_figures_runtime",
        elapsed < Duration::from_secs(10),
        format!("{elapsed:?} (level-2 sequence {steps} steps)"),
    );

    let identical = FIGURE_FILES.iter().all(|name| {
        std::fs::read(a.path().join(name)).unwrap() == std::fs::read(b.path().join(name)).unwrap()
    });
    r.check(
        "determinism",
        identical,
        format!("{} files byte-identical across runs", FIGURE_FILES.len()),
    );
}

#[test]
fn acceptance() {
    // The schedule times must come from the default model for the table check.
    assert_eq!(
        schedule_time(&build_cnot(0, 8).unwrap(), &TimingModel::default()).t_1q_ns,
        180.0
    );
    let mut r = Report { failed: Vec::new() };
    table1(&mut r);
    gate_counts(&mut r);
    closed_form(&mut r);
    scaling(&mut r);
    ordering(&mut r);
    anchor(&mut r);
    characterization(&mut r);
    unit_time(&mut r);
    figures(&mut r);
    assert!(r.failed.is_empty(), "failed: {:?}", r.failed);
}
