//! Gate counts and gate times for robust CNOT sequences.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::pulse::{PulseSeq, PulseStep, CNOT_ANGLE};

/// Reduced Planck constant in eV·s.
pub const HBAR_EV_S: f64 = 6.582_119_15e-16;

pub const COST_CSV_HEADER: [&str; 7] = [
    "level", "N_r", "n_1q", "n_2q", "t_1q_ns", "t_2q_ns", "t_total_ns",
];

/// One row of the published CNOT gate-time table (ns).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedTimes {
    pub level: u32,
    pub t_1q_ns: f64,
    pub t_2q_ns: f64,
    pub t_total_ns: f64,
}

pub const PUBLISHED_GATE_TIMES: [PublishedTimes; 3] = [
    PublishedTimes { level: 0, t_1q_ns: 180.0, t_2q_ns: 3.92, t_total_ns: 183.92 },
    PublishedTimes { level: 1, t_1q_ns: 716.0, t_2q_ns: 35.28, t_total_ns: 751.28 },
    PublishedTimes { level: 2, t_1q_ns: 53256.80, t_2q_ns: 2544.08, t_total_ns: 55800.88 },
];

/// Durations of the primitive operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingModel {
    /// Single-qubit rotation by π (also the Hadamard), ns.
    pub t_pi_1q_ns: f64,
    /// Isolated ZZ rotation by π/4 at the reference coupling, ns.
    pub t_quarter_2q_ns: f64,
    /// Reference exchange coupling, µeV.
    pub j_ref_uev: f64,
    pub hbar_ev_s: f64,
}

impl Default for TimingModel {
    fn default() -> Self {
        TimingModel {
            t_pi_1q_ns: 40.0,
            t_quarter_2q_ns: 1.96,
            j_ref_uev: 0.132,
            hbar_ev_s: HBAR_EV_S,
        }
    }
}

impl TimingModel {
    /// Checks positivity and that the π/4 time agrees with J_ref to 1%.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("t_pi_1q", self.t_pi_1q_ns),
            ("t_quarter_2q", self.t_quarter_2q_ns),
            ("J_ref", self.j_ref_uev),
            ("hbar", self.hbar_ev_s),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        let physical = quarter_time_ns(self.j_ref_uev, self.hbar_ev_s);
        let rel = (self.t_quarter_2q_ns - physical).abs() / physical;
        if rel > 0.01 {
            return Err(Error::invalid(format!(
                "t_quarter_2q = {} ns disagrees with J_ref = {} µeV ({physical:.4} ns) by {:.2}%",
                self.t_quarter_2q_ns,
                self.j_ref_uev,
                rel * 100.0
            )));
        }
        Ok(())
    }

    /// The same model with two-qubit durations rescaled to coupling `j_uev`.
    pub fn at_coupling(&self, j_uev: f64) -> Result<TimingModel> {
        if !(j_uev > 0.0 && j_uev.is_finite()) {
            return Err(Error::invalid(format!("coupling {j_uev} µeV must be positive")));
        }
        Ok(TimingModel {
            t_quarter_2q_ns: self.t_quarter_2q_ns * self.j_ref_uev / j_uev,
            j_ref_uev: j_uev,
            ..*self
        })
    }

    fn single_qubit_ns(&self, angle: f64) -> f64 {
        self.t_pi_1q_ns * angle.abs() / PI
    }

    fn evolution_ns(&self, zz_angle: f64) -> f64 {
        zz_angle / FRAC_PI_4 * self.t_quarter_2q_ns
    }
}

fn quarter_time_ns(j_uev: f64, hbar_ev_s: f64) -> f64 {
    // Two evolutions of t each give exp(−i·2Jt·ZZ/ħ); a π/4 rotation needs
    // 2Jt/ħ = π/8, i.e. 2t = 2·(π/8)·ħ/J_ZZ with J_ZZ = 2J.
    let j_zz_ev = 2.0 * j_uev * 1e-6;
    2.0 * (PI / 8.0) * hbar_ev_s / j_zz_ev * 1e9
}

/// Duration of one isolated π/4 ZZ rotation at coupling J (µeV), from ħ alone.
pub fn two_qubit_unit_time(j_uev: f64) -> Result<f64> {
    if !(j_uev > 0.0 && j_uev.is_finite()) {
        return Err(Error::invalid(format!("coupling {j_uev} µeV must be positive")));
    }
    Ok(quarter_time_ns(j_uev, HBAR_EV_S))
}

/// Gate counts from the closed recurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateCounts {
    /// Single-qubit gates inside the robust Ising pulse.
    pub n: u64,
    pub n_1q: u64,
    pub n_2q: u64,
}

/// n_1 = 16, n_i = 10N_r(n_{i−1}+2)+6, n_i^{1q} = n_i+4, n_i^{2q} = 10^i·N_r^{i−1}.
/// Level 0 is the bare CNOT: 6 single-qubit and 2 two-qubit gates.
pub fn count_recurrence(level: u32, nr: u32) -> GateCounts {
    if level == 0 {
        return GateCounts { n: 6, n_1q: 6, n_2q: 2 };
    }
    let nr = nr as u64;
    let mut n = 16u64;
    for _ in 2..=level {
        n = 10 * nr * (n + 2) + 6;
    }
    GateCounts {
        n,
        n_1q: n + 4,
        n_2q: 10u64.pow(level) * nr.pow(level - 1),
    }
}

/// Single-qubit count of the sequences `build_cnot` actually produces.
///
/// Each re-isolated slice adds one W gate per inner application rather than
/// two, so this sits below the recurrence: s_1 = 16, s_i = 10N_r(s_{i−1}+1)+6,
/// plus the 4 wrapper gates.
pub fn structural_single_qubit_count(level: u32, nr: u32) -> u64 {
    if level == 0 {
        return 6;
    }
    let nr = nr as u64;
    let mut s = 16u64;
    for _ in 2..=level {
        s = 10 * nr * (s + 1) + 6;
    }
    s + 4
}

/// Summed nominal ZZ angle of the level-`level` pulse for the CNOT core angle.
///
/// Θ_0 = θ, Θ_1 = θ + 4π and, with sliced constituents, Θ_k = θ + c_k where
/// c_k = 4π + 10·N_r·c_{k−1}; Θ_2 = θ + 4π + 40π·N_r.
pub fn total_zz_angle(level: u32, nr: u32) -> f64 {
    total_zz_angle_for(CNOT_ANGLE, level, nr)
}

pub fn total_zz_angle_for(theta: f64, level: u32, nr: u32) -> f64 {
    if level == 0 {
        return theta;
    }
    let mut overhead = 4.0 * PI;
    for _ in 2..=level {
        overhead = 4.0 * PI + 10.0 * nr as f64 * overhead;
    }
    theta + overhead
}

/// Two-qubit time of the level-`level` CNOT from the closed-form angle.
pub fn two_qubit_time(level: u32, nr: u32, timing: &TimingModel) -> f64 {
    timing.evolution_ns(total_zz_angle(level, nr))
}

/// Recovers N_r from a level-2 two-qubit gate time.
///
/// Returns the N_r whose predicted time is closest, provided it lies within
/// 1% of the input.
pub fn infer_nr(time_2q_level2_ns: f64, timing: &TimingModel) -> Result<u32> {
    let level1 = two_qubit_time(1, 1, timing);
    if !(time_2q_level2_ns > level1) {
        return Err(Error::invalid(format!(
            "{time_2q_level2_ns} ns does not exceed the level-1 time {level1} ns"
        )));
    }
    // Θ_2 = 4.5π + 40π·N_r
    let angle = time_2q_level2_ns / timing.t_quarter_2q_ns * FRAC_PI_4;
    let estimate = ((angle - total_zz_angle(1, 1)) / (40.0 * PI)).round().max(1.0);
    let candidates = [estimate - 1.0, estimate, estimate + 1.0];
    let (nr, miss) = candidates
        .iter()
        .filter(|c| **c >= 1.0 && **c <= u32::MAX as f64)
        .map(|&c| {
            let t = two_qubit_time(2, c as u32, timing);
            (c as u32, (t - time_2q_level2_ns).abs())
        })
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("estimate is at least 1");
    if miss > 0.01 * time_2q_level2_ns {
        return Err(Error::InferenceFailed(format!(
            "no integer N_r reproduces {time_2q_level2_ns} ns within 1% (best N_r = {nr}, off by {miss:.3} ns)"
        )));
    }
    Ok(nr)
}

/// Census and durations of one CNOT implementation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostReport {
    pub level: u32,
    pub nr: u32,
    pub n_1q: usize,
    pub n_2q: usize,
    pub t_1q_ns: f64,
    pub t_2q_ns: f64,
    pub t_total_ns: f64,
    /// Recurrence single-qubit count at t_pi_1q per gate, for audit.
    pub paper_accounting_1q_ns: f64,
}

/// Sums step durations by category.
///
/// A single-qubit rotation by α costs t_pi_1q·|α|/π, a parallel group costs its
/// slowest member, and an evolution of ZZ angle θ costs (θ/(π/4))·t_quarter_2q.
/// Single- and two-qubit steps never overlap.
pub fn schedule_time(seq: &PulseSeq, timing: &TimingModel) -> CostReport {
    let mut t_1q = 0.0;
    let mut t_2q = 0.0;
    for step in seq.steps() {
        match step {
            PulseStep::Single(r) => t_1q += timing.single_qubit_ns(r.angle),
            PulseStep::Parallel(members) => {
                t_1q += members
                    .iter()
                    .map(|r| timing.single_qubit_ns(r.angle))
                    .fold(0.0, f64::max)
            }
            PulseStep::Evolution { zz_angle } => t_2q += timing.evolution_ns(*zz_angle),
        }
    }
    let (n_1q, n_2q) = seq.census();
    let paper = count_recurrence(seq.level(), seq.nr());
    CostReport {
        level: seq.level(),
        nr: seq.nr(),
        n_1q,
        n_2q,
        t_1q_ns: t_1q,
        t_2q_ns: t_2q,
        t_total_ns: t_1q + t_2q,
        paper_accounting_1q_ns: paper.n_1q as f64 * timing.t_pi_1q_ns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::build_cnot;

    #[test]
    fn recurrence_values() {
        assert_eq!(count_recurrence(0, 8), GateCounts { n: 6, n_1q: 6, n_2q: 2 });
        for nr in [1, 4, 8] {
            assert_eq!(count_recurrence(1, nr), GateCounts { n: 16, n_1q: 20, n_2q: 10 });
        }
        assert_eq!(count_recurrence(2, 8), GateCounts { n: 1446, n_1q: 1450, n_2q: 800 });
    }

    #[test]
    fn two_qubit_ratio_between_levels() {
        for nr in [1, 3, 8] {
            for level in 1..4 {
                let a = count_recurrence(level, nr).n_2q;
                let b = count_recurrence(level + 1, nr).n_2q;
                assert_eq!(b, a * 10 * nr as u64);
            }
        }
    }

    #[test]
    fn unit_time_from_hbar() {
        let t = two_qubit_unit_time(0.132).unwrap();
        assert!((t - 1.958).abs() < 5e-4, "{t}");
        assert!((two_qubit_unit_time(0.264).unwrap() - t / 2.0).abs() < 1e-12);
        assert!((two_qubit_unit_time(13.2).unwrap() - 0.01958).abs() < 1e-5);
        assert!(two_qubit_unit_time(0.0).is_err());
        assert!(two_qubit_unit_time(-1.0).is_err());
    }

    #[test]
    fn default_timing_is_consistent() {
        TimingModel::default().validate().unwrap();
        let off = TimingModel { t_quarter_2q_ns: 2.1, ..Default::default() };
        assert!(off.validate().is_err());
    }

    #[test]
    fn closed_form_angles() {
        assert!((total_zz_angle(0, 8) - PI / 2.0).abs() < 1e-15);
        assert!((total_zz_angle(1, 8) - 4.5 * PI).abs() < 1e-12);
        assert!((total_zz_angle(2, 8) - 324.5 * PI).abs() < 1e-9);
        let t = TimingModel::default();
        assert!((two_qubit_time(0, 8, &t) - 3.92).abs() < 1e-12);
        assert!((two_qubit_time(1, 8, &t) - 35.28).abs() < 1e-12);
        assert!((two_qubit_time(2, 8, &t) - 2544.08).abs() < 1e-9);
    }

    #[test]
    fn nr_inference() {
        let t = TimingModel::default();
        assert_eq!(infer_nr(2544.08, &t).unwrap(), 8);
        // level-1 time has no N_r dependence
        for nr in 1..16 {
            assert!((two_qubit_time(1, nr, &t) - 35.28).abs() < 1e-12);
        }
        assert!(infer_nr(35.28, &t).is_err());
        assert!(infer_nr(3.92, &t).is_err());
        // halfway between N_r = 8 and 9
        let mid = 0.5 * (two_qubit_time(2, 8, &t) + two_qubit_time(2, 9, &t));
        assert!(matches!(infer_nr(mid, &t), Err(Error::InferenceFailed(_))));
    }

    #[test]
    fn level0_schedule() {
        let r = schedule_time(&build_cnot(0, 8).unwrap(), &TimingModel::default());
        assert!((r.t_1q_ns - 180.0).abs() < 1e-12);
        assert!((r.t_2q_ns - 3.92).abs() < 1e-12);
        assert!((r.t_total_ns - 183.92).abs() < 1e-12);
        assert_eq!((r.n_1q, r.n_2q), (6, 2));
    }

    #[test]
    fn level1_schedule() {
        let r = schedule_time(&build_cnot(1, 8).unwrap(), &TimingModel::default());
        let phi = (-1.0f64 / 8.0).acos();
        let want = 100.0 + 400.0 + 40.0 * 10.0 * phi / PI;
        assert!((r.t_1q_ns - want).abs() < 1e-9, "{}", r.t_1q_ns);
        assert!((r.t_1q_ns - 716.0).abs() < 0.5);
        assert!((r.t_2q_ns - 35.28).abs() < 1e-9);
        assert_eq!((r.n_1q, r.n_2q), (20, 10));
    }

    #[test]
    fn structural_counts_match_sequences() {
        for level in 0..=2 {
            for nr in [1, 4, 8] {
                let (n1, n2) = build_cnot(level, nr).unwrap().census();
                assert_eq!(n1 as u64, structural_single_qubit_count(level, nr));
                assert_eq!(n2 as u64, count_recurrence(level, nr).n_2q);
            }
        }
    }

    #[test]
    fn coupling_rescales_two_qubit_column_only() {
        let base = TimingModel::default();
        let fast = base.at_coupling(2.0 * base.j_ref_uev).unwrap();
        let seq = build_cnot(1, 8).unwrap();
        let a = schedule_time(&seq, &base);
        let b = schedule_time(&seq, &fast);
        assert_eq!(a.t_1q_ns, b.t_1q_ns);
        assert!((a.t_2q_ns - 2.0 * b.t_2q_ns).abs() < 1e-12);
        assert!(base.at_coupling(0.0).is_err());
    }
}
