//! Pulse sequences for isolated, tilted, BB1-corrected and concatenated ZZ
//! rotations, and their simulation under a fractional coupling error.
//!
//! A [`PulseSeq`] is stored in time order: the first step acts first, so the
//! simulated operator is `M_n ⋯ M_2 · M_1`. An operator product written as
//! `A·B·C` therefore appears as the steps `C, B, A`.

mod text;

pub use text::{parse_seq, write_seq};

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::su4::{self, Axis, PauliString, Qubit, TwoQubitOperator};

/// Highest implementation level the builders accept.
pub const MAX_LEVEL: u32 = 3;

/// Slicing parameter used when none is given; recovered from the level-2
/// two-qubit gate time.
pub const DEFAULT_NR: u32 = 8;

/// Nominal CNOT core rotation: U_I(π/2) = exp(−i(π/4)ZZ).
pub const CNOT_ANGLE: f64 = FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitRotation {
    pub qubit: Qubit,
    pub axis: Axis,
    pub angle: f64,
}

impl SingleQubitRotation {
    pub fn new(qubit: Qubit, axis: Axis, angle: f64) -> Self {
        SingleQubitRotation { qubit, axis, angle }
    }

    pub fn matrix(&self) -> TwoQubitOperator {
        su4::single_qubit_rotation(self.qubit, self.axis, self.angle)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PulseStep {
    Single(SingleQubitRotation),
    /// Heisenberg evolution whose isolated pair contributes `zz_angle` to the
    /// ZZ rotation angle under the nominal coupling. The evolution phase
    /// J·t/ħ of one such step is `zz_angle / 2`.
    Evolution { zz_angle: f64 },
    /// Simultaneous rotations on distinct qubits.
    Parallel(Vec<SingleQubitRotation>),
}

impl PulseStep {
    fn validate(&self) -> Result<()> {
        match self {
            PulseStep::Evolution { zz_angle } if !(*zz_angle > 0.0 && zz_angle.is_finite()) => {
                Err(Error::invalid(format!("evolution angle {zz_angle} must be positive")))
            }
            PulseStep::Parallel(members) => {
                for (i, a) in members.iter().enumerate() {
                    if members[..i].iter().any(|b| b.qubit == a.qubit) {
                        return Err(Error::invalid(format!(
                            "parallel group acts twice on the {} qubit",
                            a.qubit
                        )));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Operator for this step when every Heisenberg evolution runs (1+Δ)
    /// times as far as intended.
    pub fn matrix(&self, err: ErrorModel) -> TwoQubitOperator {
        match self {
            PulseStep::Single(r) => r.matrix(),
            PulseStep::Evolution { zz_angle } => {
                su4::heisenberg_evolution(0.5 * zz_angle * (1.0 + err.delta()))
            }
            PulseStep::Parallel(members) => members
                .iter()
                .fold(TwoQubitOperator::identity(), |acc, r| r.matrix() * acc),
        }
    }
}

/// Fractional coupling error Δ = J_actual / J_assumed − 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    delta: f64,
}

impl ErrorModel {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > -1.0 && delta.is_finite()) {
            return Err(Error::invalid(format!(
                "fractional error {delta} must exceed -1 (coupling must stay positive)"
            )));
        }
        Ok(ErrorModel { delta })
    }

    pub fn exact() -> Self {
        ErrorModel { delta: 0.0 }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Ordered pulse steps plus the metadata they were built with.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSeq {
    steps: Vec<PulseStep>,
    target_angle: f64,
    level: u32,
    nr: u32,
}

impl PulseSeq {
    pub fn new(steps: Vec<PulseStep>, target_angle: f64, level: u32, nr: u32) -> Result<Self> {
        if nr == 0 {
            return Err(Error::invalid("slicing parameter N_r must be at least 1"));
        }
        for s in &steps {
            s.validate()?;
        }
        Ok(PulseSeq {
            steps,
            target_angle,
            level,
            nr,
        })
    }

    pub fn steps(&self) -> &[PulseStep] {
        &self.steps
    }

    /// Rotation angle the sequence is meant to realize.
    pub fn target_angle(&self) -> f64 {
        self.target_angle
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn nr(&self) -> u32 {
        self.nr
    }

    /// Sum of the nominal ZZ angles over all evolutions.
    pub fn total_zz_angle(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| match s {
                PulseStep::Evolution { zz_angle } => *zz_angle,
                _ => 0.0,
            })
            .sum()
    }

    /// (single-qubit gates, two-qubit gates); parallel members count individually.
    pub fn census(&self) -> (usize, usize) {
        self.steps.iter().fold((0, 0), |(one, two), s| match s {
            PulseStep::Single(_) => (one + 1, two),
            PulseStep::Evolution { .. } => (one, two + 1),
            PulseStep::Parallel(m) => (one + m.len(), two),
        })
    }

    fn with_steps(&self, steps: Vec<PulseStep>, target_angle: f64) -> PulseSeq {
        PulseSeq {
            steps,
            target_angle,
            level: self.level,
            nr: self.nr,
        }
    }
}

/// Two evolutions interleaved with Z_π on the control: the XX and YY parts
/// cancel exactly, leaving −exp(−i(θ/2)(1+Δ)ZZ).
pub fn build_isolated_zz(theta: f64) -> Result<PulseSeq> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::invalid(format!("rotation angle {theta} must be positive")));
    }
    let z_pi = PulseStep::Single(SingleQubitRotation::new(Qubit::Control, Axis::Z, PI));
    let ev = PulseStep::Evolution { zz_angle: theta / 2.0 };
    let steps = vec![ev.clone(), z_pi.clone(), ev, z_pi];
    PulseSeq::new(steps, theta, 0, 1)
}

/// Tilts a ZZ rotation toward ZX by conjugating with Y rotations on the
/// target: (I⊗Y_a)·inner·(I⊗Y_{−a}). A zero tilt returns `inner` untouched.
pub fn build_tilted(theta: f64, tilt: f64, inner: PulseSeq) -> PulseSeq {
    if tilt == 0.0 {
        return inner;
    }
    let mut steps = Vec::with_capacity(inner.steps.len() + 2);
    steps.push(PulseStep::Single(SingleQubitRotation::new(Qubit::Target, Axis::Y, -tilt)));
    steps.extend(inner.steps.iter().cloned());
    steps.push(PulseStep::Single(SingleQubitRotation::new(Qubit::Target, Axis::Y, tilt)));
    inner.with_steps(steps, theta)
}

/// φ = arccos(−θ/4π).
pub fn bb1_phase(theta: f64) -> f64 {
    (-theta / (4.0 * PI)).acos()
}

/// The five (angle, tilt) constituents of the symmetric BB1 pulse for `theta`.
pub fn bb1_constituents(theta: f64) -> [(f64, f64); 5] {
    let phi = bb1_phase(theta);
    [
        (theta / 2.0, 0.0),
        (PI, phi),
        (2.0 * PI, 3.0 * phi),
        (PI, phi),
        (theta / 2.0, 0.0),
    ]
}

/// (θ/2)_0 · π_φ · 2π_{3φ} · π_φ · (θ/2)_0 with each ZZ constituent produced
/// by `constituent` and then tilted.
pub fn build_bb1<F>(theta: f64, mut constituent: F) -> Result<PulseSeq>
where
    F: FnMut(f64) -> Result<PulseSeq>,
{
    if !(theta > 0.0 && theta <= 2.0 * PI) {
        return Err(Error::invalid(format!("BB1 angle {theta} outside (0, 2π]")));
    }
    let mut steps = Vec::new();
    let mut meta = None;
    for (angle, tilt) in bb1_constituents(theta) {
        let part = build_tilted(angle, tilt, constituent(angle)?);
        meta.get_or_insert((part.level, part.nr));
        steps.extend(part.steps);
    }
    let (level, nr) = meta.unwrap_or((0, 1));
    PulseSeq::new(steps, theta, level + 1, nr)
}

/// Concatenated ZZ rotation at implementation level `level`.
///
/// Level 0 is the bare isolated pulse and level 1 is BB1 over it. From level 2
/// on, each BB1 constituent of angle θ_k is sliced into N_r repetitions of
/// W·P·W†·P, with P the level-(k−1) pulse for θ_k/(2N_r) and W = Z_π on the
/// target. Conjugation by W negates the ZX and IY residuals of P while
/// keeping its ZZ part.
pub fn build_level(theta: f64, level: u32, nr: u32) -> Result<PulseSeq> {
    if level > MAX_LEVEL {
        return Err(Error::Unsupported(format!(
            "implementation level {level} exceeds the cap of {MAX_LEVEL}"
        )));
    }
    if nr == 0 {
        return Err(Error::invalid("slicing parameter N_r must be at least 1"));
    }
    let mut seq = match level {
        0 => build_isolated_zz(theta)?,
        1 => build_bb1(theta, build_isolated_zz)?,
        _ => build_bb1(theta, |angle| reisolated(angle, level - 1, nr))?,
    };
    seq.level = level;
    seq.nr = nr;
    Ok(seq)
}

fn reisolated(angle: f64, inner_level: u32, nr: u32) -> Result<PulseSeq> {
    let slice = build_level(angle / (2.0 * nr as f64), inner_level, nr)?;
    let w = PulseStep::Single(SingleQubitRotation::new(Qubit::Target, Axis::Z, PI));
    let w_dag = PulseStep::Single(SingleQubitRotation::new(Qubit::Target, Axis::Z, -PI));
    let mut steps = Vec::with_capacity(nr as usize * (2 * slice.steps.len() + 2));
    for _ in 0..nr {
        // W·P·W†·P in time order
        steps.extend(slice.steps.iter().cloned());
        steps.push(w_dag.clone());
        steps.extend(slice.steps.iter().cloned());
        steps.push(w.clone());
    }
    PulseSeq::new(steps, angle, inner_level + 1, nr)
}

/// CNOT from U_I(π/2): (I⊗H) · U_I(π/2) · (Z_{−π/2} ⊗ Z_{−π/2}) · (I⊗H).
///
/// Hadamards are π rotations about the (X+Z)/√2 axis. The two Z_{−π/2} gates
/// form one parallel step.
pub fn build_cnot(level: u32, nr: u32) -> Result<PulseSeq> {
    let core = build_level(CNOT_ANGLE, level, nr)?;
    let hadamard = PulseStep::Single(SingleQubitRotation::new(Qubit::Target, Axis::H, PI));
    let phase = PulseStep::Parallel(vec![
        SingleQubitRotation::new(Qubit::Control, Axis::Z, -FRAC_PI_2),
        SingleQubitRotation::new(Qubit::Target, Axis::Z, -FRAC_PI_2),
    ]);
    let mut steps = Vec::with_capacity(core.steps.len() + 3);
    steps.push(hadamard.clone());
    steps.push(phase);
    steps.extend(core.steps);
    steps.push(hadamard);
    PulseSeq::new(steps, CNOT_ANGLE, level, nr)
}

/// Product of the step operators, first step rightmost.
pub fn simulate(seq: &PulseSeq, err: ErrorModel) -> TwoQubitOperator {
    seq.steps
        .iter()
        .fold(TwoQubitOperator::identity(), |acc, s| s.matrix(err) * acc)
}

/// 1 − F of a simulated CNOT sequence against the canonical CNOT.
pub fn cnot_sequence_error(seq: &PulseSeq, err: ErrorModel) -> f64 {
    su4::infidelity(&simulate(seq, err), &su4::cnot())
}

/// 1 − F of a simulated ZZ pulse against the ideal U_I(θ).
pub fn zz_sequence_error(seq: &PulseSeq, err: ErrorModel) -> f64 {
    let ideal = su4::rotation(&PauliString::ZZ.into(), seq.target_angle());
    su4::infidelity(&simulate(seq, err), &ideal)
}

/// CNOT error 1 − F at the given implementation level and fractional error.
pub fn cnot_error(level: u32, delta: f64, nr: u32) -> Result<f64> {
    let err = ErrorModel::new(delta)?;
    Ok(cnot_sequence_error(&build_cnot(level, nr)?, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su4::{equal_up_to_global_phase, rotation, PauliAxis};

    fn zz(theta: f64) -> TwoQubitOperator {
        rotation(&PauliString::ZZ.into(), theta)
    }

    fn err(delta: f64) -> ErrorModel {
        ErrorModel::new(delta).unwrap()
    }

    #[test]
    fn isolated_pulse_is_exact() {
        let seq = build_isolated_zz(FRAC_PI_2).unwrap();
        let u = simulate(&seq, ErrorModel::exact());
        assert!(u.approx_eq(&zz(FRAC_PI_2).scale((-1.0).into()), 1e-14));
        assert!(equal_up_to_global_phase(&u, &zz(FRAC_PI_2), 1e-14));
        assert_eq!(seq.census(), (2, 2));
        assert!((seq.total_zz_angle() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn isolated_pulse_scales_with_error() {
        let u = simulate(&build_isolated_zz(FRAC_PI_2).unwrap(), err(0.3));
        assert!(equal_up_to_global_phase(&u, &zz(0.65 * PI), 1e-13));
    }

    #[test]
    fn non_positive_angle_rejected() {
        assert!(build_isolated_zz(0.0).is_err());
        assert!(build_isolated_zz(-1.0).is_err());
        assert!(build_bb1(2.0 * PI + 1e-9, build_isolated_zz).is_err());
        assert!(build_bb1(0.0, build_isolated_zz).is_err());
    }

    #[test]
    fn error_model_domain() {
        assert!(ErrorModel::new(-1.0).is_err());
        assert!(ErrorModel::new(f64::NAN).is_err());
        assert!(ErrorModel::new(-0.999).is_ok());
        assert!(ErrorModel::new(3.0).is_ok());
    }

    #[test]
    fn zero_tilt_leaves_inner_alone() {
        let inner = build_isolated_zz(1.1).unwrap();
        assert_eq!(build_tilted(1.1, 0.0, inner.clone()), inner);
    }

    #[test]
    fn tilted_pulse_matches_axis() {
        let inner = build_isolated_zz(PI).unwrap();
        let u = simulate(&build_tilted(PI, FRAC_PI_2, inner), ErrorModel::exact());
        let want = rotation(&PauliString::ZX.into(), PI);
        assert!(equal_up_to_global_phase(&u, &want, 1e-13));

        let phi = bb1_phase(FRAC_PI_2);
        let inner = build_isolated_zz(PI).unwrap();
        let u = simulate(&build_tilted(PI, phi, inner), err(0.2));
        let want = rotation(&PauliAxis::zz_toward_zx(phi), 1.2 * PI);
        assert!(equal_up_to_global_phase(&u, &want, 1e-13));
    }

    #[test]
    fn bb1_phase_value() {
        // arccos(−1/8)
        assert!((bb1_phase(FRAC_PI_2) - 1.696_124_157_962_962_2).abs() < 1e-12);
    }

    #[test]
    fn bb1_exact_and_robust() {
        let seq = build_bb1(FRAC_PI_2, build_isolated_zz).unwrap();
        assert_eq!(seq.level(), 1);
        assert!((seq.total_zz_angle() - 4.5 * PI).abs() < 1e-12);
        let u = simulate(&seq, ErrorModel::exact());
        assert!(equal_up_to_global_phase(&u, &zz(FRAC_PI_2), 1e-12));
        assert!(zz_sequence_error(&seq, err(0.1)) < 1e-4);
    }

    #[test]
    fn level_totals() {
        assert!((build_level(FRAC_PI_2, 0, 8).unwrap().total_zz_angle() - FRAC_PI_2).abs() < 1e-12);
        assert!((build_level(FRAC_PI_2, 1, 8).unwrap().total_zz_angle() - 4.5 * PI).abs() < 1e-12);
        let l2 = build_level(FRAC_PI_2, 2, 8).unwrap();
        assert!((l2.total_zz_angle() - 324.5 * PI).abs() < 1e-9);
        assert_eq!(l2.level(), 2);
        assert_eq!(l2.nr(), 8);
    }

    #[test]
    fn level_cap() {
        assert!(matches!(build_level(FRAC_PI_2, 4, 1), Err(Error::Unsupported(_))));
        assert!(matches!(build_cnot(4, 8), Err(Error::Unsupported(_))));
        assert!(build_level(FRAC_PI_2, 1, 0).is_err());
    }

    #[test]
    fn cnot_level0_census() {
        let seq = build_cnot(0, 8).unwrap();
        assert_eq!(seq.census(), (6, 2));
    }

    #[test]
    fn parallel_group_needs_distinct_qubits() {
        let r = SingleQubitRotation::new(Qubit::Target, Axis::Z, 1.0);
        assert!(PulseSeq::new(vec![PulseStep::Parallel(vec![r, r])], 1.0, 0, 1).is_err());
        assert!(PulseSeq::new(vec![PulseStep::Evolution { zz_angle: 0.0 }], 1.0, 0, 1).is_err());
    }

    #[test]
    fn level1_improves_at_anchor() {
        let l0 = cnot_error(0, -0.49, 8).unwrap();
        let l1 = cnot_error(1, -0.49, 8).unwrap();
        assert!((l0 - (1.0 - (PI * 0.49 / 4.0).cos())).abs() < 1e-12);
        assert!((1.0 - l1 - 0.99).abs() <= 0.005, "level-1 fidelity {}", 1.0 - l1);
    }

    #[test]
    fn cnot_error_rejects_dead_coupling() {
        assert!(cnot_error(0, -1.0, 8).is_err());
    }
}
