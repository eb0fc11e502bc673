//! Characterization budget: how many measurements pin J down well enough,
//! and what CNOT error results once the gate is calibrated to the estimate.

use crate::error::{Error, Result};
use crate::pulse::{build_cnot, cnot_sequence_error, ErrorModel};

/// Relative slack when comparing an evaluated bound against a requested one,
/// so that e.g. 156 measurements count as reaching exactly 10%.
const BOUND_RTOL: f64 = 1e-12;

/// The isotropic Heisenberg case needs three oscillation frequencies, each
/// costing 2(N_t + N_e) measurements.
pub const MEASUREMENTS_PER_REPETITION: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacterizationPlan {
    pub n_t: u64,
    /// Phase-estimation repetitions; fractional when derived from a total N
    /// that is not a multiple of six.
    pub n_e: f64,
    pub n: u64,
    pub frac_uncertainty: f64,
}

impl CharacterizationPlan {
    /// N = 6(N_t + N_e) measurements for the isotropic Heisenberg case.
    pub fn isotropic(n_t: u64, n_e: u64) -> Result<Self> {
        let frac_uncertainty = freq_uncertainty(n_t, n_e)?;
        Ok(CharacterizationPlan {
            n_t,
            n_e: n_e as f64,
            n: MEASUREMENTS_PER_REPETITION * (n_t + n_e),
            frac_uncertainty,
        })
    }

    /// Plan spending `n` measurements in total with `n_t` time points.
    pub fn from_total(n: u64, n_t: u64) -> Result<Self> {
        let frac_uncertainty = exchange_uncertainty(n, n_t)?;
        Ok(CharacterizationPlan {
            n_t,
            n_e: n as f64 / MEASUREMENTS_PER_REPETITION as f64 - n_t as f64,
            n,
            frac_uncertainty,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceModel {
    t2_ms: f64,
}

impl DecoherenceModel {
    pub fn new(t2_ms: f64) -> Result<Self> {
        if !(t2_ms > 0.0 && t2_ms.is_finite()) {
            return Err(Error::invalid(format!("T2 = {t2_ms} ms must be positive")));
        }
        Ok(DecoherenceModel { t2_ms })
    }

    pub fn t2_ms(&self) -> f64 {
        self.t2_ms
    }
}

impl Default for DecoherenceModel {
    fn default() -> Self {
        DecoherenceModel { t2_ms: 60.0 }
    }
}

/// δf/f = 4/(N_t·√N_e), the bound taken at equality.
pub fn freq_uncertainty(n_t: u64, n_e: u64) -> Result<f64> {
    if n_t == 0 || n_e == 0 {
        return Err(Error::invalid("N_t and N_e must both be at least 1"));
    }
    Ok(4.0 / (n_t as f64 * (n_e as f64).sqrt()))
}

/// δJ_c/J_c = 4√6/(N_t·√(N − 6N_t)).
pub fn exchange_uncertainty(n: u64, n_t: u64) -> Result<f64> {
    if n_t == 0 {
        return Err(Error::invalid("N_t must be at least 1"));
    }
    let reserved = MEASUREMENTS_PER_REPETITION * n_t;
    if n <= reserved {
        return Err(Error::invalid(format!(
            "N = {n} leaves no phase-estimation repetitions (needs N > 6·N_t = {reserved})"
        )));
    }
    Ok(4.0 * 6f64.sqrt() / (n_t as f64 * ((n - reserved) as f64).sqrt()))
}

/// Smallest N with exchange_uncertainty(N, N_t) ≤ δ: ⌈6N_t + 96/(N_t·δ)²⌉.
pub fn min_measurements(target: f64, n_t: u64) -> Result<u64> {
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::invalid(format!("target uncertainty {target} must be positive")));
    }
    if n_t == 0 {
        return Err(Error::invalid("N_t must be at least 1"));
    }
    let reserved = MEASUREMENTS_PER_REPETITION * n_t;
    let reaches = |n: u64| exchange_uncertainty(n, n_t).is_ok_and(|u| u <= target * (1.0 + BOUND_RTOL));
    let closed = reserved as f64 + 96.0 / (n_t as f64 * target).powi(2);
    let mut n = (closed.ceil() as u64).max(reserved + 1);
    // the closed form can land one off either way in floating point
    while !reaches(n) {
        n += 1;
    }
    while n > reserved + 1 && reaches(n - 1) {
        n -= 1;
    }
    Ok(n)
}

/// Worst-case Δ_c for a characterization good to δ, rounded to Δ_c = δ.
pub fn delta_c(frac_uncertainty: f64) -> f64 {
    frac_uncertainty
}

/// Exact worst case with J_c = (1 − δ)J: Δ_c = δ/(1 − δ).
pub fn delta_c_exact(frac_uncertainty: f64) -> f64 {
    if frac_uncertainty >= 1.0 {
        f64::INFINITY
    } else {
        frac_uncertainty / (1.0 - frac_uncertainty)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementPoint {
    pub n: u64,
    pub delta_frac: f64,
    /// Δ_c used for the error, capped at 1.
    pub delta_c: f64,
    pub delta_c_exact: f64,
    pub level: u32,
    pub error: f64,
}

/// CNOT error against the total number of characterization measurements.
///
/// Beyond δ = 1 the estimate is worthless; Δ_c is capped there.
pub fn error_vs_measurements(level: u32, n_grid: &[u64], n_t: u64, nr: u32) -> Result<Vec<MeasurementPoint>> {
    let seq = build_cnot(level, nr)?;
    n_grid
        .iter()
        .map(|&n| {
            let delta_frac = exchange_uncertainty(n, n_t)?;
            let dc = delta_c(delta_frac).min(1.0);
            Ok(MeasurementPoint {
                n,
                delta_frac,
                delta_c: dc,
                delta_c_exact: delta_c_exact(delta_frac),
                level,
                error: cnot_sequence_error(&seq, ErrorModel::new(dc)?),
            })
        })
        .collect()
}

/// 1 − (1 − ε_sys)·exp(−t/T₂).
pub fn error_with_decoherence(error_sys: f64, t_gate_ns: f64, dec: &DecoherenceModel) -> f64 {
    let x = t_gate_ns * 1e-6 / dec.t2_ms;
    // 1 − e^{−x} + ε·e^{−x}, without cancellation for tiny x
    -(-x).exp_m1() + error_sys * (-x).exp()
}
