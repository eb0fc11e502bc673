//! Dense 4×4 complex algebra for two-qubit operators.
//!
//! Basis ordering is |00⟩, |01⟩, |10⟩, |11⟩ with the control qubit as the
//! first (most significant) tensor factor. Every other module relies on this
//! ordering; the CNOT returned by [`cnot`] flips the second factor.
//!
//! Operators keep their global phase. Only [`fidelity`], [`infidelity`] and
//! [`equal_up_to_global_phase`] are insensitive to it.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance used for operator comparisons unless stated otherwise.
pub const DEFAULT_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

type Mat2 = [[Complex64; 2]; 2];

/// Which tensor factor a single-qubit gate acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    Control,
    Target,
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Qubit::Control => "control",
            Qubit::Target => "target",
        })
    }
}

impl FromStr for Qubit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "control" | "c" | "0" => Ok(Qubit::Control),
            "target" | "t" | "1" => Ok(Qubit::Target),
            other => Err(Error::invalid(format!("unknown qubit `{other}`"))),
        }
    }
}

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn matrix(self) -> Mat2 {
        match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, -I], [I, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    /// Two single-qubit Paulis anticommute iff both are non-identity and distinct.
    fn anticommutes_with(self, other: Pauli) -> bool {
        self != Pauli::I && other != Pauli::I && self != other
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Pauli::I),
            "X" => Ok(Pauli::X),
            "Y" => Ok(Pauli::Y),
            "Z" => Ok(Pauli::Z),
            other => Err(Error::invalid(format!("unknown Pauli label `{other}`"))),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        })
    }
}

/// Rotation axis of a single-qubit gate.
///
/// `H` is the (X+Z)/√2 axis: a π rotation about it is the Hadamard gate up to
/// a global phase of −i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
    H,
}

impl Axis {
    fn generator(self) -> Mat2 {
        match self {
            Axis::X => Pauli::X.matrix(),
            Axis::Y => Pauli::Y.matrix(),
            Axis::Z => Pauli::Z.matrix(),
            Axis::H => {
                let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[s, s], [s, -s]]
            }
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" => Ok(Axis::X),
            "Y" => Ok(Axis::Y),
            "Z" => Ok(Axis::Z),
            "H" => Ok(Axis::H),
            other => Err(Error::invalid(format!("unknown rotation axis `{other}`"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
            Axis::H => "H",
        })
    }
}

/// A 4×4 complex matrix acting on two qubits.
#[derive(Clone, Copy, PartialEq)]
pub struct TwoQubitOperator {
    entries: [[Complex64; 4]; 4],
}

impl fmt::Debug for TwoQubitOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TwoQubitOperator [")?;
        for row in &self.entries {
            write!(f, "   ")?;
            for z in row {
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl TwoQubitOperator {
    pub fn from_rows(entries: [[Complex64; 4]; 4]) -> Self {
        TwoQubitOperator { entries }
    }

    pub fn zero() -> Self {
        TwoQubitOperator {
            entries: [[ZERO; 4]; 4],
        }
    }

    pub fn identity() -> Self {
        Self::diagonal([ONE; 4])
    }

    pub fn diagonal(d: [Complex64; 4]) -> Self {
        let mut m = Self::zero();
        for (i, z) in d.into_iter().enumerate() {
            m.entries[i][i] = z;
        }
        m
    }

    fn kron(a: &Mat2, b: &Mat2) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.entries[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn rows(&self) -> &[[Complex64; 4]; 4] {
        &self.entries
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = self.entries[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut m = *self;
        m.entries.iter_mut().flatten().for_each(|z| *z *= c);
        m
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// U†U = I entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.dagger() * *self).approx_eq(&Self::identity(), tol)
    }

    fn one_norm(&self) -> f64 {
        (0..4)
            .map(|j| (0..4).map(|i| self.entries[i][j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl Mul for TwoQubitOperator {
    type Output = TwoQubitOperator;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Mul for &TwoQubitOperator {
    type Output = TwoQubitOperator;

    fn mul(self, rhs: Self) -> TwoQubitOperator {
        let mut m = TwoQubitOperator::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.entries[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    m.entries[i][j] += a * rhs.entries[k][j];
                }
            }
        }
        m
    }
}

impl Add for TwoQubitOperator {
    type Output = TwoQubitOperator;

    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl Sub for TwoQubitOperator {
    type Output = TwoQubitOperator;

    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(-ONE)
    }
}

/// A two-factor Pauli string such as ZX (σ_Z on control, σ_X on target).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString(pub Pauli, pub Pauli);

impl PauliString {
    pub const ZZ: PauliString = PauliString(Pauli::Z, Pauli::Z);
    pub const ZX: PauliString = PauliString(Pauli::Z, Pauli::X);

    pub fn matrix(self) -> TwoQubitOperator {
        pauli_kron(self.0, self.1)
    }

    /// Tensor products anticommute iff an odd number of factors anticommute.
    pub fn anticommutes_with(self, other: PauliString) -> bool {
        let odd = self.0.anticommutes_with(other.0) as u8 + self.1.anticommutes_with(other.1) as u8;
        odd % 2 == 1
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => Ok(PauliString(
                a.to_string().parse()?,
                b.to_string().parse()?,
            )),
            _ => Err(Error::invalid(format!("expected two Pauli labels, got `{s}`"))),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

/// Generator of a two-qubit rotation. Every variant squares to the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PauliAxis {
    String(PauliString),
    /// `cos(tilt)·primary + sin(tilt)·secondary`; the strings anticommute.
    Tilted {
        primary: PauliString,
        secondary: PauliString,
        tilt: f64,
    },
}

impl PauliAxis {
    pub fn tilted(primary: PauliString, secondary: PauliString, tilt: f64) -> Result<Self> {
        if !primary.anticommutes_with(secondary) {
            return Err(Error::invalid(format!(
                "tilt pair {primary}/{secondary} does not anticommute"
            )));
        }
        Ok(PauliAxis::Tilted {
            primary,
            secondary,
            tilt,
        })
    }

    /// The ZZ axis tilted toward ZX, as used by the off-axis BB1 constituents.
    pub fn zz_toward_zx(tilt: f64) -> Self {
        PauliAxis::Tilted {
            primary: PauliString::ZZ,
            secondary: PauliString::ZX,
            tilt,
        }
    }

    pub fn generator(&self) -> TwoQubitOperator {
        match *self {
            PauliAxis::String(p) => p.matrix(),
            PauliAxis::Tilted {
                primary,
                secondary,
                tilt,
            } => {
                let (s, c) = tilt.sin_cos();
                primary.matrix().scale(c.into()) + secondary.matrix().scale(s.into())
            }
        }
    }
}

impl From<PauliString> for PauliAxis {
    fn from(p: PauliString) -> Self {
        PauliAxis::String(p)
    }
}

/// σ_p ⊗ σ_q.
pub fn pauli_kron(p: Pauli, q: Pauli) -> TwoQubitOperator {
    TwoQubitOperator::kron(&p.matrix(), &q.matrix())
}

/// exp(−i(θ/2)G) = cos(θ/2)·I − i·sin(θ/2)·G, exact because G² = I.
pub fn rotation(axis: &PauliAxis, angle: f64) -> TwoQubitOperator {
    let (s, c) = (angle / 2.0).sin_cos();
    TwoQubitOperator::identity().scale(c.into()) + axis.generator().scale(Complex64::new(0.0, -s))
}

/// exp(−i(α/2)σ_axis) applied to one qubit, identity on the other.
pub fn single_qubit_rotation(qubit: Qubit, axis: Axis, angle: f64) -> TwoQubitOperator {
    let (s, c) = (angle / 2.0).sin_cos();
    let g = axis.generator();
    let mut u = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { c } else { 0.0 };
            u[i][j] = Complex64::new(id, 0.0) + Complex64::new(0.0, -s) * g[i][j];
        }
    }
    let id = Pauli::I.matrix();
    match qubit {
        Qubit::Control => TwoQubitOperator::kron(&u, &id),
        Qubit::Target => TwoQubitOperator::kron(&id, &u),
    }
}

/// exp(−iφ(XX+YY+ZZ)) from the triplet/singlet split.
///
/// XX+YY+ZZ = 2·SWAP − I, so the evolution is e^{iφ}(cos2φ·I − i·sin2φ·SWAP):
/// triplet states pick up e^{−iφ}, the singlet e^{+3iφ}.
pub fn heisenberg_evolution(phase: f64) -> TwoQubitOperator {
    let (s, c) = (2.0 * phase).sin_cos();
    let g = Complex64::from_polar(1.0, phase);
    let diag = g * c;
    let swap = g * Complex64::new(0.0, -s);
    let mut m = TwoQubitOperator::zero();
    m.entries[0][0] = diag + swap;
    m.entries[3][3] = diag + swap;
    m.entries[1][1] = diag;
    m.entries[2][2] = diag;
    m.entries[1][2] = swap;
    m.entries[2][1] = swap;
    m
}

/// Heisenberg Hamiltonian XX+YY+ZZ (unit coupling).
pub fn heisenberg_hamiltonian() -> TwoQubitOperator {
    pauli_kron(Pauli::X, Pauli::X) + pauli_kron(Pauli::Y, Pauli::Y) + pauli_kron(Pauli::Z, Pauli::Z)
}

/// exp(−iφ(XX+YY+ZZ)) through the general matrix exponential.
pub fn heisenberg_evolution_dense(phase: f64) -> TwoQubitOperator {
    expm(&heisenberg_hamiltonian().scale(Complex64::new(0.0, -phase)))
}

/// General matrix exponential by scaling and squaring of a truncated Taylor
/// series. Accurate to a few ulps for the small-norm generators used here.
pub fn expm(a: &TwoQubitOperator) -> TwoQubitOperator {
    let norm = a.one_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(Complex64::new(0.5f64.powi(squarings), 0.0));

    // ‖scaled‖ ≤ 0.5, so 0.5^24 / 24! is far below f64 resolution.
    let mut term = TwoQubitOperator::identity();
    let mut sum = term;
    for k in 1..=24 {
        term = (term * scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// |Tr(U†V)| / Tr(V†V).
pub fn fidelity(actual: &TwoQubitOperator, ideal: &TwoQubitOperator) -> Result<f64> {
    let denom = (ideal.dagger() * *ideal).trace().re;
    if denom.abs() < f64::MIN_POSITIVE {
        return Err(Error::invalid("fidelity against a zero operator"));
    }
    Ok((actual.dagger() * *ideal).trace().norm() / denom)
}

/// 1 − fidelity for a pair of unitaries, evaluated without cancellation.
///
/// With W = V†U and t = Tr W / 4,
/// 1 − |t|² = (½Σ_{ij}|W_ii − W_jj|² + 4Σ_{i≠j}|W_ij|²) / 16, and
/// 1 − |t| = (1 − |t|²) / (1 + |t|). Every term is non-negative, so errors
/// far below 1e-16 keep their relative precision.
pub fn infidelity(actual: &TwoQubitOperator, ideal: &TwoQubitOperator) -> f64 {
    let w = ideal.dagger() * *actual;
    let mut spread = 0.0;
    let mut leak = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            spread += (w.entries[i][i] - w.entries[j][j]).norm_sqr();
            leak += w.entries[i][j].norm_sqr();
        }
    }
    let one_minus_sq = (0.5 * spread + 4.0 * leak) / 16.0;
    let t = (1.0 - one_minus_sq).max(0.0).sqrt();
    one_minus_sq / (1.0 + t)
}

/// True iff U = c·V for some unit-modulus c, entrywise within `tol`.
pub fn equal_up_to_global_phase(u: &TwoQubitOperator, v: &TwoQubitOperator, tol: f64) -> bool {
    // Align on V's largest entry; unitarity guarantees it is at least 1/2.
    let (mut bi, mut bj, mut best) = (0, 0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            let n = v.entries[i][j].norm();
            if n > best {
                (bi, bj, best) = (i, j, n);
            }
        }
    }
    if best == 0.0 {
        return u.approx_eq(v, tol);
    }
    let ratio = u.entries[bi][bj] / v.entries[bi][bj];
    if ratio.norm() == 0.0 {
        return false;
    }
    let phase = ratio / ratio.norm();
    u.approx_eq(&v.scale(phase), tol)
}

/// Canonical CNOT, control on the first factor.
pub fn cnot() -> TwoQubitOperator {
    let mut m = TwoQubitOperator::zero();
    m.entries[0][0] = ONE;
    m.entries[1][1] = ONE;
    m.entries[2][3] = ONE;
    m.entries[3][2] = ONE;
    m
}
