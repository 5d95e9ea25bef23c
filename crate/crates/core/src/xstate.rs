//! The two-parameter X-state family.
//!
//! ```text
//!     ⎡ v  0  0  0 ⎤
//!     ⎢ 0  w  z  0 ⎥      w = 1/2 − v
//!     ⎢ 0  z* w  0 ⎥
//!     ⎣ 0  0  0  v ⎦
//! ```
//!
//! Eigenvalues are `v, v, w − |z|, w + |z|`; the partial transpose has
//! eigenvalues `w, w, v − |z|, v + |z|`, so the state is entangled exactly
//! when `v < |z|`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianMatrix, PSD_FLOOR};

/// Slack on the closed bounds `0 ≤ v ≤ 1/2`, `|z| ≤ 1/2`, absorbing the
/// round-off of states that come out of a thermal pipeline.
pub const BOUND_SLACK: f64 = 1e-12;

/// Point of the X-state family. `v` is the corner population, `z` the
/// coherence between `|↑↓⟩` and `|↓↑⟩`.
///
/// Construction checks the bounds only; positivity (`w ≥ |z|`) is checked
/// where a physical state is required, because the nearest separable
/// partner of a strongly entangled state lies outside the positive cone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "XStateRepr", into = "XStateRepr")]
pub struct XState {
    v: f64,
    z: Complex64,
}

#[derive(Serialize, Deserialize)]
struct XStateRepr {
    v: f64,
    z_re: f64,
    z_im: f64,
}

impl TryFrom<XStateRepr> for XState {
    type Error = Error;

    fn try_from(r: XStateRepr) -> Result<Self> {
        XState::new(r.v, Complex64::new(r.z_re, r.z_im))
    }
}

impl From<XState> for XStateRepr {
    fn from(x: XState) -> Self {
        XStateRepr { v: x.v, z_re: x.z.re, z_im: x.z.im }
    }
}

impl XState {
    pub fn new(v: f64, z: Complex64) -> Result<Self> {
        if !v.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::domain("X-state parameters must be finite"));
        }
        if !(-BOUND_SLACK..=0.5 + BOUND_SLACK).contains(&v) {
            return Err(Error::domain(format!("v = {v} outside [0, 1/2]")));
        }
        if z.norm() > 0.5 + BOUND_SLACK {
            return Err(Error::domain(format!("|z| = {} exceeds 1/2", z.norm())));
        }
        Ok(XState { v, z })
    }

    pub fn real(v: f64, z: f64) -> Result<Self> {
        Self::new(v, Complex64::new(z, 0.0))
    }

    /// `v = 0, z = −1/2`: the singlet projector.
    pub fn singlet() -> Self {
        XState { v: 0.0, z: Complex64::new(-0.5, 0.0) }
    }

    /// `𝟙/4`.
    pub fn maximally_mixed() -> Self {
        XState { v: 0.25, z: Complex64::new(0.0, 0.0) }
    }

    /// Build from spin correlators: `v = 1/4 + ⟨SᶻSᶻ⟩`, `z = 2⟨SˣSˣ⟩`.
    pub fn from_correlators(c: Correlators) -> Result<Self> {
        c.validate()?;
        Self::real(0.25 + c.czz, 2.0 * c.cxx)
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn w(&self) -> f64 {
        0.5 - self.v
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// `|z|`.
    pub fn coherence(&self) -> f64 {
        self.z.norm()
    }

    /// Smallest eigenvalue, `min(v, w − |z|)`.
    pub fn min_eigenvalue(&self) -> f64 {
        self.v.min(self.w() - self.coherence())
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= PSD_FLOOR
    }

    /// Strict: the boundary `v = |z|` is separable.
    pub fn is_entangled(&self) -> bool {
        self.v < self.coherence()
    }

    /// Density matrix; fails when `w − |z|` is negative.
    pub fn to_matrix(&self) -> Result<HermitianMatrix> {
        let lowest = self.w() - self.coherence();
        if lowest < PSD_FLOOR {
            return Err(Error::domain(format!(
                "X-state (v = {}, |z| = {}) is not positive semidefinite: eigenvalue w − |z| = {lowest:.6e}",
                self.v,
                self.coherence()
            )));
        }
        Ok(self.to_matrix_unchecked())
    }

    /// The X-pattern matrix without the positivity check.
    pub fn to_matrix_unchecked(&self) -> HermitianMatrix {
        let (v, w) = (Complex64::new(self.v, 0.0), Complex64::new(self.w(), 0.0));
        let mut m = CMatrix::zeros(4);
        m[(0, 0)] = v;
        m[(3, 3)] = v;
        m[(1, 1)] = w;
        m[(2, 2)] = w;
        m[(1, 2)] = self.z;
        m[(2, 1)] = self.z.conj();
        HermitianMatrix::symmetrized(m)
    }
}

/// Nearest-pair spin correlators `⟨SᵢᶻSⱼᶻ⟩` and `⟨SᵢˣSⱼˣ⟩` (ħ = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlators {
    pub czz: f64,
    pub cxx: f64,
}

impl Correlators {
    pub fn new(czz: f64, cxx: f64) -> Result<Self> {
        let c = Correlators { czz, cxx };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        for (name, value) in [("⟨SᶻSᶻ⟩", self.czz), ("⟨SˣSˣ⟩", self.cxx)] {
            if !(value.abs() <= 0.25 + BOUND_SLACK) {
                return Err(Error::domain(format!(
                    "correlator {name} = {value} violates the spin-1/2 bound |c| ≤ 1/4"
                )));
            }
        }
        Ok(())
    }

    /// `(Tr ρ·Sᶻ⊗Sᶻ, Tr ρ·Sˣ⊗Sˣ)` for a two-qubit state.
    pub fn of_pair_matrix(rho: &HermitianMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::usage("pair correlators need a 4×4 matrix"));
        }
        let d = rho.diagonal();
        let czz = 0.25 * (d[0] - d[1] - d[2] + d[3]);
        // Sˣ⊗Sˣ = ¼·antidiag(1, 1, 1, 1)
        let cxx = 0.25 * (rho.get(0, 3).re + rho.get(1, 2).re + rho.get(2, 1).re + rho.get(3, 0).re);
        Ok(Correlators { czz, cxx })
    }
}

/// Outcome of the Peres-Horodecki test on a two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PptVerdict {
    pub is_ppt: bool,
    pub min_eigenvalue: f64,
}

/// Positive-partial-transpose test. For two qubits this decides separability.
pub fn ppt_check(rho: &HermitianMatrix) -> Result<PptVerdict> {
    if rho.dim() != 4 {
        return Err(Error::usage(format!("PPT check needs a 4×4 matrix, got {0}×{0}", rho.dim())));
    }
    linalg::check_density(rho)?;
    let pt = linalg::partial_transpose_second(rho)?;
    let min_eigenvalue = linalg::hermitian_eig(&pt, linalg::EIG_TOL)?.min();
    Ok(PptVerdict { is_ppt: min_eigenvalue >= PSD_FLOOR, min_eigenvalue })
}
