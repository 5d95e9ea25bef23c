//! Closed-form entanglement of X-states and the matching Bell witness.
//!
//! For an entangled `σ = X(v_e, z)` the closest member of the separable
//! slice `{X(v_s, z) : v_s ≥ |z|}` is `ρ₀ = X(|z|, z)`, at distance
//! `2(|z| − v_e)`. The optimal witness
//!
//! ```text
//!     A = (ρ₀ − σ − ⟨ρ₀, ρ₀ − σ⟩·𝟙) / ‖ρ₀ − σ‖ = diag(1 − 2|z|, −2|z|, −2|z|, 1 − 2|z|)
//! ```
//!
//! is non-negative on that slice and gives `⟨σ, A⟩ = −2(|z| − v_e)`, so the
//! maximal violation equals the distance.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, HermitianMatrix, EIG_TOL};
use crate::xstate::XState;

/// `bell_operator` refuses states closer than this to the separable boundary.
pub const WITNESS_MARGIN: f64 = 1e-12;

/// Negative spin-flip singular values above `−CLAMP` are round-off.
const CLAMP: f64 = 1e-12;

/// Hilbert-Schmidt distance between two X-states.
///
/// Shared coherence gives `2|v_a − v_b|`; otherwise `√(4Δv² + 2|Δz|²)`.
pub fn hs_distance(a: &XState, b: &XState) -> f64 {
    let dv = a.v() - b.v();
    if a.z() == b.z() {
        2.0 * dv.abs()
    } else {
        (4.0 * dv * dv + 2.0 * (a.z() - b.z()).norm_sqr()).sqrt()
    }
}

/// Result of [`nearest_separable`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NearestSeparable {
    pub state: XState,
    /// Set when the input was already separable and is returned unchanged.
    pub already_separable: bool,
}

/// `ρ₀ = X(|z|, z)` for entangled input; separable input comes back as is.
pub fn nearest_separable(sigma: &XState) -> NearestSeparable {
    if sigma.is_entangled() {
        let state = XState::new(sigma.coherence(), sigma.z())
            .expect("|z| ≤ 1/2 keeps v = |z| in range");
        NearestSeparable { state, already_separable: false }
    } else {
        NearestSeparable { state: *sigma, already_separable: true }
    }
}

/// `max(0, 2(|z| − v))`. Accepts states outside the positive cone.
pub fn hs_entanglement(sigma: &XState) -> f64 {
    (2.0 * (sigma.coherence() - sigma.v())).max(0.0)
}

/// Optimal witness for an entangled X-state.
///
/// Stored so that `scale·matrix + shift·𝟙 + σ = ρ₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct BellOperator {
    pub matrix: HermitianMatrix,
    /// `⟨ρ₀, ρ₀ − σ⟩`.
    pub shift: f64,
    /// `‖ρ₀ − σ‖`.
    pub scale: f64,
    /// The state the witness was built for.
    pub target: XState,
}

impl BellOperator {
    pub fn diagonal(&self) -> [f64; 4] {
        let d = self.matrix.diagonal();
        [d[0], d[1], d[2], d[3]]
    }

    /// `min over α of ‖A − α𝟙‖`; the minimizing `α` is `Tr(A)/4`.
    pub fn normalization(&self) -> (f64, f64) {
        let alpha = self.matrix.trace() / self.matrix.dim() as f64;
        (alpha, linalg::hs_norm(&self.matrix.shifted(-alpha)))
    }
}

impl Serialize for BellOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BellOperator", 3)?;
        st.serialize_field("diag", &self.diagonal())?;
        st.serialize_field("shift", &self.shift)?;
        st.serialize_field("scale", &self.scale)?;
        st.end()
    }
}

/// `A_max = (ρ₀ − σ − ⟨ρ₀, ρ₀ − σ⟩·𝟙)/‖ρ₀ − σ‖`, evaluated on matrices.
pub fn bell_operator(sigma: &XState) -> Result<BellOperator> {
    if !(sigma.coherence() - sigma.v() > WITNESS_MARGIN) {
        return Err(Error::domain(format!(
            "witness undefined: ‖ρ₀ − σ‖ = 0 (v = {}, |z| = {} is not strictly entangled)",
            sigma.v(),
            sigma.coherence()
        )));
    }
    let rho0 = nearest_separable(sigma).state.to_matrix_unchecked();
    let diff = &rho0 - &sigma.to_matrix_unchecked();
    let shift = linalg::hs_inner(&rho0, &diff)?;
    let scale = linalg::hs_norm(&diff);
    let matrix = diff.shifted(-shift).scaled(1.0 / scale);
    Ok(BellOperator { matrix, shift, scale, target: *sigma })
}

/// Maximal GBI violation `min_ρ ⟨ρ, A⟩ − ⟨σ, A⟩` for `a = bell_operator(sigma)`.
///
/// On the separable slice `⟨X(v_s, z), A⟩ = 2(v_s − |z|)` increases with
/// `v_s`, so the minimum sits at the boundary state `X(|z|, z)`.
pub fn gbi_violation(sigma: &XState, a: &BellOperator) -> Result<f64> {
    let boundary = XState::new(sigma.coherence(), sigma.z())?.to_matrix_unchecked();
    let separable_min = linalg::hs_inner(&boundary, &a.matrix)?;
    let entangled = linalg::hs_inner(&sigma.to_matrix_unchecked(), &a.matrix)?;
    Ok(separable_min - entangled)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
///
/// The `λᵢ` are the square roots of the eigenvalues of `ρ·(Y⊗Y)·ρ*·(Y⊗Y)`.
/// They are obtained as the singular values of `√ρ·√ρ̃`, read off the
/// spectrum of the Hermitian embedding `[[0, M], [M†, 0]]`, which avoids
/// taking square roots of tiny squared eigenvalues.
pub fn concurrence(rho: &HermitianMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::usage(format!("concurrence needs a 4×4 matrix, got {0}×{0}", rho.dim())));
    }
    let eig = linalg::check_density(rho)?;
    let sqrt_rho = eig.map(|l| l.max(0.0).sqrt());
    let yy = spin_flip();
    let sqrt_flipped = yy.matmul(sqrt_rho.conj().as_cmatrix())?.matmul(&yy)?;
    let product = sqrt_rho.as_cmatrix().matmul(&sqrt_flipped)?;

    let embedding = CMatrix::from_fn(8, |r, c| match (r < 4, c < 4) {
        (true, false) => product[(r, c - 4)],
        (false, true) => product[(c, r - 4)].conj(),
        _ => num_complex::Complex64::new(0.0, 0.0),
    });
    let spectrum = linalg::hermitian_eig(&HermitianMatrix::symmetrized(embedding), EIG_TOL)?;
    let mut lambda: Vec<f64> = spectrum.values[4..]
        .iter()
        .rev()
        .map(|&l| if l < 0.0 && l > -CLAMP { 0.0 } else { l })
        .collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0))
}

/// `σʸ⊗σʸ` in the `|q₁q₂⟩` basis.
fn spin_flip() -> CMatrix {
    let mut m = CMatrix::zeros(4);
    m[(0, 3)].re = -1.0;
    m[(1, 2)].re = 1.0;
    m[(2, 1)].re = 1.0;
    m[(3, 0)].re = -1.0;
    m
}

/// The three measures side by side.
#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementReport {
    pub e_hs: f64,
    pub b_gbi: f64,
    pub concurrence: f64,
    pub nearest: XState,
    pub witness: Option<BellOperator>,
}

impl Serialize for EntanglementReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EntanglementReport", 5)?;
        st.serialize_field("e_hs", &self.e_hs)?;
        st.serialize_field("b_gbi", &self.b_gbi)?;
        st.serialize_field("concurrence", &self.concurrence)?;
        st.serialize_field("nearest", &self.nearest)?;
        st.serialize_field("witness", &self.witness)?;
        st.end()
    }
}

/// Full report for a physical (positive semidefinite) X-state.
pub fn analyze(sigma: &XState) -> Result<EntanglementReport> {
    let rho = sigma.to_matrix()?;
    let concurrence = concurrence(&rho)?;
    let nearest = nearest_separable(sigma).state;
    let e_hs = hs_entanglement(sigma);
    let (b_gbi, witness) = match bell_operator(sigma) {
        Ok(a) => (gbi_violation(sigma, &a)?, Some(a)),
        // Separable, or within the margin of the boundary: no violation.
        Err(_) => (0.0, None),
    };
    Ok(EntanglementReport { e_hs, b_gbi, concurrence, nearest, witness })
}
