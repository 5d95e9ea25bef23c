//! Isotropic spin-1/2 Heisenberg chain `H = −J Σ S⃗ᵢ·S⃗ᵢ₊₁` and its thermal
//! pair states.
//!
//! With this sign convention `J < 0` is antiferromagnetic: for two sites
//! `H = |J|·S⃗₁·S⃗₂` has the singlet at `−3|J|/4` below the triplet at `|J|/4`.
//! Units have `k_B = ħ = 1`; temperatures and couplings share one energy unit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Eigen, HermitianMatrix, EIG_TOL};
use crate::xstate::{Correlators, XState};

/// Tolerance of the isotropy, X-form and reduced-state consistency checks.
pub const MODEL_TOL: f64 = 1e-10;

const MAX_BISECTIONS: usize = 200;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "open" => Ok(Boundary::Open),
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            other => Err(Error::usage(format!("unknown boundary `{other}` (open|periodic)"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

/// Chain geometry, coupling and the site pair whose reduced state is studied.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChainSpec {
    n: usize,
    coupling: f64,
    boundary: Boundary,
    pair: (usize, usize),
}

impl ChainSpec {
    pub fn new(n: usize, coupling: f64, boundary: Boundary, pair: (usize, usize)) -> Result<Self> {
        let max = linalg::max_sites();
        if !(2..=max).contains(&n) {
            return Err(Error::usage(format!("chain length {n} outside 2..={max}")));
        }
        if !coupling.is_finite() {
            return Err(Error::usage("coupling must be finite"));
        }
        let (a, b) = pair;
        if a == b || a >= n || b >= n {
            return Err(Error::usage(format!(
                "pair ({a}, {b}) must be two distinct sites below {n}"
            )));
        }
        Ok(ChainSpec { n, coupling, boundary, pair: (a.min(b), a.max(b)) })
    }

    /// Open chain, pair (0, 1).
    pub fn open(n: usize, coupling: f64) -> Result<Self> {
        Self::new(n, coupling, Boundary::Open, (0, 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    pub fn is_antiferromagnetic(&self) -> bool {
        self.coupling < 0.0
    }

    /// Nearest-neighbour bonds. The wrap-around bond is added only for
    /// `n > 2`; for two sites it would repeat the single bond.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut bonds: Vec<_> = (0..self.n - 1).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic && self.n > 2 {
            bonds.push((self.n - 1, 0));
        }
        bonds
    }
}

/// Temperature `T > 0` with `β = 1/T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermalPoint {
    temperature: f64,
    beta: f64,
}

impl ThermalPoint {
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::usage(format!("temperature must be positive, got {temperature}")));
        }
        Ok(ThermalPoint { temperature, beta: 1.0 / temperature })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Single-site spin operators `Sˣ, Sʸ, Sᶻ` as 2×2 arrays.
pub mod spin {
    use num_complex::Complex64;

    pub type Op = [[Complex64; 2]; 2];

    const O: Complex64 = Complex64::new(0.0, 0.0);
    const H: Complex64 = Complex64::new(0.5, 0.0);
    const IH: Complex64 = Complex64::new(0.0, 0.5);

    pub const SX: Op = [[O, H], [H, O]];
    pub const SY: Op = [[O, Complex64::new(0.0, -0.5)], [IH, O]];
    pub const SZ: Op = [[H, O], [O, Complex64::new(-0.5, 0.0)]];
}

fn bit(n: usize, site: usize) -> usize {
    1 << (n - 1 - site)
}

/// Dense Hamiltonian in the `2^n` product basis.
///
/// `S⃗ᵢ·S⃗ⱼ` is diagonal `±1/4` on aligned/anti-aligned spins plus a `1/2`
/// exchange amplitude between configurations differing at `i` and `j`.
pub fn build_hamiltonian(spec: &ChainSpec) -> Result<HermitianMatrix> {
    let n = spec.n;
    let dim = 1usize << n;
    let j = spec.coupling;
    let mut h = CMatrix::zeros(dim);
    for (a, b) in spec.bonds() {
        let (ba, bb) = (bit(n, a), bit(n, b));
        for k in 0..dim {
            let aligned = ((k & ba) == 0) == ((k & bb) == 0);
            h[(k, k)].re += -j * if aligned { 0.25 } else { -0.25 };
            if !aligned {
                h[(k ^ ba ^ bb, k)].re += -j * 0.5;
            }
        }
    }
    HermitianMatrix::try_from_cmatrix(h)
}

/// `e^{−βh}/Tr e^{−βh}`.
pub fn gibbs_state(h: &HermitianMatrix, t: ThermalPoint) -> Result<HermitianMatrix> {
    gibbs_from_spectrum(&linalg::hermitian_eig(h, EIG_TOL)?, t)
}

/// Gibbs state from a precomputed spectrum, weights shifted by the ground
/// energy so the largest Boltzmann factor is exactly one.
fn gibbs_from_spectrum(eig: &Eigen, t: ThermalPoint) -> Result<HermitianMatrix> {
    let e0 = eig.min();
    let beta = t.beta();
    let z: f64 = eig.values.iter().map(|&e| (-beta * (e - e0)).exp()).sum();
    if !z.is_finite() || z < 1.0 {
        return Err(Error::Numeric {
            message: format!("partition function is not finite at T = {}; raise the temperature", t.temperature()),
            residual: z,
        });
    }
    Ok(eig.map(|e| (-beta * (e - e0)).exp() / z))
}

/// `Tr(ρ·Oᵢ⊗Oⱼ)` with the two-site operator embedded among identities.
pub fn two_site_expectation(
    rho: &HermitianMatrix,
    i: usize,
    j: usize,
    op_i: &spin::Op,
    op_j: &spin::Op,
) -> Result<f64> {
    let dim = rho.dim();
    let n = dim.trailing_zeros() as usize;
    if i == j || i >= n || j >= n {
        return Err(Error::usage(format!("sites ({i}, {j}) invalid for a {n}-site state")));
    }
    let (bi, bj) = (bit(n, i), bit(n, j));
    let mut acc = Complex64::new(0.0, 0.0);
    // Tr(ρO) = Σ_{a,b} ρ_ab O_ba; O_ba vanishes unless a, b agree off {i, j}.
    for a in 0..dim {
        let (ai, aj) = (usize::from(a & bi != 0), usize::from(a & bj != 0));
        let rest = a & !(bi | bj);
        for (xi, row_i) in op_i.iter().enumerate() {
            for (xj, row_j) in op_j.iter().enumerate() {
                let o = row_i[ai] * row_j[aj];
                if o.re == 0.0 && o.im == 0.0 {
                    continue;
                }
                let b = rest | if xi == 1 { bi } else { 0 } | if xj == 1 { bj } else { 0 };
                acc += rho.get(a, b) * o;
            }
        }
    }
    Ok(acc.re)
}

/// Correlators of one site pair plus the diagnostics used to validate the
/// X-state mapping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairStatistics {
    pub czz: f64,
    pub cxx: f64,
    pub cyy: f64,
    /// Largest deviation of the reduced pair matrix from the two-parameter
    /// X pattern (structural zeros, equal corners, equal centre diagonal).
    pub x_form_residual: f64,
}

impl PairStatistics {
    pub fn correlators(&self) -> Correlators {
        Correlators { czz: self.czz, cxx: self.cxx }
    }

    /// Fails unless the pair state is isotropic and of X form.
    pub fn validate(&self) -> Result<()> {
        let isotropy = (self.cyy - self.cxx).abs();
        if isotropy > MODEL_TOL {
            return Err(Error::Model {
                message: format!(
                    "state is not isotropic-X (⟨SʸSʸ⟩ − ⟨SˣSˣ⟩ = {:.3e}); the correlator mapping does not apply",
                    self.cyy - self.cxx
                ),
                residual: isotropy,
            });
        }
        if self.x_form_residual > MODEL_TOL {
            return Err(Error::Model {
                message: "state is not isotropic-X; the correlator mapping does not apply".into(),
                residual: self.x_form_residual,
            });
        }
        Ok(())
    }
}

/// Residual of a 4×4 matrix against the `(v, w, z)` X pattern.
pub fn x_form_residual(pair: &HermitianMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            let structural = r == c || (r, c) == (1, 2) || (r, c) == (2, 1);
            if !structural {
                worst = worst.max(pair.get(r, c).norm());
            }
        }
    }
    let d = pair.diagonal();
    worst.max((d[0] - d[3]).abs()).max((d[1] - d[2]).abs())
}

/// Correlators and X-form diagnostics without validation.
pub fn pair_statistics(rho: &HermitianMatrix, i: usize, j: usize) -> Result<PairStatistics> {
    let (a, b) = (i.min(j), i.max(j));
    let reduced = linalg::partial_trace_pair(rho, a, b)?;
    Ok(PairStatistics {
        czz: two_site_expectation(rho, a, b, &spin::SZ, &spin::SZ)?,
        cxx: two_site_expectation(rho, a, b, &spin::SX, &spin::SX)?,
        cyy: two_site_expectation(rho, a, b, &spin::SY, &spin::SY)?,
        x_form_residual: x_form_residual(&reduced),
    })
}

/// `(⟨SᵢᶻSⱼᶻ⟩, ⟨SᵢˣSⱼˣ⟩)`, failing with a model error when the pair state is
/// not an isotropic X-state.
pub fn pair_correlators(rho: &HermitianMatrix, i: usize, j: usize) -> Result<Correlators> {
    let stats = pair_statistics(rho, i, j)?;
    stats.validate()?;
    Ok(stats.correlators())
}

/// Reduced thermal pair state in all its forms.
#[derive(Clone, Debug)]
pub struct ThermalPair {
    pub temperature: f64,
    pub statistics: PairStatistics,
    pub xstate: XState,
    /// Largest elementwise gap between the partial trace and the X-state
    /// rebuilt from correlators.
    pub consistency: f64,
}

/// Hamiltonian spectrum cached for repeated thermal evaluations.
#[derive(Clone, Debug)]
pub struct ThermalChain {
    spec: ChainSpec,
    spectrum: Eigen,
}

impl ThermalChain {
    pub fn new(spec: ChainSpec) -> Result<Self> {
        let h = build_hamiltonian(&spec)?;
        let spectrum = linalg::hermitian_eig(&h, EIG_TOL)?;
        Ok(ThermalChain { spec, spectrum })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn energies(&self) -> &[f64] {
        &self.spectrum.values
    }

    pub fn gibbs(&self, t: ThermalPoint) -> Result<HermitianMatrix> {
        gibbs_from_spectrum(&self.spectrum, t)
    }

    pub fn pair_state(&self, t: ThermalPoint) -> Result<ThermalPair> {
        let rho = self.gibbs(t)?;
        let (i, j) = self.spec.pair;
        let statistics = pair_statistics(&rho, i, j)?;
        statistics.validate()?;
        let xstate = XState::from_correlators(statistics.correlators())?;
        let reduced = linalg::partial_trace_pair(&rho, i, j)?;
        let consistency = reduced.max_abs_diff(&xstate.to_matrix_unchecked());
        if consistency > MODEL_TOL {
            return Err(Error::Model {
                message: "reduced pair state differs from the correlator-built X-state".into(),
                residual: consistency,
            });
        }
        Ok(ThermalPair { temperature: t.temperature(), statistics, xstate, consistency })
    }

    pub fn xstate(&self, t: ThermalPoint) -> Result<XState> {
        Ok(self.pair_state(t)?.xstate)
    }

    /// Entanglement margin `|z(T)| − v(T)`; positive exactly when entangled.
    pub fn margin(&self, t: ThermalPoint) -> Result<f64> {
        let x = self.xstate(t)?;
        Ok(x.coherence() - x.v())
    }
}

/// X-state of the pair `spec.pair()` in the Gibbs state at `t`.
pub fn thermal_xstate(spec: &ChainSpec, t: ThermalPoint) -> Result<XState> {
    ThermalChain::new(*spec)?.xstate(t)
}

/// Bisection result for the separability threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Threshold {
    pub temperature: f64,
    pub iterations: usize,
}

/// Temperature at which `|z(T)| = v(T)`, bracketed by an entangled `t_lo`
/// and a separable `t_hi`, located to within `tol`.
pub fn threshold_temperature(spec: &ChainSpec, t_lo: f64, t_hi: f64, tol: f64) -> Result<Threshold> {
    if !(t_lo > 0.0 && t_hi > t_lo && t_hi.is_finite()) {
        return Err(Error::usage(format!("invalid bracket [{t_lo}, {t_hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::usage("tolerance must be positive"));
    }
    let chain = ThermalChain::new(*spec)?;
    let g = |t: f64| -> Result<f64> { chain.margin(ThermalPoint::new(t)?) };
    let (g_lo, g_hi) = (g(t_lo)?, g(t_hi)?);
    if !(g_lo > 0.0) {
        return Err(Error::usage(format!(
            "bracket invalid: pair is not entangled at t_lo = {t_lo} (|z| − v = {g_lo:.3e})"
        )));
    }
    if g_hi > 0.0 {
        return Err(Error::usage(format!(
            "bracket invalid: pair is still entangled at t_hi = {t_hi} (|z| − v = {g_hi:.3e})"
        )));
    }
    let (mut lo, mut hi) = (t_lo, t_hi);
    let mut iterations = 0;
    while hi - lo > tol && iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(Threshold { temperature: 0.5 * (lo + hi), iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::hs_entanglement;
    use crate::linalg::{hermitian_eig, kron};

    /// Two-spin oracle from the singlet/triplet decomposition.
    fn two_spin_correlator(j: f64, t: f64) -> f64 {
        let beta = 1.0 / t;
        let (e_s, e_t) = (0.75 * j, -0.25 * j);
        let (ws, wt) = ((-beta * e_s).exp(), (-beta * e_t).exp());
        (-0.75 * ws + 0.25 * 3.0 * wt) / (ws + 3.0 * wt) / 3.0
    }

    fn spin_matrix(op: &spin::Op) -> HermitianMatrix {
        HermitianMatrix::try_from_cmatrix(CMatrix::from_fn(2, |r, c| op[r][c])).unwrap()
    }

    fn embed(n: usize, site: usize, op: &spin::Op) -> HermitianMatrix {
        let id = HermitianMatrix::identity(2).unwrap();
        let mut out: Option<HermitianMatrix> = None;
        for k in 0..n {
            let f = if k == site { spin_matrix(op) } else { id.clone() };
            out = Some(match out {
                None => f,
                Some(m) => kron(&m, &f).unwrap(),
            });
        }
        out.unwrap()
    }

    /// `−J Σ (SˣSˣ + SʸSʸ + SᶻSᶻ)` assembled from tensor products.
    fn kron_hamiltonian(spec: &ChainSpec) -> CMatrix {
        let n = spec.n();
        let mut h = CMatrix::zeros(1 << n);
        for (a, b) in spec.bonds() {
            for op in [&spin::SX, &spin::SY, &spin::SZ] {
                let prod = embed(n, a, op).as_cmatrix().matmul(embed(n, b, op).as_cmatrix()).unwrap();
                for r in 0..1 << n {
                    for c in 0..1 << n {
                        h[(r, c)] += prod[(r, c)] * -spec.coupling();
                    }
                }
            }
        }
        h
    }

    #[test]
    fn two_site_spectrum_has_singlet_lowest_for_negative_coupling() {
        let h = build_hamiltonian(&ChainSpec::open(2, -1.0).unwrap()).unwrap();
        let e = hermitian_eig(&h, 1e-12).unwrap();
        let want = [-0.75, 0.25, 0.25, 0.25];
        for (g, w) in e.values.iter().zip(want) {
            assert!((g - w).abs() < 1e-14, "{:?}", e.values);
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let h = build_hamiltonian(&ChainSpec::open(2, 0.0).unwrap()).unwrap();
        assert_eq!(h, HermitianMatrix::zeros(4).unwrap());
        let h = build_hamiltonian(&ChainSpec::open(3, -1.0).unwrap()).unwrap();
        assert!(h.trace().abs() < 1e-15);
        assert!(h.as_cmatrix().as_slice().iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn hamiltonian_matches_tensor_product_assembly() {
        for (n, b) in [(3, Boundary::Open), (4, Boundary::Periodic), (5, Boundary::Open)] {
            let spec = ChainSpec::new(n, -0.7, b, (0, 1)).unwrap();
            let h = build_hamiltonian(&spec).unwrap();
            let oracle = kron_hamiltonian(&spec);
            assert!(h.as_cmatrix().max_abs_diff(&oracle) < 1e-15);
            assert!(oracle.as_slice().iter().all(|c| c.im.abs() < 1e-15));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(ChainSpec::open(1, -1.0).is_err());
        assert!(ChainSpec::open(linalg::max_sites() + 1, -1.0).is_err());
        assert!(ChainSpec::new(4, -1.0, Boundary::Open, (2, 2)).is_err());
        assert!(ChainSpec::new(4, -1.0, Boundary::Open, (0, 4)).is_err());
        assert_eq!(ChainSpec::new(4, -1.0, Boundary::Open, (3, 1)).unwrap().pair(), (1, 3));
        assert!(!ChainSpec::open(2, 1.0).unwrap().is_antiferromagnetic());
        assert_eq!(ChainSpec::new(2, -1.0, Boundary::Periodic, (0, 1)).unwrap().bonds().len(), 1);
        assert_eq!(ChainSpec::new(4, -1.0, Boundary::Periodic, (0, 1)).unwrap().bonds().len(), 4);
        assert!(ThermalPoint::new(0.0).is_err());
        assert!("sideways".parse::<Boundary>().is_err());
    }

    #[test]
    fn gibbs_examples() {
        let h = build_hamiltonian(&ChainSpec::open(3, -1.0).unwrap()).unwrap();
        let hot = gibbs_state(&h, ThermalPoint::new(1e6).unwrap()).unwrap();
        let flat = HermitianMatrix::identity(8).unwrap().scaled(0.125);
        assert!(hot.max_abs_diff(&flat) < 1e-5);

        let h2 = build_hamiltonian(&ChainSpec::open(2, -1.0).unwrap()).unwrap();
        let rho = gibbs_state(&h2, ThermalPoint::new(0.5).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = [0.0, h, -h, 0.0];
        let mut pop = Complex64::new(0.0, 0.0);
        for r in 0..4 {
            for c in 0..4 {
                pop += rho.get(r, c) * singlet[r] * singlet[c];
            }
        }
        let oracle = 1.5f64.exp() / (1.5f64.exp() + 3.0 * (-0.5f64).exp());
        assert!((pop.re - oracle).abs() < 1e-12);
        assert!((oracle - 0.7112345942275938).abs() < 1e-15);

        let d = HermitianMatrix::from_diagonal(&[0.0, 1.0, 2.0, 0.5]).unwrap();
        let rho = gibbs_state(&d, ThermalPoint::new(0.8).unwrap()).unwrap();
        let w: Vec<f64> = d.diagonal().iter().map(|e| (-e / 0.8).exp()).collect();
        let z: f64 = w.iter().sum();
        for (i, wi) in w.iter().enumerate() {
            assert!((rho.get(i, i).re - wi / z).abs() < 1e-14);
        }
        assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gibbs_survives_very_low_temperature() {
        let h = build_hamiltonian(&ChainSpec::open(2, -1.0).unwrap()).unwrap();
        let rho = gibbs_state(&h, ThermalPoint::new(1e-4).unwrap()).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlator_examples() {
        let mixed = HermitianMatrix::identity(8).unwrap().scaled(0.125);
        let c = pair_correlators(&mixed, 0, 2).unwrap();
        assert!(c.czz.abs() < 1e-15 && c.cxx.abs() < 1e-15);

        let singlet = XState::singlet().to_matrix().unwrap();
        let c = pair_correlators(&singlet, 0, 1).unwrap();
        assert!((c.czz + 0.25).abs() < 1e-15 && (c.cxx + 0.25).abs() < 1e-15);

        let spec = ChainSpec::open(2, -1.0).unwrap();
        let rho = gibbs_state(&build_hamiltonian(&spec).unwrap(), ThermalPoint::new(0.5).unwrap()).unwrap();
        let c = pair_correlators(&rho, 0, 1).unwrap();
        let oracle = two_spin_correlator(-1.0, 0.5);
        assert!((c.czz - oracle).abs() < 1e-12 && (c.cxx - oracle).abs() < 1e-12);
        assert!((oracle + 0.15374486474253127).abs() < 1e-15);
    }

    #[test]
    fn correlators_match_embedded_operator_traces() {
        let spec = ChainSpec::new(4, -1.0, Boundary::Open, (1, 3)).unwrap();
        let rho = gibbs_state(&build_hamiltonian(&spec).unwrap(), ThermalPoint::new(0.7).unwrap()).unwrap();
        for op in [&spin::SX, &spin::SY, &spin::SZ] {
            let o = embed(4, 1, op).as_cmatrix().matmul(embed(4, 3, op).as_cmatrix()).unwrap();
            let direct = rho.as_cmatrix().matmul(&o).unwrap().trace().re;
            let fast = two_site_expectation(&rho, 1, 3, op, op).unwrap();
            assert!((direct - fast).abs() < 1e-14);
        }
    }

    #[test]
    fn non_x_pair_state_is_a_model_error() {
        // |↑⟩⊗|+⟩ has ⟨SˣSˣ⟩ = 0 but a non-X reduced matrix.
        let h = 0.5;
        let m = CMatrix::from_fn(4, |r, c| {
            let keep = r < 2 && c < 2;
            Complex64::new(if keep { h } else { 0.0 }, 0.0)
        });
        let rho = HermitianMatrix::try_from_cmatrix(m).unwrap();
        let err = pair_correlators(&rho, 0, 1).unwrap_err();
        assert!(matches!(err, Error::Model { .. }), "{err}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn thermal_examples() {
        let spec = ChainSpec::open(2, -1.0).unwrap();
        let x = thermal_xstate(&spec, ThermalPoint::new(0.5).unwrap()).unwrap();
        assert!((x.v() - 0.09625513525746873).abs() < 1e-12);
        assert!((x.z().re + 0.30748972948506254).abs() < 1e-12);
        assert!(x.is_entangled());

        let hot = thermal_xstate(&spec, ThermalPoint::new(2.0).unwrap()).unwrap();
        assert!(!hot.is_entangled());

        let ferro = ThermalChain::new(ChainSpec::open(2, 1.0).unwrap()).unwrap();
        for t in [0.01, 0.1, 0.5, 1.0, 5.0] {
            let x = ferro.xstate(ThermalPoint::new(t).unwrap()).unwrap();
            assert!(x.z().re >= 0.0 && x.v() >= x.coherence() - 1e-15);
            assert_eq!(hs_entanglement(&x), 0.0);
        }
    }

    #[test]
    fn threshold_examples() {
        let t = threshold_temperature(&ChainSpec::open(2, -1.0).unwrap(), 0.1, 5.0, 1e-10).unwrap();
        assert!((t.temperature - 1.0 / 3f64.ln()).abs() < 1e-9);
        let t = threshold_temperature(&ChainSpec::open(2, -2.0).unwrap(), 0.1, 5.0, 1e-10).unwrap();
        assert!((t.temperature - 2.0 / 3f64.ln()).abs() < 1e-9);
        let t = threshold_temperature(&ChainSpec::open(2, -1.0).unwrap(), 0.1, 5.0, 1e-6).unwrap();
        assert!(t.iterations <= 60);
    }

    #[test]
    fn threshold_rejects_bad_brackets() {
        let spec = ChainSpec::open(2, -1.0).unwrap();
        assert!(matches!(threshold_temperature(&spec, 1.0, 5.0, 1e-6), Err(Error::Usage(_))));
        assert!(matches!(threshold_temperature(&spec, 0.1, 0.5, 1e-6), Err(Error::Usage(_))));
        assert!(matches!(threshold_temperature(&spec, 2.0, 1.0, 1e-6), Err(Error::Usage(_))));
    }

    #[test]
    fn periodic_correlators_are_translation_invariant() {
        let spec = ChainSpec::new(5, -1.0, Boundary::Periodic, (0, 1)).unwrap();
        let rho = ThermalChain::new(spec).unwrap().gibbs(ThermalPoint::new(0.6).unwrap()).unwrap();
        let first = pair_statistics(&rho, 0, 1).unwrap();
        for (a, b) in [(1, 2), (2, 3), (3, 4), (4, 0)] {
            let s = pair_statistics(&rho, a, b).unwrap();
            assert!((s.czz - first.czz).abs() < 1e-10);
            assert!((s.cxx - first.cxx).abs() < 1e-10);
        }
    }
}
