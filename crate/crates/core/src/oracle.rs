//! Brute-force checks of the closed forms.
//!
//! Nothing in here is used by the production formulas; every distance is
//! recomputed from explicit 4×4 matrices.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::BellOperator;
use crate::error::{Error, Result};
use crate::linalg::{hs_inner, hs_norm};
use crate::xstate::XState;

/// Default bracket width for the one-dimensional fixed-z search.
pub const DEFAULT_GRID_TOL: f64 = 1e-7;
/// Default stopping tolerance for the free-z projected gradient.
pub const DEFAULT_FREE_TOL: f64 = 1e-8;

const GRID_POINTS: usize = 64;
const MULTI_STARTS: u64 = 8;
const MAX_ITERATIONS: usize = 10_000;
const START_SEED: u64 = 0x5eed_f2ee;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Separable set searched by a minimizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparableFamily {
    /// `{X(v_s, z) : |z| ≤ v_s ≤ 1/2}` sharing the target's coherence.
    FixedZ,
    /// `{X(v_s, z_s) : |z_s| ≤ v_s ≤ 1/2}`.
    FreeZ,
    /// `FreeZ` intersected with `|z_s| ≤ 1/2 − v_s` (positive semidefinite).
    PsdConstrainedFreeZ,
}

impl SeparableFamily {
    pub fn label(&self) -> &'static str {
        match self {
            SeparableFamily::FixedZ => "fixed-z",
            SeparableFamily::FreeZ => "free-z",
            SeparableFamily::PsdConstrainedFreeZ => "psd-constrained-free-z",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsdConstraint {
    WithPsd,
    WithoutPsd,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MinimizationResult {
    pub minimum: f64,
    pub argmin: XState,
    pub evaluations: usize,
    pub family: SeparableFamily,
}

/// Matrix-level Hilbert-Schmidt distance, independent of the closed forms.
fn matrix_distance(a: &XState, b: &XState) -> f64 {
    hs_norm(&(&a.to_matrix_unchecked() - &b.to_matrix_unchecked()))
}

/// Minimum distance from `sigma` to the fixed-z separable slice.
///
/// A uniform grid over `v_s ∈ [|z|, 1/2]` (endpoints included) picks a
/// cell, which golden-section search then narrows to `grid_tol`.
pub fn min_distance_fixed_z(sigma: &XState, grid_tol: f64) -> MinimizationResult {
    let family = SeparableFamily::FixedZ;
    if !sigma.is_entangled() {
        return MinimizationResult { minimum: 0.0, argmin: *sigma, evaluations: 0, family };
    }
    let (lo, hi) = (sigma.coherence(), 0.5);
    let mut evaluations = 0;
    let mut eval = |v: f64| {
        evaluations += 1;
        let candidate = XState::new(v, sigma.z()).expect("v within [|z|, 1/2]");
        (matrix_distance(&candidate, sigma), candidate)
    };

    let step = (hi - lo) / GRID_POINTS as f64;
    let mut best = eval(lo);
    let mut best_k = 0;
    for k in 1..=GRID_POINTS {
        let v = if k == GRID_POINTS { hi } else { lo + step * k as f64 };
        let cand = eval(v);
        if cand.0 < best.0 {
            best = cand;
            best_k = k;
        }
    }

    let mut a = lo + step * best_k.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_k + 1) as f64).min(hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    while b - a > grid_tol.max(f64::EPSILON) {
        if fc.0 < fd.0 {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d);
        }
    }
    for cand in [fc, fd] {
        if cand.0 < best.0 {
            best = cand;
        }
    }
    MinimizationResult { minimum: best.0, argmin: best.1, evaluations, family }
}

/// Cross-section of a separable family in the `(v, |z|)` half-plane.
fn cross_section(constraint: PsdConstraint) -> [(f64, f64); 3] {
    match constraint {
        PsdConstraint::WithoutPsd => [(0.0, 0.0), (0.5, 0.0), (0.5, 0.5)],
        PsdConstraint::WithPsd => [(0.0, 0.0), (0.5, 0.0), (0.25, 0.25)],
    }
}

fn project_on_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    (a.0 + t * dx, a.1 + t * dy)
}

/// Euclidean projection onto a counter-clockwise triangle.
fn project_on_triangle(p: (f64, f64), tri: &[(f64, f64); 3]) -> (f64, f64) {
    let inside = (0..3).all(|k| {
        let (a, b) = (tri[k], tri[(k + 1) % 3]);
        (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0.0
    });
    if inside {
        return p;
    }
    (0..3)
        .map(|k| project_on_segment(p, tri[k], tri[(k + 1) % 3]))
        .min_by(|x, y| {
            let dx = (x.0 - p.0).powi(2) + (x.1 - p.1).powi(2);
            let dy = (y.0 - p.0).powi(2) + (y.1 - p.1).powi(2);
            dx.total_cmp(&dy)
        })
        .expect("three edges")
}

/// Projection of `(v, z)` onto a family that is rotationally symmetric in
/// the phase of `z`: project `(v, |z|)` in the half-plane, keep the phase.
fn project(v: f64, z: Complex64, tri: &[(f64, f64); 3], fallback_phase: Complex64) -> (f64, Complex64) {
    let r = z.norm();
    let phase = if r > 0.0 { z / r } else { fallback_phase };
    let (pv, pr) = project_on_triangle((v, r), tri);
    (pv, phase * pr)
}

/// Minimum distance from `sigma` to the separable X-family with free
/// coherence, by multi-start projected gradient descent.
///
/// The objective `4(v_s − v)² + 2|z_s − z|²` is minimized over the family;
/// each start backtracks by step halving until the objective decreases and
/// stops once the projected step is shorter than `tol`.
pub fn min_distance_free_z(sigma: &XState, constraint: PsdConstraint, tol: f64) -> Result<MinimizationResult> {
    let family = match constraint {
        PsdConstraint::WithPsd => SeparableFamily::PsdConstrainedFreeZ,
        PsdConstraint::WithoutPsd => SeparableFamily::FreeZ,
    };
    let tri = cross_section(constraint);
    let (v0, z0) = (sigma.v(), sigma.z());
    let fallback_phase = if z0.norm() > 0.0 { z0 / z0.norm() } else { Complex64::new(1.0, 0.0) };
    let objective = |v: f64, z: Complex64| 4.0 * (v - v0).powi(2) + 2.0 * (z - z0).norm_sqr();

    let (pv, pz) = project(v0, z0, &tri, fallback_phase);
    if pv == v0 && pz == z0 {
        return Ok(MinimizationResult { minimum: 0.0, argmin: *sigma, evaluations: 1, family });
    }

    let runs: Vec<(f64, f64, Complex64, usize, bool)> = (0..MULTI_STARTS)
        .into_par_iter()
        .map(|start| {
            let mut rng = sample_rng(START_SEED, start);
            let (mut v, mut z) = {
                let x = random_separable_point(&mut rng, constraint);
                (x.0, x.1)
            };
            let mut f = objective(v, z);
            let mut evals = 1;
            let mut converged = false;
            for _ in 0..MAX_ITERATIONS {
                let (gv, gz) = (8.0 * (v - v0), (z - z0) * 4.0);
                let mut step = 1.0;
                let (mut nv, mut nz, mut nf);
                loop {
                    let p = project(v - step * gv, z - gz * step, &tri, fallback_phase);
                    nv = p.0;
                    nz = p.1;
                    nf = objective(nv, nz);
                    evals += 1;
                    if nf <= f || step < 1e-20 {
                        break;
                    }
                    step *= 0.5;
                }
                let moved = ((nv - v).powi(2) + (nz - z).norm_sqr()).sqrt();
                v = nv;
                z = nz;
                f = nf;
                if moved < tol {
                    converged = true;
                    break;
                }
            }
            (f, v, z, evals, converged)
        })
        .collect();

    let evaluations = runs.iter().map(|r| r.3).sum();
    let best = runs
        .iter()
        .filter(|r| r.4)
        .min_by(|a, b| a.0.total_cmp(&b.0));
    let Some(&(_, v, z, _, _)) = best else {
        let best_so_far = runs.iter().map(|r| r.0.sqrt()).fold(f64::INFINITY, f64::min);
        return Err(Error::Numeric {
            message: format!("projected gradient did not converge in {MAX_ITERATIONS} iterations"),
            residual: best_so_far,
        });
    };
    let argmin = XState::new(v, z)?;
    Ok(MinimizationResult { minimum: matrix_distance(&argmin, sigma), argmin, evaluations, family })
}

fn random_separable_point(rng: &mut ChaCha8Rng, constraint: PsdConstraint) -> (f64, Complex64) {
    let tri = cross_section(constraint);
    // Uniform in the cross-section triangle, then a uniform phase.
    let (mut a, mut b): (f64, f64) = (rng.gen(), rng.gen());
    if a + b > 1.0 {
        a = 1.0 - a;
        b = 1.0 - b;
    }
    let v = tri[0].0 + a * (tri[1].0 - tri[0].0) + b * (tri[2].0 - tri[0].0);
    let r = tri[0].1 + a * (tri[1].1 - tri[0].1) + b * (tri[2].1 - tri[0].1);
    let phase: f64 = rng.gen_range(0.0..2.0 * PI);
    (v, Complex64::from_polar(r, phase))
}

/// Lowest witness expectation found on two candidate separable sets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessAudit {
    /// Over `{X(v_s, z) : v_s ≥ |z|}` with the witness target's `z`.
    pub min_fixed_z: f64,
    /// Over all positive semidefinite separable X-states.
    pub min_full_family: f64,
}

/// Samples both separable sets (plus their extreme points) and records the
/// smallest `⟨ρ, A⟩`. Deterministic for a given seed.
pub fn witness_audit(a: &BellOperator, samples: usize, seed: u64) -> Result<WitnessAudit> {
    let z = a.target.z();
    let lo = a.target.coherence();
    let expect = |x: &XState| hs_inner(&x.to_matrix_unchecked(), &a.matrix);

    let mut rng = sample_rng(seed, 0);
    let mut fixed: Vec<XState> = vec![XState::new(lo, z)?, XState::new(0.5, z)?];
    for _ in 0..samples {
        fixed.push(XState::new(rng.gen_range(lo..=0.5), z)?);
    }
    let mut min_fixed_z = f64::INFINITY;
    for x in &fixed {
        min_fixed_z = min_fixed_z.min(expect(x)?);
    }

    let mut rng = sample_rng(seed, 1);
    let mut full: Vec<XState> = vec![XState::real(0.0, 0.0)?, XState::real(0.5, 0.0)?];
    for k in 0..16 {
        full.push(XState::new(0.25, Complex64::from_polar(0.25, 2.0 * PI * k as f64 / 16.0))?);
    }
    for _ in 0..samples {
        full.push(random_xstate(XStateClass::Separable, &mut rng));
    }
    let mut min_full_family = f64::INFINITY;
    for x in &full {
        min_full_family = min_full_family.min(expect(x)?);
    }
    Ok(WitnessAudit { min_fixed_z, min_full_family })
}

/// Requested entanglement class for [`random_xstate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XStateClass {
    Entangled,
    Separable,
    Any,
}

/// Portable generator for sample `stream` of a seeded run: ChaCha8 keyed by
/// the seed, one ChaCha stream per index, so results do not depend on how
/// work is scheduled.
pub fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Positive semidefinite X-state: `v` uniform on `[0, 1/2]`, `|z|` uniform
/// on `[0, 1/2 − v]`, uniform phase, rejected until it is in `class`.
pub fn random_xstate(class: XStateClass, rng: &mut impl Rng) -> XState {
    loop {
        let v: f64 = rng.gen_range(0.0..=0.5);
        let r: f64 = rng.gen_range(0.0..=0.5 - v);
        let phase: f64 = rng.gen_range(0.0..2.0 * PI);
        let x = XState::new(v, Complex64::from_polar(r, phase)).expect("sampled inside bounds");
        let keep = match class {
            XStateClass::Entangled => x.is_entangled(),
            XStateClass::Separable => !x.is_entangled(),
            XStateClass::Any => true,
        };
        if keep && x.is_psd() {
            return x;
        }
    }
}

/// Analytic free-z optimum without the positivity constraint: the
/// boundary point `v_s = |z_s| = (2v + |z|)/3` at distance `(2/√3)(|z| − v)`.
pub fn free_z_stationary_point(sigma: &XState) -> (f64, f64) {
    let r = (2.0 * sigma.v() + sigma.coherence()) / 3.0;
    (r, 2.0 / 3f64.sqrt() * (sigma.coherence() - sigma.v()).max(0.0))
}

/// Two-spin Gibbs oracle: `⟨SᶻSᶻ⟩ = ⟨SˣSˣ⟩ = ⟨S⃗₁·S⃗₂⟩/3` for
/// `H = −J S⃗₁·S⃗₂` from the singlet (`3J/4`) and triplet (`−J/4`) levels.
pub fn two_spin_correlator(coupling: f64, temperature: f64) -> f64 {
    let beta = 1.0 / temperature;
    let (e_singlet, e_triplet) = (0.75 * coupling, -0.25 * coupling);
    let e0 = e_singlet.min(e_triplet);
    let ws = (-beta * (e_singlet - e0)).exp();
    let wt = 3.0 * (-beta * (e_triplet - e0)).exp();
    (-0.75 * ws + 0.25 * wt) / (ws + wt) / 3.0
}

/// Two-spin separability threshold `T* = |J|/ln 3`.
pub fn two_spin_threshold(coupling: f64) -> f64 {
    coupling.abs() / 3f64.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{bell_operator, hs_entanglement};

    fn x(v: f64, z: f64) -> XState {
        XState::real(v, z).unwrap()
    }

    #[test]
    fn fixed_z_examples() {
        let r = min_distance_fixed_z(&XState::singlet(), DEFAULT_GRID_TOL);
        assert!((r.minimum - 1.0).abs() < 1e-12);
        assert!((r.argmin.v() - 0.5).abs() < 1e-12);

        let r = min_distance_fixed_z(&x(0.1, 0.3), DEFAULT_GRID_TOL);
        assert!((r.minimum - 0.4).abs() < 1e-6);
        assert!((r.argmin.v() - 0.3).abs() < 1e-6);
        assert_eq!(r.family, SeparableFamily::FixedZ);

        let r = min_distance_fixed_z(&x(0.4, 0.2), DEFAULT_GRID_TOL);
        assert_eq!((r.minimum, r.argmin), (0.0, x(0.4, 0.2)));
    }

    #[test]
    fn fixed_z_result_is_feasible_and_consistent() {
        let mut rng = sample_rng(3, 0);
        for _ in 0..200 {
            let s = random_xstate(XStateClass::Entangled, &mut rng);
            let r = min_distance_fixed_z(&s, DEFAULT_GRID_TOL);
            assert!(r.argmin.v() >= r.argmin.coherence() - 1e-12);
            assert_eq!(r.argmin.z(), s.z());
            let direct = hs_norm(&(&r.argmin.to_matrix_unchecked() - &s.to_matrix_unchecked()));
            assert!((r.minimum - direct).abs() < 1e-10);
            assert!((r.minimum - hs_entanglement(&s)).abs() < 1e-6);
        }
    }

    #[test]
    fn free_z_examples() {
        let r = min_distance_free_z(&XState::singlet(), PsdConstraint::WithoutPsd, DEFAULT_FREE_TOL).unwrap();
        assert!((r.minimum - 1.0 / 3f64.sqrt()).abs() < 1e-6, "{}", r.minimum);
        assert!((r.argmin.v() - 1.0 / 6.0).abs() < 1e-6);
        assert!((r.argmin.z().re + 1.0 / 6.0).abs() < 1e-6);

        let s = x(0.1, 0.3);
        let r = min_distance_free_z(&s, PsdConstraint::WithoutPsd, DEFAULT_FREE_TOL).unwrap();
        assert!((r.minimum - free_z_stationary_point(&s).1).abs() < 1e-6);
        assert!((r.minimum - 0.23094010767585035).abs() < 1e-6);

        let r = min_distance_free_z(&x(0.3, 0.1), PsdConstraint::WithPsd, DEFAULT_FREE_TOL).unwrap();
        assert_eq!(r.minimum, 0.0);
    }

    #[test]
    fn free_z_never_exceeds_fixed_z() {
        let mut rng = sample_rng(9, 0);
        for _ in 0..50 {
            let s = random_xstate(XStateClass::Entangled, &mut rng);
            let fixed = min_distance_fixed_z(&s, DEFAULT_GRID_TOL).minimum;
            for c in [PsdConstraint::WithoutPsd, PsdConstraint::WithPsd] {
                let free = min_distance_free_z(&s, c, DEFAULT_FREE_TOL).unwrap();
                assert!(free.minimum <= fixed + 1e-9);
                assert!(free.argmin.v() >= free.argmin.coherence() - 1e-12);
                if c == PsdConstraint::WithPsd {
                    assert!(free.argmin.w() >= free.argmin.coherence() - 1e-12);
                }
            }
        }
    }

    #[test]
    fn triangle_projection() {
        let tri = cross_section(PsdConstraint::WithPsd);
        assert_eq!(project_on_triangle((0.2, 0.1), &tri), (0.2, 0.1));
        let p = project_on_triangle((0.0, 0.5), &tri);
        assert!((p.0 - 0.25).abs() < 1e-15 && (p.1 - 0.25).abs() < 1e-15);
        let p = project_on_triangle((0.6, -0.1), &tri);
        assert_eq!(p, (0.5, 0.0));
    }

    #[test]
    fn audit_examples() {
        let a = bell_operator(&XState::singlet()).unwrap();
        let audit = witness_audit(&a, 200, 1).unwrap();
        assert!(audit.min_fixed_z.abs() < 1e-12);
        assert!((audit.min_full_family + 1.0).abs() < 1e-12);

        let mut rng = sample_rng(5, 0);
        for _ in 0..50 {
            let s = random_xstate(XStateClass::Entangled, &mut rng);
            let a = bell_operator(&s).unwrap();
            assert!(witness_audit(&a, 50, 2).unwrap().min_fixed_z >= -1e-12);
        }
    }

    #[test]
    fn sampler_contracts() {
        let mut rng = sample_rng(42, 0);
        for _ in 0..1000 {
            let e = random_xstate(XStateClass::Entangled, &mut rng);
            assert!(e.v() < e.coherence() && e.is_psd());
            let s = random_xstate(XStateClass::Separable, &mut rng);
            assert!(!s.is_entangled() && s.is_psd());
        }
        let a: Vec<_> = (0..5).map(|_| random_xstate(XStateClass::Any, &mut sample_rng(42, 3))).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut r1 = sample_rng(42, 0);
        let mut r2 = sample_rng(42, 0);
        for _ in 0..10 {
            assert_eq!(random_xstate(XStateClass::Any, &mut r1), random_xstate(XStateClass::Any, &mut r2));
        }
    }

    #[test]
    fn two_spin_oracle_values() {
        assert!((two_spin_correlator(-1.0, 0.5) + 0.15374486474253127).abs() < 1e-15);
        assert!((two_spin_threshold(-1.0) - 0.9102392266268373).abs() < 1e-15);
        // at T* the pair sits on the boundary v = |z|
        let c = two_spin_correlator(-1.0, two_spin_threshold(-1.0));
        assert!((0.25 + c - (2.0 * c).abs()).abs() < 1e-15);
    }
}
