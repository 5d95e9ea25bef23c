//! Verification suite: closed forms against oracles and invariants.
//!
//! Checks tagged [`Level::Required`] decide the outcome; [`Level::Info`] rows
//! are diagnostics (free-z distances, full-family witness audit, witness
//! normalization) and never fail a run.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{ChainSpec, ThermalChain, ThermalPoint};
use crate::entanglement::{bell_operator, concurrence, gbi_violation, hs_entanglement, nearest_separable};
use crate::error::Result;
use crate::linalg::{hs_inner, hs_norm, HermitianMatrix};
use crate::oracle::{self, sample_rng, PsdConstraint, XStateClass};
use crate::xstate::{ppt_check, XState};

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Required,
    Info,
}

/// One row of the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub family: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub level: Level,
    #[serde(skip)]
    pub detail: String,
}

impl Check {
    fn new(check: &str, family: &str, expected: f64, observed: f64, tolerance: f64, level: Level) -> Self {
        let pass = (observed - expected).abs() <= tolerance;
        Check {
            check: check.into(),
            family: family.into(),
            expected,
            observed,
            tolerance,
            pass,
            level,
            detail: String::new(),
        }
    }

    /// A deviation that must stay at or below `tolerance`.
    fn deviation(check: &str, family: &str, observed: f64, tolerance: f64, n: usize) -> Self {
        let mut c = Self::new(check, family, 0.0, observed, tolerance, Level::Required);
        c.pass = observed <= tolerance;
        let rel = if c.pass { "<" } else { ">" };
        c.detail = format!("{n} samples, max dev {observed:.3e} {rel} {tolerance:e}");
        c
    }

    fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn required_checks_pass(&self) -> bool {
        self.checks.iter().filter(|c| c.level == Level::Required).all(|c| c.pass)
    }

    /// Human-readable table, one line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verify: {} samples, seed {}", self.samples, self.seed);
        for c in &self.checks {
            let status = match (c.level, c.pass) {
                (Level::Required, true) => "PASS",
                (Level::Required, false) => "FAIL",
                (Level::Info, _) => "INFO",
            };
            let _ = writeln!(out, "{} [{}]: {status} ({})", c.check, c.family, c.detail);
        }
        let required: Vec<_> = self.checks.iter().filter(|c| c.level == Level::Required).collect();
        let passed = required.iter().filter(|c| c.pass).count();
        let _ = writeln!(out, "summary: {passed}/{} required checks passed", required.len());
        out
    }

    /// JSON array of `{check, family, expected, observed, tolerance, pass, level}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.checks).expect("report serializes")
    }
}

// Disjoint ChaCha stream ranges per check.
const STREAM_IDENTITY: u64 = 1 << 32;
const STREAM_STRUCTURE: u64 = 2 << 32;
const STREAM_WOOTTERS: u64 = 3 << 32;
const STREAM_PPT: u64 = 4 << 32;
const STREAM_SANDWICH: u64 = 5 << 32;
const STREAM_AUDIT: u64 = 6 << 32;
const STREAM_NORMALIZATION: u64 = 7 << 32;
const STREAM_FREE: u64 = 8 << 32;

fn sample(seed: u64, stream: u64, class: XStateClass) -> XState {
    oracle::random_xstate(class, &mut sample_rng(seed, stream))
}

fn max3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])]
}

/// Runs every check with `samples` random states per sampled check.
pub fn run(samples: usize, seed: u64) -> Result<VerifyReport> {
    let n = samples.max(1);
    let mut checks = Vec::new();

    // E = B = D(σ, ρ₀), and E against the numeric fixed-z minimum.
    let dev = (0..n as u64)
        .into_par_iter()
        .map(|k| -> Result<[f64; 3]> {
            let s = sample(seed, STREAM_IDENTITY + k, XStateClass::Entangled);
            let e = hs_entanglement(&s);
            let a = bell_operator(&s)?;
            let b = gbi_violation(&s, &a)?;
            let rho0 = nearest_separable(&s).state;
            let d = hs_norm(&(&rho0.to_matrix_unchecked() - &s.to_matrix_unchecked()));
            let numeric = oracle::min_distance_fixed_z(&s, oracle::DEFAULT_GRID_TOL).minimum;
            Ok([(e - b).abs(), (e - d).abs(), (e - numeric).abs()])
        })
        .try_reduce(|| [0.0; 3], |a, b| Ok(max3(a, b)))?;
    checks.push(Check::deviation("E=B=minD identity", "fixed-z", dev[0].max(dev[1]), 1e-12, n));
    checks.push(Check::deviation("E vs numeric min D", "fixed-z", dev[2], 1e-6, n));

    // Singlet benchmark.
    let singlet = XState::singlet();
    let a = bell_operator(&singlet)?;
    let diag_dev = a
        .diagonal()
        .iter()
        .zip([0.0, -1.0, -1.0, 0.0])
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max);
    let singlet_dev = [
        (hs_entanglement(&singlet) - 1.0).abs(),
        (gbi_violation(&singlet, &a)? - 1.0).abs(),
        (concurrence(&singlet.to_matrix()?)? - 1.0).abs(),
        diag_dev,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    checks.push(
        Check::deviation("singlet benchmark", "fixed-z", singlet_dev, 1e-12, 1)
            .detail(format!("E = B = C = 1, A = diag(0, -1, -1, 0); max dev {singlet_dev:.3e}")),
    );

    // Witness structure and reconstruction.
    let dev = (0..n as u64)
        .into_par_iter()
        .map(|k| -> Result<[f64; 3]> {
            let s = sample(seed, STREAM_STRUCTURE + k, XStateClass::Entangled);
            let a = bell_operator(&s)?;
            let r = s.coherence();
            let want = HermitianMatrix::from_diagonal(&[1.0 - 2.0 * r, -2.0 * r, -2.0 * r, 1.0 - 2.0 * r])?;
            let rebuilt = &a.matrix.scaled(a.scale).shifted(a.shift) + &s.to_matrix_unchecked();
            let rho0 = nearest_separable(&s).state.to_matrix_unchecked();
            Ok([a.matrix.max_abs_diff(&want), rebuilt.max_abs_diff(&rho0), 0.0])
        })
        .try_reduce(|| [0.0; 3], |a, b| Ok(max3(a, b)))?;
    checks.push(Check::deviation("witness structure", "fixed-z", dev[0], 1e-12, n));
    checks.push(Check::deviation("witness reconstruction", "fixed-z", dev[1], 1e-12, n));

    // Concurrence from the spin-flipped spectrum.
    let dev = (0..n as u64)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let s = sample(seed, STREAM_WOOTTERS + k, XStateClass::Any);
            Ok((concurrence(&s.to_matrix()?)? - hs_entanglement(&s)).abs())
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    checks.push(Check::deviation("Wootters agreement", "psd", dev, 1e-10, n));

    // PPT verdict against the closed-form criterion.
    let (disagree, total) = ppt_disagreements(seed, n)?;
    checks.push(
        Check::new("PPT equivalence", "psd", 0.0, disagree as f64, 0.0, Level::Required)
            .detail(format!("{total} states incl. 0.01 grid, {disagree} disagreements")),
    );

    // Upper sandwich bound and equality at ρ₀.
    let m = n.min(100);
    let dev = (0..m as u64)
        .into_par_iter()
        .map(|k| -> Result<[f64; 3]> {
            let mut rng = sample_rng(seed, STREAM_SANDWICH + k);
            let s = oracle::random_xstate(XStateClass::Entangled, &mut rng);
            let a = bell_operator(&s)?;
            let b = gbi_violation(&s, &a)?;
            let sm = s.to_matrix_unchecked();
            let mut worst_upper = 0.0f64;
            let mut worst_lower = 0.0f64;
            for _ in 0..100 {
                let rp = XState::new(rng.gen_range(s.coherence()..=0.5), s.z())?.to_matrix_unchecked();
                let diff = &rp - &sm;
                let dist = hs_norm(&diff);
                worst_upper = worst_upper.max(b - dist);
                // min over the slice of ⟨ρ − σ, (ρ′ − σ)/‖ρ′ − σ‖⟩, attained at v_s = |z|
                let boundary = &XState::new(s.coherence(), s.z())?.to_matrix_unchecked() - &sm;
                worst_lower = worst_lower.max(hs_inner(&boundary, &diff)? / dist - b);
            }
            let at_rho0 = (hs_norm(&(&nearest_separable(&s).state.to_matrix_unchecked() - &sm)) - b).abs();
            Ok([worst_upper, worst_lower, at_rho0])
        })
        .try_reduce(|| [0.0; 3], |a, b| Ok(max3(a, b)))?;
    checks.push(
        Check::deviation("sandwich bound B <= |rho'-sigma|", "fixed-z", dev[0].max(dev[1]), 1e-12, m)
            .detail(format!("{m}×100 pairs, max violation {:.3e} < 1e-12", dev[0].max(dev[1]))),
    );
    checks.push(Check::deviation("sandwich equality at rho0", "fixed-z", dev[2], 1e-10, m));

    // Witness non-negative on the fixed-z slice.
    let m = n.min(1000);
    let worst = (0..m as u64)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let s = sample(seed, STREAM_AUDIT + k, XStateClass::Entangled);
            let audit = oracle::witness_audit(&bell_operator(&s)?, 32, seed ^ k)?;
            Ok(audit.min_fixed_z)
        })
        .try_reduce(|| f64::INFINITY, |a, b| Ok(a.min(b)))?;
    let mut c = Check::new("witness audit min <rho,A>", "fixed-z", 0.0, worst, 1e-10, Level::Required);
    c.pass = worst >= -1e-10;
    checks.push(c.detail(format!("{m} witnesses, smallest <rho,A> {worst:.3e} >= -1e-10")));

    checks.extend(thermal_checks()?);
    checks.extend(info_checks(seed, n)?);

    Ok(VerifyReport { samples: n, seed, checks })
}

fn ppt_disagreements(seed: u64, n: usize) -> Result<(usize, usize)> {
    let mut grid = Vec::new();
    for i in 0..=50u32 {
        for j in 0..=(50 - i) {
            grid.push(XState::real(f64::from(i) * 0.01, f64::from(j) * 0.01)?);
        }
    }
    let check = |x: &XState| -> Result<usize> {
        let verdict = ppt_check(&x.to_matrix()?)?;
        Ok(usize::from(verdict.is_ppt == x.is_entangled()))
    };
    let from_grid = grid.par_iter().map(check).try_reduce(|| 0, |a, b| Ok(a + b))?;
    let from_samples = (0..n as u64)
        .into_par_iter()
        .map(|k| check(&sample(seed, STREAM_PPT + k, XStateClass::Any)))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok((from_grid + from_samples, grid.len() + n))
}

fn thermal_checks() -> Result<Vec<Check>> {
    let chain = ThermalChain::new(ChainSpec::open(2, -1.0)?)?;
    let mut dev = 0.0f64;
    for t in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let stats = chain.pair_state(ThermalPoint::new(t)?)?.statistics;
        let want = oracle::two_spin_correlator(-1.0, t);
        dev = dev.max((stats.czz - want).abs()).max((stats.cxx - want).abs());
    }
    let corr = Check::deviation("two-spin correlators", "chain n=2", dev, 1e-10, 5)
        .detail(format!("T in {{0.1, 0.5, 1, 2, 10}}, max dev {dev:.3e}"));

    let t_star = crate::chain::threshold_temperature(chain.spec(), 0.1, 5.0, 1e-9)?.temperature;
    let threshold = Check::new(
        "threshold temperature",
        "chain n=2",
        oracle::two_spin_threshold(-1.0),
        t_star,
        1e-6,
        Level::Required,
    );
    let threshold = {
        let d = format!("T* = {t_star:.9}, 1/ln 3 = {:.9}", threshold.expected);
        threshold.detail(d)
    };

    let c = oracle::two_spin_correlator(-1.0, 0.5);
    let want = (2.0 * ((2.0 * c).abs() - (0.25 + c))).max(0.0);
    let got = hs_entanglement(&chain.xstate(ThermalPoint::new(0.5)?)?);
    let e = Check::new("thermal E at T=0.5", "chain n=2", want, got, 1e-4, Level::Required)
        .detail(format!("E = {got:.6}, oracle {want:.6}"));
    Ok(vec![corr, threshold, e])
}

fn info_checks(seed: u64, n: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let singlet = XState::singlet();
    let fixed = oracle::min_distance_fixed_z(&singlet, oracle::DEFAULT_GRID_TOL).minimum;
    let free = oracle::min_distance_free_z(&singlet, PsdConstraint::WithoutPsd, oracle::DEFAULT_FREE_TOL)?;
    let (r, want) = oracle::free_z_stationary_point(&singlet);
    out.push(
        Check::new("free-z singlet distance", "free-z", want, free.minimum, 1e-4, Level::Info).detail(format!(
            "fixed-z distance {fixed:.6}, free-z {:.6} at v = {:.6} (stationary r = {r:.6})",
            free.minimum,
            free.argmin.v()
        )),
    );

    let s = XState::real(0.1, 0.3)?;
    for (constraint, family) in [
        (PsdConstraint::WithoutPsd, "free-z"),
        (PsdConstraint::WithPsd, "psd-constrained-free-z"),
    ] {
        let free = oracle::min_distance_free_z(&s, constraint, oracle::DEFAULT_FREE_TOL)?;
        let want = oracle::free_z_stationary_point(&s).1;
        out.push(
            Check::new("free-z distance X(0.1, 0.3)", family, want, free.minimum, 1e-4, Level::Info)
                .detail(format!("fixed-z 0.4, {family} {:.6}, (2/sqrt3)(|z|-v) = {want:.6}", free.minimum)),
        );
    }

    let audit = oracle::witness_audit(&bell_operator(&singlet)?, 1000, seed)?;
    out.push(
        Check::new("witness audit min <rho,A> (singlet)", "psd-separable", -1.0, audit.min_full_family, 1e-12, Level::Info)
            .detail(format!(
                "fixed-z min {:.3e}, full separable family min {:.6}",
                audit.min_fixed_z, audit.min_full_family
            )),
    );

    let m = n.min(1000);
    let (worst, alpha_spread) = (0..m as u64)
        .into_par_iter()
        .map(|k| -> Result<(f64, f64)> {
            let s = sample(seed, STREAM_NORMALIZATION + k, XStateClass::Entangled);
            let (alpha, norm) = bell_operator(&s)?.normalization();
            Ok(((norm - 1.0).abs(), (alpha - (0.5 - 2.0 * s.coherence())).abs()))
        })
        .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?;
    out.push(
        Check::new("witness norm min_alpha |A - alpha 1|", "fixed-z", 1.0, 1.0 + worst, 1e-12, Level::Info)
            .detail(format!("{m} witnesses, |A - alpha 1| = 1 within {worst:.3e}; alpha = 1/2 - 2|z| within {alpha_spread:.3e}")),
    );

    let m = n.min(200);
    let gap = (0..m as u64)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let s = sample(seed, STREAM_FREE + k, XStateClass::Entangled);
            let fixed = oracle::min_distance_fixed_z(&s, oracle::DEFAULT_GRID_TOL).minimum;
            let free = oracle::min_distance_free_z(&s, PsdConstraint::WithoutPsd, oracle::DEFAULT_FREE_TOL)?;
            Ok(free.minimum - fixed)
        })
        .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))?;
    let mut c = Check::new("free-z <= fixed-z", "free-z", 0.0, gap, 1e-9, Level::Info);
    c.pass = gap <= 1e-9;
    out.push(c.detail(format!("{m} states, max(free - fixed) {gap:.3e}")));

    // Ratio of the free-z to fixed-z distance is 1/sqrt3 for every state.
    let ratio = {
        let s = sample(seed, STREAM_FREE, XStateClass::Entangled);
        let free = oracle::min_distance_free_z(&s, PsdConstraint::WithoutPsd, oracle::DEFAULT_FREE_TOL)?;
        free.minimum / hs_entanglement(&s)
    };
    out.push(
        Check::new("free-z / fixed-z ratio", "free-z", 1.0 / 3f64.sqrt(), ratio, 1e-4, Level::Info)
            .detail(format!("ratio {ratio:.6}, 1/sqrt3 = {:.6}", 1.0 / 3f64.sqrt())),
    );
    Ok(out)
}
