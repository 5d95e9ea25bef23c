//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Oracles here are closed forms written out independently of the
//! library code paths they check.

use std::time::{Duration, Instant};

use rand::Rng;
use xent_core::chain::{build_hamiltonian, gibbs_state, pair_statistics, threshold_temperature};
use xent_core::entanglement::{analyze, bell_operator, concurrence, gbi_violation, hs_distance, hs_entanglement};
use xent_core::linalg::{hs_norm, partial_trace_pair};
use xent_core::oracle::{min_distance_fixed_z, min_distance_free_z, random_xstate, sample_rng, DEFAULT_FREE_TOL};
use xent_core::xstate::ppt_check;
use xent_core::{verify, ChainSpec, Complex64, PsdConstraint, ThermalChain, ThermalPoint, XState, XStateClass};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

/// `E = 2·max(0, |z| − v)` straight from the matrix entries.
fn closed_form_e(x: &XState) -> f64 {
    let m = x.to_matrix_unchecked();
    let v = m.get(0, 0).re;
    let z = m.get(1, 2).norm();
    (2.0 * (z - v)).max(0.0)
}

fn samples(stream: u64, n: usize, class: XStateClass) -> Vec<XState> {
    (0..n as u64).map(|k| random_xstate(class, &mut sample_rng(SEED, stream + k))).collect()
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let (mut dev_b, mut dev_d) = (0.0f64, 0.0f64);
    for s in samples(1 << 32, 10_000, XStateClass::Entangled) {
        let e = hs_entanglement(&s);
        let b = gbi_violation(&s, &bell_operator(&s).unwrap()).unwrap();
        let d = min_distance_fixed_z(&s, 1e-7).minimum;
        dev_b = dev_b.max((e - b).abs());
        dev_d = dev_d.max((e - d).abs());
    }
    let t = start.elapsed();
    outcome(
        dev_b <= 1e-12 && dev_d <= 1e-6 && within(t, 10.0),
        format!("10000 states: max|E-B| {dev_b:.2e}, max|E-minD| {dev_d:.2e}, {:.2}s", t.as_secs_f64()),
    )
}

fn ac2() -> Outcome {
    let s = XState::new(0.0, Complex64::new(-0.5, 0.0)).unwrap();
    let r = analyze(&s).unwrap();
    let a = r.witness.as_ref().expect("singlet has a witness");
    let mut dev = [r.e_hs, r.b_gbi, r.concurrence].iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j && (i == 1 || i == 2) { -1.0 } else { 0.0 };
            dev = dev.max((a.matrix.get(i, j) - Complex64::new(want, 0.0)).norm());
        }
    }
    outcome(dev <= 1e-12, format!("E={} B={} C={} A=diag(0,-1,-1,0); max dev {dev:.2e}", r.e_hs, r.b_gbi, r.concurrence))
}

fn ac3() -> Outcome {
    let (mut dev_a, mut dev_r) = (0.0f64, 0.0f64);
    for s in samples(2 << 32, 1_000, XStateClass::Entangled) {
        let a = bell_operator(&s).unwrap();
        let r = s.z().norm();
        let diag = [1.0 - 2.0 * r, -2.0 * r, -2.0 * r, 1.0 - 2.0 * r];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { diag[i] } else { 0.0 };
                dev_a = dev_a.max((a.matrix.get(i, j) - Complex64::new(want, 0.0)).norm());
            }
        }
        let sm = s.to_matrix_unchecked();
        let rho0 = XState::new(s.z().norm(), s.z()).unwrap().to_matrix_unchecked();
        for i in 0..4 {
            for j in 0..4 {
                let shift = if i == j { a.shift } else { 0.0 };
                let rebuilt = a.matrix.get(i, j) * a.scale + shift + sm.get(i, j);
                dev_r = dev_r.max((rebuilt - rho0.get(i, j)).norm());
            }
        }
    }
    outcome(
        dev_a <= 1e-12 && dev_r <= 1e-12,
        format!("1000 witnesses: structure dev {dev_a:.2e}, reconstruction dev {dev_r:.2e}"),
    )
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let mut dev = 0.0f64;
    for s in samples(3 << 32, 10_000, XStateClass::Any) {
        let c = concurrence(&s.to_matrix().unwrap()).unwrap();
        dev = dev.max((c - closed_form_e(&s)).abs());
    }
    let t = start.elapsed();
    outcome(dev <= 1e-10 && within(t, 30.0), format!("10000 PSD states: max|C-E| {dev:.2e}, {:.2}s", t.as_secs_f64()))
}

fn ac5() -> Outcome {
    let mut states = samples(4 << 32, 10_000, XStateClass::Any);
    for i in 0..=50u32 {
        for j in 0..=(50 - i) {
            let (v, r) = (f64::from(i) * 0.01, f64::from(j) * 0.01);
            states.push(XState::new(v, Complex64::new(r, 0.0)).unwrap());
            states.push(XState::new(v, Complex64::new(0.0, -r)).unwrap());
        }
    }
    let disagree = states
        .iter()
        .filter(|x| {
            let closed = x.v() < x.z().norm();
            let ppt = ppt_check(&x.to_matrix().unwrap()).unwrap();
            closed != (ppt.min_eigenvalue < -1e-10)
        })
        .count();
    outcome(disagree == 0, format!("{} states incl. 0.01 grid: {disagree} disagreements", states.len()))
}

/// `H = −J S⃗₁·S⃗₂`: singlet at `3J/4`, triplet at `−J/4`; `⟨SᶻSᶻ⟩ = ⟨S⃗₁·S⃗₂⟩/3`.
fn two_spin_czz(j: f64, t: f64) -> f64 {
    let beta = 1.0 / t;
    let (es, et) = (0.75 * j, -0.25 * j);
    let e0 = es.min(et);
    let (ws, wt) = ((-beta * (es - e0)).exp(), 3.0 * (-beta * (et - e0)).exp());
    (-0.75 * ws + 0.25 * wt) / (ws + wt) / 3.0
}

fn ac6() -> Outcome {
    let spec = ChainSpec::open(2, -1.0).unwrap();
    let chain = ThermalChain::new(spec).unwrap();
    let mut dev = 0.0f64;
    for t in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let stats = chain.pair_state(ThermalPoint::new(t).unwrap()).unwrap().statistics;
        let want = two_spin_czz(-1.0, t);
        dev = dev.max((stats.czz - want).abs()).max((stats.cxx - want).abs()).max((stats.cyy - want).abs());
    }
    let t_star = threshold_temperature(&spec, 0.1, 5.0, 1e-9).unwrap().temperature;
    let t_dev = (t_star - 1.0 / 3f64.ln()).abs();
    let c = two_spin_czz(-1.0, 0.5);
    let oracle_e = (2.0 * ((2.0 * c).abs() - (0.25 + c))).max(0.0);
    let e = hs_entanglement(&chain.xstate(ThermalPoint::new(0.5).unwrap()).unwrap());
    let e_dev = (e - oracle_e).abs().max((oracle_e - 0.42244).abs());
    outcome(
        dev <= 1e-10 && t_dev <= 1e-6 && e_dev <= 1e-4,
        format!("correlator dev {dev:.2e}; T*={t_star:.9} (dev {t_dev:.2e}); E(0.5)={e:.6} oracle {oracle_e:.6}"),
    )
}

fn ac7() -> Outcome {
    let (mut violation, mut equality) = (f64::NEG_INFINITY, 0.0f64);
    for k in 0..100u64 {
        let mut rng = sample_rng(SEED, (5 << 32) + k);
        let s = random_xstate(XStateClass::Entangled, &mut rng);
        let b = gbi_violation(&s, &bell_operator(&s).unwrap()).unwrap();
        for _ in 0..100 {
            let rp = XState::new(rng.gen_range(s.z().norm()..=0.5), s.z()).unwrap();
            violation = violation.max(b - hs_distance(&rp, &s));
        }
        let rho0 = XState::new(s.z().norm(), s.z()).unwrap();
        let d0 = hs_norm(&(&rho0.to_matrix_unchecked() - &s.to_matrix_unchecked()));
        equality = equality.max((d0 - b).abs());
    }
    outcome(
        violation <= 1e-12 && equality <= 1e-10,
        format!("100x100 pairs: max(B - |rho'-sigma|) {violation:.2e}; |B - |rho0-sigma|| {equality:.2e}"),
    )
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let mut worst = [0.0f64; 3];
    for n in 2..=6 {
        let spec = ChainSpec::open(n, -1.0).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        for t in [0.2, 0.5, 1.0, 3.0] {
            let rho = gibbs_state(&h, ThermalPoint::new(t).unwrap()).unwrap();
            let stats = pair_statistics(&rho, 0, 1).unwrap();
            let reduced = partial_trace_pair(&rho, 0, 1).unwrap();
            let x = XState::new(0.25 + stats.czz, Complex64::new(2.0 * stats.cxx, 0.0)).unwrap();
            let gap = reduced.max_abs_diff(&x.to_matrix_unchecked());
            worst[0] = worst[0].max(stats.x_form_residual);
            worst[1] = worst[1].max((stats.cxx - stats.cyy).abs());
            worst[2] = worst[2].max(gap);
        }
    }
    let t = start.elapsed();
    outcome(
        worst.iter().all(|&w| w < 1e-10) && within(t, 60.0),
        format!(
            "n=2..6: X-form {:.2e}, isotropy {:.2e}, consistency {:.2e}, {:.2}s",
            worst[0],
            worst[1],
            worst[2],
            t.as_secs_f64()
        ),
    )
}

fn ac9() -> Outcome {
    let singlet = XState::singlet();
    let m = min_distance_free_z(&singlet, PsdConstraint::WithoutPsd, DEFAULT_FREE_TOL).unwrap();
    let want = 1.0 / 3f64.sqrt();
    let r = (2.0 * singlet.v() + singlet.z().norm()) / 3.0;
    let dev = (m.minimum - want).abs();
    let arg_dev = (m.argmin.v() - r).abs().max((m.argmin.z().norm() - r).abs());
    outcome(
        dev <= 1e-4 && arg_dev <= 1e-3,
        format!("free-z min {:.6} vs 1/sqrt3 {want:.6}; argmin v={:.6} vs r={r:.6}", m.minimum, m.argmin.v()),
    )
}

fn ac10() -> Outcome {
    let a = verify::run(verify::DEFAULT_SAMPLES, 7).unwrap();
    let b = verify::run(verify::DEFAULT_SAMPLES, 7).unwrap();
    let same = a.to_text() == b.to_text() && a.to_json() == b.to_json();
    outcome(same, format!("seed 7 twice: {} bytes text, identical = {same}", a.to_text().len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("AC1 central identity E=B=minD", ac1),
        ("AC2 singlet benchmark", ac2),
        ("AC3 witness structure", ac3),
        ("AC4 Wootters agreement", ac4),
        ("AC5 PPT equivalence", ac5),
        ("AC6 two-spin thermal physics", ac6),
        ("AC7 sandwich bound", ac7),
        ("AC8 chain scaling sanity", ac8),
        ("AC9 free-z diagnostic", ac9),
        ("AC10 determinism", ac10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        println!("{}: {name} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
