//! Temperature sweeps of the thermal pair state.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{ThermalChain, ThermalPoint};
use crate::entanglement::{bell_operator, concurrence, gbi_violation, hs_entanglement};
use crate::error::{Error, Result};
use crate::xstate::ppt_check;

/// CSV column order of [`SweepRecord`].
pub const CSV_HEADER: &str = "temperature,czz,cxx,v,z_re,z_im,e_hs,b_gbi,concurrence,is_ppt";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Geometric,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" | "lin" => Ok(Spacing::Linear),
            "geometric" | "geom" | "log" => Ok(Spacing::Geometric),
            other => Err(Error::usage(format!("unknown spacing `{other}` (linear|geometric)"))),
        }
    }
}

/// One temperature of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub temperature: f64,
    pub czz: f64,
    pub cxx: f64,
    pub v: f64,
    pub z_re: f64,
    pub z_im: f64,
    pub e_hs: f64,
    pub b_gbi: f64,
    pub concurrence: f64,
    pub is_ppt: bool,
}

/// `steps` temperatures from `t_min` to `t_max` inclusive; a single step
/// yields just `t_min`.
pub fn temperatures(t_min: f64, t_max: f64, steps: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_min.is_finite()) {
        return Err(Error::usage(format!("t_min must be positive, got {t_min}")));
    }
    if steps == 0 {
        return Err(Error::usage("steps must be at least 1"));
    }
    if steps == 1 {
        return Ok(vec![t_min]);
    }
    if !(t_max >= t_min && t_max.is_finite()) {
        return Err(Error::usage(format!("t_max = {t_max} must be ≥ t_min = {t_min}")));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k == steps - 1 {
                return t_max;
            }
            let f = k as f64 / last;
            match spacing {
                Spacing::Linear => t_min + (t_max - t_min) * f,
                Spacing::Geometric => t_min * (t_max / t_min).powf(f),
            }
        })
        .collect())
}

/// Evaluates every temperature in parallel; rows come back in input order.
pub fn thermal_sweep(chain: &ThermalChain, temps: &[f64]) -> Result<Vec<SweepRecord>> {
    temps.par_iter().map(|&t| record(chain, t)).collect()
}

fn record(chain: &ThermalChain, t: f64) -> Result<SweepRecord> {
    let pair = chain.pair_state(ThermalPoint::new(t)?)?;
    let x = pair.xstate;
    let rho = x.to_matrix()?;
    let e_hs = hs_entanglement(&x);
    let b_gbi = match bell_operator(&x) {
        Ok(a) => gbi_violation(&x, &a)?,
        Err(_) => 0.0,
    };
    Ok(SweepRecord {
        temperature: t,
        czz: pair.statistics.czz,
        cxx: pair.statistics.cxx,
        v: x.v(),
        z_re: x.z().re,
        z_im: x.z().im,
        e_hs,
        b_gbi,
        concurrence: concurrence(&rho)?,
        is_ppt: ppt_check(&rho)?.is_ppt,
    })
}
