use std::fmt::Write as _;

use xent_core::entanglement::EntanglementReport;
use xent_core::sweep::CSV_HEADER;
use xent_core::{SweepRecord, XState};

/// Seventeen significant digits, locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv(rows: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [r.temperature, r.czz, r.cxx, r.v, r.z_re, r.z_im, r.e_hs, r.b_gbi, r.concurrence];
        let cells: Vec<String> = fields.iter().map(|&x| num(x)).collect();
        let _ = writeln!(out, "{},{}", cells.join(","), r.is_ppt);
    }
    out
}

fn complex(x: &XState) -> String {
    let z = x.z();
    format!("{}{:+}i", z.re, z.im)
}

pub fn state_text(x: &XState, r: &EntanglementReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "state        v = {}, z = {} (w = {})", x.v(), complex(x), x.w());
    let _ = writeln!(out, "entangled    {}", x.is_entangled());
    let _ = writeln!(out, "e_hs         {}", r.e_hs);
    let _ = writeln!(out, "b_gbi        {}", r.b_gbi);
    let _ = writeln!(out, "concurrence  {}", r.concurrence);
    let _ = writeln!(out, "nearest      v = {}, z = {}", r.nearest.v(), complex(&r.nearest));
    match &r.witness {
        Some(a) => {
            let d = a.diagonal();
            let _ = writeln!(
                out,
                "witness      diag [{}, {}, {}, {}], shift {}, scale {}",
                d[0], d[1], d[2], d[3], a.shift, a.scale
            );
        }
        None => {
            let _ = writeln!(out, "witness      none (state is separable)");
        }
    }
    out
}
