//! Single-point structural report.

use std::fmt::Write;

use gadc_core::bounds_classical::{c_beta_analytic, holevo_gadc, mutual_info_gadc};
use gadc_core::bounds_quantum::coherent_info_lb;
use gadc_core::bounds_twoway::max_rains_analytic;
use gadc_core::error::Result;
use gadc_core::gadc::{is_antidegradable, is_entanglement_breaking, serial_decompose, GadcParams};

pub fn report(gamma: f64, n: f64) -> Result<String> {
    let p = GadcParams::new(gamma, n)?;
    let eb = is_entanglement_breaking(p);
    let t = p.thermal();
    let dec = serial_decompose(p);
    let mut s = String::new();
    let w = &mut s;
    writeln!(w, "gamma: {}", gamma).ok();
    writeln!(w, "N: {}", n).ok();
    writeln!(w, "entanglement-breaking: {}", eb.entanglement_breaking).ok();
    writeln!(w, "eb-margin (det of partial transpose): {:.6e}", eb.margin).ok();
    writeln!(w, "anti-degradable: {}", is_antidegradable(p)).ok();
    writeln!(w, "thermal: eta = {}, N = {}", t.eta, t.n).ok();
    for (label, f) in [
        ("decomposition 1", dec.first),
        ("decomposition 2", dec.second),
    ] {
        writeln!(
            w,
            "{}: A[{:.6}, {}] o A[{:.6}, {}]{}",
            label,
            f.outer.gamma,
            f.outer.n,
            f.inner.gamma,
            f.inner.n,
            if f.degenerate { " (degenerate)" } else { "" }
        )
        .ok();
    }
    writeln!(w, "holevo chi: {:.9}", holevo_gadc(p)?.chi).ok();
    writeln!(w, "C_beta: {:.9}", c_beta_analytic(p)).ok();
    writeln!(w, "C_E: {:.9}", mutual_info_gadc(p)?).ok();
    writeln!(w, "Q coherent-info LB: {:.9}", coherent_info_lb(p)?).ok();
    writeln!(w, "max-Rains: {:.9}", max_rains_analytic(p)?).ok();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eb_point() {
        assert!(report(0.9, 0.5)
            .unwrap()
            .contains("entanglement-breaking: true"));
    }

    #[test]
    fn antidegradable_point() {
        let r = report(0.5, 0.2).unwrap();
        assert!(r.contains("anti-degradable: true"));
        assert!(r.contains("entanglement-breaking: false"));
    }

    #[test]
    fn identity_point() {
        let r = report(0.0, 0.0).unwrap();
        assert!(r.contains("holevo chi: 1.000000000"));
        assert!(r.contains("C_E: 2.000000000"));
        assert!(r.contains("Q coherent-info LB: 1.000000000"));
        assert!(r.contains("max-Rains: 1.000000000"));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(report(1.5, 0.2).is_err());
    }
}
