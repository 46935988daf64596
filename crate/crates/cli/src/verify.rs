//! Verification suite: SDP witnesses, the complementary-channel identity and
//! the covariance-distance formula on fixed grids.

use std::fmt::Write;

use gadc_core::bounds_classical::eps_cov;
use gadc_core::channels::QuantumChannel;
use gadc_core::gadc::{gadc_channel, gadc_complementary, lemma_map, GadcParams};
use gadc_core::sdp::{diamond_dist, verify_cbeta_witness, verify_emax_witness};

pub const WITNESS_GAMMAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const WITNESS_NS: [f64; 3] = [0.0, 0.25, 0.5];
pub const IDENTITY_TOL: f64 = 1e-10;
pub const EPS_COV_TOL: f64 = 1e-6;
pub const EPS_COV_POINTS: [(f64, f64); 12] = [
    (0.1, 0.0),
    (0.1, 0.3),
    (0.2, 0.9),
    (0.3, 0.5),
    (0.4, 0.25),
    (0.4, 0.5),
    (0.5, 0.1),
    (0.6, 0.75),
    (0.7, 0.0),
    (0.8, 0.4),
    (0.9, 1.0),
    (1.0, 0.2),
];

pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub struct Outcome {
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(s, "{}  {:<w$}  {}", tag, c.name, c.detail, w = width).ok();
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        writeln!(s, "{} checks, {} failed", self.checks.len(), failed).ok();
        s
    }
}

fn grid() -> impl Iterator<Item = GadcParams> {
    WITNESS_GAMMAS
        .iter()
        .flat_map(|&g| WITNESS_NS.iter().map(move |&n| GadcParams { gamma: g, n }))
}

fn point_label(p: GadcParams) -> String {
    format!("γ={} N={}", p.gamma, p.n)
}

/// Runs every check; `inject_fault` negates the expected ε_cov values.
pub fn run(inject_fault: bool) -> Outcome {
    let mut checks = Vec::new();

    for p in grid() {
        let (passed, detail) = match verify_cbeta_witness(p) {
            Ok(r) => (
                true,
                format!(
                    "target {:.12}, max violation {:.2e}",
                    r.target, r.max_violation
                ),
            ),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check {
            name: format!("beta/zeta witness {}", point_label(p)),
            passed,
            detail,
        });
    }

    for p in grid() {
        let (passed, detail) = match verify_emax_witness(p) {
            Ok(r) => (
                true,
                format!(
                    "target {:.12}{}, max violation {:.2e}",
                    r.target,
                    if r.entanglement_breaking { " (EB)" } else { "" },
                    r.max_violation
                ),
            ),
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check {
            name: format!("Emax/Rmax witness {}", point_label(p)),
            passed,
            detail,
        });
    }

    let mut worst = 0.0f64;
    let mut err = None;
    for p in grid() {
        let flipped = GadcParams {
            gamma: 1.0 - p.gamma,
            n: p.n,
        };
        match QuantumChannel::compose(&lemma_map(), &gadc_complementary(p)) {
            Ok(lhs) => worst = worst.max(lhs.choi().distance(&gadc_channel(flipped).choi())),
            Err(e) => err = Some(e.to_string()),
        }
    }
    checks.push(Check {
        name: "complementary identity W∘A^c = A_{1-γ,N}".into(),
        passed: err.is_none() && worst <= IDENTITY_TOL,
        detail: err.unwrap_or_else(|| {
            format!(
                "max Choi deviation {:.2e} (tol {:.0e})",
                worst, IDENTITY_TOL
            )
        }),
    });

    for &(g, n) in &EPS_COV_POINTS {
        let p = GadcParams { gamma: g, n };
        let mid = GadcParams { gamma: g, n: 0.5 };
        let expected = if inject_fault {
            -eps_cov(p)
        } else {
            eps_cov(p)
        };
        let (passed, detail) = match diamond_dist(&gadc_channel(p), &gadc_channel(mid)) {
            Ok(d) => {
                let dev = (0.5 * d - expected).abs();
                (
                    dev <= EPS_COV_TOL,
                    format!(
                        "sdp {:.9}, formula {:.9}, deviation {:.2e}",
                        0.5 * d,
                        expected,
                        dev
                    ),
                )
            }
            Err(e) => (false, e.to_string()),
        };
        checks.push(Check {
            name: format!("eps_cov {}", point_label(p)),
            passed,
            detail,
        });
    }

    Outcome { checks }
}
