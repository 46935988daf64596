//! Grid sweeps: bound evaluation on a (γ, N) grid with CSV output.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use gadc_core::bounds_classical::{
    c_beta_analytic, c_cov_ub, c_eb_ub_with, c_fil_ub, holevo_gadc, mutual_info_gadc,
};
use gadc_core::bounds_quantum::{
    coherent_info_lb, dp_bounds, eps_adeg_ub_with, eps_close_deg_ubs_with, eps_deg_ubs_with,
    q_rmg_ub, rains_ub_seeded,
};
use gadc_core::bounds_twoway::{
    cov_twoway_ub, esq_ub, half_mi_ub, max_rains_analytic, reverse_coherent_lb, SquashVariant,
    SquashedBoundConfig,
};
use gadc_core::error::{Error, Result};
use gadc_core::gadc::GadcParams;
use gadc_core::sdp::SolverOptions;

use crate::format::sig;
use crate::BoundSet;

/// Offset used for formulas whose domain excludes N ∈ {0, 1}.
pub const ENDPOINT_CLAMP: f64 = 1e-9;

pub const HEADER: [&str; 7] = [
    "gamma",
    "n",
    "bound_name",
    "kind",
    "value_bits",
    "status",
    "runtime_ms",
];

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub set: BoundSet,
    pub gammas: Vec<f64>,
    pub ns: Vec<f64>,
    pub jobs: usize,
    pub solver: SolverOptions,
    pub seed: u64,
}

impl SweepSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        set: BoundSet,
        gamma_min: f64,
        gamma_max: f64,
        gamma_steps: usize,
        n_list: &str,
        jobs: usize,
        tol_sdp: f64,
        seed: u64,
    ) -> std::result::Result<Self, String> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !unit(gamma_min) || !unit(gamma_max) || gamma_min > gamma_max {
            return Err(format!(
                "need 0 ≤ gamma-min ≤ gamma-max ≤ 1, got [{}, {}]",
                gamma_min, gamma_max
            ));
        }
        if gamma_steps < 2 {
            return Err(format!(
                "gamma-steps must be at least 2, got {}",
                gamma_steps
            ));
        }
        if !(tol_sdp > 0.0 && tol_sdp < 1.0) {
            return Err(format!("tol-sdp must lie in (0, 1), got {}", tol_sdp));
        }
        let mut ns = Vec::new();
        for tok in n_list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let n: f64 = tok.parse().map_err(|_| format!("bad N value '{}'", tok))?;
            if !unit(n) {
                return Err(format!("N values must lie in [0, 1], got {}", n));
            }
            ns.push(n);
        }
        if ns.is_empty() {
            return Err("n-list is empty".into());
        }
        let step = (gamma_max - gamma_min) / (gamma_steps - 1) as f64;
        let gammas = (0..gamma_steps)
            .map(|i| {
                if i + 1 == gamma_steps {
                    gamma_max
                } else {
                    gamma_min + step * i as f64
                }
            })
            .collect();
        Ok(Self {
            set,
            gammas,
            ns,
            jobs,
            solver: SolverOptions {
                gap_tol: tol_sdp,
                ..SolverOptions::precise()
            },
            seed,
        })
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.gammas
            .iter()
            .flat_map(|&g| self.ns.iter().map(move |&n| (g, n)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Clamped,
    Domain,
    Error,
    Fallback,
}

impl Kind {
    fn as_str(self) -> &'static str {
        match self {
            Kind::Lower => "lower",
            Kind::Upper => "upper",
        }
    }
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Clamped => "clamped",
            Status::Domain => "domain",
            Status::Error => "error",
            Status::Fallback => "fallback",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundRecord {
    pub gamma: f64,
    pub n: f64,
    pub bound_name: &'static str,
    pub kind: Kind,
    pub value_bits: f64,
    pub status: Status,
    pub runtime_ms: f64,
}

impl BoundRecord {
    pub fn fields(&self) -> [String; 7] {
        [
            sig(self.gamma),
            sig(self.n),
            self.bound_name.to_string(),
            self.kind.as_str().to_string(),
            sig(self.value_bits),
            self.status.as_str().to_string(),
            format!("{:.3}", self.runtime_ms),
        ]
    }
}

struct Point {
    gamma: f64,
    n: f64,
    rows: Vec<BoundRecord>,
}

impl Point {
    /// Times `f` and pushes one row per returned (name, kind, value, status).
    fn eval<F>(&mut self, names: &[(&'static str, Kind)], f: F)
    where
        F: FnOnce() -> Result<(Vec<f64>, Status)>,
    {
        let t0 = Instant::now();
        let out = f();
        let ms = t0.elapsed().as_secs_f64() * 1e3;
        for (i, &(name, kind)) in names.iter().enumerate() {
            let (value, status) = match &out {
                Ok((v, s)) => (v[i], *s),
                Err(Error::Domain(_)) => (f64::NAN, Status::Domain),
                Err(_) => (f64::NAN, Status::Error),
            };
            self.rows.push(BoundRecord {
                gamma: self.gamma,
                n: self.n,
                bound_name: name,
                kind,
                value_bits: value,
                status,
                runtime_ms: ms,
            });
        }
    }
}

fn ok(v: f64) -> Result<(Vec<f64>, Status)> {
    Ok((vec![v], Status::Ok))
}

fn classical(pt: &mut Point, p: GadcParams, spec: &SweepSpec) {
    use Kind::*;
    pt.eval(&[("chi", Lower)], || {
        let h = holevo_gadc(p)?;
        let s = if h.fallback {
            Status::Fallback
        } else {
            Status::Ok
        };
        Ok((vec![h.chi], s))
    });
    pt.eval(&[("c_beta", Upper)], || ok(c_beta_analytic(p)));
    pt.eval(&[("c_cov", Upper)], || ok(c_cov_ub(p)?));
    pt.eval(&[("c_e", Upper)], || ok(mutual_info_gadc(p)?));
    pt.eval(&[("c_eb", Upper)], || {
        ok(c_eb_ub_with(p, &spec.solver, spec.seed)?.value)
    });
    pt.eval(&[("c_fil", Upper)], || {
        if p.n > 0.0 && p.n < 1.0 {
            return ok(c_fil_ub(p)?);
        }
        let n = p.n.clamp(ENDPOINT_CLAMP, 1.0 - ENDPOINT_CLAMP);
        Ok((
            vec![c_fil_ub(GadcParams::new(p.gamma, n)?)?],
            Status::Clamped,
        ))
    });
}

fn quantum(pt: &mut Point, p: GadcParams, spec: &SweepSpec) {
    use Kind::*;
    pt.eval(&[("q_ci", Lower)], || ok(coherent_info_lb(p)?));
    pt.eval(
        &[
            ("q_dp1", Upper),
            ("q_dp2", Upper),
            ("q_dp3", Upper),
            ("q_dp4", Upper),
        ],
        || Ok((dp_bounds(p)?.to_vec(), Status::Ok)),
    );
    pt.eval(&[("q_deg1", Upper), ("p_deg1", Upper)], || {
        let d = eps_deg_ubs_with(p, &spec.solver, spec.seed)?;
        Ok((vec![d.q_ub, d.p_ub], Status::Ok))
    });
    pt.eval(&[("q_deg2", Upper), ("p_deg2", Upper)], || {
        let d = eps_close_deg_ubs_with(p, &spec.solver)?;
        Ok((vec![d.q_ub, d.p_ub], Status::Ok))
    });
    pt.eval(&[("q_adeg", Upper)], || {
        ok(eps_adeg_ub_with(p, &spec.solver)?)
    });
    pt.eval(&[("q_rains", Upper)], || {
        ok(rains_ub_seeded(p, spec.seed)?.value)
    });
    pt.eval(&[("q_rmg", Upper)], || ok(q_rmg_ub(p.thermal())?));
}

fn twoway(pt: &mut Point, p: GadcParams) {
    use Kind::*;
    pt.eval(&[("q2_rci", Lower)], || ok(reverse_coherent_lb(p)?));
    pt.eval(&[("q2_mi", Upper)], || ok(half_mi_ub(p)?));
    for (name, variant) in [
        ("q2_sq1", SquashVariant::One),
        ("q2_sq2", SquashVariant::Two),
    ] {
        pt.eval(&[(name, Upper)], || {
            ok(esq_ub(p, &SquashedBoundConfig::standard(variant))?.value)
        });
    }
    pt.eval(&[("q2_max_rains", Upper)], || ok(max_rains_analytic(p)?));
    pt.eval(&[("q2_cov", Upper)], || ok(cov_twoway_ub(p)?));
}

fn evaluate_point(gamma: f64, n: f64, spec: &SweepSpec) -> Vec<BoundRecord> {
    let mut pt = Point {
        gamma,
        n,
        rows: Vec::new(),
    };
    let p = GadcParams::new(gamma, n).expect("grid points are validated by SweepSpec");
    if matches!(spec.set, BoundSet::Classical | BoundSet::All) {
        classical(&mut pt, p, spec);
    }
    if matches!(spec.set, BoundSet::Quantum | BoundSet::All) {
        quantum(&mut pt, p, spec);
    }
    if matches!(spec.set, BoundSet::Twoway | BoundSet::All) {
        twoway(&mut pt, p);
    }
    pt.rows.sort_by(|a, b| a.bound_name.cmp(b.bound_name));
    pt.rows
}

/// All records in γ-major, N, bound_name order.
pub fn run(spec: &SweepSpec) -> Result<Vec<BoundRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::Solver(format!("thread pool: {}", e)))?;
    let points = spec.points();
    let per_point: Vec<Vec<BoundRecord>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(g, n)| evaluate_point(g, n, spec))
            .collect()
    });
    Ok(per_point.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(records: &[BoundRecord], w: W) -> csv::Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    wtr.write_record(HEADER)?;
    for r in records {
        wtr.write_record(r.fields())?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn run_to(spec: &SweepSpec, out: Option<&Path>) -> std::result::Result<(), String> {
    let records = run(spec).map_err(|e| e.to_string())?;
    let res = match out {
        Some(path) => {
            let f = File::create(path).map_err(|e| format!("{}: {}", path.display(), e))?;
            write_csv(&records, io::BufWriter::new(f))
        }
        None => write_csv(&records, io::stdout().lock()),
    };
    res.map_err(|e| e.to_string())?;
    let failed = records.iter().filter(|r| r.status == Status::Error).count();
    if failed > 0 {
        return Err(format!(
            "{} bound evaluations failed; see rows with status=error",
            failed
        ));
    }
    Ok(())
}
