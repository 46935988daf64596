//! Dense primal-dual interior-point method for linear matrix inequalities.
//!
//! Problem pair, over block-diagonal real symmetric matrices:
//!
//! ```text
//! (D)  min  cᵀy        s.t.  Z = F₀ + Σ yᵢ Fᵢ ⪰ 0
//! (P)  max  −⟨F₀, X⟩   s.t.  ⟨Fᵢ, X⟩ = cᵢ,  X ⪰ 0
//! ```
//!
//! Infeasible-start path following with the HKM search direction and
//! Mehrotra predictor-corrector steps.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen, LU};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub feas_tol: f64,
    /// Relative gap: |primal − dual| ≤ gap_tol·(1 + |primal|).
    pub gap_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feas_tol: 1e-8,
            gap_tol: 1e-7,
            max_iter: 200,
        }
    }
}

impl SolverOptions {
    pub fn with_gap(gap_tol: f64) -> Self {
        Self {
            gap_tol,
            ..Self::default()
        }
    }

    /// Tolerances used by the library's channel programs.
    pub fn precise() -> Self {
        Self {
            feas_tol: 1e-9,
            gap_tol: 1e-8,
            max_iter: 200,
        }
    }
}

/// F₀ + Σ yᵢ Fᵢ ⪰ 0 with Fᵢ stored sparsely by block.
#[derive(Debug, Clone)]
pub struct Lmi {
    pub block_dims: Vec<usize>,
    pub f0: Vec<DMatrix<f64>>,
    pub fs: Vec<Vec<(usize, DMatrix<f64>)>>,
    pub c: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LmiSolution {
    pub status: Status,
    pub y: Vec<f64>,
    pub x: Vec<DMatrix<f64>>,
    pub z: Vec<DMatrix<f64>>,
    /// cᵀy.
    pub primal: f64,
    /// −⟨F₀, X⟩.
    pub dual: f64,
    pub iterations: usize,
    pub gap: f64,
}

fn dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn inverse_pd(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    Cholesky::new(m.clone()).map(|c| symmetrize(&c.inverse()))
}

/// Largest α with X + α·dX ⪰ 0 (∞ when dX ⪰ 0).
fn max_step(x: &DMatrix<f64>, dx: &DMatrix<f64>) -> f64 {
    let Some(ch) = Cholesky::new(x.clone()) else {
        return 0.0;
    };
    let l = ch.l();
    let a = l.solve_lower_triangular(dx).unwrap_or_else(|| dx.clone());
    let w = l.solve_lower_triangular(&a.transpose()).unwrap_or(a);
    let lmin = SymmetricEigen::new(symmetrize(&w)).eigenvalues.min();
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn min_eig(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(symmetrize(m)).eigenvalues.min()
}

impl Lmi {
    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    /// F₀ + Σ yᵢ Fᵢ.
    pub fn evaluate(&self, y: &[f64]) -> Vec<DMatrix<f64>> {
        let mut out = self.f0.clone();
        for (yi, fi) in y.iter().zip(&self.fs) {
            for (b, m) in fi {
                out[*b] += m * *yi;
            }
        }
        out
    }

    fn linear(&self, y: &[f64]) -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> = self
            .block_dims
            .iter()
            .map(|&d| DMatrix::zeros(d, d))
            .collect();
        for (yi, fi) in y.iter().zip(&self.fs) {
            for (b, m) in fi {
                out[*b] += m * *yi;
            }
        }
        out
    }

    /// (⟨Fᵢ, W⟩)ᵢ for per-block matrices W.
    fn adjoint(&self, w: &[DMatrix<f64>]) -> DVector<f64> {
        DVector::from_iterator(
            self.fs.len(),
            self.fs
                .iter()
                .map(|fi| fi.iter().map(|(b, m)| dot(m, &w[*b])).sum()),
        )
    }
}

fn blocks_dot(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| dot(x, y)).sum()
}

fn blocks_norm(a: &[DMatrix<f64>]) -> f64 {
    a.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

enum Factor {
    Chol(Cholesky<f64, nalgebra::Dyn>),
    Lu(LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl Factor {
    fn solve(&self, b: &DVector<f64>) -> Option<DVector<f64>> {
        match self {
            Factor::Chol(c) => Some(c.solve(b)),
            Factor::Lu(l) => l.solve(b),
        }
    }
}

struct Direction {
    dx: Vec<DMatrix<f64>>,
    dy: DVector<f64>,
    dz: Vec<DMatrix<f64>>,
}

/// Solve the LMI pair. With no variables the feasibility of F₀ is reported.
pub fn solve_lmi(p: &Lmi, opts: &SolverOptions) -> LmiSolution {
    let m = p.num_vars();
    let nblocks = p.block_dims.len();
    let n: usize = p.block_dims.iter().sum();
    if m == 0 {
        let feasible =
            p.f0.iter()
                .all(|b| b.nrows() == 0 || min_eig(b) >= -opts.feas_tol);
        return LmiSolution {
            status: if feasible {
                Status::Optimal
            } else {
                Status::Infeasible
            },
            y: vec![],
            x: p.block_dims.iter().map(|&d| DMatrix::zeros(d, d)).collect(),
            z: p.f0.clone(),
            primal: 0.0,
            dual: 0.0,
            iterations: 0,
            gap: 0.0,
        };
    }

    let c = DVector::from_column_slice(&p.c);
    let norm_c = c.norm();
    let norm_f0 = blocks_norm(&p.f0);
    let fnorms: Vec<f64> =
        p.fs.iter()
            .map(|fi| fi.iter().map(|(_, m)| m.norm_squared()).sum::<f64>().sqrt())
            .collect();

    // Vars touching each block, for the Schur complement.
    let mut by_block: Vec<Vec<(usize, usize)>> = vec![vec![]; nblocks];
    for (i, fi) in p.fs.iter().enumerate() {
        for (k, (b, _)) in fi.iter().enumerate() {
            by_block[*b].push((i, k));
        }
    }

    let sqrt_n = (n as f64).sqrt();
    let xi = (0..m)
        .map(|i| (1.0 + p.c[i].abs()) / (1.0 + fnorms[i]))
        .fold(10f64, |a, v| a.max(sqrt_n * v));
    let eta = fnorms
        .iter()
        .copied()
        .fold(10f64.max(sqrt_n).max(norm_f0), f64::max);
    let mut x: Vec<DMatrix<f64>> = p
        .block_dims
        .iter()
        .map(|&d| DMatrix::identity(d, d) * xi)
        .collect();
    let mut z: Vec<DMatrix<f64>> = p
        .block_dims
        .iter()
        .map(|&d| DMatrix::identity(d, d) * eta)
        .collect();
    let mut y = DVector::<f64>::zeros(m);

    let mut status = Status::MaxIter;
    let mut iterations = 0;
    let mut best: Option<Best> = None;
    let mut since_best = 0;

    for it in 0..=opts.max_iter {
        iterations = it;
        let fy = p.evaluate(y.as_slice());
        let rd: Vec<DMatrix<f64>> = fy.iter().zip(&z).map(|(f, zz)| f - zz).collect();
        let rp = &c - p.adjoint(&x);
        let pobj = c.dot(&y);
        let dobj = -blocks_dot(&p.f0, &x);
        let pinf = blocks_norm(&rd) / (1.0 + norm_f0);
        let dinf = rp.norm() / (1.0 + norm_c);
        let relgap = (pobj - dobj).abs() / (1.0 + pobj.abs());
        let merit = (pinf / opts.feas_tol)
            .max(dinf / opts.feas_tol)
            .max(relgap / opts.gap_tol);
        if best.as_ref().is_none_or(|b| merit < b.merit) {
            best = Some(Best {
                merit,
                x: x.clone(),
                y: y.clone(),
                z: z.clone(),
                pobj,
                dobj,
            });
            since_best = 0;
        } else {
            since_best += 1;
        }
        if merit <= 1.0 {
            status = Status::Optimal;
            break;
        }
        let mu = blocks_dot(&x, &z) / n as f64;
        if since_best >= 10 || mu < 1e-15 * (1.0 + pobj.abs()) {
            break;
        }
        // Certificates of infeasibility along a diverging iterate.
        let trx: f64 = x.iter().map(|b| b.trace()).sum();
        if trx > 1e8 && dinf * (1.0 + norm_c) / trx < 1e-8 && dobj / trx > 1e-8 {
            status = Status::Infeasible;
            break;
        }
        let ynorm = y.norm();
        if ynorm > 1e8 && pobj / ynorm < -1e-8 {
            let lin = p.linear(y.as_slice());
            if lin.iter().all(|b| min_eig(b) / ynorm > -1e-8) {
                status = Status::Unbounded;
                break;
            }
        }
        if it == opts.max_iter {
            break;
        }

        let Some(zinv) = z.iter().map(inverse_pd).collect::<Option<Vec<_>>>() else {
            break;
        };

        // Schur complement M_ij = Tr(Fᵢ X Fⱼ Z⁻¹).
        let mut schur = DMatrix::<f64>::zeros(m, m);
        for b in 0..nblocks {
            let entries = &by_block[b];
            let g: Vec<DMatrix<f64>> = entries
                .iter()
                .map(|&(i, k)| &x[b] * &p.fs[i][k].1 * &zinv[b])
                .collect();
            for (a, &(i, _)) in entries.iter().enumerate() {
                for &(j, kj) in entries.iter() {
                    if j < i {
                        continue;
                    }
                    schur[(i, j)] += dot(&p.fs[j][kj].1, &g[a]);
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                schur[(i, j)] = schur[(j, i)];
            }
        }
        let factor = match Cholesky::new(schur.clone()) {
            Some(ch) => Factor::Chol(ch),
            None => {
                let ridge = 1e-13 * schur.diagonal().amax().max(1e-300);
                let mut reg = schur.clone();
                for i in 0..m {
                    reg[(i, i)] += ridge;
                }
                match Cholesky::new(reg) {
                    Some(ch) => Factor::Chol(ch),
                    None => Factor::Lu(LU::new(schur.clone())),
                }
            }
        };

        let xrdz: Vec<DMatrix<f64>> = (0..nblocks).map(|b| &x[b] * &rd[b] * &zinv[b]).collect();
        let direction = |target: f64, corr: Option<&[DMatrix<f64>]>| -> Option<Direction> {
            let base: Vec<DMatrix<f64>> = (0..nblocks)
                .map(|b| {
                    let mut w = &zinv[b] * target - &x[b] - &xrdz[b];
                    if let Some(cc) = corr {
                        w -= &cc[b];
                    }
                    w
                })
                .collect();
            let rhs = p.adjoint(&base) - &rp;
            let mut dy = factor.solve(&rhs)?;
            let fix = factor.solve(&(&rhs - &schur * &dy))?;
            dy += fix;
            if dy.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let lin = p.linear(dy.as_slice());
            let dz: Vec<DMatrix<f64>> = (0..nblocks).map(|b| &rd[b] + &lin[b]).collect();
            let dx: Vec<DMatrix<f64>> = (0..nblocks)
                .map(|b| {
                    let mut w = &zinv[b] * target - &x[b] - &x[b] * &dz[b] * &zinv[b];
                    if let Some(cc) = corr {
                        w -= &cc[b];
                    }
                    symmetrize(&w)
                })
                .collect();
            Some(Direction { dx, dy, dz })
        };
        let steps = |d: &Direction, tau: f64| -> (f64, f64) {
            let ap = (0..nblocks)
                .map(|b| max_step(&x[b], &d.dx[b]))
                .fold(f64::INFINITY, f64::min);
            let ad = (0..nblocks)
                .map(|b| max_step(&z[b], &d.dz[b]))
                .fold(f64::INFINITY, f64::min);
            ((tau * ap).min(1.0), (tau * ad).min(1.0))
        };

        let Some(pred) = direction(0.0, None) else {
            break;
        };
        let (ap, ad) = steps(&pred, 1.0);
        let mu_aff: f64 = (0..nblocks)
            .map(|b| dot(&(&x[b] + &pred.dx[b] * ap), &(&z[b] + &pred.dz[b] * ad)))
            .sum::<f64>()
            / n as f64;
        let sigma = (mu_aff / mu).max(0.0).powi(3).min(1.0);
        let corr: Vec<DMatrix<f64>> = (0..nblocks)
            .map(|b| &pred.dx[b] * &pred.dz[b] * &zinv[b])
            .collect();
        let Some(dir) = direction(sigma * mu, Some(&corr)) else {
            break;
        };
        let (ap, ad) = steps(&dir, 0.95);
        for b in 0..nblocks {
            x[b] = symmetrize(&(&x[b] + &dir.dx[b] * ap));
            z[b] = symmetrize(&(&z[b] + &dir.dz[b] * ad));
        }
        y += &dir.dy * ad;
    }

    if let Some(b) = best {
        if status != Status::Infeasible && status != Status::Unbounded {
            (x, y, z) = (b.x, b.y, b.z);
            let gap = (b.pobj - b.dobj).abs();
            return LmiSolution {
                status,
                y: y.as_slice().to_vec(),
                x,
                z,
                primal: b.pobj,
                dual: b.dobj,
                iterations,
                gap,
            };
        }
    }
    let pobj = c.dot(&y);
    let dobj = -blocks_dot(&p.f0, &x);
    LmiSolution {
        status,
        y: y.as_slice().to_vec(),
        x,
        z,
        primal: pobj,
        dual: dobj,
        iterations,
        gap: (pobj - dobj).abs(),
    }
}

struct Best {
    merit: f64,
    x: Vec<DMatrix<f64>>,
    y: DVector<f64>,
    z: Vec<DMatrix<f64>>,
    pobj: f64,
    dobj: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    #[test]
    fn linear_program() {
        // min y0 + 2 y1 s.t. y0 ≥ 1, y1 ≥ 0.5, y0 + y1 ≥ 2
        let p = Lmi {
            block_dims: vec![1, 1, 1],
            f0: vec![one(-1.0), one(-0.5), one(-2.0)],
            fs: vec![
                vec![(0, one(1.0)), (2, one(1.0))],
                vec![(1, one(1.0)), (2, one(1.0))],
            ],
            c: vec![1.0, 2.0],
        };
        let s = solve_lmi(&p, &SolverOptions::default());
        assert_eq!(s.status, Status::Optimal);
        assert!((s.primal - 2.5).abs() < 1e-6, "{}", s.primal);
        assert!((s.y[0] - 1.5).abs() < 1e-6);
    }

    #[test]
    fn max_eigenvalue() {
        // min t s.t. tI − A ⪰ 0 → λmax(A)
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 0.0]);
        let p = Lmi {
            block_dims: vec![2],
            f0: vec![-a.clone()],
            fs: vec![vec![(0, DMatrix::identity(2, 2))]],
            c: vec![1.0],
        };
        let s = solve_lmi(&p, &SolverOptions::default());
        assert_eq!(s.status, Status::Optimal);
        assert!((s.primal - (1.0 + 2f64.sqrt())).abs() < 1e-7);
        assert!((s.primal - s.dual).abs() <= 1e-7 * (1.0 + s.primal.abs()));
    }

    #[test]
    fn infeasible_detected() {
        // y ≥ 1 and −y ≥ 0
        let p = Lmi {
            block_dims: vec![1, 1],
            f0: vec![one(-1.0), one(0.0)],
            fs: vec![vec![(0, one(1.0)), (1, one(-1.0))]],
            c: vec![0.0],
        };
        let s = solve_lmi(&p, &SolverOptions::default());
        assert_eq!(s.status, Status::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let p = Lmi {
            block_dims: vec![1],
            f0: vec![one(0.0)],
            fs: vec![vec![(0, one(1.0))]],
            c: vec![-1.0],
        };
        let s = solve_lmi(&p, &SolverOptions::default());
        assert_eq!(s.status, Status::Unbounded);
    }
}
