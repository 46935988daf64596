//! Modeling layer: Hermitian matrix variables, affine expressions, PSD and
//! equality constraints, compiled to an [`Lmi`](super::solver::Lmi).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::solver::{solve_lmi, Lmi, SolverOptions, Status};
use crate::error::{Error, Result};
use crate::mathcore::{hermitian_part, ComplexMatrix, C64};

const REAL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CoordKind {
    Real,
    Imag,
}

#[derive(Debug, Clone)]
struct Coord {
    kind: CoordKind,
    var: usize,
    basis: ComplexMatrix,
}

/// Handle to a Hermitian matrix variable of a [`ConeProgram`].
#[derive(Debug, Clone)]
pub struct Var {
    index: usize,
    dim: usize,
    terms: Vec<(usize, ComplexMatrix)>,
}

impl Var {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn expr(&self) -> Affine {
        Affine {
            constant: ComplexMatrix::zeros(self.dim, self.dim),
            terms: self.terms.clone(),
        }
    }
}

/// constant + Σ yₖ·Mₖ over the program's real coordinates yₖ.
#[derive(Debug, Clone)]
pub struct Affine {
    pub constant: ComplexMatrix,
    pub terms: Vec<(usize, ComplexMatrix)>,
}

impl Affine {
    pub fn constant(m: ComplexMatrix) -> Self {
        Self {
            constant: m,
            terms: vec![],
        }
    }

    pub fn zeros(d: usize) -> Self {
        Self::constant(ComplexMatrix::zeros(d, d))
    }

    pub fn dim(&self) -> usize {
        self.constant.nrows()
    }

    /// Apply a linear map to every component.
    pub fn map(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        Self {
            constant: f(&self.constant),
            terms: self.terms.iter().map(|(k, m)| (*k, f(m))).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix>) -> Result<Self> {
        let constant = f(&self.constant)?;
        let terms = self
            .terms
            .iter()
            .map(|(k, m)| Ok((*k, f(m)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { constant, terms })
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|m| m * C64::new(s, 0.0))
    }

    pub fn add(&self, other: &Affine) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self {
            constant: &self.constant + &other.constant,
            terms,
        }
    }

    pub fn sub(&self, other: &Affine) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn add_const(&self, m: &ComplexMatrix) -> Self {
        Self {
            constant: &self.constant + m,
            terms: self.terms.clone(),
        }
    }

    /// Real part of the trace as a scalar affine function.
    pub fn trace(&self) -> Scalar {
        Scalar {
            constant: self.constant.trace().re,
            terms: self.terms.iter().map(|(k, m)| (*k, m.trace().re)).collect(),
        }
    }

    /// Re Tr[W·(self)].
    pub fn inner(&self, w: &ComplexMatrix) -> Scalar {
        let f = |m: &ComplexMatrix| (w * m).trace().re;
        Scalar {
            constant: f(&self.constant),
            terms: self.terms.iter().map(|(k, m)| (*k, f(m))).collect(),
        }
    }
}

/// constant + Σ yₖ·cₖ.
#[derive(Debug, Clone, Default)]
pub struct Scalar {
    pub constant: f64,
    pub terms: Vec<(usize, f64)>,
}

impl Scalar {
    pub fn add(&self, other: &Scalar) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self {
            constant: self.constant + other.constant,
            terms,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            constant: self.constant * s,
            terms: self.terms.iter().map(|(k, v)| (*k, v * s)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// A semidefinite program over Hermitian matrix variables.
#[derive(Debug, Clone)]
pub struct ConeProgram {
    coords: Vec<Coord>,
    var_dims: Vec<usize>,
    psd: Vec<Affine>,
    eqs: Vec<Affine>,
    objective: Scalar,
    sense: Sense,
}

impl Default for ConeProgram {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone)]
pub struct ConeSolution {
    pub status: Status,
    /// Objective value of the program as posed.
    pub primal: f64,
    /// Value of the Lagrange dual.
    pub dual: f64,
    pub gap: f64,
    pub iterations: usize,
    /// True when all data was real and variables were restricted to real
    /// symmetric matrices.
    pub real_mode: bool,
    values: Vec<ComplexMatrix>,
}

impl ConeSolution {
    pub fn value(&self, v: &Var) -> &ComplexMatrix {
        &self.values[v.index]
    }

    pub fn scalar(&self, v: &Var) -> f64 {
        self.values[v.index][(0, 0)].re
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

fn is_real(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.im.abs() <= REAL_TOL)
}

fn is_imag(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.abs() <= REAL_TOL)
}

fn re(m: &ComplexMatrix) -> DMatrix<f64> {
    m.map(|z| z.re)
}

/// [[Re, −Im], [Im, Re]].
fn embed(m: &ComplexMatrix) -> DMatrix<f64> {
    let d = m.nrows();
    let mut out = DMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i + d, j + d)] = z.re;
            out[(i, j + d)] = -z.im;
            out[(i + d, j)] = z.im;
        }
    }
    out
}

impl ConeProgram {
    pub fn new() -> Self {
        Self {
            coords: vec![],
            var_dims: vec![],
            psd: vec![],
            eqs: vec![],
            objective: Scalar::default(),
            sense: Sense::Minimize,
        }
    }

    /// New d×d Hermitian variable.
    pub fn hermitian(&mut self, d: usize) -> Var {
        let mut terms = vec![];
        for i in 0..d {
            for j in i..d {
                let mut b = ComplexMatrix::zeros(d, d);
                b[(i, j)] = C64::new(1.0, 0.0);
                b[(j, i)] = C64::new(1.0, 0.0);
                terms.push((self.coords.len(), b.clone()));
                self.coords.push(Coord {
                    kind: CoordKind::Real,
                    var: self.var_dims.len(),
                    basis: b,
                });
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                let mut b = ComplexMatrix::zeros(d, d);
                b[(i, j)] = C64::new(0.0, 1.0);
                b[(j, i)] = C64::new(0.0, -1.0);
                terms.push((self.coords.len(), b.clone()));
                self.coords.push(Coord {
                    kind: CoordKind::Imag,
                    var: self.var_dims.len(),
                    basis: b,
                });
            }
        }
        self.var_dims.push(d);
        Var {
            index: self.var_dims.len() - 1,
            dim: d,
            terms,
        }
    }

    /// New real scalar variable (a 1×1 Hermitian matrix).
    pub fn scalar(&mut self) -> Var {
        self.hermitian(1)
    }

    pub fn psd(&mut self, e: Affine) {
        self.psd.push(e);
    }

    pub fn eq(&mut self, e: Affine) {
        self.eqs.push(e);
    }

    pub fn minimize(&mut self, obj: Scalar) {
        self.objective = obj;
        self.sense = Sense::Minimize;
    }

    pub fn maximize(&mut self, obj: Scalar) {
        self.objective = obj;
        self.sense = Sense::Maximize;
    }

    pub fn num_coords(&self) -> usize {
        self.coords.len()
    }

    fn check(&self) -> Result<()> {
        for e in self.psd.iter().chain(&self.eqs) {
            let d = e.dim();
            if e.constant.ncols() != d
                || e.terms
                    .iter()
                    .any(|(_, m)| m.nrows() != d || m.ncols() != d)
            {
                return Err(Error::DimMismatch(
                    "constraint terms must share one square shape".into(),
                ));
            }
            if d > 32 {
                return Err(Error::DimMismatch(format!(
                    "block dimension {d} exceeds 32"
                )));
            }
        }
        Ok(())
    }

    fn real_mode(&self) -> bool {
        let terms_ok = |e: &Affine| {
            is_real(&e.constant)
                && e.terms.iter().all(|(k, m)| match self.coords[*k].kind {
                    CoordKind::Real => is_real(m),
                    CoordKind::Imag => is_imag(m),
                })
        };
        self.psd.iter().chain(&self.eqs).all(terms_ok)
            && self
                .objective
                .terms
                .iter()
                .all(|(k, v)| self.coords[*k].kind == CoordKind::Real || v.abs() <= REAL_TOL)
    }
}

/// Solve a cone program. Non-optimal outcomes are reported through `status`.
pub fn solve(p: &ConeProgram, opts: &SolverOptions) -> Result<ConeSolution> {
    p.check()?;
    let real_mode = p.real_mode();
    let active: Vec<usize> = (0..p.coords.len())
        .filter(|&k| !real_mode || p.coords[k].kind == CoordKind::Real)
        .collect();
    let mut pos = vec![usize::MAX; p.coords.len()];
    for (i, &k) in active.iter().enumerate() {
        pos[k] = i;
    }
    let m = active.len();

    // Equalities as real rows E y = f.
    let mut rows: Vec<(Vec<(usize, f64)>, f64)> = vec![];
    for e in &p.eqs {
        let d = e.dim();
        let mut push = |pick: &dyn Fn(C64) -> f64, i: usize, j: usize| {
            let mut row = vec![];
            for (k, mk) in &e.terms {
                if pos[*k] != usize::MAX {
                    let v = pick(mk[(i, j)]);
                    if v != 0.0 {
                        row.push((pos[*k], v));
                    }
                }
            }
            rows.push((row, -pick(e.constant[(i, j)])));
        };
        for i in 0..d {
            for j in i..d {
                push(&|z: C64| z.re, i, j);
                if !real_mode && j > i {
                    push(&|z: C64| z.im, i, j);
                }
            }
        }
    }
    let mut emat = DMatrix::<f64>::zeros(rows.len(), m);
    let fvec = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
    for (r, (row, _)) in rows.iter().enumerate() {
        for &(k, v) in row {
            emat[(r, k)] += v;
        }
    }

    // y = y₀ + N w.
    let (y0, null) = if rows.is_empty() {
        (DVector::zeros(m), DMatrix::identity(m, m))
    } else {
        let gram = emat.transpose() * &emat;
        let eig = SymmetricEigen::new(gram);
        let lmax = eig.eigenvalues.amax();
        let thresh = 1e-12 * lmax.max(1e-300);
        let etf = emat.transpose() * &fvec;
        let mut y0 = DVector::zeros(m);
        let mut null_cols = vec![];
        for i in 0..m {
            let v = eig.eigenvectors.column(i);
            if eig.eigenvalues[i] > thresh {
                y0 += v * (v.dot(&etf) / eig.eigenvalues[i]);
            } else {
                null_cols.push(v.into_owned());
            }
        }
        let resid = (&emat * &y0 - &fvec).norm();
        if resid > 1e-8 * (1.0 + fvec.norm()) {
            return Ok(ConeSolution {
                status: Status::Infeasible,
                primal: f64::NAN,
                dual: f64::NAN,
                gap: f64::NAN,
                iterations: 0,
                real_mode,
                values: p
                    .var_dims
                    .iter()
                    .map(|&d| ComplexMatrix::zeros(d, d))
                    .collect(),
            });
        }
        let null = if null_cols.is_empty() {
            DMatrix::zeros(m, 0)
        } else {
            DMatrix::from_columns(&null_cols)
        };
        (y0, null)
    };

    let sign = if p.sense == Sense::Minimize {
        1.0
    } else {
        -1.0
    };
    let mut cvec = DVector::<f64>::zeros(m);
    for &(k, v) in &p.objective.terms {
        if pos[k] != usize::MAX {
            cvec[pos[k]] += sign * v;
        }
    }
    let offset = sign * p.objective.constant + cvec.dot(&y0);

    // Blocks: F₀ includes y₀; reduced Fₗ = Σᵢ N_il Fᵢ.
    let conv = |mm: &ComplexMatrix| if real_mode { re(mm) } else { embed(mm) };
    let mut block_dims = vec![];
    let mut f0 = vec![];
    let nw = null.ncols();
    let mut fs: Vec<Vec<(usize, DMatrix<f64>)>> = vec![vec![]; nw];
    for (b, e) in p.psd.iter().enumerate() {
        let h = |mm: &ComplexMatrix| conv(&hermitian_part(mm));
        let d = if real_mode { e.dim() } else { 2 * e.dim() };
        block_dims.push(d);
        let mut base = h(&e.constant);
        let mut full: Vec<DMatrix<f64>> = vec![DMatrix::zeros(d, d); m];
        let mut touched = vec![false; m];
        for (k, mk) in &e.terms {
            if pos[*k] == usize::MAX {
                continue;
            }
            let i = pos[*k];
            full[i] += h(mk);
            touched[i] = true;
        }
        for i in 0..m {
            if touched[i] && y0[i] != 0.0 {
                base += &full[i] * y0[i];
            }
        }
        f0.push(base);
        for l in 0..nw {
            let mut acc = DMatrix::<f64>::zeros(d, d);
            let mut any = false;
            for i in 0..m {
                if touched[i] && null[(i, l)].abs() > 1e-15 {
                    acc += &full[i] * null[(i, l)];
                    any = true;
                }
            }
            if any && acc.amax() > 1e-15 {
                fs[l].push((b, acc));
            }
        }
    }
    let creduced = null.transpose() * &cvec;
    let lmi = Lmi {
        block_dims,
        f0,
        fs,
        c: creduced.as_slice().to_vec(),
    };
    let sol = solve_lmi(&lmi, opts);

    let w = DVector::from_column_slice(&sol.y);
    let y = if nw > 0 { &y0 + &null * &w } else { y0.clone() };
    let mut full_y = vec![0.0; p.coords.len()];
    for (i, &k) in active.iter().enumerate() {
        full_y[k] = y[i];
    }
    let mut values: Vec<ComplexMatrix> = p
        .var_dims
        .iter()
        .map(|&d| ComplexMatrix::zeros(d, d))
        .collect();
    for (k, coord) in p.coords.iter().enumerate() {
        if full_y[k] != 0.0 {
            values[coord.var] += &coord.basis * Complex64::new(full_y[k], 0.0);
        }
    }
    let primal = sign * (sol.primal + offset);
    let dual = sign * (sol.dual + offset);
    Ok(ConeSolution {
        status: sol.status,
        primal,
        dual,
        gap: sol.gap,
        iterations: sol.iterations,
        real_mode,
        values,
    })
}

/// Solve and require an optimal status.
pub fn solve_optimal(p: &ConeProgram, opts: &SolverOptions) -> Result<ConeSolution> {
    let s = solve(p, opts)?;
    if s.status != Status::Optimal {
        return Err(Error::Solver(format!(
            "status {:?} after {} iterations",
            s.status, s.iterations
        )));
    }
    Ok(s)
}
