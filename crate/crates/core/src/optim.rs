//! Small derivative-free and quasi-Newton optimisers used by the bounds.

use nalgebra::{DMatrix, DVector};

/// Seed for the random restarts of the multi-start optimizers.
pub const DEFAULT_SEED: u64 = 0x4741_4443;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarOpt {
    pub x: f64,
    pub value: f64,
}

/// Maximise f on [lo, hi]: best point of a `seeds`-point grid, then golden
/// section on the bracket around it until the bracket is below `tol`.
pub fn maximize_scalar(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    seeds: usize,
    tol: f64,
) -> ScalarOpt {
    let seeds = seeds.max(3);
    let step = (hi - lo) / (seeds - 1) as f64;
    let nodes: Vec<f64> = (0..seeds)
        .map(|k| {
            if k == seeds - 1 {
                hi
            } else {
                lo + step * k as f64
            }
        })
        .collect();
    maximize_on_nodes(f, &nodes, tol)
}

/// Best of f over sorted nodes, refined by golden section between the
/// neighbours of the best node.
pub fn maximize_on_nodes(f: impl Fn(f64) -> f64, nodes: &[f64], tol: f64) -> ScalarOpt {
    let mut best = ScalarOpt {
        x: nodes[0],
        value: f64::NEG_INFINITY,
    };
    let mut best_k = 0;
    for (k, &x) in nodes.iter().enumerate() {
        let v = f(x);
        if v > best.value {
            best = ScalarOpt { x, value: v };
            best_k = k;
        }
    }
    let a = nodes[best_k.saturating_sub(1)];
    let b = nodes[(best_k + 1).min(nodes.len() - 1)];
    let refined = golden_max(&f, a, b, tol);
    if refined.value >= best.value {
        refined
    } else {
        best
    }
}

/// Golden-section search for the maximum of a unimodal f on [a, b].
pub fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> ScalarOpt {
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - invphi * (b - a);
    let mut x2 = a + invphi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    let candidates = [(x1, f1), (x2, f2), (a, f(a)), (b, f(b))];
    let (x, value) =
        candidates.into_iter().fold(
            (a, f64::NEG_INFINITY),
            |acc, c| if c.1 > acc.1 { c } else { acc },
        );
    ScalarOpt { x, value }
}

/// Bisection for a sign change of f on [lo, hi]. Returns None without one.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo) < tol {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[derive(Debug, Clone)]
pub struct VecOpt {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct BfgsOptions {
    pub max_iter: usize,
    pub grad_tol: f64,
    /// Central-difference step.
    pub fd_step: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            max_iter: 300,
            grad_tol: 1e-9,
            fd_step: 1e-6,
        }
    }
}

fn gradient(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> DVector<f64> {
    let mut xp = x.to_vec();
    DVector::from_fn(x.len(), |i, _| {
        let orig = xp[i];
        xp[i] = orig + h;
        let fp = f(&xp);
        xp[i] = orig - h;
        let fm = f(&xp);
        xp[i] = orig;
        (fp - fm) / (2.0 * h)
    })
}

/// Unconstrained BFGS minimisation with finite-difference gradients and a
/// backtracking Armijo line search.
pub fn bfgs_min(f: impl Fn(&[f64]) -> f64, x0: &[f64], opts: BfgsOptions) -> VecOpt {
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut fx = f(x.as_slice());
    let mut grad = gradient(&f, x.as_slice(), opts.fd_step);
    let mut h = DMatrix::<f64>::identity(n, n);
    let mut it = 0;
    while it < opts.max_iter {
        it += 1;
        if grad.norm() < opts.grad_tol {
            break;
        }
        let mut dir = -(&h * &grad);
        if dir.dot(&grad) >= 0.0 {
            h = DMatrix::identity(n, n);
            dir = -grad.clone();
        }
        let slope = dir.dot(&grad);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xn = &x + &dir * t;
            let fnew = f(xn.as_slice());
            if fnew.is_finite() && fnew <= fx + 1e-4 * t * slope {
                accepted = Some((xn, fnew));
                break;
            }
            t *= 0.5;
        }
        let Some((xn, fnew)) = accepted else { break };
        let gnew = gradient(&f, xn.as_slice(), opts.fd_step);
        let s = &xn - &x;
        let y = &gnew - &grad;
        let sy = s.dot(&y);
        let improvement = fx - fnew;
        x = xn;
        fx = fnew;
        grad = gnew;
        if sy > 1e-14 {
            let rho = 1.0 / sy;
            let eye = DMatrix::<f64>::identity(n, n);
            let left = &eye - (&s * y.transpose()) * rho;
            let right = &eye - (&y * s.transpose()) * rho;
            h = &left * &h * &right + (&s * s.transpose()) * rho;
        }
        if improvement.abs() < 1e-15 * (1.0 + fx.abs()) && s.norm() < 1e-12 {
            break;
        }
    }
    VecOpt {
        x: x.as_slice().to_vec(),
        value: fx,
        iterations: it,
    }
}

/// Best of several BFGS runs.
pub fn multistart_min(f: impl Fn(&[f64]) -> f64, starts: &[Vec<f64>], opts: BfgsOptions) -> VecOpt {
    let mut best: Option<VecOpt> = None;
    for s in starts {
        let r = bfgs_min(&f, s, opts);
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    best.expect("at least one start")
}

/// Softmax map R^{k} → interior of the k-simplex.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|&v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let r = maximize_scalar(|x| -(x - 0.3).powi(2), 0.0, 1.0, 11, 1e-10);
        assert!((r.x - 0.3).abs() < 1e-8);
    }

    #[test]
    fn endpoint_maximum() {
        let r = maximize_scalar(|x| x, 0.0, 1.0, 11, 1e-10);
        assert!((r.x - 1.0).abs() < 1e-9);
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bisect_root() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-13).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-13).is_none());
    }

    #[test]
    fn bfgs_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = bfgs_min(
            f,
            &[-1.2, 1.0],
            BfgsOptions {
                max_iter: 2000,
                ..Default::default()
            },
        );
        assert!(
            (r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4,
            "{:?}",
            r
        );
    }

    #[test]
    fn softmax_on_simplex() {
        let p = softmax(&[0.1, -2.0, 3.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p.iter().all(|&v| v > 0.0));
    }
}
