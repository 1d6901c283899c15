//! Deterministic smooth minimization shared by the iterative estimators.
//!
//! Gradient descent with Barzilai–Borwein step sizes and Armijo
//! backtracking, finished by a finite-difference Newton polish once the
//! gradient is small. Everything is plain f64 arithmetic with a fixed
//! iteration order, so identical inputs give identical outputs.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// Hard cap on objective/gradient evaluations of the main loop.
    pub max_iters: usize,
    /// Declare convergence when the gradient norm falls below this.
    pub grad_tol: f64,
    /// Try Newton steps once the gradient norm falls below this.
    pub newton_threshold: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iters: 10_000,
            grad_tol: 1e-9,
            newton_threshold: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub x: Vec<f64>,
    pub objective: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimize `f` from `x0` using its analytic gradient `grad`.
pub fn minimize<F, G>(f: F, grad: G, x0: &[f64], opts: &FitOptions) -> FitOutcome
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut g = grad(&x);
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut iterations = 0usize;
    let mut converged = false;

    loop {
        let gnorm = norm(&g);
        if !fx.is_finite() || !gnorm.is_finite() {
            break;
        }
        if gnorm < opts.grad_tol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }

        // Newton polish: near a minimum the quadratic model is reliable and
        // finishes in a handful of steps. Accept only strict improvements.
        if gnorm < opts.newton_threshold {
            if let Some(step) = newton_step(&grad, &x, &g) {
                let xn: Vec<f64> = x.iter().zip(&step).map(|(a, d)| a + d).collect();
                let fxn = f(&xn);
                if fxn.is_finite() && fxn <= fx {
                    prev = Some((x.clone(), g.clone()));
                    x = xn;
                    fx = fxn;
                    g = grad(&x);
                    iterations += 1;
                    continue;
                }
            }
        }

        // Barzilai–Borwein step length from the last two gradients, falling
        // back to a conservative scale-free guess.
        let mut step = match &prev {
            Some((xp, gp)) => {
                let s: Vec<f64> = x.iter().zip(xp).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = g.iter().zip(gp).map(|(a, b)| a - b).collect();
                let sy = dot(&s, &y);
                let yy = dot(&y, &y);
                if sy > 0.0 && yy > 0.0 && sy.is_finite() && yy.is_finite() {
                    (sy / yy).clamp(1e-12, 1e8)
                } else {
                    1.0 / gnorm.max(1.0)
                }
            }
            None => 1.0 / gnorm.max(1.0),
        };

        let mut accepted = false;
        for _ in 0..60 {
            let xn: Vec<f64> = x.iter().zip(&g).map(|(a, gi)| a - step * gi).collect();
            let fxn = f(&xn);
            if fxn.is_finite() && fxn <= fx - 1e-4 * step * gnorm * gnorm {
                prev = Some((x.clone(), g.clone()));
                x = xn;
                fx = fxn;
                g = grad(&x);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        if !accepted {
            // Line search stalled: no descent direction at double precision.
            break;
        }
    }

    let grad_norm = norm(&g);
    FitOutcome {
        x,
        objective: fx,
        grad_norm,
        iterations,
        converged,
    }
}

/// Solve H d = -g with H from central differences of the gradient.
fn newton_step<G>(grad: &G, x: &[f64], g: &[f64]) -> Option<Vec<f64>>
where
    G: Fn(&[f64]) -> Vec<f64>,
{
    let n = x.len();
    let mut h = DMatrix::zeros(n, n);
    for j in 0..n {
        let hj = 1e-5 * x[j].abs().max(1.0);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += hj;
        xm[j] -= hj;
        let gp = grad(&xp);
        let gm = grad(&xm);
        for i in 0..n {
            h[(i, j)] = (gp[i] - gm[i]) / (2.0 * hj);
        }
    }
    // Symmetrize; the true Hessian is symmetric and the average damps noise.
    let h = (&h + h.transpose()) * 0.5;
    let rhs = DVector::from_iterator(n, g.iter().map(|v| -v));
    let d = h.lu().solve(&rhs)?;
    if d.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(d.as_slice().to_vec())
}

/// Central-difference gradient, for validating analytic gradients in tests.
pub fn fd_gradient<F>(f: F, x: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut g = vec![0.0; x.len()];
    for j in 0..x.len() {
        let hj = 1e-6 * x[j].abs().max(1.0);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += hj;
        xm[j] -= hj;
        g[j] = (f(&xp) - f(&xm)) / (2.0 * hj);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic_exactly() {
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + 2.0 * (x[1] + 1.0).powi(2);
        let g = |x: &[f64]| vec![2.0 * (x[0] - 3.0), 4.0 * (x[1] + 1.0)];
        let out = minimize(f, g, &[10.0, -10.0], &FitOptions::default());
        assert!(out.converged);
        assert!((out.x[0] - 3.0).abs() < 1e-8);
        assert!((out.x[1] + 1.0).abs() < 1e-8);
    }

    #[test]
    fn minimizes_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let g = |x: &[f64]| {
            vec![
                -2.0 * (1.0 - x[0]) - 400.0 * x[0] * (x[1] - x[0] * x[0]),
                200.0 * (x[1] - x[0] * x[0]),
            ]
        };
        let out = minimize(f, g, &[-1.2, 1.0], &FitOptions::default());
        assert!(out.converged, "grad_norm={}", out.grad_norm);
        assert!((out.x[0] - 1.0).abs() < 1e-6);
        assert!((out.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn is_deterministic() {
        let f = |x: &[f64]| x[0].powi(4) + (x[1] - 2.0).powi(2) + x[0] * x[1] * 0.1;
        let g = |x: &[f64]| {
            vec![
                4.0 * x[0].powi(3) + 0.1 * x[1],
                2.0 * (x[1] - 2.0) + 0.1 * x[0],
            ]
        };
        let a = minimize(f, g, &[1.0, 1.0], &FitOptions::default());
        let b = minimize(f, g, &[1.0, 1.0], &FitOptions::default());
        assert_eq!(a.x, b.x);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn fd_gradient_matches_analytic() {
        let f = |x: &[f64]| (x[0] * x[1]).sin() + x[0].powi(2);
        let g = |x: &[f64]| {
            vec![
                x[1] * (x[0] * x[1]).cos() + 2.0 * x[0],
                x[0] * (x[0] * x[1]).cos(),
            ]
        };
        let x = [0.7, -0.3];
        let fd = fd_gradient(f, &x);
        let an = g(&x);
        for (a, b) in fd.iter().zip(&an) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}
