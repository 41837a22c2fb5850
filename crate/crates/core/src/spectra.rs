//! Spectral radius and Perron vector of the adjacency matrix.
//!
//! Graphs with up to [`JACOBI_MAX_N`] vertices go through a dense cyclic
//! Jacobi eigensolver; larger graphs use power iteration on `A + I`, which is
//! primitive for every connected graph and so converges to the Perron pair
//! even when the graph is bipartite.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

pub const JACOBI_MAX_N: usize = 64;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Power iteration stops once successive Rayleigh quotients differ by less than this.
pub const POWER_RQ_TOL: f64 = 1e-13;
pub const POWER_MAX_ITERS: usize = 2_000_000;
/// Largest acceptable `||A x - rho x||`.
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const ROOT_TOL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph is disconnected; the Perron vector is not strictly positive")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("Perron vector has non-positive entry {value:e} at vertex {vertex}")]
    NotPositive { vertex: usize, value: f64 },
    #[error("{method} did not converge within {iterations} iterations")]
    NoConvergence { method: &'static str, iterations: usize },
    #[error("residual {0:e} exceeds tolerance")]
    Residual(f64),
    #[error("pineapple parameters need 2 <= alpha <= n - 2, got n = {n}, alpha = {alpha}")]
    PineappleRange { n: usize, alpha: usize },
}

/// Spectral radius and positive unit principal eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralData {
    pub rho: f64,
    pub x: Vec<f64>,
    pub residual: f64,
}

impl SpectralData {
    pub fn x_min(&self) -> f64 {
        self.x.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn x_max(&self) -> f64 {
        self.x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Lowest-index vertex attaining the minimum entry.
    pub fn argmin(&self) -> usize {
        let m = self.x_min();
        self.x.iter().position(|&v| v == m).unwrap_or(0)
    }

    /// Lowest-index vertex attaining the maximum entry.
    pub fn argmax(&self) -> usize {
        let m = self.x_max();
        self.x.iter().position(|&v| v == m).unwrap_or(0)
    }
}

/// Eigen-decomposition of a dense symmetric matrix by cyclic Jacobi rotations.
///
/// `a` is row-major `n x n` and is overwritten. Returns the eigenvalues and a
/// row-major matrix whose column `j` is the eigenvector of eigenvalue `j`.
pub fn symmetric_eigen(a: &mut [f64], n: usize) -> Result<(Vec<f64>, Vec<f64>), SpectralError> {
    assert_eq!(a.len(), n * n);
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += a[p * n + q] * a[p * n + q];
            }
        }
        (2.0 * s).sqrt()
    };
    let mut sweeps = 0;
    while off_norm(a) >= JACOBI_OFF_TOL {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(SpectralError::NoConvergence {
                method: "jacobi",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| a[i * n + i]).collect();
    Ok((eigenvalues, v))
}

fn residual(g: &Graph, rho: f64, x: &[f64]) -> f64 {
    (0..g.n())
        .map(|u| {
            let ax: f64 = g.neighbors(u).map(|w| x[w]).sum();
            (ax - rho * x[u]).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

fn finish(g: &Graph, rho: f64, mut x: Vec<f64>) -> Result<SpectralData, SpectralError> {
    if x.iter().sum::<f64>() < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
    if let Some((vertex, &value)) = x.iter().enumerate().find(|(_, &v)| v <= 0.0) {
        return Err(SpectralError::NotPositive { vertex, value });
    }
    let residual = residual(g, rho, &x);
    if residual > RESIDUAL_TOL {
        return Err(SpectralError::Residual(residual));
    }
    Ok(SpectralData { rho, x, residual })
}

fn check_connected(g: &Graph) -> Result<(), SpectralError> {
    if g.n() == 0 {
        Err(SpectralError::Empty)
    } else if !g.is_connected() {
        Err(SpectralError::Disconnected)
    } else {
        Ok(())
    }
}

/// Spectral radius through the dense Jacobi solver, regardless of size.
pub fn spectral_radius_jacobi(g: &Graph) -> Result<SpectralData, SpectralError> {
    check_connected(g)?;
    let n = g.n();
    let mut a = g.adjacency_matrix();
    let (values, vectors) = symmetric_eigen(&mut a, n)?;
    let top = (0..n)
        .max_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("n >= 1");
    let x = (0..n).map(|k| vectors[k * n + top]).collect();
    finish(g, values[top], x)
}

/// Spectral radius through power iteration on `A + I`, regardless of size.
pub fn spectral_radius_power(g: &Graph) -> Result<SpectralData, SpectralError> {
    check_connected(g)?;
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|u| g.neighbors(u).collect()).collect();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut previous = f64::NAN;
    for _ in 0..POWER_MAX_ITERS {
        for u in 0..n {
            y[u] = x[u] + adj[u].iter().map(|&w| x[w]).sum::<f64>();
        }
        let quotient: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for u in 0..n {
            x[u] = y[u] / norm;
        }
        if (quotient - previous).abs() < POWER_RQ_TOL && residual(g, quotient - 1.0, &x) <= RESIDUAL_TOL {
            // Rayleigh quotient of the final normalised vector.
            let ax: f64 = (0..n)
                .map(|u| x[u] * adj[u].iter().map(|&w| x[w]).sum::<f64>())
                .sum();
            return finish(g, ax, x);
        }
        previous = quotient;
    }
    Err(SpectralError::NoConvergence {
        method: "power iteration",
        iterations: POWER_MAX_ITERS,
    })
}

/// Spectral radius and Perron vector of a connected graph.
pub fn spectral_radius(g: &Graph) -> Result<SpectralData, SpectralError> {
    if g.n() <= JACOBI_MAX_N {
        spectral_radius_jacobi(g)
    } else {
        spectral_radius_power(g)
    }
}

/// The cubic whose largest root is the spectral radius of the pineapple
/// `P_{n-alpha+1}^{alpha-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CubicSpec {
    pub n: usize,
    pub alpha: usize,
    /// Coefficients of `x^3, x^2, x, 1`.
    pub coefficients: [i64; 4],
}

impl CubicSpec {
    pub fn new(n: usize, alpha: usize) -> Result<CubicSpec, SpectralError> {
        if alpha < 2 || alpha + 2 > n {
            return Err(SpectralError::PineappleRange { n, alpha });
        }
        let (n_, a_) = (n as i64, alpha as i64);
        Ok(CubicSpec {
            n,
            alpha,
            coefficients: [1, -(n_ - a_ - 1), -(n_ - 1), (a_ - 1) * (n_ - a_ - 1)],
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let [c3, c2, c1, c0] = self.coefficients.map(|c| c as f64);
        ((c3 * x + c2) * x + c1) * x + c0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let [c3, c2, c1, _] = self.coefficients.map(|c| c as f64);
        (3.0 * c3 * x + 2.0 * c2) * x + c1
    }

    /// Largest root by safeguarded Newton on a bracket where the cubic is increasing.
    pub fn largest_root(&self) -> f64 {
        let (n, alpha) = (self.n as f64, self.alpha as f64);
        let [_, c2, c1, _] = self.coefficients.map(|c| c as f64);
        // Largest critical point; the cubic is increasing to its right.
        let critical = (-c2 + (c2 * c2 - 3.0 * c1).sqrt()) / 3.0;
        let mut lo = (n - alpha).max((n - 1.0).sqrt()).max(critical);
        let mut hi = n - 1.0;
        while self.eval(hi) < 0.0 {
            hi *= 2.0;
        }
        if self.eval(lo) > 0.0 {
            lo = critical;
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let fx = self.eval(x);
            if fx == 0.0 {
                return x;
            }
            if fx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.derivative(x);
            let newton = x - fx / d;
            let next = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let scale = ROOT_TOL * x.abs().max(1.0);
            if (next - x).abs() < scale || hi - lo < scale {
                return next;
            }
            x = next;
        }
        x
    }
}

/// Spectral radius of the pineapple with independence number `alpha` on `n`
/// vertices, as the largest root of its characteristic cubic factor.
pub fn pineapple_rho_exact(n: usize, alpha: usize) -> Result<f64, SpectralError> {
    Ok(CubicSpec::new(n, alpha)?.largest_root())
}

/// Spectral radius of the split graph `S_{k,n-k}` from its two-class eigen
/// equations `k x = l y`, `(k-1) x + (n-k) y = l x`, i.e. the positive root of
/// `l^2 - (k-1) l - k(n-k) = 0`. Requires `1 <= k <= n`.
pub fn s_knk_rho(n: usize, k: usize) -> f64 {
    debug_assert!(1 <= k && k <= n);
    let (n, k) = (n as f64, k as f64);
    let b = k - 1.0;
    (b + (b * b + 4.0 * k * (n - k)).sqrt()) / 2.0
}
