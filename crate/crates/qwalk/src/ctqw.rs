//! Continuous-time walks: the symmetric generator built from a graph, exact
//! spectral evolution of both the quantum amplitudes `exp(-iHt)` and the
//! classical master equation `exp(-Ht)`, and the glued-trees traversal
//! experiment with its exact column-space reduction.

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

/// Real symmetric generator of a continuous-time walk with jump rate `gamma`
/// per unit time along every edge.
#[derive(Debug, Clone)]
pub struct Generator {
    matrix: Array2<f64>,
    gamma: f64,
}

impl Generator {
    /// `H_ij = -gamma` for neighbors, `deg(i) * gamma` on the diagonal.
    /// Self-loops are not transitions to a neighbor and are ignored.
    pub fn from_graph(graph: &LabeledGraph, gamma: f64) -> Result<Self> {
        if gamma <= 0.0 {
            return Err(Error::InvalidParameter("gamma must be positive".into()));
        }
        let n = graph.vertex_count();
        let mut matrix = Array2::zeros((n, n));
        for v in 0..n {
            for &(_, w) in graph.ports(v) {
                if w != v {
                    matrix[(v, w)] -= gamma;
                }
            }
            matrix[(v, v)] = graph.neighbor_degree(v) as f64 * gamma;
        }
        Ok(Self { matrix, gamma })
    }

    /// The `(2n+1)`-dimensional restriction of the glued-trees generator to
    /// uniform superpositions over columns: off-diagonal `-sqrt(2) gamma`,
    /// diagonal `2 gamma` at the roots and the shared leaf column, `3 gamma`
    /// elsewhere.
    pub fn glued_trees_reduced(depth: usize, gamma: f64) -> Result<Self> {
        if depth < 1 {
            return Err(Error::InvalidSize {
                family: "glued-trees",
                reason: "depth must be >= 1".into(),
            });
        }
        if gamma <= 0.0 {
            return Err(Error::InvalidParameter("gamma must be positive".into()));
        }
        let dim = 2 * depth + 1;
        let mut matrix = Array2::zeros((dim, dim));
        for j in 0..dim {
            matrix[(j, j)] = if j == 0 || j == depth || j == 2 * depth {
                2.0 * gamma
            } else {
                3.0 * gamma
            };
            if j + 1 < dim {
                let hop = -2f64.sqrt() * gamma;
                matrix[(j, j + 1)] = hop;
                matrix[(j + 1, j)] = hop;
            }
        }
        Ok(Self { matrix, gamma })
    }

    pub fn from_matrix(matrix: Array2<f64>, gamma: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::BadMatrix("generator must be square".into()));
        }
        let sym_err = symmetry_error(&matrix);
        if sym_err > 1e-10 {
            return Err(Error::BadMatrix(format!(
                "generator is not symmetric (max asymmetry {sym_err})"
            )));
        }
        Ok(Self { matrix, gamma })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    /// Eigendecomposition reused across evaluation times.
    pub fn spectral(&self) -> Result<SpectralEvolver> {
        let sym_err = symmetry_error(&self.matrix);
        if sym_err > 1e-10 {
            return Err(Error::Eigen(format!(
                "matrix is not symmetric (max asymmetry {sym_err})"
            )));
        }
        let (evals, evecs) = self
            .matrix
            .eigh(UPLO::Lower)
            .map_err(|e| Error::Eigen(e.to_string()))?;
        Ok(SpectralEvolver { evals, evecs })
    }
}

fn symmetry_error(m: &Array2<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Spectral form `H = V diag(lambda) V^T` of a symmetric generator.
pub struct SpectralEvolver {
    evals: Array1<f64>,
    evecs: Array2<f64>,
}

impl SpectralEvolver {
    pub fn dim(&self) -> usize {
        self.evals.len()
    }

    /// `exp(-iHt) psi0`.
    pub fn evolve_quantum(&self, psi0: &[Complex64], t: f64) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(psi0.len(), n, "state dimension mismatch");
        // c = V^T psi0
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        for (k, ck) in c.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for v in 0..n {
                acc += self.evecs[(v, k)] * psi0[v];
            }
            *ck = acc;
        }
        for (k, ck) in c.iter_mut().enumerate() {
            *ck *= Complex64::from_polar(1.0, -self.evals[k] * t);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (v, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += self.evecs[(v, k)] * c[k];
            }
            *slot = acc;
        }
        out
    }

    /// `exp(-Ht) p0` — the classical master equation.
    pub fn evolve_classical(&self, p0: &Distribution, t: f64) -> Result<Distribution> {
        let n = self.dim();
        if p0.len() != n {
            return Err(Error::SupportMismatch {
                left: p0.len(),
                right: n,
            });
        }
        let mut c = vec![0.0; n];
        for (k, ck) in c.iter_mut().enumerate() {
            let mut acc = 0.0;
            for v in 0..n {
                acc += self.evecs[(v, k)] * p0.get(v);
            }
            *ck = acc * (-self.evals[k] * t).exp();
        }
        let mut values = vec![0.0; n];
        for (v, slot) in values.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..n {
                acc += self.evecs[(v, k)] * c[k];
            }
            // exact evolution keeps entries nonnegative; clip rounding dust
            *slot = acc.max(0.0);
        }
        Distribution::from_values(values)
    }
}

/// One-shot `exp(-iHt) psi0`.
pub fn evolve_quantum(h: &Generator, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    let norm_sq: f64 = psi0.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm_sq });
    }
    Ok(h.spectral()?.evolve_quantum(psi0, t))
}

/// One-shot `exp(-Ht) p0`.
pub fn evolve_classical_ct(h: &Generator, p0: &Distribution, t: f64) -> Result<Distribution> {
    h.spectral()?.evolve_classical(p0, t)
}

/// Probability of finding the continuous-time walk at the right root of the
/// glued trees, evolved in the reduced column space from the left root, for
/// each requested time.
pub fn glued_trees_arrival(depth: usize, gamma: f64, t_grid: &[f64]) -> Result<Vec<f64>> {
    let h = Generator::glued_trees_reduced(depth, gamma)?;
    let spectral = h.spectral()?;
    let dim = h.dim();
    let mut psi0 = vec![Complex64::new(0.0, 0.0); dim];
    psi0[0] = Complex64::new(1.0, 0.0);
    Ok(t_grid
        .iter()
        .map(|&t| spectral.evolve_quantum(&psi0, t)[dim - 1].norm_sqr())
        .collect())
}
