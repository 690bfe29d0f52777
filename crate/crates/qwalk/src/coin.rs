//! Coin unitaries: Hadamard, Y, DFT, the Grover family, plane rotations and
//! the identity.

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub enum CoinKind {
    Hadamard,
    Y,
    Dft,
    Grover { a: f64, b: f64 },
    Rotation { theta: f64 },
    Identity,
}

/// A `d x d` unitary acting on the direction register.
#[derive(Debug, Clone)]
pub struct Coin {
    dim: usize,
    matrix: Array2<Complex64>,
    kind: CoinKind,
}

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

impl Coin {
    /// `H = (1/sqrt(2)) [[1, 1], [1, -1]]`.
    pub fn hadamard() -> Self {
        let s = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
        let matrix = Array2::from_shape_vec((2, 2), vec![s, s, s, -s]).unwrap();
        Self {
            dim: 2,
            matrix,
            kind: CoinKind::Hadamard,
        }
    }

    /// `Y = (1/sqrt(2)) [[1, i], [i, 1]]`, balanced and drift-free for every
    /// initial coin basis state.
    pub fn y() -> Self {
        let s = 1.0 / 2f64.sqrt();
        let a = Complex64::new(s, 0.0);
        let b = Complex64::new(0.0, s);
        let matrix = Array2::from_shape_vec((2, 2), vec![a, b, b, a]).unwrap();
        Self {
            dim: 2,
            matrix,
            kind: CoinKind::Y,
        }
    }

    /// Discrete Fourier coin with entries `omega^{jk} / sqrt(d)`,
    /// `omega = exp(2 pi i / d)`.
    pub fn dft(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::CoinParameter("DFT coin needs dimension >= 2".into()));
        }
        let norm = 1.0 / (dim as f64).sqrt();
        let mut matrix = Array2::from_elem((dim, dim), C0);
        for j in 0..dim {
            for k in 0..dim {
                let phase = 2.0 * PI * (j * k) as f64 / dim as f64;
                matrix[(j, k)] = Complex64::from_polar(norm, phase);
            }
        }
        Ok(Self {
            dim,
            matrix,
            kind: CoinKind::Dft,
        })
    }

    /// Default Grover coin `G_{a,b}` with `a = 2/d - 1`, `b = 2/d`.
    pub fn grover(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::CoinParameter(
                "Grover coin needs dimension >= 2".into(),
            ));
        }
        Self::grover_with(dim, 2.0 / dim as f64 - 1.0)
    }

    /// Grover-family coin with diagonal `a` and off-diagonal `b = ±(1 - |a|)`.
    /// `|a|` must lie in `[1 - 2/d, 1]` and the resulting matrix must be
    /// unitary; the sign of `b` is chosen to satisfy unitarity.
    pub fn grover_with(dim: usize, a: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::CoinParameter(
                "Grover coin needs dimension >= 2".into(),
            ));
        }
        let lo = 1.0 - 2.0 / dim as f64;
        if a.abs() < lo - 1e-12 || a.abs() > 1.0 + 1e-12 {
            return Err(Error::CoinParameter(format!(
                "Grover parameter |a| = {} outside [{lo}, 1]",
                a.abs()
            )));
        }
        let b_mag = 1.0 - a.abs();
        for b in [b_mag, -b_mag] {
            let coin = Self::grover_raw(dim, a, b);
            if coin.is_unitary(1e-12) {
                return Ok(coin);
            }
        }
        Err(Error::CoinParameter(format!(
            "no unitary Grover-family member with a = {a} in dimension {dim}"
        )))
    }

    fn grover_raw(dim: usize, a: f64, b: f64) -> Self {
        let mut matrix = Array2::from_elem((dim, dim), Complex64::new(b, 0.0));
        for j in 0..dim {
            matrix[(j, j)] = Complex64::new(a, 0.0);
        }
        Self {
            dim,
            matrix,
            kind: CoinKind::Grover { a, b },
        }
    }

    /// Plane rotation `R(theta) = [[cos, -sin], [sin, cos]]`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let matrix = Array2::from_shape_vec(
            (2, 2),
            vec![
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ],
        )
        .unwrap();
        Self {
            dim: 2,
            matrix,
            kind: CoinKind::Rotation { theta },
        }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::CoinParameter(
                "identity coin needs dimension >= 1".into(),
            ));
        }
        let mut matrix = Array2::from_elem((dim, dim), C0);
        for j in 0..dim {
            matrix[(j, j)] = C1;
        }
        Ok(Self {
            dim,
            matrix,
            kind: CoinKind::Identity,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn kind(&self) -> &CoinKind {
        &self.kind
    }

    /// Max-entry deviation of `C C^dagger` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.dim {
            for k in 0..self.dim {
                let mut acc = C0;
                for m in 0..self.dim {
                    acc += self.matrix[(j, m)] * self.matrix[(k, m)].conj();
                }
                let target = if j == k { C1 } else { C0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    /// A coin is balanced when every entry has squared magnitude `1/d`, so a
    /// coin measurement after applying it to any basis state is uniform over
    /// directions.
    pub fn is_balanced(&self, tol: f64) -> bool {
        let target = 1.0 / self.dim as f64;
        self.matrix
            .iter()
            .all(|c| (c.norm_sqr() - target).abs() <= tol)
    }
}
