use crate::error::{Error, Result};

/// A nonnegative measure over vertex ids `0..n-1` with its total mass kept
/// explicit. Normalized walk outputs carry mass 1; absorbing runs leave a
/// residual with mass < 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    values: Vec<f64>,
    mass: f64,
}

impl Distribution {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&v| v < -1e-12 || !v.is_finite()) {
            return Err(Error::BadMatrix(
                "distribution entries must be finite and nonnegative".into(),
            ));
        }
        let mass = values.iter().sum();
        Ok(Self { values, mass })
    }

    /// Point mass at `vertex`.
    pub fn point(count: usize, vertex: usize) -> Result<Self> {
        if vertex >= count {
            return Err(Error::VertexOutOfRange { vertex, count });
        }
        let mut values = vec![0.0; count];
        values[vertex] = 1.0;
        Ok(Self { values, mass: 1.0 })
    }

    pub fn uniform(count: usize) -> Self {
        Self {
            values: vec![1.0 / count as f64; count],
            mass: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn get(&self, vertex: usize) -> f64 {
        self.values[vertex]
    }

    /// Mean and variance of the coordinate `coord` under this distribution.
    /// Requires unit mass.
    pub fn moments(&self, coord: impl Fn(usize) -> f64) -> Result<(f64, f64)> {
        if (self.mass - 1.0).abs() > 1e-9 {
            return Err(Error::MassNotUnit { mass: self.mass });
        }
        let mut mean = 0.0;
        for (v, &p) in self.values.iter().enumerate() {
            mean += coord(v) * p;
        }
        let mut var = 0.0;
        for (v, &p) in self.values.iter().enumerate() {
            let d = coord(v) - mean;
            var += d * d * p;
        }
        Ok((mean, var))
    }

    /// Pairwise average used by Cesaro accumulation: `self + (other - self)/k`.
    pub(crate) fn accumulate(&mut self, other: &Distribution, k: f64) {
        debug_assert_eq!(self.values.len(), other.values.len());
        for (a, &b) in self.values.iter_mut().zip(other.values.iter()) {
            *a += (b - *a) / k;
        }
        self.mass += (other.mass - self.mass) / k;
    }

    /// CSV rendering with one `coordinate,probability` row per vertex.
    pub fn to_csv(&self, coord: impl Fn(usize) -> f64) -> String {
        let mut out = String::from("position,probability\n");
        for (v, &p) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", coord(v), p));
        }
        out
    }
}

/// Total variation distance in the unhalved convention `sum_i |p_i - q_i|`,
/// ranging over [0, 2] for unit-mass inputs.
pub fn total_variation(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::SupportMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    if (p.mass() - 1.0).abs() > 1e-9 {
        return Err(Error::MassNotUnit { mass: p.mass() });
    }
    if (q.mass() - 1.0).abs() > 1e-9 {
        return Err(Error::MassNotUnit { mass: q.mass() });
    }
    Ok(p.values()
        .iter()
        .zip(q.values())
        .map(|(a, b)| (a - b).abs())
        .sum())
}
