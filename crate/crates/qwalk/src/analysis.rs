//! Walk observables: Cesaro averaging and its exact eigendecomposition limit,
//! empirical mixing times, moment and growth-exponent fits, and the two
//! hitting-time notions (one-shot and concurrent measurement).

use crate::classical::StochasticMatrix;
use crate::dist::{total_variation, Distribution};
use crate::dtqw::{CoinedWalk, WalkState};
use crate::error::{Error, Result};
use crate::graph::BiasedChain;
use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Solve};
use num_complex::Complex64;

/// Sampled scalar series over strictly increasing times.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::BadSeries("times/values length mismatch".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadSeries("times must be strictly increasing".into()));
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn to_csv(&self, time_header: &str, value_header: &str) -> String {
        let mut out = format!("{time_header},{value_header}\n");
        for (t, v) in self.times.iter().zip(self.values.iter()) {
            out.push_str(&format!("{t},{v}\n"));
        }
        out
    }
}

/// Least-squares slope of `ln(value)` against `ln(time)`.
pub fn loglog_slope(times: &[f64], values: &[f64]) -> Result<f64> {
    if times.len() != values.len() || times.len() < 2 {
        return Err(Error::BadSeries("need at least two points".into()));
    }
    if times.iter().any(|&t| t <= 0.0) || values.iter().any(|&v| v <= 0.0) {
        return Err(Error::BadSeries(
            "log-log fit needs positive times and values".into(),
        ));
    }
    let n = times.len() as f64;
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        return Err(Error::BadSeries("degenerate time axis".into()));
    }
    Ok(num / den)
}

/// Growth exponent of a series, requiring at least five samples.
pub fn growth_exponent(series: &TimeSeries) -> Result<f64> {
    if series.len() < 5 {
        return Err(Error::BadSeries(
            "growth exponent needs at least five points".into(),
        ));
    }
    loglog_slope(series.times(), series.values())
}

/// Average of the first `steps` distributions of a walk.
pub fn cesaro_average(
    seq: impl Iterator<Item = Distribution>,
    steps: usize,
) -> Result<Distribution> {
    if steps == 0 {
        return Err(Error::InvalidParameter("need at least one step".into()));
    }
    let mut avg: Option<Distribution> = None;
    for (k, dist) in seq.take(steps).enumerate() {
        match &mut avg {
            None => avg = Some(dist),
            Some(a) => a.accumulate(&dist, (k + 1) as f64),
        }
    }
    avg.ok_or_else(|| Error::BadSeries("walk produced no distributions".into()))
}

/// Running Cesaro averages `c^1, c^2, ...` of a distribution sequence.
pub fn cesaro_stream(
    seq: impl Iterator<Item = Distribution>,
) -> impl Iterator<Item = Distribution> {
    let mut avg: Option<Distribution> = None;
    let mut k = 0f64;
    seq.map(move |dist| {
        k += 1.0;
        match &mut avg {
            None => {
                avg = Some(dist);
            }
            Some(a) => a.accumulate(&dist, k),
        }
        avg.clone().unwrap()
    })
}

/// The exact `t -> infinity` Cesaro distribution of a unitary walk, by the
/// eigenpair sum: expand the start in the eigenbasis of `U`, group
/// eigenvalues equal within `1e-9` radians of phase, and add the squared
/// magnitudes of the per-group position amplitudes.
pub fn limiting_cesaro_matrix(
    u: &Array2<Complex64>,
    psi0: &[Complex64],
    coin_dim: usize,
    positions: usize,
) -> Result<Distribution> {
    let dim = coin_dim * positions;
    if u.nrows() != dim || u.ncols() != dim || psi0.len() != dim {
        return Err(Error::SupportMismatch {
            left: u.nrows(),
            right: dim,
        });
    }
    let (evals, evecs) = u.eig().map_err(|e| Error::Eigen(e.to_string()))?;
    // expansion coefficients: solve V a = psi0 (eigenvectors need not be
    // orthogonal inside degenerate clusters as returned by the solver)
    let rhs = Array1::from_vec(psi0.to_vec());
    let coeffs = evecs
        .solve(&rhs)
        .map_err(|e| Error::Eigen(format!("eigenbasis is singular: {e}")))?;

    // group indices by eigenphase, treating the circle wrap-around
    let mut order: Vec<usize> = (0..dim).collect();
    let phases: Vec<f64> = evals.iter().map(|l| l.arg()).collect();
    order.sort_by(|&a, &b| phases[a].partial_cmp(&phases[b]).unwrap());
    let tol = 1e-9;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &k in &order {
        match groups.last_mut() {
            Some(g) if (phases[k] - phases[*g.last().unwrap()]).abs() <= tol => g.push(k),
            _ => groups.push(vec![k]),
        }
    }
    if groups.len() > 1 {
        let first_phase = phases[groups[0][0]];
        let last_phase = phases[*groups.last().unwrap().last().unwrap()];
        if (first_phase + 2.0 * std::f64::consts::PI - last_phase).abs() <= tol {
            let first = groups.remove(0);
            groups.last_mut().unwrap().extend(first);
        }
    }

    let mut values = vec![0.0; positions];
    for group in &groups {
        for alpha in 0..coin_dim {
            for (i, slot) in values.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for &k in group {
                    acc += coeffs[k] * evecs[(alpha * positions + i, k)];
                }
                *slot += acc.norm_sqr();
            }
        }
    }
    Distribution::from_values(values)
}

/// Limiting Cesaro distribution of a coined walk from `start`.
pub fn limiting_cesaro(walk: &CoinedWalk, start: &WalkState) -> Result<Distribution> {
    let n = walk.graph().vertex_count();
    let d = walk.coin_dim();
    if d * n > 4096 {
        return Err(Error::DimensionCap {
            requested: d * n,
            cap: 4096,
        });
    }
    let u = walk.unitary_matrix();
    let psi0: Vec<Complex64> = (0..d * n)
        .map(|idx| start.amplitude(idx / n, idx % n))
        .collect();
    limiting_cesaro_matrix(&u, &psi0, d, n)
}

/// Smallest `T <= t_max` such that every sampled distribution from `T` on
/// stays within total variation `eps` of `target`; `None` when the walk never
/// settles inside the horizon. Distributions are sampled at every step.
pub fn empirical_mixing_time(
    seq: impl Iterator<Item = Distribution>,
    target: &Distribution,
    eps: f64,
    t_max: usize,
) -> Result<Option<usize>> {
    if eps <= 0.0 {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let mut last_violation = 0usize; // step index, 1-based; 0 = never
    let mut steps_seen = 0usize;
    for (idx, dist) in seq.take(t_max).enumerate() {
        steps_seen = idx + 1;
        if total_variation(&dist, target)? > eps {
            last_violation = idx + 1;
        }
    }
    if steps_seen < t_max {
        return Err(Error::BadSeries(format!(
            "walk ended after {steps_seen} of {t_max} requested steps"
        )));
    }
    if last_violation >= t_max {
        Ok(None)
    } else {
        Ok(Some(last_violation + 1))
    }
}

/// Largest instantaneous probability at `target` over `t = 1..=t_max`,
/// with the time that attains it.
pub fn one_shot_hitting(
    seq: impl Iterator<Item = Distribution>,
    target: usize,
    t_max: usize,
) -> Result<(usize, f64)> {
    if t_max < 1 {
        return Err(Error::InvalidParameter("t_max must be at least 1".into()));
    }
    let mut best = (0usize, -1.0f64);
    for (idx, dist) in seq.take(t_max).enumerate() {
        let p = dist.get(target);
        if p > best.1 {
            best = (idx + 1, p);
        }
    }
    if best.1 < 0.0 {
        return Err(Error::BadSeries("walk produced no distributions".into()));
    }
    Ok(best)
}

fn check_threshold(p_threshold: f64) -> Result<()> {
    if !(p_threshold > 0.0 && p_threshold <= 1.0) {
        return Err(Error::InvalidParameter(
            "threshold must be in (0, 1]".into(),
        ));
    }
    Ok(())
}

/// Concurrent-measurement hitting time of a coined walk: the walk runs with
/// an absorbing measurement at `target` only, and the result is the first
/// step at which the cumulative absorbed mass reaches `p_threshold`.
pub fn concurrent_hitting_quantum(
    walk: &CoinedWalk,
    start: &WalkState,
    target: usize,
    p_threshold: f64,
    t_max: usize,
) -> Result<Option<usize>> {
    check_threshold(p_threshold)?;
    if start.position_distribution().get(target) >= p_threshold {
        return Ok(Some(0));
    }
    let record = walk.run_absorbing(start, &[target], t_max)?;
    Ok(record
        .cumulative
        .iter()
        .position(|&c| c >= p_threshold)
        .map(|idx| idx + 1))
}

/// Classical counterpart on an explicit stochastic matrix.
pub fn concurrent_hitting_classical(
    m: &StochasticMatrix,
    p0: &Distribution,
    target: usize,
    p_threshold: f64,
    t_max: usize,
) -> Result<Option<usize>> {
    check_threshold(p_threshold)?;
    if p0.get(target) >= p_threshold {
        return Ok(Some(0));
    }
    let record = m.absorbing_run(p0, &[target], t_max)?;
    Ok(record
        .cumulative
        .iter()
        .position(|&c| c >= p_threshold)
        .map(|idx| idx + 1))
}

/// Classical counterpart on a birth-death chain (used for the reduced
/// hypercube, where the full graph is exponentially large).
pub fn concurrent_hitting_chain(
    chain: &BiasedChain,
    p0: &Distribution,
    target: usize,
    p_threshold: f64,
    t_max: usize,
) -> Result<Option<usize>> {
    check_threshold(p_threshold)?;
    if p0.get(target) >= p_threshold {
        return Ok(Some(0));
    }
    let record = crate::classical::chain_absorbing_run(chain, p0, &[target], t_max)?;
    Ok(record
        .cumulative
        .iter()
        .position(|&c| c >= p_threshold)
        .map(|idx| idx + 1))
}
