//! Interpolation between the quantum and the classical walk: at every step the
//! coin, the position, or both are projectively measured with probability
//! `p_meas`. The channel is evaluated two ways — seeded quantum trajectories
//! and the exact mixed-state evolution
//! `rho -> (1-p) U rho U^+ + p sum_k P_k U rho U^+ P_k` — plus the multi-coin
//! walk that cycles through a ring of coin registers.

use crate::analysis::TimeSeries;
use crate::dist::Distribution;
use crate::dtqw::{CoinedWalk, Register, WalkState};
use crate::error::{Error, Result};
use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// Register(s) hit by the per-step measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureTarget {
    Coin,
    Position,
    Both,
}

#[derive(Debug, Clone)]
pub enum DecoherenceMode {
    /// Monte Carlo over independently seeded trajectories.
    Trajectories { runs: usize, seed: u64 },
    /// Deterministic density-matrix evolution.
    ExactChannel,
}

#[derive(Debug, Clone)]
pub struct DecoherenceSpec {
    pub p_meas: f64,
    pub target: MeasureTarget,
    pub mode: DecoherenceMode,
}

impl DecoherenceSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_meas) {
            return Err(Error::InvalidParameter(
                "p_meas must lie in [0, 1]".into(),
            ));
        }
        if let DecoherenceMode::Trajectories { runs, .. } = self.mode {
            if runs == 0 {
                return Err(Error::InvalidParameter(
                    "trajectory mode needs at least one run".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Density matrix over coin ⊗ position.
#[derive(Debug, Clone)]
pub struct DensityState {
    rho: Array2<Complex64>,
    coin_dim: usize,
    positions: usize,
}

impl DensityState {
    pub fn from_pure(state: &WalkState) -> Self {
        let n = state.graph().vertex_count();
        let d = state.coin_dim();
        let dim = d * n;
        let amps: Vec<Complex64> = (0..dim)
            .map(|idx| state.amplitude(idx / n, idx % n))
            .collect();
        let mut rho = Array2::from_elem((dim, dim), C0);
        for (i, &a) in amps.iter().enumerate() {
            for (j, &b) in amps.iter().enumerate() {
                rho[(i, j)] = a * b.conj();
            }
        }
        Self {
            rho,
            coin_dim: d,
            positions: n,
        }
    }

    pub fn dim(&self) -> usize {
        self.coin_dim * self.positions
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|k| self.rho[(k, k)].re).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue; the state is physical when it is not meaningfully
    /// negative.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (evals, _) = self
            .rho
            .eigh(UPLO::Lower)
            .map_err(|e| Error::Eigen(e.to_string()))?;
        Ok(evals.iter().cloned().fold(f64::INFINITY, f64::min))
    }

    pub fn position_distribution(&self) -> Distribution {
        let mut values = vec![0.0; self.positions];
        for c in 0..self.coin_dim {
            for (v, slot) in values.iter_mut().enumerate() {
                *slot += self.rho[(c * self.positions + v, c * self.positions + v)]
                    .re
                    .max(0.0);
            }
        }
        Distribution::from_values(values).expect("diagonal of a density matrix")
    }
}

fn dagger(m: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = Array2::from_elem((m.ncols(), m.nrows()), C0);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(j, i)] = m[(i, j)].conj();
        }
    }
    out
}

/// One channel step in place: unitary conjugation, then the measurement
/// mixture that scales the off-target coherences by `1 - p`.
pub fn channel_step(walk: &CoinedWalk, state: &mut DensityState, p: f64, target: MeasureTarget) {
    let a = walk.apply_left(&state.rho);
    state.rho = dagger(&walk.apply_left(&dagger(&a)));
    if p == 0.0 {
        return;
    }
    let n = state.positions;
    let d = state.coin_dim;
    let keep = 1.0 - p;
    for ci in 0..d {
        for vi in 0..n {
            for cj in 0..d {
                for vj in 0..n {
                    let killed = match target {
                        MeasureTarget::Coin => ci != cj,
                        MeasureTarget::Position => vi != vj,
                        MeasureTarget::Both => ci != cj || vi != vj,
                    };
                    if killed {
                        state.rho[(ci * n + vi, cj * n + vj)] *= keep;
                    }
                }
            }
        }
    }
}

const POSITION_CAP: usize = 512;

#[derive(Debug, Clone)]
pub struct DecoheredRun {
    pub distribution: Distribution,
    /// Ensemble variance of the walker coordinate after each step.
    pub variance: TimeSeries,
}

/// Exact mixed-state evolution of the decoherence channel for `steps` steps.
pub fn exact_channel_run(
    walk: &CoinedWalk,
    start: &WalkState,
    spec: &DecoherenceSpec,
    steps: usize,
) -> Result<(DecoheredRun, DensityState)> {
    spec.validate()?;
    let n = walk.graph().vertex_count();
    if n > POSITION_CAP {
        return Err(Error::DimensionCap {
            requested: n,
            cap: POSITION_CAP,
        });
    }
    let coord = |v: usize| walk.graph().coordinate(v);
    let mut rho = DensityState::from_pure(start);
    let mut times = Vec::with_capacity(steps);
    let mut variances = Vec::with_capacity(steps);
    for t in 1..=steps {
        channel_step(walk, &mut rho, spec.p_meas, spec.target);
        let (_, var) = rho.position_distribution().moments(coord)?;
        times.push(t as f64);
        variances.push(var);
    }
    Ok((
        DecoheredRun {
            distribution: rho.position_distribution(),
            variance: TimeSeries::new(times, variances)?,
        },
        rho,
    ))
}

/// Trajectory-sampled decoherence: every step applies `U`, then with
/// probability `p_meas` projectively measures the target register(s). Each
/// trajectory runs on its own ChaCha stream, so results are reproducible for
/// a given seed and independent of scheduling.
pub fn decohered_run(
    walk: &CoinedWalk,
    start: &WalkState,
    spec: &DecoherenceSpec,
    steps: usize,
) -> Result<DecoheredRun> {
    spec.validate()?;
    let DecoherenceMode::Trajectories { runs, seed } = spec.mode else {
        return Err(Error::InvalidParameter(
            "decohered_run needs trajectory mode".into(),
        ));
    };
    let coord = |v: usize| walk.graph().coordinate(v);
    let n = walk.graph().vertex_count();
    let mut sum_mean = vec![0.0; steps];
    let mut sum_second = vec![0.0; steps];
    let mut final_values = vec![0.0; n];
    for run in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(run as u64 + 1);
        let mut state = start.clone();
        for t in 0..steps {
            state = walk.step(&state)?;
            if spec.p_meas > 0.0 && rng.random::<f64>() < spec.p_meas {
                match spec.target {
                    MeasureTarget::Coin => {
                        state = walk.measure(&state, Register::Coin, &mut rng)?.1;
                    }
                    MeasureTarget::Position => {
                        state = walk.measure(&state, Register::Position, &mut rng)?.1;
                    }
                    MeasureTarget::Both => {
                        state = walk.measure(&state, Register::Position, &mut rng)?.1;
                        state = walk.measure(&state, Register::Coin, &mut rng)?.1;
                    }
                }
            }
            let dist = state.position_distribution();
            let (mean, var) = dist.moments(coord)?;
            sum_mean[t] += mean;
            sum_second[t] += var + mean * mean;
        }
        for (slot, &v) in final_values
            .iter_mut()
            .zip(state.position_distribution().values())
        {
            *slot += v;
        }
    }
    let r = runs as f64;
    let times: Vec<f64> = (1..=steps).map(|t| t as f64).collect();
    let variances: Vec<f64> = sum_mean
        .iter()
        .zip(sum_second.iter())
        .map(|(&m, &s)| s / r - (m / r) * (m / r))
        .collect();
    for v in &mut final_values {
        *v /= r;
    }
    Ok(DecoheredRun {
        distribution: Distribution::from_values(final_values)?,
        variance: TimeSeries::new(times, variances)?,
    })
}

/// Pure-state walk on `M` coin registers cycled round-robin: step `t` flips
/// the factor `t mod M` with a Hadamard coin and shifts on it. Every factor
/// starts in the drift-free state `(|0> + i|1>)/sqrt(2)`.
pub fn multicoin_run(coin_spaces: usize, steps: usize) -> Result<DecoheredRun> {
    if coin_spaces == 0 {
        return Err(Error::InvalidParameter(
            "need at least one coin space".into(),
        ));
    }
    let half_width = steps + 1;
    let npos = 2 * half_width + 1;
    let masks = 1usize
        .checked_shl(coin_spaces as u32)
        .ok_or(Error::DimensionCap {
            requested: usize::MAX,
            cap: 1 << 22,
        })?;
    let dim = masks.checked_mul(npos).ok_or(Error::DimensionCap {
        requested: usize::MAX,
        cap: 1 << 22,
    })?;
    if dim > (1 << 22) {
        return Err(Error::DimensionCap {
            requested: dim,
            cap: 1 << 22,
        });
    }

    let center = half_width;
    let r = 1.0 / 2f64.sqrt();
    let mut amps = vec![C0; dim];
    for mask in 0..masks {
        let ones = (mask as u32).count_ones();
        // (1/sqrt2)^M * i^{number of down factors}
        let scale = r.powi(coin_spaces as i32);
        amps[mask * npos + center] = Complex64::new(0.0, 1.0).powu(ones) * scale;
    }

    let mut next = vec![C0; dim];
    let mut times = Vec::with_capacity(steps);
    let mut variances = Vec::with_capacity(steps);
    let mut marginal = vec![0.0; npos];
    for t in 0..steps {
        let active = t % coin_spaces;
        let bit = 1usize << active;
        next.iter_mut().for_each(|a| *a = C0);
        for mask in 0..masks {
            if mask & bit != 0 {
                continue;
            }
            let m0 = mask;
            let m1 = mask | bit;
            for x in 0..npos {
                let a0 = amps[m0 * npos + x];
                let a1 = amps[m1 * npos + x];
                if a0 == C0 && a1 == C0 {
                    continue;
                }
                let up = (a0 + a1) * r;
                let down = (a0 - a1) * r;
                // factor value 0 steps right, 1 steps left
                if up != C0 {
                    next[m0 * npos + x + 1] += up;
                }
                if down != C0 {
                    next[m1 * npos + x - 1] += down;
                }
            }
        }
        std::mem::swap(&mut amps, &mut next);
        marginal.iter_mut().for_each(|p| *p = 0.0);
        for mask in 0..masks {
            for x in 0..npos {
                marginal[x] += amps[mask * npos + x].norm_sqr();
            }
        }
        let dist = Distribution::from_values(marginal.clone())?;
        let (_, var) = dist.moments(|v| v as f64 - center as f64)?;
        times.push((t + 1) as f64);
        variances.push(var);
    }
    let dist = Distribution::from_values(marginal)?;
    Ok(DecoheredRun {
        distribution: dist,
        variance: TimeSeries::new(times, variances)?,
    })
}
