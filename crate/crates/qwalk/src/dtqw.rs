//! Exact amplitude-level simulation of the discrete-time coined walk.
//!
//! One step is the unitary `U = S (C ⊗ I)`: the coin acts on the direction
//! register at every vertex, then the conditional shift moves the walker along
//! the port whose label matches the direction. Direction index `j` (0-based)
//! corresponds to edge label `j + 1`; on lines and circles index 0 moves
//! toward larger positions and index 1 toward smaller ones.
//!
//! States are plain complex amplitude vectors over `(direction, vertex)`.
//! All operations return new states; nothing is mutated in place, so distinct
//! states can be evolved concurrently.

use crate::coin::Coin;
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::graph::{Family, LabeledGraph};
use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use std::sync::Arc;

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// Coin choice per vertex. The uniform case is a constant map; irregular
/// padded graphs can mix coins of the common (padded) dimension.
#[derive(Debug, Clone)]
pub enum CoinAssignment {
    Uniform(Coin),
    PerVertex(Vec<Coin>),
}

impl CoinAssignment {
    fn coin(&self, v: usize) -> &Coin {
        match self {
            CoinAssignment::Uniform(c) => c,
            CoinAssignment::PerVertex(cs) => &cs[v],
        }
    }
}

/// Which register a projective measurement collapses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Register {
    Coin,
    Position,
}

/// A pure state of the coined walk with its squared norm kept explicit;
/// absorbing runs leave sub-unit mass behind.
#[derive(Debug, Clone)]
pub struct WalkState {
    graph: Arc<LabeledGraph>,
    coin_dim: usize,
    amps: Vec<Complex64>,
}

impl WalkState {
    pub fn from_amplitudes(
        graph: Arc<LabeledGraph>,
        coin_dim: usize,
        amps: Vec<Complex64>,
    ) -> Result<Self> {
        if amps.len() != coin_dim * graph.vertex_count() {
            return Err(Error::InvalidParameter(format!(
                "amplitude vector has {} entries, expected {}",
                amps.len(),
                coin_dim * graph.vertex_count()
            )));
        }
        let state = Self {
            graph,
            coin_dim,
            amps,
        };
        let mass = state.mass();
        if !(mass > 0.0 && mass <= 1.0 + 1e-9) {
            return Err(Error::NotNormalized { norm_sq: mass });
        }
        Ok(state)
    }

    #[inline]
    fn idx(&self, direction: usize, vertex: usize) -> usize {
        direction * self.graph.vertex_count() + vertex
    }

    pub fn amplitude(&self, direction: usize, vertex: usize) -> Complex64 {
        self.amps[self.idx(direction, vertex)]
    }

    pub fn coin_dim(&self) -> usize {
        self.coin_dim
    }

    pub fn graph(&self) -> &Arc<LabeledGraph> {
        &self.graph
    }

    pub fn mass(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of finding the walker at each vertex: the coin register is
    /// traced out.
    pub fn position_distribution(&self) -> Distribution {
        let n = self.graph.vertex_count();
        let mut values = vec![0.0; n];
        for c in 0..self.coin_dim {
            for v in 0..n {
                values[v] += self.amps[c * n + v].norm_sqr();
            }
        }
        Distribution::from_values(values).expect("squared magnitudes are nonnegative")
    }

    /// Probability of each coin direction, positions traced out.
    pub fn coin_distribution(&self) -> Vec<f64> {
        let n = self.graph.vertex_count();
        (0..self.coin_dim)
            .map(|c| (0..n).map(|v| self.amps[c * n + v].norm_sqr()).sum())
            .collect()
    }
}

/// Record of an absorbing run: mass removed at the boundary on every step.
#[derive(Debug, Clone)]
pub struct AbsorptionRecord {
    pub per_step: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub residual_mass: f64,
}

/// The walk operator for a fixed graph and coin assignment. Construction
/// precomputes the per-label shift permutations and verifies that the edge
/// labeling actually induces a unitary shift.
#[derive(Debug, Clone)]
pub struct CoinedWalk {
    graph: Arc<LabeledGraph>,
    coins: CoinAssignment,
    /// `shift[j][v]` is the endpoint of the label-`j+1` port at `v`.
    shift: Vec<Vec<u32>>,
    /// Inverse permutations: `inv_shift[j][shift[j][v]] == v`.
    inv_shift: Vec<Vec<u32>>,
    coin_dim: usize,
}

impl CoinedWalk {
    pub fn new(graph: Arc<LabeledGraph>, coins: CoinAssignment) -> Result<Self> {
        let n = graph.vertex_count();
        let d = graph.max_degree();
        let line_window = matches!(graph.family(), Family::LineWindow { .. });
        if !line_window {
            for v in 0..n {
                if graph.degree(v) != d {
                    return Err(Error::NotRegular {
                        vertex: v,
                        degree: graph.degree(v),
                        expected: d,
                    });
                }
            }
        }
        match &coins {
            CoinAssignment::Uniform(c) => {
                if c.dim() != d {
                    return Err(Error::CoinDegreeMismatch {
                        coin: c.dim(),
                        degree: d,
                        vertex: 0,
                    });
                }
            }
            CoinAssignment::PerVertex(cs) => {
                if cs.len() != n {
                    return Err(Error::InvalidParameter(format!(
                        "coin map has {} entries for {} vertices",
                        cs.len(),
                        n
                    )));
                }
                for (v, c) in cs.iter().enumerate() {
                    if c.dim() != d {
                        return Err(Error::CoinDegreeMismatch {
                            coin: c.dim(),
                            degree: d,
                            vertex: v,
                        });
                    }
                }
            }
        }
        let mut shift = vec![vec![u32::MAX; n]; d];
        if line_window {
            // A label-preserving shift on a path only extends to a unitary
            // through the cyclic closure at the two window edges. The window
            // guard raises WindowOverflow before any amplitude reaches them,
            // so the closure is never traversed; it exists to keep S unitary.
            for v in 0..n {
                shift[0][v] = if v + 1 < n { (v + 1) as u32 } else { 0 };
                shift[1][v] = if v > 0 { (v - 1) as u32 } else { (n - 1) as u32 };
            }
        } else {
            for v in 0..n {
                for &(label, w) in graph.ports(v) {
                    shift[label - 1][v] = w as u32;
                }
            }
            // each label class must form a permutation, otherwise S is not unitary
            for (j, perm) in shift.iter().enumerate() {
                let mut hit = vec![usize::MAX; n];
                for (v, &w) in perm.iter().enumerate() {
                    let w = w as usize;
                    if hit[w] != usize::MAX {
                        return Err(Error::NonUnitaryShift {
                            label: j + 1,
                            first: hit[w],
                            second: v,
                        });
                    }
                    hit[w] = v;
                }
            }
        }
        let mut inv_shift = vec![vec![0u32; n]; d];
        for (j, perm) in shift.iter().enumerate() {
            for (v, &w) in perm.iter().enumerate() {
                inv_shift[j][w as usize] = v as u32;
            }
        }
        Ok(Self {
            graph,
            coins,
            shift,
            inv_shift,
            coin_dim: d,
        })
    }

    /// `U m` for a matrix whose row index lives in the walk basis; used by the
    /// exact decoherence channel to avoid materializing the sparse `U`.
    pub(crate) fn apply_left(&self, m: &Array2<Complex64>) -> Array2<Complex64> {
        let n = self.graph.vertex_count();
        let d = self.coin_dim;
        let dim = d * n;
        debug_assert_eq!(m.nrows(), dim);
        let cols = m.ncols();
        let mut out = Array2::from_elem((dim, cols), C0);
        for c in 0..d {
            for w in 0..n {
                let v = self.inv_shift[c][w] as usize;
                let coin = self.coins.coin(v).matrix();
                let mut out_row = out.row_mut(c * n + w);
                for cp in 0..d {
                    let amp = coin[(c, cp)];
                    if amp == C0 {
                        continue;
                    }
                    let src = m.row(cp * n + v);
                    for (o, s) in out_row.iter_mut().zip(src.iter()) {
                        *o += amp * s;
                    }
                }
            }
        }
        out
    }

    pub fn graph(&self) -> &Arc<LabeledGraph> {
        &self.graph
    }

    pub fn coin_dim(&self) -> usize {
        self.coin_dim
    }

    /// Normalized state localized at `vertex` with the given coin amplitudes.
    pub fn initial_state(&self, vertex: usize, coin_amps: &[Complex64]) -> Result<WalkState> {
        let n = self.graph.vertex_count();
        if vertex >= n {
            return Err(Error::VertexOutOfRange { vertex, count: n });
        }
        if coin_amps.len() != self.coin_dim {
            return Err(Error::CoinDegreeMismatch {
                coin: coin_amps.len(),
                degree: self.coin_dim,
                vertex,
            });
        }
        let norm_sq: f64 = coin_amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sq });
        }
        let mut amps = vec![C0; self.coin_dim * n];
        for (c, &a) in coin_amps.iter().enumerate() {
            amps[c * n + vertex] = a;
        }
        Ok(WalkState {
            graph: Arc::clone(&self.graph),
            coin_dim: self.coin_dim,
            amps,
        })
    }

    fn guard_window(&self, amps: &[Complex64]) -> Result<()> {
        if let Family::LineWindow { .. } = self.graph.family() {
            let n = self.graph.vertex_count();
            for c in 0..self.coin_dim {
                if amps[c * n] != C0 || amps[c * n + n - 1] != C0 {
                    return Err(Error::WindowOverflow);
                }
            }
        }
        Ok(())
    }

    /// Writes `U src` into `dst`. Every `(direction, vertex)` slot receives
    /// exactly one contribution because each label class is a permutation.
    fn step_into(&self, src: &[Complex64], dst: &mut [Complex64]) {
        let n = self.graph.vertex_count();
        let d = self.coin_dim;
        let mut coined = vec![C0; d];
        for v in 0..n {
            let m = self.coins.coin(v).matrix();
            for (c, out) in coined.iter_mut().enumerate() {
                let mut acc = C0;
                for cp in 0..d {
                    let a = src[cp * n + v];
                    if a != C0 {
                        acc += m[(c, cp)] * a;
                    }
                }
                *out = acc;
            }
            for (c, &a) in coined.iter().enumerate() {
                dst[c * n + self.shift[c][v] as usize] = a;
            }
        }
    }

    /// One application of `U = S (C ⊗ I)`.
    pub fn step(&self, state: &WalkState) -> Result<WalkState> {
        self.check_state(state)?;
        self.guard_window(&state.amps)?;
        let mut dst = vec![C0; state.amps.len()];
        self.step_into(&state.amps, &mut dst);
        Ok(WalkState {
            graph: Arc::clone(&state.graph),
            coin_dim: state.coin_dim,
            amps: dst,
        })
    }

    /// `U^T`, erroring out if the support of a line-window walk would reach
    /// the boundary.
    pub fn evolve(&self, state: &WalkState, steps: usize) -> Result<WalkState> {
        self.check_state(state)?;
        let mut cur = state.amps.clone();
        let mut next = vec![C0; cur.len()];
        for _ in 0..steps {
            self.guard_window(&cur)?;
            self.step_into(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(WalkState {
            graph: Arc::clone(&state.graph),
            coin_dim: state.coin_dim,
            amps: cur,
        })
    }

    /// Runs `T` steps, each `U` followed by the partial measurement that
    /// removes (and records) the probability at every boundary vertex. The
    /// residual is left unnormalized so the cumulative absorption series is
    /// exact rather than sampled.
    pub fn run_absorbing(
        &self,
        state: &WalkState,
        boundaries: &[usize],
        steps: usize,
    ) -> Result<AbsorptionRecord> {
        self.check_state(state)?;
        if boundaries.is_empty() {
            return Err(Error::BadBoundary);
        }
        let n = self.graph.vertex_count();
        for &b in boundaries {
            if b >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: b,
                    count: n,
                });
            }
        }
        let start_dist = state.position_distribution();
        if boundaries.iter().any(|&b| start_dist.get(b) > 0.0) {
            return Err(Error::BadBoundary);
        }
        let mut cur = state.amps.clone();
        let mut next = vec![C0; cur.len()];
        let mut per_step = Vec::with_capacity(steps);
        let mut cumulative = Vec::with_capacity(steps);
        let mut cum = 0.0;
        for _ in 0..steps {
            self.guard_window(&cur)?;
            self.step_into(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
            let mut absorbed = 0.0;
            for &b in boundaries {
                for c in 0..self.coin_dim {
                    let slot = &mut cur[c * n + b];
                    absorbed += slot.norm_sqr();
                    *slot = C0;
                }
            }
            cum += absorbed;
            per_step.push(absorbed);
            cumulative.push(cum);
        }
        let residual_mass: f64 = cur.iter().map(|a| a.norm_sqr()).sum();
        Ok(AbsorptionRecord {
            per_step,
            cumulative,
            residual_mass,
        })
    }

    /// Born-rule measurement of one register; the outcome is the measured
    /// direction or vertex index and the state collapses accordingly.
    pub fn measure(
        &self,
        state: &WalkState,
        register: Register,
        rng: &mut impl Rng,
    ) -> Result<(usize, WalkState)> {
        self.check_state(state)?;
        let mass = state.mass();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm_sq: mass });
        }
        let n = self.graph.vertex_count();
        let probs: Vec<f64> = match register {
            Register::Coin => state.coin_distribution(),
            Register::Position => state.position_distribution().values().to_vec(),
        };
        let u: f64 = rng.random::<f64>();
        let mut acc = 0.0;
        let mut outcome = probs.len() - 1;
        for (k, &p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                outcome = k;
                break;
            }
        }
        let keep = 1.0 / probs[outcome].sqrt();
        let mut amps = state.amps.clone();
        for c in 0..self.coin_dim {
            for v in 0..n {
                let matches = match register {
                    Register::Coin => c == outcome,
                    Register::Position => v == outcome,
                };
                let slot = &mut amps[c * n + v];
                *slot = if matches { *slot * keep } else { C0 };
            }
        }
        Ok((
            outcome,
            WalkState {
                graph: Arc::clone(&state.graph),
                coin_dim: state.coin_dim,
                amps,
            },
        ))
    }

    /// Dense matrix of `U` in the `(direction, vertex)` basis. Intended for
    /// spectral analysis of desk-sized walks.
    pub fn unitary_matrix(&self) -> Array2<Complex64> {
        let n = self.graph.vertex_count();
        let d = self.coin_dim;
        let dim = d * n;
        let mut u = Array2::from_elem((dim, dim), C0);
        for v in 0..n {
            let m = self.coins.coin(v).matrix();
            for c in 0..d {
                let w = self.shift[c][v] as usize;
                for cp in 0..d {
                    u[(c * n + w, cp * n + v)] = m[(c, cp)];
                }
            }
        }
        u
    }

    fn check_state(&self, state: &WalkState) -> Result<()> {
        if state.coin_dim != self.coin_dim || state.graph.vertex_count() != self.graph.vertex_count()
        {
            return Err(Error::InvalidParameter(
                "state does not belong to this walk".into(),
            ));
        }
        Ok(())
    }
}

/// The boundary measurement `M_b` on its own: removes the amplitude at each
/// boundary vertex and returns the removed mass together with the
/// unnormalized residual state.
pub fn absorb_at(state: &WalkState, boundaries: &[usize]) -> (f64, WalkState) {
    let n = state.graph.vertex_count();
    let mut amps = state.amps.clone();
    let mut absorbed = 0.0;
    for &b in boundaries {
        for c in 0..state.coin_dim {
            let slot = &mut amps[c * n + b];
            absorbed += slot.norm_sqr();
            *slot = C0;
        }
    }
    (
        absorbed,
        WalkState {
            graph: Arc::clone(&state.graph),
            coin_dim: state.coin_dim,
            amps,
        },
    )
}

/// Iterator over the instantaneous position distributions at steps 1, 2, ...
pub fn distribution_sequence<'a>(
    walk: &'a CoinedWalk,
    start: &WalkState,
) -> impl Iterator<Item = Distribution> + 'a {
    let mut state = start.clone();
    std::iter::from_fn(move || match walk.step(&state) {
        Ok(next) => {
            state = next;
            Some(state.position_distribution())
        }
        Err(_) => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabeledGraph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line_walk(half_width: usize, coin: Coin) -> CoinedWalk {
        let g = Arc::new(LabeledGraph::line_window(half_width).unwrap().pad_self_loops());
        CoinedWalk::new(g, CoinAssignment::Uniform(coin)).unwrap()
    }

    fn up() -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0), C0]
    }

    fn down() -> Vec<Complex64> {
        vec![C0, Complex64::new(1.0, 0.0)]
    }

    #[test]
    fn hadamard_step_from_up_splits_evenly() {
        let walk = line_walk(3, Coin::hadamard());
        let center = walk.graph().position_vertex(0).unwrap();
        let s0 = walk.initial_state(center, &up()).unwrap();
        let s1 = walk.step(&s0).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let right = walk.graph().position_vertex(1).unwrap();
        let left = walk.graph().position_vertex(-1).unwrap();
        assert!((s1.amplitude(0, right) - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!((s1.amplitude(1, left) - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!((s1.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hadamard_step_from_down_picks_up_sign() {
        let walk = line_walk(3, Coin::hadamard());
        let center = walk.graph().position_vertex(0).unwrap();
        let s1 = walk
            .step(&walk.initial_state(center, &down()).unwrap())
            .unwrap();
        let r = 1.0 / 2f64.sqrt();
        let right = walk.graph().position_vertex(1).unwrap();
        let left = walk.graph().position_vertex(-1).unwrap();
        assert!((s1.amplitude(0, right) - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!((s1.amplitude(1, left) + Complex64::new(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_coin_is_a_pure_shift() {
        let walk = line_walk(9, Coin::identity(2).unwrap());
        let center = walk.graph().position_vertex(0).unwrap();
        let s = walk.initial_state(center, &up()).unwrap();
        let s7 = walk.evolve(&s, 7).unwrap();
        let target = walk.graph().position_vertex(7).unwrap();
        assert!((s7.amplitude(0, target).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_step_amplitudes_from_down_start() {
        // (1/2sqrt2) (|up,3> + |down,1> + |up,-1> - 2 |down,-1> - |down,-3>)
        let walk = line_walk(5, Coin::hadamard());
        let center = walk.graph().position_vertex(0).unwrap();
        let s3 = walk
            .evolve(&walk.initial_state(center, &down()).unwrap(), 3)
            .unwrap();
        let a = 1.0 / (2.0 * 2f64.sqrt());
        let g = walk.graph();
        let cases = [
            (0, 3, a),
            (1, 1, a),
            (0, -1, a),
            (1, -1, -2.0 * a),
            (1, -3, -a),
        ];
        let mut checked_mass = 0.0;
        for (c, pos, expect) in cases {
            let v = g.position_vertex(pos).unwrap();
            let got = s3.amplitude(c, v);
            assert!(
                (got - Complex64::new(expect, 0.0)).norm() < 1e-12,
                "direction {c} position {pos}: got {got}"
            );
            checked_mass += expect * expect;
        }
        assert!((checked_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolve_zero_steps_is_identity() {
        let walk = line_walk(3, Coin::hadamard());
        let center = walk.graph().position_vertex(0).unwrap();
        let s = walk.initial_state(center, &down()).unwrap();
        let s0 = walk.evolve(&s, 0).unwrap();
        assert_eq!(s.amps, s0.amps);
    }

    #[test]
    fn quantum_table_rows_t4_and_t5() {
        let walk = line_walk(6, Coin::hadamard());
        let center = walk.graph().position_vertex(0).unwrap();
        let start = walk.initial_state(center, &down()).unwrap();
        let g = walk.graph();

        let t4 = walk.evolve(&start, 4).unwrap().position_distribution();
        let expected4 = [
            (-4, 1.0 / 16.0),
            (-2, 5.0 / 8.0),
            (0, 1.0 / 8.0),
            (2, 1.0 / 8.0),
            (4, 1.0 / 16.0),
        ];
        for (pos, p) in expected4 {
            let v = g.position_vertex(pos).unwrap();
            assert!((t4.get(v) - p).abs() < 1e-12, "T=4 position {pos}");
        }

        let t5 = walk.evolve(&start, 5).unwrap().position_distribution();
        let expected5 = [
            (-5, 1.0 / 32.0),
            (-3, 17.0 / 32.0),
            (-1, 1.0 / 8.0),
            (1, 1.0 / 8.0),
            (3, 5.0 / 32.0),
            (5, 1.0 / 32.0),
        ];
        for (pos, p) in expected5 {
            let v = g.position_vertex(pos).unwrap();
            assert!((t5.get(v) - p).abs() < 1e-12, "T=5 position {pos}");
        }
    }

    #[test]
    fn symmetric_start_gives_symmetric_distribution() {
        let walk = line_walk(40, Coin::hadamard());
        let center = walk.graph().position_vertex(0).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let sym = [Complex64::new(r, 0.0), Complex64::new(0.0, r)];
        let s = walk.initial_state(center, &sym).unwrap();
        let dist = walk.evolve(&s, 30).unwrap().position_distribution();
        let g = walk.graph();
        for pos in 0..=30i64 {
            let a = dist.get(g.position_vertex(pos).unwrap());
            let b = dist.get(g.position_vertex(-pos).unwrap());
            assert!((a - b).abs() < 1e-12, "position {pos}");
        }
    }

    #[test]
    fn y_coin_basis_starts_mirror_each_other() {
        // the coin treats the two directions identically, so the walk from
        // |up> is the exact mirror image of the walk from |down>
        let walk = line_walk(30, Coin::y());
        let center = walk.graph().position_vertex(0).unwrap();
        let from_up = walk
            .evolve(&walk.initial_state(center, &up()).unwrap(), 25)
            .unwrap()
            .position_distribution();
        let from_down = walk
            .evolve(&walk.initial_state(center, &down()).unwrap(), 25)
            .unwrap()
            .position_distribution();
        let g = walk.graph();
        for pos in -25..=25i64 {
            let a = from_up.get(g.position_vertex(pos).unwrap());
            let b = from_down.get(g.position_vertex(-pos).unwrap());
            assert!((a - b).abs() < 1e-12, "position {pos}");
        }
    }

    #[test]
    fn y_coin_balanced_real_start_is_symmetric() {
        let walk = line_walk(30, Coin::y());
        let center = walk.graph().position_vertex(0).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let start = [Complex64::new(r, 0.0), Complex64::new(r, 0.0)];
        let dist = walk
            .evolve(&walk.initial_state(center, &start).unwrap(), 25)
            .unwrap()
            .position_distribution();
        let g = walk.graph();
        for pos in 0..=25i64 {
            let a = dist.get(g.position_vertex(pos).unwrap());
            let b = dist.get(g.position_vertex(-pos).unwrap());
            assert!((a - b).abs() < 1e-12, "position {pos}");
        }
    }

    #[test]
    fn parity_zeros_after_even_and_odd_steps() {
        let walk = line_walk(12, Coin::hadamard());
        let center = walk.graph().position_vertex(0).unwrap();
        let start = walk.initial_state(center, &down()).unwrap();
        let g = walk.graph();
        for t in 0..=10usize {
            let dist = walk.evolve(&start, t).unwrap().position_distribution();
            for pos in -10..=10i64 {
                // positions of the wrong parity carry no probability
                if pos.rem_euclid(2) as usize != t % 2 {
                    assert_eq!(dist.get(g.position_vertex(pos).unwrap()), 0.0);
                }
            }
        }
    }

    #[test]
    fn window_overflow_detected() {
        let walk = line_walk(3, Coin::hadamard());
        let center = walk.graph().position_vertex(0).unwrap();
        let s = walk.initial_state(center, &down()).unwrap();
        assert!(walk.evolve(&s, 3).is_ok());
        assert!(matches!(
            walk.evolve(&s, 4),
            Err(Error::WindowOverflow)
        ));
    }

    #[test]
    fn circle_walk_preserves_mass_without_window() {
        let g = Arc::new(LabeledGraph::circle(5).unwrap());
        let walk = CoinedWalk::new(g, CoinAssignment::Uniform(Coin::hadamard())).unwrap();
        let s = walk.initial_state(2, &up()).unwrap();
        assert!((s.mass() - 1.0).abs() < 1e-12);
        let s40 = walk.evolve(&s, 40).unwrap();
        assert!((s40.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_measurement_worked_example() {
        // state (1/sqrt(14)) (2 |up,0> - |up,1> + 3 |down,1>): measuring at 0
        // absorbs 2/7 and leaves the unnormalized residual intact elsewhere
        let g = Arc::new(LabeledGraph::line_window(2).unwrap().pad_self_loops());
        let n = g.vertex_count();
        let v0 = g.position_vertex(0).unwrap();
        let v1 = g.position_vertex(1).unwrap();
        let norm = 1.0 / 14f64.sqrt();
        let mut amps = vec![C0; 2 * n];
        amps[v0] = Complex64::new(2.0 * norm, 0.0);
        amps[v1] = Complex64::new(-norm, 0.0);
        amps[n + v1] = Complex64::new(3.0 * norm, 0.0);
        let state = WalkState::from_amplitudes(g, 2, amps).unwrap();

        let (absorbed, residual) = absorb_at(&state, &[v0]);
        assert!((absorbed - 2.0 / 7.0).abs() < 1e-12);
        assert!((residual.mass() - 5.0 / 7.0).abs() < 1e-12);

        // normalized collapse reproduces (1/sqrt(10)) (-|up,1> + 3 |down,1>)
        let scale = 1.0 / residual.mass().sqrt();
        let a_up = residual.amplitude(0, v1) * scale;
        let a_down = residual.amplitude(1, v1) * scale;
        assert!((a_up - Complex64::new(-1.0 / 10f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((a_down - Complex64::new(3.0 / 10f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn absorbing_record_is_consistent() {
        let walk = line_walk(60, Coin::hadamard());
        let g = walk.graph();
        let start = walk
            .initial_state(g.position_vertex(1).unwrap(), &up())
            .unwrap();
        let rec = walk
            .run_absorbing(&start, &[g.position_vertex(0).unwrap()], 50)
            .unwrap();
        for w in rec.cumulative.windows(2) {
            assert!(w[1] >= w[0] - 1e-15);
        }
        let last = *rec.cumulative.last().unwrap();
        assert!(last <= 1.0 + 1e-12);
        assert!((last + rec.residual_mass - 1.0).abs() < 1e-9);
        // U sends |up,1> to (|up,2> + |down,0>)/sqrt(2), so half the mass is
        // absorbed on the first step, none on the second, 1/8 on the third
        assert!((rec.per_step[0] - 0.5).abs() < 1e-12);
        assert!((rec.per_step[1] - 0.0).abs() < 1e-15);
        assert!((rec.per_step[2] - 0.125).abs() < 1e-12);
    }

    #[test]
    fn measurement_is_seed_deterministic() {
        let walk = line_walk(8, Coin::hadamard());
        let center = walk.graph().position_vertex(0).unwrap();
        let s = walk.initial_state(center, &down()).unwrap();
        let s3 = walk.evolve(&s, 3).unwrap();
        let run = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..10)
                .map(|_| walk.measure(&s3, Register::Position, &mut rng).unwrap().0)
                .collect::<Vec<_>>()
        };
        assert_eq!(run(7), run(7));
    }

    #[test]
    fn coin_measurement_collapses_position() {
        // (|up,1> + |down,-1>)/sqrt(2): measuring the coin picks each branch
        // with probability 1/2 and collapses the position register with it
        let walk = line_walk(3, Coin::hadamard());
        let center = walk.graph().position_vertex(0).unwrap();
        let s1 = walk
            .step(&walk.initial_state(center, &up()).unwrap())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut seen = [0usize; 2];
        for _ in 0..400 {
            let (outcome, collapsed) = walk.measure(&s1, Register::Coin, &mut rng).unwrap();
            seen[outcome] += 1;
            let expect_pos = if outcome == 0 { 1 } else { -1 };
            let v = walk.graph().position_vertex(expect_pos).unwrap();
            assert!((collapsed.amplitude(outcome, v).norm() - 1.0).abs() < 1e-12);
        }
        assert!(seen[0] > 150 && seen[1] > 150, "{seen:?}");
    }

    #[test]
    fn per_vertex_coins_must_match_degree() {
        let g = Arc::new(LabeledGraph::circle(4).unwrap());
        let bad = CoinAssignment::Uniform(Coin::identity(3).unwrap());
        assert!(CoinedWalk::new(g, bad).is_err());
    }

    #[test]
    fn colliding_labels_rejected_as_nonunitary() {
        // both outer vertices send label 1 into the center
        let ports = vec![
            vec![(1, 1), (2, 0)],
            vec![(1, 2), (2, 0)],
            vec![(1, 1), (2, 2)],
        ];
        let g = Arc::new(
            LabeledGraph::from_ports(ports, crate::graph::Family::General).unwrap(),
        );
        let res = CoinedWalk::new(g, CoinAssignment::Uniform(Coin::hadamard()));
        assert!(matches!(res, Err(Error::NonUnitaryShift { .. })));
    }
}
