//! Classical random-walk engine: exact distribution evolution under a
//! column-stochastic matrix, stationary distribution and spectral gap,
//! mixing-time bounds, expected hitting times, absorbing runs, and the two
//! randomized algorithms (2-SAT by clause-variable flipping and s-t
//! connectivity by bounded random walk).

use crate::dist::Distribution;
use crate::dtqw::AbsorptionRecord;
use crate::error::{Error, Result};
use crate::graph::{BiasedChain, LabeledGraph};
use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, Solve, UPLO};
use rand::Rng;

/// Column-stochastic matrix: `M[(i, j)]` is the probability of moving from
/// `j` to `i`, so distributions evolve as `p' = M p`.
#[derive(Debug, Clone)]
pub struct StochasticMatrix {
    matrix: Array2<f64>,
}

impl StochasticMatrix {
    pub fn new(matrix: Array2<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::BadMatrix("matrix must be square".into()));
        }
        for j in 0..matrix.ncols() {
            let mut col = 0.0;
            for i in 0..matrix.nrows() {
                let x = matrix[(i, j)];
                if x < -1e-15 {
                    return Err(Error::BadMatrix(format!("negative entry at ({i},{j})")));
                }
                col += x;
            }
            if (col - 1.0).abs() > 1e-12 {
                return Err(Error::BadMatrix(format!(
                    "column {j} sums to {col}, expected 1"
                )));
            }
        }
        Ok(Self { matrix })
    }

    /// Simple-random-walk matrix of a graph: from each vertex every port
    /// (self-loops included) is taken with probability `1/deg`.
    pub fn from_graph(graph: &LabeledGraph) -> Result<Self> {
        let n = graph.vertex_count();
        let mut matrix = Array2::zeros((n, n));
        for v in 0..n {
            let deg = graph.degree(v);
            if deg == 0 {
                return Err(Error::BadMatrix(format!("vertex {v} is isolated")));
            }
            let p = 1.0 / deg as f64;
            for &(_, w) in graph.ports(v) {
                matrix[(w, v)] += p;
            }
        }
        Ok(Self { matrix })
    }

    /// Birth-death chain as a stochastic matrix; any probability not spent on
    /// the up/down moves stays put.
    pub fn from_chain(chain: &BiasedChain) -> Result<Self> {
        let n = chain.states();
        let mut matrix = Array2::zeros((n, n));
        for i in 0..n {
            let up = if i < n - 1 { chain.up[i] } else { 0.0 };
            let down = if i > 0 { chain.down[i - 1] } else { 0.0 };
            let stay = 1.0 - up - down;
            if !(-1e-12..=1.0 + 1e-12).contains(&stay) {
                return Err(Error::BadMatrix(format!(
                    "chain probabilities at state {i} sum to more than 1"
                )));
            }
            if i < n - 1 {
                matrix[(i + 1, i)] = up;
            }
            if i > 0 {
                matrix[(i - 1, i)] = down;
            }
            matrix[(i, i)] = stay.max(0.0);
        }
        Self::new(matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn step(&self, p: &Distribution) -> Result<Distribution> {
        if p.len() != self.dim() {
            return Err(Error::SupportMismatch {
                left: p.len(),
                right: self.dim(),
            });
        }
        let v = Array1::from_iter(p.values().iter().cloned());
        let next = self.matrix.dot(&v);
        Distribution::from_values(next.to_vec())
    }

    /// `M^T p0` by repeated application.
    pub fn evolve(&self, p0: &Distribution, steps: usize) -> Result<Distribution> {
        let mut p = p0.clone();
        for _ in 0..steps {
            p = self.step(&p)?;
        }
        Ok(p)
    }

    /// Instantaneous distributions at steps 1, 2, ...
    pub fn distribution_sequence<'a>(
        &'a self,
        p0: &Distribution,
    ) -> impl Iterator<Item = Distribution> + 'a {
        let mut p = p0.clone();
        std::iter::from_fn(move || {
            p = self.step(&p).ok()?;
            Some(p.clone())
        })
    }

    /// Evolves while removing (and recording) the probability at the boundary
    /// vertices after every step.
    pub fn absorbing_run(
        &self,
        p0: &Distribution,
        boundaries: &[usize],
        steps: usize,
    ) -> Result<AbsorptionRecord> {
        if boundaries.is_empty() {
            return Err(Error::BadBoundary);
        }
        let mut p = p0.values().to_vec();
        let mut per_step = Vec::with_capacity(steps);
        let mut cumulative = Vec::with_capacity(steps);
        let mut cum = 0.0;
        let n = self.dim();
        let mut next = vec![0.0; n];
        for _ in 0..steps {
            next.iter_mut().for_each(|x| *x = 0.0);
            for j in 0..n {
                let pj = p[j];
                if pj == 0.0 {
                    continue;
                }
                for i in 0..n {
                    let m = self.matrix[(i, j)];
                    if m != 0.0 {
                        next[i] += m * pj;
                    }
                }
            }
            std::mem::swap(&mut p, &mut next);
            let mut absorbed = 0.0;
            for &b in boundaries {
                absorbed += p[b];
                p[b] = 0.0;
            }
            cum += absorbed;
            per_step.push(absorbed);
            cumulative.push(cum);
        }
        Ok(AbsorptionRecord {
            per_step,
            cumulative,
            residual_mass: p.iter().sum(),
        })
    }

    /// Stationary distribution and spectral data. The stationary vector comes
    /// from the singular linear system `(M - I) pi = 0` with unit total mass;
    /// eigenvalues come from the symmetrization available for reversible
    /// chains, which covers every simple walk on an undirected graph.
    pub fn stationary_and_gap(&self) -> Result<StationaryInfo> {
        let n = self.dim();
        let mut a = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = self.matrix[(i, j)] - if i == j { 1.0 } else { 0.0 };
            }
        }
        for j in 0..n {
            a[(n - 1, j)] = 1.0;
        }
        let mut b = Array1::zeros(n);
        b[n - 1] = 1.0;
        let pi = a.solve(&b).map_err(|_| Error::SingularSystem)?;
        if pi.iter().any(|&x| x < -1e-9) {
            return Err(Error::SingularSystem);
        }

        // detailed balance required for the symmetrized eigenproblem
        let mut balance_err = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                balance_err =
                    balance_err.max((pi[j] * self.matrix[(i, j)] - pi[i] * self.matrix[(j, i)]).abs());
            }
        }
        if balance_err > 1e-9 {
            return Err(Error::BadMatrix(format!(
                "chain is not reversible (detailed-balance violation {balance_err}); spectral gap unsupported"
            )));
        }

        let mut sym = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                sym[(i, j)] = self.matrix[(i, j)] * (pi[j] / pi[i]).sqrt();
            }
        }
        // enforce exact symmetry against rounding before the eigensolve
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (sym[(i, j)] + sym[(j, i)]);
                sym[(i, j)] = avg;
                sym[(j, i)] = avg;
            }
        }
        let (evals, _) = sym
            .eigh(UPLO::Lower)
            .map_err(|e| Error::Eigen(e.to_string()))?;
        let mut sorted: Vec<f64> = evals.to_vec();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let lambda2 = sorted[1];
        let lambda_abs = sorted[1..]
            .iter()
            .map(|x| x.abs())
            .fold(0.0f64, f64::max);
        let bipartite = sorted.last().map(|&x| x <= -1.0 + 1e-9).unwrap_or(false);
        Ok(StationaryInfo {
            stationary: Distribution::from_values(pi.iter().map(|x| x.max(0.0)).collect())?,
            lambda2,
            lambda_abs,
            bipartite,
        })
    }

    /// Expected steps to reach `target` from `start`, by solving the
    /// first-step equations exactly.
    pub fn expected_hitting(&self, start: usize, target: usize) -> Result<f64> {
        let n = self.dim();
        if start >= n || target >= n {
            return Err(Error::VertexOutOfRange {
                vertex: start.max(target),
                count: n,
            });
        }
        if start == target {
            return Ok(0.0);
        }
        // states other than target, densely renumbered
        let others: Vec<usize> = (0..n).filter(|&v| v != target).collect();
        let index_of = |v: usize| if v < target { v } else { v - 1 };
        let m = others.len();
        let mut a = Array2::zeros((m, m));
        let mut b = Array1::zeros(m);
        for &v in &others {
            let row = index_of(v);
            b[row] = 1.0;
            a[(row, row)] = 1.0;
            for &u in &others {
                // P(v -> u) = M[(u, v)]
                a[(row, index_of(u))] -= self.matrix[(u, v)];
            }
        }
        let h = a.solve(&b).map_err(|_| Error::SingularSystem)?;
        let value = h[index_of(start)];
        if !value.is_finite() || value < 0.0 {
            return Err(Error::SingularSystem);
        }
        Ok(value)
    }
}

#[derive(Debug, Clone)]
pub struct StationaryInfo {
    pub stationary: Distribution,
    /// Second largest signed eigenvalue.
    pub lambda2: f64,
    /// Largest absolute value among the non-leading eigenvalues; differs from
    /// `lambda2` exactly in the bipartite diagnostics.
    pub lambda_abs: f64,
    pub bipartite: bool,
}

/// Eigenvalue-gap bounds on the mixing time:
/// `lambda2 / (1 - lambda2) * ln(1/(2 eps))  <=  M_eps  <=
///  (max_i ln(1/pi_i) + ln(1/eps)) / (1 - lambda2)`.
pub fn mixing_bounds(lambda2: f64, stationary: &Distribution, eps: f64) -> Result<(f64, f64)> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::InvalidParameter("eps must be in (0, 1)".into()));
    }
    if lambda2 >= 1.0 - 1e-12 {
        return Err(Error::BadMatrix(
            "lambda2 = 1: disconnected chain, bounds diverge".into(),
        ));
    }
    let gap = 1.0 - lambda2;
    let lower = lambda2 / gap * (1.0 / (2.0 * eps)).ln();
    let max_log_pi = stationary
        .values()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| (1.0 / p).ln())
        .fold(0.0f64, f64::max);
    let upper = (max_log_pi + (1.0 / eps).ln()) / gap;
    Ok((lower, upper))
}

/// One exact step of a birth-death chain, `O(states)`.
pub fn chain_step(chain: &BiasedChain, p: &[f64], next: &mut [f64]) {
    let n = chain.states();
    debug_assert_eq!(p.len(), n);
    debug_assert_eq!(next.len(), n);
    for (i, slot) in next.iter_mut().enumerate() {
        let up = if i < n - 1 { chain.up[i] } else { 0.0 };
        let down = if i > 0 { chain.down[i - 1] } else { 0.0 };
        let mut acc = (1.0 - up - down) * p[i];
        if i > 0 {
            acc += chain.up[i - 1] * p[i - 1];
        }
        if i < n - 1 {
            acc += chain.down[i] * p[i + 1];
        }
        *slot = acc;
    }
}

/// `T` exact steps of a birth-death chain.
pub fn evolve_chain(chain: &BiasedChain, p0: &Distribution, steps: usize) -> Result<Distribution> {
    if p0.len() != chain.states() {
        return Err(Error::SupportMismatch {
            left: p0.len(),
            right: chain.states(),
        });
    }
    let mut p = p0.values().to_vec();
    let mut next = vec![0.0; p.len()];
    for _ in 0..steps {
        chain_step(chain, &p, &mut next);
        std::mem::swap(&mut p, &mut next);
    }
    Distribution::from_values(p)
}

/// Absorbing run on a birth-death chain: after each step the probability at
/// the boundary states is removed and recorded.
pub fn chain_absorbing_run(
    chain: &BiasedChain,
    p0: &Distribution,
    boundaries: &[usize],
    steps: usize,
) -> Result<AbsorptionRecord> {
    if boundaries.is_empty() {
        return Err(Error::BadBoundary);
    }
    let mut p = p0.values().to_vec();
    let mut next = vec![0.0; p.len()];
    let mut per_step = Vec::with_capacity(steps);
    let mut cumulative = Vec::with_capacity(steps);
    let mut cum = 0.0;
    for _ in 0..steps {
        chain_step(chain, &p, &mut next);
        std::mem::swap(&mut p, &mut next);
        let mut absorbed = 0.0;
        for &b in boundaries {
            absorbed += p[b];
            p[b] = 0.0;
        }
        cum += absorbed;
        per_step.push(absorbed);
        cumulative.push(cum);
    }
    Ok(AbsorptionRecord {
        per_step,
        cumulative,
        residual_mass: p.iter().sum(),
    })
}

/// A 2-literal clause: nonzero signed variable indices, 1-based. Positive
/// means the variable must be true, negative means false.
pub type Clause = [i32; 2];

#[derive(Debug, Clone)]
pub struct CnfFormula {
    variable_count: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(variable_count: usize, clauses: Vec<Clause>) -> Result<Self> {
        for (k, c) in clauses.iter().enumerate() {
            for &lit in c {
                if lit == 0 || lit.unsigned_abs() as usize > variable_count {
                    return Err(Error::BadFormula(format!(
                        "literal {lit} out of range in clause {k}"
                    )));
                }
            }
        }
        Ok(Self {
            variable_count,
            clauses,
        })
    }

    /// DIMACS-style text: a `p cnf <vars> <clauses>` header, then one
    /// zero-terminated 2-literal clause per line. `c` comment lines allowed.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut variable_count = None;
        let mut declared = 0usize;
        let mut clauses = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 3 || fields[0] != "cnf" {
                    return Err(Error::BadFormula(format!("bad header: {line}")));
                }
                variable_count = Some(
                    fields[1]
                        .parse::<usize>()
                        .map_err(|e| Error::BadFormula(e.to_string()))?,
                );
                declared = fields[2]
                    .parse::<usize>()
                    .map_err(|e| Error::BadFormula(e.to_string()))?;
                continue;
            }
            let nums: Vec<i32> = line
                .split_whitespace()
                .map(|w| w.parse::<i32>().map_err(|e| Error::BadFormula(e.to_string())))
                .collect::<Result<_>>()?;
            match nums.as_slice() {
                [a, b, 0] => clauses.push([*a, *b]),
                _ => {
                    return Err(Error::BadFormula(format!(
                        "expected `lit lit 0`, got: {line}"
                    )))
                }
            }
        }
        let variable_count =
            variable_count.ok_or_else(|| Error::BadFormula("missing p cnf header".into()))?;
        if clauses.len() != declared {
            return Err(Error::BadFormula(format!(
                "header declares {declared} clauses, found {}",
                clauses.len()
            )));
        }
        Self::new(variable_count, clauses)
    }

    /// The three-variable demo instance whose unique satisfying assignment is
    /// `110` (variables 1 and 2 true, variable 3 false).
    pub fn walk_demo() -> Self {
        Self::new(3, vec![[-1, 2], [1, -3], [-2, -3], [1, 3]]).unwrap()
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    fn literal_satisfied(lit: i32, assignment: &[bool]) -> bool {
        let value = assignment[(lit.unsigned_abs() as usize) - 1];
        if lit > 0 {
            value
        } else {
            !value
        }
    }

    pub fn clause_satisfied(&self, k: usize, assignment: &[bool]) -> bool {
        self.clauses[k]
            .iter()
            .any(|&lit| Self::literal_satisfied(lit, assignment))
    }

    /// First clause (by index) violated by the assignment, if any.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        (0..self.clauses.len()).find(|&k| !self.clause_satisfied(k, assignment))
    }

    pub fn is_satisfied(&self, assignment: &[bool]) -> bool {
        self.first_unsatisfied(assignment).is_none()
    }
}

#[derive(Debug, Clone)]
pub struct TwoSatRun {
    /// A satisfying assignment when one was found within the flip budget.
    pub assignment: Option<Vec<bool>>,
    /// Variable flips performed.
    pub flips: usize,
}

/// Random-walk 2-SAT: start from a random assignment and repeatedly flip one
/// of the two variables of the first unsatisfied clause, chosen by a fair
/// coin, until satisfaction or until `max_steps` flips.
pub fn two_sat_walk(formula: &CnfFormula, rng: &mut impl Rng, max_steps: usize) -> TwoSatRun {
    let n = formula.variable_count();
    let mut assignment: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
    for flips in 0..max_steps {
        match formula.first_unsatisfied(&assignment) {
            None => {
                return TwoSatRun {
                    assignment: Some(assignment),
                    flips,
                }
            }
            Some(k) => {
                let clause = formula.clauses()[k];
                let lit = clause[usize::from(rng.random::<bool>())];
                let var = (lit.unsigned_abs() as usize) - 1;
                assignment[var] = !assignment[var];
            }
        }
    }
    if formula.is_satisfied(&assignment) {
        TwoSatRun {
            assignment: Some(assignment),
            flips: max_steps,
        }
    } else {
        TwoSatRun {
            assignment: None,
            flips: max_steps,
        }
    }
}

/// Random satisfiable 2-SAT instance with a planted assignment; each clause
/// is repaired, when needed, by flipping the sign of one of its literals.
pub fn random_satisfiable_2sat(
    variables: usize,
    clause_count: usize,
    rng: &mut impl Rng,
) -> (CnfFormula, Vec<bool>) {
    assert!(variables >= 2);
    let planted: Vec<bool> = (0..variables).map(|_| rng.random::<bool>()).collect();
    let mut clauses = Vec::with_capacity(clause_count);
    for _ in 0..clause_count {
        let a = rng.random_range(0..variables);
        let mut b = rng.random_range(0..variables - 1);
        if b >= a {
            b += 1;
        }
        let mut lits: Vec<i32> = [a, b]
            .iter()
            .map(|&v| {
                let sign = if rng.random::<bool>() { 1 } else { -1 };
                sign * (v as i32 + 1)
            })
            .collect();
        let satisfied = lits
            .iter()
            .any(|&lit| CnfFormula::literal_satisfied(lit, &planted));
        if !satisfied {
            let fix = rng.random_range(0..2);
            lits[fix] = -lits[fix];
        }
        clauses.push([lits[0], lits[1]]);
    }
    (CnfFormula::new(variables, clauses).unwrap(), planted)
}

/// Random walk decision procedure for s-t connectivity: walk `|V|^3` steps
/// from `s` and answer YES exactly when `t` was visited.
pub fn st_connectivity(
    graph: &LabeledGraph,
    s: usize,
    t: usize,
    rng: &mut impl Rng,
) -> Result<bool> {
    let n = graph.vertex_count();
    if s >= n || t >= n {
        return Err(Error::VertexOutOfRange {
            vertex: s.max(t),
            count: n,
        });
    }
    if s == t {
        return Ok(true);
    }
    let budget = n * n * n;
    let mut at = s;
    for _ in 0..budget {
        let ports = graph.ports(at);
        at = ports[rng.random_range(0..ports.len())].1;
        if at == t {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{glued_trees_column_chain, reduce_hypercube_chain};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circle_transition_matrix_halves() {
        let g = LabeledGraph::circle(6).unwrap();
        let m = StochasticMatrix::from_graph(&g).unwrap();
        for v in 0..6 {
            assert_eq!(m.matrix()[((v + 1) % 6, v)], 0.5);
            assert_eq!(m.matrix()[((v + 5) % 6, v)], 0.5);
            assert_eq!(m.matrix()[(v, v)], 0.0);
        }
    }

    #[test]
    fn complete_graph_transition() {
        // K3 as a labeled graph
        let ports = vec![
            vec![(1, 1), (2, 2)],
            vec![(1, 2), (2, 0)],
            vec![(1, 0), (2, 1)],
        ];
        let g = LabeledGraph::from_ports(ports, crate::graph::Family::General).unwrap();
        let m = StochasticMatrix::from_graph(&g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 0.0 } else { 0.5 };
                assert_eq!(m.matrix()[(i, j)], expect);
            }
        }
        let info = m.stationary_and_gap().unwrap();
        assert!((info.lambda2 + 0.5).abs() < 1e-12);
        for v in 0..3 {
            assert!((info.stationary.get(v) - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(!info.bipartite);
    }

    #[test]
    fn hypercube_transition_entries() {
        let g = LabeledGraph::hypercube(3).unwrap();
        let m = StochasticMatrix::from_graph(&g).unwrap();
        for v in 0..8usize {
            for w in 0..8usize {
                let expect = if (v ^ w).count_ones() == 1 {
                    1.0 / 3.0
                } else {
                    0.0
                };
                assert!((m.matrix()[(w, v)] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn line_walk_table_row_five() {
        let g = LabeledGraph::line_window(6).unwrap().pad_self_loops();
        let m = StochasticMatrix::from_graph(&g).unwrap();
        let start = Distribution::point(g.vertex_count(), g.position_vertex(0).unwrap()).unwrap();
        let p5 = m.evolve(&start, 5).unwrap();
        let expected = [
            (-5, 1.0 / 32.0),
            (-3, 5.0 / 32.0),
            (-1, 5.0 / 16.0),
            (1, 5.0 / 16.0),
            (3, 5.0 / 32.0),
            (5, 1.0 / 32.0),
        ];
        for (pos, p) in expected {
            let v = g.position_vertex(pos).unwrap();
            assert!((p5.get(v) - p).abs() < 1e-12, "position {pos}");
        }
        // T = 0 leaves the input untouched
        let p0 = m.evolve(&start, 0).unwrap();
        assert_eq!(p0.values(), start.values());
    }

    #[test]
    fn circle_second_step_pattern() {
        let n = 8;
        let g = LabeledGraph::circle(n).unwrap();
        let m = StochasticMatrix::from_graph(&g).unwrap();
        let p2 = m
            .evolve(&Distribution::point(n, 0).unwrap(), 2)
            .unwrap();
        let mut expected = vec![0.0; n];
        expected[0] = 0.5;
        expected[2] = 0.25;
        expected[n - 2] = 0.25;
        for v in 0..n {
            assert!((p2.get(v) - expected[v]).abs() < 1e-15, "vertex {v}");
        }
    }

    #[test]
    fn even_circle_is_flagged_bipartite() {
        let g = LabeledGraph::circle(6).unwrap();
        let m = StochasticMatrix::from_graph(&g).unwrap();
        let info = m.stationary_and_gap().unwrap();
        assert!(info.bipartite);
        assert!((info.lambda_abs - 1.0).abs() < 1e-9);
        // stationary still uniform
        for v in 0..6 {
            assert!((info.stationary.get(v) - 1.0 / 6.0).abs() < 1e-10);
        }
    }

    #[test]
    fn regular_graph_stationary_is_uniform() {
        let g = LabeledGraph::hypercube(4).unwrap();
        let m = StochasticMatrix::from_graph(&g).unwrap();
        let info = m.stationary_and_gap().unwrap();
        for v in 0..16 {
            assert!((info.stationary.get(v) - 1.0 / 16.0).abs() < 1e-10);
        }
    }

    #[test]
    fn mixing_bounds_shapes() {
        let uniform = Distribution::uniform(5);
        let (lo1, up1) = mixing_bounds(0.5, &uniform, 0.1).unwrap();
        let (_, up2) = mixing_bounds(0.5, &uniform, 0.01).unwrap();
        assert!(lo1 < up1);
        assert!(up2 > up1, "upper bound grows as eps shrinks");
        assert!(mixing_bounds(1.0, &uniform, 0.1).is_err());
        // pole as lambda2 -> 1
        let (_, up_tight) = mixing_bounds(0.999999, &uniform, 0.1).unwrap();
        assert!(up_tight > 1e5);
    }

    #[test]
    fn hypercube_hitting_time_matches_full_graph() {
        // reduced chain and full 8-vertex solve both give 10 steps
        let chain = reduce_hypercube_chain(3).unwrap();
        let reduced = StochasticMatrix::from_chain(&chain).unwrap();
        let h_reduced = reduced.expected_hitting(0, 3).unwrap();
        assert!((h_reduced - 10.0).abs() < 1e-9, "reduced: {h_reduced}");

        let g = LabeledGraph::hypercube(3).unwrap();
        let full = StochasticMatrix::from_graph(&g).unwrap();
        let h_full = full.expected_hitting(0, 7).unwrap();
        assert!((h_full - 10.0).abs() < 1e-9, "full: {h_full}");
    }

    #[test]
    fn cycle_antipodal_hitting_is_quarter_square() {
        for n in [8usize, 12] {
            let g = LabeledGraph::circle(n).unwrap();
            let m = StochasticMatrix::from_graph(&g).unwrap();
            let h = m.expected_hitting(0, n / 2).unwrap();
            assert!((h - (n * n) as f64 / 4.0).abs() < 1e-8, "n = {n}: {h}");
        }
    }

    #[test]
    fn hitting_self_is_zero_and_unreachable_errors() {
        let g = LabeledGraph::circle(5).unwrap();
        let m = StochasticMatrix::from_graph(&g).unwrap();
        assert_eq!(m.expected_hitting(2, 2).unwrap(), 0.0);

        // two disjoint edges: target unreachable
        let ports = vec![
            vec![(1, 1)],
            vec![(1, 0)],
            vec![(1, 3)],
            vec![(1, 2)],
        ];
        let g2 = LabeledGraph::from_ports(ports, crate::graph::Family::General).unwrap();
        let m2 = StochasticMatrix::from_graph(&g2).unwrap();
        assert!(m2.expected_hitting(0, 3).is_err());
    }

    #[test]
    fn full_hypercube_walk_lumps_onto_chain() {
        for d in 1..=6usize {
            let g = LabeledGraph::hypercube(d).unwrap();
            let m = StochasticMatrix::from_graph(&g).unwrap();
            let chain = reduce_hypercube_chain(d).unwrap();
            let mut full = Distribution::point(1 << d, 0).unwrap();
            let mut collapsed = Distribution::point(d + 1, 0).unwrap();
            for _step in 0..12 {
                full = m.step(&full).unwrap();
                collapsed = evolve_chain(&chain, &collapsed, 1).unwrap();
                let mut by_weight = vec![0.0; d + 1];
                for v in 0..(1usize << d) {
                    by_weight[v.count_ones() as usize] += full.get(v);
                }
                for w in 0..=d {
                    assert!(
                        (by_weight[w] - collapsed.get(w)).abs() < 1e-12,
                        "d={d} weight {w}"
                    );
                }
            }
        }
    }

    #[test]
    fn line_walk_variance_equals_step_count() {
        let states = 2101;
        let center = 1050usize;
        let chain = BiasedChain {
            up: vec![0.5; states - 1],
            down: vec![0.5; states - 1],
        };
        let mut p = Distribution::point(states, center).unwrap();
        for t in 1..=1000usize {
            p = evolve_chain(&chain, &p, 1).unwrap();
            if t % 250 == 0 || t == 1 {
                let (mean, var) = p
                    .moments(|v| v as f64 - center as f64)
                    .unwrap();
                assert!(mean.abs() < 1e-10, "t={t}");
                assert!((var - t as f64).abs() < 1e-8 * t as f64, "t={t}: {var}");
            }
        }
    }

    #[test]
    fn classical_absorption_approaches_one() {
        // walk from 1 with a boundary at 0 gets absorbed with certainty
        let states = 2003;
        let chain = BiasedChain {
            up: vec![0.5; states - 1],
            down: vec![0.5; states - 1],
        };
        let p0 = Distribution::point(states, 1).unwrap();
        let rec = chain_absorbing_run(&chain, &p0, &[0], 2000).unwrap();
        let cum = *rec.cumulative.last().unwrap();
        assert!(cum > 0.97, "cumulative only {cum}");
        assert!(rec.cumulative.windows(2).all(|w| w[1] >= w[0]));
        assert!((cum + rec.residual_mass - 1.0).abs() < 1e-9);
    }

    #[test]
    fn glued_trees_column_chain_is_stochastic() {
        for n in 1..=5 {
            let chain = glued_trees_column_chain(n).unwrap();
            let m = StochasticMatrix::from_chain(&chain).unwrap();
            // no staying anywhere: up + down = 1 at interior states
            for i in 0..=2 * n {
                assert!(m.matrix()[(i, i)].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_sat_demo_returns_planted_assignment() {
        let f = CnfFormula::walk_demo();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let run = two_sat_walk(&f, &mut rng, 10_000);
        assert_eq!(run.assignment, Some(vec![true, true, false]));
    }

    #[test]
    fn two_sat_demo_unique_satisfying_assignment() {
        let f = CnfFormula::walk_demo();
        let mut satisfying = Vec::new();
        for bits in 0..8u32 {
            let assignment: Vec<bool> = (0..3).map(|k| bits >> k & 1 == 1).collect();
            if f.is_satisfied(&assignment) {
                satisfying.push(assignment);
            }
        }
        assert_eq!(satisfying, vec![vec![true, true, false]]);
    }

    #[test]
    fn two_sat_unsatisfiable_returns_none() {
        let f = CnfFormula::new(1, vec![[1, 1], [-1, -1]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let run = two_sat_walk(&f, &mut rng, 1000);
        assert!(run.assignment.is_none());
        assert_eq!(run.flips, 1000);
    }

    #[test]
    fn two_sat_is_seed_deterministic() {
        let mut rng_a = ChaCha8Rng::seed_from_u64(9);
        let mut rng_b = ChaCha8Rng::seed_from_u64(9);
        let (f, _) = random_satisfiable_2sat(20, 40, &mut rng_a);
        let (f_b, _) = random_satisfiable_2sat(20, 40, &mut rng_b);
        assert_eq!(f.clauses(), f_b.clauses());
        let run_a = two_sat_walk(&f, &mut rng_a, 100_000);
        let run_b = two_sat_walk(&f_b, &mut rng_b, 100_000);
        assert_eq!(run_a.assignment, run_b.assignment);
        assert_eq!(run_a.flips, run_b.flips);
    }

    #[test]
    fn random_instances_are_satisfiable_by_construction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (f, planted) = random_satisfiable_2sat(15, 30, &mut rng);
            assert!(f.is_satisfied(&planted));
        }
    }

    #[test]
    fn dimacs_round_trip() {
        let text = "c demo\np cnf 3 4\n-1 2 0\n1 -3 0\n-2 -3 0\n1 3 0\n";
        let f = CnfFormula::parse_dimacs(text).unwrap();
        assert_eq!(f.variable_count(), 3);
        assert_eq!(f.clauses(), CnfFormula::walk_demo().clauses());
        assert!(CnfFormula::parse_dimacs("p cnf 2 1\n1 2 3 0\n").is_err());
        assert!(CnfFormula::parse_dimacs("1 2 0\n").is_err());
    }

    #[test]
    fn st_connectivity_never_errs_on_disconnected() {
        let ports = vec![
            vec![(1, 1)],
            vec![(1, 0)],
            vec![(1, 3)],
            vec![(1, 2)],
        ];
        let g = LabeledGraph::from_ports(ports, crate::graph::Family::General).unwrap();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            assert!(!st_connectivity(&g, 0, 3, &mut rng).unwrap());
        }
    }

    #[test]
    fn st_connectivity_trivial_and_connected() {
        let g = LabeledGraph::circle(9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(st_connectivity(&g, 4, 4, &mut rng).unwrap());
        let mut hits = 0;
        for seed in 0..40 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if st_connectivity(&g, 0, 4, &mut rng).unwrap() {
                hits += 1;
            }
        }
        assert!(hits >= 20, "only {hits}/40 connected runs answered YES");
    }
}
