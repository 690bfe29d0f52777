//! Walk substrates: line windows, circles, hypercubes, glued binary trees and
//! general labeled graphs, plus the symmetry reductions used by the hitting
//! experiments.
//!
//! Every vertex carries an ordered list of ports `(label, neighbor)`. Labels
//! are the per-vertex edge colors that steer the coined shift; the label of an
//! edge may differ between its two endpoints except on the hypercube, where it
//! always equals the index of the flipped bit on both ends.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Finite window `[-half_width, half_width]` standing in for the infinite
    /// line. Vertex id `v` sits at position `v - half_width`.
    LineWindow { half_width: usize },
    Circle { size: usize },
    Hypercube { dim: usize },
    /// Two depth-`n` binary trees identified at their leaf layer.
    GluedTrees { depth: usize },
    General,
}

/// A port is one labeled edge end: `(label, neighbor)`. A self-loop is a
/// single port pointing back at its own vertex.
pub type Port = (usize, usize);

#[derive(Debug, Clone)]
pub struct LabeledGraph {
    vertex_count: usize,
    ports: Vec<Vec<Port>>,
    max_degree: usize,
    family: Family,
}

impl LabeledGraph {
    /// Builds a graph from explicit per-vertex port lists. Labels must be in
    /// `1..=d` where `d` is the maximum degree, and distinct at each vertex.
    pub fn from_ports(ports: Vec<Vec<Port>>, family: Family) -> Result<Self> {
        let vertex_count = ports.len();
        let max_degree = ports.iter().map(Vec::len).max().unwrap_or(0);
        for (v, plist) in ports.iter().enumerate() {
            let mut seen = vec![false; max_degree + 1];
            for &(label, neighbor) in plist {
                if neighbor >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: neighbor,
                        count: vertex_count,
                    });
                }
                if label == 0 || label > max_degree {
                    return Err(Error::BadMatrix(format!(
                        "label {label} at vertex {v} outside 1..={max_degree}"
                    )));
                }
                if seen[label] {
                    return Err(Error::BadMatrix(format!(
                        "duplicate label {label} at vertex {v}"
                    )));
                }
                seen[label] = true;
            }
        }
        Ok(Self {
            vertex_count,
            ports,
            max_degree,
            family,
        })
    }

    pub fn line_window(half_width: usize) -> Result<Self> {
        if half_width < 1 {
            return Err(Error::InvalidSize {
                family: "line-window",
                reason: "half-width must be >= 1".into(),
            });
        }
        let n = 2 * half_width + 1;
        let mut ports = Vec::with_capacity(n);
        for v in 0..n {
            let mut p = Vec::with_capacity(2);
            if v + 1 < n {
                p.push((1, v + 1));
            }
            if v > 0 {
                p.push((2, v - 1));
            }
            ports.push(p);
        }
        Ok(Self {
            vertex_count: n,
            ports,
            max_degree: 2,
            family: Family::LineWindow { half_width },
        })
    }

    pub fn circle(size: usize) -> Result<Self> {
        if size < 3 {
            return Err(Error::InvalidSize {
                family: "circle",
                reason: "need at least 3 vertices".into(),
            });
        }
        let ports = (0..size)
            .map(|v| vec![(1, (v + 1) % size), (2, (v + size - 1) % size)])
            .collect();
        Ok(Self {
            vertex_count: size,
            ports,
            max_degree: 2,
            family: Family::Circle { size },
        })
    }

    /// Hypercube on `2^dim` bit-string vertices; the edge flipping bit `k`
    /// carries label `k + 1` on both ends.
    pub fn hypercube(dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidSize {
                family: "hypercube",
                reason: "dimension must be >= 1".into(),
            });
        }
        if dim > 24 {
            return Err(Error::DimensionCap {
                requested: 1 << dim,
                cap: 1 << 24,
            });
        }
        let n = 1usize << dim;
        let ports = (0..n)
            .map(|v| (0..dim).map(|k| (k + 1, v ^ (1 << k))).collect())
            .collect();
        Ok(Self {
            vertex_count: n,
            ports,
            max_degree: dim,
            family: Family::Hypercube { dim },
        })
    }

    /// Glued binary trees `G_n`: columns `j = 0..=2n` of sizes
    /// `2^j` (left half) and `2^{2n-j}` (right half), sharing the leaf layer
    /// at column `n`. Vertices are numbered column by column.
    pub fn glued_trees(depth: usize) -> Result<Self> {
        if depth < 1 {
            return Err(Error::InvalidSize {
                family: "glued-trees",
                reason: "depth must be >= 1".into(),
            });
        }
        if depth > 20 {
            return Err(Error::DimensionCap {
                requested: depth,
                cap: 20,
            });
        }
        let offsets = glued_trees_offsets(depth);
        let total = offsets[2 * depth + 1];
        let mut ports: Vec<Vec<Port>> = vec![Vec::new(); total];
        let mut add_edge = |a: usize, b: usize| {
            let la = ports[a].len() + 1;
            ports[a].push((la, b));
            let lb = ports[b].len() + 1;
            ports[b].push((lb, a));
        };
        // Left tree: column j vertex i has children (j+1, 2i) and (j+1, 2i+1).
        for j in 0..depth {
            for i in 0..(1usize << j) {
                let parent = offsets[j] + i;
                add_edge(parent, offsets[j + 1] + 2 * i);
                add_edge(parent, offsets[j + 1] + 2 * i + 1);
            }
        }
        // Right tree mirrored: column j+1 vertex i has children (j, 2i), (j, 2i+1).
        for j in depth..2 * depth {
            let next_size = 1usize << (2 * depth - j - 1);
            for i in 0..next_size {
                let parent = offsets[j + 1] + i;
                add_edge(parent, offsets[j] + 2 * i);
                add_edge(parent, offsets[j] + 2 * i + 1);
            }
        }
        Self::from_ports(ports, Family::GluedTrees { depth })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn ports(&self, v: usize) -> &[Port] {
        &self.ports[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.ports[v].len()
    }

    /// Degree ignoring self-loops; this is the count that enters the
    /// continuous-time generator.
    pub fn neighbor_degree(&self, v: usize) -> usize {
        self.ports[v].iter().filter(|&&(_, w)| w != v).count()
    }

    pub fn is_regular(&self) -> bool {
        self.ports.iter().all(|p| p.len() == self.max_degree)
    }

    /// Real-line coordinate of a vertex; the identity except on line windows,
    /// which are centered at zero.
    pub fn coordinate(&self, v: usize) -> f64 {
        match self.family {
            Family::LineWindow { half_width } => v as f64 - half_width as f64,
            _ => v as f64,
        }
    }

    /// Vertex id of a line-window position.
    pub fn position_vertex(&self, position: i64) -> Result<usize> {
        match self.family {
            Family::LineWindow { half_width } => {
                let id = position + half_width as i64;
                if id < 0 || id as usize >= self.vertex_count {
                    Err(Error::WindowOverflow)
                } else {
                    Ok(id as usize)
                }
            }
            _ => Err(Error::InvalidParameter(
                "position lookup is only defined for line windows".into(),
            )),
        }
    }

    /// Column index of each vertex for glued-trees graphs.
    pub fn glued_trees_columns(&self) -> Option<Vec<usize>> {
        let Family::GluedTrees { depth } = self.family else {
            return None;
        };
        let offsets = glued_trees_offsets(depth);
        let mut cols = vec![0usize; self.vertex_count];
        for j in 0..=2 * depth {
            for v in offsets[j]..offsets[j + 1] {
                cols[v] = j;
            }
        }
        Some(cols)
    }

    /// Adds self-loops (reusing the smallest unused label at each vertex)
    /// until every vertex has exactly `max_degree` ports.
    pub fn pad_self_loops(&self) -> LabeledGraph {
        let mut ports = self.ports.clone();
        for (v, plist) in ports.iter_mut().enumerate() {
            let mut used = vec![false; self.max_degree + 1];
            for &(label, _) in plist.iter() {
                used[label] = true;
            }
            let mut next = 1;
            while plist.len() < self.max_degree {
                while used[next] {
                    next += 1;
                }
                plist.push((next, v));
                used[next] = true;
            }
        }
        LabeledGraph {
            vertex_count: self.vertex_count,
            ports,
            max_degree: self.max_degree,
            family: self.family,
        }
    }

    /// Appends `extra` self-loops to every vertex, raising the maximum degree.
    /// Used to build lazy variants of regular graphs.
    pub fn add_uniform_self_loops(&self, extra: usize) -> LabeledGraph {
        let mut ports = self.ports.clone();
        let new_degree = self.max_degree + extra;
        for (v, plist) in ports.iter_mut().enumerate() {
            let mut used = vec![false; new_degree + 1];
            for &(label, _) in plist.iter() {
                used[label] = true;
            }
            let mut next = 1;
            for _ in 0..extra {
                while used[next] {
                    next += 1;
                }
                plist.push((next, v));
                used[next] = true;
            }
        }
        LabeledGraph {
            vertex_count: self.vertex_count,
            ports,
            max_degree: new_degree,
            family: Family::General,
        }
    }

    /// Checks that labels are pairwise distinct at every vertex and that every
    /// port can be traversed back. Returns the offending vertices instead of
    /// failing so callers can report diagnostics.
    pub fn validate_labeling(&self) -> (bool, Vec<usize>) {
        let mut offending = Vec::new();
        for (v, plist) in self.ports.iter().enumerate() {
            let mut seen = vec![false; self.max_degree + 1];
            let mut bad = false;
            for &(label, w) in plist {
                if label == 0 || label > self.max_degree || seen[label] {
                    bad = true;
                    break;
                }
                seen[label] = true;
                if !self.ports[w].iter().any(|&(_, back)| back == v) {
                    bad = true;
                    break;
                }
            }
            if bad {
                offending.push(v);
            }
        }
        (offending.is_empty(), offending)
    }

    /// Adjacency export as JSON `[vertex, label, neighbor]` triples.
    pub fn to_adjacency_json(&self) -> String {
        let family = match self.family {
            Family::LineWindow { .. } => "line-window",
            Family::Circle { .. } => "circle",
            Family::Hypercube { .. } => "hypercube",
            Family::GluedTrees { .. } => "glued-trees",
            Family::General => "general",
        };
        let mut out = format!(
            "{{\"family\":\"{}\",\"vertex_count\":{},\"max_degree\":{},\"ports\":[",
            family, self.vertex_count, self.max_degree
        );
        let mut first = true;
        for (v, plist) in self.ports.iter().enumerate() {
            for &(label, w) in plist {
                if !first {
                    out.push(',');
                }
                first = false;
                out.push_str(&format!("[{},{},{}]", v, label, w));
            }
        }
        out.push_str("]}");
        out
    }
}

fn glued_trees_offsets(depth: usize) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(2 * depth + 2);
    let mut acc = 0usize;
    for j in 0..=2 * depth {
        offsets.push(acc);
        let size = if j <= depth {
            1usize << j
        } else {
            1usize << (2 * depth - j)
        };
        acc += size;
    }
    offsets.push(acc);
    offsets
}

/// Birth-death chain used by the hypercube symmetry reduction: `up[i]` is the
/// probability of moving from state `i` to `i+1`, `down[i]` the probability of
/// moving from `i+1` back to `i`.
#[derive(Debug, Clone)]
pub struct BiasedChain {
    pub up: Vec<f64>,
    pub down: Vec<f64>,
}

impl BiasedChain {
    pub fn states(&self) -> usize {
        self.up.len() + 1
    }
}

/// Collapses the simple walk on the glued trees onto columns `0..=2n`: away
/// from the middle the walk drifts toward the leaf layer with probability 2/3
/// and back with 1/3; the roots reflect and the leaf column is unbiased.
pub fn glued_trees_column_chain(depth: usize) -> Result<BiasedChain> {
    if depth < 1 {
        return Err(Error::InvalidSize {
            family: "glued-trees",
            reason: "depth must be >= 1".into(),
        });
    }
    let n = depth;
    let up = (0..2 * n)
        .map(|j| {
            if j == 0 {
                1.0
            } else if j < n {
                2.0 / 3.0
            } else if j == n {
                0.5
            } else {
                1.0 / 3.0
            }
        })
        .collect();
    let down = (0..2 * n)
        .map(|j| {
            let from = j + 1;
            if from < n {
                1.0 / 3.0
            } else if from == n {
                0.5
            } else if from < 2 * n {
                2.0 / 3.0
            } else {
                1.0
            }
        })
        .collect();
    Ok(BiasedChain { up, down })
}

/// Collapses the simple walk on the `d`-dimensional hypercube onto Hamming
/// weights: a chain of `d+1` states with `p_{i,i+1} = (d-i)/d` and
/// `p_{i+1,i} = (i+1)/d`.
pub fn reduce_hypercube_chain(dim: usize) -> Result<BiasedChain> {
    if dim < 1 {
        return Err(Error::InvalidSize {
            family: "hypercube",
            reason: "dimension must be >= 1".into(),
        });
    }
    let d = dim as f64;
    let up = (0..dim).map(|i| (d - i as f64) / d).collect();
    let down = (0..dim).map(|i| (i as f64 + 1.0) / d).collect();
    Ok(BiasedChain { up, down })
}
