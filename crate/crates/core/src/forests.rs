//! Spanning out-tree and maximum out-forest weights.
//!
//! The weight of a tree or forest is the product of its arc weights; loops
//! never belong to one. Two routes compute the per-root tree weights `t_j`:
//! brute-force enumeration ([`tree_weight_vector`]) and principal minors of
//! the Kirchhoff matrix ([`tree_weights_via_minors`]). The enumeration route
//! exists to check the other one and is bounded in size.

use crate::digraph::{analyze, kirchhoff, WeightedDigraph};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, ProbabilityVector};

/// Largest vertex count accepted by the enumeration routines.
pub const ENUMERATION_BOUND: usize = 8;
/// Largest number of incoming-arc combinations an enumeration may visit.
pub const COMBINATION_GUARD: u64 = 10_000_000;

/// Per-root spanning out-tree weights `t_j` and their total `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestWeights {
    pub per_root: Vec<f64>,
    pub total: f64,
}

impl ForestWeights {
    fn from_per_root(per_root: Vec<f64>) -> Self {
        let total = per_root.iter().sum();
        Self { per_root, total }
    }

    /// `t_j / t`, the stationary weight distribution when a spanning out-tree
    /// exists.
    pub fn normalized(&self) -> Result<ProbabilityVector> {
        if !(self.total > 0.0) {
            return Err(Error::NoSpanningTree);
        }
        ProbabilityVector::new(self.per_root.iter().map(|t| t / self.total).collect())
    }
}

/// Normalized matrix of maximum out-forests.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestMatrix {
    /// Entry `(i, j)`: share of the total maximum-forest weight carried by
    /// forests in which `i` lies in the tree rooted at `j`.
    pub entries: Matrix,
    /// Arcs in a maximum out-forest, `n - nu`.
    pub forest_dimension: usize,
}

fn check_size(g: &WeightedDigraph) -> Result<()> {
    if g.n() > ENUMERATION_BOUND {
        return Err(Error::TooLarge {
            what: "vertex count",
            limit: ENUMERATION_BOUND as u64,
        });
    }
    Ok(())
}

/// Assigns one incoming arc to every vertex not in `roots`, skipping
/// assignments that close a cycle, and calls `visit` with each complete
/// parent array and its weight.
struct ParentSearch<'a, F> {
    in_arcs: &'a [Vec<(usize, f64)>],
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    visit: F,
}

impl<F: FnMut(&[Option<usize>], f64)> ParentSearch<'_, F> {
    fn run(&mut self, depth: usize, weight: f64) {
        let Some(&v) = self.order.get(depth) else {
            (self.visit)(&self.parent, weight);
            return;
        };
        let in_arcs = self.in_arcs;
        for &(tail, w) in &in_arcs[v] {
            if self.closes_cycle(v, tail) {
                continue;
            }
            self.parent[v] = Some(tail);
            self.run(depth + 1, weight * w);
        }
        self.parent[v] = None;
    }

    /// Whether the arc `tail -> v` would close a cycle among assigned
    /// parent pointers.
    fn closes_cycle(&self, v: usize, tail: usize) -> bool {
        let mut x = tail;
        loop {
            if x == v {
                return true;
            }
            match self.parent[x] {
                Some(p) => x = p,
                None => return false,
            }
        }
    }
}

fn combinations(in_arcs: &[Vec<(usize, f64)>], roots: &[usize]) -> u64 {
    (0..in_arcs.len())
        .filter(|v| !roots.contains(v))
        .map(|v| in_arcs[v].len() as u64)
        .try_fold(1u64, u64::checked_mul)
        .unwrap_or(u64::MAX)
}

/// Total weight of spanning out-trees of `g` rooted at `root`, by
/// enumerating one incoming arc per non-root vertex and rejecting cycles.
pub fn enumerate_out_trees(g: &WeightedDigraph, root: usize) -> Result<f64> {
    check_size(g)?;
    if root >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: root,
            n: g.n(),
        });
    }
    let in_arcs = g.in_arcs();
    if combinations(&in_arcs, &[root]) > COMBINATION_GUARD {
        return Err(Error::TooLarge {
            what: "incoming-arc combinations",
            limit: COMBINATION_GUARD,
        });
    }
    let mut total = 0.0;
    let mut search = ParentSearch {
        in_arcs: &in_arcs,
        order: (0..g.n()).filter(|&v| v != root).collect(),
        parent: vec![None; g.n()],
        visit: |_: &[Option<usize>], w: f64| total += w,
    };
    search.run(0, 1.0);
    Ok(total)
}

/// Tree weights `t_j` for every root by enumeration.
pub fn tree_weight_vector(g: &WeightedDigraph) -> Result<ForestWeights> {
    let per_root = (0..g.n())
        .map(|j| enumerate_out_trees(g, j))
        .collect::<Result<_>>()?;
    Ok(ForestWeights::from_per_root(per_root))
}

/// Tree weights `t_j` as the principal minors of the Kirchhoff matrix with
/// row and column `j` deleted.
pub fn tree_weights_via_minors(g: &WeightedDigraph) -> ForestWeights {
    let l = kirchhoff(g);
    ForestWeights::from_per_root((0..g.n()).map(|j| l.principal_minor(j)).collect())
}

/// Normalized matrix of maximum out-forests, by enumeration.
///
/// A maximum out-forest has exactly one root in each basic bicomponent: no
/// arc enters a basic bicomponent, so each needs at least one root, and a
/// maximum forest has exactly `nu` trees. The enumeration therefore ranges
/// over one root per basic bicomponent and one incoming arc for every other
/// vertex.
pub fn max_out_forest_matrix(g: &WeightedDigraph) -> Result<ForestMatrix> {
    check_size(g)?;
    let n = g.n();
    let report = analyze(g);
    let basic: Vec<&[usize]> = report.basic_components().map(|(c, _)| c).collect();
    let in_arcs = g.in_arcs();

    let root_sets = cartesian(&basic);
    let work = root_sets
        .iter()
        .map(|roots| combinations(&in_arcs, roots))
        .fold(0u64, u64::saturating_add);
    if work > COMBINATION_GUARD {
        return Err(Error::TooLarge {
            what: "incoming-arc combinations",
            limit: COMBINATION_GUARD,
        });
    }

    let mut numer = Matrix::zeros(n);
    let mut total = 0.0;
    for roots in &root_sets {
        let mut search = ParentSearch {
            in_arcs: &in_arcs,
            order: (0..n).filter(|v| !roots.contains(v)).collect(),
            parent: vec![None; n],
            visit: |parent: &[Option<usize>], w: f64| {
                for i in 0..n {
                    let mut r = i;
                    while let Some(p) = parent[r] {
                        r = p;
                    }
                    numer[(i, r)] += w;
                }
                total += w;
            },
        };
        search.run(0, 1.0);
    }
    let entries = Matrix::from_fn(n, |i, j| numer[(i, j)] / total);
    Ok(ForestMatrix {
        entries,
        forest_dimension: n - report.nu,
    })
}

fn cartesian(sets: &[&[usize]]) -> Vec<Vec<usize>> {
    sets.iter().fold(vec![Vec::new()], |acc, set| {
        acc.iter()
            .flat_map(|prefix| {
                set.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect()
    })
}
