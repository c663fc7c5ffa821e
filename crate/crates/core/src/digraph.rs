//! Communication digraphs, Kirchhoff matrices and the strong-component
//! classification behind the convergence criteria.
//!
//! Arcs point in the direction of influence: `p_ij > 0` gives the arc
//! `j -> i` with weight `p_ij`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, StochasticMatrix};

/// Tolerance on the incoming non-loop weight of a vertex in
/// [`matrix_from_digraph`].
pub const ROW_FEASIBILITY_TOL: f64 = 1e-12;
/// Tolerance when an explicit loop is checked against stochastic completion.
pub const LOOP_CONSISTENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

impl Arc {
    pub fn new(tail: usize, head: usize, weight: f64) -> Self {
        Self { tail, head, weight }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Weighted digraph on vertices `0..n` with positive arc weights, loops
/// allowed, at most one arc per ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    n: usize,
    /// Sorted by `(tail, head)`.
    arcs: Vec<Arc>,
}

impl WeightedDigraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut arcs: Vec<Arc> = arcs.into_iter().collect();
        for a in &arcs {
            for v in [a.tail, a.head] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if !(a.weight.is_finite() && a.weight > 0.0) {
                return Err(Error::InvalidWeight {
                    tail: a.tail,
                    head: a.head,
                    weight: a.weight,
                });
            }
        }
        arcs.sort_by_key(|a| (a.tail, a.head));
        if let Some(w) = arcs
            .windows(2)
            .find(|w| (w[0].tail, w[0].head) == (w[1].tail, w[1].head))
        {
            return Err(Error::DuplicateArc {
                tail: w[0].tail,
                head: w[0].head,
            });
        }
        Ok(Self { n, arcs })
    }

    /// Digraph with no arcs.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn non_loop_arcs(&self) -> impl Iterator<Item = &Arc> {
        self.arcs.iter().filter(|a| !a.is_loop())
    }

    pub fn weight(&self, tail: usize, head: usize) -> Option<f64> {
        self.arcs
            .binary_search_by_key(&(tail, head), |a| (a.tail, a.head))
            .ok()
            .map(|i| self.arcs[i].weight)
    }

    pub fn loop_weight(&self, v: usize) -> Option<f64> {
        self.weight(v, v)
    }

    /// Non-loop arcs entering each vertex, as `(tail, weight)`.
    pub fn in_arcs(&self) -> Vec<Vec<(usize, f64)>> {
        let mut ins = vec![Vec::new(); self.n];
        for a in self.non_loop_arcs() {
            ins[a.head].push((a.tail, a.weight));
        }
        ins
    }

    /// Out-neighbours per vertex, loops excluded.
    fn successors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for a in self.non_loop_arcs() {
            out[a.tail].push(a.head);
        }
        out
    }

    /// Same digraph with every arc weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.n,
            self.arcs
                .iter()
                .map(|a| Arc::new(a.tail, a.head, a.weight * factor)),
        )
    }
}

/// Communication digraph of `p`: arc `j -> i` for every `p_ij > zero_tol`.
pub fn digraph_from_matrix(p: &StochasticMatrix, zero_tol: f64) -> WeightedDigraph {
    let n = p.dim();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let w = p[(i, j)];
            if w > zero_tol && w > 0.0 {
                arcs.push(Arc::new(j, i, w));
            }
        }
    }
    WeightedDigraph::new(n, arcs).expect("arcs of a stochastic matrix are valid")
}

/// Influence matrix `I - L` of `g`, completing each row with a loop when the
/// digraph omits it.
pub fn matrix_from_digraph(g: &WeightedDigraph) -> Result<StochasticMatrix> {
    let n = g.n();
    let mut m = Matrix::zeros(n);
    let mut incoming = vec![0.0; n];
    for a in g.non_loop_arcs() {
        m[(a.head, a.tail)] = a.weight;
        incoming[a.head] += a.weight;
    }
    for (v, &total) in incoming.iter().enumerate() {
        if total > 1.0 + ROW_FEASIBILITY_TOL {
            return Err(Error::InfeasibleRow { vertex: v, total });
        }
        let completion = if 1.0 - total <= ROW_FEASIBILITY_TOL {
            0.0
        } else {
            1.0 - total
        };
        m[(v, v)] = match g.loop_weight(v) {
            Some(w) if (w - completion).abs() > LOOP_CONSISTENCY_TOL => {
                return Err(Error::InconsistentLoop {
                    vertex: v,
                    loop_weight: w,
                    expected: completion,
                });
            }
            Some(w) => w,
            None => completion,
        };
    }
    Ok(StochasticMatrix::from_checked(m))
}

/// Kirchhoff matrix: `l_ij = -w_ji` for `j != i`, `l_ii` = total weight of
/// non-loop arcs entering `i`. Loops do not contribute.
pub fn kirchhoff(g: &WeightedDigraph) -> Matrix {
    let mut l = Matrix::zeros(g.n());
    for a in g.non_loop_arcs() {
        l[(a.head, a.tail)] = -a.weight;
        l[(a.head, a.head)] += a.weight;
    }
    l
}

/// Strongly connected components (Tarjan, iterative). Each component is
/// sorted; components are ordered by their smallest vertex.
pub fn strong_components(g: &WeightedDigraph) -> Vec<Vec<usize>> {
    let succ = g.successors();
    let n = g.n();
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut comps = Vec::new();

    for start in 0..n {
        if index[start] != UNVISITED {
            continue;
        }
        // (vertex, position in its successor list)
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if let Some(&w) = succ[v].get(frame.1) {
                frame.1 += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Structural classification of a communication digraph.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub components: Vec<Vec<usize>>,
    /// Per component: no arcs enter it from outside.
    pub basic: Vec<bool>,
    /// Number of basic bicomponents.
    pub nu: usize,
    /// Number of basic vertices.
    pub b: usize,
    /// Per component period; `None` for a loopless singleton, which has no
    /// closed walks.
    pub periods: Vec<Option<u64>>,
    pub has_spanning_out_tree: bool,
    pub regular: bool,
    pub limit_exists: bool,
}

impl AnalysisReport {
    pub fn basic_components(&self) -> impl Iterator<Item = (&[usize], Option<u64>)> {
        self.components
            .iter()
            .zip(&self.basic)
            .zip(&self.periods)
            .filter(|((_, &basic), _)| basic)
            .map(|((c, _), &p)| (c.as_slice(), p))
    }

    /// Component index of every vertex.
    pub fn component_of(&self) -> Vec<usize> {
        let n = self.components.iter().map(Vec::len).sum();
        let mut of = vec![0; n];
        for (c, comp) in self.components.iter().enumerate() {
            for &v in comp {
                of[v] = c;
            }
        }
        of
    }
}

pub fn analyze(g: &WeightedDigraph) -> AnalysisReport {
    let components = strong_components(g);
    let mut comp_of = vec![0; g.n()];
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }

    let mut basic = vec![true; components.len()];
    for a in g.non_loop_arcs() {
        if comp_of[a.tail] != comp_of[a.head] {
            basic[comp_of[a.head]] = false;
        }
    }
    let periods: Vec<Option<u64>> = components
        .iter()
        .map(|c| component_period(g, c, &comp_of))
        .collect();

    let nu = basic.iter().filter(|&&b| b).count();
    let b = components
        .iter()
        .zip(&basic)
        .filter(|(_, &b)| b)
        .map(|(c, _)| c.len())
        .sum();

    let succ = g.successors();
    let has_spanning_out_tree = components
        .iter()
        .zip(&basic)
        .filter(|(_, &b)| b)
        .any(|(c, _)| reachable_count(&succ, c[0]) == g.n());

    let basic_periods = || {
        periods
            .iter()
            .zip(&basic)
            .filter(|(_, &b)| b)
            .map(|(p, _)| *p)
    };
    let limit_exists = basic_periods().all(|p| p == Some(1));
    let regular = nu == 1 && limit_exists;

    AnalysisReport {
        components,
        basic,
        nu,
        b,
        periods,
        has_spanning_out_tree,
        regular,
        limit_exists,
    }
}

fn reachable_count(succ: &[Vec<usize>], start: usize) -> usize {
    let mut seen = vec![false; succ.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count
}

/// gcd over intra-component arcs `(u, v)` of `level(u) + 1 - level(v)` for a
/// breadth-first levelling of the component. Loops contribute 1.
fn component_period(g: &WeightedDigraph, comp: &[usize], comp_of: &[usize]) -> Option<u64> {
    let c = comp_of[comp[0]];
    let inside = |a: &&Arc| comp_of[a.tail] == c && comp_of[a.head] == c;
    if comp.len() == 1 {
        return g.loop_weight(comp[0]).map(|_| 1);
    }

    let mut level = vec![i64::MAX; g.n()];
    level[comp[0]] = 0;
    let mut succ = vec![Vec::new(); g.n()];
    for a in g.non_loop_arcs().filter(inside) {
        succ[a.tail].push(a.head);
    }
    let mut queue = VecDeque::from([comp[0]]);
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v] {
            if level[w] == i64::MAX {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let period = g.arcs().iter().filter(inside).fold(0u64, |acc, a| {
        gcd(acc, (level[a.tail] + 1 - level[a.head]).unsigned_abs())
    });
    Some(period)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
