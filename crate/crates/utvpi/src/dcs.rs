//! Difference-constraint form of a UTVPI system on doubled variables.
//!
//! Each original variable `x_i` is split into `u_i ~ +x_i` and `v_i ~ -x_i`.
//! Every UTVPI row then translates into one or two pure difference
//! constraints over the `2n` doubled variables:
//!
//! ```text
//!  x_p + x_q >= b   ->   u_p - v_q >= b   and   u_q - v_p >= b
//!  x_p - x_q >= b   ->   u_p - u_q >= b   and   v_q - v_p >= b
//! -x_p - x_q >= b   ->   v_p - u_q >= b   and   v_q - u_p >= b
//!  x_p       >= b   ->   u_p - v_p >= 2b
//! -x_p       >= b   ->   v_p - u_p >= 2b
//! ```
//!
//! A difference constraint `a - b >= c` is stored as the edge `b -> a` with
//! weight `-c`, so the system is satisfiable exactly when the graph has no
//! negative cycle, and shortest-path distances yield feasible assignments
//! (negate the distance of each node). Any assignment `y` projects back to the
//! original space through `x_i = (y(u_i) - y(v_i)) / 2`, which is where
//! half-integral points come from.
//!
//! The node costs carry the objective, scaled by `D`, the least common
//! multiple of the objective denominators: `cost(u_i) = D*w_i` and
//! `cost(v_i) = -D*w_i`, so that `sum(cost . y) / (2D) = w.x` identically.
//!
//! Integer tightening: any derivable bound `u_i - v_i >= c` says `2 x_i >= c`.
//! When `c` is odd, integrality of `x_i` forces `2 x_i >= c + 1`; adding that
//! edge (and its mirror for `v_i - u_i`) and iterating to a fixpoint yields a
//! graph that has a negative cycle exactly when the UTVPI system has no
//! integer solution.

use num_bigint::BigInt;

use crate::model::{objective_denominator_lcm, Sign, UtvpiInstance};

/// Node index of `u_i` (the `+x_i` copy).
pub fn node_u(i: usize) -> usize {
    2 * i
}

/// Node index of `v_i` (the `-x_i` copy).
pub fn node_v(i: usize) -> usize {
    2 * i + 1
}

/// Human-readable node label, 1-based like the file format.
pub fn node_label(idx: usize) -> String {
    if idx % 2 == 0 {
        format!("u{}", idx / 2 + 1)
    } else {
        format!("v{}", idx / 2 + 1)
    }
}

/// Edge `from -> to` of weight `-c` encoding `to - from >= c`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DiffEdge {
    pub from: usize,
    pub to: usize,
    pub weight: i64,
    /// Index of the originating instance row; `None` for tightening edges.
    pub row: Option<usize>,
}

/// Difference-constraint graph over `2n` doubled variables.
#[derive(Clone, Debug)]
pub struct DiffGraph {
    n: usize,
    edges: Vec<DiffEdge>,
    node_cost: Vec<BigInt>,
    scale: BigInt,
}

impl DiffGraph {
    /// Number of original variables.
    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Number of doubled nodes, `2n`.
    pub fn num_nodes(&self) -> usize {
        2 * self.n
    }

    pub fn edges(&self) -> &[DiffEdge] {
        &self.edges
    }

    /// Scaled objective coefficient of each node; `cost(u_i) = -cost(v_i)`.
    pub fn node_cost(&self) -> &[BigInt] {
        &self.node_cost
    }

    /// The objective scale `D` (lcm of objective denominators).
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }
}

fn pos_node(sign: Sign, var: usize) -> usize {
    match sign {
        Sign::Plus => node_u(var),
        Sign::Minus => node_v(var),
    }
}

fn neg_node(sign: Sign, var: usize) -> usize {
    match sign {
        Sign::Plus => node_v(var),
        Sign::Minus => node_u(var),
    }
}

/// Translate a UTVPI system into its doubled difference-constraint graph.
/// Row bounds must stay below `i64::MAX / 2` so unary rows can double.
pub fn double(inst: &UtvpiInstance) -> DiffGraph {
    let n = inst.num_vars();
    let scale = objective_denominator_lcm(inst.objective());
    let mut node_cost = vec![BigInt::from(0); 2 * n];
    for (i, w) in inst.objective().iter().enumerate() {
        // w_i * D is integral by choice of D.
        let scaled = (w * &scale).to_integer();
        node_cost[node_u(i)] = scaled.clone();
        node_cost[node_v(i)] = -scaled;
    }
    let mut edges = Vec::new();
    for (row, c) in inst.constraints().iter().enumerate() {
        let terms: Vec<(Sign, usize)> = c.terms().collect();
        match terms.as_slice() {
            [(s, p)] => {
                // s*x_p >= b doubles to pos - neg >= 2b on the same variable.
                let w = (-2i64)
                    .checked_mul(c.bound())
                    .expect("unary bound doubles within i64");
                edges.push(DiffEdge {
                    from: neg_node(*s, *p),
                    to: pos_node(*s, *p),
                    weight: w,
                    row: Some(row),
                });
            }
            [(s1, p), (s2, q)] => {
                edges.push(DiffEdge {
                    from: neg_node(*s2, *q),
                    to: pos_node(*s1, *p),
                    weight: -c.bound(),
                    row: Some(row),
                });
                edges.push(DiffEdge {
                    from: neg_node(*s1, *p),
                    to: pos_node(*s2, *q),
                    weight: -c.bound(),
                    row: Some(row),
                });
            }
            _ => unreachable!("constraints carry one or two terms"),
        }
    }
    DiffGraph { n, edges, node_cost, scale }
}

/// A cycle of negative total weight, edges in traversal order.
#[derive(Clone, Debug)]
pub struct NegativeCycle {
    pub edges: Vec<DiffEdge>,
}

impl NegativeCycle {
    pub fn total_weight(&self) -> i128 {
        self.edges.iter().map(|e| e.weight as i128).sum()
    }
}

/// Bellman-Ford over the whole graph (implicit zero-weight source into every
/// node). Returns a witness cycle when one exists.
pub fn detect_negative_cycle(g: &DiffGraph) -> Option<NegativeCycle> {
    let nn = g.num_nodes();
    if nn == 0 {
        return None;
    }
    let mut dist = vec![0i128; nn];
    let mut pred: Vec<Option<usize>> = vec![None; nn];
    let mut last_improved = None;
    for _round in 0..nn {
        last_improved = None;
        for (idx, e) in g.edges.iter().enumerate() {
            let cand = dist[e.from] + e.weight as i128;
            if cand < dist[e.to] {
                dist[e.to] = cand;
                pred[e.to] = Some(idx);
                last_improved = Some(e.to);
            }
        }
        if last_improved.is_none() {
            return None;
        }
    }
    // Still improving after |V| rounds: walk predecessors into the cycle.
    let mut v = last_improved.expect("loop observed an improvement");
    for _ in 0..nn {
        v = g.edges[pred[v].expect("improved node has a predecessor")].from;
    }
    let start = v;
    let mut cycle = Vec::new();
    let mut u = start;
    loop {
        let e = pred[u].expect("cycle nodes have predecessors");
        cycle.push(g.edges[e]);
        u = g.edges[e].from;
        if u == start {
            break;
        }
    }
    cycle.reverse();
    let witness = NegativeCycle { edges: cycle };
    debug_assert!(witness.total_weight() < 0);
    Some(witness)
}

const INF: i128 = i128::MAX / 4;

/// All-pairs shortest paths; `dist[i][i] < 0` signals a negative cycle.
fn floyd_warshall(g: &DiffGraph) -> Vec<Vec<i128>> {
    let nn = g.num_nodes();
    let mut dist = vec![vec![INF; nn]; nn];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for e in &g.edges {
        let w = e.weight as i128;
        if w < dist[e.from][e.to] {
            dist[e.from][e.to] = w;
        }
    }
    for k in 0..nn {
        for i in 0..nn {
            if dist[i][k] == INF {
                continue;
            }
            for j in 0..nn {
                if dist[k][j] == INF {
                    continue;
                }
                let cand = dist[i][k] + dist[k][j];
                if cand < dist[i][j] {
                    dist[i][j] = cand;
                }
            }
        }
    }
    dist
}

/// Strengthen derivable odd bounds on `2 x_i` until nothing changes (or a
/// negative cycle appears). The input graph is not modified; the returned
/// graph has a negative cycle iff the original UTVPI system admits no integer
/// point.
pub fn tighten_for_integers(g: &DiffGraph) -> DiffGraph {
    let mut g = g.clone();
    let rounds = 2 * g.num_vars();
    for _round in 0..rounds {
        let dist = floyd_warshall(&g);
        if (0..g.num_nodes()).any(|i| dist[i][i] < 0) {
            // Already integer-infeasible; the caller reads the verdict off
            // the returned graph.
            return g;
        }
        let mut changed = false;
        for i in 0..g.num_vars() {
            for (from, to) in [(node_v(i), node_u(i)), (node_u(i), node_v(i))] {
                let d = dist[from][to];
                if d == INF {
                    continue;
                }
                // Derivable bound: to - from >= -d, i.e. 2x_i (or -2x_i) >= -d.
                let c = -d;
                if c.rem_euclid(2) == 1 {
                    let w = i64::try_from(d - 1).expect("tightened weight fits i64");
                    g.edges.push(DiffEdge { from, to, weight: w, row: None });
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    g
}
