//! Exact uncapacitated min-cost transshipment on a difference-constraint
//! graph; crate-private backend of the relaxation solver.
//!
//! Minimizing the node-cost objective over difference-constraint assignments
//! is, by linear programming duality, the problem of routing `-cost(p)` units
//! of supply out of every node `p` (negative values are demands) along the
//! stored edges at minimum total edge weight. Successive shortest paths with
//! node potentials keeps every residual reduced cost nonnegative, so each
//! augmentation is a Dijkstra run; the final potentials solve the original
//! minimization and the final arc flows are the dual multipliers, both exact.
//!
//! Flows are arbitrary-precision (supplies scale with the objective
//! denominators); distances and potentials stay in `i128` since they only ever
//! accumulate edge weights.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dcs::DiffGraph;

pub(crate) struct FlowState {
    /// Final node potentials; assignment `y(p) = -potential(p)` minimizes the
    /// node-cost objective over the difference-constraint polyhedron.
    pub potentials: Vec<i128>,
    /// Flow per graph edge, in scaled objective units.
    pub flows: Vec<BigInt>,
}

pub(crate) enum FlowOutcome {
    Solved(FlowState),
    /// Some supply cannot reach any demand: the minimization is unbounded.
    Unroutable,
}

/// Solve the transshipment dual of the node-cost minimization. The caller
/// must have ruled out negative cycles.
pub(crate) fn solve_transshipment(g: &DiffGraph) -> FlowOutcome {
    let nn = g.num_nodes();
    let m = g.edges().len();

    // Arc 2k is edge k forward (infinite capacity), arc 2k+1 its reversal
    // (capacity = current flow on k).
    let arc_from = |a: usize| {
        let e = &g.edges()[a / 2];
        if a % 2 == 0 {
            e.from
        } else {
            e.to
        }
    };
    let arc_to = |a: usize| {
        let e = &g.edges()[a / 2];
        if a % 2 == 0 {
            e.to
        } else {
            e.from
        }
    };
    let arc_cost = |a: usize| {
        let w = g.edges()[a / 2].weight as i128;
        if a % 2 == 0 {
            w
        } else {
            -w
        }
    };

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nn];
    for a in 0..2 * m {
        adj[arc_from(a)].push(a);
    }

    // Bellman-Ford from an implicit zero-weight source gives potentials with
    // nonnegative reduced costs on every (forward) arc.
    let mut pot = vec![0i128; nn];
    for _ in 0..nn {
        let mut changed = false;
        for e in g.edges() {
            let cand = pot[e.from] + e.weight as i128;
            if cand < pot[e.to] {
                pot[e.to] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut flows = vec![BigInt::zero(); m];
    let mut excess: Vec<BigInt> = g.node_cost().iter().map(|c| -c).collect();

    loop {
        let Some(s) = (0..nn).find(|&p| excess[p].is_positive()) else {
            return FlowOutcome::Solved(FlowState { potentials: pot, flows });
        };

        // Dijkstra over residual arcs with reduced costs.
        let mut dist: Vec<Option<i128>> = vec![None; nn];
        let mut parent: Vec<Option<usize>> = vec![None; nn];
        let mut done = vec![false; nn];
        let mut heap = BinaryHeap::new();
        dist[s] = Some(0);
        heap.push(Reverse((0i128, s)));
        while let Some(Reverse((d, p))) = heap.pop() {
            if done[p] {
                continue;
            }
            done[p] = true;
            for &a in &adj[p] {
                if a % 2 == 1 && !flows[a / 2].is_positive() {
                    continue; // reverse arc with no flow to undo
                }
                let rc = arc_cost(a) + pot[p] - pot[arc_to(a)];
                debug_assert!(rc >= 0, "potential invariant violated");
                let nd = d + rc;
                let q = arc_to(a);
                if dist[q].map_or(true, |old| nd < old) {
                    dist[q] = Some(nd);
                    parent[q] = Some(a);
                    heap.push(Reverse((nd, q)));
                }
            }
        }

        // Nearest reachable demand node; ties break on index.
        let target = (0..nn)
            .filter(|&p| excess[p].is_negative())
            .filter_map(|p| dist[p].map(|d| (d, p)))
            .min();
        let Some((dt, t)) = target else {
            return FlowOutcome::Unroutable;
        };

        // Augment by the bottleneck along the shortest path.
        let mut delta = excess[s].clone().min(-excess[t].clone());
        let mut p = t;
        while p != s {
            let a = parent[p].expect("path node has a parent");
            if a % 2 == 1 {
                delta = delta.min(flows[a / 2].clone());
            }
            p = arc_from(a);
        }
        debug_assert!(delta.is_positive());
        let mut p = t;
        while p != s {
            let a = parent[p].expect("path node has a parent");
            if a % 2 == 0 {
                flows[a / 2] += &delta;
            } else {
                flows[a / 2] -= &delta;
            }
            p = arc_from(a);
        }
        excess[s] -= &delta;
        excess[t] += &delta;

        // Shift potentials, capping at the target distance so reduced costs
        // stay nonnegative on arcs leaving the unreached region.
        for p in 0..nn {
            pot[p] += dist[p].map_or(dt, |d| d.min(dt));
        }
    }
}
