//! Exact solver for the linear relaxation of a UTVPI system.
//!
//! The relaxation `min w^T x` over `Ax >= b, x` real always admits a
//! half-integral optimum when it is bounded and feasible. This module finds
//! one by working on the doubled difference-constraint graph:
//!
//! * a negative cycle certifies infeasibility (summing the corresponding rows
//!   yields `0 >= positive`);
//! * otherwise the node-cost minimization is solved exactly as a transshipment
//!   problem; if some supply cannot be routed, the relaxation is unbounded;
//! * otherwise the final potentials give `2 x_i = pot(v_i) - pot(u_i)`, so
//!   every coordinate is a half-integer, and the final arc flows fold into
//!   exact dual multipliers (one per original row) certifying optimality.
//!
//! [`maximal_integrality`] post-processes an optimum: it greedily pins
//! fractional coordinates to a floor or ceiling whenever re-solving shows the
//! optimal value is preserved, yielding an optimum whose set of integral
//! coordinates is maximal among same-value optima reachable this way.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::dcs::{detect_negative_cycle, double, node_u, node_v};
use crate::flow::{solve_transshipment, FlowOutcome};
use crate::model::{
    DualCertificate, HalfInt, LpOptimum, LpSolution, ModelError, Sign, UtvpiInstance,
};

/// Errors from relaxation post-processing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error(transparent)]
    Model(#[from] ModelError),
    /// The supplied point does not satisfy the instance.
    #[error("point is not feasible for the instance")]
    PointInfeasible,
}

/// Arc flows of a solved difference-constraint transshipment, keyed back to
/// the originating rows. Produced by [`solve_lo_detailed`]; consumed by
/// [`extract_dual`].
#[derive(Debug, Clone)]
pub struct DcsFlow {
    edge_rows: Vec<Option<usize>>,
    flows: Vec<BigInt>,
    scale: BigInt,
}

/// Solve the linear relaxation exactly, returning a half-integral optimum
/// with a dual certificate when one exists.
pub fn solve_lo(inst: &UtvpiInstance) -> LpSolution {
    solve_lo_detailed(inst).0
}

/// As [`solve_lo`], additionally exposing the underlying flow state when the
/// relaxation was solved to optimality.
pub fn solve_lo_detailed(inst: &UtvpiInstance) -> (LpSolution, Option<DcsFlow>) {
    let g = double(inst);
    if detect_negative_cycle(&g).is_some() {
        return (LpSolution::Infeasible, None);
    }
    match solve_transshipment(&g) {
        FlowOutcome::Unroutable => (LpSolution::Unbounded, None),
        FlowOutcome::Solved(state) => {
            let x: Vec<HalfInt> = (0..inst.num_vars())
                .map(|i| {
                    let twice = state.potentials[node_v(i)] - state.potentials[node_u(i)];
                    HalfInt::from_twice(i64::try_from(twice).expect("coordinate fits in i64"))
                })
                .collect();
            debug_assert_eq!(inst.is_feasible(&x), Ok(true));
            let value = inst.evaluate(&x).expect("dimensions match");
            let flow = DcsFlow {
                edge_rows: g.edges().iter().map(|e| e.row).collect(),
                flows: state.flows,
                scale: g.scale().clone(),
            };
            let certificate = extract_dual(inst, &flow);
            debug_assert!(certificate.is_some());
            (LpSolution::Optimal(LpOptimum { x, value, certificate }), Some(flow))
        }
    }
}

/// Fold transshipment arc flows into one dual multiplier per row: rows that
/// doubled into two arcs average them, single-arc rows divide by the
/// objective scale only. Returns `None` if the flow state does not match the
/// instance.
pub fn extract_dual(inst: &UtvpiInstance, flow: &DcsFlow) -> Option<DualCertificate> {
    let m = inst.num_rows();
    let mut sums = vec![BigInt::from(0); m];
    let mut arity = vec![0u32; m];
    for (r, f) in flow.edge_rows.iter().zip(&flow.flows) {
        let Some(r) = *r else { continue };
        if r >= m {
            return None;
        }
        sums[r] += f;
        arity[r] += 1;
    }
    let mut y = Vec::with_capacity(m);
    for r in 0..m {
        let denom = match arity[r] {
            1 => flow.scale.clone(),
            2 => 2 * flow.scale.clone(),
            _ => return None,
        };
        y.push(BigRational::new(sums[r].clone(), denom));
    }
    Some(DualCertificate::new(y))
}

/// Starting from a feasible point `x`, repeatedly pin coordinates: every
/// already-integral coordinate is frozen, and each fractional coordinate is
/// tried at its floor and then its ceiling; a pin is kept whenever the pinned
/// relaxation still achieves `w^T x`. The result has a maximal set of
/// integral coordinates among points of the same value: when it terminates no
/// single remaining fractional coordinate can be made integral without either
/// losing feasibility, raising the value, or disturbing the frozen ones.
pub fn maximal_integrality(
    inst: &UtvpiInstance,
    x: &[HalfInt],
) -> Result<Vec<HalfInt>, LpError> {
    if !inst.is_feasible(x)? {
        return Err(LpError::PointInfeasible);
    }
    let value = inst.evaluate(x).expect("dimensions match");
    let mut current = x.to_vec();
    loop {
        let pins: Vec<(usize, i64)> = current
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_integral())
            .map(|(j, c)| (j, c.floor()))
            .collect();
        let mut advanced = false;
        'scan: for j in 0..current.len() {
            if current[j].is_integral() {
                continue;
            }
            for cand in [current[j].floor(), current[j].ceil()] {
                let mut sub = inst.clone();
                for &(var, val) in pins.iter().chain([&(j, cand)]) {
                    sub.add_constraint(crate::model::UtvpiConstraint::unary(Sign::Plus, var, val))
                        .expect("var in range");
                    sub.add_constraint(crate::model::UtvpiConstraint::unary(
                        Sign::Minus,
                        var,
                        -val,
                    ))
                    .expect("var in range");
                }
                if let LpSolution::Optimal(opt) = solve_lo(&sub) {
                    if opt.value == value {
                        current = opt.x;
                        advanced = true;
                        break 'scan;
                    }
                }
            }
        }
        if !advanced {
            return Ok(current);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rat, verify_dual_certificate, UtvpiConstraint};
    use Sign::{Minus, Plus};

    /// Build a point from doubled coordinates: `halves(&[1, 2])` is (1/2, 1).
    fn halves(twices: &[i64]) -> Vec<HalfInt> {
        twices.iter().map(|&t| HalfInt::from_twice(t)).collect()
    }

    fn inst(n: usize, w: Vec<i64>, rows: Vec<UtvpiConstraint>) -> UtvpiInstance {
        let mut inst = UtvpiInstance::with_int_objective(n, &w).unwrap();
        for r in rows {
            inst.add_constraint(r).unwrap();
        }
        inst
    }

    #[test]
    fn pinned_half_point_is_found_exactly() {
        // x1 + x2 >= 1 and x1 + x2 <= 1 and x1 = x2 pin the unique feasible
        // point (1/2, 1/2).
        let inst = inst(
            2,
            vec![1, 1],
            vec![
                UtvpiConstraint::binary(Plus, 0, Plus, 1, 1).unwrap(),
                UtvpiConstraint::binary(Minus, 0, Minus, 1, -1).unwrap(),
                UtvpiConstraint::binary(Plus, 0, Minus, 1, 0).unwrap(),
                UtvpiConstraint::binary(Plus, 1, Minus, 0, 0).unwrap(),
            ],
        );
        match solve_lo(&inst) {
            LpSolution::Optimal(opt) => {
                assert_eq!(opt.x, halves(&[1, 1]));
                assert_eq!(opt.value, rat(1));
                let cert = opt.certificate.expect("certificate present");
                verify_dual_certificate(&inst, &opt.x, &cert).unwrap();
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn detects_unboundedness() {
        let inst = inst(
            2,
            vec![1, -2],
            vec![UtvpiConstraint::binary(Plus, 0, Minus, 1, 0).unwrap()],
        );
        assert!(matches!(solve_lo(&inst), LpSolution::Unbounded));
    }

    #[test]
    fn detects_infeasibility() {
        let inst = inst(
            1,
            vec![1],
            vec![
                UtvpiConstraint::unary(Plus, 0, 1),
                UtvpiConstraint::unary(Minus, 0, 0),
            ],
        );
        assert!(matches!(solve_lo(&inst), LpSolution::Infeasible));
    }

    #[test]
    fn unary_bound_is_met_with_tight_dual() {
        let inst = inst(1, vec![1], vec![UtvpiConstraint::unary(Plus, 0, 3)]);
        match solve_lo(&inst) {
            LpSolution::Optimal(opt) => {
                assert_eq!(opt.x, halves(&[6]));
                assert_eq!(opt.value, rat(3));
                let cert = opt.certificate.unwrap();
                assert_eq!(cert.multipliers(), &[rat(1)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn symmetric_sum_row_splits_evenly() {
        let inst = inst(
            2,
            vec![1, 1],
            vec![UtvpiConstraint::binary(Plus, 0, Plus, 1, 2).unwrap()],
        );
        match solve_lo(&inst) {
            LpSolution::Optimal(opt) => {
                assert_eq!(opt.value, rat(2));
                let cert = opt.certificate.unwrap();
                assert_eq!(cert.multipliers(), &[rat(1)]);
                verify_dual_certificate(&inst, &opt.x, &cert).unwrap();
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn fractional_objective_scales_exactly() {
        // min x1/2 with x1 >= 5: optimum 5/2 at x1 = 5.
        let mut inst = UtvpiInstance::new(1, vec![crate::model::ratio(1, 2)]).unwrap();
        inst.add_constraint(UtvpiConstraint::unary(Plus, 0, 5)).unwrap();
        match solve_lo(&inst) {
            LpSolution::Optimal(opt) => {
                assert_eq!(opt.x, halves(&[10]));
                assert_eq!(opt.value, crate::model::ratio(5, 2));
                let cert = opt.certificate.unwrap();
                verify_dual_certificate(&inst, &opt.x, &cert).unwrap();
                assert_eq!(cert.multipliers(), &[crate::model::ratio(1, 2)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn maximal_integrality_pins_a_fractional_pair() {
        // On x1 + x2 >= 1 the point (1/2, 1/2) is optimal but both
        // coordinates can be pinned: the refinement lands on (0, 1).
        let inst = inst(
            2,
            vec![1, 1],
            vec![UtvpiConstraint::binary(Plus, 0, Plus, 1, 1).unwrap()],
        );
        let start = halves(&[1, 1]);
        let refined = maximal_integrality(&inst, &start).unwrap();
        assert_eq!(refined, halves(&[0, 2]));
        assert_eq!(inst.evaluate(&refined).unwrap(), rat(1));
    }

    #[test]
    fn maximal_integrality_keeps_forced_halves() {
        // 2x1 = 1 written as two rows forces x1 = 1/2 in every feasible
        // point, so the refinement must leave it alone.
        let inst = inst(
            2,
            vec![0, 1],
            vec![
                UtvpiConstraint::binary(Plus, 0, Plus, 1, 1).unwrap(),
                UtvpiConstraint::binary(Minus, 0, Minus, 1, -1).unwrap(),
                UtvpiConstraint::binary(Plus, 0, Minus, 1, 0).unwrap(),
                UtvpiConstraint::binary(Plus, 1, Minus, 0, 0).unwrap(),
            ],
        );
        let start = halves(&[1, 1]);
        let refined = maximal_integrality(&inst, &start).unwrap();
        assert_eq!(refined, start);
    }

    #[test]
    fn maximal_integrality_rejects_infeasible_start() {
        let inst = inst(1, vec![1], vec![UtvpiConstraint::unary(Plus, 0, 3)]);
        let err = maximal_integrality(&inst, &halves(&[0])).unwrap_err();
        assert_eq!(err, LpError::PointInfeasible);
    }

    #[test]
    fn rejects_mismatched_flow_state() {
        let a = inst(1, vec![1], vec![UtvpiConstraint::unary(Plus, 0, 3)]);
        let (_, flow) = solve_lo_detailed(&a);
        let b = inst(1, vec![1], vec![]);
        assert!(extract_dual(&b, &flow.unwrap()).is_none());
    }
}
