//! Rounding relaxation optima to integer optima via neighborhood
//! persistency.
//!
//! The relaxation of a UTVPI system has the *neighborhood persistency*
//! property: whenever the integer problem has an optimum at all, it has one
//! within distance strictly less than one of any given relaxation optimum
//! `x*`. Coordinates the relaxation already made integral can therefore be
//! frozen, and each fractional coordinate only needs to choose between its
//! floor and ceiling. Writing `x = floor(x*) + x'` with `x'` binary on the
//! fractional coordinates turns the residual search into a binary UTVPI
//! problem, which [`crate::binary`] solves exactly.
//!
//! On top of the reduction this module assembles:
//!
//! * [`solve_ilp`] — the full exact pipeline (relaxation, reduction, binary
//!   search, lift), including the unbounded/infeasible classification of
//!   instances whose relaxation is unbounded;
//! * [`decide_value_at_most`] — a bounded-search decision procedure for
//!   "is there an integer solution of value at most k" on instances with
//!   nonnegative objective and nonnegative variables, whose search effort
//!   depends on the residual budget rather than the full problem;
//! * [`two_approx`] — a factor-2 approximation for the same instance class,
//!   combining the reduction with relaxation-guided rounding of the binary
//!   part.

use num_traits::Signed;
use thiserror::Error;

use crate::binary::{
    decide_at_most_k, solve_exact, two_approx_binary, BinaryError, BinaryProblem,
    BinarySolveResult,
};
use crate::dcs::{detect_negative_cycle, double, tighten_for_integers};
use crate::lp::solve_lo;
use crate::model::{
    HalfInt, IlpOptimum, IlpSolution, LpSolution, ModelError, Rational, Sign, UtvpiInstance,
};

/// Errors from the reduction itself.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PersistencyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    /// The reduction is only meaningful around a feasible point.
    #[error("reference point is not feasible for the instance")]
    PointInfeasible,
}

/// Errors from the precondition-guarded procedures ([`two_approx`],
/// [`decide_value_at_most`]).
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ApproxError {
    #[error(transparent)]
    Model(#[from] ModelError),
    /// Objective weights must be nonnegative.
    #[error("objective weight of x{} is negative", var + 1)]
    NegativeWeight { var: usize },
    /// Every variable needs an explicit lower-bound row `+x_j >= b` with
    /// `b >= 0`; without one the guarantees below do not hold.
    #[error("no row of the form +x{0} >= b with b >= 0; variable x{0} is not \
             constrained to be nonnegative", var + 1)]
    MissingNonnegativityRow { var: usize },
}

/// The binary residual problem around a half-integral feasible point.
#[derive(Debug, Clone)]
pub struct BinaryReduction {
    base: Vec<i64>,
    free: Vec<usize>,
    problem: BinaryProblem,
    value_offset: Rational,
}

/// Result of [`reduce_to_binary`].
#[derive(Debug, Clone)]
pub enum ReductionOutcome {
    Binary(BinaryReduction),
    /// A row involving only frozen coordinates is violated, so no point of
    /// the neighborhood is feasible. Unreachable when the reference point is
    /// feasible (which [`reduce_to_binary`] enforces); kept so downstream
    /// code handles relaxed callers gracefully.
    ImmediateInfeasible,
}

impl BinaryReduction {
    /// Componentwise floor of the reference point; the value every frozen
    /// coordinate keeps, and the lower of the two choices for free ones.
    pub fn base(&self) -> &[i64] {
        &self.base
    }

    /// Indices of the fractional coordinates, ascending; coordinate `i` of
    /// the binary problem decides `x_{free[i]}`.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn problem(&self) -> &BinaryProblem {
        &self.problem
    }

    /// Objective value contributed by the frozen part: `w^T base`.
    pub fn value_offset(&self) -> &Rational {
        &self.value_offset
    }

    /// Re-assemble a full solution from a solution of the binary problem.
    pub fn lift(&self, z01: &[bool]) -> Vec<i64> {
        assert_eq!(z01.len(), self.free.len(), "one bit per free coordinate");
        let mut z = self.base.clone();
        for (bit, &j) in z01.iter().zip(&self.free) {
            z[j] += i64::from(*bit);
        }
        z
    }
}

/// Freeze the integral coordinates of a feasible half-integral point and
/// express the floor/ceiling choice of each fractional coordinate as a
/// binary variable. Each row keeps its fractional terms; its bound drops by
/// the contribution of the floored reference point. Rows with no fractional
/// terms are checked once and dropped.
pub fn reduce_to_binary(
    inst: &UtvpiInstance,
    x_star: &[HalfInt],
) -> Result<ReductionOutcome, PersistencyError> {
    if !inst.is_feasible(x_star)? {
        return Err(PersistencyError::PointInfeasible);
    }
    let base: Vec<i64> = x_star.iter().map(|c| c.floor()).collect();
    let free: Vec<usize> =
        (0..inst.num_vars()).filter(|&j| !x_star[j].is_integral()).collect();
    let slot: std::collections::HashMap<usize, usize> =
        free.iter().enumerate().map(|(i, &j)| (j, i)).collect();

    let mut rows = Vec::new();
    for c in inst.constraints() {
        let mut fixed: i64 = 0;
        let mut open: Vec<(Sign, usize)> = Vec::new();
        for (s, v) in c.terms() {
            fixed += s.factor() * base[v];
            if let Some(&i) = slot.get(&v) {
                open.push((s, i));
            }
        }
        let bound = c.bound() - fixed;
        match open.as_slice() {
            [] => {
                if bound > 0 {
                    return Ok(ReductionOutcome::ImmediateInfeasible);
                }
            }
            [(s, v)] => rows.push((*s, *v, None, bound)),
            [(s1, v1), (s2, v2)] => rows.push((*s1, *v1, Some((*s2, *v2)), bound)),
            _ => unreachable!("rows have at most two terms"),
        }
    }

    let objective: Vec<Rational> = free.iter().map(|&j| inst.objective()[j].clone()).collect();
    let value_offset = inst
        .objective()
        .iter()
        .zip(&base)
        .map(|(w, &b)| w * Rational::from_integer(b.into()))
        .sum();
    Ok(ReductionOutcome::Binary(BinaryReduction {
        problem: BinaryProblem { n: free.len(), objective, rows },
        base,
        free,
        value_offset,
    }))
}

/// The exact pipeline with the relaxation outcome it was built from.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub relaxation: LpSolution,
    pub solution: IlpSolution,
}

/// Solve the integer problem exactly. See [`solve_ilp_detailed`] for the
/// classification logic.
pub fn solve_ilp(inst: &UtvpiInstance) -> IlpSolution {
    solve_ilp_detailed(inst).solution
}

/// Solve the integer problem exactly, reporting the relaxation outcome too.
///
/// * Relaxation infeasible: the integer problem is infeasible.
/// * Relaxation unbounded: the integer problem is unbounded if it is
///   feasible at all, which is decided by parity tightening of the
///   difference-constraint graph (integer-infeasible systems acquire a
///   negative cycle once odd bounds are tightened).
/// * Relaxation optimal at `x*`: neighborhood persistency reduces the
///   problem to a binary one around `x*`; an infeasible residual means no
///   integer point attains the (bounded) problem, i.e. integer infeasible.
///
/// The returned optimum is deterministic: the lexicographically smallest
/// integer optimum within the neighborhood of the relaxation optimum.
pub fn solve_ilp_detailed(inst: &UtvpiInstance) -> PipelineReport {
    let relaxation = solve_lo(inst);
    let solution = match &relaxation {
        LpSolution::Infeasible => IlpSolution::Infeasible,
        LpSolution::Unbounded => {
            let tightened = tighten_for_integers(&double(inst));
            if detect_negative_cycle(&tightened).is_some() {
                IlpSolution::Infeasible
            } else {
                IlpSolution::Unbounded
            }
        }
        LpSolution::Optimal(opt) => {
            match reduce_to_binary(inst, &opt.x).expect("relaxation optimum is feasible") {
                ReductionOutcome::ImmediateInfeasible => IlpSolution::Infeasible,
                ReductionOutcome::Binary(red) => match solve_exact(red.problem()) {
                    BinarySolveResult::Infeasible => IlpSolution::Infeasible,
                    BinarySolveResult::Optimal { z, value } => {
                        let z = red.lift(&z);
                        let value = red.value_offset().clone() + value;
                        debug_assert_eq!(inst.evaluate_int(&z), Ok(value.clone()));
                        debug_assert_eq!(inst.is_feasible_int(&z), Ok(true));
                        IlpSolution::Optimal(IlpOptimum { z, value })
                    }
                },
            }
        }
    };
    PipelineReport { relaxation, solution }
}

/// Check the preconditions shared by [`decide_value_at_most`] and
/// [`two_approx`]: nonnegative weights, and an explicit nonnegative lower
/// bound row for every variable.
fn check_nonneg_preconditions(inst: &UtvpiInstance) -> Result<(), ApproxError> {
    if let Some(var) = inst.objective().iter().position(|w| w.is_negative()) {
        return Err(ApproxError::NegativeWeight { var });
    }
    let mut witnessed = vec![false; inst.num_vars()];
    for c in inst.constraints() {
        if c.num_terms() == 1 && c.bound() >= 0 {
            let (s, v) = c.first();
            if s == Sign::Plus {
                witnessed[v] = true;
            }
        }
    }
    match witnessed.iter().position(|w| !w) {
        Some(var) => Err(ApproxError::MissingNonnegativityRow { var }),
        None => Ok(()),
    }
}

/// Decide whether some integer solution has value at most `k`, for instances
/// with nonnegative objective and explicitly nonnegative variables. The
/// relaxation bounds the search: only the residual budget
/// `k - w^T floor(x*)` is explored, by branch and bound with unit
/// propagation over the binary residual problem.
pub fn decide_value_at_most(inst: &UtvpiInstance, k: &Rational) -> Result<bool, ApproxError> {
    check_nonneg_preconditions(inst)?;
    let LpSolution::Optimal(opt) = solve_lo(inst) else {
        // Infeasible: no solution at all. Unbounded cannot happen: the
        // objective is bounded below by w^T b over the nonnegativity rows.
        return Ok(false);
    };
    if &opt.value > k {
        // The relaxation is a lower bound for every integer solution.
        return Ok(false);
    }
    match reduce_to_binary(inst, &opt.x).expect("relaxation optimum is feasible") {
        ReductionOutcome::ImmediateInfeasible => Ok(false),
        ReductionOutcome::Binary(red) => {
            let budget = k - red.value_offset();
            match decide_at_most_k(red.problem(), &budget) {
                Ok(answer) => Ok(answer),
                Err(BinaryError::NegativeObjective) => {
                    unreachable!("weights were checked nonnegative")
                }
                Err(BinaryError::Model(e)) => Err(ApproxError::Model(e)),
            }
        }
    }
}

/// A 2-approximate solution together with the relaxation value that
/// certifies the factor (every integer solution costs at least the
/// relaxation optimum).
#[derive(Debug, Clone)]
pub struct TwoApproxReport {
    pub solution: IlpSolution,
    pub relaxation_value: Option<Rational>,
}

/// Factor-2 approximation for instances with nonnegative objective and
/// explicitly nonnegative variables: reduce around a relaxation optimum,
/// round the binary residual by relaxation-guided 2-SAT completion, and
/// lift. The lifted value is `w^T base + value'` with
/// `value' <= 2 OPT_residual`, and since `w^T base >= 0` this is at most
/// twice the integer optimum. Infeasibility is detected exactly.
pub fn two_approx(inst: &UtvpiInstance) -> Result<TwoApproxReport, ApproxError> {
    check_nonneg_preconditions(inst)?;
    let LpSolution::Optimal(opt) = solve_lo(inst) else {
        return Ok(TwoApproxReport { solution: IlpSolution::Infeasible, relaxation_value: None });
    };
    match reduce_to_binary(inst, &opt.x).expect("relaxation optimum is feasible") {
        ReductionOutcome::ImmediateInfeasible => Ok(TwoApproxReport {
            solution: IlpSolution::Infeasible,
            relaxation_value: Some(opt.value),
        }),
        ReductionOutcome::Binary(red) => {
            let rounded = match two_approx_binary(red.problem()) {
                Ok(r) => r,
                Err(BinaryError::NegativeObjective) => {
                    unreachable!("weights were checked nonnegative")
                }
                Err(BinaryError::Model(e)) => return Err(ApproxError::Model(e)),
            };
            let solution = match rounded {
                BinarySolveResult::Infeasible => IlpSolution::Infeasible,
                BinarySolveResult::Optimal { z, value } => {
                    let z = red.lift(&z);
                    let value = red.value_offset().clone() + value;
                    debug_assert_eq!(inst.is_feasible_int(&z), Ok(true));
                    IlpSolution::Optimal(IlpOptimum { z, value })
                }
            };
            Ok(TwoApproxReport { solution, relaxation_value: Some(opt.value) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rat, ratio, UtvpiConstraint};
    use Sign::{Minus, Plus};

    fn inst(n: usize, w: Vec<i64>, rows: Vec<UtvpiConstraint>) -> UtvpiInstance {
        let mut inst = UtvpiInstance::with_int_objective(n, &w).unwrap();
        for r in rows {
            inst.add_constraint(r).unwrap();
        }
        inst
    }

    fn halves(twices: &[i64]) -> Vec<HalfInt> {
        twices.iter().map(|&t| HalfInt::from_twice(t)).collect()
    }

    #[test]
    fn reduction_freezes_integral_and_offsets_bounds() {
        // x* = (3/2, 2) on rows x1 + x2 >= 3 and -x1 - x2 >= -4: the second
        // coordinate freezes at 2, the first becomes binary over base 1.
        let inst = inst(
            2,
            vec![1, 1],
            vec![
                UtvpiConstraint::binary(Plus, 0, Plus, 1, 3).unwrap(),
                UtvpiConstraint::binary(Minus, 0, Minus, 1, -4).unwrap(),
            ],
        );
        let ReductionOutcome::Binary(red) = reduce_to_binary(&inst, &halves(&[3, 4])).unwrap()
        else {
            panic!("expected binary reduction");
        };
        assert_eq!(red.base(), &[1, 2]);
        assert_eq!(red.free(), &[0]);
        assert_eq!(red.value_offset(), &rat(3));
        // Row bounds after removing base contributions 1 + 2 = 3 and -3.
        assert_eq!(red.problem().rows, vec![(Plus, 0, None, 0), (Minus, 0, None, -1)]);
        assert_eq!(red.lift(&[true]), vec![2, 2]);
        assert_eq!(red.lift(&[false]), vec![1, 2]);
    }

    #[test]
    fn reduction_rejects_infeasible_point() {
        let inst = inst(1, vec![1], vec![UtvpiConstraint::unary(Plus, 0, 3)]);
        let err = reduce_to_binary(&inst, &halves(&[0])).unwrap_err();
        assert_eq!(err, PersistencyError::PointInfeasible);
    }

    #[test]
    fn pipeline_solves_a_mixed_system() {
        // min x1 + x2 - x3 with x1 + x2 >= 1, x3 - x1 <= 2 (as -x3 + x1 >=
        // -2 reversed), x3 <= 4.
        let inst = inst(
            3,
            vec![1, 1, -1],
            vec![
                UtvpiConstraint::binary(Plus, 0, Plus, 1, 1).unwrap(),
                UtvpiConstraint::binary(Plus, 0, Minus, 2, -2).unwrap(),
                UtvpiConstraint::unary(Minus, 2, -4),
                UtvpiConstraint::unary(Plus, 0, 0),
                UtvpiConstraint::unary(Plus, 1, 0),
            ],
        );
        // Optimum value -2, attained e.g. at (2, 0, 4) and (1, 0, 3): pushing
        // x3 up along x3 <= x1 + 2 gains 1 per unit of x1 spent, so the best
        // points trade them off exactly.
        match solve_ilp(&inst) {
            IlpSolution::Optimal(o) => {
                assert_eq!(o.value, rat(-2));
                assert_eq!(inst.is_feasible_int(&o.z), Ok(true));
                assert_eq!(inst.evaluate_int(&o.z), Ok(rat(-2)));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
        // Deterministic: repeated solves agree exactly.
        let again = solve_ilp(&inst);
        assert_eq!(format!("{:?}", solve_ilp(&inst)), format!("{again:?}"));
    }

    #[test]
    fn pipeline_reports_integer_infeasible_when_only_halves_fit() {
        // 2x1 = 1: feasible fractionally (x1 = 1/2), integer infeasible.
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
        let report = solve_ilp_detailed(&inst);
        assert!(matches!(report.relaxation, LpSolution::Optimal(_)));
        assert!(matches!(report.solution, IlpSolution::Infeasible));
    }

    #[test]
    fn pipeline_classifies_unbounded_vs_infeasible_relaxations() {
        // Unbounded: minimize -x1 with x1 >= 0.
        let unbounded =
            inst(1, vec![-1], vec![UtvpiConstraint::unary(Plus, 0, 0)]);
        assert!(matches!(solve_ilp(&unbounded), IlpSolution::Unbounded));

        // Relaxation unbounded but integer infeasible: minimize -x3 with
        // 2x1 = 1 pinning half-integrality and x3 free upward.
        let tricky = inst(
            3,
            vec![0, 0, -1],
            vec![
                UtvpiConstraint::binary(Plus, 0, Plus, 1, 1).unwrap(),
                UtvpiConstraint::binary(Minus, 0, Minus, 1, -1).unwrap(),
                UtvpiConstraint::binary(Plus, 0, Minus, 1, 0).unwrap(),
                UtvpiConstraint::binary(Plus, 1, Minus, 0, 0).unwrap(),
                UtvpiConstraint::unary(Plus, 2, 0),
            ],
        );
        let report = solve_ilp_detailed(&tricky);
        assert!(matches!(report.relaxation, LpSolution::Unbounded));
        assert!(matches!(report.solution, IlpSolution::Infeasible));
    }

    #[test]
    fn pipeline_reports_plain_infeasibility() {
        let inst = inst(
            1,
            vec![1],
            vec![UtvpiConstraint::unary(Plus, 0, 1), UtvpiConstraint::unary(Minus, 0, 0)],
        );
        assert!(matches!(solve_ilp(&inst), IlpSolution::Infeasible));
    }

    #[test]
    fn decision_needs_nonnegativity_witnesses() {
        let missing = inst(
            2,
            vec![1, 1],
            vec![
                UtvpiConstraint::binary(Plus, 0, Plus, 1, 1).unwrap(),
                UtvpiConstraint::unary(Plus, 0, 0),
            ],
        );
        assert_eq!(
            decide_value_at_most(&missing, &rat(1)),
            Err(ApproxError::MissingNonnegativityRow { var: 1 })
        );

        let negative = inst(
            1,
            vec![-1],
            vec![UtvpiConstraint::unary(Plus, 0, 0)],
        );
        assert_eq!(
            decide_value_at_most(&negative, &rat(1)),
            Err(ApproxError::NegativeWeight { var: 0 })
        );
    }

    #[test]
    fn decision_matches_exact_optimum_threshold() {
        // Triangle cover with nonnegativity rows: optimum 2.
        let inst = inst(
            3,
            vec![1, 1, 1],
            vec![
                UtvpiConstraint::binary(Plus, 0, Plus, 1, 1).unwrap(),
                UtvpiConstraint::binary(Plus, 0, Plus, 2, 1).unwrap(),
                UtvpiConstraint::binary(Plus, 1, Plus, 2, 1).unwrap(),
                UtvpiConstraint::unary(Plus, 0, 0),
                UtvpiConstraint::unary(Plus, 1, 0),
                UtvpiConstraint::unary(Plus, 2, 0),
            ],
        );
        assert_eq!(decide_value_at_most(&inst, &ratio(19, 10)), Ok(false));
        assert_eq!(decide_value_at_most(&inst, &rat(2)), Ok(true));
        assert_eq!(decide_value_at_most(&inst, &rat(100)), Ok(true));
        match solve_ilp(&inst) {
            IlpSolution::Optimal(o) => assert_eq!(o.value, rat(2)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn approximation_feasible_and_within_factor() {
        let inst = inst(
            3,
            vec![2, 1, 1],
            vec![
                UtvpiConstraint::binary(Plus, 0, Plus, 1, 2).unwrap(),
                UtvpiConstraint::binary(Plus, 1, Plus, 2, 3).unwrap(),
                UtvpiConstraint::unary(Plus, 0, 0),
                UtvpiConstraint::unary(Plus, 1, 0),
                UtvpiConstraint::unary(Plus, 2, 0),
            ],
        );
        let report = two_approx(&inst).unwrap();
        let approx = match report.solution {
            IlpSolution::Optimal(o) => o,
            other => panic!("expected a solution, got {other:?}"),
        };
        assert_eq!(inst.is_feasible_int(&approx.z), Ok(true));
        let exact = match solve_ilp(&inst) {
            IlpSolution::Optimal(o) => o.value,
            other => panic!("expected optimal, got {other:?}"),
        };
        assert!(approx.value <= rat(2) * exact.clone());
        assert!(report.relaxation_value.unwrap() <= exact);
    }

    #[test]
    fn approximation_detects_infeasibility() {
        let inst = inst(
            1,
            vec![1],
            vec![
                UtvpiConstraint::unary(Plus, 0, 2),
                UtvpiConstraint::unary(Minus, 0, -1),
                UtvpiConstraint::unary(Plus, 0, 0),
            ],
        );
        let report = two_approx(&inst).unwrap();
        assert!(matches!(report.solution, IlpSolution::Infeasible));
    }
}
