//! Exact solvers for UTVPI systems restricted to 0/1 variables.
//!
//! After the persistency reduction every variable ranges over `{0, 1}`, and
//! every reduced row that is not already satisfied is expressible as a clause
//! over at most two literals, so feasibility is 2-SAT. Optimization is still
//! NP-hard in general (minimum vertex cover is the special case
//! `x_i + x_j >= 1` with nonnegative weights), so exact optimization uses
//! branch and bound:
//!
//! * [`solve_exact`] minimizes any rational objective and returns the
//!   lexicographically smallest optimum — branching tries each variable at 0
//!   before 1 in index order and prunes only on `bound >= best`, so the first
//!   optimum found in search order is the lexicographic minimum;
//! * [`decide_at_most_k`] answers "is there a feasible point of value <= k"
//!   for nonnegative objectives, with unit propagation and clause-driven
//!   branching so that easy instances resolve without search;
//! * [`two_approx_binary`] trades optimality for speed: it solves the linear
//!   relaxation, keeps its integral coordinates, and completes the remaining
//!   half-valued coordinates by 2-SAT, giving value at most twice optimal for
//!   nonnegative objectives.


use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lp::solve_lo;
use crate::model::{LpSolution, ModelError, Rational, Sign, UtvpiInstance};

/// Errors from the binary solvers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BinaryError {
    #[error(transparent)]
    Model(#[from] ModelError),
    /// [`decide_at_most_k`] requires a nonnegative objective; with mixed
    /// signs its bounding rule would be unsound.
    #[error("decision procedure requires a nonnegative objective")]
    NegativeObjective,
}

/// A literal: variable index plus the value (`true` = 1) that satisfies it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }
    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }
    fn node(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }
    fn negated(self) -> Self {
        Literal { var: self.var, positive: !self.positive }
    }
}

/// Conjunction of clauses with at most two literals each.
#[derive(Debug, Clone, Default)]
pub struct TwoSatFormula {
    n: usize,
    clauses: Vec<(Literal, Option<Literal>)>,
    /// Set when an always-false clause was added; the formula is then
    /// unsatisfiable regardless of the clause list.
    contradiction: bool,
}

impl TwoSatFormula {
    pub fn new(n: usize) -> Self {
        TwoSatFormula { n, clauses: Vec::new(), contradiction: false }
    }

    pub fn add_unit(&mut self, a: Literal) {
        self.clauses.push((a, None));
    }

    pub fn add_clause(&mut self, a: Literal, b: Literal) {
        self.clauses.push((a, Some(b)));
    }

    /// Record a clause that no assignment satisfies (an always-violated row).
    pub fn add_contradiction(&mut self) {
        self.contradiction = true;
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }
}

/// Decide satisfiability via strongly connected components of the implication
/// graph; on success returns the deterministic assignment that sets each
/// variable true iff the component of its positive literal comes later in the
/// reverse topological order than that of its negative literal.
pub fn two_sat_solve(f: &TwoSatFormula) -> Option<Vec<bool>> {
    if f.contradiction {
        return None;
    }
    let nn = 2 * f.n;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nn];
    for &(a, b) in &f.clauses {
        match b {
            Some(b) => {
                // (a or b): !a -> b, !b -> a.
                adj[a.negated().node()].push(b.node());
                adj[b.negated().node()].push(a.node());
            }
            None => {
                // unit a: !a -> a.
                adj[a.negated().node()].push(a.node());
            }
        }
    }

    // Tarjan's algorithm, iterative to keep deep implication chains off the
    // call stack. Component ids increase in reverse topological order.
    let mut index = vec![usize::MAX; nn];
    let mut low = vec![0usize; nn];
    let mut comp = vec![usize::MAX; nn];
    let mut on_stack = vec![false; nn];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut next_comp = 0usize;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for start in 0..nn {
        if index[start] != usize::MAX {
            continue;
        }
        call.push((start, 0));
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei == 0 {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj[v].get(*ei) {
                *ei += 1;
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
                call.pop();
                if let Some(&mut (p, _)) = call.last_mut() {
                    low[p] = low[p].min(low[v]);
                }
            }
        }
    }

    let mut assignment = Vec::with_capacity(f.n);
    for v in 0..f.n {
        let pos = comp[Literal::pos(v).node()];
        let neg = comp[Literal::neg(v).node()];
        if pos == neg {
            return None;
        }
        // Smaller component id = later in topological order = safe to satisfy.
        assignment.push(pos < neg);
    }
    Some(assignment)
}

/// Outcome of exact binary optimization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BinarySolveResult {
    Optimal { z: Vec<bool>, value: Rational },
    Infeasible,
}

/// The rows of a binary problem: plain UTVPI rows interpreted over `{0,1}`.
#[derive(Debug, Clone)]
pub struct BinaryProblem {
    pub n: usize,
    pub objective: Vec<Rational>,
    pub rows: Vec<(Sign, usize, Option<(Sign, usize)>, i64)>,
}

impl BinaryProblem {
    pub fn from_instance(inst: &UtvpiInstance) -> Self {
        BinaryProblem {
            n: inst.num_vars(),
            objective: inst.objective().to_vec(),
            rows: inst
                .constraints()
                .iter()
                .map(|c| (c.first().0, c.first().1, c.second(), c.bound()))
                .collect(),
        }
    }

    fn row_value(sign: Sign, val: bool) -> i64 {
        sign.factor() * i64::from(val)
    }

    fn row_satisfied(&self, r: usize, z: &[Option<bool>]) -> Option<bool> {
        // Some(true/false) when decided by the assigned variables, None when
        // still open.
        let (s1, v1, second, b) = self.rows[r];
        let mut fixed = 0i64;
        let mut open_max = 0i64;
        let mut open_min = 0i64;
        let mut any_open = false;
        let mut acc = |sign: Sign, var: usize| match z[var] {
            Some(val) => fixed += Self::row_value(sign, val),
            None => {
                any_open = true;
                match sign {
                    Sign::Plus => open_max += 1,
                    Sign::Minus => open_min -= 1,
                }
            }
        };
        acc(s1, v1);
        if let Some((s2, v2)) = second {
            acc(s2, v2);
        }
        if !any_open {
            Some(fixed >= b)
        } else if fixed + open_min >= b {
            Some(true)
        } else if fixed + open_max < b {
            Some(false)
        } else {
            None
        }
    }

    fn is_feasible(&self, z: &[bool]) -> bool {
        let opt: Vec<Option<bool>> = z.iter().map(|&v| Some(v)).collect();
        (0..self.rows.len()).all(|r| self.row_satisfied(r, &opt) == Some(true))
    }

    fn value(&self, z: &[bool]) -> Rational {
        z.iter()
            .zip(&self.objective)
            .filter(|(v, _)| **v)
            .map(|(_, w)| w.clone())
            .fold(Rational::zero(), |a, w| a + w)
    }
}

/// Minimize an arbitrary rational objective over the feasible 0/1 points of
/// `problem`, returning the lexicographically smallest optimum.
pub fn solve_exact(problem: &BinaryProblem) -> BinarySolveResult {
    // Suffix sums of the negative objective parts: the best possible
    // contribution of the still-unassigned tail.
    let n = problem.n;
    let mut tail_gain = vec![Rational::zero(); n + 1];
    for j in (0..n).rev() {
        let w = &problem.objective[j];
        tail_gain[j] =
            tail_gain[j + 1].clone() + if w.is_negative() { w.clone() } else { Rational::zero() };
    }

    struct Search<'a> {
        p: &'a BinaryProblem,
        tail_gain: Vec<Rational>,
        best: Option<(Vec<bool>, Rational)>,
    }

    impl Search<'_> {
        fn go(&mut self, depth: usize, z: &mut Vec<Option<bool>>, value: Rational) {
            // Feasibility pruning: a row decided false can never recover.
            for r in 0..self.p.rows.len() {
                if self.p.row_satisfied(r, z) == Some(false) {
                    return;
                }
            }
            // Bound pruning; ties are NOT pruned so the first optimum found
            // (the lexicographically smallest) is kept.
            let bound = value.clone() + self.tail_gain[depth].clone();
            if let Some((_, best_val)) = &self.best {
                if &bound >= best_val {
                    return;
                }
            }
            if depth == self.p.n {
                let assignment: Vec<bool> = z.iter().map(|v| v.unwrap()).collect();
                debug_assert!(self.p.is_feasible(&assignment));
                self.best = Some((assignment, value));
                return;
            }
            // Greedy completion: if every remaining row is already decided
            // true, finishing with the cheapest tail (take w < 0 only, i.e.
            // 0 wherever w >= 0) is optimal for this subtree and also
            // lexicographically smallest among its optima.
            if (0..self.p.rows.len()).all(|r| self.p.row_satisfied(r, z) == Some(true)) {
                let mut completed = value;
                for j in depth..self.p.n {
                    let w = &self.p.objective[j];
                    let take = w.is_negative();
                    z[j] = Some(take);
                    if take {
                        completed += w.clone();
                    }
                }
                let assignment: Vec<bool> = z.iter().map(|v| v.unwrap()).collect();
                for j in depth..self.p.n {
                    z[j] = None;
                }
                debug_assert!(self.p.is_feasible(&assignment));
                self.best = Some((assignment, completed));
                return;
            }
            for val in [false, true] {
                z[depth] = Some(val);
                let dv = if val { self.p.objective[depth].clone() } else { Rational::zero() };
                self.go(depth + 1, z, value.clone() + dv);
                z[depth] = None;
            }
        }
    }

    let mut search = Search { p: problem, tail_gain, best: None };
    let mut z = vec![None; n];
    search.go(0, &mut z, Rational::zero());
    match search.best {
        Some((z, value)) => BinarySolveResult::Optimal { z, value },
        None => BinarySolveResult::Infeasible,
    }
}

/// Decide whether some feasible 0/1 point has objective value at most `k`.
/// Requires a nonnegative objective (checked): then setting a variable to 1
/// only ever costs budget, so the budget test is a sound prune. Unit
/// propagation forces literals from rows decided by partial assignments;
/// branching follows the lowest-index undecided row and tries 1 first.
pub fn decide_at_most_k(problem: &BinaryProblem, k: &Rational) -> Result<bool, BinaryError> {
    if problem.objective.iter().any(|w| w.is_negative()) {
        return Err(BinaryError::NegativeObjective);
    }

    fn propagate(p: &BinaryProblem, z: &mut Vec<Option<bool>>, spent: &mut Rational) -> bool {
        loop {
            let mut changed = false;
            for r in 0..p.rows.len() {
                match p.row_satisfied(r, z) {
                    Some(true) => continue,
                    Some(false) => return false,
                    None => {}
                }
                // Row undecided: if exactly one open variable remains, its
                // value may be forced.
                let (s1, v1, second, b) = p.rows[r];
                let mut terms = vec![(s1, v1)];
                if let Some(t) = second {
                    terms.push(t);
                }
                let open: Vec<(Sign, usize)> =
                    terms.iter().copied().filter(|&(_, v)| z[v].is_none()).collect();
                if open.len() != 1 {
                    continue;
                }
                let fixed: i64 = terms
                    .iter()
                    .filter(|&&(_, v)| z[v].is_some())
                    .map(|&(s, v)| BinaryProblem::row_value(s, z[v].unwrap()))
                    .sum();
                let (s, v) = open[0];
                // Need s*z_v >= b - fixed; over {0,1} this forces z_v when
                // only one choice works (row_satisfied == None rules out the
                // degenerate always/never cases here).
                let need = b - fixed;
                let forced = match s {
                    Sign::Plus => need > 0,  // must take 1
                    Sign::Minus => need > -1, // taking 1 gives -1 < need, so 0
                };
                let val = match s {
                    Sign::Plus => forced,
                    Sign::Minus => !forced,
                };
                debug_assert!(
                    BinaryProblem::row_value(s, val) >= need,
                    "propagated value must satisfy the row"
                );
                z[v] = Some(val);
                if val {
                    *spent += p.objective[v].clone();
                }
                changed = true;
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(p: &BinaryProblem, z: &mut Vec<Option<bool>>, spent: Rational, k: &Rational) -> bool {
        let mut z2 = z.clone();
        let mut spent2 = spent;
        if !propagate(p, &mut z2, &mut spent2) || &spent2 > k {
            return false;
        }
        // Find the lowest-index row not yet satisfied; branch on its
        // lowest-index open variable, trying 1 first (satisfying rows
        // eagerly tends to close them).
        let branch_row = (0..p.rows.len()).find(|&r| p.row_satisfied(r, &z2) == None);
        let Some(r) = branch_row else {
            // All rows decided; propagate returned true so all are
            // satisfied, and unassigned variables can stay 0 for free.
            return true;
        };
        let (s1, v1, second, _) = p.rows[r];
        let mut open_vars: Vec<usize> = [Some((s1, v1)), second]
            .into_iter()
            .flatten()
            .filter(|&(_, v)| z2[v].is_none())
            .map(|(_, v)| v)
            .collect();
        open_vars.sort_unstable();
        let v = open_vars[0];
        for val in [true, false] {
            z2[v] = Some(val);
            let extra = if val { p.objective[v].clone() } else { Rational::zero() };
            if search(p, &mut z2, spent2.clone() + extra, k) {
                return true;
            }
            z2[v] = None;
        }
        false
    }

    let mut z = vec![None; problem.n];
    Ok(search(problem, &mut z, Rational::zero(), k))
}

/// Rounding half of the factor-2 approximation, specialized to binary
/// problems: solve the relaxation over `[0,1]`, freeze coordinates the
/// relaxation already made integral, and complete the half-valued ones with
/// any 2-SAT solution of the rows they must still satisfy. Requires a
/// nonnegative objective; rows must admit such a completion whenever the
/// instance is feasible, which holds for the reduced systems produced by the
/// persistency step.
pub fn two_approx_binary(problem: &BinaryProblem) -> Result<BinarySolveResult, BinaryError> {
    if problem.objective.iter().any(|w| w.is_negative()) {
        return Err(BinaryError::NegativeObjective);
    }
    if problem.n == 0 {
        // Every row names a variable, so a zero-variable problem has no rows
        // and the empty assignment is its optimum.
        return Ok(BinarySolveResult::Optimal { z: Vec::new(), value: Rational::zero() });
    }
    // Relaxation over the box [0,1].
    let mut inst = UtvpiInstance::new(problem.n, problem.objective.to_vec())?;
    for &(s1, v1, second, b) in &problem.rows {
        let c = match second {
            Some((s2, v2)) => crate::model::UtvpiConstraint::binary(s1, v1, s2, v2, b)?,
            None => crate::model::UtvpiConstraint::unary(s1, v1, b),
        };
        inst.add_constraint(c)?;
    }
    for v in 0..problem.n {
        inst.add_constraint(crate::model::UtvpiConstraint::unary(Sign::Plus, v, 0))?;
        inst.add_constraint(crate::model::UtvpiConstraint::unary(Sign::Minus, v, -1))?;
    }
    let LpSolution::Optimal(opt) = solve_lo(&inst) else {
        // The box keeps the relaxation bounded, so the only alternative is
        // infeasibility.
        return Ok(BinarySolveResult::Infeasible);
    };

    // Freeze integral coordinates; collect the rows the half coordinates
    // must finish as 2-SAT clauses.
    let frozen: Vec<Option<bool>> = opt
        .x
        .iter()
        .map(|c| if c.is_integral() { Some(c.floor() == 1) } else { None })
        .collect();
    let mut f = TwoSatFormula::new(problem.n);
    for v in 0..problem.n {
        if let Some(val) = frozen[v] {
            f.add_unit(if val { Literal::pos(v) } else { Literal::neg(v) });
        }
    }
    for &(s1, v1, second, b) in &problem.rows {
        let mut fixed = 0i64;
        let mut open: Vec<(Sign, usize)> = Vec::new();
        for (s, v) in [Some((s1, v1)), second].into_iter().flatten() {
            match frozen[v] {
                Some(val) => fixed += BinaryProblem::row_value(s, val),
                None => open.push((s, v)),
            }
        }
        let need = b - fixed;
        let lit = |(s, v): (Sign, usize)| match s {
            Sign::Plus => Literal::pos(v),
            Sign::Minus => Literal::neg(v),
        };
        match open.as_slice() {
            [] => {
                if need > 0 {
                    f.add_contradiction();
                }
            }
            [t] => {
                // s*z >= need over {0,1}: need <= -1 is free, need == 0
                // forces only Minus terms, need == 1 forces only Plus terms.
                let max = if t.0 == Sign::Plus { 1 } else { 0 };
                let min = max - 1;
                if need > max {
                    f.add_contradiction();
                } else if need > min {
                    f.add_unit(lit(*t));
                }
            }
            [t1, t2] => {
                let max = |s: Sign| if s == Sign::Plus { 1i64 } else { 0 };
                let hi = max(t1.0) + max(t2.0);
                if need > hi {
                    f.add_contradiction();
                } else if need == hi {
                    // Both terms must take their satisfying value.
                    f.add_unit(lit(*t1));
                    f.add_unit(lit(*t2));
                } else if need == hi - 1 {
                    // At least one term at its satisfying value.
                    f.add_clause(lit(*t1), lit(*t2));
                }
                // need <= hi - 2: always satisfied over {0,1}.
            }
            _ => unreachable!("rows have at most two terms"),
        }
    }
    match two_sat_solve(&f) {
        Some(z) => {
            debug_assert!(problem.is_feasible(&z));
            let value = problem.value(&z);
            Ok(BinarySolveResult::Optimal { z, value })
        }
        None => Ok(BinarySolveResult::Infeasible),
    }
}
