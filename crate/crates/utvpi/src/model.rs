//! Core problem types: UTVPI constraint systems with exact rational data.
//!
//! A UTVPI (unit-two-variable-per-inequality) system is `Ax >= b` where every
//! row of `A` has at most two nonzero entries, each in `{-1, +1}`, and `b` is
//! integer. The objective is a rational vector `w`; the integer program asks
//! for `min w.x` over integer points of the polyhedron, and its linear
//! relaxation always admits a half-integral optimum when bounded.
//!
//! Everything here is exact: rationals are arbitrary-precision and in lowest
//! terms, half-integers are stored as their doubled value, and all feasibility
//! and duality checks are integer comparisons. No floating point enters any
//! solver path.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar. Canonical lowest terms with a positive denominator
/// are maintained by the representation itself.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Errors from model-level operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable x{} out of range for {n} variables", var + 1)]
    VariableOutOfRange { var: usize, n: usize },
    #[error("variable x{} appears twice in one row", var + 1)]
    DuplicateVariable { var: usize },
    #[error("objective length {got} does not match variable count {expected}")]
    ObjectiveLength { expected: usize, got: usize },
    #[error("instance must have at least one variable")]
    NoVariables,
}

/// A value in (1/2)Z, stored as its doubled value so that all arithmetic and
/// comparisons stay in plain integers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    /// The half-integer with doubled value `twice`, i.e. `twice / 2`.
    pub fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn from_int(v: i64) -> Self {
        HalfInt { twice: 2 * v }
    }

    /// Doubled value; always exact.
    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integral(self) -> bool {
        self.twice % 2 == 0
    }

    /// Largest integer `<= self`.
    pub fn floor(self) -> i64 {
        self.twice.div_euclid(2)
    }

    /// Smallest integer `>= self`.
    pub fn ceil(self) -> i64 {
        (self.twice + 1).div_euclid(2)
    }

    pub fn to_rational(self) -> Rational {
        BigRational::new(BigInt::from(self.twice), BigInt::from(2))
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Convert an integer point to half-integer form.
pub fn half_ints_from(z: &[i64]) -> Vec<HalfInt> {
    z.iter().map(|&v| HalfInt::from_int(v)).collect()
}

/// Coefficient sign of a variable occurrence in a UTVPI row.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// One row `s1*x_p [+ s2*x_q] >= bound` with `s1, s2` in `{-1, +1}` and the
/// two variables distinct.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UtvpiConstraint {
    first: (Sign, usize),
    second: Option<(Sign, usize)>,
    bound: i64,
}

impl UtvpiConstraint {
    pub fn unary(sign: Sign, var: usize, bound: i64) -> Self {
        UtvpiConstraint { first: (sign, var), second: None, bound }
    }

    pub fn binary(
        s1: Sign,
        v1: usize,
        s2: Sign,
        v2: usize,
        bound: i64,
    ) -> Result<Self, ModelError> {
        if v1 == v2 {
            return Err(ModelError::DuplicateVariable { var: v1 });
        }
        Ok(UtvpiConstraint { first: (s1, v1), second: Some((s2, v2)), bound })
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn first(&self) -> (Sign, usize) {
        self.first
    }

    pub fn second(&self) -> Option<(Sign, usize)> {
        self.second
    }

    pub fn terms(&self) -> impl Iterator<Item = (Sign, usize)> + '_ {
        std::iter::once(self.first).chain(self.second)
    }

    pub fn num_terms(&self) -> usize {
        if self.second.is_some() {
            2
        } else {
            1
        }
    }

    /// Largest variable index mentioned.
    pub fn max_var(&self) -> usize {
        self.terms().map(|(_, v)| v).max().unwrap()
    }

    /// Doubled left-hand side at a half-integer point.
    pub fn lhs_twice(&self, x: &[HalfInt]) -> i128 {
        self.terms()
            .map(|(s, v)| s.factor() as i128 * x[v].twice() as i128)
            .sum()
    }

    pub fn is_satisfied_by(&self, x: &[HalfInt]) -> bool {
        self.lhs_twice(x) >= 2 * self.bound as i128
    }
}

impl fmt::Display for UtvpiConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s1, v1) = self.first;
        write!(f, "{}x{}", s1, v1 + 1)?;
        if let Some((s2, v2)) = self.second {
            write!(f, " {} x{}", s2, v2 + 1)?;
        }
        write!(f, " >= {}", self.bound)
    }
}

/// A UTVPI system with a rational objective: `min w.x` subject to `Ax >= b`.
#[derive(Clone, PartialEq, Debug)]
pub struct UtvpiInstance {
    n: usize,
    constraints: Vec<UtvpiConstraint>,
    objective: Vec<Rational>,
    names: Option<Vec<String>>,
}

impl UtvpiInstance {
    pub fn new(n: usize, objective: Vec<Rational>) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::NoVariables);
        }
        if objective.len() != n {
            return Err(ModelError::ObjectiveLength { expected: n, got: objective.len() });
        }
        Ok(UtvpiInstance { n, constraints: Vec::new(), objective, names: None })
    }

    /// Instance with integer objective coefficients; test and fixture helper.
    pub fn with_int_objective(n: usize, objective: &[i64]) -> Result<Self, ModelError> {
        UtvpiInstance::new(n, objective.iter().map(|&c| rat(c)).collect())
    }

    pub fn add_constraint(&mut self, c: UtvpiConstraint) -> Result<(), ModelError> {
        if c.max_var() >= self.n {
            return Err(ModelError::VariableOutOfRange { var: c.max_var(), n: self.n });
        }
        self.constraints.push(c);
        Ok(())
    }

    pub fn set_names(&mut self, names: Vec<String>) -> Result<(), ModelError> {
        if names.len() != self.n {
            return Err(ModelError::DimensionMismatch { expected: self.n, got: names.len() });
        }
        self.names = Some(names);
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[UtvpiConstraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of variable `j` (0-based); defaults to `x{j+1}`.
    pub fn var_name(&self, j: usize) -> String {
        match &self.names {
            Some(names) => names[j].clone(),
            None => format!("x{}", j + 1),
        }
    }

    fn check_dim(&self, len: usize) -> Result<(), ModelError> {
        if len != self.n {
            return Err(ModelError::DimensionMismatch { expected: self.n, got: len });
        }
        Ok(())
    }

    /// Exact objective value `w.x` at a half-integer point.
    pub fn evaluate(&self, x: &[HalfInt]) -> Result<Rational, ModelError> {
        self.check_dim(x.len())?;
        let mut acc = Rational::zero();
        for (w, xv) in self.objective.iter().zip(x) {
            acc += w * xv.to_rational();
        }
        Ok(acc)
    }

    pub fn evaluate_int(&self, z: &[i64]) -> Result<Rational, ModelError> {
        self.evaluate(&half_ints_from(z))
    }

    /// Indices of rows violated at `x`, in row order.
    pub fn violated_rows(&self, x: &[HalfInt]) -> Result<Vec<usize>, ModelError> {
        self.check_dim(x.len())?;
        Ok(self
            .constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_satisfied_by(x))
            .map(|(i, _)| i)
            .collect())
    }

    pub fn is_feasible(&self, x: &[HalfInt]) -> Result<bool, ModelError> {
        Ok(self.violated_rows(x)?.is_empty())
    }

    pub fn is_feasible_int(&self, z: &[i64]) -> Result<bool, ModelError> {
        self.is_feasible(&half_ints_from(z))
    }
}

/// Does the integer point `z` lie in the integer neighborhood of `x`, i.e.
/// `|z_j - x_j| < 1` for every coordinate?
pub fn in_integer_neighborhood(x: &[HalfInt], z: &[i64]) -> Result<bool, ModelError> {
    if x.len() != z.len() {
        return Err(ModelError::DimensionMismatch { expected: x.len(), got: z.len() });
    }
    // |z - x| < 1 in doubled units: |2z - twice| < 2.
    Ok(x.iter().zip(z).all(|(xv, &zv)| (2 * zv - xv.twice()).abs() < 2))
}

/// Nonnegative row multipliers `y` witnessing optimality of a relaxation
/// solution through the dual program `max b.y` subject to `A'y = w, y >= 0`.
#[derive(Clone, PartialEq, Debug)]
pub struct DualCertificate {
    y: Vec<Rational>,
}

impl DualCertificate {
    pub fn new(y: Vec<Rational>) -> Self {
        DualCertificate { y }
    }

    pub fn multipliers(&self) -> &[Rational] {
        &self.y
    }

    /// Dual objective `b.y`.
    pub fn dual_value(&self, instance: &UtvpiInstance) -> Result<Rational, ModelError> {
        if self.y.len() != instance.num_rows() {
            return Err(ModelError::DimensionMismatch {
                expected: instance.num_rows(),
                got: self.y.len(),
            });
        }
        let mut acc = Rational::zero();
        for (c, yr) in instance.constraints().iter().zip(&self.y) {
            acc += yr * rat(c.bound());
        }
        Ok(acc)
    }
}

/// Verify a dual certificate against a claimed primal optimum: `y >= 0`,
/// `A'y = w` exactly, and complementary slackness `y_i (A_i x - b_i) = 0` on
/// every row. Together with primal feasibility of `x` these force optimality
/// of both sides.
pub fn verify_dual_certificate(
    instance: &UtvpiInstance,
    x: &[HalfInt],
    cert: &DualCertificate,
) -> Result<bool, ModelError> {
    instance.check_dim(x.len())?;
    if cert.y.len() != instance.num_rows() {
        return Err(ModelError::DimensionMismatch {
            expected: instance.num_rows(),
            got: cert.y.len(),
        });
    }
    if !instance.is_feasible(x)? {
        return Ok(false);
    }
    if cert.y.iter().any(|yr| yr.is_negative()) {
        return Ok(false);
    }
    // Column sums of A' y must reproduce w exactly.
    let mut col = vec![Rational::zero(); instance.num_vars()];
    for (c, yr) in instance.constraints().iter().zip(&cert.y) {
        for (s, v) in c.terms() {
            col[v] += yr * rat(s.factor());
        }
    }
    if col != instance.objective {
        return Ok(false);
    }
    // Slackness: a positive multiplier requires a tight row.
    for (c, yr) in instance.constraints().iter().zip(&cert.y) {
        if !yr.is_zero() && c.lhs_twice(x) != 2 * c.bound() as i128 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the linear relaxation.
#[derive(Clone, PartialEq, Debug)]
pub enum LpSolution {
    Optimal(LpOptimum),
    Infeasible,
    Unbounded,
}

#[derive(Clone, PartialEq, Debug)]
pub struct LpOptimum {
    pub x: Vec<HalfInt>,
    pub value: Rational,
    pub certificate: Option<DualCertificate>,
}

impl LpSolution {
    pub fn optimum(&self) -> Option<&LpOptimum> {
        match self {
            LpSolution::Optimal(o) => Some(o),
            _ => None,
        }
    }
}

/// Outcome of the integer program.
#[derive(Clone, PartialEq, Debug)]
pub enum IlpSolution {
    Optimal(IlpOptimum),
    Infeasible,
    Unbounded,
}

#[derive(Clone, PartialEq, Debug)]
pub struct IlpOptimum {
    pub z: Vec<i64>,
    pub value: Rational,
}

impl IlpSolution {
    pub fn optimum(&self) -> Option<&IlpOptimum> {
        match self {
            IlpSolution::Optimal(o) => Some(o),
            _ => None,
        }
    }
}

/// Least common multiple of the objective denominators; the scale that turns
/// the objective into an integer vector.
pub fn objective_denominator_lcm(objective: &[Rational]) -> BigInt {
    let mut d = BigInt::one();
    for w in objective {
        d = num_integer::lcm(d, w.denom().clone());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn halfint_floor_ceil() {
        assert_eq!(half(5).floor(), 2);
        assert_eq!(half(5).ceil(), 3);
        assert_eq!(half(-1).floor(), -1);
        assert_eq!(half(-1).ceil(), 0);
        assert_eq!(half(4).floor(), 2);
        assert_eq!(half(4).ceil(), 2);
        assert!(half(4).is_integral());
        assert!(!half(5).is_integral());
    }

    #[test]
    fn halfint_display() {
        assert_eq!(half(3).to_string(), "3/2");
        assert_eq!(half(-1).to_string(), "-1/2");
        assert_eq!(half(6).to_string(), "3");
    }

    #[test]
    fn evaluate_weighted_point() {
        // w = (3, 1, 0) at x = (1/2, 1, 1/2) gives 5/2.
        let inst = UtvpiInstance::with_int_objective(3, &[3, 1, 0]).unwrap();
        let x = vec![half(1), half(2), half(1)];
        assert_eq!(inst.evaluate(&x).unwrap(), ratio(5, 2));
    }

    #[test]
    fn evaluate_zero_objective() {
        let inst = UtvpiInstance::with_int_objective(2, &[0, 0]).unwrap();
        let x = vec![half(14), half(-7)];
        assert_eq!(inst.evaluate(&x).unwrap(), rat(0));
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let inst = UtvpiInstance::with_int_objective(2, &[1, 1]).unwrap();
        let err = inst.evaluate(&[half(0)]).unwrap_err();
        assert_eq!(err, ModelError::DimensionMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn feasibility_reports_violated_rows() {
        // x1 + x2 >= 1 and -x1 >= -1.
        let mut inst = UtvpiInstance::with_int_objective(2, &[1, 1]).unwrap();
        inst.add_constraint(
            UtvpiConstraint::binary(Sign::Plus, 0, Sign::Plus, 1, 1).unwrap(),
        )
        .unwrap();
        inst.add_constraint(UtvpiConstraint::unary(Sign::Minus, 0, -1)).unwrap();
        assert!(inst.is_feasible(&[half(1), half(1)]).unwrap());
        assert_eq!(inst.violated_rows(&[half(0), half(0)]).unwrap(), vec![0]);
        assert_eq!(inst.violated_rows(&[half(4), half(-4)]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn empty_constraint_set_is_feasible() {
        let inst = UtvpiInstance::with_int_objective(2, &[1, -1]).unwrap();
        assert!(inst.is_feasible(&[half(9), half(9)]).unwrap());
    }

    #[test]
    fn neighborhood_membership() {
        // x = (1/2, 1): z = (1, 1) inside, z = (2, 1) outside.
        let x = vec![half(1), half(2)];
        assert!(in_integer_neighborhood(&x, &[1, 1]).unwrap());
        assert!(in_integer_neighborhood(&x, &[0, 1]).unwrap());
        assert!(!in_integer_neighborhood(&x, &[2, 1]).unwrap());
        assert!(!in_integer_neighborhood(&x, &[1, 0]).unwrap());
    }

    #[test]
    fn neighborhood_of_integral_point_is_exact_match() {
        let x = vec![half(2), half(-4)];
        assert!(in_integer_neighborhood(&x, &[1, -2]).unwrap());
        assert!(!in_integer_neighborhood(&x, &[1, -1]).unwrap());
        assert!(!in_integer_neighborhood(&x, &[0, -2]).unwrap());
    }

    #[test]
    fn duplicate_variable_rejected() {
        let err = UtvpiConstraint::binary(Sign::Plus, 1, Sign::Minus, 1, 0).unwrap_err();
        assert_eq!(err, ModelError::DuplicateVariable { var: 1 });
    }

    #[test]
    fn certificate_valid_for_tight_unary_row() {
        // min x1 s.t. x1 >= 3: x = 3, y = (1).
        let mut inst = UtvpiInstance::with_int_objective(1, &[1]).unwrap();
        inst.add_constraint(UtvpiConstraint::unary(Sign::Plus, 0, 3)).unwrap();
        let cert = DualCertificate::new(vec![rat(1)]);
        assert!(verify_dual_certificate(&inst, &[half(6)], &cert).unwrap());
        assert_eq!(cert.dual_value(&inst).unwrap(), rat(3));
    }

    #[test]
    fn certificate_rejects_slack_row_with_positive_multiplier() {
        let mut inst = UtvpiInstance::with_int_objective(1, &[1]).unwrap();
        inst.add_constraint(UtvpiConstraint::unary(Sign::Plus, 0, 3)).unwrap();
        // x = 4 is feasible but row is slack; y = (1) must be rejected.
        let cert = DualCertificate::new(vec![rat(1)]);
        assert!(!verify_dual_certificate(&inst, &[half(8)], &cert).unwrap());
    }

    #[test]
    fn certificate_rejects_wrong_column_sum() {
        let mut inst = UtvpiInstance::with_int_objective(2, &[1, 1]).unwrap();
        inst.add_constraint(
            UtvpiConstraint::binary(Sign::Plus, 0, Sign::Plus, 1, 2).unwrap(),
        )
        .unwrap();
        // A'y = (2, 2) != (1, 1).
        let cert = DualCertificate::new(vec![rat(2)]);
        assert!(!verify_dual_certificate(&inst, &[half(2), half(2)], &cert).unwrap());
        // y = (1) reproduces w and the row is tight at (1, 1).
        let good = DualCertificate::new(vec![rat(1)]);
        assert!(verify_dual_certificate(&inst, &[half(2), half(2)], &good).unwrap());
    }

    #[test]
    fn certificate_rejects_negative_multiplier() {
        let mut inst = UtvpiInstance::with_int_objective(1, &[-1]).unwrap();
        inst.add_constraint(UtvpiConstraint::unary(Sign::Minus, 0, -3)).unwrap();
        // Correct certificate for min -x1 s.t. -x1 >= -3 is y = (1).
        let good = DualCertificate::new(vec![rat(1)]);
        assert!(verify_dual_certificate(&inst, &[half(6)], &good).unwrap());
        let bad = DualCertificate::new(vec![rat(-1)]);
        assert!(!verify_dual_certificate(&inst, &[half(6)], &bad).unwrap());
    }

    #[test]
    fn objective_scale_is_denominator_lcm() {
        let obj = vec![ratio(1, 2), ratio(2, 3), rat(5)];
        assert_eq!(objective_denominator_lcm(&obj), BigInt::from(6));
        assert_eq!(objective_denominator_lcm(&[rat(1), rat(0)]), BigInt::from(1));
    }
}
