//! Discrete midpoint convexity on the half-integer lattice.
//!
//! The theory behind the half-unit neighborhood refinement works on
//! functions over half-integer vectors. The midpoint of two half-integers is
//! a quarter-integer, and the rounding that samples the lattice around it is
//! *directed*: [`floor_q`] moves a strict quarter-integer away from the
//! nearest integer, [`ceil_q`] toward it, and both fix half-integers. These
//! deliberately differ from ordinary floor/ceiling, hence the distinct
//! names. They satisfy `floor_q(q) + ceil_q(q) = 2q` exactly.
//!
//! A function `g` on half-integer vectors (with values in the rationals
//! extended by +infinity) is midpoint convex in this discrete sense when
//!
//! ```text
//! g(x) + g(y) >= g(floor_q((x + y) / 2)) + g(ceil_q((x + y) / 2))
//! ```
//!
//! for all x, y, with floor/ceil applied coordinatewise. [`midpoint_check`]
//! tests one pair; [`sweep_midpoint`] searches a whole box for a violating
//! pair and returns it as a witness — linear functions satisfy the
//! inequality with equality, indicators of UTVPI rows satisfy it, and
//! indicators of wider rows (three variables, or a coefficient of 2) are
//! exactly where it starts failing, which is what limits the neighborhood
//! rounding to UTVPI systems.
//!
//! [`half_neighborhood`] and [`check_half_persistency`] expose the half-unit
//! neighborhood itself: the integer points within 1/2 of a half-integral
//! point, a subset of its open unit neighborhood.

use num_rational::BigRational;
use thiserror::Error;

use crate::model::{HalfInt, ModelError, Rational};
use crate::oracle::{check_persistency_multi, NeighborhoodKind, OracleError, PersistencyReport};
use crate::parser::ExtendedInstance;
use crate::model::UtvpiInstance;

/// An exact quarter-integer, stored as four times its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuarterInt {
    quadruple: i64,
}

impl QuarterInt {
    pub fn from_quadruple(quadruple: i64) -> Self {
        QuarterInt { quadruple }
    }

    pub fn quadruple(self) -> i64 {
        self.quadruple
    }

    /// True when the value lies on the half-integer lattice.
    pub fn is_half_integral(self) -> bool {
        self.quadruple % 2 == 0
    }

    pub fn to_rational(self) -> Rational {
        BigRational::new(self.quadruple.into(), 4.into())
    }
}

impl From<HalfInt> for QuarterInt {
    fn from(h: HalfInt) -> Self {
        QuarterInt { quadruple: 2 * h.twice() }
    }
}

impl std::fmt::Display for QuarterInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let q = self.quadruple;
        if q % 4 == 0 {
            write!(f, "{}", q / 4)
        } else if q % 2 == 0 {
            write!(f, "{}/2", q / 2)
        } else {
            write!(f, "{q}/4")
        }
    }
}

/// Exact midpoint of two half-integers.
pub fn midpoint(x: HalfInt, y: HalfInt) -> QuarterInt {
    QuarterInt { quadruple: x.twice() + y.twice() }
}

/// Round a quarter-integer to the half-integer lattice, moving strict
/// quarter-integers *away* from the nearest integer; half-integers are
/// fixed.
pub fn floor_q(q: QuarterInt) -> HalfInt {
    let quad = q.quadruple;
    match quad.rem_euclid(4) {
        0 | 2 => HalfInt::from_twice(quad / 2),
        1 => HalfInt::from_twice((quad + 1) / 2), // value - 1/4 is integer: round up, away
        3 => HalfInt::from_twice((quad - 1).div_euclid(2)), // value + 1/4 is integer: round down, away
        _ => unreachable!(),
    }
}

/// Round a quarter-integer to the half-integer lattice, moving strict
/// quarter-integers *toward* the nearest integer; half-integers are fixed.
pub fn ceil_q(q: QuarterInt) -> HalfInt {
    let quad = q.quadruple;
    match quad.rem_euclid(4) {
        0 | 2 => HalfInt::from_twice(quad / 2),
        1 => HalfInt::from_twice((quad - 1).div_euclid(2)),
        3 => HalfInt::from_twice((quad + 1) / 2),
        _ => unreachable!(),
    }
}

/// A rational extended with +infinity, the value lattice of indicator
/// functions. Infinity is its own variant, never a sentinel number.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedValue {
    Finite(Rational),
    Infinite,
}

impl ExtendedValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }

    fn add(&self, other: &ExtendedValue) -> ExtendedValue {
        match (self, other) {
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => {
                ExtendedValue::Finite(a + b)
            }
            _ => ExtendedValue::Infinite,
        }
    }

    /// `self >= other` in the extended order (infinity dominates).
    fn ge(&self, other: &ExtendedValue) -> bool {
        match (self, other) {
            (ExtendedValue::Infinite, _) => true,
            (ExtendedValue::Finite(_), ExtendedValue::Infinite) => false,
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => a >= b,
        }
    }
}

/// Error for mismatched vector lengths in function evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LconvexError {
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A function on half-integer vectors built from the three shapes the
/// midpoint theory works with.
#[derive(Debug, Clone)]
pub enum FunctionSpec {
    /// `x -> w^T x`.
    Linear { weights: Vec<Rational> },
    /// Indicator of one row `sum c_t x_{v_t} >= bound`: 0 where satisfied,
    /// +infinity where violated.
    Indicator { terms: Vec<(i64, usize)>, bound: i64 },
    /// Pointwise sum (a relaxation objective plus row indicators).
    Sum(Vec<FunctionSpec>),
}

impl FunctionSpec {
    pub fn eval(&self, x: &[HalfInt]) -> ExtendedValue {
        match self {
            FunctionSpec::Linear { weights } => {
                assert_eq!(weights.len(), x.len(), "dimension mismatch");
                let value = weights
                    .iter()
                    .zip(x)
                    .map(|(w, c)| w * c.to_rational())
                    .fold(Rational::from_integer(0.into()), |a, b| a + b);
                ExtendedValue::Finite(value)
            }
            FunctionSpec::Indicator { terms, bound } => {
                // Compare in doubled units to stay in integers.
                let lhs: i128 =
                    terms.iter().map(|&(c, v)| c as i128 * x[v].twice() as i128).sum();
                if lhs >= 2 * *bound as i128 {
                    ExtendedValue::Finite(Rational::from_integer(0.into()))
                } else {
                    ExtendedValue::Infinite
                }
            }
            FunctionSpec::Sum(parts) => parts
                .iter()
                .map(|p| p.eval(x))
                .fold(ExtendedValue::Finite(Rational::from_integer(0.into())), |a, b| {
                    a.add(&b)
                }),
        }
    }
}

/// Test the discrete midpoint inequality for one pair:
/// `g(x) + g(y) >= g(floor_q(mid)) + g(ceil_q(mid))` with the directed
/// rounding applied coordinatewise and infinity-aware arithmetic.
pub fn midpoint_check(g: &FunctionSpec, x: &[HalfInt], y: &[HalfInt]) -> bool {
    assert_eq!(x.len(), y.len(), "dimension mismatch");
    let mids: Vec<QuarterInt> = x.iter().zip(y).map(|(&a, &b)| midpoint(a, b)).collect();
    let lo: Vec<HalfInt> = mids.iter().map(|&m| floor_q(m)).collect();
    let hi: Vec<HalfInt> = mids.iter().map(|&m| ceil_q(m)).collect();
    let lhs = g.eval(x).add(&g.eval(y));
    let rhs = g.eval(&lo).add(&g.eval(&hi));
    lhs.ge(&rhs)
}

/// All integer vectors within 1/2 of `x` in every coordinate, in
/// lexicographic order: one choice per integral coordinate, two per
/// fractional one.
pub fn half_neighborhood(x: &[HalfInt]) -> Vec<Vec<i64>> {
    let mut result = vec![Vec::with_capacity(x.len())];
    for c in x {
        let choices: &[i64] = if c.is_integral() { &[c.floor()] } else { &[c.floor(), c.ceil()] };
        result = result
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&z| {
                    let mut next = prefix.clone();
                    next.push(z);
                    next
                })
            })
            .collect();
    }
    result
}

/// Result of a box sweep for midpoint-inequality violations.
#[derive(Debug, Clone, PartialEq)]
pub struct MidpointSweep {
    pub pairs_checked: u64,
    /// First violating pair in lexicographic order, if any.
    pub violation: Option<(Vec<HalfInt>, Vec<HalfInt>)>,
}

fn half_grid_points(n: usize, lo: i64, hi: i64) -> Vec<Vec<HalfInt>> {
    let mut points = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                (2 * lo..=2 * hi).map(move |t| {
                    let mut next = prefix.clone();
                    next.push(HalfInt::from_twice(t));
                    next
                })
            })
            .collect();
    }
    points
}

/// Exhaustively test the midpoint inequality for all unordered pairs of
/// half-integer points of `[lo, hi]^n`, stopping at the first violation.
/// The inequality is symmetric in the pair, so unordered pairs suffice.
pub fn sweep_midpoint(g: &FunctionSpec, n: usize, lo: i64, hi: i64) -> MidpointSweep {
    let points = half_grid_points(n, lo, hi);
    let mut pairs_checked = 0;
    for (i, x) in points.iter().enumerate() {
        for y in &points[i..] {
            pairs_checked += 1;
            if !midpoint_check(g, x, y) {
                return MidpointSweep {
                    pairs_checked,
                    violation: Some((x.clone(), y.clone())),
                };
            }
        }
    }
    MidpointSweep { pairs_checked, violation: None }
}

/// Persistency under the half-unit neighborhood: for every half-integral
/// relaxation optimum in the box, some integer optimum lies within 1/2 in
/// every coordinate. A strictly stronger requirement than the open unit
/// neighborhood on non-half-integral points; identical on half-integral
/// ones, where both reduce to the floor/ceiling choices.
pub fn check_half_persistency(
    inst: &UtvpiInstance,
    bounds: &[(i64, i64)],
    cap: u128,
) -> Result<PersistencyReport, OracleError> {
    let ext = ExtendedInstance::from(inst);
    Ok(check_persistency_multi(&ext, bounds, cap, &[NeighborhoodKind::ClosedHalf])?
        .pop()
        .expect("one report per kind"))
}
