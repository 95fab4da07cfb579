//! Brute-force ground truth over finite boxes, plus the bundled
//! counterexample fixtures.
//!
//! Everything here is deliberately independent of the solver modules: values
//! come from exhaustive enumeration of integer or fractional grid points
//! inside an explicit box, with exact scaled-integer arithmetic. The solver's
//! answers are tested against these oracles, never the other way around.
//!
//! * [`brute_ilp`] enumerates all integer points in a box (lexicographically
//!   smallest optimum wins ties);
//! * [`brute_lo_halfgrid`] enumerates the half-integer grid, which is exact
//!   for the relaxation of a boxed UTVPI instance because some relaxation
//!   optimum is half-integral; for non-UTVPI rows it scans the finer
//!   quarter-integer grid and is labeled a heuristic reference;
//! * [`check_neighborhood_persistency`] verifies, for every grid optimum
//!   `x*` of the relaxation, that some integer optimum lies within the
//!   chosen neighborhood of `x*` — the property that makes the
//!   fix-and-round pipeline exact on UTVPI systems, and the property the
//!   three-variable and coefficient-2 fixtures break;
//! * [`fixtures`] returns those counterexample systems with their known
//!   values.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::model::{objective_denominator_lcm, Rational, Sign, UtvpiConstraint, UtvpiInstance};
use crate::parser::{ExtendedInstance, ParsedInstance};

/// Default limit on enumerated grid points.
pub const DEFAULT_VOLUME_CAP: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("bounds cover {got} variables, instance has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty box for x{}: [{lo}, {hi}]", var + 1)]
    EmptyBox { var: usize, lo: i64, hi: i64 },
    #[error("enumeration would visit {volume} grid points, cap is {cap}")]
    VolumeExceeded { volume: u128, cap: u128 },
    #[error("scaled objective weights do not fit machine integers")]
    ScaleOverflow,
}

/// The same `[lo, hi]` range for every variable.
pub fn uniform_box(n: usize, lo: i64, hi: i64) -> Vec<(i64, i64)> {
    vec![(lo, hi); n]
}

/// Outcome of a box-restricted brute-force optimization: the best point and
/// its exact value, or `None` when no grid point in the box is feasible.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    pub point: Vec<Rational>,
    pub value: Rational,
}

/// Result of [`brute_lo_halfgrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridLpOutcome {
    pub best: Option<GridOptimum>,
    /// True when the instance has non-UTVPI rows: the quarter-grid scan is
    /// then only a reference value, not a proven relaxation optimum.
    pub heuristic: bool,
}

/// Result of [`brute_ilp`]: box-restricted, so never unbounded.
#[derive(Debug, Clone, PartialEq)]
pub enum BoxIlpResult {
    Optimal { z: Vec<i64>, value: Rational },
    Infeasible,
}

/// Which integer points count as neighbors of a fractional point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborhoodKind {
    /// `|z_j - x_j| < 1` in every coordinate.
    OpenUnit,
    /// `|z_j - x_j| <= 1/2` in every coordinate.
    ClosedHalf,
}

/// One relaxation optimum whose neighborhood contains no integer optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistencyViolation {
    pub x_star: Vec<Rational>,
    /// Best value of a feasible integer point in the neighborhood (within
    /// the box); `None` when the neighborhood holds no feasible point.
    pub best_in_neighborhood: Option<Rational>,
}

/// Outcome of a persistency check over a box.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistencyReport {
    /// Relaxation-grid optimum value; `None` when no grid point is feasible.
    pub lo_value: Option<Rational>,
    /// Integer optimum value in the box; `None` when integer-infeasible, in
    /// which case the property is vacuous and nothing is checked.
    pub ilo_value: Option<Rational>,
    /// Number of relaxation grid optima examined.
    pub optima_checked: u64,
    pub violations: Vec<PersistencyViolation>,
    /// Carried over from the relaxation scan (non-UTVPI rows).
    pub heuristic_lo: bool,
}

impl PersistencyReport {
    /// True when every examined optimum had an integer optimum nearby.
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive scan state over the grid `{ k/step : k integer }^n` inside a
/// box, with exact integer arithmetic: objective weights are pre-scaled by
/// the denominator lcm, so comparisons are i128 comparisons.
struct GridScan<'a> {
    inst: &'a ExtendedInstance,
    step: i64,
    lo: Vec<i64>,
    hi: Vec<i64>,
    weights: Vec<i128>,
    /// `value(point) = (sum weights[j] * k_j) / value_denom`.
    value_denom: BigInt,
    /// Minimum possible objective contribution of coordinates `j..n`.
    min_tail: Vec<i128>,
    /// Rows whose highest-indexed variable is `j`, checkable once
    /// coordinates `0..=j` are chosen.
    rows_closing_at: Vec<Vec<usize>>,
}

impl<'a> GridScan<'a> {
    fn new(
        inst: &'a ExtendedInstance,
        bounds: &[(i64, i64)],
        step: i64,
        cap: u128,
    ) -> Result<Self, OracleError> {
        let n = inst.n;
        if bounds.len() != n {
            return Err(OracleError::DimensionMismatch { expected: n, got: bounds.len() });
        }
        let mut volume: u128 = 1;
        for (var, &(lo, hi)) in bounds.iter().enumerate() {
            if lo > hi {
                return Err(OracleError::EmptyBox { var, lo, hi });
            }
            let points = (hi - lo) as u128 * step as u128 + 1;
            volume = volume.saturating_mul(points);
        }
        if volume > cap {
            return Err(OracleError::VolumeExceeded { volume, cap });
        }
        let scale = objective_denominator_lcm(&inst.objective);
        let mut weights = Vec::with_capacity(n);
        for w in &inst.objective {
            let scaled = w * Rational::from_integer(scale.clone());
            debug_assert!(scaled.is_integer());
            weights.push(scaled.to_integer().to_i128().ok_or(OracleError::ScaleOverflow)?);
        }
        let lo: Vec<i64> = bounds.iter().map(|&(l, _)| l * step).collect();
        let hi: Vec<i64> = bounds.iter().map(|&(_, h)| h * step).collect();
        let mut min_tail = vec![0i128; n + 1];
        for j in (0..n).rev() {
            let w = weights[j];
            min_tail[j] = min_tail[j + 1] + (w * lo[j] as i128).min(w * hi[j] as i128);
        }
        let mut rows_closing_at = vec![Vec::new(); n];
        for (r, row) in inst.rows.iter().enumerate() {
            let last = row.terms.iter().map(|&(_, v)| v).max().expect("rows are nonempty");
            rows_closing_at[last].push(r);
        }
        Ok(GridScan {
            inst,
            step,
            lo,
            hi,
            weights,
            value_denom: scale * BigInt::from(step),
            min_tail,
            rows_closing_at,
        })
    }

    fn row_ok(&self, r: usize, ks: &[i64]) -> bool {
        let row = &self.inst.rows[r];
        let lhs: i128 = row.terms.iter().map(|&(c, v)| c as i128 * ks[v] as i128).sum();
        lhs >= row.bound as i128 * self.step as i128
    }

    fn value_of(&self, scaled: i128) -> Rational {
        Rational::new(BigInt::from(scaled), self.value_denom.clone())
    }

    fn point_of(&self, ks: &[i64]) -> Vec<Rational> {
        ks.iter().map(|&k| Rational::new(BigInt::from(k), BigInt::from(self.step))).collect()
    }

    /// Lexicographically first minimum-value feasible point, as scaled
    /// coordinates and scaled value.
    fn find_min(&self) -> Option<(Vec<i64>, i128)> {
        let mut best: Option<(Vec<i64>, i128)> = None;
        let mut ks = vec![0i64; self.inst.n];
        self.descend_min(0, 0, &mut ks, &mut best);
        best
    }

    fn descend_min(
        &self,
        j: usize,
        partial: i128,
        ks: &mut Vec<i64>,
        best: &mut Option<(Vec<i64>, i128)>,
    ) {
        if let Some((_, b)) = best {
            // A later find at equal value is lexicographically larger, so
            // ties prune too.
            if partial + self.min_tail[j] >= *b {
                return;
            }
        }
        if j == self.inst.n {
            *best = Some((ks.clone(), partial));
            return;
        }
        for k in self.lo[j]..=self.hi[j] {
            ks[j] = k;
            if self.rows_closing_at[j].iter().all(|&r| self.row_ok(r, ks)) {
                self.descend_min(j + 1, partial + self.weights[j] * k as i128, ks, best);
            }
        }
    }

    /// Visit every feasible point of scaled value exactly `target`.
    fn for_each_at(&self, target: i128, f: &mut impl FnMut(&[i64])) {
        let mut ks = vec![0i64; self.inst.n];
        self.descend_at(0, 0, target, &mut ks, f);
    }

    fn descend_at(
        &self,
        j: usize,
        partial: i128,
        target: i128,
        ks: &mut Vec<i64>,
        f: &mut impl FnMut(&[i64]),
    ) {
        if partial + self.min_tail[j] > target {
            return;
        }
        if j == self.inst.n {
            if partial == target {
                f(ks);
            }
            return;
        }
        for k in self.lo[j]..=self.hi[j] {
            ks[j] = k;
            if self.rows_closing_at[j].iter().all(|&r| self.row_ok(r, ks)) {
                self.descend_at(j + 1, partial + self.weights[j] * k as i128, target, ks, f);
            }
        }
    }
}

/// Exhaustively minimize over all integer points of the box; ties go to the
/// lexicographically smallest point.
pub fn brute_ilp(
    inst: &ExtendedInstance,
    bounds: &[(i64, i64)],
    cap: u128,
) -> Result<BoxIlpResult, OracleError> {
    let scan = GridScan::new(inst, bounds, 1, cap)?;
    Ok(match scan.find_min() {
        Some((ks, scaled)) => {
            BoxIlpResult::Optimal { z: ks, value: scan.value_of(scaled) }
        }
        None => BoxIlpResult::Infeasible,
    })
}

/// All optimal integer points of the box, in lexicographic order.
pub fn brute_ilp_optima(
    inst: &ExtendedInstance,
    bounds: &[(i64, i64)],
    cap: u128,
) -> Result<Option<(Rational, Vec<Vec<i64>>)>, OracleError> {
    let scan = GridScan::new(inst, bounds, 1, cap)?;
    Ok(scan.find_min().map(|(_, scaled)| {
        let mut optima = Vec::new();
        scan.for_each_at(scaled, &mut |ks| optima.push(ks.to_vec()));
        (scan.value_of(scaled), optima)
    }))
}

/// Minimize over the half-integer grid of the box — exact for the relaxation
/// of a boxed UTVPI instance. Non-UTVPI instances are scanned on the
/// quarter-integer grid instead and flagged heuristic.
pub fn brute_lo_halfgrid(
    inst: &ExtendedInstance,
    bounds: &[(i64, i64)],
    cap: u128,
) -> Result<GridLpOutcome, OracleError> {
    let heuristic = !inst.is_utvpi();
    let step = if heuristic { 4 } else { 2 };
    let scan = GridScan::new(inst, bounds, step, cap)?;
    Ok(GridLpOutcome {
        best: scan.find_min().map(|(ks, scaled)| GridOptimum {
            point: scan.point_of(&ks),
            value: scan.value_of(scaled),
        }),
        heuristic,
    })
}

/// Integer candidates for coordinate `k/step` under a neighborhood kind:
/// the integers `z` with `|z - k/step| < 1` (open) or `<= 1/2` (half).
fn neighbor_range(k: i64, step: i64, kind: NeighborhoodKind) -> std::ops::RangeInclusive<i64> {
    let fl = k.div_euclid(step);
    match kind {
        // Strict unit ball: floor and ceiling, one value on the grid itself.
        NeighborhoodKind::OpenUnit => {
            if k.rem_euclid(step) == 0 {
                fl..=fl
            } else {
                fl..=fl + 1
            }
        }
        // Closed half ball: |z*step - k| <= step/2.
        NeighborhoodKind::ClosedHalf => {
            let lo = (2 * k - step).div_euclid(2 * step) + i64::from((2 * k - step).rem_euclid(2 * step) != 0);
            let hi = (2 * k + step).div_euclid(2 * step);
            lo..=hi
        }
    }
}

/// Check persistency over a box for several neighborhood kinds in one pass:
/// compute the integer-box optimum, then stream every relaxation-grid
/// optimum `x*` and verify some integer optimum lies in each requested
/// neighborhood of `x*` (and inside the box). Violations carry the best
/// neighboring value as a witness.
pub fn check_persistency_multi(
    inst: &ExtendedInstance,
    bounds: &[(i64, i64)],
    cap: u128,
    kinds: &[NeighborhoodKind],
) -> Result<Vec<PersistencyReport>, OracleError> {
    let heuristic = !inst.is_utvpi();
    let step = if heuristic { 4 } else { 2 };
    let lo_scan = GridScan::new(inst, bounds, step, cap)?;
    let int_scan = GridScan::new(inst, bounds, 1, cap)?;

    let int_best = int_scan.find_min();
    let ilo_value = int_best.as_ref().map(|(_, s)| int_scan.value_of(*s));
    let ilo_scaled = int_best.map(|(_, s)| s);

    let lo_best = lo_scan.find_min();
    let lo_value = lo_best.as_ref().map(|(_, s)| lo_scan.value_of(*s));

    let mut reports: Vec<PersistencyReport> = kinds
        .iter()
        .map(|_| PersistencyReport {
            lo_value: lo_value.clone(),
            ilo_value: ilo_value.clone(),
            optima_checked: 0,
            violations: Vec::new(),
            heuristic_lo: heuristic,
        })
        .collect();

    let (Some((_, lo_scaled)), Some(ilo_scaled)) = (lo_best, ilo_scaled) else {
        // Integer-infeasible boxes make the property vacuous; a relaxation-
        // infeasible box has no optima to check.
        return Ok(reports);
    };

    // The integer objective scale of the relaxation grid differs from the
    // integer grid's by the step factor only, so a neighborhood candidate z
    // attains the integer optimum iff its lo_scan-scaled value equals
    // ilo_scaled * step.
    let ilo_target = ilo_scaled * step as i128;

    lo_scan.for_each_at(lo_scaled, &mut |ks| {
        for (kind, report) in kinds.iter().zip(&mut reports) {
            report.optima_checked += 1;
            let mut best: Option<i128> = None;
            let mut hit = false;
            // Depth-first product of per-coordinate candidate ranges,
            // clamped to the box; stop as soon as an integer optimum shows.
            let mut z = vec![0i64; inst.n];
            fn walk(
                inst: &ExtendedInstance,
                scan: &GridScan,
                ks: &[i64],
                kind: NeighborhoodKind,
                bounds_lo: &[i64],
                bounds_hi: &[i64],
                j: usize,
                acc: i128,
                z: &mut Vec<i64>,
                best: &mut Option<i128>,
                hit: &mut bool,
                target: i128,
            ) {
                if *hit {
                    return;
                }
                if j == inst.n {
                    *best = Some(match best {
                        Some(b) => acc.min(*b),
                        None => acc,
                    });
                    if acc == target {
                        *hit = true;
                    }
                    return;
                }
                for cand in neighbor_range(ks[j], scan.step, kind) {
                    let scaled = cand * scan.step;
                    if scaled < bounds_lo[j] || scaled > bounds_hi[j] {
                        continue;
                    }
                    z[j] = scaled;
                    if scan.rows_closing_at[j].iter().all(|&r| scan.row_ok(r, z)) {
                        walk(
                            inst,
                            scan,
                            ks,
                            kind,
                            bounds_lo,
                            bounds_hi,
                            j + 1,
                            acc + scan.weights[j] * scaled as i128,
                            z,
                            best,
                            hit,
                            target,
                        );
                    }
                }
            }
            walk(
                inst, &lo_scan, ks, *kind, &lo_scan.lo, &lo_scan.hi, 0, 0, &mut z, &mut best,
                &mut hit, ilo_target,
            );
            if !hit {
                report.violations.push(PersistencyViolation {
                    x_star: lo_scan.point_of(ks),
                    best_in_neighborhood: best.map(|b| lo_scan.value_of(b)),
                });
            }
        }
    });

    Ok(reports)
}

/// Persistency under the open unit neighborhood: for every relaxation grid
/// optimum, some integer optimum differs by strictly less than one in every
/// coordinate. Holds for UTVPI instances; fails for the bundled fixtures.
pub fn check_neighborhood_persistency(
    inst: &ExtendedInstance,
    bounds: &[(i64, i64)],
    cap: u128,
) -> Result<PersistencyReport, OracleError> {
    Ok(check_persistency_multi(inst, bounds, cap, &[NeighborhoodKind::OpenUnit])?
        .pop()
        .expect("one report per kind"))
}

/// Everything known about one bundled fixture system.
#[derive(Debug, Clone)]
pub struct Fixture {
    /// File name the CLI writes, e.g. `example1.ext`.
    pub filename: &'static str,
    /// One-line description of what the system demonstrates.
    pub summary: &'static str,
    pub instance: ParsedInstance,
    /// Enumeration box the expected values refer to.
    pub bounds: Vec<(i64, i64)>,
    /// Integer optimum value in the box; `None` = integer-infeasible.
    pub ilo_value: Option<Rational>,
    /// Lexicographically smallest integer optimum, when feasible.
    pub ilo_point: Option<Vec<i64>>,
    /// Relaxation-grid optimum value in the box.
    pub lo_value: Option<Rational>,
    /// The fractional optimum witnessing a persistency violation, if the
    /// fixture has one.
    pub violation_at: Option<Vec<Rational>>,
}

fn rational_point(halves: &[(i64, i64)]) -> Vec<Rational> {
    halves.iter().map(|&(p, q)| Rational::new(p.into(), q.into())).collect()
}

/// The bundled systems: two that break persistency the moment UTVPI shape is
/// relaxed (a three-variable row; a coefficient-2 row), their variants with
/// the integral coordinate pinned, and the UTVPI system whose only
/// fractional point is (1/2, 1/2) — feasible in reals, infeasible in
/// integers.
pub fn fixtures() -> Vec<Fixture> {
    let rat = |v: i64| Rational::from_integer(v.into());

    // minimize 3 x1 + x2  subject to  x1 + x2 + x3 >= 2,  x1 - x3 >= 0,
    // -x2 >= -1: the three-variable row admits the fractional optimum
    // (1/2, 1, 1/2) of value 5/2, while the best integer point costs 3.
    let mut example1 = ExtendedInstance::new(3, vec![rat(3), rat(1), rat(0)]).unwrap();
    example1.add_row(vec![(1, 0), (1, 1), (1, 2)], 2).unwrap();
    example1.add_row(vec![(1, 0), (-1, 2)], 0).unwrap();
    example1.add_row(vec![(-1, 1)], -1).unwrap();
    example1.boxes = vec![Some((0, 2)); 3];

    // The same system with x2 pinned to its fractional-optimal value 1: the
    // integer optimum rises from 3 to 4, so no integer optimum of the
    // original problem kept x2 = 1.
    let mut example1_fixed = example1.clone();
    example1_fixed.add_row(vec![(1, 1)], 1).unwrap();

    // minimize 3 x1 + x2  subject to  2 x1 + x2 >= 2,  -x2 >= -1: the
    // coefficient-2 row does the same with two variables.
    let mut example2 = ExtendedInstance::new(2, vec![rat(3), rat(1)]).unwrap();
    example2.add_row(vec![(2, 0), (1, 1)], 2).unwrap();
    example2.add_row(vec![(-1, 1)], -1).unwrap();
    example2.boxes = vec![Some((0, 2)); 2];

    let mut example2_fixed = example2.clone();
    example2_fixed.add_row(vec![(1, 1)], 1).unwrap();

    // The UTVPI system x1 + x2 = 1, x1 = x2: its unique real solution is
    // (1/2, 1/2), so it is feasible in the relaxation and integer-infeasible.
    let mut forced = UtvpiInstance::with_int_objective(2, &[1, 1]).unwrap();
    forced.add_constraint(UtvpiConstraint::binary(Sign::Plus, 0, Sign::Plus, 1, 1).unwrap()).unwrap();
    forced
        .add_constraint(UtvpiConstraint::binary(Sign::Minus, 0, Sign::Minus, 1, -1).unwrap())
        .unwrap();
    forced.add_constraint(UtvpiConstraint::binary(Sign::Plus, 0, Sign::Minus, 1, 0).unwrap()).unwrap();
    forced.add_constraint(UtvpiConstraint::binary(Sign::Plus, 1, Sign::Minus, 0, 0).unwrap()).unwrap();

    vec![
        Fixture {
            filename: "example1.ext",
            summary: "three-variable row; fractional optimum (1/2, 1, 1/2) breaks persistency",
            instance: ParsedInstance::Extended(example1),
            bounds: uniform_box(3, 0, 2),
            ilo_value: Some(rat(3)),
            ilo_point: Some(vec![1, 0, 1]),
            lo_value: Some(Rational::new(5.into(), 2.into())),
            violation_at: Some(rational_point(&[(1, 2), (1, 1), (1, 2)])),
        },
        Fixture {
            filename: "example1_fixed.ext",
            summary: "same system with x2 pinned to 1; integer optimum rises to 4",
            instance: ParsedInstance::Extended(example1_fixed),
            bounds: uniform_box(3, 0, 2),
            ilo_value: Some(rat(4)),
            ilo_point: Some(vec![1, 1, 0]),
            lo_value: Some(Rational::new(5.into(), 2.into())),
            violation_at: None,
        },
        Fixture {
            filename: "example2.ext",
            summary: "coefficient-2 row; fractional optimum (1/2, 1) breaks persistency",
            instance: ParsedInstance::Extended(example2),
            bounds: uniform_box(2, 0, 2),
            ilo_value: Some(rat(3)),
            ilo_point: Some(vec![1, 0]),
            lo_value: Some(Rational::new(5.into(), 2.into())),
            violation_at: Some(rational_point(&[(1, 2), (1, 1)])),
        },
        Fixture {
            filename: "example2_fixed.ext",
            summary: "same system with x2 pinned to 1; unique integer optimum has z1 = 1",
            instance: ParsedInstance::Extended(example2_fixed),
            bounds: uniform_box(2, 0, 2),
            ilo_value: Some(rat(4)),
            ilo_point: Some(vec![1, 1]),
            lo_value: Some(Rational::new(5.into(), 2.into())),
            violation_at: None,
        },
        Fixture {
            filename: "forced_half.utvpi",
            summary: "x1 + x2 = 1 with x1 = x2: relaxation-feasible, integer-infeasible",
            instance: ParsedInstance::Utvpi(forced),
            bounds: uniform_box(2, -3, 3),
            ilo_value: None,
            ilo_point: None,
            lo_value: Some(rat(1)),
            violation_at: None,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rat, ratio};

    fn ext(n: usize, w: Vec<i64>, rows: Vec<(Vec<(i64, usize)>, i64)>) -> ExtendedInstance {
        let mut inst =
            ExtendedInstance::new(n, w.into_iter().map(rat).collect()).unwrap();
        for (terms, b) in rows {
            inst.add_row(terms, b).unwrap();
        }
        inst
    }

    #[test]
    fn unconstrained_zero_objective_minimizes_to_zero() {
        let inst = ext(2, vec![0, 0], vec![]);
        match brute_ilp(&inst, &uniform_box(2, -2, 2), DEFAULT_VOLUME_CAP).unwrap() {
            BoxIlpResult::Optimal { z, value } => {
                assert_eq!(value, rat(0));
                // Lexicographically smallest point of the box.
                assert_eq!(z, vec![-2, -2]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn lex_smallest_tie_break() {
        // x1 + x2 >= 1 with unit weights over [0,1]^2: optima (0,1) and
        // (1,0); the lexicographically smaller is (0,1).
        let inst = ext(2, vec![1, 1], vec![(vec![(1, 0), (1, 1)], 1)]);
        match brute_ilp(&inst, &uniform_box(2, 0, 1), DEFAULT_VOLUME_CAP).unwrap() {
            BoxIlpResult::Optimal { z, value } => {
                assert_eq!(value, rat(1));
                assert_eq!(z, vec![0, 1]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
        let all = brute_ilp_optima(&inst, &uniform_box(2, 0, 1), DEFAULT_VOLUME_CAP)
            .unwrap()
            .unwrap();
        assert_eq!(all.0, rat(1));
        assert_eq!(all.1, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn halfgrid_beats_integers_when_halves_are_optimal() {
        // x1 >= 3 over box [0,5]: value 3 on both grids; and the forced
        // system: half grid finds value 1 at (1/2, 1/2), integers nothing.
        let simple = ext(1, vec![1], vec![(vec![(1, 0)], 3)]);
        let out = brute_lo_halfgrid(&simple, &uniform_box(1, 0, 5), DEFAULT_VOLUME_CAP).unwrap();
        assert!(!out.heuristic);
        assert_eq!(out.best.unwrap().value, rat(3));

        let forced = ext(
            2,
            vec![1, 1],
            vec![
                (vec![(1, 0), (1, 1)], 1),
                (vec![(-1, 0), (-1, 1)], -1),
                (vec![(1, 0), (-1, 1)], 0),
                (vec![(-1, 0), (1, 1)], 0),
            ],
        );
        let out = brute_lo_halfgrid(&forced, &uniform_box(2, -3, 3), DEFAULT_VOLUME_CAP).unwrap();
        let best = out.best.unwrap();
        assert_eq!(best.value, rat(1));
        assert_eq!(best.point, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(
            brute_ilp(&forced, &uniform_box(2, -3, 3), DEFAULT_VOLUME_CAP).unwrap(),
            BoxIlpResult::Infeasible
        );
    }

    #[test]
    fn volume_cap_is_enforced() {
        let inst = ext(3, vec![1, 1, 1], vec![]);
        let err = brute_ilp(&inst, &uniform_box(3, 0, 100), 1000).unwrap_err();
        assert!(matches!(err, OracleError::VolumeExceeded { volume: 1030301, cap: 1000 }));
    }

    #[test]
    fn empty_and_mismatched_boxes_are_rejected() {
        let inst = ext(2, vec![1, 1], vec![]);
        assert_eq!(
            brute_ilp(&inst, &[(0, 1)], DEFAULT_VOLUME_CAP).unwrap_err(),
            OracleError::DimensionMismatch { expected: 2, got: 1 }
        );
        assert_eq!(
            brute_ilp(&inst, &[(0, 1), (3, 2)], DEFAULT_VOLUME_CAP).unwrap_err(),
            OracleError::EmptyBox { var: 1, lo: 3, hi: 2 }
        );
    }

    #[test]
    fn neighborhood_ranges() {
        // Half grid (step 2): fractional coordinate 1/2.
        assert_eq!(neighbor_range(1, 2, NeighborhoodKind::OpenUnit), 0..=1);
        assert_eq!(neighbor_range(1, 2, NeighborhoodKind::ClosedHalf), 0..=1);
        // Integral coordinate 1.
        assert_eq!(neighbor_range(2, 2, NeighborhoodKind::OpenUnit), 1..=1);
        assert_eq!(neighbor_range(2, 2, NeighborhoodKind::ClosedHalf), 1..=1);
        // Quarter grid (step 4): coordinate 1/4 has open neighbors {0, 1}
        // but only 0 within half a unit; -1/4 mirrors.
        assert_eq!(neighbor_range(1, 4, NeighborhoodKind::OpenUnit), 0..=1);
        assert_eq!(neighbor_range(1, 4, NeighborhoodKind::ClosedHalf), 0..=0);
        assert_eq!(neighbor_range(-1, 4, NeighborhoodKind::OpenUnit), -1..=0);
        assert_eq!(neighbor_range(-1, 4, NeighborhoodKind::ClosedHalf), 0..=0);
        // Quarter grid midpoint 1/2 keeps both under the closed-half kind.
        assert_eq!(neighbor_range(2, 4, NeighborhoodKind::ClosedHalf), 0..=1);
    }

    #[test]
    fn persistency_holds_on_a_simple_utvpi_system() {
        let inst = ext(2, vec![1, 1], vec![(vec![(1, 0), (1, 1)], 1)]);
        let report =
            check_neighborhood_persistency(&inst, &uniform_box(2, -2, 2), DEFAULT_VOLUME_CAP)
                .unwrap();
        assert!(report.holds());
        assert!(!report.heuristic_lo);
        assert_eq!(report.lo_value, Some(rat(1)));
        assert_eq!(report.ilo_value, Some(rat(1)));
        assert!(report.optima_checked >= 1);
    }

    #[test]
    fn fixture_systems_reproduce_expected_values() {
        for fixture in fixtures() {
            let inst = fixture.instance.to_extended();
            match brute_ilp(&inst, &fixture.bounds, DEFAULT_VOLUME_CAP).unwrap() {
                BoxIlpResult::Optimal { z, value } => {
                    assert_eq!(Some(value), fixture.ilo_value, "{}", fixture.filename);
                    assert_eq!(Some(z), fixture.ilo_point, "{}", fixture.filename);
                }
                BoxIlpResult::Infeasible => {
                    assert_eq!(fixture.ilo_value, None, "{}", fixture.filename);
                }
            }
            let lo = brute_lo_halfgrid(&inst, &fixture.bounds, DEFAULT_VOLUME_CAP).unwrap();
            assert_eq!(
                lo.best.map(|b| b.value),
                fixture.lo_value,
                "{}",
                fixture.filename
            );
            let report =
                check_neighborhood_persistency(&inst, &fixture.bounds, DEFAULT_VOLUME_CAP)
                    .unwrap();
            match &fixture.violation_at {
                Some(x_star) => {
                    assert!(
                        report.violations.iter().any(|v| &v.x_star == x_star),
                        "{}: expected a violation at {:?}, got {:?}",
                        fixture.filename,
                        x_star,
                        report.violations
                    );
                }
                None => assert!(report.holds(), "{}: unexpected violations", fixture.filename),
            }
        }
    }

    #[test]
    fn fixed_fixtures_pin_the_second_coordinate() {
        // The pinned variants really force x2 = 1 in every optimal point.
        let fixtures = fixtures();
        for name in ["example1_fixed.ext", "example2_fixed.ext"] {
            let fixture = fixtures.iter().find(|f| f.filename == name).unwrap();
            let inst = fixture.instance.to_extended();
            let (value, optima) =
                brute_ilp_optima(&inst, &fixture.bounds, DEFAULT_VOLUME_CAP).unwrap().unwrap();
            assert_eq!(Some(value), fixture.ilo_value);
            assert!(optima.iter().all(|z| z[1] == 1), "{name}: x2 pinned");
            if name == "example2_fixed.ext" {
                assert_eq!(optima, vec![vec![1, 1]], "unique optimum");
            }
        }
    }
}
