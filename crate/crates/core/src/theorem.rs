//! The perturbation checkers: bilinear generator gap, the minimal gap
//! constant, entrywise checkers for the three equivalent one-sided
//! conditions, constant propagation between them, the resolvent-power
//! induction bound, and the kernel comparison estimate.
//!
//! All three conditions quantify over nonnegative functions; in finite
//! dimension each is equivalent to its basis-vector instance, so every
//! checker reduces to an entrywise matrix inequality and stays grid-free
//! in the function argument. Grids remain only in `t` and `lambda`.
//!
//! Worst slacks are signed (`lhs - rhs`, most positive is worst) and the
//! reported witness is the first maximizer in column-major order;
//! witness indices are 1-based.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::Matrix;
use crate::measure::{Func, MeasureSpace};
use crate::semigroup::{validate_bound, Generator, SemigroupBound};

/// Which estimate a report refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Condition {
    /// Semigroup comparison `exp(tA) <= exp(tA0) + C1 t e^{omega t} |u|_1 1`.
    A,
    /// Generator-gap bound `<Au, v> <= <u, A0* v> + C2 |u|_1 |v|_1`.
    B,
    /// Resolvent comparison with constant `C3 / (lambda - omega)^2`.
    C,
    /// Kernel comparison `k_t <= k0_t + C M^4 e^{omega t} t`.
    Kernel,
    /// Resolvent-power induction bound with constant `n C3 M^2 / (lambda - omega)^{n+1}`.
    Induction,
}

impl core::fmt::Display for Condition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            Condition::A => "a",
            Condition::B => "b",
            Condition::C => "c",
            Condition::Kernel => "kernel",
            Condition::Induction => "induction",
        };
        f.write_str(s)
    }
}

/// Location of the worst slack: grid value (absent for the gap condition,
/// the power index for the induction bound) and 1-based entry indices.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub grid_value: Option<f64>,
    pub row: usize,
    pub col: usize,
}

/// Verdict for one condition check.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionReport {
    pub condition: Condition,
    pub constant_used: f64,
    pub grid: Vec<f64>,
    /// Most positive signed violation of the entrywise inequality.
    pub worst_slack: f64,
    pub witness: Witness,
    pub pass: bool,
    pub tolerance: f64,
}

/// Constants for the three conditions, linked by one propagation loop.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Constants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Fills all three constants from one of them by a full trip around the
/// loop a -> b -> c -> a, with factors `1`, `M^2`, `M^2` on the three
/// legs (so the starting condition's own slot picks up `M^4`).
pub fn propagate_constants(c: f64, from: Condition, m: f64) -> Result<Constants> {
    if !(m >= 1.0 && m.is_finite()) {
        return Err(Error::InvalidArgument(format!("M must be at least 1, got {m}")));
    }
    let m2 = m * m;
    let m4 = m2 * m2;
    match from {
        Condition::A | Condition::B => Ok(Constants { c1: c * m4, c2: c, c3: c * m2 }),
        Condition::C => Ok(Constants { c1: c * m2, c2: c * m2, c3: c * m4 }),
        Condition::Kernel | Condition::Induction => Err(Error::InvalidArgument(format!(
            "constants propagate between conditions a, b and c only"
        ))),
    }
}

/// Tracks the most positive slack; first maximizer wins (column-major
/// entry order within a grid point, grid points in order).
struct WorstSlack {
    slack: f64,
    grid_value: Option<f64>,
    row: usize,
    col: usize,
}

impl WorstSlack {
    fn new() -> Self {
        WorstSlack { slack: f64::NEG_INFINITY, grid_value: None, row: 1, col: 1 }
    }

    #[inline]
    fn update(&mut self, slack: f64, grid_value: Option<f64>, i: usize, j: usize) {
        if slack > self.slack {
            self.slack = slack;
            self.grid_value = grid_value;
            self.row = i + 1;
            self.col = j + 1;
        }
    }

    fn into_report(
        self,
        condition: Condition,
        constant_used: f64,
        grid: Vec<f64>,
        tolerance: f64,
    ) -> ConditionReport {
        ConditionReport {
            condition,
            constant_used,
            grid,
            worst_slack: self.slack,
            witness: Witness { grid_value: self.grid_value, row: self.row, col: self.col },
            pass: self.slack <= tolerance,
            tolerance,
        }
    }
}

/// Ordered pair of generators on one space together with a growth bound
/// valid simultaneously for `exp(tA)` and for the adjoint semigroup
/// `exp(tA0*)` in the weighted L1 norm.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationPair {
    a0: Generator,
    a: Generator,
    bound: SemigroupBound,
}

impl PerturbationPair {
    /// Builds a pair with the default bound `(1, omega)`, where `omega`
    /// is the larger of the two weighted-L1 logarithmic norms (of `A` and
    /// of `A0*`), or with a validated override.
    pub fn new(
        a0: Generator,
        a: Generator,
        override_bound: Option<SemigroupBound>,
    ) -> Result<Self> {
        if a0.dim() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a0.dim(), found: a.dim() });
        }
        if a0.space() != a.space() {
            return Err(Error::InvalidArgument(format!(
                "generators live on different measure spaces"
            )));
        }
        let a0_adjoint = a0.adjoint();
        let bound = match override_bound {
            None => {
                let omega = a.l1_log_norm().max(a0_adjoint.l1_log_norm());
                SemigroupBound::new(1.0, omega)?
            }
            Some(b) => {
                validate_bound(&[&a, &a0_adjoint], b, &crate::grid::default_t_grid())?;
                b
            }
        };
        Ok(PerturbationPair { a0, a, bound })
    }

    pub fn unperturbed(&self) -> &Generator {
        &self.a0
    }

    pub fn perturbed(&self) -> &Generator {
        &self.a
    }

    pub fn bound(&self) -> SemigroupBound {
        self.bound
    }

    pub fn space(&self) -> &MeasureSpace {
        self.a0.space()
    }

    pub fn dim(&self) -> usize {
        self.a0.dim()
    }

    /// `<Au, v> - <u, A0* v> = <(A - A0) u, v>` for nonnegative `u`, `v`.
    pub fn gap(&self, u: &Func, v: &Func) -> Result<f64> {
        if !u.is_nonnegative() || !v.is_nonnegative() {
            return Err(Error::InvalidArgument(format!(
                "gap is defined for entrywise nonnegative functions"
            )));
        }
        let space = self.space();
        let diff = self.a.matrix_sub(&self.a0);
        let du = Func::new(space, diff.matvec(u.values()))?;
        space.inner(&du, v)
    }

    /// Largest entry of `(A - A0)_{ij} / m_j` with its 1-based position.
    fn max_gap_entry(&self) -> (f64, usize, usize) {
        let diff = self.a.matrix_sub(&self.a0);
        let w = self.space().weights();
        let n = self.dim();
        let mut tracker = WorstSlack::new();
        for j in 0..n {
            for i in 0..n {
                tracker.update(diff[(i, j)] / w[j], None, i, j);
            }
        }
        (tracker.slack, tracker.row, tracker.col)
    }

    /// Smallest constant closing the gap bound over all normalized
    /// nonnegative pairs: `max_{i,j} (A - A0)_{ij} / m_j`.
    ///
    /// The gap is bilinear and the normalization set is a product of
    /// weighted simplices, so the supremum is attained at a vertex pair
    /// `u = e_j / m_j`, `v = e_i / m_i`, which evaluates to exactly this
    /// entry ratio. May be negative; no clamping is applied.
    pub fn minimal_c2(&self) -> f64 {
        self.max_gap_entry().0
    }

    /// Gap condition: passes iff `minimal_c2 <= c2 + tol`.
    pub fn check_condition_b(&self, c2: f64, tol: f64) -> ConditionReport {
        let (max_gap, row, col) = self.max_gap_entry();
        let worst = max_gap - c2;
        ConditionReport {
            condition: Condition::B,
            constant_used: c2,
            grid: vec![],
            worst_slack: worst,
            witness: Witness { grid_value: None, row, col },
            pass: worst <= tol,
            tolerance: tol,
        }
    }

    /// Semigroup comparison on a time grid: checks
    /// `exp(tA)_{ij} <= exp(tA0)_{ij} + c1 t e^{omega t} m_j + tol`
    /// entrywise for every grid time.
    pub fn check_condition_a(&self, c1: f64, t_grid: &[f64], tol: f64) -> Result<ConditionReport> {
        if t_grid.is_empty() {
            return Err(Error::InvalidArgument(format!("time grid must not be empty")));
        }
        if let Some(&bad) = t_grid.iter().find(|&&t| !(t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "time grid must be nonnegative, got {bad}"
            )));
        }
        let omega = self.bound.omega();
        let w = self.space().weights();
        let n = self.dim();
        let mut tracker = WorstSlack::new();
        for &t in t_grid {
            let ea = self.a.expm(t)?;
            let ea0 = self.a0.expm(t)?;
            let coef = c1 * t * math::exp(omega * t);
            for j in 0..n {
                let bound_j = coef * w[j];
                for i in 0..n {
                    let slack = ea.matrix()[(i, j)] - ea0.matrix()[(i, j)] - bound_j;
                    tracker.update(slack, Some(t), i, j);
                }
            }
        }
        Ok(tracker.into_report(Condition::A, c1, t_grid.to_vec(), tol))
    }

    /// Resolvent comparison on a grid of `lambda > omega`: checks
    /// `(lambda - A)^{-1}_{ij} <= (lambda - A0)^{-1}_{ij}
    ///  + c3 / (lambda - omega)^2 m_j + tol` entrywise.
    pub fn check_condition_c(
        &self,
        c3: f64,
        lambda_grid: &[f64],
        tol: f64,
    ) -> Result<ConditionReport> {
        if lambda_grid.is_empty() {
            return Err(Error::InvalidArgument(format!("lambda grid must not be empty")));
        }
        let omega = self.bound.omega();
        if let Some(&bad) = lambda_grid.iter().find(|&&l| !(l > omega && l.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "lambda grid must lie strictly above omega = {omega}, got {bad}"
            )));
        }
        let w = self.space().weights();
        let n = self.dim();
        let mut tracker = WorstSlack::new();
        for &lambda in lambda_grid {
            let ra = self.a.resolvent(lambda)?;
            let ra0 = self.a0.resolvent(lambda)?;
            let gap = lambda - omega;
            let coef = c3 / (gap * gap);
            for j in 0..n {
                let bound_j = coef * w[j];
                for i in 0..n {
                    let slack = ra.matrix()[(i, j)] - ra0.matrix()[(i, j)] - bound_j;
                    tracker.update(slack, Some(lambda), i, j);
                }
            }
        }
        Ok(tracker.into_report(Condition::C, c3, lambda_grid.to_vec(), tol))
    }

    /// Resolvent-power bound behind the c -> a direction: for every
    /// `p = 1..=n_max` checks entrywise
    /// `(lambda - A)^{-p}_{ij} <= (lambda - A0)^{-p}_{ij}
    ///  + p c3 M^2 / (lambda - omega)^{p+1} m_j + tol`.
    /// The report's grid carries the power index as a real number.
    pub fn induction_bound_check(
        &self,
        c3: f64,
        lambda: f64,
        n_max: usize,
        tol: f64,
    ) -> Result<ConditionReport> {
        let omega = self.bound.omega();
        if !(lambda > omega && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "lambda must lie strictly above omega = {omega}, got {lambda}"
            )));
        }
        if n_max == 0 {
            return Err(Error::InvalidArgument(format!("power count must be positive")));
        }
        let ra = self.a.resolvent(lambda)?;
        let ra0 = self.a0.resolvent(lambda)?;
        let m2 = self.bound.m() * self.bound.m();
        let gap = lambda - omega;
        let w = self.space().weights();
        let n = self.dim();
        let mut power_a = Matrix::identity(n);
        let mut power_a0 = Matrix::identity(n);
        let mut tracker = WorstSlack::new();
        for p in 1..=n_max {
            power_a = power_a.matmul(ra.matrix());
            power_a0 = power_a0.matmul(ra0.matrix());
            let coef = p as f64 * c3 * m2 / math::powi(gap, p as u32 + 1);
            for j in 0..n {
                let bound_j = coef * w[j];
                for i in 0..n {
                    let slack = power_a[(i, j)] - power_a0[(i, j)] - bound_j;
                    tracker.update(slack, Some(p as f64), i, j);
                }
            }
        }
        let grid = (1..=n_max).map(|p| p as f64).collect();
        Ok(tracker.into_report(Condition::Induction, c3, grid, tol))
    }

    /// Kernel comparison: requires `c` to satisfy the gap condition
    /// (`minimal_c2 <= c + tol`), then checks for every grid time
    /// `exp(tA)_{ij}/m_j <= exp(tA0)_{ij}/m_j + c M^4 e^{omega t} t + tol`.
    pub fn kernel_bound_check(&self, c: f64, t_grid: &[f64], tol: f64) -> Result<ConditionReport> {
        let minimal = self.minimal_c2();
        if minimal > c + tol {
            return Err(Error::HypothesisNotSatisfied { minimal_c2: minimal, constant: c });
        }
        if t_grid.is_empty() {
            return Err(Error::InvalidArgument(format!("time grid must not be empty")));
        }
        if let Some(&bad) = t_grid.iter().find(|&&t| !(t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "time grid must be nonnegative, got {bad}"
            )));
        }
        let omega = self.bound.omega();
        let m = self.bound.m();
        let m4 = m * m * m * m;
        let w = self.space().weights();
        let n = self.dim();
        let mut tracker = WorstSlack::new();
        for &t in t_grid {
            let ea = self.a.expm(t)?;
            let ea0 = self.a0.expm(t)?;
            let bound = c * m4 * math::exp(omega * t) * t;
            for j in 0..n {
                for i in 0..n {
                    let slack = (ea.matrix()[(i, j)] - ea0.matrix()[(i, j)]) / w[j] - bound;
                    tracker.update(slack, Some(t), i, j);
                }
            }
        }
        Ok(tracker.into_report(Condition::Kernel, c, t_grid.to_vec(), tol))
    }

    /// Runs the whole equivalence loop with constants propagated from the
    /// measured minimal gap constant: the gap condition with `C1` (the
    /// converse direction, constant taken as is), the resolvent condition
    /// with `C3 = C2 M^2` and the semigroup condition with `C1 = C2 M^4`.
    ///
    /// The propagation base is `max(minimal_c2, 0)`: for a nonpositive
    /// gap constant the pair is in the domination regime, where the
    /// resolvent and semigroup comparisons hold with constant 0 (negative
    /// constants do not survive the propagation inequalities).
    pub fn verify_theorem_loop(
        &self,
        t_grid: &[f64],
        lambda_grid: &[f64],
        tol: f64,
    ) -> Result<Vec<ConditionReport>> {
        let c2_star = self.minimal_c2();
        let base = c2_star.max(0.0);
        let m = self.bound.m();
        let m2 = m * m;
        let c3 = base * m2;
        let c1 = c3 * m2;
        let report_b = self.check_condition_b(c1, tol);
        let report_c = self.check_condition_c(c3, lambda_grid, tol)?;
        let report_a = self.check_condition_a(c1, t_grid, tol)?;
        Ok(vec![report_b, report_c, report_a])
    }
}
