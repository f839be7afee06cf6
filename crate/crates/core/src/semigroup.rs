//! Positive-semigroup computation: generator validation, the matrix
//! exponential, resolvents, the rational (backward-Euler) approximation of
//! the exponential, and weighted-L1 growth bounds `(M, omega)`.

use alloc::format;

use crate::error::{Error, Result};
use crate::grid::default_t_grid;
use crate::math;
use crate::matrix::Matrix;
use crate::measure::{self, MeasureSpace, Operator};

/// Absolute slack allowed when validating a user-supplied growth bound
/// against the computed operator norms on the default time grid.
pub const BOUND_VALIDATION_TOL: f64 = 1e-9;

/// Outcome of the off-diagonal nonnegativity check. `row`/`col` are
/// 1-based, matching report conventions.
#[derive(Clone, Debug, PartialEq)]
pub enum PositivityCheck {
    Ok,
    Violation { row: usize, col: usize, entry: f64 },
}

/// Checks the Metzler condition: every off-diagonal entry at least `-tol`.
///
/// In finite dimension this is exactly the property that makes `exp(tA)`
/// entrywise nonnegative for all `t >= 0`. Reports the worst offender.
pub fn check_positivity(matrix: &Matrix, tol: f64) -> PositivityCheck {
    let n = matrix.dim();
    let mut worst: Option<(usize, usize, f64)> = None;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let e = matrix[(i, j)];
            if e < -tol {
                match worst {
                    Some((_, _, w)) if e >= w => {}
                    _ => worst = Some((i, j, e)),
                }
            }
        }
    }
    match worst {
        None => PositivityCheck::Ok,
        Some((i, j, entry)) => PositivityCheck::Violation { row: i + 1, col: j + 1, entry },
    }
}

/// Growth bound `(M, omega)` for the weighted-L1 estimate
/// `|exp(tA) u|_1 <= M e^{omega t} |u|_1`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SemigroupBound {
    m: f64,
    omega: f64,
}

impl SemigroupBound {
    pub fn new(m: f64, omega: f64) -> Result<Self> {
        if !(m >= 1.0 && m.is_finite()) {
            return Err(Error::InvalidArgument(format!("M must be at least 1, got {m}")));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidArgument(format!("omega must be finite, got {omega}")));
        }
        Ok(SemigroupBound { m, omega })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Componentwise max of two bounds; valid for every semigroup either
    /// input bounds.
    pub fn max(self, other: SemigroupBound) -> SemigroupBound {
        SemigroupBound {
            m: self.m.max(other.m),
            omega: self.omega.max(other.omega),
        }
    }
}

/// Metzler matrix over a measure space; generates the positive semigroup
/// `exp(tA)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    space: MeasureSpace,
    matrix: Matrix,
}

impl Generator {
    /// Validates the dimension and the Metzler condition (tolerance 0).
    pub fn new(space: MeasureSpace, matrix: Matrix) -> Result<Self> {
        if matrix.dim() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: matrix.dim(),
            });
        }
        if let PositivityCheck::Violation { row, col, entry } = check_positivity(&matrix, 0.0) {
            return Err(Error::InvalidArgument(format!(
                "negative off-diagonal entry {entry} at ({row}, {col}); not a positive-semigroup generator"
            )));
        }
        Ok(Generator { space, matrix })
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn check_positivity(&self, tol: f64) -> PositivityCheck {
        check_positivity(&self.matrix, tol)
    }

    /// Weighted adjoint; again a generator, since the adjoint rescales
    /// off-diagonal entries by positive factors.
    pub fn adjoint(&self) -> Generator {
        Generator {
            space: self.space.clone(),
            matrix: measure::adjoint_matrix(self.space.weights(), &self.matrix),
        }
    }

    pub fn as_operator(&self) -> Operator {
        Operator::new(self.space.clone(), self.matrix.clone())
            .expect("generator dimensions are consistent")
    }

    /// The semigroup operator `exp(tA)` by scaling and squaring.
    ///
    /// The scaled matrix is shifted by `beta I` so that the series runs
    /// over an entrywise nonnegative matrix: every Taylor term is then
    /// nonnegative, nothing cancels, and the result is entrywise
    /// nonnegative exactly, not just up to round-off. The shift is undone
    /// by the scalar factor `e^{-beta}` before squaring.
    ///
    /// Relative accuracy is near machine precision for moderate `|tA|`
    /// and degrades like `|tA| * eps` for stiff inputs, which matches the
    /// conditioning of the problem itself.
    pub fn expm(&self, t: f64) -> Result<Operator> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("time must be nonnegative, got {t}")));
        }
        let n = self.dim();
        let b = self.matrix.scale(t);

        let norm = b.inf_norm();
        let mut squarings = 0u32;
        let mut halving = 1.0f64;
        while norm * halving > 1.0 {
            halving *= 0.5;
            squarings += 1;
        }
        let scaled = b.scale(halving);

        let mut beta = 0.0f64;
        for i in 0..n {
            beta = beta.max(-scaled[(i, i)]);
        }
        let shifted = scaled.add(&Matrix::diagonal(&alloc::vec![beta; n]));

        // |shifted|_inf <= 2, so terms decay at least factorially.
        let mut acc = Matrix::identity(n);
        let mut term = Matrix::identity(n);
        for k in 1..=40u32 {
            term = term.matmul(&shifted).scale(1.0 / k as f64);
            acc = acc.add(&term);
            if term.max_abs() <= acc.max_abs() * 1e-20 {
                break;
            }
        }

        let mut e = acc.scale(math::exp(-beta));
        for _ in 0..squarings {
            e = e.matmul(&e);
        }
        Operator::new(self.space.clone(), e)
    }

    /// The resolvent `(lambda I - A)^{-1}`.
    pub fn resolvent(&self, lambda: f64) -> Result<Operator> {
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda must be finite, got {lambda}")));
        }
        let m = Matrix::identity(self.dim()).scale(lambda).sub(&self.matrix);
        let inv = m.inverse().ok_or(Error::ResolventUndefined { lambda })?;
        Operator::new(self.space.clone(), inv)
    }

    /// Rational approximation of `exp(tA)`:
    /// `(n/t)^n (n/t - A)^{-n} = (I - (t/n) A)^{-n}`,
    /// converging at rate `O(1/n)`. Serves as an independent cross-check
    /// of [`Generator::expm`].
    pub fn euler_approx(&self, t: f64, steps: usize) -> Result<Operator> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
        }
        if steps == 0 {
            return Err(Error::InvalidArgument(format!("step count must be positive")));
        }
        let h = t / steps as f64;
        let m = Matrix::identity(self.dim()).sub(&self.matrix.scale(h));
        let inv = m
            .inverse()
            .ok_or(Error::ResolventUndefined { lambda: steps as f64 / t })?;
        Operator::new(self.space.clone(), inv.power(steps as u64))
    }

    /// Weighted-L1 logarithmic norm:
    /// `max_j [ A_{jj} + (1/m_j) sum_{i != j} m_i A_{ij} ]`
    /// (off-diagonals are nonnegative, so no absolute values are needed).
    /// This is the smallest `omega` valid with `M = 1`:
    /// `|exp(tA)|_{L1->L1} <= e^{omega t}` for all `t >= 0`.
    pub fn l1_log_norm(&self) -> f64 {
        let n = self.dim();
        let w = self.space.weights();
        let mut worst = f64::NEG_INFINITY;
        for j in 0..n {
            let mut col = 0.0;
            for i in 0..n {
                if i != j {
                    col += w[i] * self.matrix[(i, j)];
                }
            }
            worst = worst.max(self.matrix[(j, j)] + col / w[j]);
        }
        worst
    }

    /// Growth bound for this generator: `(1, l1_log_norm())` by default,
    /// or a caller-supplied override after validation on the default time
    /// grid. Overrides allow the `M > 1` bookkeeping that the default
    /// construction never exercises.
    pub fn semigroup_bound(&self, override_bound: Option<SemigroupBound>) -> Result<SemigroupBound> {
        match override_bound {
            None => SemigroupBound::new(1.0, self.l1_log_norm()),
            Some(bound) => {
                validate_bound(&[self], bound, &default_t_grid())?;
                Ok(bound)
            }
        }
    }
}

/// Checks `|exp(tA)|_{L1->L1} <= M e^{omega t} + tol` for every generator
/// and every grid time; reports the worst violation.
pub(crate) fn validate_bound(
    generators: &[&Generator],
    bound: SemigroupBound,
    grid: &[f64],
) -> Result<()> {
    let mut worst_t = 0.0;
    let mut worst_slack = f64::NEG_INFINITY;
    for g in generators {
        for &t in grid {
            let norm = g.expm(t)?.norm_l1();
            let slack = norm - bound.m() * math::exp(bound.omega() * t);
            if slack > worst_slack {
                worst_slack = slack;
                worst_t = t;
            }
        }
    }
    if worst_slack > BOUND_VALIDATION_TOL {
        return Err(Error::InvalidBound {
            m: bound.m(),
            omega: bound.omega(),
            t: worst_t,
            slack: worst_slack,
        });
    }
    Ok(())
}

// Convenience used by several checkers: the six also used in tests.
impl Generator {
    /// Difference matrix `A - B` as a raw matrix (not itself a generator).
    pub(crate) fn matrix_sub(&self, other: &Generator) -> Matrix {
        self.matrix.sub(&other.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn uniform_space(n: usize) -> MeasureSpace {
        MeasureSpace::uniform(n, 1.0).unwrap()
    }

    fn mk(rows: &[Vec<f64>]) -> Generator {
        let s = uniform_space(rows.len());
        Generator::new(s, Matrix::from_rows(rows).unwrap()).unwrap()
    }

    /// Conservative symmetric 2x2 used across examples.
    fn hop() -> Generator {
        mk(&[vec![-1.0, 1.0], vec![1.0, -1.0]])
    }

    #[test]
    fn positivity_check_examples() {
        assert_eq!(check_positivity(hop().matrix(), 0.0), PositivityCheck::Ok);

        let bad = Matrix::from_rows(&[vec![0.0, -0.1], vec![0.0, 0.0]]).unwrap();
        assert_eq!(
            check_positivity(&bad, 1e-12),
            PositivityCheck::Violation { row: 1, col: 2, entry: -0.1 }
        );

        let diag = Matrix::diagonal(&[-3.0, 5.0, 0.0]);
        assert_eq!(check_positivity(&diag, 0.0), PositivityCheck::Ok);
    }

    #[test]
    fn generator_constructor_rejects_negative_offdiagonal() {
        let s = uniform_space(2);
        let bad = Matrix::from_rows(&[vec![0.0, -0.1], vec![0.0, 0.0]]).unwrap();
        assert!(Generator::new(s, bad).is_err());
    }

    #[test]
    fn expm_of_zero_generator_is_identity() {
        let z = mk(&[vec![0.0, 0.0], vec![0.0, 0.0]]);
        for &t in &[0.0, 0.7, 3.0] {
            let e = z.expm(t).unwrap();
            assert_eq!(e.matrix(), &Matrix::identity(2));
        }
    }

    #[test]
    fn expm_at_zero_time_is_identity() {
        let e = hop().expm(0.0).unwrap();
        assert_eq!(e.matrix(), &Matrix::identity(2));
    }

    #[test]
    fn expm_matches_eigendecomposition_at_ln2() {
        // Eigenvalues {0, -2}; at t = ln 2, e^{-2t} = 1/4.
        let t = core::f64::consts::LN_2;
        let e = hop().expm(t).unwrap();
        let expected = [[0.625, 0.375], [0.375, 0.625]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (e.matrix()[(i, j)] - expected[i][j]).abs() < 1e-14,
                    "entry ({i},{j}) = {}",
                    e.matrix()[(i, j)]
                );
            }
        }
    }

    #[test]
    fn expm_of_diagonal_is_scalar_exponentials() {
        let d = mk(&[vec![-1.0, 0.0], vec![0.0, -2.0]]);
        let e = d.expm(1.0).unwrap();
        assert!((e.matrix()[(0, 0)] - (-1.0f64).exp()).abs() < 1e-15);
        assert!((e.matrix()[(1, 1)] - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(e.matrix()[(0, 1)], 0.0);
        assert_eq!(e.matrix()[(1, 0)], 0.0);
    }

    #[test]
    fn expm_rejects_negative_time() {
        assert!(hop().expm(-0.1).is_err());
    }

    #[test]
    fn expm_entries_stay_nonnegative_even_when_stiff() {
        // Large norm forces many squarings; entries must remain >= 0 exactly.
        let a = mk(&[vec![-4096.0, 4096.0], vec![4096.0, -4096.0]]);
        let e = a.expm(5.0).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(e.matrix()[(i, j)] >= 0.0);
            }
        }
        // accuracy here is conditioning-limited: |tA| * eps ~ 1e-11
        assert!(
            (e.matrix()[(0, 0)] - 0.5).abs() < 1e-10,
            "got {:?}",
            e.matrix().data()
        );
    }

    #[test]
    fn resolvent_scalar_case() {
        let d = mk(&[vec![-1.0, 0.0], vec![0.0, -1.0]]);
        let r = d.resolvent(1.0).unwrap();
        assert!(r.matrix().sub(&Matrix::identity(2).scale(0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn resolvent_of_hop_at_one() {
        let r = hop().resolvent(1.0).unwrap();
        let expected =
            Matrix::from_rows(&[vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0 / 3.0, 2.0 / 3.0]]).unwrap();
        assert!(r.matrix().sub(&expected).max_abs() < 1e-15);
    }

    #[test]
    fn resolvent_of_stronger_hop() {
        let a = mk(&[vec![-1.0, 1.5], vec![1.5, -1.0]]);
        let r = a.resolvent(1.5).unwrap();
        let expected = Matrix::from_rows(&[vec![0.625, 0.375], vec![0.375, 0.625]]).unwrap();
        assert!(r.matrix().sub(&expected).max_abs() < 1e-15);
    }

    #[test]
    fn resolvent_reports_singular_lambda() {
        // 0 is an eigenvalue of the conservative generator.
        match hop().resolvent(0.0) {
            Err(Error::ResolventUndefined { lambda }) => assert_eq!(lambda, 0.0),
            other => panic!("expected resolvent-undefined, got {other:?}"),
        }
    }

    #[test]
    fn euler_identity_for_zero_generator() {
        let z = mk(&[vec![0.0, 0.0], vec![0.0, 0.0]]);
        for steps in [1, 2, 17] {
            let e = z.euler_approx(1.3, steps).unwrap();
            assert!(e.matrix().sub(&Matrix::identity(2)).max_abs() < 1e-15);
        }
    }

    #[test]
    fn euler_single_step_is_resolvent() {
        let e = hop().euler_approx(1.0, 1).unwrap();
        let r = hop().resolvent(1.0).unwrap();
        assert!(e.matrix().sub(r.matrix()).max_abs() < 1e-15);
    }

    #[test]
    fn euler_ten_steps_matches_scalar_formula() {
        // On the eigenvector (1,-1) of eigenvalue -2 the approximant acts as
        // (1 + 2/10)^{-10}; the defect against e^{-2} is about 0.02617.
        let e = hop().euler_approx(1.0, 10).unwrap();
        let image = e.apply(&crate::measure::Func::new(hop().space(), vec![1.0, -1.0]).unwrap()).unwrap();
        let factor = image.values()[0];
        let scalar = 1.0 / 1.2f64.powi(10);
        assert!((factor - scalar).abs() < 1e-13);
        assert!(((factor - (-2.0f64).exp()).abs() - 0.02617).abs() < 1e-4);
    }

    #[test]
    fn euler_rejects_bad_arguments() {
        assert!(hop().euler_approx(0.0, 4).is_err());
        assert!(hop().euler_approx(1.0, 0).is_err());
    }

    #[test]
    fn log_norm_examples() {
        assert_eq!(hop().l1_log_norm(), 0.0);

        let a = mk(&[vec![-1.0, 1.5], vec![1.5, -1.0]]);
        assert_eq!(a.l1_log_norm(), 0.5);

        let d = mk(&[vec![-3.0, 0.0], vec![0.0, -1.0]]);
        assert_eq!(d.l1_log_norm(), -1.0);
    }

    #[test]
    fn log_norm_respects_weights() {
        // m = (1, 2), column 0: A_00 + (m_1/m_0) A_10 = -1 + 2*0.5 = 0.
        let s = MeasureSpace::new(vec![1.0, 2.0]).unwrap();
        let a = Generator::new(
            s,
            Matrix::from_rows(&[vec![-1.0, 1.0], vec![0.5, -1.0]]).unwrap(),
        )
        .unwrap();
        // column 1: -1 + (m_0/m_1) * 1 = -0.5
        assert_eq!(a.l1_log_norm(), 0.0);
    }

    #[test]
    fn default_bound_uses_log_norm() {
        let b = hop().semigroup_bound(None).unwrap();
        assert_eq!(b.m(), 1.0);
        assert_eq!(b.omega(), 0.0);

        let z = mk(&[vec![0.0, 0.0], vec![0.0, 0.0]]);
        let b = z.semigroup_bound(None).unwrap();
        assert_eq!((b.m(), b.omega()), (1.0, 0.0));
    }

    #[test]
    fn looser_override_is_accepted() {
        let a = mk(&[vec![-1.0, 1.5], vec![1.5, -1.0]]);
        let b = a
            .semigroup_bound(Some(SemigroupBound::new(2.0, 1.0).unwrap()))
            .unwrap();
        assert_eq!((b.m(), b.omega()), (2.0, 1.0));
    }

    #[test]
    fn tight_override_is_rejected_with_witness() {
        let a = mk(&[vec![-1.0, 1.5], vec![1.5, -1.0]]);
        // true log norm is 0.5; omega = 0.3 with M = 1 fails for large t
        match a.semigroup_bound(Some(SemigroupBound::new(1.0, 0.3).unwrap())) {
            Err(Error::InvalidBound { t, slack, .. }) => {
                assert!(t > 0.0);
                assert!(slack > 0.0);
            }
            other => panic!("expected invalid-bound, got {other:?}"),
        }
    }

    #[test]
    fn bound_requires_m_at_least_one() {
        assert!(SemigroupBound::new(0.5, 0.0).is_err());
    }

    #[test]
    fn adjoint_generator_swaps_weighted_column_sums_to_row_sums() {
        let s = MeasureSpace::new(vec![1.0, 3.0]).unwrap();
        let a = Generator::new(
            s.clone(),
            Matrix::from_rows(&[vec![-2.0, 1.0], vec![1.0, -1.0]]).unwrap(),
        )
        .unwrap();
        let adj = a.adjoint();
        // adjoint log norm equals the max plain row sum of the original
        let row_sums: Vec<f64> = (0..2).map(|i| a.matrix().row(i).iter().sum()).collect();
        let expected = row_sums.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
        assert!((adj.l1_log_norm() - expected).abs() < 1e-15);
    }
}
