//! Finite weighted measure spaces, functions and operators on them,
//! weighted inner products and norms, and weighted adjoints.
//!
//! A space is a finite set of atoms with strictly positive weights `m_i`.
//! Functions pair with the space through `<u, v> = sum_i m_i u_i v_i` and
//! `|u|_1 = sum_i m_i |u_i|`; operators act as plain matrices and carry
//! their space so adjoints and weighted operator norms are always taken
//! with respect to the right weights.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::Matrix;

/// Finite set of atoms with strictly positive, finite weights.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasureSpace {
    weights: Vec<f64>,
}

impl MeasureSpace {
    /// Zero-weight atoms are rejected rather than silently dropped.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "a measure space needs at least one atom"
            )));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "weight {w} at atom {i} is not strictly positive and finite"
                )));
            }
        }
        Ok(MeasureSpace { weights })
    }

    pub fn uniform(n: usize, w: f64) -> Result<Self> {
        MeasureSpace::new(vec![w; n])
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found });
        }
        Ok(())
    }

    /// Weighted inner product `sum_i m_i u_i v_i`.
    pub fn inner(&self, u: &Func, v: &Func) -> Result<f64> {
        self.check_len(u.len())?;
        self.check_len(v.len())?;
        let mut acc = 0.0;
        for ((&w, &a), &b) in self.weights.iter().zip(u.values()).zip(v.values()) {
            acc += w * a * b;
        }
        Ok(acc)
    }

    /// Weighted L1 norm `sum_i m_i |u_i|`.
    pub fn norm_l1(&self, u: &Func) -> Result<f64> {
        self.check_len(u.len())?;
        let mut acc = 0.0;
        for (&w, &a) in self.weights.iter().zip(u.values()) {
            acc += w * math::abs(a);
        }
        Ok(acc)
    }
}

/// Vector of point values paired with a space at call time.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Func {
    values: Vec<f64>,
}

impl Func {
    pub fn new(space: &MeasureSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        Ok(Func { values })
    }

    /// Constant function, e.g. the all-ones comparison function.
    pub fn constant(space: &MeasureSpace, c: f64) -> Self {
        Func { values: vec![c; space.len()] }
    }

    /// Indicator of a single atom.
    pub fn basis(space: &MeasureSpace, i: usize) -> Result<Self> {
        if i >= space.len() {
            return Err(Error::InvalidArgument(format!(
                "basis index {i} out of range for {} atoms",
                space.len()
            )));
        }
        let mut values = vec![0.0; space.len()];
        values[i] = 1.0;
        Ok(Func { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }
}

/// Weighted adjoint of a matrix: `B*_{ij} = (m_j / m_i) B_{ji}`.
pub(crate) fn adjoint_matrix(weights: &[f64], b: &Matrix) -> Matrix {
    Matrix::from_fn(b.dim(), |i, j| b[(j, i)] * weights[j] / weights[i])
}

/// Weighted L1 operator norm: `max_j (1/m_j) sum_i m_i |B_{ij}|`.
pub(crate) fn operator_norm_l1(weights: &[f64], b: &Matrix) -> f64 {
    let n = b.dim();
    let mut worst = 0.0f64;
    for j in 0..n {
        let mut col = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            col += w * math::abs(b[(i, j)]);
        }
        worst = worst.max(col / weights[j]);
    }
    worst
}

/// Bounded operator on a space, acting as `(Bu)_i = sum_j B_{ij} u_j`.
///
/// The integral kernel of an operator against the space's measure is
/// `k(i, j) = B_{ij} / m_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    space: MeasureSpace,
    matrix: Matrix,
}

impl Operator {
    pub fn new(space: MeasureSpace, matrix: Matrix) -> Result<Self> {
        if matrix.dim() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: matrix.dim(),
            });
        }
        Ok(Operator { space, matrix })
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

    pub fn apply(&self, u: &Func) -> Result<Func> {
        self.space.check_len(u.len())?;
        Ok(Func { values: self.matrix.matvec(u.values()) })
    }

    /// Adjoint with respect to the weighted inner product:
    /// `<Bu, v> = <u, B*v>` for all `u`, `v`.
    pub fn adjoint(&self) -> Operator {
        Operator {
            space: self.space.clone(),
            matrix: adjoint_matrix(self.space.weights(), &self.matrix),
        }
    }

    /// Quadratic-form value `<-Bu, v>`.
    pub fn form_value(&self, u: &Func, v: &Func) -> Result<f64> {
        let bu = self.apply(u)?;
        Ok(-self.space.inner(&bu, v)?)
    }

    /// Weighted L1 operator norm.
    pub fn norm_l1(&self) -> f64 {
        operator_norm_l1(self.space.weights(), &self.matrix)
    }

    /// Kernel entry `B_{ij} / m_j`.
    pub fn kernel_entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)] / self.space.weight(j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(w: &[f64]) -> MeasureSpace {
        MeasureSpace::new(w.to_vec()).unwrap()
    }

    fn func(s: &MeasureSpace, v: &[f64]) -> Func {
        Func::new(s, v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(MeasureSpace::new(vec![]).is_err());
        assert!(MeasureSpace::new(vec![1.0, 0.0]).is_err());
        assert!(MeasureSpace::new(vec![1.0, -2.0]).is_err());
        assert!(MeasureSpace::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn inner_orthogonal_basis_vectors() {
        let s = space(&[1.0, 1.0]);
        let u = func(&s, &[1.0, 0.0]);
        let v = func(&s, &[0.0, 1.0]);
        assert_eq!(s.inner(&u, &v).unwrap(), 0.0);
    }

    #[test]
    fn inner_sums_weights_on_ones() {
        let s = space(&[1.0, 2.0]);
        let one = Func::constant(&s, 1.0);
        assert_eq!(s.inner(&one, &one).unwrap(), 3.0);
    }

    #[test]
    fn inner_direct_summation() {
        // 1*2*1 + 2*1*3 = 8
        let s = space(&[1.0, 2.0]);
        let u = func(&s, &[2.0, 1.0]);
        let v = func(&s, &[1.0, 3.0]);
        assert_eq!(s.inner(&u, &v).unwrap(), 8.0);
    }

    #[test]
    fn inner_dimension_mismatch() {
        let s = space(&[1.0, 2.0]);
        let s3 = space(&[1.0, 1.0, 1.0]);
        let u = func(&s, &[1.0, 1.0]);
        let w = func(&s3, &[1.0, 1.0, 1.0]);
        assert!(matches!(
            s.inner(&u, &w),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn norm_l1_examples() {
        let s = space(&[1.0, 1.0]);
        assert_eq!(s.norm_l1(&func(&s, &[0.0, 0.0])).unwrap(), 0.0);

        let s = space(&[1.0, 2.0]);
        assert_eq!(s.norm_l1(&func(&s, &[1.0, -1.0])).unwrap(), 3.0);

        let s = space(&[0.5, 0.5]);
        assert_eq!(s.norm_l1(&func(&s, &[1.0, 1.0])).unwrap(), 1.0);
    }

    #[test]
    fn adjoint_of_symmetric_under_uniform_weights() {
        let s = space(&[1.0, 1.0, 1.0]);
        let b = Matrix::from_rows(&[
            vec![1.0, 2.0, 0.5],
            vec![2.0, -1.0, 3.0],
            vec![0.5, 3.0, 0.0],
        ])
        .unwrap();
        let op = Operator::new(s, b.clone()).unwrap();
        assert_eq!(op.adjoint().matrix(), &b);
    }

    #[test]
    fn adjoint_reweights_entries() {
        // m = (1, 2), B = [[0,1],[0,0]]  =>  B* = [[0,0],[0.5,0]]
        let s = space(&[1.0, 2.0]);
        let b = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let op = Operator::new(s.clone(), b).unwrap();
        let adj = op.adjoint();
        let expected = Matrix::from_rows(&[vec![0.0, 0.0], vec![0.5, 0.0]]).unwrap();
        assert_eq!(adj.matrix(), &expected);

        // <B e_j, e_i> = <e_j, B* e_i> on all basis pairs.
        for i in 0..2 {
            for j in 0..2 {
                let ej = Func::basis(&s, j).unwrap();
                let ei = Func::basis(&s, i).unwrap();
                let lhs = s.inner(&op.apply(&ej).unwrap(), &ei).unwrap();
                let rhs = s.inner(&ej, &adj.apply(&ei).unwrap()).unwrap();
                assert!((lhs - rhs).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn identity_is_self_adjoint() {
        let s = space(&[0.3, 1.7, 4.0]);
        let op = Operator::new(s, Matrix::identity(3)).unwrap();
        assert_eq!(op.adjoint().matrix(), &Matrix::identity(3));
    }

    #[test]
    fn form_value_examples() {
        let s = space(&[1.0, 1.0]);
        let zero = Operator::new(s.clone(), Matrix::zeros(2)).unwrap();
        let u = func(&s, &[2.0, -3.0]);
        let v = func(&s, &[1.0, 5.0]);
        assert_eq!(zero.form_value(&u, &v).unwrap(), 0.0);

        let a = Operator::new(
            s.clone(),
            Matrix::from_rows(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap(),
        )
        .unwrap();
        let w = func(&s, &[1.0, -1.0]);
        assert_eq!(a.form_value(&w, &w).unwrap(), 4.0);

        let one = Func::constant(&s, 1.0);
        assert_eq!(a.form_value(&one, &one).unwrap(), 0.0);
    }

    #[test]
    fn operator_norm_is_worst_weighted_column() {
        let s = space(&[1.0, 2.0]);
        let b = Matrix::from_rows(&[vec![1.0, -1.0], vec![0.5, 0.0]]).unwrap();
        let op = Operator::new(s, b).unwrap();
        // column 0: (1*1 + 2*0.5) / 1 = 2; column 1: (1*1 + 0) / 2 = 0.5
        assert_eq!(op.norm_l1(), 2.0);
    }

    #[test]
    fn kernel_entry_divides_by_column_weight() {
        let s = space(&[1.0, 4.0]);
        let b = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let op = Operator::new(s, b).unwrap();
        assert_eq!(op.kernel_entry(0, 1), 0.5);
        assert_eq!(op.kernel_entry(1, 0), 3.0);
    }
}
