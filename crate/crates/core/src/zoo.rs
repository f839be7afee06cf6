//! Builders for the scenarios exercised by the tests and the CLI:
//! discrete 1-D Laplacians with Neumann and periodic closures, jump-kernel
//! perturbations, bounded diagonal potentials, the boundary-condition
//! counterexample pair, and seeded random Metzler generators.
//!
//! Random builders are deterministic in their seed: each call owns a fresh
//! ChaCha stream, so outputs never depend on call order.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::measure::{Func, MeasureSpace};
use crate::semigroup::Generator;
use crate::theorem::PerturbationPair;

/// Cell-centered discretization of the unit interval: `n` cells of width
/// `h = 1/n`, measure of each cell equal to `h` (total mass 1).
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1D {
    n: usize,
    h: f64,
    space: MeasureSpace,
}

impl Grid1D {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 cells, got {n}")));
        }
        let h = 1.0 / n as f64;
        Ok(Grid1D { n, h, space: MeasureSpace::uniform(n, h)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }
}

/// Second-difference matrix with reflecting (Neumann) closures:
/// interior rows `(1, -2, 1)/h^2`, boundary rows `(-1, 1)/h^2`.
/// Conservative (zero row sums) and symmetric.
pub fn laplacian_neumann(grid: &Grid1D) -> Generator {
    let n = grid.n();
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        if i > 0 {
            m[(i, i - 1)] = inv_h2;
        }
        if i + 1 < n {
            m[(i, i + 1)] = inv_h2;
        }
        let neighbors = (i > 0) as usize + (i + 1 < n) as usize;
        m[(i, i)] = -(neighbors as f64) * inv_h2;
    }
    Generator::new(grid.space().clone(), m).expect("stencil is Metzler by construction")
}

/// Circulant second-difference matrix `(1, -2, 1)/h^2` with wraparound
/// corners `1/h^2`; needs `n >= 3` so the corners stay distinct.
pub fn laplacian_periodic(grid: &Grid1D) -> Result<Generator> {
    let n = grid.n();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "periodic closure degenerates below 3 cells, got {n}"
        )));
    }
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = -2.0 * inv_h2;
        m[(i, (i + 1) % n)] = inv_h2;
        m[(i, (i + n - 1) % n)] = inv_h2;
    }
    Generator::new(grid.space().clone(), m)
}

/// Symmetric nonnegative jump intensities between atoms, bounded by
/// `bound_c`; the diagonal is ignored (zeroed) by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpKernel {
    space: MeasureSpace,
    intensities: Matrix,
    bound_c: f64,
}

impl JumpKernel {
    pub fn new(space: MeasureSpace, intensities: Matrix, bound_c: f64) -> Result<Self> {
        if intensities.dim() != space.len() {
            return Err(Error::DimensionMismatch {
                expected: space.len(),
                found: intensities.dim(),
            });
        }
        if !(bound_c >= 0.0 && bound_c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "jump bound must be nonnegative, got {bound_c}"
            )));
        }
        let n = intensities.dim();
        let mut j = Matrix::zeros(n);
        for row in 0..n {
            for col in 0..n {
                if row == col {
                    continue;
                }
                let value = intensities[(row, col)];
                if intensities[(col, row)] != value {
                    return Err(Error::InvalidArgument(format!(
                        "jump intensities must be symmetric; ({row}, {col}) differs from its mirror"
                    )));
                }
                if !(0.0..=bound_c).contains(&value) {
                    return Err(Error::InvalidArgument(format!(
                        "jump intensity {value} at ({row}, {col}) is outside [0, {bound_c}]"
                    )));
                }
                j[(row, col)] = value;
            }
        }
        Ok(JumpKernel { space, intensities: j, bound_c })
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn intensities(&self) -> &Matrix {
        &self.intensities
    }

    pub fn bound_c(&self) -> f64 {
        self.bound_c
    }

    /// Largest off-diagonal intensity.
    pub fn max_intensity(&self) -> f64 {
        self.intensities.data().iter().fold(0.0f64, |m, &x| m.max(x))
    }
}

/// Seeded symmetric kernel with intensities uniform in `[0, bound_c]`.
pub fn random_jump_kernel(space: &MeasureSpace, seed: u64, bound_c: f64) -> Result<JumpKernel> {
    if !(bound_c >= 0.0 && bound_c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "jump bound must be nonnegative, got {bound_c}"
        )));
    }
    let n = space.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut j = Matrix::zeros(n);
    for row in 0..n {
        for col in row + 1..n {
            let value = if bound_c == 0.0 { 0.0 } else { rng.random_range(0.0..bound_c) };
            j[(row, col)] = value;
            j[(col, row)] = value;
        }
    }
    JumpKernel::new(space.clone(), j, bound_c)
}

/// Generator of the non-local form
/// `(u, v) -> 1/2 sum_{i,k} (u_i - u_k)(v_i - v_k) j_{ik} m_i m_k`:
/// off-diagonal entries `j_{ik} m_k`, diagonal entries
/// `-sum_{k != i} j_{ik} m_k`. Conservative in the weighted sense.
pub fn jump_generator(kernel: &JumpKernel) -> Generator {
    let n = kernel.space.len();
    let w = kernel.space.weights();
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        let mut out_rate = 0.0;
        for k in 0..n {
            if k == i {
                continue;
            }
            let rate = kernel.intensities[(i, k)] * w[k];
            m[(i, k)] = rate;
            out_rate += rate;
        }
        m[(i, i)] = -out_rate;
    }
    Generator::new(kernel.space.clone(), m).expect("jump rates are Metzler by construction")
}

/// `A0 + diag(V)` for a nonnegative potential `V`: the associated form
/// loses the potential term, the semigroup grows entrywise.
pub fn potential_perturbation(a0: &Generator, v: &Func) -> Result<Generator> {
    if v.len() != a0.dim() {
        return Err(Error::DimensionMismatch { expected: a0.dim(), found: v.len() });
    }
    if !v.is_nonnegative() {
        return Err(Error::InvalidArgument(format!("potential must be entrywise nonnegative")));
    }
    let m = a0.matrix().add(&Matrix::diagonal(v.values()));
    Generator::new(a0.space().clone(), m)
}

/// The boundary-condition pair on one grid: unperturbed Neumann closure
/// against perturbed periodic closure. The difference matrix is carried
/// entirely by the corner entries `1/h^2`, so the minimal gap constant is
/// `(1/h^2)/h = n^3` — unbounded under refinement, which is the point.
pub fn counterexample_pair(grid: &Grid1D) -> Result<PerturbationPair> {
    let a0 = laplacian_neumann(grid);
    let a = laplacian_periodic(grid)?;
    PerturbationPair::new(a0, a, None)
}

/// Seeded Metzler generator: off-diagonal entries uniform in
/// `[0, offdiag_scale]`, diagonal chosen so every weighted column sum is
/// uniform in `[-offdiag_scale, offdiag_scale]` (hence the weighted-L1
/// logarithmic norm lands in that interval as well).
pub fn random_metzler(space: &MeasureSpace, seed: u64, offdiag_scale: f64) -> Result<Generator> {
    if !(offdiag_scale > 0.0 && offdiag_scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "off-diagonal scale must be positive, got {offdiag_scale}"
        )));
    }
    let n = space.len();
    let w = space.weights();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m[(i, j)] = rng.random_range(0.0..offdiag_scale);
            }
        }
    }
    for j in 0..n {
        let target = rng.random_range(-offdiag_scale..offdiag_scale);
        let mut col = 0.0;
        for i in 0..n {
            if i != j {
                col += w[i] * m[(i, j)];
            }
        }
        m[(j, j)] = target - col / w[j];
    }
    Generator::new(space.clone(), m)
}

/// Seeded space with weights uniform in `[w_min, w_max]`.
pub fn random_space(n: usize, seed: u64, w_min: f64, w_max: f64) -> Result<MeasureSpace> {
    if !(w_min > 0.0 && w_max > w_min && w_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "weight range must satisfy 0 < w_min < w_max, got [{w_min}, {w_max}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = (0..n).map(|_| rng.random_range(w_min..w_max)).collect();
    MeasureSpace::new(weights)
}

/// The 2x2 pair used throughout the examples: symmetric hopping with rate
/// 1 against rate 1.5 on unit weights. Its minimal gap constant is 0.5
/// and its shared growth bound is `(1, 0.5)`.
pub fn canonical_pair() -> PerturbationPair {
    let s = MeasureSpace::uniform(2, 1.0).expect("valid space");
    let a0 = Generator::new(
        s.clone(),
        Matrix::from_rows(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).expect("square"),
    )
    .expect("Metzler");
    let a = Generator::new(
        s,
        Matrix::from_rows(&[vec![-1.0, 1.5], vec![1.5, -1.0]]).expect("square"),
    )
    .expect("Metzler");
    PerturbationPair::new(a0, a, None).expect("canonical pair is valid")
}

/// Neumann Laplacian perturbed by a seeded jump kernel bounded by `c`:
/// the desk-scale jump scenario. Gap constant is at most `c`.
pub fn jump_pair(n: usize, seed: u64, c: f64) -> Result<PerturbationPair> {
    let grid = Grid1D::new(n)?;
    let a0 = laplacian_neumann(&grid);
    let kernel = random_jump_kernel(grid.space(), seed, c)?;
    let a_matrix = a0.matrix().add(jump_generator(&kernel).matrix());
    let a = Generator::new(grid.space().clone(), a_matrix)?;
    PerturbationPair::new(a0, a, None)
}

/// Neumann Laplacian perturbed by a seeded nonnegative potential with
/// amplitude `scale`.
pub fn potential_pair(n: usize, seed: u64, scale: f64) -> Result<PerturbationPair> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "potential scale must be positive, got {scale}"
        )));
    }
    let grid = Grid1D::new(n)?;
    let a0 = laplacian_neumann(&grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..scale)).collect();
    let v = Func::new(grid.space(), values)?;
    let a = potential_perturbation(&a0, &v)?;
    PerturbationPair::new(a0, a, None)
}

/// Two independent seeded Metzler generators on a seeded weighted space.
/// Sub-seeds are derived from `seed` so one number reproduces the run.
pub fn random_pair(n: usize, seed: u64, scale: f64) -> Result<PerturbationPair> {
    let space = random_space(n, seed, 0.5, 2.0)?;
    let a0 = random_metzler(&space, seed.wrapping_add(1), scale)?;
    let a = random_metzler(&space, seed.wrapping_add(2), scale)?;
    PerturbationPair::new(a0, a, None)
}
