//! Shared test oracles, deliberately dumb and independent of the library
//! internals they check.

use posigroup::PerturbationPair;
use rayon::prelude::*;

/// All points of the weighted simplex grid in mass coordinates: vectors of
/// `dim` nonnegative multiples of `1/parts` summing to 1.
pub fn simplex_grid(dim: usize, parts: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; dim];
    fill(&mut out, &mut current, 0, parts, parts);
    out
}

fn fill(out: &mut Vec<Vec<f64>>, current: &mut Vec<usize>, idx: usize, left: usize, parts: usize) {
    if idx + 1 == current.len() {
        current[idx] = left;
        out.push(current.iter().map(|&k| k as f64 / parts as f64).collect());
        return;
    }
    for k in 0..=left {
        current[idx] = k;
        fill(out, current, idx + 1, left - k, parts);
    }
}

/// Brute-force supremum of the generator gap over all pairs of grid points
/// of the normalized nonnegative cone: `u` runs over `alpha_j / m_j`,
/// `v` over `beta_i / m_i`, both with unit weighted-L1 norm, and the gap
/// is evaluated directly as `<(A - A0) u, v>`.
pub fn brute_force_gap_max(pair: &PerturbationPair, parts: usize) -> f64 {
    let dim = pair.dim();
    let w = pair.space().weights().to_vec();
    let diff = pair.perturbed().matrix().sub(pair.unperturbed().matrix());
    let grid = simplex_grid(dim, parts);

    // <(A-A0)u, v> with v_i = beta_i / m_i collapses to a plain dot of
    // beta with (A-A0)u, so flatten the betas once and stream over them.
    let flat: Vec<f64> = grid.iter().flatten().copied().collect();

    grid.par_iter()
        .map(|alpha| {
            let u: Vec<f64> = alpha.iter().zip(&w).map(|(a, m)| a / m).collect();
            let du = diff.matvec(&u);
            let mut best = f64::NEG_INFINITY;
            for beta in flat.chunks_exact(dim) {
                let mut acc = 0.0;
                for (b, d) in beta.iter().zip(&du) {
                    acc += b * d;
                }
                if acc > best {
                    best = acc;
                }
            }
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}
