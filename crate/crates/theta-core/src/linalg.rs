//! Small complex linear-algebra helpers on top of nalgebra: SVD-based rank,
//! null spaces and least-squares solves for the modest matrix sizes used by
//! the curve pipeline.

use crate::{Complex, CoreError, Result};
use nalgebra::DMatrix;

pub type CMat = DMatrix<Complex>;

/// Singular values of `a`, descending.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let svd = a.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().cloned().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Numerical rank with relative threshold `rel_tol * s_max`.
pub fn rank(a: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(a);
    let smax = s.first().cloned().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * smax).count()
}

/// Rank with a gap diagnostic: fails when no clear gap separates "zero" from
/// "nonzero" singular values at the requested threshold.
pub fn rank_with_gap(a: &CMat, rel_tol: f64) -> Result<(usize, f64)> {
    let s = singular_values(a);
    let smax = s.first().cloned().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok((0, f64::INFINITY));
    }
    let cut = rel_tol * smax;
    let r = s.iter().filter(|&&x| x > cut).count();
    let above = if r > 0 { s[r - 1] } else { smax };
    let below = if r < s.len() { s[r] } else { 0.0 };
    let gap = if below == 0.0 { f64::INFINITY } else { above / below };
    if gap < 1e2 && below != 0.0 {
        return Err(CoreError::RankAmbiguous { below, above });
    }
    Ok((r, gap))
}

/// Orthonormal basis of the (right) null space at relative threshold.
///
/// Wide matrices are padded with zero rows first: the thin SVD only exposes
/// `min(m, n)` rows of `V^T`, which would hide part of the kernel.
pub fn null_space(a: &CMat, rel_tol: f64) -> Vec<Vec<Complex>> {
    let work;
    let a = if a.nrows() < a.ncols() {
        let mut padded = CMat::zeros(a.ncols(), a.ncols());
        padded.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
        work = padded;
        &work
    } else {
        a
    };
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let mut out = Vec::new();
    let ncols = vt.ncols();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if smax == 0.0 || s <= rel_tol * smax {
            let row = vt.row(i);
            out.push((0..ncols).map(|j| row[j].conj()).collect());
        }
    }
    out
}

/// Solve `a x = b` in the least-squares sense via SVD (works for any shape).
pub fn solve_lstsq(a: &CMat, b: &[Complex]) -> Result<Vec<Complex>> {
    let svd = a.clone().svd(true, true);
    let rhs = nalgebra::DVector::from_column_slice(b);
    let x = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| CoreError::Invalid(format!("SVD solve failed: {e}")))?;
    Ok(x.iter().cloned().collect())
}

/// Determinant of a square complex matrix.
pub fn det(a: &CMat) -> Complex {
    a.clone().lu().determinant()
}

/// Build a matrix from row-major data.
pub fn from_rows(rows: &[Vec<Complex>]) -> CMat {
    let nr = rows.len();
    let nc = if nr > 0 { rows[0].len() } else { 0 };
    CMat::from_fn(nr, nc, |i, j| rows[i][j])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rank_deficient() {
        // rows: [1, 1, 0], [0, 0, 0], [2, 2, 0] -> rank 1, kernel dim 2
        let a = from_rows(&[
            vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
            vec![Complex::new(0.0, 0.0); 3],
            vec![Complex::new(2.0, 0.0), Complex::new(2.0, 0.0), Complex::new(0.0, 0.0)],
        ]);
        assert_eq!(rank(&a, 1e-10), 1);
        let ns = null_space(&a, 1e-10);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let img0 = v[0] + v[1];
            assert!(img0.norm() < 1e-10);
        }
    }
}
