use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const BLOCK: usize = 64;

/// Lower Cholesky factor of a symmetric positive definite matrix, computed
/// block by block so that most of the work is matrix products.
pub(crate) fn cholesky(mut a: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let mut k = 0;
    while k < n {
        let b = BLOCK.min(n - k);
        let l11 = a
            .view((k, k), (b, b))
            .clone_owned()
            .cholesky()
            .ok_or(Error::NotPositiveDefinite)?
            .unpack();
        a.view_mut((k, k), (b, b)).copy_from(&l11);
        let rest = n - k - b;
        if rest > 0 {
            let a21t = a.view((k + b, k), (rest, b)).transpose();
            let l21t = l11.solve_lower_triangular(&a21t).ok_or(Error::NotPositiveDefinite)?;
            let l21 = l21t.transpose();
            a.view_mut((k + b, k), (rest, b)).copy_from(&l21);
            a.view_mut((k + b, k + b), (rest, rest)).gemm(-1.0, &l21, &l21t, 1.0);
        }
        k += b;
    }
    a.fill_upper_triangle(0.0, 1);
    Ok(a)
}

/// Solves `L Lᵀ x = b` given the factor `L`.
pub(crate) fn cholesky_solve(l: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let z = l.solve_lower_triangular(b).expect("factor has a positive diagonal");
    l.tr_solve_lower_triangular(&z).expect("factor has a positive diagonal")
}
