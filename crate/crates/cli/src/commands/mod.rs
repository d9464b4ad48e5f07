pub mod domains;
pub mod lattice;
pub mod quadric;
pub mod trials;

use nalgebra::DMatrix;

pub(crate) fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}
