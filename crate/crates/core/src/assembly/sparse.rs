use std::io::Write;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::CooMatrix;

pub type CsrMatrix = nalgebra_sparse::CsrMatrix<f64>;

/// Builds a CSR matrix from `(row, col, value)` triplets; duplicates are summed.
pub fn csr_from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> CsrMatrix {
    let mut coo = CooMatrix::new(nrows, ncols);
    for &(r, c, v) in triplets {
        coo.push(r, c, v);
    }
    CsrMatrix::from(&coo)
}

/// Operations on assembled CSR matrices that the solver needs beyond `nalgebra_sparse`.
pub trait CsrExt {
    /// `y = A x`, summing each row in stored column order.
    fn mul_into(&self, x: &[f64], y: &mut [f64]);
    fn mul_vec(&self, x: &DVector<f64>) -> DVector<f64>;
    /// Stored value at `(r, c)`, zero outside the pattern.
    fn value(&self, r: usize, c: usize) -> f64;
    /// Rows and columns selected by index maps (`None` drops the index).
    fn select(&self, row_map: &[Option<usize>], n_rows: usize, col_map: &[Option<usize>], n_cols: usize) -> Self;
    /// `max |A_ij - A_ji|`.
    fn symmetry_defect(&self) -> f64;
    fn to_dense(&self) -> DMatrix<f64>;
    /// Coordinate text format with a `row,col,value` header.
    fn write_coo<W: Write>(&self, out: W) -> std::io::Result<()>;
}

impl CsrExt for CsrMatrix {
    fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols());
        assert_eq!(y.len(), self.nrows());
        let (offsets, cols, vals) = (self.row_offsets(), self.col_indices(), self.values());
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for i in offsets[r]..offsets[r + 1] {
                acc += vals[i] * x[cols[i]];
            }
            *yr = acc;
        }
    }

    fn mul_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.nrows());
        self.mul_into(x.as_slice(), y.as_mut_slice());
        y
    }

    fn value(&self, r: usize, c: usize) -> f64 {
        self.get_entry(r, c).map_or(0.0, |e| e.into_value())
    }

    fn select(&self, row_map: &[Option<usize>], n_rows: usize, col_map: &[Option<usize>], n_cols: usize) -> Self {
        let trip: Vec<_> = self
            .triplet_iter()
            .filter_map(|(r, c, &v)| Some((row_map[r]?, col_map[c]?, v)))
            .collect();
        csr_from_triplets(n_rows, n_cols, &trip)
    }

    fn symmetry_defect(&self) -> f64 {
        self.triplet_iter().map(|(r, c, &v)| (v - self.value(c, r)).abs()).fold(0.0, f64::max)
    }

    fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from(self)
    }

    fn write_coo<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "row,col,value")?;
        for (r, c, v) in self.triplet_iter() {
            writeln!(out, "{r},{c},{v:e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let a = csr_from_triplets(2, 3, &[(1, 2, 1.0), (0, 0, 2.0), (1, 2, 0.5), (0, 1, -1.0)]);
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.value(1, 2), 1.5);
        assert_eq!(a.value(1, 0), 0.0);
        let y = a.mul_vec(&DVector::from_vec(vec![1.0, 2.0, 3.0]));
        assert_eq!(y.as_slice(), &[0.0, 4.5]);
    }

    #[test]
    fn select_submatrix() {
        let a = csr_from_triplets(3, 3, &[(0, 0, 1.0), (0, 2, 2.0), (2, 0, 3.0), (2, 2, 4.0), (1, 1, 9.0)]);
        let keep = [Some(0), None, Some(1)];
        let s = a.select(&keep, 2, &keep, 2);
        assert_eq!(s.to_dense(), DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]));
        assert_eq!(a.symmetry_defect(), 1.0);
    }
}
