//! Dense Hermitian eigensolver and connectivity helpers for the Fock oracle.

use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Largest dense block handed to the eigensolver.
pub(crate) const MAX_DENSE_BLOCK: usize = 4096;

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
pub(crate) fn hermitian_eigen(m: MatRef<'_, c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let n = m.nrows();
    if n > MAX_DENSE_BLOCK {
        return Err(Error::BlockTooLarge { dim: n, limit: MAX_DENSE_BLOCK });
    }
    if n == 1 {
        return Ok((vec![m[(0, 0)].re], Mat::from_fn(1, 1, |_, _| c64::new(1.0, 0.0))));
    }
    let evd = m.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Eigendecomposition(n))?;
    let values = evd.S().column_vector().iter().map(|z| z.re).collect();
    Ok((values, evd.U().to_owned()))
}

pub(crate) fn hermitian_eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|(values, _)| values)
}

pub(crate) fn singular_values(m: MatRef<'_, c64>) -> Result<Vec<f64>> {
    let n = m.nrows().max(m.ncols());
    if n > MAX_DENSE_BLOCK {
        return Err(Error::BlockTooLarge { dim: n, limit: MAX_DENSE_BLOCK });
    }
    m.singular_values().map_err(|_| Error::Eigendecomposition(n))
}

/// Disjoint-set forest over `0..n`.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Groups of members, each sorted, ordered by smallest member.
    pub(crate) fn groups(mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let root = self.find(i);
            if slot[root] == usize::MAX {
                slot[root] = out.len();
                out.push(Vec::new());
            }
            out[slot[root]].push(i);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_of_pauli_y() {
        let m = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => c64::new(0.0, -1.0),
            (1, 0) => c64::new(0.0, 1.0),
            _ => c64::new(0.0, 0.0),
        });
        let (values, vectors) = hermitian_eigen(m.as_ref()).unwrap();
        assert!((values[0] + 1.0).abs() < 1e-14 && (values[1] - 1.0).abs() < 1e-14);
        let back = &vectors * Mat::from_fn(2, 2, |i, j| if i == j { c64::new(values[i], 0.0) } else { c64::new(0.0, 0.0) }) * vectors.adjoint();
        for i in 0..2 {
            for j in 0..2 {
                assert!((back[(i, j)] - m[(i, j)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn union_find_groups() {
        let mut uf = UnionFind::new(6);
        uf.union(4, 1);
        uf.union(2, 5);
        uf.union(5, 4);
        assert_eq!(uf.groups(), vec![vec![0], vec![1, 2, 4, 5], vec![3]]);
    }
}
