//! Cyclic Jacobi eigensolver for small dense symmetric matrices.
//!
//! Each rotation annihilates one off-diagonal pair; sweeps visit every pair
//! in row order until the off-diagonal Frobenius norm drops below
//! `OFF_DIAGONAL_TOLERANCE` relative to the matrix norm.

use crate::error::{Error, Result};

pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-12;
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

/// Eigenpairs sorted by descending eigenvalue. Column `k` of `vectors` is the
/// unit eigenvector for `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[f64; N]; N],
    pub sweeps: usize,
}

impl<const N: usize> SymmetricEigen<N> {
    pub fn vector(&self, k: usize) -> [f64; N] {
        std::array::from_fn(|i| self.vectors[i][k])
    }

    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> [[f64; N]; N] {
        let mut out = [[0.0; N]; N];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..N)
                    .map(|k| self.vectors[i][k] * self.values[k] * self.vectors[j][k])
                    .sum();
            }
        }
        out
    }
}

fn frobenius<const N: usize>(a: &[[f64; N]; N]) -> (f64, f64) {
    let mut total = 0.0;
    let mut off = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            total += v * v;
            if i != j {
                off += v * v;
            }
        }
    }
    (total.sqrt(), off.sqrt())
}

pub fn jacobi_eigh<const N: usize>(s: &[[f64; N]; N]) -> Result<SymmetricEigen<N>> {
    let scale = s.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut asym = 0.0f64;
    for i in 0..N {
        for j in 0..i {
            asym = asym.max((s[i][j] - s[j][i]).abs());
        }
    }
    if asym > SYMMETRY_TOLERANCE * scale.max(1.0) || !scale.is_finite() {
        return Err(Error::NotSymmetric(asym));
    }

    let mut a = *s;
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let (norm, _) = frobenius(&a);
    let tol = OFF_DIAGONAL_TOLERANCE * norm;
    let mut sweeps = 0;
    loop {
        let (_, off) = frobenius(&a);
        if off <= tol {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] != 0.0 {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&x, &y| a[y][y].total_cmp(&a[x][x]));
    let values = std::array::from_fn(|k| a[order[k]][order[k]]);
    let vectors = std::array::from_fn(|i| std::array::from_fn(|k| v[i][order[k]]));
    Ok(SymmetricEigen { values, vectors, sweeps })
}

/// Applies `Jᵀ A J` with the rotation that zeroes `a[p][q]`, and accumulates
/// `V J`.
fn rotate<const N: usize>(a: &mut [[f64; N]; N], v: &mut [[f64; N]; N], p: usize, q: usize) {
    let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    // tau == 0 gives signum 1, i.e. a 45 degree rotation
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    for row in a.iter_mut() {
        let (kp, kq) = (row[p], row[q]);
        row[p] = c * kp - s * kq;
        row[q] = s * kp + c * kq;
    }
    for k in 0..N {
        let (pk, qk) = (a[p][k], a[q][k]);
        a[p][k] = c * pk - s * qk;
        a[q][k] = s * pk + c * qk;
    }
    a[p][q] = 0.0;
    a[q][p] = 0.0;
    for row in v.iter_mut() {
        let (kp, kq) = (row[p], row[q]);
        row[p] = c * kp - s * kq;
        row[q] = s * kp + c * kq;
    }
}
