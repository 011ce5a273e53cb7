//! Cyclic Jacobi eigenvalues for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary on column/row `q`, then annihilates the now-real pivot with a
//! real plane rotation. Sweeps run over all pivots in row order until the
//! off-diagonal Frobenius norm drops to `OFF_DIAGONAL_TOL`.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Real eigenvalues of a row-major Hermitian `dim × dim` matrix, in
/// descending order.
pub fn eigenvalues_hermitian(dim: usize, entries: &[Complex64]) -> Result<Vec<f64>> {
    if entries.len() != dim * dim {
        return Err(Error::Shape {
            expected: dim * dim,
            actual: entries.len(),
        });
    }
    let scale = entries.iter().map(|e| e.norm()).fold(1.0, f64::max);
    let mut a = entries.to_vec();
    let mut defect = 0.0f64;
    for i in 0..dim {
        for j in i..dim {
            defect = defect.max((a[i * dim + j] - a[j * dim + i].conj()).norm());
        }
    }
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    // symmetrize and drop the imaginary noise on the diagonal
    for i in 0..dim {
        a[i * dim + i] = Complex64::new(a[i * dim + i].re, 0.0);
        for j in i + 1..dim {
            let avg = (a[i * dim + j] + a[j * dim + i].conj()) * 0.5;
            a[i * dim + j] = avg;
            a[j * dim + i] = avg.conj();
        }
    }

    let mut off = off_diagonal_norm(&a, dim);
    let mut sweeps = 0;
    while off > OFF_DIAGONAL_TOL {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..dim {
            for q in p + 1..dim {
                rotate(&mut a, dim, p, q);
            }
        }
        off = off_diagonal_norm(&a, dim);
        sweeps += 1;
    }

    let mut evs: Vec<f64> = (0..dim).map(|i| a[i * dim + i].re).collect();
    evs.sort_by(|x, y| y.total_cmp(x));
    Ok(evs)
}

fn off_diagonal_norm(a: &[Complex64], dim: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                sum += a[i * dim + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut [Complex64], dim: usize, p: usize, q: usize) {
    let apq = a[p * dim + q];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }

    // phase step: scale column q by e^{-iφ} and row q by e^{iφ}
    let phase = apq / r;
    for k in 0..dim {
        a[k * dim + q] *= phase.conj();
        a[q * dim + k] *= phase;
    }

    let app = a[p * dim + p].re;
    let aqq = a[q * dim + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..dim {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * dim + p];
        let akq = a[k * dim + q];
        let new_kp = akp * c - akq * s;
        let new_kq = akp * s + akq * c;
        a[k * dim + p] = new_kp;
        a[k * dim + q] = new_kq;
        a[p * dim + k] = new_kp.conj();
        a[q * dim + k] = new_kq.conj();
    }
    a[p * dim + p] = Complex64::new(app - t * r, 0.0);
    a[q * dim + q] = Complex64::new(aqq + t * r, 0.0);
    a[p * dim + q] = Complex64::new(0.0, 0.0);
    a[q * dim + p] = Complex64::new(0.0, 0.0);
}
