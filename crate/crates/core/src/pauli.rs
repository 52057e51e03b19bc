//! Pauli algebra and small complex-matrix helpers shared by the operator and
//! field modules.
//!
//! Four-component operators act on the chirality (left factor) tensor spin
//! (right factor) space; `kron` builds them from 2x2 blocks.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type M2 = Matrix2<C64>;
pub type M4 = Matrix4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity2() -> M2 {
    M2::identity()
}

pub fn sigma_x() -> M2 {
    M2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> M2 {
    M2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> M2 {
    M2::new(ONE, ZERO, ZERO, -ONE)
}

/// sigma . v for a real 3-vector v.
pub fn sigma_dot(v: [f64; 3]) -> M2 {
    sigma_x() * C64::new(v[0], 0.0)
        + sigma_y() * C64::new(v[1], 0.0)
        + sigma_z() * C64::new(v[2], 0.0)
}

/// Kronecker product of 2x2 blocks, left factor = chirality, right = spin.
pub fn kron(a: &M2, b: &M2) -> M4 {
    let mut out = M4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Largest entrywise modulus, the max-norm used by every operator contract.
pub fn max_abs(m: &M4) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs2(m: &M2) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// ||M^dagger M - I||_max; zero for a unitary matrix.
pub fn unitarity_defect(m: &M4) -> f64 {
    max_abs(&(m.adjoint() * m - M4::identity()))
}

/// ||M - M^dagger||_max; zero for a Hermitian matrix.
pub fn hermiticity_defect(m: &M4) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Deterministic pairwise-tree sum; the reduction order is fixed by the
/// input order, so results are bit-reproducible regardless of parallelism
/// in the producing map.
pub fn pairwise_sum(values: &[C64]) -> C64 {
    match values.len() {
        0 => ZERO,
        1 => values[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}
