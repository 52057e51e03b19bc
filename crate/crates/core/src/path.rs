//! Ground-truth path summation by exhaustive enumeration, bend-count
//! statistics, and the momentum-space transfer-product form of the same
//! kernel.
//!
//! Enumeration is the oracle: weights are attached chain by chain and the
//! total is reduced with a deterministic pairwise tree, so kernels are
//! bit-reproducible. The momentum route computes the identical amplitude
//! from powers of the per-mode transfer matrix and a discrete Fourier sum;
//! the two must agree to machine precision whenever the lattice is wide
//! enough that periodic images of the displacement are unreachable
//! (L > 2N).

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{LatticeSpec, ModelParams};
use crate::pauli::{pairwise_sum, C64, M2, ONE, ZERO};
use crate::spin::{BendConvention, BendCount, Direction, Spin4, SpinChain};

/// Endpoint displacement of a path, in per-axis step units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Displacement {
    Dx(i64),
    M3([i64; 3]),
}

impl Displacement {
    pub fn dims(&self) -> u8 {
        match self {
            Displacement::Dx(_) => 1,
            Displacement::M3(_) => 3,
        }
    }
}

/// Hard bound on 3D enumeration: 8^N configurations.
pub const MAX_BCC_STEPS: usize = 6;
/// Hard bound on 1D enumeration: 2^N configurations.
pub const MAX_AXIS_STEPS: usize = 24;

/// All forward-in-time spin chains of `n` steps whose spatial steps sum to
/// the given displacement.
#[derive(Debug, Clone)]
pub struct PathEnsemble {
    n: usize,
    displacement: Displacement,
    chains: Vec<SpinChain>,
}

impl PathEnsemble {
    pub fn new(n: usize, displacement: Displacement) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n", n, "positive step counts"));
        }
        let chains = match displacement {
            Displacement::Dx(dx) => {
                if n > MAX_AXIS_STEPS {
                    return Err(Error::EnumerationBound {
                        requested: format!("2^{n}"),
                        bound: format!("2^{MAX_AXIS_STEPS}"),
                    });
                }
                enumerate_axis_chains(n, dx)
            }
            Displacement::M3(m) => {
                if n > MAX_BCC_STEPS {
                    return Err(Error::EnumerationBound {
                        requested: format!("8^{n}"),
                        bound: format!("8^{MAX_BCC_STEPS}"),
                    });
                }
                enumerate_bcc_chains(n, m)
            }
        };
        Ok(PathEnsemble {
            n,
            displacement,
            chains,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn displacement(&self) -> Displacement {
        self.displacement
    }

    pub fn chains(&self) -> &[SpinChain] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }
}

fn enumerate_axis_chains(n: usize, dx: i64) -> Vec<SpinChain> {
    let mut out = Vec::new();
    if dx.unsigned_abs() as usize > n || (n as i64 + dx) % 2 != 0 {
        return out;
    }
    for mask in 0..(1u64 << n) {
        let sum: i64 = (0..n)
            .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
            .sum();
        if sum != dx {
            continue;
        }
        let steps = (0..n)
            .map(|i| {
                let sign = if mask >> i & 1 == 1 { 1 } else { -1 };
                Spin4::forward(Direction::axis(sign).unwrap())
            })
            .collect();
        out.push(SpinChain::new(steps).unwrap());
    }
    out
}

fn enumerate_bcc_chains(n: usize, m: [i64; 3]) -> Vec<SpinChain> {
    let mut out = Vec::new();
    for axis_sum in m {
        if axis_sum.unsigned_abs() as usize > n || (n as i64 + axis_sum) % 2 != 0 {
            return out;
        }
    }
    let dirs = Direction::all(3);
    let total = 8u64.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut sums = [0i64; 3];
        let mut steps = Vec::with_capacity(n);
        for _ in 0..n {
            let d = dirs[(c % 8) as usize];
            c /= 8;
            let comps = d.components();
            for (s, comp) in sums.iter_mut().zip(comps) {
                *s += comp as i64;
            }
            steps.push(Spin4::forward(d));
        }
        if sums == m {
            out.push(SpinChain::new(steps).unwrap());
        }
    }
    out
}

/// Path weight (sqrt(1-eps^2))^(N-R) (-i eps)^R with R in sixths, using the
/// principal branch for fractional bcc bend counts and the convention
/// 0^0 = 1 at the edge masses.
pub fn chain_weight(n: usize, bends: BendCount, params: &ModelParams) -> C64 {
    let eps = params.epsilon();
    let r_sixths = bends.sixths();
    let rbar_sixths = 6 * n as u64 - r_sixths;
    if eps == 0.0 {
        return if r_sixths == 0 { ONE } else { ZERO };
    }
    if eps == 1.0 {
        if rbar_sixths != 0 {
            return ZERO;
        }
        // (-i)^N for the all-bend chain
        return Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_2 * n as f64);
    }
    let r = r_sixths as f64 / 6.0;
    let rbar = rbar_sixths as f64 / 6.0;
    let magnitude = eps.powf(r) * params.unbend_weight().powf(rbar);
    Complex64::from_polar(magnitude, -std::f64::consts::FRAC_PI_2 * r)
}

/// Same weight assembled through the logarithmic couplings g, g':
/// exp(sum_w [-g (s.s)_w - g' (2 - (s.s)_w)]). Only defined for
/// epsilon strictly inside (0, 1).
pub fn chain_weight_from_couplings(
    chain: &SpinChain,
    convention: BendConvention,
    params: &ModelParams,
) -> Result<C64> {
    let (g, gp) = match (params.g(), params.gprime()) {
        (Some(g), Some(gp)) => (g, gp),
        _ => {
            return Err(Error::domain(
                "epsilon",
                params.epsilon(),
                "(0, 1) for the log-coupling form",
            ))
        }
    };
    let r = chain.bend_count(convention).sixths() as f64 / 6.0;
    let n = chain.len() as f64;
    // sum of contractions = 2R; sum of (2 - contraction) = 2(N - R)
    let exponent = -g * Complex64::new(2.0 * r, 0.0) - gp * Complex64::new(2.0 * (n - r), 0.0);
    Ok(exponent.exp())
}

/// Histogram of bend counts over an ensemble: Phi(R) keyed by exact sixths.
pub fn bend_histogram(
    n: usize,
    displacement: Displacement,
    convention: BendConvention,
) -> Result<BTreeMap<BendCount, u64>> {
    let ensemble = PathEnsemble::new(n, displacement)?;
    let mut hist = BTreeMap::new();
    for chain in ensemble.chains() {
        *hist.entry(chain.bend_count(convention)).or_insert(0u64) += 1;
    }
    Ok(hist)
}

/// Number of paths with the given bend count.
pub fn phi_count(
    n: usize,
    displacement: Displacement,
    bends: BendCount,
    convention: BendConvention,
) -> Result<u64> {
    Ok(bend_histogram(n, displacement, convention)?
        .get(&bends)
        .copied()
        .unwrap_or(0))
}

/// Kernel amplitude by exhaustive enumeration:
/// sum over chains of (sqrt(1-eps^2))^(N-R) (-i eps)^R.
pub fn kernel_enumeration(
    n: usize,
    displacement: Displacement,
    params: &ModelParams,
    convention: BendConvention,
) -> Result<C64> {
    let ensemble = PathEnsemble::new(n, displacement)?;
    let weights: Vec<C64> = ensemble
        .chains()
        .par_iter()
        .map(|chain| chain_weight(n, chain.bend_count(convention), params))
        .collect();
    Ok(pairwise_sum(&weights))
}

/// One-dimensional per-mode transfer matrix
/// U(k) = sqrt(1-eps^2) e^{i sigma_z k} - i eps sigma_x
/// in the (right-mover, left-mover) basis. Diagonal entries stream with a
/// full step phase; off-diagonal bends carry no phase, matching the
/// symmetric half-link convention under which closed-chain phases telescope
/// to the total displacement.
pub fn transfer_matrix_1d(k: f64, params: &ModelParams) -> M2 {
    let u = params.unbend_weight();
    let b = params.bend_weight();
    let e_plus = Complex64::from_polar(u, k);
    let e_minus = Complex64::from_polar(u, -k);
    M2::new(e_plus, b, b, e_minus)
}

/// Kernel amplitude from the momentum-space transfer product:
/// (1/L) sum_k e^{-i dx k} Tr[U(k)^N].
///
/// The trace matches the closed-chain endpoint convention of the
/// enumeration (paths summed over both start spins, each returning to its
/// start). The global energy phase is dropped, so this is the spatial
/// kernel. Requires 1D and L > 2N so wrap-around images cannot contribute.
pub fn kernel_momentum(
    n: usize,
    displacement: Displacement,
    params: &ModelParams,
    lattice: &LatticeSpec,
) -> Result<C64> {
    let dx = match displacement {
        Displacement::Dx(dx) => dx,
        Displacement::M3(_) => {
            return Err(Error::domain(
                "displacement",
                "3D",
                "1D displacements (momentum form)",
            ))
        }
    };
    if lattice.dims() != 1 {
        return Err(Error::domain("dims", lattice.dims(), "1 (momentum form)"));
    }
    let l = lattice.extent();
    if l <= 2 * n {
        return Err(Error::domain("l", l, "L > 2N (no periodic images)"));
    }
    let terms: Vec<C64> = (0..l)
        .map(|raster| {
            let nk = lattice.mode_index(raster);
            let k = 2.0 * std::f64::consts::PI * nk as f64 / l as f64;
            let u = transfer_matrix_1d(k, params);
            let mut power = M2::identity();
            for _ in 0..n {
                power = u * power;
            }
            let trace = power[(0, 0)] + power[(1, 1)];
            Complex64::from_polar(1.0, -(dx as f64) * k) * trace / l as f64
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Single diagonal sector of the momentum kernel: chains that start and end
/// on the given spin index (0 = right-mover, 1 = left-mover). The sum of
/// both sectors equals `kernel_momentum`.
pub fn kernel_momentum_sector(
    n: usize,
    dx: i64,
    sector: usize,
    params: &ModelParams,
    lattice: &LatticeSpec,
) -> Result<C64> {
    if sector > 1 {
        return Err(Error::domain("sector", sector, "{0, 1}"));
    }
    if lattice.dims() != 1 {
        return Err(Error::domain("dims", lattice.dims(), "1 (momentum form)"));
    }
    let l = lattice.extent();
    if l <= 2 * n {
        return Err(Error::domain("l", l, "L > 2N (no periodic images)"));
    }
    let terms: Vec<C64> = (0..l)
        .map(|raster| {
            let nk = lattice.mode_index(raster);
            let k = 2.0 * std::f64::consts::PI * nk as f64 / l as f64;
            let u = transfer_matrix_1d(k, params);
            let mut power = M2::identity();
            for _ in 0..n {
                power = u * power;
            }
            Complex64::from_polar(1.0, -(dx as f64) * k) * power[(sector, sector)] / l as f64
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// All displacements with a non-empty ensemble for `n` steps.
pub fn reachable_displacements(n: usize, dims: u8) -> Vec<Displacement> {
    let n_i = n as i64;
    match dims {
        1 => (-n_i..=n_i)
            .filter(|dx| (n_i + dx) % 2 == 0)
            .map(Displacement::Dx)
            .collect(),
        _ => {
            let axis: Vec<i64> = (-n_i..=n_i).filter(|m| (n_i + m) % 2 == 0).collect();
            let mut out = Vec::new();
            for &mx in &axis {
                for &my in &axis {
                    for &mz in &axis {
                        out.push(Displacement::M3([mx, my, mz]));
                    }
                }
            }
            out
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Closed-form 1D chain count C(N, (N+dx)/2), zero off-parity.
pub fn axis_chain_count(n: usize, dx: i64) -> u64 {
    let n_i = n as i64;
    if dx.abs() > n_i || (n_i + dx) % 2 != 0 {
        return 0;
    }
    binomial(n as u64, ((n_i + dx) / 2) as u64)
}
