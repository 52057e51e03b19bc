//! Light-like spin 4-vectors, spin chains and the Bloch-sphere encoding of
//! a propagation direction.
//!
//! Directions are stored as integer components so that the light-like
//! constraint and all Lorentz contractions are exact rational numbers: in
//! one dimension a step is (0, 0, +-1); in three dimensions the eight
//! body-centered-cubic directions (+-1, +-1, +-1)/sqrt(3).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{sigma_dot, M2};

/// Spatial unit direction with exact integer components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    comps: [i8; 3],
    /// Squared integer norm of `comps`: 1 in 1D, 3 in 3D.
    norm_sq: i8,
}

impl Direction {
    /// 1D step along +-z.
    pub fn axis(sign: i8) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::domain("sign", sign, "{-1, +1}"));
        }
        Ok(Direction {
            comps: [0, 0, sign],
            norm_sq: 1,
        })
    }

    /// 3D body-centered-cubic step with the given component signs.
    pub fn bcc(sx: i8, sy: i8, sz: i8) -> Result<Self> {
        for s in [sx, sy, sz] {
            if s != 1 && s != -1 {
                return Err(Error::domain("sign", s, "{-1, +1}"));
            }
        }
        Ok(Direction {
            comps: [sx, sy, sz],
            norm_sq: 3,
        })
    }

    /// All directions for the given dimensionality, in a fixed order.
    pub fn all(dims: u8) -> Vec<Direction> {
        match dims {
            1 => vec![Direction::axis(1).unwrap(), Direction::axis(-1).unwrap()],
            _ => {
                let mut out = Vec::with_capacity(8);
                for sx in [-1i8, 1] {
                    for sy in [-1i8, 1] {
                        for sz in [-1i8, 1] {
                            out.push(Direction::bcc(sx, sy, sz).unwrap());
                        }
                    }
                }
                out
            }
        }
    }

    pub fn components(&self) -> [i8; 3] {
        self.comps
    }

    /// Unit 3-vector as floats.
    pub fn unit(&self) -> [f64; 3] {
        let n = (self.norm_sq as f64).sqrt();
        [
            self.comps[0] as f64 / n,
            self.comps[1] as f64 / n,
            self.comps[2] as f64 / n,
        ]
    }

    /// Integer dot product of raw components (divide by norm_sq for the
    /// unit-vector dot product).
    pub fn dot_int(&self, other: &Direction) -> i32 {
        self.comps
            .iter()
            .zip(other.comps.iter())
            .map(|(a, b)| *a as i32 * *b as i32)
            .sum()
    }
}

/// Light-like spin 4-vector s^mu = (s0, s), with s0^2 = |s|^2 = 1 exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin4 {
    pub s0: i8,
    pub dir: Direction,
}

impl Spin4 {
    pub fn new(s0: i8, dir: Direction) -> Result<Self> {
        if s0 != 1 && s0 != -1 {
            return Err(Error::domain("s0", s0, "{-1, +1}"));
        }
        Ok(Spin4 { s0, dir })
    }

    pub fn forward(dir: Direction) -> Self {
        Spin4 { s0: 1, dir }
    }

    /// Lorentz contraction s^mu s'_mu in units of 1/norm_sq, returned as an
    /// exact numerator over 3 (both 1D and 3D normalize to thirds).
    ///
    /// Values per adjacent pair: 0 for an unbent segment, 6/3 = 2 for a full
    /// reversal, and 2/3 or 4/3 for partial bcc bends.
    pub fn contract_thirds(&self, other: &Spin4) -> i32 {
        let n = self.dir.norm_sq as i32;
        debug_assert_eq!(n, other.dir.norm_sq as i32);
        // s0 s0' - s.s' with the spatial dot in units of 1/n, scaled to /3.
        (self.s0 as i32 * other.s0 as i32 * n - self.dir.dot_int(&other.dir)) * 3 / n
    }
}

/// Bend count R as an exact rational in sixths.
///
/// For 1D chains every adjacent pair contributes 0 or 1 (a geometric
/// corner), so the count is a whole number. For bcc chains a pair that
/// flips f of the three component signs contributes f/3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BendCount {
    sixths: u64,
}

impl BendCount {
    pub fn from_sixths(sixths: u64) -> Self {
        BendCount { sixths }
    }

    pub fn sixths(&self) -> u64 {
        self.sixths
    }

    pub fn as_f64(&self) -> f64 {
        self.sixths as f64 / 6.0
    }

    /// Whole-number value when the count is integral (always in 1D).
    pub fn as_integer(&self) -> Option<u64> {
        self.sixths.is_multiple_of(6).then_some(self.sixths / 6)
    }
}

/// Which links of a chain participate in bend counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BendConvention {
    /// Periodic chains, s_N = s_0: all N links including the wrap.
    Closed,
    /// Interior corners only, as in the older checkerboard literature.
    Open,
}

/// An ordered chain of spin 4-vectors encoding a lattice path; the closure
/// convention identifies s_N with s_0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinChain {
    steps: Vec<Spin4>,
}

impl SpinChain {
    pub fn new(steps: Vec<Spin4>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::domain("steps", 0, "non-empty chains"));
        }
        let n = steps[0].dir.norm_sq;
        if steps.iter().any(|s| s.dir.norm_sq != n) {
            return Err(Error::domain(
                "steps",
                "mixed dimensionality",
                "uniform direction set",
            ));
        }
        Ok(SpinChain { steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Spin4] {
        &self.steps
    }

    /// 4-magnetization: (sum of s0, per-axis sums of raw components). The
    /// spatial part equals the endpoint displacement in per-axis step units.
    pub fn magnetization(&self) -> (i64, [i64; 3]) {
        let mut t = 0i64;
        let mut m = [0i64; 3];
        for s in &self.steps {
            t += s.s0 as i64;
            let c = s.dir.components();
            for (mi, ci) in m.iter_mut().zip(c) {
                *mi += ci as i64;
            }
        }
        (t, m)
    }

    /// Bend count from the Lorentz contraction R = 1/2 sum_w s_w . s_{w+1},
    /// exact in sixths.
    pub fn bend_count(&self, convention: BendConvention) -> BendCount {
        let n = self.steps.len();
        let links = match convention {
            BendConvention::Closed => n,
            BendConvention::Open => n - 1,
        };
        let mut sixths = 0i64;
        for w in 0..links {
            let a = &self.steps[w];
            let b = &self.steps[(w + 1) % n];
            // contribution (1/2) s^mu s'_mu = thirds/2, i.e. sixths.
            sixths += a.contract_thirds(b) as i64;
        }
        debug_assert!(sixths >= 0);
        BendCount::from_sixths(sixths as u64)
    }

    /// Unbend count N - R in sixths.
    pub fn unbend_sixths(&self, convention: BendConvention) -> u64 {
        6 * self.len() as u64 - self.bend_count(convention).sixths()
    }

    /// Geometric corner count: number of component-sign flips across the
    /// counted links, in the same sixths scale as `bend_count`. In 1D a
    /// corner is one full direction reversal (6 sixths); in 3D each flipped
    /// axis contributes 2 sixths.
    pub fn geometric_corner_sixths(&self, convention: BendConvention) -> u64 {
        let n = self.steps.len();
        let links = match convention {
            BendConvention::Closed => n,
            BendConvention::Open => n - 1,
        };
        let per_axis = match self.steps[0].dir.norm_sq {
            1 => 6,
            _ => 2,
        };
        let mut total = 0u64;
        for w in 0..links {
            let a = self.steps[w].dir.components();
            let b = self.steps[(w + 1) % n].dir.components();
            let flips = a
                .iter()
                .zip(b.iter())
                .filter(|(x, y)| x != y && (**x != 0 || **y != 0))
                .count() as u64;
            total += per_axis * flips;
        }
        total
    }
}

/// Bloch amplitudes of the spin-up eigenstate along `direction`
/// (theta, phi spherical angles): (cos(theta/2) e^{-i phi/2},
/// sin(theta/2) e^{i phi/2}).
pub fn qubit_encode(direction: [f64; 3]) -> Result<[Complex64; 2]> {
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::domain("direction", norm, "unit 3-vectors"));
    }
    let theta = direction[2].clamp(-1.0, 1.0).acos();
    let phi = direction[1].atan2(direction[0]);
    let half_phase = Complex64::from_polar(1.0, -phi / 2.0);
    Ok([
        half_phase * (theta / 2.0).cos(),
        half_phase.conj() * (theta / 2.0).sin(),
    ])
}

/// The orthogonal (spin-down) Bloch state for the same direction.
pub fn qubit_encode_orthogonal(direction: [f64; 3]) -> Result<[Complex64; 2]> {
    let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::domain("direction", norm, "unit 3-vectors"));
    }
    let theta = direction[2].clamp(-1.0, 1.0).acos();
    let phi = direction[1].atan2(direction[0]);
    let half_phase = Complex64::from_polar(1.0, -phi / 2.0);
    Ok([
        -half_phase * (theta / 2.0).sin(),
        half_phase.conj() * (theta / 2.0).cos(),
    ])
}

/// Spin operator (1/2) sigma . direction whose eigenstates the Bloch encoding
/// produces (natural units, eigenvalues +-1/2).
pub fn spin_operator(direction: [f64; 3]) -> M2 {
    sigma_dot(direction) * Complex64::new(0.5, 0.0)
}

/// Residual of the contraction identity s'^mu p_mu = s^mu p'_mu for a
/// potential-shifted spin vector, evaluated in spin variables where the
/// mode's 3-momentum and vector potential point along the step direction.
///
/// Checked at both supplied steps; returns the larger residual.
pub fn contraction_identity_check(
    s: &Spin4,
    s_next: &Spin4,
    k: &crate::model::WaveVector4,
    a: &crate::model::FourPotential,
    params: &crate::model::ModelParams,
) -> Result<f64> {
    let (ea0, ea) = match a {
        crate::model::FourPotential::Uniform { a0, a } => (*a0, *a),
        crate::model::FourPotential::PerSite { .. } => return Err(Error::NonUniformPotential),
    };
    let _ = params;
    let k0_mag = k.k0().abs();
    let ksp = k.spatial();
    let k_mag = (ksp[0] * ksp[0] + ksp[1] * ksp[1] + ksp[2] * ksp[2]).sqrt();
    // the spin-variable momentum form divides by both magnitudes
    if k0_mag == 0.0 {
        return Err(Error::domain("k0", 0.0, "nonzero time components"));
    }
    if k_mag == 0.0 {
        return Err(Error::domain("|k|", 0.0, "nonzero spatial magnitude"));
    }
    let ea_mag = (ea[0] * ea[0] + ea[1] * ea[1] + ea[2] * ea[2]).sqrt();

    let residual_for = |spin: &Spin4| -> f64 {
        let u = spin.dir.unit();
        let s0 = spin.s0 as f64;
        // 4-momentum and potential in spin variables: both spatial parts
        // point along the step direction; p0 carries the sign of s0.
        let p = [k_mag * u[0], k_mag * u[1], k_mag * u[2]];
        let p0 = k0_mag * s0;
        let av = [ea_mag * u[0], ea_mag * u[1], ea_mag * u[2]];
        let a0v = ea0 * s0;
        // shifted spin vector; the spatial shift is e|A|/|p| along u.
        let sp0 = s0 - a0v / k0_mag;
        let shift = ea_mag / k_mag;
        let sv = [
            u[0] * (1.0 - shift),
            u[1] * (1.0 - shift),
            u[2] * (1.0 - shift),
        ];
        // left side: s'^mu p_mu
        let lhs = sp0 * p0 - (sv[0] * p[0] + sv[1] * p[1] + sv[2] * p[2]);
        // right side: s^mu p'_mu with p' = p - eA
        let rhs = s0 * (p0 - a0v)
            - (u[0] * (p[0] - av[0]) + u[1] * (p[1] - av[1]) + u[2] * (p[2] - av[2]));
        (lhs - rhs).abs()
    };

    Ok(residual_for(s).max(residual_for(s_next)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FourPotential, LatticeSpec, ModelParams, WaveVector4};
    use crate::pauli::C64;
    use nalgebra::Vector2;

    #[test]
    fn light_like_by_construction() {
        for d in Direction::all(1).into_iter().chain(Direction::all(3)) {
            let s = Spin4::forward(d);
            // s^mu s_mu = s0^2 * n - |comps|^2 = 0 exactly in integers
            let n = s.dir.norm_sq as i32;
            let sq: i32 = s
                .dir
                .components()
                .iter()
                .map(|c| (*c as i32) * (*c as i32))
                .sum();
            assert_eq!((s.s0 as i32) * (s.s0 as i32) * n - sq, 0);
        }
    }

    fn chain_1d(signs: &[i8]) -> SpinChain {
        SpinChain::new(
            signs
                .iter()
                .map(|s| Spin4::forward(Direction::axis(*s).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn straight_path_has_no_bends() {
        let c = chain_1d(&[1, 1, 1, 1]);
        let r = c.bend_count(BendConvention::Closed);
        assert_eq!(r.as_integer(), Some(0));
        assert_eq!(c.unbend_sixths(BendConvention::Closed), 24);
    }

    #[test]
    fn two_step_reversal_counts_wrap() {
        // direct evaluation of (1/2) sum s.s: internal flip + wrap flip
        let c = chain_1d(&[1, -1]);
        assert_eq!(c.bend_count(BendConvention::Closed).as_integer(), Some(2));
        assert_eq!(c.bend_count(BendConvention::Open).as_integer(), Some(1));
    }

    #[test]
    fn three_step_chain_enumerated_comparisons() {
        // (+,+),(+,-),(-,+): two corners under closure
        let c = chain_1d(&[1, 1, -1]);
        assert_eq!(c.bend_count(BendConvention::Closed).as_integer(), Some(2));
    }

    #[test]
    fn geometric_count_matches_contraction() {
        // exhaustive over all 1D chains up to N = 10
        for n in 1..=10usize {
            for mask in 0..(1u32 << n) {
                let signs: Vec<i8> = (0..n)
                    .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
                    .collect();
                let c = chain_1d(&signs);
                for conv in [BendConvention::Closed, BendConvention::Open] {
                    assert_eq!(c.bend_count(conv).sixths(), c.geometric_corner_sixths(conv));
                }
            }
        }
    }

    #[test]
    fn bcc_contraction_in_thirds() {
        let a = Spin4::forward(Direction::bcc(1, 1, 1).unwrap());
        let b = Spin4::forward(Direction::bcc(1, 1, -1).unwrap());
        let c = Spin4::forward(Direction::bcc(-1, -1, -1).unwrap());
        assert_eq!(a.contract_thirds(&a), 0);
        assert_eq!(a.contract_thirds(&b), 2); // one axis flipped: 1/3 bend
        assert_eq!(a.contract_thirds(&c), 6); // full reversal: one bend
        let chain = SpinChain::new(vec![a, b, c]).unwrap();
        assert_eq!(
            chain.bend_count(BendConvention::Closed).sixths(),
            chain.geometric_corner_sixths(BendConvention::Closed)
        );
    }

    #[test]
    fn magnetization_is_displacement() {
        let c = chain_1d(&[1, 1, -1, 1]);
        let (t, m) = c.magnetization();
        assert_eq!(t, 4);
        assert_eq!(m, [0, 0, 2]);
    }

    #[test]
    fn north_pole_encoding() {
        let q = qubit_encode([0.0, 0.0, 1.0]).unwrap();
        assert!((q[0].norm() - 1.0).abs() < 1e-15);
        assert!(q[1].norm() < 1e-15);
    }

    #[test]
    fn equator_encoding() {
        let q = qubit_encode([1.0, 0.0, 0.0]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((q[0].norm() - r).abs() < 1e-15);
        assert!((q[1].norm() - r).abs() < 1e-15);
        // up to global phase: relative phase must vanish for phi = 0
        assert!((q[1] / q[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn eigenstate_residuals() {
        // eigen-check oracle at theta = 1.0, phi = 2.0
        let (theta, phi) = (1.0f64, 2.0f64);
        let dir = [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ];
        let plus = qubit_encode(dir).unwrap();
        let minus = qubit_encode_orthogonal(dir).unwrap();
        let s = spin_operator(dir);
        let vp = Vector2::new(plus[0], plus[1]);
        let vm = Vector2::new(minus[0], minus[1]);
        assert!((s * vp - vp * C64::new(0.5, 0.0)).norm() < 1e-12);
        assert!((s * vm + vm * C64::new(0.5, 0.0)).norm() < 1e-12);
        // unit norm and orthogonality
        assert!((vp.norm() - 1.0).abs() < 1e-12);
        assert!((vm.norm() - 1.0).abs() < 1e-12);
        assert!(vp.dotc(&vm).norm() < 1e-12);
    }

    #[test]
    fn contraction_identity_zero_potential() {
        let lat = LatticeSpec::new(1, 16, 16).unwrap();
        let k = WaveVector4::new(2, 0, 0, 3, &lat).unwrap();
        let p = ModelParams::new(0.5, 1.0).unwrap();
        let s = Spin4::forward(Direction::axis(1).unwrap());
        let s2 = Spin4::forward(Direction::axis(-1).unwrap());
        let r = contraction_identity_check(&s, &s2, &k, &FourPotential::zero(), &p).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn contraction_identity_generic_potential() {
        let lat = LatticeSpec::new(3, 16, 16).unwrap();
        let k = WaveVector4::new(3, 1, -2, 3, &lat).unwrap();
        let p = ModelParams::new(0.7, 1.0).unwrap();
        let a = FourPotential::uniform(0.37, [0.11, -0.23, 0.05]).unwrap();
        let s = Spin4::forward(Direction::bcc(1, -1, 1).unwrap());
        let s2 = Spin4::forward(Direction::bcc(-1, -1, 1).unwrap());
        let r = contraction_identity_check(&s, &s2, &k, &a, &p).unwrap();
        assert!(r < 1e-12, "residual {r}");
    }
}
