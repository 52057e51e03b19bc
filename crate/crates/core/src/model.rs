//! Model constants, lattice geometry and wavevectors.
//!
//! Natural units fix hbar = c = grid spacing = time step = 1, so the
//! dimensionless mass `epsilon` in [0, 1] is the only physical knob and
//! wavevector components live in [-pi, pi).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical parameters of the lattice model.
///
/// `g` and `gprime` are the logarithmic couplings that reproduce the bend
/// and unbend weights, exp(-2 g) = -i epsilon and
/// exp(-2 g') = sqrt(1 - epsilon^2). They are undefined at epsilon = 0 and
/// epsilon = 1 respectively and only used for consistency tests; production
/// weights use the closed forms directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    epsilon: f64,
    charge: f64,
    g: Option<Complex64>,
    gprime: Option<Complex64>,
}

impl ModelParams {
    pub fn new(epsilon: f64, charge: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) || !epsilon.is_finite() {
            return Err(Error::domain("epsilon", epsilon, "[0, 1]"));
        }
        if !charge.is_finite() {
            return Err(Error::domain("charge", charge, "finite reals"));
        }
        let g = (epsilon > 0.0).then(|| -0.5 * Complex64::new(0.0, -epsilon).ln());
        let gprime = (epsilon < 1.0)
            .then(|| -0.5 * Complex64::new((1.0 - epsilon * epsilon).sqrt(), 0.0).ln());
        Ok(ModelParams {
            epsilon,
            charge,
            g,
            gprime,
        })
    }

    /// Dimensionless mass, epsilon = m c l / hbar.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Coupling e; potentials enter every formula only through e * A.
    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn g(&self) -> Option<Complex64> {
        self.g
    }

    pub fn gprime(&self) -> Option<Complex64> {
        self.gprime
    }

    /// Unbend amplitude sqrt(1 - epsilon^2).
    pub fn unbend_weight(&self) -> f64 {
        (1.0 - self.epsilon * self.epsilon).sqrt()
    }

    /// Bend amplitude -i epsilon.
    pub fn bend_weight(&self) -> Complex64 {
        Complex64::new(0.0, -self.epsilon)
    }
}

/// Spacetime lattice extents: `l` sites per spatial axis (even, so mode
/// indices run -L/2 .. L/2-1) and `t` time steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    dims: u8,
    l: usize,
    t: usize,
}

impl LatticeSpec {
    pub fn new(dims: u8, l: usize, t: usize) -> Result<Self> {
        if dims != 1 && dims != 3 {
            return Err(Error::domain("dims", dims, "{1, 3}"));
        }
        if l == 0 || !l.is_multiple_of(2) {
            return Err(Error::domain("l", l, "even positive integers"));
        }
        if t == 0 {
            return Err(Error::domain("t", t, "positive integers"));
        }
        Ok(LatticeSpec { dims, l, t })
    }

    pub fn dims(&self) -> u8 {
        self.dims
    }

    pub fn extent(&self) -> usize {
        self.l
    }

    pub fn time_extent(&self) -> usize {
        self.t
    }

    /// Total number of spatial sites.
    pub fn sites(&self) -> usize {
        match self.dims {
            1 => self.l,
            _ => self.l * self.l * self.l,
        }
    }

    /// Signed mode index for a raster position along one axis, in
    /// [-L/2, L/2) with the usual FFT frequency layout.
    pub fn mode_index(&self, raster: usize) -> i64 {
        let l = self.l as i64;
        let r = raster as i64;
        if r < l / 2 {
            r
        } else {
            r - l
        }
    }
}

/// Quantized lattice wave 4-vector, stored as integer mode indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WaveVector4 {
    pub n_t: i64,
    pub n_x: i64,
    pub n_y: i64,
    pub n_z: i64,
    t: usize,
    l: usize,
}

impl WaveVector4 {
    pub fn new(n_t: i64, n_x: i64, n_y: i64, n_z: i64, lattice: &LatticeSpec) -> Result<Self> {
        let t = lattice.time_extent() as i64;
        let l = lattice.extent() as i64;
        if n_t < -t / 2 || n_t >= t / 2 + t % 2 {
            return Err(Error::domain("n_t", n_t, "[-T/2, T/2)"));
        }
        for (name, n) in [("n_x", n_x), ("n_y", n_y), ("n_z", n_z)] {
            if n < -l / 2 || n >= l / 2 {
                return Err(Error::domain(name, n, "[-L/2, L/2)"));
            }
        }
        Ok(WaveVector4 {
            n_t,
            n_x,
            n_y,
            n_z,
            t: lattice.time_extent(),
            l: lattice.extent(),
        })
    }

    /// Time component k^0 = 2 pi n_t / T.
    pub fn k0(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.n_t as f64 / self.t as f64
    }

    /// Spatial components, each in [-pi, pi).
    pub fn spatial(&self) -> [f64; 3] {
        let f = 2.0 * std::f64::consts::PI / self.l as f64;
        [
            f * self.n_x as f64,
            f * self.n_y as f64,
            f * self.n_z as f64,
        ]
    }
}

/// Background four-potential, pre-multiplied by the coupling so components
/// are in wavevector units. The uniform case is a distinct variant because
/// only uniform potentials admit an exact per-mode momentum shift.
#[derive(Debug, Clone, PartialEq)]
pub enum FourPotential {
    Uniform { a0: f64, a: [f64; 3] },
    PerSite { a0: Vec<f64>, a: Vec<[f64; 3]> },
}

impl FourPotential {
    pub fn zero() -> Self {
        FourPotential::Uniform {
            a0: 0.0,
            a: [0.0; 3],
        }
    }

    pub fn uniform(a0: f64, a: [f64; 3]) -> Result<Self> {
        if !a0.is_finite() || a.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("potential", "non-finite", "finite reals"));
        }
        Ok(FourPotential::Uniform { a0, a })
    }

    pub fn per_site(a0: Vec<f64>, a: Vec<[f64; 3]>) -> Result<Self> {
        if a0.len() != a.len() {
            return Err(Error::domain(
                "potential",
                format!("{} scalar vs {} vector sites", a0.len(), a.len()),
                "equal site counts",
            ));
        }
        if a0.iter().any(|v| !v.is_finite()) || a.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::domain("potential", "non-finite", "finite reals"));
        }
        Ok(FourPotential::PerSite { a0, a })
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, FourPotential::Uniform { .. })
    }

    /// Spatial mean of e*A, used by the documented first-order splitting for
    /// spatially varying vector potentials.
    pub fn mean(&self) -> (f64, [f64; 3]) {
        match self {
            FourPotential::Uniform { a0, a } => (*a0, *a),
            FourPotential::PerSite { a0, a } => {
                let n = a0.len().max(1) as f64;
                let m0 = a0.iter().sum::<f64>() / n;
                let mut m = [0.0; 3];
                for v in a {
                    for (mi, vi) in m.iter_mut().zip(v) {
                        *mi += vi / n;
                    }
                }
                (m0, m)
            }
        }
    }
}

/// A potential-shifted wavevector k' = k - e A, no longer quantized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedWaveVector {
    pub k0: f64,
    pub spatial: [f64; 3],
}

impl ShiftedWaveVector {
    pub fn from_spatial(spatial: [f64; 3]) -> Self {
        ShiftedWaveVector { k0: 0.0, spatial }
    }

    pub fn magnitude(&self) -> f64 {
        let [x, y, z] = self.spatial;
        (x * x + y * y + z * z).sqrt()
    }

    /// Unit spatial direction; falls back to +z at zero magnitude, where
    /// every consumer is direction-independent.
    pub fn direction(&self) -> [f64; 3] {
        let m = self.magnitude();
        if m == 0.0 {
            [0.0, 0.0, 1.0]
        } else {
            [
                self.spatial[0] / m,
                self.spatial[1] / m,
                self.spatial[2] / m,
            ]
        }
    }
}

/// k' = k - e A for a uniform potential. Spatially varying potentials are
/// rejected; those are handled as local phases in the field evolution.
pub fn shifted_wavevector(
    k: &WaveVector4,
    a: &FourPotential,
    _params: &ModelParams,
) -> Result<ShiftedWaveVector> {
    match a {
        FourPotential::Uniform { a0, a } => {
            let sp = k.spatial();
            Ok(ShiftedWaveVector {
                k0: k.k0() - a0,
                spatial: [sp[0] - a[0], sp[1] - a[1], sp[2] - a[2]],
            })
        }
        FourPotential::PerSite { .. } => Err(Error::NonUniformPotential),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(eps: f64) -> ModelParams {
        ModelParams::new(eps, 1.0).unwrap()
    }

    #[test]
    fn epsilon_domain_enforced() {
        assert!(ModelParams::new(-0.1, 0.0).is_err());
        assert!(ModelParams::new(1.5, 0.0).is_err());
        assert!(ModelParams::new(0.0, 0.0).is_ok());
        assert!(ModelParams::new(1.0, 0.0).is_ok());
    }

    #[test]
    fn log_couplings_reconstruct_weights() {
        for eps in [0.1, 0.5, 0.9, 0.999] {
            let p = params(eps);
            let g = p.g().unwrap();
            let gp = p.gprime().unwrap();
            let bend = (-2.0 * g).exp();
            let unbend = (-2.0 * gp).exp();
            assert!((bend - Complex64::new(0.0, -eps)).norm() < 1e-14);
            assert!((unbend - Complex64::new(p.unbend_weight(), 0.0)).norm() < 1e-14);
        }
        assert!(params(0.0).g().is_none());
        assert!(params(1.0).gprime().is_none());
    }

    #[test]
    fn lattice_requires_even_extent() {
        assert!(LatticeSpec::new(1, 7, 4).is_err());
        assert!(LatticeSpec::new(2, 8, 4).is_err());
        assert!(LatticeSpec::new(3, 8, 4).is_ok());
    }

    #[test]
    fn wavevector_components_in_zone() {
        let lat = LatticeSpec::new(1, 8, 8).unwrap();
        let k = WaveVector4::new(0, -4, 0, 3, &lat).unwrap();
        let sp = k.spatial();
        assert!((sp[0] + PI).abs() < 1e-15);
        assert!((sp[2] - 3.0 * PI / 4.0).abs() < 1e-15);
        assert!(WaveVector4::new(0, 4, 0, 0, &lat).is_err());
    }

    #[test]
    fn zero_potential_is_identity_shift() {
        let lat = LatticeSpec::new(1, 8, 8).unwrap();
        let k = WaveVector4::new(0, 0, 0, 2, &lat).unwrap();
        let kp = shifted_wavevector(&k, &FourPotential::zero(), &params(0.5)).unwrap();
        assert_eq!(kp.spatial, k.spatial());
        assert_eq!(kp.k0, k.k0());
    }

    #[test]
    fn exact_cancellation() {
        let lat = LatticeSpec::new(1, 8, 8).unwrap();
        let k = WaveVector4::new(0, 0, 0, 2, &lat).unwrap(); // k_z = pi/2
        let a = FourPotential::uniform(0.0, [0.0, 0.0, PI / 2.0]).unwrap();
        let kp = shifted_wavevector(&k, &a, &params(0.5)).unwrap();
        assert!(kp.magnitude() < 1e-15);
    }

    #[test]
    fn componentwise_subtraction() {
        // independently computed: (pi/4 - 0.1, -0.2, -0.3)
        let lat = LatticeSpec::new(3, 8, 8).unwrap();
        let k = WaveVector4::new(0, 1, 0, 0, &lat).unwrap(); // k_x = pi/4
        let a = FourPotential::uniform(0.0, [0.1, 0.2, 0.3]).unwrap();
        let kp = shifted_wavevector(&k, &a, &params(0.5)).unwrap();
        assert!((kp.spatial[0] - (PI / 4.0 - 0.1)).abs() < 1e-15);
        assert!((kp.spatial[1] + 0.2).abs() < 1e-15);
        assert!((kp.spatial[2] + 0.3).abs() < 1e-15);
    }

    #[test]
    fn per_site_potential_rejected() {
        let lat = LatticeSpec::new(1, 8, 8).unwrap();
        let k = WaveVector4::new(0, 0, 0, 0, &lat).unwrap();
        let a = FourPotential::per_site(vec![0.0; 8], vec![[0.0; 3]; 8]).unwrap();
        assert!(matches!(
            shifted_wavevector(&k, &a, &params(0.5)),
            Err(Error::NonUniformPotential)
        ));
    }
}
