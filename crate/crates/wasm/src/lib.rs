//! Browser bindings for the interactive demo page: dispersion and dilation
//! curves as flat float arrays, plus a steppable 1D wavepacket.
//!
//! Build for the web with
//! `wasm-pack build crates/wasm --target web --out-dir ../../www/pkg`.

use wasm_bindgen::prelude::*;

use dqlg_core::analysis::{dilation_curve, schwarzschild_compare};
use dqlg_core::field::{init_gaussian, Branch, PositionTracker, SpinorField, Stepper};
use dqlg_core::model::{FourPotential, LatticeSpec, ModelParams, ShiftedWaveVector};
use dqlg_core::modes::eigenphase;

/// Lattice dispersion samples as flat rows [k, phi, e_continuum] over
/// k in (0, pi).
#[wasm_bindgen]
pub fn dispersion_series(epsilon: f64, samples: usize) -> Result<Vec<f64>, String> {
    let params = ModelParams::new(epsilon, 1.0).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(samples * 3);
    for i in 0..samples {
        let k = std::f64::consts::PI * (i + 1) as f64 / (samples + 1) as f64;
        let p = eigenphase(&ShiftedWaveVector::from_spatial([0.0, 0.0, k]), &params);
        out.extend_from_slice(&[p.k_mag, p.phi, p.e_continuum]);
    }
    Ok(out)
}

/// Time-scale-factor samples as flat rows [x, zeta] over x in (0, 1].
#[wasm_bindgen]
pub fn dilation_series(samples: usize) -> Result<Vec<f64>, String> {
    let xs: Vec<f64> = (1..=samples).map(|i| i as f64 / samples as f64).collect();
    let curve = dilation_curve(&xs).map_err(|e| e.to_string())?;
    Ok(curve.rows.iter().flat_map(|r| [r.x, r.zeta]).collect())
}

/// Schwarzschild comparison as flat rows [x, lhs, rhs, residual] over
/// x in (0, x_max], x_max <= 1/sqrt(2).
#[wasm_bindgen]
pub fn schwarzschild_series(samples: usize, x_max: f64) -> Result<Vec<f64>, String> {
    let cap = x_max.min(dqlg_core::analysis::SCHWARZSCHILD_X_MAX);
    let xs: Vec<f64> = (1..=samples)
        .map(|i| cap * i as f64 / samples as f64)
        .collect();
    let rows = schwarzschild_compare(&xs).map_err(|e| e.to_string())?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.x, r.lhs, r.rhs, r.residual])
        .collect())
}

/// A steppable 1D wavepacket for the animation panel.
#[wasm_bindgen]
pub struct PacketDemo {
    stepper: Stepper,
    field: SpinorField,
    tracker: PositionTracker,
    step: usize,
    norm: f64,
    mean_z: f64,
    energy: f64,
}

#[wasm_bindgen]
impl PacketDemo {
    /// `l` sites, mass `epsilon`, packet center `k0`, real-space `width`,
    /// optional positive-energy projection, uniform vector potential `ea`
    /// along the axis.
    #[wasm_bindgen(constructor)]
    pub fn new(
        l: usize,
        epsilon: f64,
        k0: f64,
        width: f64,
        positive_branch: bool,
        ea: f64,
    ) -> Result<PacketDemo, String> {
        let err = |e: dqlg_core::Error| e.to_string();
        let lattice = LatticeSpec::new(1, l, 64).map_err(err)?;
        let params = ModelParams::new(epsilon, 1.0).map_err(err)?;
        let branch = if positive_branch {
            Branch::PositiveEnergy
        } else {
            Branch::Unprojected
        };
        let field = init_gaussian(lattice, [0.0, 0.0, k0], width, branch, &params).map_err(err)?;
        let potential = FourPotential::uniform(0.0, [0.0, 0.0, ea]).map_err(err)?;
        let stepper = Stepper::new(lattice, &params, &potential).map_err(err)?;
        let mut demo = PacketDemo {
            stepper,
            field,
            tracker: PositionTracker::new(),
            step: 0,
            norm: 1.0,
            mean_z: 0.0,
            energy: 0.0,
        };
        demo.refresh_observables();
        Ok(demo)
    }

    /// Advance the packet by `n` time steps.
    pub fn advance(&mut self, n: usize) -> Result<(), String> {
        for _ in 0..n {
            self.stepper
                .step(&mut self.field)
                .map_err(|e| e.to_string())?;
            self.step += 1;
        }
        self.refresh_observables();
        Ok(())
    }

    fn refresh_observables(&mut self) {
        let record = self
            .stepper
            .observe(&self.field, self.step, &mut self.tracker);
        self.norm = record.norm;
        self.mean_z = record.position[2];
        self.energy = record.energy;
    }

    /// Probability density per site.
    pub fn density(&self) -> Vec<f64> {
        self.field.density()
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn mean_z(&self) -> f64 {
        self.mean_z
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_rows_are_ordered_triples() {
        let data = dispersion_series(0.5, 32).unwrap();
        assert_eq!(data.len(), 96);
        // phi >= continuum at small k for nonzero mass, both positive
        assert!(data.chunks(3).all(|row| row[1] > 0.0 && row[2] > 0.0));
    }

    #[test]
    fn dilation_rows_monotone() {
        let data = dilation_series(64).unwrap();
        assert_eq!(data.len(), 128);
        let zetas: Vec<f64> = data.chunks(2).map(|r| r[1]).collect();
        assert!(zetas.windows(2).all(|w| w[1] > w[0]));
        assert!((zetas[63] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn schwarzschild_rows_bounded() {
        let data = schwarzschild_series(32, 0.5).unwrap();
        assert_eq!(data.len(), 128);
        for row in data.chunks(4) {
            assert!(row[3].abs() < 0.01);
        }
    }

    #[test]
    fn packet_demo_steps_and_conserves_norm() {
        let mut demo = PacketDemo::new(64, 0.5, 0.5, 6.0, true, 0.0).unwrap();
        let d0 = demo.density();
        assert_eq!(d0.len(), 64);
        demo.advance(20).unwrap();
        assert_eq!(demo.step_index(), 20);
        assert!((demo.norm() - 1.0).abs() < 1e-12);
        // the packet moved
        let z = demo.mean_z();
        assert!(z.is_finite());
        assert!(demo.energy() > 0.4);
    }

    #[test]
    fn packet_demo_rejects_bad_parameters() {
        assert!(PacketDemo::new(64, 1.5, 0.0, 6.0, true, 0.0).is_err());
        assert!(PacketDemo::new(63, 0.5, 0.0, 6.0, true, 0.0).is_err());
    }
}
