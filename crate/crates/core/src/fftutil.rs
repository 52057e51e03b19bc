//! Unitary discrete Fourier transforms over the spatial lattice, one spinor
//! component at a time. Three-dimensional grids are transformed axis by
//! axis through a strided line buffer.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::model::LatticeSpec;

pub struct SpectralTransform {
    lattice: LatticeSpec,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    line: Vec<Complex64>,
}

impl SpectralTransform {
    pub fn new(lattice: LatticeSpec) -> Self {
        let mut planner = FftPlanner::new();
        let l = lattice.extent();
        SpectralTransform {
            lattice,
            forward: planner.plan_fft_forward(l),
            inverse: planner.plan_fft_inverse(l),
            line: vec![Complex64::default(); l],
        }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    /// In-place forward transform with 1/sqrt(sites) normalization, so the
    /// L2 norm is preserved.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.apply(data, true);
    }

    /// In-place inverse transform with 1/sqrt(sites) normalization.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.apply(data, false);
    }

    fn apply(&mut self, data: &mut [Complex64], fwd: bool) {
        let l = self.lattice.extent();
        debug_assert_eq!(data.len(), self.lattice.sites());
        match self.lattice.dims() {
            1 => {
                let plan = if fwd { &self.forward } else { &self.inverse };
                plan.process(data);
            }
            _ => {
                let plan = if fwd {
                    self.forward.clone()
                } else {
                    self.inverse.clone()
                };
                // axis strides on the x + L y + L^2 z raster
                for (stride, jump) in [(1usize, l), (l, l * l), (l * l, 1)] {
                    for base in line_bases(l, stride, jump) {
                        for (i, slot) in self.line.iter_mut().enumerate() {
                            *slot = data[base + i * stride];
                        }
                        plan.process(&mut self.line);
                        for (i, slot) in self.line.iter().enumerate() {
                            data[base + i * stride] = *slot;
                        }
                    }
                }
            }
        }
        let scale = 1.0 / (self.lattice.sites() as f64).sqrt();
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Start offsets of every lattice line along the axis with the given
/// element stride; `jump` is the stride between consecutive line groups.
fn line_bases(l: usize, stride: usize, jump: usize) -> Vec<usize> {
    let mut bases = Vec::with_capacity(l * l);
    match stride {
        1 => {
            // x-lines: one per (y, z)
            for g in 0..l * l {
                bases.push(g * jump);
            }
        }
        _ if jump > stride => {
            // y-lines: base = x + L^2 z
            for z in 0..l {
                for x in 0..l {
                    bases.push(x + z * jump);
                }
            }
        }
        _ => {
            // z-lines: base = x + L y
            for y in 0..l {
                for x in 0..l {
                    bases.push(x + y * l);
                }
            }
        }
    }
    bases
}
