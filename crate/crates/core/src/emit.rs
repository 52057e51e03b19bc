//! Deterministic output emission: CSV tables with a fixed float format and
//! the binary field-snapshot codec.
//!
//! Every CSV is UTF-8 with a header row, comma separators and floats
//! printed with 17 significant digits, so identical inputs yield
//! byte-identical files.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex64;

use crate::analysis::{DilationCurve, SchwarzschildRow};
use crate::error::{Error, Result};
use crate::field::{ObservableSeries, SpinorField};
use crate::model::LatticeSpec;
use crate::modes::DispersionPoint;
use crate::path::Displacement;
use crate::spin::BendCount;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn displacement_header(dims: u8) -> &'static str {
    if dims == 1 {
        "dx"
    } else {
        "mx,my,mz"
    }
}

fn displacement_cells(d: &Displacement) -> String {
    match d {
        Displacement::Dx(dx) => dx.to_string(),
        Displacement::M3(m) => format!("{},{},{}", m[0], m[1], m[2]),
    }
}

/// Bend-count table (N, displacement..., R, phi).
pub fn phi_table_csv(rows: &[(usize, Displacement, BTreeMap<BendCount, u64>)], dims: u8) -> String {
    let mut out = format!("n,{},r,phi\n", displacement_header(dims));
    for (n, disp, hist) in rows {
        for (r, count) in hist {
            out.push_str(&format!(
                "{},{},{},{}\n",
                n,
                displacement_cells(disp),
                fmt_f64(r.as_f64()),
                count
            ));
        }
    }
    out
}

/// Kernel table (N, displacement..., epsilon, re, im).
pub fn kernel_table_csv(rows: &[(usize, Displacement, f64, Complex64)], dims: u8) -> String {
    let mut out = format!("n,{},epsilon,re,im\n", displacement_header(dims));
    for (n, disp, eps, k) in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            n,
            displacement_cells(disp),
            fmt_f64(*eps),
            fmt_f64(k.re),
            fmt_f64(k.im)
        ));
    }
    out
}

/// Dilation table (x, zeta, r, t_r).
pub fn dilation_csv(curve: &DilationCurve) -> String {
    let mut out = String::from("x,zeta,r,t_r\n");
    for row in &curve.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(row.x),
            fmt_f64(row.zeta),
            fmt_f64(row.r),
            fmt_f64(row.t_r)
        ));
    }
    out
}

/// Schwarzschild comparison table (x, zeta, lhs, rhs, residual).
pub fn schwarzschild_csv(rows: &[SchwarzschildRow]) -> String {
    let mut out = String::from("x,zeta,lhs,rhs,residual\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(r.x),
            fmt_f64(r.zeta),
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.residual)
        ));
    }
    out
}

/// Fit summary table (label, order, fit_residual).
pub fn fits_csv(rows: &[(String, f64, f64)]) -> String {
    let mut out = String::from("label,order,fit_residual\n");
    for (label, order, resid) in rows {
        out.push_str(&format!(
            "{label},{},{}\n",
            fmt_f64(*order),
            fmt_f64(*resid)
        ));
    }
    out
}

/// Dispersion table (k_mag, phi, e_continuum, rel_err).
pub fn dispersion_csv(points: &[DispersionPoint]) -> String {
    let mut out = String::from("k_mag,phi,e_continuum,rel_err\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(p.k_mag),
            fmt_f64(p.phi),
            fmt_f64(p.e_continuum),
            fmt_f64(p.rel_err())
        ));
    }
    out
}

/// Generator residual table (k_mag, epsilon, residual).
pub fn generator_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("k_mag,epsilon,residual\n");
    for (k, eps, r) in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(*k),
            fmt_f64(*eps),
            fmt_f64(*r)
        ));
    }
    out
}

/// Per-mode diagnostics (nx, ny, nz, k_mag, phi, unitarity_defect,
/// factorization_defect).
pub fn modes_csv(rows: &[([i64; 3], f64, f64, f64, f64)]) -> String {
    let mut out = String::from("nx,ny,nz,k_mag,phi,unitarity_defect,factorization_defect\n");
    for (n, k, phi, ud, fd) in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            n[0],
            n[1],
            n[2],
            fmt_f64(*k),
            fmt_f64(*phi),
            fmt_f64(*ud),
            fmt_f64(*fd)
        ));
    }
    out
}

/// Observable series (step, norm, x, y, z, kx, ky, kz, energy, pop0..pop3).
pub fn observables_csv(series: &ObservableSeries) -> String {
    let mut out = String::from("step,norm,x,y,z,kx,ky,kz,energy,pop0,pop1,pop2,pop3\n");
    for r in &series.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.step,
            fmt_f64(r.norm),
            fmt_f64(r.position[0]),
            fmt_f64(r.position[1]),
            fmt_f64(r.position[2]),
            fmt_f64(r.momentum[0]),
            fmt_f64(r.momentum[1]),
            fmt_f64(r.momentum[2]),
            fmt_f64(r.energy),
            fmt_f64(r.populations[0]),
            fmt_f64(r.populations[1]),
            fmt_f64(r.populations[2]),
            fmt_f64(r.populations[3])
        ));
    }
    out
}

/// Snapshot header magic.
pub const SNAPSHOT_MAGIC: &[u8; 4] = b"DQLG";
pub const SNAPSHOT_VERSION: u32 = 1;

/// Serialize a field snapshot: a 32-byte little-endian header
/// (magic "DQLG", version u32, dims u32, L u32, T u32, pad u32, epsilon f64)
/// followed by interleaved (re, im) f64 pairs, site-major then
/// spinor-component.
pub fn snapshot_bytes(field: &SpinorField, epsilon: f64) -> Vec<u8> {
    let lat = field.lattice();
    let sites = lat.sites();
    let mut out = Vec::with_capacity(32 + sites * 4 * 16);
    out.extend_from_slice(SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.extend_from_slice(&(lat.dims() as u32).to_le_bytes());
    out.extend_from_slice(&(lat.extent() as u32).to_le_bytes());
    out.extend_from_slice(&(lat.time_extent() as u32).to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&epsilon.to_le_bytes());
    for site in 0..sites {
        for c in 0..4 {
            let z = field.components()[c][site];
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

pub fn write_snapshot(path: &std::path::Path, field: &SpinorField, epsilon: f64) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&snapshot_bytes(field, epsilon))?;
    Ok(())
}

/// Parse a snapshot produced by `snapshot_bytes`.
pub fn read_snapshot(path: &std::path::Path) -> Result<(SpinorField, f64)> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    snapshot_from_bytes(&bytes)
}

pub fn snapshot_from_bytes(bytes: &[u8]) -> Result<(SpinorField, f64)> {
    if bytes.len() < 32 || &bytes[0..4] != SNAPSHOT_MAGIC {
        return Err(Error::domain("snapshot", "bad header", "DQLG magic"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != SNAPSHOT_VERSION {
        return Err(Error::domain("snapshot", version, "version 1"));
    }
    let dims = u32_at(8) as u8;
    let l = u32_at(12) as usize;
    let t = u32_at(16) as usize;
    let epsilon = f64::from_le_bytes(bytes[24..32].try_into().unwrap());
    let lat = LatticeSpec::new(dims, l, t)?;
    let sites = lat.sites();
    if bytes.len() != 32 + sites * 4 * 16 {
        return Err(Error::domain(
            "snapshot",
            bytes.len(),
            "header + sites * 4 * 16 bytes",
        ));
    }
    let mut comps: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![Complex64::default(); sites]);
    let mut offset = 32;
    for site in 0..sites {
        for comp in comps.iter_mut() {
            let re = f64::from_le_bytes(bytes[offset..offset + 8].try_into().unwrap());
            let im = f64::from_le_bytes(bytes[offset + 8..offset + 16].try_into().unwrap());
            comp[site] = Complex64::new(re, im);
            offset += 16;
        }
    }
    Ok((SpinorField::from_components(lat, comps)?, epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{init_gaussian, Branch};
    use crate::model::ModelParams;

    #[test]
    fn float_format_round_trips() {
        for x in [1.0, -0.1, std::f64::consts::PI, 1e-300, 6.02214076e23] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn snapshot_round_trip() {
        let lat = LatticeSpec::new(1, 16, 8).unwrap();
        let p = ModelParams::new(0.5, 1.0).unwrap();
        let field = init_gaussian(lat, [0.0, 0.0, 0.3], 3.0, Branch::Unprojected, &p).unwrap();
        let bytes = snapshot_bytes(&field, 0.5);
        assert_eq!(bytes.len(), 32 + 16 * 4 * 16);
        let (back, eps) = snapshot_from_bytes(&bytes).unwrap();
        assert_eq!(eps, 0.5);
        assert_eq!(&back, &field);
    }

    #[test]
    fn snapshot_rejects_corrupt_header() {
        assert!(snapshot_from_bytes(b"nope").is_err());
        let mut bytes = vec![0u8; 64];
        bytes[0..4].copy_from_slice(b"DQLG");
        bytes[4..8].copy_from_slice(&9u32.to_le_bytes());
        assert!(snapshot_from_bytes(&bytes).is_err());
    }
}
