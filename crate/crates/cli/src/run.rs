//! Experiment dispatch and reproducible output emission.
//!
//! Every run computes its outputs in memory, writes them under the output
//! directory, and finishes with `manifest.json` listing each file with its
//! SHA-256 digest. Failures still write a manifest (status "failed") so a
//! partially written directory is never mistaken for a good run. Identical
//! configurations produce byte-identical outputs and manifests.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use dqlg_core::analysis::{dilation_curve, fit_order, schwarzschild_compare};
use dqlg_core::emit;
use dqlg_core::field::{evolve, gaussian_tail_mass, init_gaussian, Branch};
use dqlg_core::model::{FourPotential, LatticeSpec, ModelParams, ShiftedWaveVector};
use dqlg_core::modes::{
    collide_op, eigenphase, generator_residual, stream_op, transfer_matrix, DispersionPoint,
};
use dqlg_core::path::{bend_histogram, kernel_enumeration, reachable_displacements};
use dqlg_core::pauli::{max_abs, unitarity_defect};
use dqlg_core::spin::BendConvention;

use crate::config::{BranchChoice, Command, RunConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Serialize)]
struct ManifestOutput {
    path: String,
    sha256: String,
    bytes: usize,
}

#[derive(Debug, Serialize)]
struct ManifestError {
    code: i32,
    kind: String,
    message: String,
}

#[derive(Debug, Serialize)]
struct Manifest {
    status: &'static str,
    command: String,
    config_sha256: String,
    outputs: Vec<ManifestOutput>,
    error: Option<ManifestError>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Run one experiment; on success every declared output plus the manifest
/// is on disk. Returns the list of emitted file names.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<Vec<String>> {
    std::fs::create_dir_all(out_dir).map_err(CliError::from)?;
    let canonical = config.serialize();
    let config_digest = sha256_hex(canonical.as_bytes());

    let produced = compute_outputs(config);
    let (outputs, run_error) = match produced {
        Ok(outputs) => (outputs, None),
        Err(e) => (Vec::new(), Some(e)),
    };

    let mut entries = Vec::with_capacity(outputs.len());
    let mut write_error: Option<CliError> = None;
    for (name, bytes) in &outputs {
        let path = out_dir.join(name);
        if let Err(e) = std::fs::write(&path, bytes) {
            write_error = Some(CliError::Io(format!("{}: {e}", path.display())));
            break;
        }
        entries.push(ManifestOutput {
            path: name.clone(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
    }

    let failure = run_error.or(write_error);
    let manifest = Manifest {
        status: if failure.is_none() { "ok" } else { "failed" },
        command: config.command.name().to_string(),
        config_sha256: config_digest,
        outputs: entries,
        error: failure.as_ref().map(|e| ManifestError {
            code: e.exit_code(),
            kind: e.kind().to_string(),
            message: e.to_string(),
        }),
    };
    let manifest_json =
        serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(out_dir.join("manifest.json"), manifest_json.as_bytes())
        .map_err(CliError::from)?;

    match failure {
        Some(e) => Err(e),
        None => {
            let mut names: Vec<String> = outputs.into_iter().map(|(n, _)| n).collect();
            names.push("manifest.json".into());
            Ok(names)
        }
    }
}

fn compute_outputs(config: &RunConfig) -> Result<Vec<(String, Vec<u8>)>> {
    match config.command {
        Command::Oracle => oracle_outputs(config),
        Command::Modes => modes_outputs(config),
        Command::Dilation => dilation_outputs(config),
        Command::Evolve => evolve_outputs(config),
        Command::Dispersion => dispersion_outputs(config),
        Command::Generator => generator_outputs(config),
    }
}

fn params_of(config: &RunConfig) -> Result<ModelParams> {
    ModelParams::new(config.epsilon, 1.0).map_err(CliError::from)
}

fn oracle_outputs(config: &RunConfig) -> Result<Vec<(String, Vec<u8>)>> {
    let params = params_of(config)?;
    let mut phi_rows = Vec::new();
    let mut kernel_rows = Vec::new();
    for n in 1..=config.n {
        for disp in reachable_displacements(n, config.dims) {
            let hist = bend_histogram(n, disp, BendConvention::Closed)?;
            let kernel = kernel_enumeration(n, disp, &params, BendConvention::Closed)?;
            phi_rows.push((n, disp, hist));
            kernel_rows.push((n, disp, config.epsilon, kernel));
        }
    }
    Ok(vec![
        (
            "phi.csv".into(),
            emit::phi_table_csv(&phi_rows, config.dims).into_bytes(),
        ),
        (
            "kernel.csv".into(),
            emit::kernel_table_csv(&kernel_rows, config.dims).into_bytes(),
        ),
    ])
}

fn modes_outputs(config: &RunConfig) -> Result<Vec<(String, Vec<u8>)>> {
    let params = params_of(config)?;
    let lattice = LatticeSpec::new(config.dims, config.l, config.t)?;
    let l = lattice.extent() as i64;
    let mut rows = Vec::new();
    let spatial_indices: Vec<[i64; 3]> = match config.dims {
        1 => (-l / 2..l / 2).map(|nz| [0, 0, nz]).collect(),
        _ => {
            let mut v = Vec::new();
            for nx in -l / 2..l / 2 {
                for ny in -l / 2..l / 2 {
                    for nz in -l / 2..l / 2 {
                        v.push([nx, ny, nz]);
                    }
                }
            }
            v
        }
    };
    let f = 2.0 * std::f64::consts::PI / l as f64;
    for n in spatial_indices {
        let kp = ShiftedWaveVector::from_spatial([
            f * n[0] as f64 - config.ea[0],
            f * n[1] as f64 - config.ea[1],
            f * n[2] as f64 - config.ea[2],
        ]);
        let u = transfer_matrix(&kp, &params);
        let ud = unitarity_defect(&u);
        let fd = max_abs(&(u - stream_op(&kp).matrix * collide_op(&kp, &params).matrix));
        let point = eigenphase(&kp, &params);
        rows.push((n, point.k_mag, point.phi, ud, fd));
    }
    Ok(vec![(
        "modes.csv".into(),
        emit::modes_csv(&rows).into_bytes(),
    )])
}

fn dilation_outputs(config: &RunConfig) -> Result<Vec<(String, Vec<u8>)>> {
    let xs: Vec<f64> = if config.x_count == 1 {
        vec![config.x_min]
    } else {
        (0..config.x_count)
            .map(|i| {
                config.x_min
                    + (config.x_max - config.x_min) * i as f64 / (config.x_count - 1) as f64
            })
            .collect()
    };
    let curve = dilation_curve(&xs).map_err(CliError::from)?;
    let mut outputs = vec![(
        "dilation.csv".into(),
        emit::dilation_csv(&curve).into_bytes(),
    )];

    // the correspondence is a small-x statement; compare on that subset
    let small: Vec<f64> = xs.iter().copied().filter(|x| *x <= 0.3).collect();
    if !small.is_empty() {
        let rows = schwarzschild_compare(&small).map_err(CliError::from)?;
        outputs.push((
            "schwarzschild.csv".into(),
            emit::schwarzschild_csv(&rows).into_bytes(),
        ));
        let positive: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.residual.abs() > 0.0)
            .map(|r| (r.x, r.residual.abs()))
            .collect();
        if positive.len() >= 3 {
            let (errs, scales): (Vec<f64>, Vec<f64>) =
                positive.iter().map(|(x, e)| (*e, *x)).unzip();
            let (order, rms) = fit_order(&errs, &scales).map_err(CliError::from)?;
            let fits = vec![("schwarzschild_residual_order".to_string(), order, rms)];
            outputs.push(("fits.csv".into(), emit::fits_csv(&fits).into_bytes()));
        }
    }
    Ok(outputs)
}

fn evolve_outputs(config: &RunConfig) -> Result<Vec<(String, Vec<u8>)>> {
    let params = params_of(config)?;
    let lattice = LatticeSpec::new(config.dims, config.l, config.t)?;
    let potential = match &config.ea_file {
        None => FourPotential::uniform(config.ea0, config.ea).map_err(CliError::from)?,
        Some(path) => load_per_site_potential(path, lattice.sites())?,
    };
    if gaussian_tail_mass(config.width) > 1e-10 {
        eprintln!(
            "warning: packet width {} leaves momentum tail mass {:.3e} beyond the zone",
            config.width,
            gaussian_tail_mass(config.width)
        );
    }
    let branch = match config.branch {
        BranchChoice::PositiveEnergy => Branch::PositiveEnergy,
        BranchChoice::Unprojected => Branch::Unprojected,
    };
    let field = init_gaussian(lattice, config.k0, config.width, branch, &params)?;
    let (final_field, series) = evolve(field, &params, &potential, config.steps)?;
    Ok(vec![
        (
            "observables.csv".into(),
            emit::observables_csv(&series).into_bytes(),
        ),
        (
            "field_final.dqlg".into(),
            emit::snapshot_bytes(&final_field, config.epsilon),
        ),
    ])
}

/// Per-site potential file: CSV with header `site,ea0,eax,eay,eaz` and one
/// row per lattice site in raster order.
fn load_per_site_potential(path: &str, sites: usize) -> Result<FourPotential> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "site,ea0,eax,eay,eaz" => {}
        _ => {
            return Err(CliError::Numeric(format!(
                "{path}: expected header `site,ea0,eax,eay,eaz`"
            )))
        }
    }
    let mut a0 = Vec::with_capacity(sites);
    let mut av = Vec::with_capacity(sites);
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 5 {
            return Err(CliError::Numeric(format!(
                "{path}: row {} has {} cells, expected 5",
                i + 1,
                cells.len()
            )));
        }
        let idx: usize = cells[0]
            .trim()
            .parse()
            .map_err(|_| CliError::Numeric(format!("{path}: bad site index on row {}", i + 1)))?;
        if idx != a0.len() {
            return Err(CliError::Numeric(format!(
                "{path}: site index {idx} out of order on row {}",
                i + 1
            )));
        }
        let val = |j: usize| -> Result<f64> {
            cells[j]
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Numeric(format!("{path}: bad float on row {}", i + 1)))
        };
        a0.push(val(1)?);
        av.push([val(2)?, val(3)?, val(4)?]);
    }
    if a0.len() != sites {
        return Err(CliError::Numeric(format!(
            "{path}: {} rows for {} lattice sites",
            a0.len(),
            sites
        )));
    }
    FourPotential::per_site(a0, av).map_err(CliError::from)
}

fn dispersion_outputs(config: &RunConfig) -> Result<Vec<(String, Vec<u8>)>> {
    let params = params_of(config)?;
    let points: Vec<DispersionPoint> = (1..=config.k_count)
        .map(|i| {
            let k = std::f64::consts::PI * i as f64 / (config.k_count + 1) as f64;
            eigenphase(&ShiftedWaveVector::from_spatial([0.0, 0.0, k]), &params)
        })
        .collect();
    // continuum-limit order: joint refinement of (k, epsilon)
    let mut fits = Vec::new();
    if config.epsilon > 0.0 {
        let k_base = 0.4;
        let scales: Vec<f64> = (0..4).map(|j| 0.5f64.powi(j)).collect();
        let errs: Result<Vec<f64>> = scales
            .iter()
            .map(|h| {
                let p = ModelParams::new(config.epsilon * h, 1.0).map_err(CliError::from)?;
                Ok(
                    eigenphase(&ShiftedWaveVector::from_spatial([0.0, 0.0, k_base * h]), &p)
                        .rel_err(),
                )
            })
            .collect();
        let errs = errs?;
        if errs.iter().all(|e| *e > 0.0) {
            let (order, rms) = fit_order(&errs, &scales).map_err(CliError::from)?;
            fits.push(("dispersion_continuum_order".to_string(), order, rms));
        }
    }
    let mut outputs = vec![(
        "dispersion.csv".into(),
        emit::dispersion_csv(&points).into_bytes(),
    )];
    if !fits.is_empty() {
        outputs.push(("fits.csv".into(), emit::fits_csv(&fits).into_bytes()));
    }
    Ok(outputs)
}

fn generator_outputs(config: &RunConfig) -> Result<Vec<(String, Vec<u8>)>> {
    let params = params_of(config)?;
    let mut rows = Vec::with_capacity(config.k_count + 1);
    for i in 0..=config.k_count {
        let k = config.k_max * i as f64 / config.k_count as f64;
        let kp = ShiftedWaveVector::from_spatial([0.0, 0.0, k]);
        let residual = generator_residual(&kp, &params).map_err(CliError::from)?;
        rows.push((k, config.epsilon, residual));
    }
    Ok(vec![(
        "generator.csv".into(),
        emit::generator_csv(&rows).into_bytes(),
    )])
}
