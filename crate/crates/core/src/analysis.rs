//! Time-dilation curves, the Schwarzschild correspondence, power-law order
//! fitting and oscillation-frequency extraction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ObservableSeries;
use crate::modes::zeta_factor;

/// One row of the dilation table: the scale factor and the smallest
/// observable intervals r = zeta (grid units) and t_r = zeta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationRow {
    pub x: f64,
    pub zeta: f64,
    pub r: f64,
    pub t_r: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DilationCurve {
    pub rows: Vec<DilationRow>,
}

/// Evaluate the scale factor over a grid of x = E' tau / hbar values.
pub fn dilation_curve(xs: &[f64]) -> Result<DilationCurve> {
    let mut rows = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let zeta = zeta_factor(x).map_err(|e| Error::Domain {
            name: "xs",
            value: format!("row {i}: {e}"),
            domain: "(0, 1]",
        })?;
        rows.push(DilationRow {
            x,
            zeta,
            r: zeta,
            t_r: zeta,
        });
    }
    Ok(DilationCurve { rows })
}

/// One row of the Schwarzschild comparison at small x.
///
/// With the sqrt(2) time rescaling applied inside the zeta relation
/// (zeta evaluated at sqrt(2) x) and the acoustic velocity v = c/sqrt(3),
/// the left side zeta * p' (with p' = E' v) and the right side
/// sqrt(1 - 1/zeta) agree up to a cubic-order truncation residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzschildRow {
    pub x: f64,
    pub zeta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl SchwarzschildRow {
    /// Row assembled directly from a scale factor; at zeta = 1 the right
    /// side is exactly zero (the horizon value r = r_s).
    pub fn from_zeta(zeta: f64, lhs: f64) -> Result<Self> {
        if zeta < 1.0 {
            return Err(Error::domain("zeta", zeta, "[1, pi/2]"));
        }
        let rhs = (1.0 - 1.0 / zeta).sqrt();
        Ok(SchwarzschildRow {
            x: 0.0,
            zeta,
            lhs,
            rhs,
            residual: lhs - rhs,
        })
    }
}

/// Upper end of the admissible x range: sqrt(2) x must stay within the
/// domain of the zeta relation.
pub const SCHWARZSCHILD_X_MAX: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Evaluate both sides of the dilation correspondence at small x.
pub fn schwarzschild_compare(xs: &[f64]) -> Result<Vec<SchwarzschildRow>> {
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        if !x.is_finite() || x <= 0.0 || x > SCHWARZSCHILD_X_MAX {
            return Err(Error::domain("x", x, "(0, 1/sqrt(2)]"));
        }
        let zeta = zeta_factor(std::f64::consts::SQRT_2 * x)?;
        // p' = E' v with v = 1/sqrt(3); lhs = zeta p'
        let lhs = zeta * x / 3f64.sqrt();
        let rhs = (1.0 - 1.0 / zeta).sqrt();
        rows.push(SchwarzschildRow {
            x,
            zeta,
            lhs,
            rhs,
            residual: lhs - rhs,
        });
    }
    Ok(rows)
}

/// Least-squares slope of log(error) against log(scale), with the root
/// mean square residual of the linear fit.
pub fn fit_order(errors: &[f64], scales: &[f64]) -> Result<(f64, f64)> {
    if errors.len() != scales.len() || errors.len() < 3 {
        return Err(Error::domain(
            "errors/scales",
            format!("{}/{}", errors.len(), scales.len()),
            "equal lengths >= 3",
        ));
    }
    if errors
        .iter()
        .chain(scales)
        .any(|v| !v.is_finite() || *v <= 0.0)
    {
        return Err(Error::domain(
            "errors/scales",
            "non-positive entry",
            "strictly positive values",
        ));
    }
    let n = errors.len() as f64;
    let xs: Vec<f64> = scales.iter().map(|s| s.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("scales", "all equal", "distinct values"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let d = y - (slope * x + intercept);
            d * d
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok((slope, rms))
}

/// Dominant nonzero angular frequency (radians per step) of the mean
/// z-position, by windowed discrete Fourier analysis with quadratic peak
/// interpolation.
///
/// Errors when the oscillation amplitude is below the detection threshold.
pub fn zitterbewegung_frequency(series: &ObservableSeries) -> Result<f64> {
    const AMPLITUDE_THRESHOLD: f64 = 1e-10;
    let z: Vec<f64> = series.records.iter().map(|r| r.position[2]).collect();
    if z.len() < 64 {
        return Err(Error::domain("series", z.len(), ">= 64 steps"));
    }
    dominant_frequency(&z, AMPLITUDE_THRESHOLD)
}

/// Shared implementation, also used on synthetic signals in tests.
pub fn dominant_frequency(signal: &[f64], amplitude_threshold: f64) -> Result<f64> {
    let m = signal.len();
    // remove a least-squares line so a slow packet drift cannot leak into
    // the low bins and mask the oscillation
    let n = m as f64;
    let mt = (n - 1.0) / 2.0;
    let my = signal.iter().sum::<f64>() / n;
    let sxx: f64 = (0..m).map(|t| (t as f64 - mt) * (t as f64 - mt)).sum();
    let sxy: f64 = signal
        .iter()
        .enumerate()
        .map(|(t, v)| (t as f64 - mt) * (v - my))
        .sum();
    let slope = sxy / sxx;
    // Hann window against leakage from non-integer cycle counts
    let windowed: Vec<Complex64> = signal
        .iter()
        .enumerate()
        .map(|(t, v)| {
            let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * t as f64 / m as f64).cos();
            let detrended = v - my - slope * (t as f64 - mt);
            Complex64::new(detrended * w, 0.0)
        })
        .collect();
    let mut buf = windowed;
    let mut planner = rustfft::FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    // window amplitude normalization: sum of Hann coefficients = m/2
    let norm = m as f64 / 2.0;
    let mags: Vec<f64> = buf.iter().map(|z| z.norm() / norm * 2.0).collect();
    let half = m / 2;
    let (mut peak_bin, mut peak_val) = (0usize, 0.0f64);
    for (bin, &v) in mags.iter().enumerate().take(half).skip(1) {
        if v > peak_val {
            peak_val = v;
            peak_bin = bin;
        }
    }
    if peak_val < amplitude_threshold {
        return Err(Error::NoPeak {
            threshold: amplitude_threshold,
        });
    }
    // quadratic interpolation on log magnitudes around the peak
    let delta = if peak_bin > 0 && peak_bin + 1 < half {
        let (a, b, c) = (
            mags[peak_bin - 1].max(1e-300).ln(),
            mags[peak_bin].max(1e-300).ln(),
            mags[peak_bin + 1].max(1e-300).ln(),
        );
        let denom = a - 2.0 * b + c;
        if denom.abs() < 1e-300 {
            0.0
        } else {
            (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
        }
    } else {
        0.0
    };
    Ok(2.0 * std::f64::consts::PI * (peak_bin as f64 + delta) / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn dilation_endpoints() {
        let curve = dilation_curve(&[1.0, 0.5, 1e-6]).unwrap();
        assert!((curve.rows[0].zeta - FRAC_PI_2).abs() < 1e-14);
        assert!((curve.rows[1].zeta - FRAC_PI_3).abs() < 1e-14);
        // Taylor remainder: zeta = 1 + x^2/6 + O(x^4)
        assert!(curve.rows[2].zeta - 1.0 < 1e-9);
        assert!(curve.rows[2].zeta >= 1.0);
    }

    #[test]
    fn dilation_rejects_out_of_domain_rows() {
        let err = dilation_curve(&[0.5, 1.5]).unwrap_err();
        assert!(err.to_string().contains("row 1"));
    }

    #[test]
    fn dilation_monotone_and_bounded() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64 / 1000.0).collect();
        let curve = dilation_curve(&xs).unwrap();
        for pair in curve.rows.windows(2) {
            assert!(pair[1].zeta > pair[0].zeta);
        }
        for row in &curve.rows {
            assert!(row.zeta >= 1.0 && row.zeta <= FRAC_PI_2 + 1e-15);
        }
    }

    #[test]
    fn schwarzschild_residual_truncation_order() {
        // truncation-order oracle: expanding zeta = arcsin(u)/u at u =
        // sqrt(2) x gives residual = x^3 / (20 sqrt(3)) + O(x^5)
        let xs = [0.2, 0.1, 0.05, 0.025];
        let rows = schwarzschild_compare(&xs).unwrap();
        let predicted: Vec<f64> = xs
            .iter()
            .map(|x| x.powi(3) / (20.0 * 3f64.sqrt()))
            .collect();
        for (row, pred) in rows.iter().zip(&predicted) {
            assert!(
                (row.residual - pred).abs() < 0.2 * pred,
                "x={} residual={} predicted={}",
                row.x,
                row.residual,
                pred
            );
        }
        let errs: Vec<f64> = rows.iter().map(|r| r.residual.abs()).collect();
        let (order, _) = fit_order(&errs, &xs).unwrap();
        assert!(order >= 3.0, "order {order}");
        // bounded cubic ratio as x -> 0
        for (row, x) in rows.iter().zip(&xs) {
            assert!(row.residual.abs() / x.powi(3) < 0.1);
        }
    }

    #[test]
    fn schwarzschild_horizon_value() {
        let row = SchwarzschildRow::from_zeta(1.0, 0.0).unwrap();
        assert_eq!(row.rhs, 0.0);
    }

    #[test]
    fn schwarzschild_small_x_both_sides_vanish() {
        let rows = schwarzschild_compare(&[1e-4]).unwrap();
        assert!(rows[0].lhs < 1e-4);
        assert!(rows[0].rhs < 1e-4);
        assert!(rows[0].residual.abs() < 1e-11);
    }

    #[test]
    fn fit_order_exact_power_laws() {
        let scales = [0.5, 0.25, 0.125, 0.0625];
        let quad: Vec<f64> = scales.iter().map(|s| s * s).collect();
        let (p, rms) = fit_order(&quad, &scales).unwrap();
        assert!((p - 2.0).abs() < 1e-10);
        assert!(rms < 1e-10);
        let lin: Vec<f64> = scales.iter().map(|s| 7.3 * s).collect();
        let (p1, _) = fit_order(&lin, &scales).unwrap();
        assert!((p1 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fit_order_rejects_degenerate_input() {
        assert!(fit_order(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(fit_order(&[1.0, 0.0, 2.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn synthetic_tone_frequency() {
        let signal: Vec<f64> = (0..512).map(|t| (0.7 * t as f64).cos()).collect();
        let f = dominant_frequency(&signal, 1e-10).unwrap();
        assert!((f - 0.7).abs() < 1e-3, "f={f}");
    }

    #[test]
    fn flat_signal_has_no_peak() {
        let signal = vec![3.25; 256];
        assert!(matches!(
            dominant_frequency(&signal, 1e-10),
            Err(Error::NoPeak { .. })
        ));
    }
}
