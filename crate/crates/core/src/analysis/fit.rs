use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in units of `y`.
    pub residual_rms: f64,
}

/// Least-squares `y = slope·x` through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionalFit {
    pub slope: f64,
    /// `‖y − slope·x‖ / ‖y‖`
    pub relative_residual: f64,
}

/// `y = prefactor · x^exponent`, fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// RMS residual of `ln y`.
    pub log_residual_rms: f64,
}

fn check_lengths(xs: &[f64], ys: &[f64], min: usize) -> Result<()> {
    if xs.len() != ys.len() || xs.len() < min {
        return Err(Error::Measurement(format!(
            "fit needs at least {min} paired samples, got {} x and {} y",
            xs.len(),
            ys.len()
        )));
    }
    Ok(())
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    check_lengths(xs, ys, 2)?;
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Measurement("fit abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(LineFit {
        slope,
        intercept,
        residual_rms: (ss / n).sqrt(),
    })
}

pub fn fit_proportional(xs: &[f64], ys: &[f64]) -> Result<ProportionalFit> {
    check_lengths(xs, ys, 1)?;
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if sxx == 0.0 {
        return Err(Error::Measurement("fit abscissae are all zero".into()));
    }
    let slope = xs.iter().zip(ys).map(|(x, y)| x * y).sum::<f64>() / sxx;
    let res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x).powi(2))
        .sum();
    let norm: f64 = ys.iter().map(|y| y * y).sum();
    Ok(ProportionalFit {
        slope,
        relative_residual: if norm > 0.0 { (res / norm).sqrt() } else { 0.0 },
    })
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    check_lengths(xs, ys, 2)?;
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(Error::Measurement(
            "power-law fit needs positive data".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let f = fit_line(&lx, &ly)?;
    Ok(PowerLawFit {
        exponent: f.slope,
        prefactor: f.intercept.exp(),
        log_residual_rms: f.residual_rms,
    })
}

/// Removes `2π` jumps so consecutive phases differ by less than `π`.
pub fn unwrap_phases(phases: &[f64]) -> Vec<f64> {
    use std::f64::consts::PI;
    let mut out = Vec::with_capacity(phases.len());
    let mut offset = 0.0;
    for (i, &p) in phases.iter().enumerate() {
        if i > 0 {
            let d = p - phases[i - 1];
            offset -= 2.0 * PI * ((d / (2.0 * PI)).round());
        }
        out.push(p + offset);
    }
    out
}
