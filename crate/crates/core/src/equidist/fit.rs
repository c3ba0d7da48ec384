use crate::error::{Error, Result};

/// Ordinary least squares `y = slope * x + intercept`.
pub fn fit_linear(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let n = points.len();
    if n < 3 {
        return Err(Error::TooFewSamples(n));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Least-squares fit of `log error = slope * log x + intercept`; samples with
/// non-positive error are dropped.
pub fn fit_rate(samples: &[(f64, f64)]) -> Result<(f64, f64)> {
    let logs: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(x, e)| x > 0.0 && e > 0.0)
        .map(|&(x, e)| (x.ln(), e.ln()))
        .collect();
    fit_linear(&logs)
}
