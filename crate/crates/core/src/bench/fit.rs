use crate::error::{Error, Result};

/// `f_s = √(s log(e p / s))`.
pub fn scaling_profile(s: usize, p: usize) -> f64 {
    let s = s as f64;
    (s * (std::f64::consts::E * p as f64 / s).ln()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub c: f64,
    /// Mean of `|e_s − c f_s|`.
    pub mad: f64,
}

/// Minimises `Σ |e_s − c f_s|` over `c`, exactly: the minimiser is the
/// weighted median of `e_s / f_s` with weights `f_s` (lower median on ties).
pub fn fit_scaling(errors: &[f64], s_values: &[usize], p: usize) -> Result<ScalingFit> {
    if errors.is_empty() {
        return Err(Error::Parameter("no data points to fit".into()));
    }
    if errors.len() != s_values.len() {
        return Err(Error::shape(s_values.len(), errors.len()));
    }
    if s_values.iter().any(|&s| s == 0 || s > p) {
        return Err(Error::Parameter(format!("need 1 <= s <= p = {p}")));
    }
    let profile: Vec<f64> = s_values.iter().map(|&s| scaling_profile(s, p)).collect();
    fit_weighted(errors, &profile)
}

/// [`fit_scaling`] with the profile values `f` supplied directly.
pub(crate) fn fit_weighted(errors: &[f64], f: &[f64]) -> Result<ScalingFit> {
    if errors.iter().chain(f).any(|v| !v.is_finite()) || f.iter().any(|v| *v <= 0.0) {
        return Err(Error::Parameter("fit needs finite errors and positive profile values".into()));
    }
    let mut pts: Vec<(f64, f64)> = errors.iter().zip(f).map(|(e, w)| (e / w, *w)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let half = 0.5 * pts.iter().map(|p| p.1).sum::<f64>();
    let mut acc = 0.0;
    let mut c = pts[pts.len() - 1].0;
    for (ratio, w) in &pts {
        acc += w;
        if acc >= half {
            c = *ratio;
            break;
        }
    }
    let mad = errors.iter().zip(f).map(|(e, w)| (e - c * w).abs()).sum::<f64>() / errors.len() as f64;
    Ok(ScalingFit { c, mad })
}
