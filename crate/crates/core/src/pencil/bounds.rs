//! A-priori location bounds that need a positive definite mass matrix.

use super::spec::PencilSpec;
use crate::error::{Error, Result};

/// Closed rectangle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    /// Containment with absolute slack.
    pub fn contains(&self, z: num_complex::Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
    }
}

fn mass(spec: &PencilSpec) -> Result<f64> {
    if spec.m_mass <= 1e-10 * spec.m_norm.max(1.0) {
        return Err(Error::MassNotDefinite(spec.m_mass));
    }
    Ok(spec.m_mass)
}

/// Rectangle `0 ≤ Re ≤ η‖G‖/(2m)`, `|Im| ≤ (β/m)^{1/2}` holding every nonreal
/// eigenvalue of `L(·, η)`.
pub fn nonreal_region(spec: &PencilSpec, eta: f64) -> Result<Rect> {
    let m = mass(spec)?;
    let h = (spec.beta / m).sqrt();
    Ok(Rect { re_min: 0.0, re_max: eta * spec.g_max / (2.0 * m), im_min: -h, im_max: h })
}

/// Interval `[0, ‖G‖/(2m)]` holding every real eigenvalue of algebraic
/// multiplicity above one.
pub fn nonsimple_real_interval(spec: &PencilSpec) -> Result<(f64, f64)> {
    let m = mass(spec)?;
    Ok((0.0, spec.g_max / (2.0 * m)))
}
