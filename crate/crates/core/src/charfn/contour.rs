//! Argument-principle winding numbers over rectangles and circles.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fewest samples allowed on a contour.
pub const MIN_SAMPLES: usize = 64;
/// A sample with `|f| < DIP_TOL · max|f|` is treated as a zero on the contour.
pub const DIP_TOL: f64 = 1e-12;
/// Outward shift applied per retry when the contour passes through a zero.
pub const PERTURBATION: f64 = 1e-6;
pub const MAX_RETRIES: usize = 5;

const MAX_DEPTH: u32 = 48;

/// Axis-aligned search rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootWindow {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub boundary_samples: usize,
}

impl RootWindow {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let w = Self { re_min, re_max, im_min, im_max, boundary_samples: MIN_SAMPLES };
        w.validate()?;
        Ok(w)
    }

    /// Square of half-width `r` about `c`.
    pub fn square(c: Complex64, r: f64) -> Result<Self> {
        Self::new(c.re - r, c.re + r, c.im - r, c.im + r)
    }

    pub fn with_samples(mut self, samples: usize) -> Result<Self> {
        self.boundary_samples = samples;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite());
        if !finite || !(self.re_min < self.re_max) || !(self.im_min < self.im_max) {
            return Err(Error::InvalidInput(format!(
                "window [{}, {}] x [{}, {}] is empty or not finite",
                self.re_min, self.re_max, self.im_min, self.im_max
            )));
        }
        if self.boundary_samples < MIN_SAMPLES {
            return Err(Error::InvalidInput(format!(
                "boundary_samples = {} below {MIN_SAMPLES}",
                self.boundary_samples
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im > self.im_min && z.im < self.im_max
    }

    /// Distance from an interior point to the boundary.
    pub fn inner_distance(&self, z: Complex64) -> f64 {
        (z.re - self.re_min).min(self.re_max - z.re).min(z.im - self.im_min).min(self.im_max - z.im)
    }

    pub fn expanded(&self, d: f64) -> Self {
        Self {
            re_min: self.re_min - d,
            re_max: self.re_max + d,
            im_min: self.im_min - d,
            im_max: self.im_max + d,
            ..*self
        }
    }

    /// Point at fraction `t ∈ [0, 1)` of the perimeter, counterclockwise from
    /// the lower left corner.
    fn boundary_point(&self, t: f64) -> Complex64 {
        let (w, h) = (self.width(), self.height());
        let s = t.rem_euclid(1.0) * 2.0 * (w + h);
        if s < w {
            Complex64::new(self.re_min + s, self.im_min)
        } else if s < w + h {
            Complex64::new(self.re_max, self.im_min + (s - w))
        } else if s < 2.0 * w + h {
            Complex64::new(self.re_max - (s - w - h), self.im_max)
        } else {
            Complex64::new(self.re_min, self.im_max - (s - 2.0 * w - h))
        }
    }
}

/// Winding of `f` along a closed contour together with `max |f|` over the samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Winding {
    pub count: i64,
    pub scale: f64,
}

/// Signals a contour passing through (or numerically onto) a zero.
#[derive(Debug)]
pub(crate) struct Dip;

fn phase_step(a: Complex64, b: Complex64) -> f64 {
    (b / a).arg()
}

/// Value of `f` and `|f′/f|` (central difference) at `z`.
fn sample<F>(f: &F, z: Complex64) -> (Complex64, f64)
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let v = f(z);
    let h = 1e-6 * (1.0 + z.norm());
    let d = (f(z + h) - f(z - h)) / (2.0 * h);
    (v, (d / v).norm())
}

fn finite(v: Complex64) -> bool {
    v.re.is_finite() && v.im.is_finite()
}

/// Winding of `f` along the closed curve `point(t)`, `t ∈ [0, 1]`. A segment
/// is bisected while its phase jump reaches `π/2` or its length times the
/// larger end value of `|f′/f|` does.
pub(crate) fn contour_winding<F, P>(f: &F, point: P, samples: usize) -> std::result::Result<Winding, Dip>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
    P: Fn(f64) -> Complex64,
{
    let ts: Vec<f64> = (0..=samples).map(|k| k as f64 / samples as f64).collect();
    let mut vals: Vec<(Complex64, f64)> = ts[..samples].iter().map(|&t| sample(f, point(t))).collect();
    vals.push(vals[0]);
    if vals.iter().any(|(v, _)| !finite(*v)) {
        return Err(Dip);
    }
    let scale = vals.iter().map(|(v, _)| v.norm()).fold(0.0, f64::max);
    let floor = DIP_TOL * scale;
    if scale == 0.0 || vals.iter().any(|(v, _)| v.norm() < floor) {
        return Err(Dip);
    }

    struct Ctx<'a, F: ?Sized, P> {
        f: &'a F,
        point: P,
        floor: f64,
    }

    fn segment<F, P>(
        cx: &Ctx<'_, F, P>,
        t0: f64,
        t1: f64,
        a: (Complex64, f64),
        b: (Complex64, f64),
        depth: u32,
    ) -> std::result::Result<f64, Dip>
    where
        F: Fn(Complex64) -> Complex64 + ?Sized,
        P: Fn(f64) -> Complex64,
    {
        let d = phase_step(a.0, b.0);
        let len = ((cx.point)(t1) - (cx.point)(t0)).norm();
        if d.abs() < 0.5 * PI && len * a.1.max(b.1) < 0.5 * PI {
            return Ok(d);
        }
        if depth >= MAX_DEPTH {
            return Err(Dip);
        }
        let tm = 0.5 * (t0 + t1);
        let m = sample(cx.f, (cx.point)(tm));
        if !finite(m.0) || !(m.0.norm() >= cx.floor) {
            return Err(Dip);
        }
        Ok(segment(cx, t0, tm, a, m, depth + 1)? + segment(cx, tm, t1, m, b, depth + 1)?)
    }

    let cx = Ctx { f, point, floor };
    let mut total = 0.0;
    for k in 0..samples {
        total += segment(&cx, ts[k], ts[k + 1], vals[k], vals[k + 1], 0)?;
    }
    Ok(Winding { count: (total / (2.0 * PI)).round() as i64, scale })
}

pub(crate) fn rect_winding<F>(f: &F, w: &RootWindow) -> std::result::Result<Winding, Dip>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    contour_winding(f, |t| w.boundary_point(t), w.boundary_samples)
}

pub(crate) fn circle_winding<F>(f: &F, c: Complex64, r: f64, samples: usize) -> std::result::Result<Winding, Dip>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    contour_winding(f, |t| c + Complex64::from_polar(r, 2.0 * PI * t), samples)
}

/// Number of zeros of `f` in `w` (with multiplicity), retrying on windows
/// grown by `PERTURBATION` when the boundary meets a zero. Returns the window
/// actually used.
pub fn winding_in<F>(f: &F, w: &RootWindow) -> Result<(RootWindow, Winding)>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    w.validate()?;
    for k in 0..=MAX_RETRIES {
        let cur = w.expanded(k as f64 * PERTURBATION);
        if let Ok(n) = rect_winding(f, &cur) {
            return Ok((cur, n));
        }
    }
    Err(Error::BoundaryZero)
}

pub fn winding_count<F>(f: &F, w: &RootWindow) -> Result<i64>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    Ok(winding_in(f, w)?.1.count)
}
