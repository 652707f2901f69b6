//! Zeros of analytic functions in a rectangle by quadrisection and Newton.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::{circle_winding, rect_winding, winding_in, RootWindow, MIN_SAMPLES};
use crate::error::Result;

/// Cells narrower than this are not split further.
pub const MIN_DIAMETER: f64 = 1e-8;
/// Refined zeros satisfy `|f(z)| ≤ RESIDUAL_TOL · scale`.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Isolating radius floor.
pub const MIN_ISOLATION: f64 = 1e-7;

/// Off-center split points; the midpoint tends to land on symmetry lines
/// carrying zeros.
const SPLITS: [f64; 6] = [0.5137, 0.4719, 0.5431, 0.4283, 0.5862, 0.3917];
const NEWTON_ITERS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub z: Complex64,
    pub multiplicity: usize,
    /// Newton reached the residual target.
    pub refined: bool,
    pub residual: f64,
}

/// Result of a search: the zeros, the outer winding and the window used.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSearch {
    pub window: RootWindow,
    pub winding: i64,
    /// `max |f|` on the outer boundary samples.
    pub scale: f64,
    pub zeros: Vec<ZeroRecord>,
}

impl ZeroSearch {
    pub fn total_multiplicity(&self) -> i64 {
        self.zeros.iter().map(|z| z.multiplicity as i64).sum()
    }
}

fn diff_step(z: Complex64) -> f64 {
    1e-6 * (1.0 + z.norm())
}

fn first_derivative<F: Fn(Complex64) -> Complex64 + ?Sized>(f: &F, z: Complex64) -> Complex64 {
    let h = diff_step(z);
    (f(z + h) - f(z - h)) / (2.0 * h)
}

fn second_derivative<F: Fn(Complex64) -> Complex64 + ?Sized>(f: &F, z: Complex64) -> Complex64 {
    let h = diff_step(z);
    (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h)
}

/// Newton iteration for a zero of multiplicity `m`: on `f` when simple, on
/// `f′` when double, and `z − m f/f′` beyond.
fn newton<F: Fn(Complex64) -> Complex64 + ?Sized>(f: &F, z0: Complex64, m: usize) -> Option<Complex64> {
    let mut z = z0;
    for _ in 0..NEWTON_ITERS {
        let dz = match m {
            1 => f(z) / first_derivative(f, z),
            2 => first_derivative(f, z) / second_derivative(f, z),
            _ => m as f64 * f(z) / first_derivative(f, z),
        };
        if !dz.re.is_finite() || !dz.im.is_finite() {
            return (f(z).norm() == 0.0).then_some(z);
        }
        z -= dz;
        if dz.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    Some(z)
}

struct Leaf {
    z: Complex64,
    winding: usize,
    converged: bool,
}

fn split(w: &RootWindow, s: f64) -> [RootWindow; 4] {
    let xm = w.re_min + s * w.width();
    let ym = w.im_min + s * w.height();
    [
        RootWindow { re_max: xm, im_max: ym, ..*w },
        RootWindow { re_min: xm, im_max: ym, ..*w },
        RootWindow { re_min: xm, im_min: ym, ..*w },
        RootWindow { re_max: xm, im_min: ym, ..*w },
    ]
}

/// Tries to accept `cell` (winding `n ≥ 1`) as holding a single zero of
/// multiplicity `n`.
fn settle<F: Fn(Complex64) -> Complex64 + ?Sized>(f: &F, cell: &RootWindow, n: usize) -> Option<Leaf> {
    let z = newton(f, cell.center(), n)?;
    let slack = 1e-9 * cell.diameter();
    if !cell.expanded(slack).contains(z) {
        return None;
    }
    if n > 1 {
        let r = MIN_ISOLATION.max(0.01 * cell.inner_distance(z).max(0.0));
        match circle_winding(f, z, r, MIN_SAMPLES) {
            Ok(w) if w.count == n as i64 => {}
            _ => return None,
        }
    }
    Some(Leaf { z, winding: n, converged: true })
}

fn descend<F: Fn(Complex64) -> Complex64 + ?Sized>(f: &F, cell: RootWindow, n: i64, out: &mut Vec<Leaf>) {
    if n <= 0 {
        return;
    }
    let n = n as usize;
    if let Some(leaf) = settle(f, &cell, n) {
        out.push(leaf);
        return;
    }
    if cell.diameter() >= MIN_DIAMETER {
        for s in SPLITS {
            let children = split(&cell, s);
            let counts: Option<Vec<i64>> = children.iter().map(|c| rect_winding(f, c).ok().map(|w| w.count)).collect();
            match counts {
                Some(c) if c.iter().all(|&k| k >= 0) && c.iter().sum::<i64>() == n as i64 => {
                    for (child, k) in children.into_iter().zip(c) {
                        descend(f, child, k, out);
                    }
                    return;
                }
                _ => continue,
            }
        }
    }
    // Subdivision stalled: report the cell center with its winding.
    out.push(Leaf { z: cell.center(), winding: n, converged: false });
}

/// Zeros of `f` in `w` with the outer winding used for conservation checks.
pub fn search_zeros<F>(f: &F, w: &RootWindow) -> Result<ZeroSearch>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let (window, outer) = winding_in(f, w)?;
    let mut leaves = Vec::new();
    descend(f, window, outer.count, &mut leaves);
    leaves.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));

    let zeros = leaves
        .iter()
        .enumerate()
        .map(|(i, leaf)| {
            let nearest = leaves
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, o)| (o.z - leaf.z).norm())
                .fold(window.diameter(), f64::min);
            let r_iso = MIN_ISOLATION.max(0.01 * nearest);
            let residual = f(leaf.z).norm();
            let isolated = circle_winding(f, leaf.z, r_iso, MIN_SAMPLES).ok().map(|w| w.count);
            let (multiplicity, consistent) = match isolated {
                Some(k) if leaf.converged && k >= 1 => (k as usize, k as usize == leaf.winding),
                _ => (leaf.winding, false),
            };
            ZeroRecord {
                z: leaf.z,
                multiplicity,
                refined: leaf.converged && consistent && residual <= RESIDUAL_TOL * outer.scale,
                residual,
            }
        })
        .collect();
    Ok(ZeroSearch { window, winding: outer.count, scale: outer.scale, zeros })
}

pub fn find_zeros<F>(f: &F, w: &RootWindow) -> Result<Vec<ZeroRecord>>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    Ok(search_zeros(f, w)?.zeros)
}
