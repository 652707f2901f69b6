//! Sturm–Liouville problems whose boundary condition contains the spectral
//! parameter: `−y″ + q y = λ² y` on `(0, a)`, `y(0) = 0`, and
//! `y′(a) + λ α y(a) = 0` (single string) or two strings joined at `x = a`
//! with `y₁′(a) + y₂′(a) + λ α y(a) = 0` (double string).
//!
//! Discretization is variational with piecewise-linear elements and a lumped
//! mass matrix, which keeps every coefficient symmetric and the mass
//! positive definite.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::pencil::{Pencil, PencilSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Single,
    Double,
}

/// Potential: a constant or samples at the grid nodes `x_1, …, x_{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Potential {
    Const { value: f64 },
    Sampled { values: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlProblem {
    pub variant: Variant,
    pub q: Potential,
    pub a: f64,
    pub alpha: f64,
    /// Interior grid points per string.
    pub n: usize,
    /// Negate `q`, so the characteristic factor reads `√(λ² + q)`.
    #[serde(default)]
    pub paper_sign_convention: bool,
}

impl SlProblem {
    pub fn new(variant: Variant, q: Potential, a: f64, alpha: f64, n: usize) -> Self {
        Self { variant, q, a, alpha, n, paper_sign_convention: false }
    }

    pub fn with_paper_sign(mut self, on: bool) -> Self {
        self.paper_sign_convention = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::InvalidInput(format!("interval length a = {} must be positive", self.a)));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidInput(format!("alpha = {} must be positive", self.alpha)));
        }
        if self.n < 2 {
            return Err(Error::InvalidInput(format!("n = {} must be at least 2", self.n)));
        }
        match &self.q {
            Potential::Const { value } if !value.is_finite() => {
                Err(Error::InvalidInput("potential must be finite".into()))
            }
            Potential::Sampled { values } if values.len() != self.n + 1 => Err(Error::InvalidInput(format!(
                "sampled potential has {} values, expected n + 1 = {}",
                values.len(),
                self.n + 1
            ))),
            Potential::Sampled { values } if values.iter().any(|v| !v.is_finite()) => {
                Err(Error::InvalidInput("potential must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    /// Grid step `a / (n + 1)`.
    pub fn h(&self) -> f64 {
        self.a / (self.n + 1) as f64
    }

    fn sign(&self) -> f64 {
        if self.paper_sign_convention {
            -1.0
        } else {
            1.0
        }
    }

    /// Effective potential at node `i` (1-based, `1 ..= n + 1`).
    fn q_node(&self, i: usize) -> f64 {
        self.sign()
            * match &self.q {
                Potential::Const { value } => *value,
                Potential::Sampled { values } => values[i - 1],
            }
    }

    /// Effective potential at `x`: piecewise linear through the nodes,
    /// constant on `[0, x_1]`.
    pub fn q_at(&self, x: f64) -> f64 {
        match &self.q {
            Potential::Const { value } => self.sign() * value,
            Potential::Sampled { values } => {
                let h = self.h();
                let t = x / h;
                if t <= 1.0 {
                    return self.sign() * values[0];
                }
                let k = (t.floor() as usize).clamp(1, self.n);
                let f = (t - k as f64).clamp(0.0, 1.0);
                self.sign() * (values[k - 1] * (1.0 - f) + values[k.min(self.n)] * f)
            }
        }
    }
}

/// Single string: unknowns `y_1 … y_{n+1}`, Dirichlet at 0 eliminated, the
/// free end carries the `λ`-dependent condition through `G = α e_{n+1}e_{n+1}ᵀ`.
pub fn discretize_single(p: &SlProblem) -> Result<PencilSpec> {
    p.validate()?;
    if p.variant != Variant::Single {
        return Err(Error::InvalidInput("expected the single-string variant".into()));
    }
    let n = p.n;
    let dim = n + 1;
    let h = p.h();
    let mut a = RealMatrix::zeros(dim, dim);
    let mut mass = vec![h; dim];
    mass[dim - 1] = h / 2.0;
    for i in 0..dim {
        let diag = if i + 1 == dim { 1.0 / h } else { 2.0 / h };
        a[(i, i)] = diag + p.q_node(i + 1) * mass[i];
        if i + 1 < dim {
            a[(i, i + 1)] = -1.0 / h;
            a[(i + 1, i)] = -1.0 / h;
        }
    }
    let m = RealMatrix::from_diag(&mass);
    PencilSpec::new(Pencil::with_rank_one(m, p.alpha, dim - 1, a)?)
}

/// Index of the shared node in [`discretize_double`] output.
pub fn double_shared_index(n: usize) -> usize {
    n
}

/// Double string: unknowns ordered `[y₁ at x_1..x_n, y(a), y₂ at x_n..x_1]`,
/// which keeps the stiffness tridiagonal. Antisymmetric vectors
/// `(u, 0, −reverse(u))` never see `G`.
pub fn discretize_double(p: &SlProblem) -> Result<PencilSpec> {
    p.validate()?;
    if p.variant != Variant::Double {
        return Err(Error::InvalidInput("expected the double-string variant".into()));
    }
    let n = p.n;
    let dim = 2 * n + 1;
    let h = p.h();
    let node = |k: usize| if k <= n { k + 1 } else { dim - k };
    let mut a = RealMatrix::zeros(dim, dim);
    for k in 0..dim {
        a[(k, k)] = 2.0 / h + p.q_node(node(k)) * h;
        if k + 1 < dim {
            a[(k, k + 1)] = -1.0 / h;
            a[(k + 1, k)] = -1.0 / h;
        }
    }
    let m = RealMatrix::from_diag(&vec![h; dim]);
    PencilSpec::new(Pencil::with_rank_one(m, p.alpha, double_shared_index(n), a)?)
}

pub fn discretize(p: &SlProblem) -> Result<PencilSpec> {
    match p.variant {
        Variant::Single => discretize_single(p),
        Variant::Double => discretize_double(p),
    }
}

/// `sin(s a) / s` with its removable limit `a` at `s = 0`.
fn sinc_a(s: Complex64, a: f64) -> Complex64 {
    let z = s * a;
    if z.norm() < 1e-4 {
        let z2 = z * z;
        a * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)
    } else {
        z.sin() / s
    }
}

/// Characteristic function of the double string with constant potential in
/// the `√(λ² + q)` convention:
/// `ω(λ) = S(λ) · (2 cos(s a) + α λ S(λ))`, `S = sin(s a)/s`, `s = √(λ² + q)`.
/// Both factors are even in `s`, so the branch of the root is irrelevant.
pub fn junction_charfn(lambda: Complex64, q: f64, a: f64, alpha: f64) -> Complex64 {
    let s = (lambda * lambda + q).sqrt();
    let sinc = sinc_a(s, a);
    sinc * (2.0 * (s * a).cos() + alpha * lambda * sinc)
}

/// Factor of [`junction_charfn`] carried by symmetric modes:
/// `2 cos(s a) + α λ sin(s a)/s`.
pub fn junction_symmetric_factor(lambda: Complex64, q: f64, a: f64, alpha: f64) -> Complex64 {
    let s = (lambda * lambda + q).sqrt();
    2.0 * (s * a).cos() + alpha * lambda * sinc_a(s, a)
}

/// Factor of [`junction_charfn`] carried by antisymmetric modes: `sin(s a)/s`.
pub fn junction_antisymmetric_factor(lambda: Complex64, q: f64, a: f64) -> Complex64 {
    sinc_a((lambda * lambda + q).sqrt(), a)
}

/// Entry of the persistent family `±√((πj/a)² − q)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PersistentEigenvalue {
    pub j: usize,
    pub lambda: Complex64,
    /// `(πj/a)² = q`: the two signs coincide at zero.
    pub collapsed_zero: bool,
}

/// `±√((πj/a)² − q)` for `j = 1 ..= j_max`, imaginary when `(πj/a)² < q`.
pub fn type1_lambdas(q: f64, a: f64, j_max: usize) -> Vec<PersistentEigenvalue> {
    let mut out = Vec::new();
    for j in 1..=j_max {
        let k = std::f64::consts::PI * j as f64 / a;
        let v = k * k - q;
        if v.abs() <= 1e-12 * q.abs().max(k * k).max(1.0) {
            out.push(PersistentEigenvalue { j, lambda: Complex64::new(0.0, 0.0), collapsed_zero: true });
        } else if v > 0.0 {
            let r = v.sqrt();
            out.push(PersistentEigenvalue { j, lambda: Complex64::new(r, 0.0), collapsed_zero: false });
            out.push(PersistentEigenvalue { j, lambda: Complex64::new(-r, 0.0), collapsed_zero: false });
        } else {
            let r = (-v).sqrt();
            out.push(PersistentEigenvalue { j, lambda: Complex64::new(0.0, r), collapsed_zero: false });
            out.push(PersistentEigenvalue { j, lambda: Complex64::new(0.0, -r), collapsed_zero: false });
        }
    }
    out
}

/// Shooting characteristic value `s′(a) + λ α s(a)` of the single string,
/// where `s″ = (q − λ²) s`, `s(0) = 0`, `s′(0) = 1`, by classical RK4 with
/// `4n` steps. `α = 0` is accepted.
pub fn shoot_charfn(lambda: Complex64, p: &SlProblem) -> Complex64 {
    let steps = 4 * p.n.max(1);
    let h = p.a / steps as f64;
    let l2 = lambda * lambda;
    let mut y = Complex64::new(0.0, 0.0);
    let mut dy = Complex64::new(1.0, 0.0);
    let f = |x: f64, y: Complex64| (p.q_at(x) - l2) * y;
    for k in 0..steps {
        let x = k as f64 * h;
        let k1y = dy;
        let k1d = f(x, y);
        let k2y = dy + 0.5 * h * k1d;
        let k2d = f(x + 0.5 * h, y + 0.5 * h * k1y);
        let k3y = dy + 0.5 * h * k2d;
        let k3d = f(x + 0.5 * h, y + 0.5 * h * k2y);
        let k4y = dy + h * k3d;
        let k4d = f(x + h, y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    dy + lambda * p.alpha * y
}
