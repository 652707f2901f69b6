use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{rank_with_tol, sym_eigenvalues, DenseMatrix, RealMatrix};

/// `G = b · e eᵀ` with `e` the coordinate axis `e_index`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankOne {
    pub b: f64,
    pub e_index: usize,
}

/// Raw coefficient triple `(M, G, A)`; not yet validated.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    pub m: RealMatrix,
    pub g: RealMatrix,
    pub a: RealMatrix,
    pub g_rank_one: Option<RankOne>,
}

impl Pencil {
    pub fn new(m: RealMatrix, g: RealMatrix, a: RealMatrix) -> Result<Self> {
        let n = m.rows();
        for (name, x) in [("M", &m), ("G", &g), ("A", &a)] {
            if x.rows() != n || x.cols() != n {
                return Err(Error::DimensionMismatch(format!("{name} is {}x{}, expected {n}x{n}", x.rows(), x.cols())));
            }
        }
        if n == 0 {
            return Err(Error::DimensionMismatch("empty pencil".into()));
        }
        Ok(Self { m, g, a, g_rank_one: None })
    }

    /// Pencil with `G = b · e_k e_kᵀ`.
    pub fn with_rank_one(m: RealMatrix, b: f64, e_index: usize, a: RealMatrix) -> Result<Self> {
        let n = m.rows();
        if e_index >= n {
            return Err(Error::DimensionMismatch(format!("e_index {e_index} out of range for n = {n}")));
        }
        let mut g = RealMatrix::zeros(n, n);
        g[(e_index, e_index)] = b;
        let mut p = Self::new(m, g, a)?;
        p.g_rank_one = Some(RankOne { b, e_index });
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }
}

/// Outcome of one hypothesis clause.
#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Per-clause validity of the standing hypotheses.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub clauses: Vec<Clause>,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.pass)
    }
}

fn spectral_extremes(x: &RealMatrix) -> (f64, f64) {
    match sym_eigenvalues(&x.symmetrized()) {
        Ok(v) => (v[0], v[v.len() - 1]),
        Err(_) => (f64::NAN, f64::NAN),
    }
}

/// Symmetry and semidefiniteness of the coefficients, and triviality of
/// `ker A ∩ ker G ∩ ker M`.
pub fn validate_condition_i(p: &Pencil) -> Result<ConditionReport> {
    let n = p.n();
    for (name, x) in [("M", &p.m), ("G", &p.g), ("A", &p.a)] {
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch(format!("{name} is {}x{}, expected {n}x{n}", x.rows(), x.cols())));
        }
    }
    let mut clauses = Vec::new();
    for (name, x) in [("M symmetric", &p.m), ("G symmetric", &p.g), ("A symmetric", &p.a)] {
        let finite = x.is_finite();
        let dev = x.asymmetry();
        clauses.push(Clause {
            name,
            pass: finite && x.is_symmetric(),
            detail: if finite { format!("max asymmetry {dev:.3e}") } else { "non-finite entry".into() },
        });
    }
    let finite = p.m.is_finite() && p.g.is_finite() && p.a.is_finite();
    let (m_min, m_max) = if finite { spectral_extremes(&p.m) } else { (f64::NAN, f64::NAN) };
    let (g_min, g_max) = if finite { spectral_extremes(&p.g) } else { (f64::NAN, f64::NAN) };
    for (name, lo, hi) in [("M positive semidefinite", m_min, m_max), ("G positive semidefinite", g_min, g_max)] {
        let norm = lo.abs().max(hi.abs());
        clauses.push(Clause { name, pass: lo >= -1e-10 * norm, detail: format!("smallest eigenvalue {lo:.6e}") });
    }
    let joint = if !finite {
        false
    } else if m_min > 1e-8 * m_max.abs().max(1.0) {
        true
    } else {
        rank_with_tol(&RealMatrix::vstack(&[&p.m, &p.g, &p.a]), 0.0) == n
    };
    clauses.push(Clause {
        name: "joint kernel trivial",
        pass: joint,
        detail: if joint { "rank [M;G;A] = n".into() } else { "M, G and A share a kernel vector".into() },
    });
    if let Some(r1) = p.g_rank_one {
        let ok_index = r1.e_index < n;
        let dev = if ok_index {
            let mut d = p.g.clone();
            d[(r1.e_index, r1.e_index)] -= r1.b;
            d.norm_fro()
        } else {
            f64::INFINITY
        };
        clauses.push(Clause {
            name: "G rank one",
            pass: r1.b > 0.0 && dev <= 1e-10 * r1.b,
            detail: format!("b = {}, e_index = {}, deviation {dev:.3e}", r1.b, r1.e_index),
        });
    }
    Ok(ConditionReport { clauses })
}

/// A validated pencil with derived constants.
#[derive(Clone, Debug)]
pub struct PencilSpec {
    pencil: Pencil,
    /// `max(0, −λ_min(A))`.
    pub beta: f64,
    /// `λ_min(M)`.
    pub m_mass: f64,
    pub g_min: f64,
    /// Largest eigenvalue of `G`.
    pub g_max: f64,
    pub a_min: f64,
    pub m_norm: f64,
    pub g_norm: f64,
    pub a_norm: f64,
    /// Largest spectral norm among `M, G, A`.
    pub spec_norm: f64,
    /// Symmetric half-bandwidth of the combined nonzero pattern.
    pub band: usize,
    /// Whether `ker M ∩ ker A = {0}`.
    pub ker_ma_trivial: bool,
}

impl PencilSpec {
    /// Validates the pencil; the error names the failing clauses.
    pub fn new(pencil: Pencil) -> Result<Self> {
        let report = validate_condition_i(&pencil)?;
        if !report.all_pass() {
            let msg: Vec<String> = report.failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
            return Err(Error::HypothesisViolated(msg.join("; ")));
        }
        let (m_min, m_max) = spectral_extremes(&pencil.m);
        let (g_min, g_max) = spectral_extremes(&pencil.g);
        let (a_min, a_max) = spectral_extremes(&pencil.a);
        let m_norm = m_min.abs().max(m_max.abs());
        let g_norm = g_min.abs().max(g_max.abs());
        let a_norm = a_min.abs().max(a_max.abs());
        let band = [&pencil.m, &pencil.g, &pencil.a]
            .iter()
            .map(|x| {
                let (l, u) = x.bandwidth();
                l.max(u)
            })
            .max()
            .unwrap_or(0);
        let n = pencil.n();
        let ker_ma_trivial =
            m_min > 1e-8 * m_norm.max(1.0) || rank_with_tol(&RealMatrix::vstack(&[&pencil.m, &pencil.a]), 0.0) == n;
        Ok(Self {
            beta: (-a_min).max(0.0),
            m_mass: m_min,
            g_min,
            g_max,
            a_min,
            m_norm,
            g_norm,
            a_norm,
            spec_norm: m_norm.max(g_norm).max(a_norm),
            band,
            ker_ma_trivial,
            pencil,
        })
    }

    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    pub fn n(&self) -> usize {
        self.pencil.n()
    }

    pub fn m(&self) -> &RealMatrix {
        &self.pencil.m
    }

    pub fn g(&self) -> &RealMatrix {
        &self.pencil.g
    }

    pub fn a(&self) -> &RealMatrix {
        &self.pencil.a
    }

    pub fn rank_one(&self) -> Option<RankOne> {
        self.pencil.g_rank_one
    }

    /// Whether `G` is rank one, either flagged or structurally.
    pub fn g_is_rank_one(&self) -> bool {
        self.pencil.g_rank_one.is_some() || rank_with_tol(&self.pencil.g, 1e-10 * self.g_norm.max(1e-300)) == 1
    }

    /// Entry `(i, j)` of `L(λ, η)`.
    #[inline]
    pub fn entry(&self, lambda: Complex64, eta: f64, i: usize, j: usize) -> Complex64 {
        let m = self.pencil.m[(i, j)];
        let g = self.pencil.g[(i, j)];
        let a = self.pencil.a[(i, j)];
        lambda * lambda * m - lambda * (eta * g) - a
    }

    /// `L(λ, η) = λ²M − ληG − A`.
    pub fn evaluate(&self, lambda: Complex64, eta: f64) -> DenseMatrix {
        let n = self.n();
        DenseMatrix::from_fn(n, n, |i, j| self.entry(lambda, eta, i, j))
    }

    /// `L(λ, η)` at real `λ`.
    pub fn evaluate_real(&self, lambda: f64, eta: f64) -> RealMatrix {
        self.pencil.m.scaled(lambda * lambda).add_scaled(-lambda * eta, &self.pencil.g).sub(&self.pencil.a)
    }

    /// `L(λ, η) v`, using the band structure.
    pub fn apply(&self, lambda: Complex64, eta: f64, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.n();
        let w = self.band;
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(w);
                let hi = (i + w).min(n - 1);
                let mut s = Complex64::new(0.0, 0.0);
                for j in lo..=hi {
                    s += self.entry(lambda, eta, i, j) * v[j];
                }
                s
            })
            .collect()
    }

    /// Scale `|λ|²‖M‖ + η|λ|‖G‖ + ‖A‖` used for rank tolerances at `λ`.
    pub fn scale_at(&self, lambda: Complex64, eta: f64) -> f64 {
        let r = lambda.norm();
        r * r * self.m_norm + eta * r * self.g_norm + self.a_norm
    }
}
