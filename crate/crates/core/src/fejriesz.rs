//! Fejér–Riesz spectral factorization.
//!
//! A trigonometric polynomial `p(λ) = c0 + Σ_{j=1..n} (c_j λ^j + conj(c_j) λ^{−j})`
//! that is non-negative on the unit circle is written as `|D(λ)|²` with `D` an
//! outer polynomial of degree at most `n`.
//!
//! The factorizer works on the ordinary polynomial `P(λ) = λ^m·p(λ)` where `m`
//! is the highest index with `c_m ≠ 0`. Roots of `P` come in pairs
//! `(r, 1/conj(r))`; `D` is rebuilt from the roots outside the disc plus half of
//! each (even-order) cluster on the circle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polycx::{Polynomial, RootMultiset};

/// Number of uniform circle samples used for sign checks and sups.
pub const CIRCLE_SAMPLES: usize = 4096;

/// Default relative distance from the unit circle below which a root counts as lying on it.
pub const DEFAULT_CIRCLE_TOL: f64 = 1e-6;

const NONNEG_SLACK: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-10;

/// Hermitian trigonometric polynomial given by `c0 (real), c1, …, cn`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    coeffs: Vec<Complex64>,
}

impl TrigPolynomial {
    /// `c0` is forced real.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if let Some(c0) = coeffs.first_mut() {
            c0.im = 0.0;
        } else {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        TrigPolynomial { coeffs }
    }

    pub fn constant(c0: f64) -> Self {
        Self::new(vec![Complex64::new(c0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Index of the highest stored coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    /// Value at an arbitrary nonzero `λ` (real on the circle).
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        let inv = lambda.inv();
        let (mut pos, mut neg) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        let mut acc = self.coeffs[0];
        for c in &self.coeffs[1..] {
            pos *= lambda;
            neg *= inv;
            acc += c * pos + c.conj() * neg;
        }
        acc
    }

    /// Real value at `e^{iθ}`.
    pub fn eval_angle(&self, theta: f64) -> f64 {
        let mut acc = self.coeffs[0].re;
        for (j, c) in self.coeffs.iter().enumerate().skip(1) {
            acc += 2.0 * (c * Complex64::from_polar(1.0, j as f64 * theta)).re;
        }
        acc
    }

    /// Values at `samples` uniform points `e^{2πik/samples}`.
    pub fn sample(&self, samples: usize) -> Vec<f64> {
        (0..samples).map(|k| self.eval_angle(std::f64::consts::TAU * k as f64 / samples as f64)).collect()
    }

    /// Minimum over the uniform circle samples is at least `-slack`.
    pub fn is_nonnegative_on_circle(&self, samples: usize, slack: f64) -> bool {
        self.sample(samples).into_iter().all(|v| v >= -slack)
    }

    pub fn add(&self, other: &TrigPolynomial) -> TrigPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        TrigPolynomial::new((0..len).map(|j| self.coeff(j) + other.coeff(j)).collect())
    }

    /// `λ^m · p(λ)` as an ordinary polynomial of degree `2m`.
    fn to_polynomial(&self, m: usize) -> Polynomial {
        let mut coeffs = Vec::with_capacity(2 * m + 1);
        for i in 0..=2 * m {
            coeffs.push(if i >= m { self.coeff(i - m) } else { self.coeff(m - i).conj() });
        }
        Polynomial::new(coeffs)
    }
}

/// The trigonometric polynomial equal to `|p(λ)|²` on the circle:
/// `c_j = Σ_k p_{k+j}·conj(p_k)`.
pub fn modulus_squared_on_circle(p: &Polynomial) -> TrigPolynomial {
    let coeffs = p.coeffs();
    if coeffs.is_empty() {
        return TrigPolynomial::constant(0.0);
    }
    let n = coeffs.len() - 1;
    let c = (0..=n)
        .map(|j| (0..=n - j).map(|k| coeffs[k + j] * coeffs[k].conj()).sum())
        .collect();
    TrigPolynomial::new(c)
}

/// `λ^{−n}·R(λ)` for a `2n`-symmetric `R` of degree at most `2n`.
pub fn laurent_shift(r: &Polynomial, n: usize) -> Result<TrigPolynomial> {
    let deviation = r.reflection_deviation(2 * n);
    if !(deviation <= SYMMETRY_TOL * r.max_abs_coeff().max(1.0)) {
        return Err(Error::NotTwoNSymmetric { deviation });
    }
    Ok(TrigPolynomial::new((0..=n).map(|j| r.coeff(n + j)).collect()))
}

/// Outer `D` with `|D|² = p` on the circle, normalized so `D(0) > 0`.
pub fn factor(p: &TrigPolynomial, circle_tol: f64) -> Result<Polynomial> {
    if p.is_zero() {
        return Err(Error::ZeroTrigPolynomial);
    }
    let values = p.sample(CIRCLE_SAMPLES);
    let scale = values.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -NONNEG_SLACK * scale.max(1.0) {
        return Err(Error::NotNonnegativeOnCircle { min });
    }

    let coeff_scale = p.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let m = (0..=p.order())
        .rev()
        .find(|&j| p.coeff(j).norm() > crate::polycx::TRIM_TOL * coeff_scale)
        .unwrap_or(0);

    let mut selected: Vec<Complex64> = Vec::with_capacity(m);
    if m > 0 {
        let raw = p.to_polynomial(m).raw_roots()?;
        let (mut inside, mut outside) = (0usize, 0usize);
        let mut on_circle = Vec::new();
        for r in raw {
            let modulus = r.norm();
            if modulus > 1.0 + circle_tol {
                outside += 1;
                selected.push(r);
            } else if modulus < 1.0 - circle_tol {
                inside += 1;
            } else {
                on_circle.push(r);
            }
        }
        if inside != outside {
            return Err(Error::UnpairedRoots { inside, outside });
        }
        let clusters = RootMultiset::cluster(&on_circle, circle_cluster_distance(circle_tol));
        for root in &clusters.entries {
            if root.order % 2 != 0 {
                return Err(Error::OddCircleRootOrder { location: root.location, order: root.order });
            }
            let unit = root.location / root.location.norm();
            selected.extend(std::iter::repeat_n(unit, root.order / 2));
        }
        if selected.len() != m {
            return Err(Error::UnpairedRoots { inside, outside: selected.len() });
        }
    }

    let monic = Polynomial::from_roots(&selected);
    let (k_max, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (k, &v)| if v > best.1 { (k, v) } else { best });
    let lambda0 = Complex64::from_polar(1.0, std::f64::consts::TAU * k_max as f64 / CIRCLE_SAMPLES as f64);
    let magnitude = values[k_max].max(0.0).sqrt() / monic.eval(lambda0).norm();
    let d = monic.scale_real(magnitude);
    Ok(normalize_phase(&d))
}

/// Circle roots of order `2ℓ` split by roughly `ε^{1/2ℓ}`; clusters are merged
/// generously since only their count and centroid matter.
fn circle_cluster_distance(circle_tol: f64) -> f64 {
    (10.0 * circle_tol).max(1e-4)
}

/// Multiplies by the unimodular constant that makes the first nonzero
/// coefficient real and positive.
pub fn normalize_phase(p: &Polynomial) -> Polynomial {
    match p.coeffs().iter().find(|c| c.norm() > 0.0) {
        Some(first) => p.scale(first.conj() / first.norm()),
        None => p.clone(),
    }
}

/// No root of `p` has modulus below `1 − tol`.
pub fn is_outer(p: &Polynomial, tol: f64) -> bool {
    match p.raw_roots() {
        Ok(roots) => roots.iter().all(|r| r.norm() >= 1.0 - tol),
        Err(_) => false,
    }
}

/// Largest `| |D(λ)|² − p(λ) |` over the uniform circle samples.
pub fn factor_residual(d: &Polynomial, p: &TrigPolynomial, samples: usize) -> f64 {
    (0..samples)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / samples as f64;
            (d.eval(Complex64::from_polar(1.0, theta)).norm_sqr() - p.eval_angle(theta)).abs()
        })
        .fold(0.0, f64::max)
}
