//! Complex-coefficient polynomials.
//!
//! Coefficients are stored in ascending order: `coeffs[j]` multiplies `λ^j`.
//! The zero polynomial is the empty coefficient vector. Besides the ring
//! operations this module provides the two involutions used throughout the
//! crate:
//!
//! * `reflect(p, n)`, the `∼n` reflection `λ^n · conj(p(1/conj λ))`, which
//!   reverses the first `n + 1` coefficients and conjugates them;
//! * `conj_flip(p)`, the `∨` map `conj(p(conj λ))`, which conjugates the
//!   coefficients in place.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients smaller than this are dropped from the top after arithmetic.
pub const TRIM_TOL: f64 = 1e-14;

/// Default distance below which two numerical roots are merged.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, dropping exact trailing zeros.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim(0.0);
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// The monomial `c λ^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `Π (λ − r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            coeffs.push(Complex64::new(0.0, 0.0));
            for j in (1..coeffs.len()).rev() {
                let lower = coeffs[j - 1];
                coeffs[j] = lower - r * coeffs[j];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `λ^j`, zero above the degree.
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops trailing coefficients whose modulus is at most `tol`.
    pub fn trim(&mut self, tol: f64) {
        while let Some(c) = self.coeffs.last() {
            if c.norm() <= tol {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    fn trimmed(mut self) -> Self {
        self.trim(TRIM_TOL);
        self
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative at `z`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Polynomial { coeffs: self.coeffs.iter().map(|&c| c * s).collect() }.trimmed()
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `p^{∼n}`: coefficient `j` of the result is `conj(coeff(n − j))`.
    pub fn reflect(&self, n: usize) -> Result<Self> {
        if let Some(d) = self.degree() {
            if d > n {
                return Err(Error::DegreeExceedsReflectionIndex { degree: d, index: n });
            }
        } else {
            return Ok(Polynomial::zero());
        }
        let coeffs = (0..=n).map(|j| self.coeff(n - j).conj()).collect();
        Ok(Polynomial::new(coeffs))
    }

    /// `p^∨`: conjugated coefficients.
    pub fn conj_flip(&self) -> Self {
        Polynomial { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    /// Largest coefficient deviation between `p` and `p^{∼n}`.
    ///
    /// Infinite when `deg p > n`.
    pub fn reflection_deviation(&self, n: usize) -> f64 {
        match self.reflect(n) {
            Ok(r) => max_coeff_diff(self, &r),
            Err(_) => f64::INFINITY,
        }
    }

    /// True iff `deg p ≤ n` and `p^{∼n}` matches `p` coefficientwise within `tol`.
    pub fn is_n_symmetric(&self, n: usize, tol: f64) -> bool {
        self.reflection_deviation(n) < tol
    }

    /// Order of the root at the origin (number of leading zero coefficients).
    pub fn order_at_zero(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == Complex64::new(0.0, 0.0)).count()
    }

    /// All complex roots with multiplicity, clustered within `cluster_tol`.
    pub fn roots(&self, cluster_tol: f64) -> Result<RootMultiset> {
        let raw = self.raw_roots()?;
        Ok(RootMultiset::cluster(&raw, cluster_tol))
    }

    /// Unclustered numerical roots, one per unit of degree.
    pub fn raw_roots(&self) -> Result<Vec<Complex64>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomialHasAllRoots);
        }
        let zeros_at_origin = self.order_at_zero();
        let reduced = Polynomial::new(self.coeffs[zeros_at_origin..].to_vec());
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
        roots.extend(companion_roots(&reduced)?);
        Ok(roots)
    }
}

/// Largest coefficientwise modulus of `p − q`.
pub fn max_coeff_diff(p: &Polynomial, q: &Polynomial) -> f64 {
    let len = p.coeffs.len().max(q.coeffs.len());
    (0..len).map(|j| (p.coeff(j) - q.coeff(j)).norm()).fold(0.0, f64::max)
}

fn companion_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let deg = match p.degree() {
        Some(0) | None => return Ok(Vec::new()),
        Some(d) => d,
    };
    let lead = p.leading();
    if deg == 1 {
        return Ok(vec![-p.coeff(0) / lead]);
    }
    // Frobenius companion matrix of the monic normalization.
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -p.coeff(i) / lead;
    }
    balance(&mut m);
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::RootFinding("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut roots: Vec<Complex64> = (0..deg).map(|i| t[(i, i)]).collect();
    for r in roots.iter_mut() {
        *r = newton_polish(p, *r);
    }
    Ok(roots)
}

/// Parlett–Reinsch diagonal balancing with powers of two.
fn balance(m: &mut DMatrix<Complex64>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    for _ in 0..100 {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].norm();
                    r += m[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / RADIX {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            while c > r * RADIX {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// One Newton step, kept only if it lowers the residual.
fn newton_polish(p: &Polynomial, z: Complex64) -> Complex64 {
    let (v, dv) = p.eval_with_derivative(z);
    if dv.norm() == 0.0 || !dv.is_finite() {
        return z;
    }
    let candidate = z - v / dv;
    if candidate.is_finite() && p.eval(candidate).norm() < v.norm() {
        candidate
    } else {
        z
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial { coeffs: (0..len).map(|j| self.coeff(j) + rhs.coeff(j)).collect() }.trimmed()
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial { coeffs: (0..len).map(|j| self.coeff(j) - rhs.coeff(j)).collect() }.trimmed()
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial { coeffs }.trimmed()
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// A root of a polynomial together with its order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub location: Complex64,
    pub order: usize,
}

/// Roots with multiplicity; numerically coincident roots are merged.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootMultiset {
    pub entries: Vec<Root>,
    pub cluster_tol: f64,
}

impl RootMultiset {
    /// Groups raw roots by single-linkage clustering (pairwise distance below
    /// `cluster_tol`); each cluster is replaced by its centroid.
    pub fn cluster(raw: &[Complex64], cluster_tol: f64) -> Self {
        let n = raw.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (raw[i] - raw[j]).norm() < cluster_tol {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, members)) => members.push(raw[i]),
                None => groups.push((root, vec![raw[i]])),
            }
        }
        let entries = groups
            .into_iter()
            .map(|(_, members)| {
                let sum: Complex64 = members.iter().sum();
                Root { location: sum / members.len() as f64, order: members.len() }
            })
            .collect();
        RootMultiset { entries, cluster_tol }
    }

    /// Sum of orders.
    pub fn total_order(&self) -> usize {
        self.entries.iter().map(|r| r.order).sum()
    }

    /// Locations repeated according to order.
    pub fn flatten(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.location, r.order))
            .collect()
    }

    /// The monic polynomial with exactly these roots.
    pub fn expand(&self) -> Polynomial {
        Polynomial::from_roots(&self.flatten())
    }

    /// Keeps entries satisfying the predicate.
    pub fn filter(&self, mut keep: impl FnMut(&Root) -> bool) -> Self {
        RootMultiset {
            entries: self.entries.iter().copied().filter(|r| keep(r)).collect(),
            cluster_tol: self.cluster_tol,
        }
    }

    /// Entries with `|location| ≤ 1 + circle_tol`.
    pub fn in_closed_disc(&self, circle_tol: f64) -> Self {
        self.filter(|r| r.location.norm() <= 1.0 + circle_tol)
    }
}
