//! Building a tetra-inner function from the zeros of `x1`, `x2` and its royal
//! nodes, and reading those data back.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::sampling;
use crate::error::{Error, Result};
use crate::fejriesz::{factor, laurent_shift, modulus_squared_on_circle, DEFAULT_CIRCLE_TOL};
use crate::polycx::{max_coeff_diff, Polynomial, RootMultiset, DEFAULT_CLUSTER_TOL};
use crate::tetrafun::{RoyalNode, TetraRational};

/// Minimum distance between a royal node and a zero lying on the circle.
pub const DISJOINT_TOL: f64 = 1e-6;

const DISC_SLACK: f64 = 1e-12;
const ROYAL_MATCH_TOL: f64 = 1e-8;

/// Input data: zeros of `x1` (`alpha1`), zeros of `x2` (`alpha2`), royal
/// nodes (`sigma`) and the free constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub alpha1: Vec<Complex64>,
    pub alpha2: Vec<Complex64>,
    pub sigma: Vec<Complex64>,
    pub t_plus: f64,
    pub t: Complex64,
    pub omega: Complex64,
}

impl ConstructionSpec {
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// Checks the hypotheses of the construction.
    pub fn check(&self) -> Result<()> {
        if let Some(s) = self.sigma.iter().find(|s| s.norm() > 1.0 + DISC_SLACK) {
            return Err(Error::NodeOutsideClosedDisc(*s));
        }
        if let Some(a) = self.alpha1.iter().chain(&self.alpha2).find(|a| a.norm() > 1.0 + DISC_SLACK) {
            return Err(Error::ZeroOutsideClosedDisc(*a));
        }
        if self.alpha1.len() + self.alpha2.len() != self.n() {
            return Err(Error::InvalidConstructionSpec(format!(
                "{} + {} zeros given for {} royal nodes",
                self.alpha1.len(),
                self.alpha2.len(),
                self.n()
            )));
        }
        if !(self.t_plus > 0.0 && self.t_plus.is_finite()) {
            return Err(Error::InvalidConstructionSpec(format!("t_plus = {} must be positive", self.t_plus)));
        }
        if self.t.norm() == 0.0 || !self.t.norm().is_finite() {
            return Err(Error::InvalidConstructionSpec("t must be nonzero".into()));
        }
        if (self.omega.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConstructionSpec(format!("|omega| = {} must be 1", self.omega.norm())));
        }
        for a in self.alpha1.iter().chain(&self.alpha2) {
            if (a.norm() - 1.0).abs() > DEFAULT_CIRCLE_TOL {
                continue;
            }
            if let Some(s) = self.sigma.iter().find(|s| (*s - a).norm() <= DISJOINT_TOL) {
                return Err(Error::NodeZeroCollision { node: *s, zero: *a });
            }
        }
        Ok(())
    }
}

/// `(λ − σ)(1 − conj(σ)λ)`.
fn q_sigma(s: Complex64) -> Polynomial {
    Polynomial::new(vec![-s, Complex64::new(1.0 + s.norm_sqr(), 0.0), -s.conj()])
}

/// `R(λ) = t₊·Π (λ − σ_j)(1 − conj(σ_j)λ)`.
pub fn build_royal_target(sigma: &[Complex64], t_plus: f64) -> Result<Polynomial> {
    if let Some(s) = sigma.iter().find(|s| s.norm() > 1.0 + DISC_SLACK) {
        return Err(Error::NodeOutsideClosedDisc(*s));
    }
    if !(t_plus > 0.0) {
        return Err(Error::InvalidConstructionSpec(format!("t_plus = {t_plus} must be positive")));
    }
    Ok(sigma.iter().fold(Polynomial::constant(Complex64::new(t_plus, 0.0)), |acc, &s| &acc * &q_sigma(s)))
}

/// `E1(λ) = t·Π (λ − α¹_j)·Π (1 − conj(α²_j)λ)`.
pub fn build_e1(alpha1: &[Complex64], alpha2: &[Complex64], t: Complex64) -> Polynomial {
    let one = Complex64::new(1.0, 0.0);
    let mut e = Polynomial::constant(t);
    for &a in alpha1 {
        e = &e * &Polynomial::new(vec![-a, one]);
    }
    for &a in alpha2 {
        e = &e * &Polynomial::new(vec![one, -a.conj()]);
    }
    e
}

/// Runs the construction and self-checks the result.
///
/// The output is `(E1, reflect(E1, n), conj(ω)·D)` where `D` is the outer
/// factor of `λ^{−n}R + |E1|²`; as a function this is
/// `(ωE1/D, ωE1~/D, ω²D~/D)`.
pub fn construct(spec: &ConstructionSpec) -> Result<TetraRational> {
    spec.check()?;
    let n = spec.n();
    let r = build_royal_target(&spec.sigma, spec.t_plus)?;
    let e1 = build_e1(&spec.alpha1, &spec.alpha2, spec.t);
    let p = laurent_shift(&r, n)?.add(&modulus_squared_on_circle(&e1));
    let d = factor(&p, DEFAULT_CIRCLE_TOL)?.scale(spec.omega.conj());
    let e2 = e1.reflect(n)?;

    let x = TetraRational::new(e1, e2, d, n)
        .map_err(|e| Error::ConstructionInconsistent(format!("output failed validation: {e}")))?;
    let deviation = max_coeff_diff(&x.royal_polynomial(), &r);
    if deviation > ROYAL_MATCH_TOL * r.max_abs_coeff().max(1.0) {
        return Err(Error::ConstructionInconsistent(format!("royal polynomial deviates by {deviation:e}")));
    }
    let degree = x.degree()?;
    if degree != n {
        return Err(Error::ConstructionInconsistent(format!("degree {degree} differs from {n}")));
    }
    Ok(x)
}

/// Zeros of `x1`, `x2` in the closed disc and the royal nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredData {
    pub zeros1: RootMultiset,
    pub zeros2: RootMultiset,
    pub nodes: Vec<RoyalNode>,
}

impl RecoveredData {
    /// Royal nodes repeated according to multiplicity.
    pub fn node_locations(&self) -> Vec<Complex64> {
        self.nodes.iter().flat_map(|v| std::iter::repeat_n(v.location, v.multiplicity)).collect()
    }
}

fn disc_zeros(p: &Polynomial, name: &'static str) -> Result<RootMultiset> {
    if p.is_zero() {
        return Err(Error::IdenticallyZeroComponent(name));
    }
    if p.degree() == Some(0) {
        return Ok(RootMultiset { entries: Vec::new(), cluster_tol: DEFAULT_CLUSTER_TOL });
    }
    Ok(p.roots(DEFAULT_CLUSTER_TOL)?.in_closed_disc(DEFAULT_CIRCLE_TOL))
}

/// Reads off the data the construction consumes.
pub fn recover_data(x: &TetraRational) -> Result<RecoveredData> {
    if x.is_royal_variety() {
        return Err(Error::RoyalVarietyFunction);
    }
    Ok(RecoveredData { zeros1: disc_zeros(x.e1(), "E1")?, zeros2: disc_zeros(x.e2(), "E2")?, nodes: x.royal_nodes()? })
}

/// Largest distance in a greedy nearest-neighbour matching of two
/// multisets; `None` when the sizes differ.
pub fn match_multisets(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0_f64;
    for x in a {
        let (j, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .fold((usize::MAX, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        used[j] = true;
        worst = worst.max(dist);
    }
    Some(worst)
}

/// Options for [`random_spec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpecOptions {
    pub n: usize,
    /// Number of royal nodes placed on the circle.
    pub circle_nodes: usize,
    /// Minimum pairwise distance between all nodes and zeros.
    pub separation: f64,
    /// Modulus cap for interior nodes.
    pub node_radius: f64,
    /// Modulus cap for zeros; kept below 1 since a circle zero of `E1` is
    /// also a zero of its reflection.
    pub zero_radius: f64,
}

impl RandomSpecOptions {
    pub fn new(n: usize) -> Self {
        RandomSpecOptions { n, circle_nodes: 0, separation: 0.05, node_radius: 0.95, zero_radius: 0.9 }
    }

    pub fn circle_nodes(mut self, k: usize) -> Self {
        self.circle_nodes = k;
        self
    }
}

/// A random spec satisfying the options, with a random split of zeros
/// between `x1` and `x2`, `t₊ ∈ [0.5, 2]`, random `t` and `ω`.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, opts: RandomSpecOptions) -> ConstructionSpec {
    assert!(opts.circle_nodes <= opts.n);
    let mut points: Vec<Complex64> = Vec::with_capacity(2 * opts.n);
    let draw = |rng: &mut R, points: &mut Vec<Complex64>, gen: &dyn Fn(&mut R) -> Complex64| loop {
        let z = gen(rng);
        if points.iter().all(|p| (p - z).norm() >= opts.separation) {
            points.push(z);
            return z;
        }
    };
    let mut sigma = Vec::with_capacity(opts.n);
    for _ in 0..opts.circle_nodes {
        sigma.push(draw(rng, &mut points, &|r: &mut R| sampling::circle_point(r)));
    }
    for _ in opts.circle_nodes..opts.n {
        sigma.push(draw(rng, &mut points, &|r: &mut R| sampling::disc_point(r, opts.node_radius)));
    }
    let k1 = rng.gen_range(0..=opts.n);
    let mut alpha1 = Vec::with_capacity(k1);
    let mut alpha2 = Vec::with_capacity(opts.n - k1);
    for i in 0..opts.n {
        let z = draw(rng, &mut points, &|r: &mut R| sampling::disc_point(r, opts.zero_radius));
        if i < k1 {
            alpha1.push(z);
        } else {
            alpha2.push(z);
        }
    }
    let t_mod = rng.gen_range(0.5..2.0);
    ConstructionSpec {
        alpha1,
        alpha2,
        sigma,
        t_plus: rng.gen_range(0.5..2.0),
        t: Complex64::from_polar(t_mod, rng.gen_range(0.0..std::f64::consts::TAU)),
        omega: sampling::circle_point(rng),
    }
}
