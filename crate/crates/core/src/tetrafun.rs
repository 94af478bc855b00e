//! Rational tetra-inner functions `x = (E1/D, E2/D, D~/D)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{psi, tetra_defect, TetraPoint};
use crate::error::{Error, Result, Violation};
use crate::fejriesz::{laurent_shift, DEFAULT_CIRCLE_TOL};
use crate::polycx::{max_coeff_diff, Polynomial, RootMultiset, DEFAULT_CLUSTER_TOL};

/// Circle samples used by validation and sups.
pub const VALIDATION_SAMPLES: usize = 4096;
/// Samples used by the structural invariant checks.
pub const INVARIANT_SAMPLES: usize = 512;

const REFLECTION_TOL: f64 = 1e-10;
const DOMINATION_SLACK: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-9;
const DISC_TOL: f64 = 1e-9;
const DENOM_TOL: f64 = 1e-13;
const ROYAL_ZERO_TOL: f64 = 1e-12;
const ROYAL_TRIM: f64 = 1e-13;

/// `e^{2πik/samples}` for `k = 0..samples`.
pub fn unit_circle(samples: usize) -> impl Iterator<Item = (f64, Complex64)> {
    (0..samples).map(move |k| {
        let theta = TAU * k as f64 / samples as f64;
        (theta, Complex64::from_polar(1.0, theta))
    })
}

/// Distance scale under which two circle roots of the royal polynomial are
/// treated as one even-order cluster. Double roots split by about `√ε`, so
/// this is much coarser than the generic cluster tolerance.
const CIRCLE_CLUSTER_DISTANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// `D` must not vanish on the closed disc.
    #[default]
    Strict,
    /// `D` may vanish on the circle (but not inside).
    Lenient,
}

/// Unvalidated wire form `{"n", "E1", "E2", "D"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TetraRationalData {
    pub n: usize,
    #[serde(rename = "E1")]
    pub e1: Polynomial,
    #[serde(rename = "E2")]
    pub e2: Polynomial,
    #[serde(rename = "D")]
    pub d: Polynomial,
}

impl TetraRationalData {
    pub fn validate(self, mode: ValidationMode) -> Result<TetraRational> {
        validate(self.e1, self.e2, self.d, self.n, mode)
    }
}

/// A validated rational tetra-inner function.
#[derive(Debug, Clone, PartialEq)]
pub struct TetraRational {
    e1: Polynomial,
    e2: Polynomial,
    d: Polynomial,
    d_reflected: Polynomial,
    n: usize,
    mode: ValidationMode,
}

/// Every violated condition for `(e1, e2, d, n)`; empty means valid.
pub fn violations(e1: &Polynomial, e2: &Polynomial, d: &Polynomial, n: usize, mode: ValidationMode) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut degrees_ok = true;
    for (component, p) in [("E1", e1), ("E2", e2), ("D", d)] {
        if let Some(degree) = p.degree() {
            if degree > n {
                degrees_ok = false;
                out.push(Violation::DegreeBound { component, degree, bound: n });
            }
        }
    }

    if d.is_zero() {
        out.push(Violation::DVanishesInDisc { location: Complex64::new(0.0, 0.0) });
    } else if let Ok(roots) = d.raw_roots() {
        let limit = match mode {
            ValidationMode::Strict => 1.0 + ROOT_TOL,
            ValidationMode::Lenient => 1.0 - ROOT_TOL,
        };
        for r in roots {
            let inside = match mode {
                ValidationMode::Strict => r.norm() <= limit,
                ValidationMode::Lenient => r.norm() < limit,
            };
            if inside {
                out.push(Violation::DVanishesInDisc { location: r });
            }
        }
    }

    if degrees_ok {
        if let Ok(reflected) = e2.reflect(n) {
            let scale = e1.max_abs_coeff().max(e2.max_abs_coeff()).max(d.max_abs_coeff()).max(1.0);
            let max_deviation = max_coeff_diff(e1, &reflected);
            if max_deviation > REFLECTION_TOL * scale {
                out.push(Violation::ReflectionMismatch { max_deviation });
            }
        }
    }

    let mut d_max = 0.0_f64;
    let mut excess = [0.0_f64; 2];
    for (_, lam) in unit_circle(VALIDATION_SAMPLES) {
        let dv = d.eval(lam).norm();
        d_max = d_max.max(dv);
        excess[0] = excess[0].max(e1.eval(lam).norm() - dv);
        excess[1] = excess[1].max(e2.eval(lam).norm() - dv);
    }
    for (component, ex) in [("E1", excess[0]), ("E2", excess[1])] {
        if ex > DOMINATION_SLACK * d_max.max(1.0) {
            out.push(Violation::ModulusDomination { component, excess: ex });
        }
    }
    out
}

/// Checks the defining conditions and returns the validated function.
pub fn validate(e1: Polynomial, e2: Polynomial, d: Polynomial, n: usize, mode: ValidationMode) -> Result<TetraRational> {
    let v = violations(&e1, &e2, &d, n, mode);
    if !v.is_empty() {
        return Err(Error::Invalid(v));
    }
    let d_reflected = d.reflect(n)?;
    Ok(TetraRational { e1, e2, d, d_reflected, n, mode })
}

/// One line of a per-condition report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub condition: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// The seven defining conditions, each reported separately.
pub fn check_conditions(e1: &Polynomial, e2: &Polynomial, d: &Polynomial, n: usize, mode: ValidationMode) -> Vec<ConditionCheck> {
    let v = violations(e1, e2, d, n, mode);
    let failed = |pred: &dyn Fn(&Violation) -> bool| -> Vec<String> {
        v.iter().filter(|x| pred(x)).map(|x| x.to_string()).collect()
    };
    let mk = |condition: &'static str, issues: Vec<String>| ConditionCheck {
        condition,
        passed: issues.is_empty(),
        detail: if issues.is_empty() { "ok".into() } else { issues.join("; ") },
    };

    let degree = failed(&|x| matches!(x, Violation::DegreeBound { .. }));
    let nonvanishing = failed(&|x| matches!(x, Violation::DVanishesInDisc { .. }));
    let domination = failed(&|x| matches!(x, Violation::ModulusDomination { .. }));
    let reflection = failed(&|x| matches!(x, Violation::ReflectionMismatch { .. }));

    // x3 = D~/D must be unimodular on the circle; x1, x2 bounded by 1 there.
    let mut x3_issue = Vec::new();
    let mut bounded = [Vec::new(), Vec::new()];
    if degree.is_empty() && !d.is_zero() {
        let dr = d.reflect(n).unwrap_or_default();
        let (mut worst3, mut worst) = (0.0_f64, [0.0_f64; 2]);
        let mut vanished = false;
        for (_, lam) in unit_circle(VALIDATION_SAMPLES) {
            let dv = d.eval(lam);
            if dv.norm() < DENOM_TOL {
                vanished = true;
                continue;
            }
            worst3 = worst3.max(((dr.eval(lam) / dv).norm() - 1.0).abs());
            worst[0] = worst[0].max((e1.eval(lam) / dv).norm());
            worst[1] = worst[1].max((e2.eval(lam) / dv).norm());
        }
        if worst3 > 1e-9 {
            x3_issue.push(format!("|D~/D| deviates from 1 by {worst3:e} on the circle"));
        }
        if vanished && mode == ValidationMode::Strict {
            x3_issue.push("D vanishes at a circle sample".into());
        }
        for (i, w) in worst.iter().enumerate() {
            if *w > 1.0 + 1e-9 {
                bounded[i].push(format!("sup |E{}/D| = {w:.12} on the circle", i + 1));
            }
        }
    } else {
        x3_issue.push("not evaluable".into());
        bounded[0].push("not evaluable".into());
        bounded[1].push("not evaluable".into());
    }
    let [b1, b2] = bounded;

    vec![
        mk("degree_bound", degree),
        mk("d_nonvanishing", nonvanishing),
        mk("x3_inner", x3_issue),
        mk("x1_bounded", b1),
        mk("x2_bounded", b2),
        mk("modulus_domination", domination),
        mk("reflection", reflection),
    ]
}

/// A zero of the royal polynomial in the closed disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoyalNode {
    pub location: Complex64,
    /// Root order of the royal polynomial.
    pub raw_order: usize,
    /// `raw_order` inside the disc, `raw_order / 2` on the circle.
    pub multiplicity: usize,
    pub on_circle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TypeNK {
    pub n: usize,
    pub k: usize,
    pub royal_variety: bool,
}

impl TetraRational {
    /// Strict validation.
    pub fn new(e1: Polynomial, e2: Polynomial, d: Polynomial, n: usize) -> Result<Self> {
        validate(e1, e2, d, n, ValidationMode::Strict)
    }

    pub fn e1(&self) -> &Polynomial {
        &self.e1
    }

    pub fn e2(&self) -> &Polynomial {
        &self.e2
    }

    pub fn d(&self) -> &Polynomial {
        &self.d
    }

    /// `D~ = reflect(D, n)`, the numerator of `x3`.
    pub fn d_reflected(&self) -> &Polynomial {
        &self.d_reflected
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> ValidationMode {
        self.mode
    }

    pub fn to_data(&self) -> TetraRationalData {
        TetraRationalData { n: self.n, e1: self.e1.clone(), e2: self.e2.clone(), d: self.d.clone() }
    }

    /// `x(λ)` for `|λ| ≤ 1`.
    pub fn eval(&self, lambda: Complex64) -> Result<TetraPoint> {
        if lambda.norm() > 1.0 + DISC_TOL {
            return Err(Error::OutsideClosedDisc(lambda));
        }
        self.eval_anywhere(lambda)
    }

    /// `x(λ)` as a rational function, with no disc restriction.
    pub fn eval_anywhere(&self, lambda: Complex64) -> Result<TetraPoint> {
        let dv = self.d.eval(lambda);
        if dv.norm() < DENOM_TOL {
            return Err(Error::DenominatorVanishes(lambda));
        }
        Ok(TetraPoint::new(self.e1.eval(lambda) / dv, self.e2.eval(lambda) / dv, self.d_reflected.eval(lambda) / dv))
    }

    /// Blaschke degree of `x3`: the number of zeros of `D~` in the open disc.
    pub fn degree(&self) -> Result<usize> {
        if self.d_reflected.degree().unwrap_or(0) == 0 {
            return Ok(0);
        }
        Ok(self.d_reflected.raw_roots()?.iter().filter(|r| r.norm() < 1.0 - ROOT_TOL).count())
    }

    /// Winding number of `x3` around the circle (counterclockwise).
    pub fn winding_number(&self, samples: usize) -> Result<i64> {
        if samples < 256 {
            return Err(Error::TooFewSamples { got: samples, min: 256 });
        }
        let values: Vec<Complex64> = unit_circle(samples).map(|(_, lam)| self.eval(lam).map(|p| p.x3)).collect::<Result<_>>()?;
        let mut total = 0.0;
        for k in 0..samples {
            let step = (values[(k + 1) % samples] / values[k]).arg();
            if step.abs() > 0.75 * std::f64::consts::PI {
                return Err(Error::SamplingTooCoarse { jump: step.abs() });
            }
            total += step;
        }
        Ok((total / TAU).round() as i64)
    }

    /// `R_x = D~·D − E1·E2`.
    pub fn royal_polynomial(&self) -> Polynomial {
        &(&self.d_reflected * &self.d) - &(&self.e1 * &self.e2)
    }

    /// True when the royal polynomial vanishes identically (`x1·x2 = x3`).
    pub fn is_royal_variety(&self) -> bool {
        let scale = self.d.max_abs_coeff().powi(2).max(1.0);
        self.royal_polynomial().max_abs_coeff() <= ROYAL_ZERO_TOL * scale
    }

    pub fn royal_nodes(&self) -> Result<Vec<RoyalNode>> {
        self.royal_nodes_with(DEFAULT_CLUSTER_TOL, DEFAULT_CIRCLE_TOL)
    }

    /// Zeros of `R_x` in the closed disc with their multiplicities.
    pub fn royal_nodes_with(&self, cluster_tol: f64, circle_tol: f64) -> Result<Vec<RoyalNode>> {
        if self.is_royal_variety() {
            return Err(Error::RoyalVarietyFunction);
        }
        let mut r = self.royal_polynomial();
        r.trim(ROYAL_TRIM * r.max_abs_coeff());
        let raw = if r.degree().unwrap_or(0) == 0 { Vec::new() } else { r.raw_roots()? };

        let (mut inner, mut near) = (Vec::new(), Vec::new());
        for z in raw {
            let m = z.norm();
            if (m - 1.0).abs() < circle_tol {
                near.push(z);
            } else if m < 1.0 {
                inner.push(z);
            }
        }

        let mut nodes: Vec<RoyalNode> = RootMultiset::cluster(&inner, cluster_tol)
            .entries
            .into_iter()
            .map(|root| RoyalNode { location: root.location, raw_order: root.order, multiplicity: root.order, on_circle: false })
            .collect();
        for root in RootMultiset::cluster(&near, CIRCLE_CLUSTER_DISTANCE.max(cluster_tol)).entries {
            if root.order % 2 != 0 {
                return Err(Error::OddCircleRootOrder { location: root.location, order: root.order });
            }
            nodes.push(RoyalNode {
                location: root.location / root.location.norm(),
                raw_order: root.order,
                multiplicity: root.order / 2,
                on_circle: true,
            });
        }
        nodes.sort_by(|a, b| {
            (a.on_circle, a.location.norm(), a.location.arg())
                .partial_cmp(&(b.on_circle, b.location.norm(), b.location.arg()))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Ok(nodes)
    }

    /// Type `(n, k)`: node multiplicity in the closed disc and on the circle.
    pub fn type_nk(&self) -> Result<TypeNK> {
        if self.is_royal_variety() {
            return Ok(TypeNK { n: 0, k: 0, royal_variety: true });
        }
        let nodes = self.royal_nodes()?;
        Ok(TypeNK {
            n: nodes.iter().map(|v| v.multiplicity).sum(),
            k: nodes.iter().filter(|v| v.on_circle).map(|v| v.multiplicity).sum(),
            royal_variety: false,
        })
    }

    /// Whether the tetrablock defect vanishes on circles of radius 0.1, 0.5 and 0.9.
    pub fn is_superficial(&self, samples: usize, tol: f64) -> bool {
        let samples = samples.max(64);
        [0.1, 0.5, 0.9].iter().all(|&radius| {
            unit_circle(samples).all(|(_, lam)| match self.eval(lam * radius) {
                Ok(p) => tetra_defect(&p).abs() < tol,
                Err(_) => false,
            })
        })
    }

    /// Uniform circle samples with the distinguished-boundary defect `|x1 − conj(x2)·x3|`.
    pub fn circle_trace(&self, samples: usize) -> Result<Vec<TracePoint>> {
        if samples < 16 {
            return Err(Error::TooFewSamples { got: samples, min: 16 });
        }
        unit_circle(samples)
            .map(|(theta, lambda)| {
                let point = self.eval(lambda)?;
                Ok(TracePoint { theta, lambda, defect: point.distinguished_defect(), point })
            })
            .collect()
    }

    /// Largest `|E1|` and `|E2|` relative to `|D|` on the circle, i.e. the sup of `max(|x1|, |x2|)`.
    pub fn circle_sup(&self, samples: usize) -> Result<f64> {
        let mut sup = 0.0_f64;
        for (_, lam) in unit_circle(samples) {
            let p = self.eval(lam)?;
            sup = sup.max(p.x1.norm()).max(p.x2.norm());
        }
        Ok(sup)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub theta: f64,
    pub lambda: Complex64,
    pub point: TetraPoint,
    pub defect: f64,
}

/// A finite Blaschke product `c·Π (λ − α)/(1 − conj(α)λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeSpec {
    pub zeros: Vec<Complex64>,
    pub unimodular_constant: Complex64,
}

impl BlaschkeSpec {
    pub fn new(zeros: Vec<Complex64>, unimodular_constant: Complex64) -> Self {
        BlaschkeSpec { zeros, unimodular_constant }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    fn check(&self) -> Result<()> {
        if let Some(z) = self.zeros.iter().find(|z| z.norm() >= 1.0) {
            return Err(Error::InvalidSuperficialSpec(format!("Blaschke zero {z} is not inside the disc")));
        }
        if (self.unimodular_constant.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSuperficialSpec("Blaschke constant is not unimodular".into()));
        }
        Ok(())
    }

    /// Denominator `d` of degree ≤ m with `x3 = reflect(d, m)/d`, where `m` is
    /// the number of zeros: `d = conj(√c)·Π(1 − conj(α)λ)`.
    pub fn denominator(&self) -> Polynomial {
        let d0 = self
            .zeros
            .iter()
            .fold(Polynomial::one(), |acc, a| &acc * &Polynomial::new(vec![Complex64::new(1.0, 0.0), -a.conj()]));
        d0.scale(self.unimodular_constant.conj().sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperficialSpec {
    pub beta1: Complex64,
    pub beta2: Complex64,
    pub x3: BlaschkeSpec,
}

impl SuperficialSpec {
    fn check(&self) -> Result<()> {
        let total = self.beta1.norm() + self.beta2.norm();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSuperficialSpec(format!("|beta1| + |beta2| = {total}, expected 1")));
        }
        self.x3.check()
    }
}

/// `x = (β1 + conj(β2)·x3, β2 + conj(β1)·x3, x3)` over a Blaschke `x3`.
/// The declared index is the Blaschke degree; `n_bound` only caps it.
pub fn superficial_build(spec: &SuperficialSpec, n_bound: usize) -> Result<TetraRational> {
    spec.check()?;
    let n = spec.x3.degree();
    if n > n_bound {
        return Err(Error::InvalidSuperficialSpec(format!("Blaschke degree {n} exceeds bound {n_bound}")));
    }
    let d = spec.x3.denominator();
    let num = d.reflect(n)?;
    let e1 = &d.scale(spec.beta1) + &num.scale(spec.beta2.conj());
    let e2 = &d.scale(spec.beta2) + &num.scale(spec.beta1.conj());
    TetraRational::new(e1, e2, d, n)
}

/// `ω = conj(β2)/|β2|`, `k = β1/|β1|`.
pub fn omega_and_k(spec: &SuperficialSpec) -> Result<(Complex64, Complex64)> {
    if spec.beta1.norm() == 0.0 || spec.beta2.norm() == 0.0 {
        return Err(Error::UndefinedOmegaOrK);
    }
    Ok((spec.beta2.conj() / spec.beta2.norm(), spec.beta1 / spec.beta1.norm()))
}

/// Largest `|Ψ(ω, x(λ)) − k|` over `samples` points on each of the circles of
/// radius 0.1, 0.5, 0.9.
pub fn psi_omega_check(x: &TetraRational, spec: &SuperficialSpec, samples: usize) -> Result<f64> {
    let (omega, k) = omega_and_k(spec)?;
    let mut worst = 0.0_f64;
    for radius in [0.1, 0.5, 0.9] {
        for (_, lam) in unit_circle(samples.max(1)) {
            let p = x.eval(lam * radius)?;
            worst = worst.max((psi(omega, &p)? - k).norm());
        }
    }
    Ok(worst)
}

/// `x = (s/2, s/2, p)` for a rational Γ-inner `(s, p) = (s_num/denom, reflect(denom, n)/denom)`.
pub fn from_gamma_inner(s_num: &Polynomial, denom: &Polynomial, n: usize) -> Result<TetraRational> {
    let mut issues = Vec::new();
    for (name, p) in [("s", s_num), ("denominator", denom)] {
        if p.degree().unwrap_or(0) > n {
            issues.push(format!("deg({name}) exceeds {n}"));
        }
    }
    if issues.is_empty() {
        let dev = s_num.reflection_deviation(n);
        if dev > REFLECTION_TOL * s_num.max_abs_coeff().max(1.0) {
            issues.push(format!("s is not {n}-symmetric (deviation {dev:e})"));
        }
    }
    if denom.is_zero() {
        issues.push("denominator is zero".into());
    } else if denom.degree().unwrap_or(0) > 0 {
        for r in denom.raw_roots()? {
            if r.norm() <= 1.0 + ROOT_TOL {
                issues.push(format!("denominator vanishes at {r}"));
            }
        }
    }
    let mut d_max = 0.0_f64;
    let mut excess = 0.0_f64;
    for (_, lam) in unit_circle(VALIDATION_SAMPLES) {
        let dv = denom.eval(lam).norm();
        d_max = d_max.max(dv);
        excess = excess.max(s_num.eval(lam).norm() - 2.0 * dv);
    }
    if excess > DOMINATION_SLACK * d_max.max(1.0) {
        issues.push(format!("|s| exceeds 2|denominator| by {excess:e}"));
    }
    if !issues.is_empty() {
        return Err(Error::NotGammaInner(issues.join("; ")));
    }
    let e = s_num.scale_real(0.5);
    TetraRational::new(e.clone(), e, denom.clone(), n)
}

/// Numerical evidence for the structural identities every tetra-inner
/// function satisfies. Deviations are relative to `max|D|` (or its square).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    /// `max | |E1| − |E2| |` on the circle.
    pub modulus_balance: f64,
    /// `max | λ^{−n}R_x − (|D|² − |E1|²) |` on the circle.
    pub royal_identity_e1: f64,
    /// Same with `E2`.
    pub royal_identity_e2: f64,
    /// Coefficient deviation of `R_x` from `2n`-symmetry.
    pub royal_symmetry: f64,
    /// `min λ^{−n}R_x` on the circle.
    pub royal_min_on_circle: f64,
    pub degree: usize,
    pub winding_number: Option<i64>,
    /// `None` for royal-variety functions.
    pub node_multiplicity_sum: Option<usize>,
    /// `max |x1(λ) − conj(x2(1/conj λ))·x3(λ)|` at points with `|λ| ∈ {0.5, 1, 2}`.
    pub reflection_identity: f64,
    /// `max | |x_i(τ)| − 1 |` over circle nodes `τ`.
    pub circle_node_modulus: Option<f64>,
}

impl InvariantReport {
    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("modulus_balance", self.modulus_balance < 1e-10),
            ("royal_identity", self.royal_identity_e1 < 1e-9 && self.royal_identity_e2 < 1e-9),
            ("royal_symmetry", self.royal_symmetry < 1e-10 && self.royal_min_on_circle >= -1e-10),
            ("winding_equals_degree", self.winding_number == Some(self.degree as i64)),
            ("node_multiplicities_equal_degree", self.node_multiplicity_sum.is_none_or(|s| s == self.degree)),
            ("reflection_identity", self.reflection_identity < 1e-9),
            ("circle_nodes_on_boundary", self.circle_node_modulus.is_none_or(|v| v < 1e-8)),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }
}

/// Runs the invariant suite; `seed` drives the off-circle sample points.
pub fn invariant_report(x: &TetraRational, seed: u64) -> Result<InvariantReport> {
    let scale = x.d.max_abs_coeff().max(1.0);
    let d_sup = unit_circle(INVARIANT_SAMPLES).map(|(_, l)| x.d.eval(l).norm()).fold(0.0, f64::max).max(1e-300);
    let r = x.royal_polynomial();
    let shifted = laurent_shift(&r, x.n).ok();

    let (mut balance, mut id1, mut id2, mut rmin) = (0.0_f64, 0.0_f64, 0.0_f64, f64::INFINITY);
    for (theta, lam) in unit_circle(INVARIANT_SAMPLES) {
        let d2 = x.d.eval(lam).norm_sqr();
        let (a1, a2) = (x.e1.eval(lam).norm(), x.e2.eval(lam).norm());
        balance = balance.max((a1 - a2).abs());
        let rv = match &shifted {
            Some(t) => t.eval_angle(theta),
            None => (r.eval(lam) / lam.powu(x.n as u32)).re,
        };
        id1 = id1.max((rv - (d2 - a1 * a1)).abs());
        id2 = id2.max((rv - (d2 - a2 * a2)).abs());
        rmin = rmin.min(rv);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reflection = 0.0_f64;
    for i in 0..64 {
        let radius = [0.5, 1.0, 2.0][i % 3];
        let lam = Complex64::from_polar(radius, rng.gen::<f64>() * TAU);
        let (Ok(p), Ok(q)) = (x.eval_anywhere(lam), x.eval_anywhere(lam.conj().inv())) else { continue };
        let dev = (p.x1 - q.x2.conj() * p.x3).norm() / (1.0 + p.x1.norm());
        reflection = reflection.max(dev);
    }

    let degree = x.degree()?;
    let (node_sum, circle_mod) = if x.is_royal_variety() {
        (None, None)
    } else {
        let nodes = x.royal_nodes()?;
        let mut worst: Option<f64> = None;
        for v in nodes.iter().filter(|v| v.on_circle) {
            let p = x.eval(v.location)?;
            let dev = (p.x1.norm() - 1.0).abs().max((p.x2.norm() - 1.0).abs());
            worst = Some(worst.map_or(dev, |w| w.max(dev)));
        }
        (Some(nodes.iter().map(|v| v.multiplicity).sum()), worst)
    };

    Ok(InvariantReport {
        modulus_balance: balance / d_sup,
        royal_identity_e1: id1 / d_sup.powi(2).max(1.0),
        royal_identity_e2: id2 / d_sup.powi(2).max(1.0),
        royal_symmetry: r.reflection_deviation(2 * x.n) / scale.powi(2),
        royal_min_on_circle: rmin / d_sup.powi(2).max(1.0),
        degree,
        winding_number: x.winding_number(VALIDATION_SAMPLES).ok(),
        node_multiplicity_sum: node_sum,
        reflection_identity: reflection,
        circle_node_modulus: circle_mod,
    })
}
