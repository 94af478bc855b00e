//! Convex combinations inside a fixed-`x3` slice, midpoint decompositions
//! showing non-extremality, and the symmetric extremality certificate.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fejriesz::laurent_shift;
use crate::polycx::{max_coeff_diff, Polynomial};
use crate::tetrafun::{unit_circle, validate, RoyalNode, TetraRational, VALIDATION_SAMPLES};

const SAFETY: f64 = 0.9;
const PROPORTIONAL_TOL: f64 = 1e-10;
const SYMMETRIC_TOL: f64 = 1e-10;
const SUP_ONE_TOL: f64 = 1e-12;
/// Margin used when [`perturb_nonextreme`] falls back to scaling.
pub const DEFAULT_MARGIN: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PerturbationMethod {
    EpsilonScaling,
    GPerturbEven,
    GPerturbOdd,
}

/// `x = (x_plus + x_minus)/2` with both halves tetra-inner.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationResult {
    pub x_plus: TetraRational,
    pub x_minus: TetraRational,
    /// `ε` for scaling, `t` for the `g`-perturbation.
    pub t_used: f64,
    /// Perturbation direction; zero for scaling.
    pub g: Polynomial,
    pub method: PerturbationMethod,
    /// Set when the components are identically zero and the split is trivial.
    pub degenerate: bool,
}

impl PerturbationResult {
    /// Largest coefficient error of the midpoint against `x`.
    pub fn midpoint_error(&self, x: &TetraRational) -> f64 {
        let half = |a: &Polynomial, b: &Polynomial| (a + b).scale_real(0.5);
        max_coeff_diff(&half(self.x_plus.e1(), self.x_minus.e1()), x.e1())
            .max(max_coeff_diff(&half(self.x_plus.e2(), self.x_minus.e2()), x.e2()))
            .max(max_coeff_diff(self.x_plus.d(), x.d()))
            .max(max_coeff_diff(self.x_minus.d(), x.d()))
    }
}

/// `t·x + (1 − t)·y` over a common denominator. `y.d` must be a real
/// multiple of `x.d`, which is exactly the condition that `x3` agrees.
pub fn convex_combine(x: &TetraRational, y: &TetraRational, t: f64) -> Result<TetraRational> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("t = {t} is not in [0, 1]")));
    }
    if x.n() != y.n() {
        return Err(Error::ThirdComponentMismatch);
    }
    let j = (0..x.d().coeffs().len())
        .max_by(|&a, &b| x.d().coeff(a).norm().total_cmp(&x.d().coeff(b).norm()))
        .ok_or(Error::ThirdComponentMismatch)?;
    let ratio = y.d().coeff(j) / x.d().coeff(j);
    if ratio.norm() == 0.0 || ratio.im.abs() > PROPORTIONAL_TOL * ratio.norm() {
        return Err(Error::ThirdComponentMismatch);
    }
    let c = ratio.re;
    if max_coeff_diff(y.d(), &x.d().scale_real(c)) > PROPORTIONAL_TOL * y.d().max_abs_coeff().max(1.0) {
        return Err(Error::ThirdComponentMismatch);
    }
    let mix = |a: &Polynomial, b: &Polynomial| &a.scale_real(t) + &b.scale_real((1.0 - t) / c);
    validate(mix(x.e1(), y.e1()), mix(x.e2(), y.e2()), x.d().clone(), x.n(), x.mode())
}

fn check_halves(e1: [Polynomial; 2], e2: [Polynomial; 2], x: &TetraRational) -> Result<(TetraRational, TetraRational)> {
    let [p1, m1] = e1;
    let [p2, m2] = e2;
    let wrap = |e: Error| Error::ConstructionInconsistent(format!("perturbed function failed validation: {e}"));
    let plus = validate(p1, p2, x.d().clone(), x.n(), x.mode()).map_err(wrap)?;
    let minus = validate(m1, m2, x.d().clone(), x.n(), x.mode()).map_err(wrap)?;
    Ok((plus, minus))
}

/// `((1 ± ε)x1, (1 ± ε)x2, x3)` with `ε = margin·(1/s* − 1)`, where `s*` is
/// the circle sup of `max(|x1|, |x2|)`. Needs no royal nodes on the circle.
pub fn scale_nonextreme(x: &TetraRational, margin: f64) -> Result<PerturbationResult> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::InvalidParameter(format!("margin = {margin} is not in (0, 1)")));
    }
    if x.e1().is_zero() && x.e2().is_zero() {
        return Ok(PerturbationResult {
            x_plus: x.clone(),
            x_minus: x.clone(),
            t_used: 1.0,
            g: Polynomial::zero(),
            method: PerturbationMethod::EpsilonScaling,
            degenerate: true,
        });
    }
    let ty = x.type_nk()?;
    if ty.royal_variety {
        return Err(Error::RoyalVarietyFunction);
    }
    if ty.k > 0 {
        return Err(Error::CircleNodesPresent);
    }
    let sup = x.circle_sup(VALIDATION_SAMPLES)?;
    if sup >= 1.0 - SUP_ONE_TOL {
        return Err(Error::NumericalSupAtOne { sup });
    }
    let eps = margin * (1.0 / sup - 1.0);
    let (plus, minus) = check_halves(
        [x.e1().scale_real(1.0 + eps), x.e1().scale_real(1.0 - eps)],
        [x.e2().scale_real(1.0 + eps), x.e2().scale_real(1.0 - eps)],
        x,
    )?;
    Ok(PerturbationResult {
        x_plus: plus,
        x_minus: minus,
        t_used: eps,
        g: Polynomial::zero(),
        method: PerturbationMethod::EpsilonScaling,
        degenerate: false,
    })
}

/// The `n`-symmetric direction vanishing to second order at the circle
/// nodes `tau` (listed with multiplicity).
pub fn perturbation_direction(tau: &[Complex64], n: usize) -> (Polynomial, PerturbationMethod) {
    let k = tau.len();
    let m = n / 2;
    let one = Complex64::new(1.0, 0.0);
    let squares = tau.iter().fold(Polynomial::one(), |acc, &s| {
        let f = Polynomial::new(vec![-s, one]);
        &(&acc * &f) * &f
    });
    if n.is_multiple_of(2) {
        let c: Complex64 = tau.iter().map(|s| s.conj()).product();
        (&Polynomial::monomial(c, m - k) * &squares, PerturbationMethod::GPerturbEven)
    } else {
        let t1 = tau[0];
        let w2 = -t1.conj() * tau.iter().map(|s| s.conj() * s.conj()).product::<Complex64>();
        let omega = w2.sqrt();
        let g = &(&Polynomial::monomial(omega, m - k) * &Polynomial::new(vec![-t1, one])) * &squares;
        (g, PerturbationMethod::GPerturbOdd)
    }
}

fn circle_sup(p: &Polynomial) -> f64 {
    unit_circle(VALIDATION_SAMPLES).map(|(_, l)| p.eval(l).norm()).fold(0.0, f64::max)
}

fn node_product(nodes: &[&RoyalNode], lam: Complex64) -> f64 {
    nodes.iter().map(|v| (lam - v.location).norm_sqr().powi(v.multiplicity as i32)).product()
}

/// Splits `x` as the midpoint of `(E1 ± tg, E2 ± tg, D)`. Requires `2k ≤ n`;
/// for `k = 0` it falls back to [`scale_nonextreme`].
pub fn perturb_nonextreme(x: &TetraRational) -> Result<PerturbationResult> {
    let ty = x.type_nk()?;
    if ty.royal_variety {
        return Err(Error::RoyalVarietyFunction);
    }
    let n = x.n();
    if 2 * ty.k > n {
        return Err(Error::ExtremalityNotDisproved { twice_k: 2 * ty.k, n });
    }
    if ty.k == 0 {
        return scale_nonextreme(x, DEFAULT_MARGIN);
    }

    let nodes = x.royal_nodes()?;
    let tau: Vec<Complex64> = nodes
        .iter()
        .filter(|v| v.on_circle)
        .flat_map(|v| std::iter::repeat_n(v.location, v.multiplicity))
        .collect();
    let (g, method) = perturbation_direction(&tau, n);
    if !g.is_n_symmetric(n, 1e-12) {
        return Err(Error::ConstructionInconsistent("perturbation direction is not n-symmetric".into()));
    }

    // R_x = r·Π Q_σ; read r where the node product is largest.
    let all: Vec<&RoyalNode> = nodes.iter().collect();
    let interior: Vec<&RoyalNode> = nodes.iter().filter(|v| !v.on_circle).collect();
    let shifted = laurent_shift(&x.royal_polynomial(), n)?;
    let (mut best, mut theta0) = (f64::NEG_INFINITY, 0.0);
    let mut m_min = f64::INFINITY;
    for (theta, lam) in unit_circle(VALIDATION_SAMPLES) {
        let q = node_product(&all, lam);
        if q > best {
            best = q;
            theta0 = theta;
        }
        m_min = m_min.min(node_product(&interior, lam));
    }
    let r = shifted.eval_angle(theta0) / best;

    let e_sup = circle_sup(x.e1());
    let g_sup = circle_sup(&g);
    let divisor = if method == PerturbationMethod::GPerturbEven { 8.0 } else { 16.0 };
    let t = SAFETY * (2.0 * e_sup / g_sup).min(r * m_min / (divisor * e_sup));
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::DegeneratePerturbation);
    }

    let tg = g.scale_real(t);
    let (plus, minus) = check_halves([x.e1() + &tg, x.e1() - &tg], [x.e2() + &tg, x.e2() - &tg], x)?;
    Ok(PerturbationResult { x_plus: plus, x_minus: minus, t_used: t, g, method, degenerate: false })
}

fn is_symmetric(x: &TetraRational) -> bool {
    let scale = x.e1().max_abs_coeff().max(x.d().max_abs_coeff()).max(1.0);
    max_coeff_diff(x.e1(), x.e2()) <= SYMMETRIC_TOL * scale
}

/// True when `x1 = x2` and `2k > n`, which certifies `x` is extreme.
/// `false` only means "not certified".
pub fn certify_extreme_symmetric(x: &TetraRational) -> bool {
    if !is_symmetric(x) {
        return false;
    }
    match x.type_nk() {
        Ok(ty) => !ty.royal_variety && 2 * ty.k > x.n(),
        Err(_) => false,
    }
}

/// Royal polynomial of the Γ-inner function `(2x1, x3)`: `4(D~D − E1²)`.
pub fn gamma_royal(x: &TetraRational) -> Result<Polynomial> {
    if !is_symmetric(x) {
        return Err(Error::NotSymmetric);
    }
    Ok((&(x.d_reflected() * x.d()) - &(x.e1() * x.e1())).scale_real(4.0))
}
