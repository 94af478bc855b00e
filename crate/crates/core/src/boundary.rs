//! Pointwise geometry of the closed tetrablock and the symmetrized bidisc.
//!
//! Membership in the closed tetrablock is decided by the defect
//!
//! ```text
//! δ(x) = |x1 − conj(x2)·x3| + |x2 − conj(x1)·x3| − (1 − |x3|²)
//! ```
//!
//! which is negative exactly on the open tetrablock, zero on its topological
//! boundary (together with `|x1|, |x2| ≤ 1`) and positive outside. Points of the
//! closed set with `|x3| = 1` form the distinguished boundary.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance on membership defects.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-9;

const PSI_POLE_TOL: f64 = 1e-12;
const MU_CAP: f64 = 1e6;
const MU_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TetraPoint {
    pub x1: Complex64,
    pub x2: Complex64,
    pub x3: Complex64,
}

impl TetraPoint {
    pub fn new(x1: Complex64, x2: Complex64, x3: Complex64) -> Self {
        TetraPoint { x1, x2, x3 }
    }

    /// Coordinatewise affine combination `t·self + (1 − t)·other`.
    pub fn lerp(&self, other: &TetraPoint, t: f64) -> TetraPoint {
        TetraPoint {
            x1: self.x1 * t + other.x1 * (1.0 - t),
            x2: self.x2 * t + other.x2 * (1.0 - t),
            x3: self.x3 * t + other.x3 * (1.0 - t),
        }
    }

    /// `|x1 − conj(x2)·x3|`, which vanishes on the distinguished boundary.
    pub fn distinguished_defect(&self) -> f64 {
        (self.x1 - self.x2.conj() * self.x3).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaPoint {
    pub s: Complex64,
    pub p: Complex64,
}

impl GammaPoint {
    pub fn new(s: Complex64, p: Complex64) -> Self {
        GammaPoint { s, p }
    }
}

/// Region of a point relative to the closed tetrablock.
///
/// The distinguished boundary is contained in the topological boundary; the
/// most specific label is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TetraRegion {
    Interior,
    TopologicalBoundary,
    DistinguishedBoundary,
    Outside,
}

impl TetraRegion {
    pub fn in_closure(self) -> bool {
        self != TetraRegion::Outside
    }
}

/// Region of a point relative to the closed symmetrized bidisc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GammaRegion {
    OpenG,
    GammaBoundaryTop,
    GammaDistinguished,
    /// In the closed set by the closed criterion but matched by neither the
    /// open nor the boundary test. With a common tolerance for all tests the
    /// three bands cover the closed set, so this label only appears if the
    /// bands are changed independently.
    ClosedGammaInteriorOnly,
    Outside,
}

impl GammaRegion {
    pub fn in_closure(self) -> bool {
        self != GammaRegion::Outside
    }
}

/// A complex 2×2 matrix `[[a11, a12], [a21, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Matrix2 {
    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Matrix2 { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Matrix2::new(o, z, z, o)
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Matrix2::new(a, z, z, b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Matrix2::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }
}

/// `Ψ(z, x) = (x3·z − x1)/(x2·z − 1)`.
pub fn psi(z: Complex64, x: &TetraPoint) -> Result<Complex64> {
    let den = x.x2 * z - 1.0;
    if den.norm() < PSI_POLE_TOL {
        return Err(Error::PsiPole);
    }
    Ok((x.x3 * z - x.x1) / den)
}

/// Membership defect δ(x); negative inside the open tetrablock.
pub fn tetra_defect(x: &TetraPoint) -> f64 {
    (x.x1 - x.x2.conj() * x.x3).norm() + (x.x2 - x.x1.conj() * x.x3).norm()
        - (1.0 - x.x3.norm_sqr())
}

/// Closed-set membership with tolerance: `δ ≤ tol`, plus `|x1| ≤ 1 + tol`
/// when `|x3|` is within `tol` of one.
pub fn in_closed_tetrablock(x: &TetraPoint, tol: f64) -> bool {
    let on_circle = (x.x3.norm() - 1.0).abs() <= tol;
    tetra_defect(x) <= tol && (!on_circle || x.x1.norm() <= 1.0 + tol)
}

pub fn classify_tetra(x: &TetraPoint, tol: f64) -> TetraRegion {
    let defect = tetra_defect(x);
    let closed = in_closed_tetrablock(x, tol);
    if closed && (x.x3.norm() - 1.0).abs() <= tol {
        TetraRegion::DistinguishedBoundary
    } else if defect < -tol {
        TetraRegion::Interior
    } else if defect.abs() <= tol && x.x1.norm() <= 1.0 + tol && x.x2.norm() <= 1.0 + tol {
        TetraRegion::TopologicalBoundary
    } else {
        TetraRegion::Outside
    }
}

/// `|s − conj(s)·p| − (1 − |p|²)`; negative inside the open symmetrized bidisc.
pub fn gamma_defect(g: &GammaPoint) -> f64 {
    (g.s - g.s.conj() * g.p).norm() - (1.0 - g.p.norm_sqr())
}

pub fn classify_gamma(g: &GammaPoint, tol: f64) -> GammaRegion {
    let defect = gamma_defect(g);
    let s_ok = g.s.norm() <= 2.0 + tol;
    if (g.p.norm() - 1.0).abs() <= tol && s_ok && (g.s - g.s.conj() * g.p).norm() <= tol {
        GammaRegion::GammaDistinguished
    } else if defect < -tol {
        GammaRegion::OpenG
    } else if defect.abs() <= tol && s_ok {
        GammaRegion::GammaBoundaryTop
    } else if defect <= tol && s_ok {
        GammaRegion::ClosedGammaInteriorOnly
    } else {
        GammaRegion::Outside
    }
}

/// `π(A) = (a11, a22, det A)`.
pub fn pi_map(a: &Matrix2) -> TetraPoint {
    TetraPoint::new(a.a11, a.a22, a.det())
}

/// `μ_Diag(A) ≤ 1`, decided through membership of `π(A)` in the closed tetrablock.
pub fn mu_diag_le_one(a: &Matrix2, tol: f64) -> bool {
    classify_tetra(&pi_map(a), tol).in_closure()
}

/// `μ_Diag(A)` for the diagonal 2×2 structure.
///
/// Scaling the perturbation by `r` maps `π(A)` to `(r·a11, r·a22, r²·det A)`;
/// membership of that point is monotone in `r`, so `1/μ` is found by bisection
/// on `[0, 10⁶]`. Returns 0 when the point stays in the closed tetrablock up to
/// the cap. `tol` is the relative bisection tolerance.
pub fn mu_diag_value(a: &Matrix2, tol: f64) -> f64 {
    // The defect can touch zero tangentially (it behaves like −(1 − r)³ for the
    // identity), so the predicate allows rounding-level slack.
    let inside = |r: f64| {
        let x = pi_map(&a.scale(Complex64::new(r, 0.0)));
        let size = 1.0 + x.x1.norm() + x.x2.norm() + x.x3.norm();
        in_closed_tetrablock(&x, 16.0 * f64::EPSILON * size * size)
    };
    if inside(MU_CAP) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0_f64, MU_CAP);
    for _ in 0..MU_MAX_ITER {
        if hi - lo <= tol * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    2.0 / (lo + hi)
}

/// `(s, p) ↦ (s/2, s/2, p)`.
pub fn gamma_to_tetra(g: &GammaPoint) -> TetraPoint {
    TetraPoint::new(g.s * 0.5, g.s * 0.5, g.p)
}

/// `x ↦ (x1 + x2, x3)`.
pub fn tetra_to_gamma_sum(x: &TetraPoint) -> GammaPoint {
    GammaPoint::new(x.x1 + x.x2, x.x3)
}

/// `x ↦ (i·x1 − i·x2, x3)`.
pub fn tetra_to_gamma_diff(x: &TetraPoint) -> GammaPoint {
    let i = Complex64::new(0.0, 1.0);
    GammaPoint::new(i * x.x1 - i * x.x2, x.x3)
}

/// `x ↦ (a·x1 + conj(a)·x2, x3)`.
pub fn tetra_to_gamma_weighted(x: &TetraPoint, a: Complex64) -> GammaPoint {
    GammaPoint::new(a * x.x1 + a.conj() * x.x2, x.x3)
}

/// Random points built from the parametrization
/// `x1 = β1 + conj(β2)·x3`, `x2 = β2 + conj(β1)·x3`.
pub mod sampling {
    use super::*;

    /// Uniform point of the disc of radius `r`.
    pub fn disc_point<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Complex64 {
        let rho = r * rng.gen::<f64>().sqrt();
        Complex64::from_polar(rho, rng.gen_range(0.0..std::f64::consts::TAU))
    }

    pub fn circle_point<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
        Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
    }

    /// `(β1, β2)` with `|β1| + |β2| = total`.
    pub fn betas<R: Rng + ?Sized>(rng: &mut R, total: f64) -> (Complex64, Complex64) {
        let split = rng.gen::<f64>();
        (
            Complex64::from_polar(total * split, rng.gen_range(0.0..std::f64::consts::TAU)),
            Complex64::from_polar(total * (1.0 - split), rng.gen_range(0.0..std::f64::consts::TAU)),
        )
    }

    pub fn from_betas(b1: Complex64, b2: Complex64, x3: Complex64) -> TetraPoint {
        TetraPoint::new(b1 + b2.conj() * x3, b2 + b1.conj() * x3, x3)
    }

    /// A point of the open tetrablock.
    pub fn interior<R: Rng + ?Sized>(rng: &mut R) -> TetraPoint {
        let x3 = disc_point(rng, 0.999);
        let total = 0.999 * rng.gen::<f64>();
        let (b1, b2) = betas(rng, total);
        from_betas(b1, b2, x3)
    }

    /// A point of the closed tetrablock with prescribed third coordinate.
    pub fn closed_with_x3<R: Rng + ?Sized>(rng: &mut R, x3: Complex64) -> TetraPoint {
        let total = rng.gen::<f64>();
        let (b1, b2) = betas(rng, total);
        from_betas(b1, b2, x3)
    }

    pub fn closed<R: Rng + ?Sized>(rng: &mut R) -> TetraPoint {
        let x3 = disc_point(rng, 1.0);
        closed_with_x3(rng, x3)
    }

    /// A point of the distinguished boundary: `|x3| = 1`, `|x1| ≤ 1`, `x2 = conj(x1)·x3`.
    pub fn distinguished<R: Rng + ?Sized>(rng: &mut R) -> TetraPoint {
        let x3 = circle_point(rng);
        distinguished_with_x3(rng, x3)
    }

    pub fn distinguished_with_x3<R: Rng + ?Sized>(rng: &mut R, x3: Complex64) -> TetraPoint {
        let x1 = disc_point(rng, 1.0);
        TetraPoint::new(x1, x1.conj() * x3, x3)
    }

    /// A point of the closed symmetrized bidisc, `(z + w, z·w)` with `|z|, |w| ≤ 1`.
    pub fn gamma_closed<R: Rng + ?Sized>(rng: &mut R) -> GammaPoint {
        let z = disc_point(rng, 1.0);
        let w = disc_point(rng, 1.0);
        GammaPoint::new(z + w, z * w)
    }

    /// A random 2×2 unitary `e^{iφ}·[[a, b], [−conj b, conj a]]`.
    pub fn unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix2 {
        let theta = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let a = Complex64::from_polar(theta.cos(), rng.gen_range(0.0..std::f64::consts::TAU));
        let b = Complex64::from_polar(theta.sin(), rng.gen_range(0.0..std::f64::consts::TAU));
        let phase = circle_point(rng);
        Matrix2::new(a * phase, b * phase, -b.conj() * phase, a.conj() * phase)
    }

    /// Matrix with independent entries uniform in the disc of radius `r`.
    pub fn matrix<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Matrix2 {
        Matrix2::new(disc_point(rng, r), disc_point(rng, r), disc_point(rng, r), disc_point(rng, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = DEFAULT_MEMBERSHIP_TOL;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn psi_examples() {
        let (x1, x2) = (c(0.3, -0.2), c(0.1, 0.4));
        let x = TetraPoint::new(x1, x2, x1 * x2);
        for z in [c(0.5, 0.0), c(0.0, 0.9), c(-0.7, 0.2)] {
            assert!((psi(z, &x).unwrap() - x1).norm() < 1e-15);
        }
        let zero = TetraPoint::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(psi(c(0.4, 0.1), &zero).unwrap(), c(0.0, 0.0));
        let x = TetraPoint::new(c(0.0, 1.0), c(1.0, 0.0), c(0.0, 1.0));
        assert_eq!(psi(c(0.0, 0.0), &x).unwrap(), c(0.0, 1.0));
        assert!(matches!(psi(c(1.0, 0.0), &x), Err(Error::PsiPole)));
    }

    #[test]
    fn classify_tetra_examples() {
        let origin = TetraPoint::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(classify_tetra(&origin, TOL), TetraRegion::Interior);
        let x = TetraPoint::new(c(0.0, 1.0), c(1.0, 0.0), c(0.0, 1.0));
        assert_eq!(classify_tetra(&x, TOL), TetraRegion::DistinguishedBoundary);
        let y = TetraPoint::new(c(-0.5, 0.5), c(0.5, 0.5), c(0.0, 0.0));
        assert_eq!(classify_tetra(&y, TOL), TetraRegion::Outside);
        assert!((tetra_defect(&y) - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let bd = TetraPoint::new(c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0));
        assert_eq!(classify_tetra(&bd, TOL), TetraRegion::TopologicalBoundary);
    }

    #[test]
    fn circle_x3_requires_bounded_x1() {
        // x1 = conj(x2)·x3 with |x3| = 1 but |x1| > 1
        let x = TetraPoint::new(c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0));
        assert!(tetra_defect(&x) <= 0.0);
        assert_eq!(classify_tetra(&x, TOL), TetraRegion::Outside);
    }

    #[test]
    fn classify_gamma_examples() {
        assert_eq!(classify_gamma(&GammaPoint::new(c(0.0, 0.0), c(0.0, 0.0)), TOL), GammaRegion::OpenG);
        assert_eq!(
            classify_gamma(&GammaPoint::new(c(2.0, 0.0), c(1.0, 0.0)), TOL),
            GammaRegion::GammaDistinguished
        );
        assert_eq!(classify_gamma(&GammaPoint::new(c(3.0, 0.0), c(0.0, 0.0)), TOL), GammaRegion::Outside);
        // z = 1, w = 0: on the boundary but |p| = 0
        assert_eq!(
            classify_gamma(&GammaPoint::new(c(1.0, 0.0), c(0.0, 0.0)), TOL),
            GammaRegion::GammaBoundaryTop
        );
    }

    #[test]
    fn pi_map_examples() {
        assert_eq!(pi_map(&Matrix2::identity()), TetraPoint::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)));
        let (phi, psi_) = (c(0.3, 0.1), c(-0.2, 0.6));
        assert_eq!(pi_map(&Matrix2::diag(phi, psi_)), TetraPoint::new(phi, psi_, phi * psi_));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rot = Matrix2::new(phi * s, psi_ * s, -phi * s, psi_ * s);
        let x = pi_map(&rot);
        assert!((x.x1 - phi * s).norm() < 1e-15);
        assert!((x.x2 - psi_ * s).norm() < 1e-15);
        assert!((x.x3 - phi * psi_).norm() < 1e-15);
    }

    #[test]
    fn mu_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert!(mu_diag_le_one(&sampling::unitary(&mut rng), TOL));
        }
        assert!(!mu_diag_le_one(&Matrix2::identity().scale(c(2.0, 0.0)), TOL));
        let zero = Matrix2::diag(c(0.0, 0.0), c(0.0, 0.0));
        assert!(mu_diag_le_one(&zero, TOL));

        assert!((mu_diag_value(&Matrix2::identity(), 1e-12) - 1.0).abs() < 1e-10);
        assert_eq!(mu_diag_value(&zero, 1e-12), 0.0);
        let half = Matrix2::diag(c(0.5, 0.0), c(0.0, 0.0));
        assert!((mu_diag_value(&half, 1e-12) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn mu_identity_matches_classification_sweep() {
        // oracle: scan r and record the last r with (r, r, r²) in the closed set
        let mut last_inside = 0.0;
        for k in 0..=4000 {
            let r = k as f64 * 5e-4;
            let x = TetraPoint::new(c(r, 0.0), c(r, 0.0), c(r * r, 0.0));
            if classify_tetra(&x, 0.0).in_closure() {
                last_inside = r;
            }
        }
        assert!((last_inside - 1.0).abs() <= 5e-4);
        assert!((1.0 / mu_diag_value(&Matrix2::identity(), 1e-12) - last_inside).abs() <= 5e-4);
    }

    #[test]
    fn embedding_examples() {
        let x = gamma_to_tetra(&GammaPoint::new(c(2.0, 0.0), c(1.0, 0.0)));
        assert_eq!(x, TetraPoint::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)));
        assert_eq!(classify_tetra(&x, TOL), TetraRegion::DistinguishedBoundary);
        let o = gamma_to_tetra(&GammaPoint::new(c(0.0, 0.0), c(0.0, 0.0)));
        assert_eq!(o, TetraPoint::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)));
        assert_eq!(tetra_to_gamma_sum(&o), GammaPoint::new(c(0.0, 0.0), c(0.0, 0.0)));
        assert_eq!(tetra_to_gamma_diff(&o), GammaPoint::new(c(0.0, 0.0), c(0.0, 0.0)));

        // (1, λ, λ) at λ = 1
        let at_one = TetraPoint::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        let g = tetra_to_gamma_sum(&at_one);
        assert_eq!(g, GammaPoint::new(c(2.0, 0.0), c(1.0, 0.0)));
        assert_eq!(classify_gamma(&g, TOL), GammaRegion::GammaDistinguished);
    }

    #[test]
    fn gamma_points_embed_into_closed_tetrablock() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let g = sampling::gamma_closed(&mut rng);
            assert!(classify_gamma(&g, TOL).in_closure());
            assert!(classify_tetra(&gamma_to_tetra(&g), TOL).in_closure());
        }
    }

    #[test]
    fn samplers_land_in_their_regions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            assert_eq!(classify_tetra(&sampling::interior(&mut rng), TOL), TetraRegion::Interior);
            assert!(classify_tetra(&sampling::closed(&mut rng), TOL).in_closure());
            assert_eq!(
                classify_tetra(&sampling::distinguished(&mut rng), TOL),
                TetraRegion::DistinguishedBoundary
            );
        }
    }
}
