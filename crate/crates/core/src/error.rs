use thiserror::Error;

/// A single violated condition reported by [`crate::tetrafun::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// A component polynomial has degree above the declared bound.
    DegreeBound { component: &'static str, degree: usize, bound: usize },
    /// The denominator has a root inside the disc (or on the circle in strict mode).
    DVanishesInDisc { location: num_complex::Complex64 },
    /// `e1` is not the reflection of `e2`.
    ReflectionMismatch { max_deviation: f64 },
    /// `|e_i| > |d|` somewhere on the circle.
    ModulusDomination { component: &'static str, excess: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DegreeBound { component, degree, bound } => {
                write!(f, "DegreeBound: deg({component}) = {degree} > {bound}")
            }
            Violation::DVanishesInDisc { location } => {
                write!(f, "DVanishesInDisc: D has a root at {location}")
            }
            Violation::ReflectionMismatch { max_deviation } => {
                write!(f, "ReflectionMismatch: max coefficient deviation {max_deviation:e}")
            }
            Violation::ModulusDomination { component, excess } => {
                write!(f, "ModulusDomination: |{component}| exceeds |D| by {excess:e}")
            }
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("polynomial of degree {degree} cannot be reflected with index {index}")]
    DegreeExceedsReflectionIndex { degree: usize, index: usize },
    #[error("the zero polynomial has every complex number as a root")]
    ZeroPolynomialHasAllRoots,
    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("psi is undefined: x2*z = 1")]
    PsiPole,

    #[error("polynomial is not 2n-symmetric (deviation {deviation:e})")]
    NotTwoNSymmetric { deviation: f64 },
    #[error("trigonometric polynomial is negative on the circle (min {min:e})")]
    NotNonnegativeOnCircle { min: f64 },
    #[error("circle root near {location} has odd order {order}")]
    OddCircleRootOrder { location: num_complex::Complex64, order: usize },
    #[error("trigonometric polynomial is identically zero")]
    ZeroTrigPolynomial,
    #[error("root pairing failed: {inside} roots inside vs {outside} outside the circle")]
    UnpairedRoots { inside: usize, outside: usize },

    #[error("invalid tetra-inner data: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("denominator vanishes at {0}")]
    DenominatorVanishes(num_complex::Complex64),
    #[error("evaluation point {0} lies outside the closed disc")]
    OutsideClosedDisc(num_complex::Complex64),
    #[error("sampling too coarse: argument jump {jump:.3} rad between consecutive samples")]
    SamplingTooCoarse { jump: f64 },
    #[error("function lies in the royal variety (royal polynomial is identically zero)")]
    RoyalVarietyFunction,
    #[error("invalid superficial data: {0}")]
    InvalidSuperficialSpec(String),
    #[error("omega or k undefined: beta1 and beta2 must both be nonzero")]
    UndefinedOmegaOrK,
    #[error("not a rational Gamma-inner function: {0}")]
    NotGammaInner(String),
    #[error("component {0} is identically zero; its zero set is not a finite list")]
    IdenticallyZeroComponent(&'static str),
    #[error("too few samples: {got} < {min}")]
    TooFewSamples { got: usize, min: usize },

    #[error("royal node {0} lies outside the closed disc")]
    NodeOutsideClosedDisc(num_complex::Complex64),
    #[error("zero {0} lies outside the closed disc")]
    ZeroOutsideClosedDisc(num_complex::Complex64),
    #[error("royal node {node} collides with the circle zero {zero}")]
    NodeZeroCollision { node: num_complex::Complex64, zero: num_complex::Complex64 },
    #[error("invalid construction parameters: {0}")]
    InvalidConstructionSpec(String),
    #[error("construction self-check failed: {0}")]
    ConstructionInconsistent(String),

    #[error("third components differ: convex combination leaves the class")]
    ThirdComponentMismatch,
    #[error("function has royal nodes on the circle; the sup of |x1| is 1")]
    CircleNodesPresent,
    #[error("circle sup of max(|x1|,|x2|) is numerically 1 ({sup})")]
    NumericalSupAtOne { sup: f64 },
    #[error("2k = {twice_k} > n = {n}: non-extremality not established")]
    ExtremalityNotDisproved { twice_k: usize, n: usize },
    #[error("function is not symmetric (e1 != e2)")]
    NotSymmetric,
    #[error("perturbation parameter collapsed to zero")]
    DegeneratePerturbation,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl Error {
    /// True for errors caused by caller-supplied data violating a precondition,
    /// false for numerical failures.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::RootFinding(_)
                | Error::UnpairedRoots { .. }
                | Error::ConstructionInconsistent(_)
                | Error::NumericalSupAtOne { .. }
                | Error::DegeneratePerturbation
                | Error::SamplingTooCoarse { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
