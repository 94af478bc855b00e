//! Deterministic inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tetrablock::boundary::sampling;
use tetrablock::construct::{random_spec, ConstructionSpec, RandomSpecOptions};
use tetrablock::{Complex64, Polynomial, TetraPoint, TrigPolynomial};

/// `|D|²` for an outer `D` of the given degree.
pub fn outer_square(degree: usize, seed: u64) -> TrigPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let roots: Vec<Complex64> =
        (0..degree).map(|_| Complex64::from_polar(rng.gen_range(1.1..3.0), rng.gen_range(0.0..6.3))).collect();
    tetrablock::fejriesz::modulus_squared_on_circle(&Polynomial::from_roots(&roots))
}

/// A construction spec of size `n` with one circle node when `n ≥ 2`.
pub fn spec(n: usize, seed: u64) -> ConstructionSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_spec(&mut rng, RandomSpecOptions::new(n).circle_nodes(usize::from(n >= 2)))
}

/// A mix of interior, closed and distinguished-boundary points.
pub fn points(count: usize, seed: u64) -> Vec<TetraPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| match i % 3 {
            0 => sampling::interior(&mut rng),
            1 => sampling::closed(&mut rng),
            _ => sampling::distinguished(&mut rng),
        })
        .collect()
}
