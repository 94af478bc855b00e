//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::SQRT_2;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tetrablock::boundary::{
    classify_tetra, mu_diag_le_one, mu_diag_value, pi_map, sampling, tetra_defect, DEFAULT_MEMBERSHIP_TOL,
};
use tetrablock::construct::{construct, match_multisets, random_spec, recover_data, RandomSpecOptions};
use tetrablock::extremal::{convex_combine, perturb_nonextreme, scale_nonextreme, DEFAULT_MARGIN};
use tetrablock::fejriesz::{factor, modulus_squared_on_circle, normalize_phase, DEFAULT_CIRCLE_TOL};
use tetrablock::polycx::max_coeff_diff;
use tetrablock::tetrafun::{invariant_report, psi_omega_check, superficial_build, VALIDATION_SAMPLES};
use tetrablock::{
    BlaschkeSpec, Complex64, ConstructionSpec, Polynomial, SuperficialSpec, TetraPoint, TetraRational, TetraRegion,
};

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit, || format!("runtime {:.3}s exceeds {limit}s", elapsed.as_secs_f64()))
}

fn reference_spec() -> ConstructionSpec {
    ConstructionSpec {
        alpha1: vec![],
        alpha2: vec![c(0.5, 0.0)],
        sigma: vec![c(0.0, 0.0)],
        t_plus: 1.75,
        t: c(SQRT_2, 0.0),
        omega: c(1.0, 0.0),
    }
}

/// Random specs with `n ≤ 5`, a random number of circle nodes (at most `n/2`).
fn random_specs(seed: u64, count: usize) -> Vec<ConstructionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            let k = rng.gen_range(0..=n / 2);
            random_spec(&mut rng, RandomSpecOptions::new(n).circle_nodes(k))
        })
        .collect()
}

fn reference_example() -> Outcome {
    let start = Instant::now();
    let x = construct(&reference_spec()).map_err(|e| e.to_string())?;
    let a1 = x.d().coeff(0);
    let a2 = x.d().coeff(1);
    let sum = a1.norm_sqr() + a2.norm_sqr();
    let cross = a1 * a2.conj();
    let royal_dev = max_coeff_diff(&x.royal_polynomial(), &Polynomial::from_real(&[0.0, 1.75]));
    let data = recover_data(&x).map_err(|e| e.to_string())?;
    let degree = x.degree().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    ensure((sum - 4.25).abs() < 1e-9, || format!("|a1|²+|a2|² = {sum}"))?;
    ensure((cross - c(-1.0, 0.0)).norm() < 1e-9, || format!("a1·conj(a2) = {cross}"))?;
    ensure(royal_dev < 1e-9, || format!("royal polynomial deviates by {royal_dev:e}"))?;
    ensure(data.zeros2.total_order() == 1, || format!("x2 has {} zeros", data.zeros2.total_order()))?;
    let z = data.zeros2.entries[0].location;
    ensure((z - c(0.5, 0.0)).norm() < 1e-8, || format!("x2 zero at {z}"))?;
    ensure(degree == 1, || format!("degree {degree}"))?;
    within(elapsed, 0.1)?;
    Ok(format!("D = ({a1:.6}) + ({a2:.6})λ, {:.2} ms", elapsed.as_secs_f64() * 1e3))
}

fn non_convexity_witness() -> Outcome {
    let tol = DEFAULT_MEMBERSHIP_TOL;
    let p = TetraPoint::new(c(0.0, 1.0), c(1.0, 0.0), c(0.0, 1.0));
    let q = TetraPoint::new(c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0));
    let mid = p.lerp(&q, 0.5);
    for (name, pt) in [("(i,1,i)", p), ("(-1,i,-i)", q)] {
        let region = classify_tetra(&pt, tol);
        ensure(region == TetraRegion::DistinguishedBoundary, || format!("{name} classified {region:?}"))?;
    }
    let region = classify_tetra(&mid, tol);
    ensure(region == TetraRegion::Outside, || format!("midpoint classified {region:?}"))?;
    let defect = tetra_defect(&mid);
    ensure((defect - (SQRT_2 - 1.0)).abs() < 1e-12, || format!("midpoint defect {defect}"))?;
    Ok(format!("midpoint defect {defect:.15}"))
}

fn spectral_factor_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0_f64;
    for i in 0..200 {
        let degree = rng.gen_range(0..=8);
        let roots: Vec<Complex64> =
            (0..degree).map(|_| Complex64::from_polar(rng.gen_range(1.1..4.0), rng.gen_range(0.0..6.3))).collect();
        let d = Polynomial::from_roots(&roots).scale(Complex64::from_polar(1.0, rng.gen_range(0.0..6.3)));
        let d = d.scale_real(1.0 / d.max_abs_coeff());
        let got = factor(&modulus_squared_on_circle(&d), DEFAULT_CIRCLE_TOL).map_err(|e| format!("case {i}: {e}"))?;
        let err = max_coeff_diff(&normalize_phase(&got), &normalize_phase(&d));
        worst = worst.max(err);
        ensure(err < 1e-8, || format!("case {i} (degree {degree}) error {err:e}"))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, 5.0)?;
    Ok(format!("max coefficient error {worst:.2e}, {:.2} s", elapsed.as_secs_f64()))
}

fn construction_round_trip(specs: &[ConstructionSpec], built: &[TetraRational]) -> Outcome {
    let mut worst = 0.0_f64;
    for (i, (spec, x)) in specs.iter().zip(built).enumerate() {
        let data = recover_data(x).map_err(|e| format!("spec {i}: {e}"))?;
        for (got, want) in [
            (data.zeros1.flatten(), &spec.alpha1),
            (data.zeros2.flatten(), &spec.alpha2),
            (data.node_locations(), &spec.sigma),
        ] {
            let dist = match_multisets(&got, want).ok_or_else(|| format!("spec {i}: multiset sizes differ"))?;
            worst = worst.max(dist);
            ensure(dist < 1e-6, || format!("spec {i}: location error {dist:e}"))?;
        }
        let total: usize = data.nodes.iter().map(|v| v.multiplicity).sum();
        ensure(total == spec.n(), || format!("spec {i}: multiplicities sum to {total}, n = {}", spec.n()))?;
    }
    Ok(format!("{} specs, max location error {worst:.2e}", specs.len()))
}

fn structure_invariants(built: &[TetraRational]) -> Outcome {
    let (mut bal, mut id, mut sym) = (0.0_f64, 0.0_f64, 0.0_f64);
    for (i, x) in built.iter().enumerate() {
        let rep = invariant_report(x, i as u64).map_err(|e| format!("function {i}: {e}"))?;
        bal = bal.max(rep.modulus_balance);
        id = id.max(rep.royal_identity_e1).max(rep.royal_identity_e2);
        sym = sym.max(rep.royal_symmetry);
        ensure(rep.royal_min_on_circle >= -1e-10, || format!("function {i}: royal polynomial negative on circle"))?;
    }
    ensure(bal < 1e-9, || format!("| |E1| - |E2| | up to {bal:e}"))?;
    ensure(id < 1e-9, || format!("royal identity deviation {id:e}"))?;
    ensure(sym < 1e-10, || format!("royal symmetry deviation {sym:e}"))?;
    Ok(format!("balance {bal:.1e}, identity {id:.1e}, symmetry {sym:.1e}"))
}

fn degree_coherence(built: &[TetraRational]) -> Outcome {
    for (i, x) in built.iter().enumerate() {
        let w = x.winding_number(VALIDATION_SAMPLES).map_err(|e| format!("function {i}: {e}"))?;
        let d = x.degree().map_err(|e| format!("function {i}: {e}"))?;
        ensure(w == d as i64 && d == x.n(), || format!("function {i}: winding {w}, degree {d}, n {}", x.n()))?;
    }
    Ok(format!("{} functions", built.len()))
}

fn non_extremality() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0_f64;
    for i in 0..20 {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=n / 2);
        let x = construct(&random_spec(&mut rng, RandomSpecOptions::new(n).circle_nodes(k)))
            .map_err(|e| format!("case {i}: {e}"))?;
        let ty = x.type_nk().map_err(|e| format!("case {i}: {e}"))?;
        ensure(ty.k == k && ty.n == n, || format!("case {i}: type ({}, {}) expected ({n}, {k})", ty.n, ty.k))?;
        let res = perturb_nonextreme(&x).map_err(|e| format!("case {i} (n={n}, k={k}): {e}"))?;
        let err = res.midpoint_error(&x);
        worst = worst.max(err);
        ensure(err < 1e-12, || format!("case {i}: midpoint error {err:e}"))?;
    }
    let mut min_eps = f64::INFINITY;
    for i in 0..20 {
        let n = rng.gen_range(1..=6);
        let x = construct(&random_spec(&mut rng, RandomSpecOptions::new(n))).map_err(|e| format!("scaling {i}: {e}"))?;
        let res = scale_nonextreme(&x, DEFAULT_MARGIN).map_err(|e| format!("scaling {i}: {e}"))?;
        ensure(res.t_used > 0.0, || format!("scaling {i}: eps = {}", res.t_used))?;
        min_eps = min_eps.min(res.t_used);
    }
    let elapsed = start.elapsed();
    within(elapsed, 10.0)?;
    Ok(format!("midpoint error {worst:.1e}, min eps {min_eps:.2e}, {:.2} s", elapsed.as_secs_f64()))
}

fn random_blaschke<R: Rng>(rng: &mut R) -> BlaschkeSpec {
    let m = rng.gen_range(1..=4);
    BlaschkeSpec::new((0..m).map(|_| sampling::disc_point(rng, 0.9)).collect(), sampling::circle_point(rng))
}

fn superficial_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_psi = 0.0_f64;
    for i in 0..20 {
        let (b1, b2) = loop {
            let (b1, b2) = sampling::betas(&mut rng, 1.0);
            if b1.norm() > 1e-3 && b2.norm() > 1e-3 {
                break (b1, b2);
            }
        };
        let spec = SuperficialSpec { beta1: b1, beta2: b2, x3: random_blaschke(&mut rng) };
        let x = superficial_build(&spec, 4).map_err(|e| format!("case {i}: {e}"))?;
        ensure(x.is_superficial(256, 1e-10), || format!("case {i}: defect above 1e-10"))?;
        let dev = psi_omega_check(&x, &spec, 256).map_err(|e| format!("case {i}: {e}"))?;
        worst_psi = worst_psi.max(dev);
        ensure(dev < 1e-8, || format!("case {i}: psi deviation {dev:e}"))?;
    }
    let spec = SuperficialSpec {
        beta1: c(0.0, 0.5),
        beta2: c(0.0, -0.5),
        x3: BlaschkeSpec::new(vec![c(0.0, 0.0)], c(1.0, 0.0)),
    };
    let x = superficial_build(&spec, 1).map_err(|e| e.to_string())?;
    let s_part = (x.e1() + x.e2()).max_abs_coeff();
    ensure(x.is_superficial(256, 1e-10), || "imaginary-beta case is not superficial".into())?;
    ensure(s_part == 0.0, || format!("s-part of (x1 + x2, x3) has size {s_part:e}"))?;
    Ok(format!("max psi deviation {worst_psi:.1e}; imaginary-beta s-part vanishes"))
}

fn convex_slices() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ts: Vec<f64> = (0..10).map(|j| j as f64 / 9.0).collect();
    for i in 0..100 {
        let x3 = sampling::disc_point(&mut rng, 1.0);
        let (p, q) = (sampling::closed_with_x3(&mut rng, x3), sampling::closed_with_x3(&mut rng, x3));
        let w3 = sampling::circle_point(&mut rng);
        let (u, v) = (sampling::distinguished_with_x3(&mut rng, w3), sampling::distinguished_with_x3(&mut rng, w3));
        for &t in &ts {
            for (a, b, label) in [(&p, &q, "closed"), (&u, &v, "distinguished")] {
                let region = classify_tetra(&a.lerp(b, t), DEFAULT_MEMBERSHIP_TOL);
                ensure(region != TetraRegion::Outside, || format!("{label} pair {i}, t = {t}: Outside"))?;
            }
        }
    }
    for i in 0..100 {
        let x3 = random_blaschke(&mut rng);
        let n = x3.degree();
        let make = |b: (Complex64, Complex64)| superficial_build(&SuperficialSpec { beta1: b.0, beta2: b.1, x3: x3.clone() }, n);
        let f = make(sampling::betas(&mut rng, 1.0)).map_err(|e| format!("pair {i}: {e}"))?;
        let g = if i % 2 == 0 {
            make(sampling::betas(&mut rng, 1.0)).map_err(|e| format!("pair {i}: {e}"))?
        } else {
            let d = f.d().scale_real(rng.gen_range(0.5..2.0));
            TetraRational::new(Polynomial::zero(), Polynomial::zero(), d, n).map_err(|e| format!("pair {i}: {e}"))?
        };
        for &t in &ts {
            convex_combine(&f, &g, t).map_err(|e| format!("function pair {i}, t = {t}: {e}"))?;
        }
    }
    Ok("100 point pairs x 2 slices and 100 function pairs x 10 t-values".into())
}

fn mu_coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut boundary_like = 0;
    for i in 0..200 {
        let r = rng.gen_range(0.2..1.5);
        let a = sampling::matrix(&mut rng, r);
        let le = mu_diag_le_one(&a, DEFAULT_MEMBERSHIP_TOL);
        let mu = mu_diag_value(&a, 1e-12);
        if (mu - 1.0).abs() < 1e-3 {
            boundary_like += 1;
        }
        ensure(le == (mu <= 1.0 + 1e-6), || format!("matrix {i}: predicate {le}, mu = {mu}"))?;
    }
    for i in 0..50 {
        let u = sampling::unitary(&mut rng);
        let region = classify_tetra(&pi_map(&u), DEFAULT_MEMBERSHIP_TOL);
        ensure(region == TetraRegion::DistinguishedBoundary, || format!("unitary {i}: {region:?}"))?;
    }
    Ok(format!("200 matrices ({boundary_like} with mu within 1e-3 of 1), 50 unitaries"))
}

fn main() {
    let specs = random_specs(4, 50);
    let start = Instant::now();
    let built: Result<Vec<TetraRational>, String> =
        specs.iter().enumerate().map(|(i, s)| construct(s).map_err(|e| format!("spec {i}: {e}"))).collect();
    let build_time = start.elapsed();

    let with_built = |f: &dyn Fn(&[TetraRational]) -> Outcome| -> Outcome {
        match &built {
            Ok(b) => f(b),
            Err(e) => Err(format!("construction failed: {e}")),
        }
    };
    let mut all: Vec<TetraRational> = built.clone().unwrap_or_default();
    if let Ok(x) = construct(&reference_spec()) {
        all.push(x);
    }

    let results: Vec<(&str, Outcome)> = vec![
        ("reference construction", reference_example()),
        ("non-convexity witness", non_convexity_witness()),
        ("spectral factor round trip", spectral_factor_round_trip()),
        (
            "construction round trip",
            with_built(&|b| {
                within(build_time, 10.0)?;
                construction_round_trip(&specs, b).map(|m| format!("{m}, build {:.2} s", build_time.as_secs_f64()))
            }),
        ),
        ("structure invariants", with_built(&|_| structure_invariants(&all))),
        ("degree coherence", with_built(&|_| degree_coherence(&all))),
        ("non-extremality decompositions", non_extremality()),
        ("superficial functions", superficial_suite()),
        ("convex slices", convex_slices()),
        ("mu coherence", mu_coherence()),
    ];

    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(msg) => println!("[{:02}] PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[{:02}] FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
