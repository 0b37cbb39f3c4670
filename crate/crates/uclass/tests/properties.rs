//! Randomized invariants: algebraic identities of the series engine, the
//! Schur-type constraints every constructed member must satisfy, and the
//! never-refute guarantees of the verification probes on functions known
//! to be members (or known to be subordinate) by construction.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uclass::series::default_dft_samples;
use uclass::verify::DERIVATIVE_TOL;
use uclass::{
    bk_bound, catalog, coeffs_by_cauchy_dft, classify, construct_zf, critical_point_witness,
    induced_capital_omega, l2_bound, membership_of_spec, oracle_cross_check, maximize_h_modulus,
    sample_member, sample_params, sample_spec, subordination_check, univalence_grid, ClassParams,
    OptimizeConfig, PowerSeries, SamplingGrid, SchwarzSpec, SubordinationVerdict,
    UnivalenceVerdict, Verdict,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Admissible parameters: λ bounded away from 0 and the center ratio
/// strictly inside the disk, exactly the range the samplers target.
fn params_strategy() -> impl Strategy<Value = ClassParams> {
    (0.1f64..=1.0, 0.0f64..0.9, 0.0f64..std::f64::consts::TAU).prop_map(|(lambda, ar, at)| {
        let a = Complex64::from_polar(ar, at);
        ClassParams::new(lambda, c(1.0, 0.0) - lambda * a).expect("inside the admissible region")
    })
}

fn series_strategy(max_len: usize, bound: f64) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec((-bound..bound, -bound..bound), 1..=max_len)
        .prop_map(|pairs| PowerSeries::new(pairs.into_iter().map(|(re, im)| c(re, im)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Inverting twice returns the original series (well-conditioned head).
    #[test]
    fn reciprocal_is_an_involution(tail in series_strategy(23, 0.5)) {
        let mut coeffs = vec![c(1.0, 0.0)];
        coeffs.extend_from_slice(tail.coeffs());
        let s = PowerSeries::new(coeffs);
        let back = s.reciprocal().unwrap().reciprocal().unwrap();
        for k in 0..=s.order() {
            prop_assert!((back.coeff(k) - s.coeff(k)).norm() < 1e-9);
        }
    }

    /// Antiderivative followed by derivative is the identity.
    #[test]
    fn integrate_then_differentiate_is_identity(s in series_strategy(24, 3.0)) {
        let round = s.integrate().differentiate();
        prop_assert_eq!(round.order(), s.order());
        for k in 0..=s.order() {
            let err = (round.coeff(k) - s.coeff(k)).norm();
            prop_assert!(err <= 1e-14 * (1.0 + s.coeff(k).norm()), "k = {}: {}", k, err);
        }
    }

    /// The contour-integral oracle recovers polynomial coefficients.
    #[test]
    fn contour_oracle_recovers_polynomials(
        poly in series_strategy(11, 2.0),
        r in 0.5f64..=0.9,
    ) {
        let n = poly.order();
        let f = |z: Complex64| Ok(poly.evaluate(z));
        let recovered = coeffs_by_cauchy_dft(f, r, n, default_dft_samples(n)).unwrap();
        for k in 0..=n {
            let err = (recovered.coeff(k) - poly.coeff(k)).norm();
            prop_assert!(err < 1e-9, "k = {}, r = {}: {}", k, r, err);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    /// Every factor spec evaluates within the closed unit ball.
    #[test]
    fn factor_specs_are_unit_bounded(
        seed in any::<u64>(),
        zr in 0.0f64..0.999,
        zt in 0.0f64..std::f64::consts::TAU,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = sample_spec(&mut rng, 8);
        let z = Complex64::from_polar(zr, zt);
        let w = spec.omega().evaluate(z).unwrap();
        prop_assert!(w.norm() <= 1.0 + 1e-12, "|omega| = {}", w.norm());
    }

    /// Region flags are mutually coherent: a guaranteed-univalent cell is
    /// locally univalent, and the open region is exactly the gap between
    /// the local and global criteria.
    #[test]
    fn region_flags_are_coherent(params in params_strategy()) {
        let v = classify(&params).unwrap();
        prop_assert_eq!(v.contains_non_locally_univalent, !v.locally_univalent_all);
        prop_assert_eq!(v.open_region, v.locally_univalent_all && !v.univalence_guaranteed);
        if v.univalence_guaranteed {
            prop_assert!(v.locally_univalent_all);
        }
    }

    /// Whenever the derivative-zero witness exists it actually works: the
    /// point is inside the disk and the quadrature-evaluated derivative
    /// of the unit-constant member vanishes there.
    #[test]
    fn critical_witnesses_verify(
        lambda in 0.75f64..=1.0,
        t in 0.02f64..0.98,
        sign in any::<bool>(),
    ) {
        // Real μ strictly between 1−λ and λ; both class membership and
        // |μ| < λ hold, so a witness must exist.
        let mu = (1.0 - lambda) + t * (2.0 * lambda - 1.0);
        let mu = if sign { mu } else { -mu * 0.2 };
        let params = match ClassParams::new_real(lambda, mu) {
            Ok(p) => p,
            Err(_) => return Ok(()), // the negated branch can leave the class
        };
        if params.mu().norm() >= lambda {
            return Ok(());
        }
        let w = critical_point_witness(&params).unwrap();
        prop_assert!(w.z1.norm() < 1.0);
        prop_assert!(w.z1.im > 0.0 || (w.z1.im == 0.0 && w.z1.re >= 0.0));
        prop_assert!(w.f_prime_modulus <= DERIVATIVE_TOL, "residual {}", w.f_prime_modulus);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The disk-to-disk transform induced by a factor spec is a Schur
    /// function fixing the center: its expansion starts at `a`, skips
    /// `z¹`, and obeys the Schwarz-Pick coefficient and energy bounds.
    #[test]
    fn induced_transform_is_schur(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = sample_params(&mut rng);
        let spec = sample_member(&params, &mut rng, 32);
        let a = params.a();
        let omega = induced_capital_omega(spec.omega(), a, 32).unwrap();
        let s = omega.series(32);
        prop_assert!((s.coeff(0) - a).norm() < 1e-12);
        prop_assert!(s.coeff(1).norm() < 1e-12);
        let cap = 1.0 - a.norm_sqr() + 1e-9;
        let mut energy = s.coeff(0).norm_sqr();
        for k in 1..=32 {
            prop_assert!(s.coeff(k).norm() <= cap, "k = {}: {}", k, s.coeff(k).norm());
            energy += s.coeff(k).norm_sqr();
        }
        prop_assert!(energy <= 1.0 + 1e-9, "energy {}", energy);
    }

    /// The two independent coefficient paths agree: the reciprocal-series
    /// pipeline for `z/f` and the algebraic expansion of the induced
    /// transform are linked by `(1−k)·b_k = λ·c_k`.
    #[test]
    fn coefficient_identity_links_pipelines(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = sample_spec(&mut rng, 48);
        let params = *spec.params();
        let h = construct_zf(&spec);
        let omega = induced_capital_omega(spec.omega(), params.a(), 48).unwrap();
        let cs = omega.series(48);
        for k in 2..=32 {
            let lhs = h.coeff(k) * (1.0 - k as f64);
            let rhs = cs.coeff(k) * params.lambda();
            prop_assert!((lhs - rhs).norm() < 1e-10, "k = {}: {} vs {}", k, lhs, rhs);
        }
    }

    /// Every constructed member obeys the sharp coefficient and weighted
    /// energy bounds of its parameter cell. Both sums use the direct
    /// `z/f` pipeline: recovering coefficients from an `f` series instead
    /// loses `ρ^{-k}` digits to the member's nearest pole at distance ρ,
    /// which would swamp the bound, not test it.
    #[test]
    fn sampled_members_obey_coefficient_bounds(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = sample_spec(&mut rng, 48);
        let params = *spec.params();
        let h = construct_zf(&spec);
        for k in 2..=16 {
            let bound = bk_bound(k, &params);
            prop_assert!(h.coeff(k).norm() <= bound + 1e-9, "k = {}", k);
        }
        let sum: f64 = (2..=32)
            .map(|k| {
                let w = (k as f64 - 1.0) * (k as f64 - 1.0);
                h.coeff(k).norm_sqr() * w
            })
            .sum();
        prop_assert!(sum <= l2_bound(&params) + 1e-9, "{} vs {}", sum, l2_bound(&params));
    }

    /// Membership sup estimates are monotone in the outermost radius.
    #[test]
    fn membership_sup_monotone_in_radius(seed in any::<u64>(), grid_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = sample_spec(&mut rng, 8);
        let inner = SamplingGrid::new(vec![0.5], 128, grid_seed).unwrap();
        let outer = SamplingGrid::new(vec![0.5, 0.8], 128, grid_seed).unwrap();
        let params = *spec.params();
        let sup_inner = membership_of_spec(&spec, &params, &inner).sup_estimate;
        let sup_outer = membership_of_spec(&spec, &params, &outer).sup_estimate;
        prop_assert!(sup_inner <= sup_outer + 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Constructed members sail through the membership probe with a
    /// resolvable margin even on a near-boundary ring.
    #[test]
    fn sampled_members_pass_membership(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = sample_spec(&mut rng, 8);
        let report =
            membership_of_spec(&spec, spec.params(), &SamplingGrid::default_grid(seed));
        prop_assert!(matches!(report.verdict, Verdict::MemberSupported), "{:?}", report.verdict);
        prop_assert!(report.margin > 1e-6, "margin {}", report.margin);
    }

    /// The injectivity probe never refutes a function that is injective
    /// by inspection (reciprocal of an affine map).
    #[test]
    fn univalence_probe_accepts_affine_reciprocals(
        cr in 0.0f64..0.99,
        ct in 0.0f64..std::f64::consts::TAU,
        grid_seed in any::<u64>(),
    ) {
        let cc = Complex64::from_polar(cr, ct);
        let f = |z: Complex64| Ok(catalog::moebius_at(cc, z));
        let grid = SamplingGrid::new(vec![0.4, 0.8], 96, grid_seed).unwrap();
        let report = univalence_grid(f, &grid);
        prop_assert!(
            !matches!(report.verdict, UnivalenceVerdict::RefutedAt { .. }),
            "{:?}", report.verdict
        );
    }

    /// Oracle and pipeline coefficients agree at contour-resolvable depth.
    #[test]
    fn contour_and_pipeline_coefficients_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = sample_spec(&mut rng, 24);
        let report = oracle_cross_check(&spec, 0.5, 20).unwrap();
        prop_assert!(report.max_discrepancy <= 1e-8, "gap {}", report.max_discrepancy);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Precomposition with a disk contraction produces a subordinate
    /// function; the scan must support it or abstain, never refute.
    #[test]
    fn subordination_probe_accepts_composed_members(
        seed in any::<u64>(),
        s in 0.2f64..=1.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = sample_spec(&mut rng, 8);
        let h = |z: Complex64| {
            spec.h_at(z).map_err(|e| uclass::EvalError::Failed { z, reason: format!("{e}") })
        };
        let g = |z: Complex64| h(s * z);
        let report = subordination_check(g, h, &[0.35, 0.6]).unwrap();
        prop_assert!(
            !matches!(report.verdict, SubordinationVerdict::RefutedAt { .. }),
            "{:?}", report.verdict
        );
    }

    /// Fixed seed, fixed report: the multistart maximizer is a pure
    /// function of its configuration.
    #[test]
    fn maximizer_is_reproducible(seed in any::<u64>(), param_seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(param_seed);
        let params = sample_params(&mut rng);
        let family = SchwarzSpec::constant(c(0.4, 0.0)).unwrap();
        let config = OptimizeConfig::new(family, 2, 60, 1e-7, seed).unwrap();
        let r1 = maximize_h_modulus(&params, 0.7, &config).unwrap();
        let r2 = maximize_h_modulus(&params, 0.7, &config).unwrap();
        prop_assert_eq!(r1, r2);
    }
}
