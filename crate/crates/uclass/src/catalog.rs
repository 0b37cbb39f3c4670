//! A small catalog of named reference members.
//!
//! Each entry is an ordinary [`ConstructionSpec`], so every pipeline
//! (series, pointwise, verification) treats catalog functions exactly
//! like user-supplied ones. The classical maps arise as special
//! parameter choices: the identity and the Möbius maps from `ω ≡ 0`,
//! the Koebe function from `(λ, μ, c, ω) = (1, 1, −2, −1)`.

use num_complex::Complex64;

use crate::family::{
    extremal_f0_spec, extremal_fk_spec, ClassParams, ConstructionSpec, FamilyError,
};
use crate::schwarz::SchwarzSpec;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `f(z) = z` as a member of `U(1/2, 1)`.
pub fn identity_spec(order: usize) -> ConstructionSpec {
    let params = ClassParams::new_real(0.5, 1.0).expect("valid parameters");
    ConstructionSpec::new(params, re(0.0), SchwarzSpec::constant(re(0.0)).unwrap(), order)
        .expect("valid spec")
}

/// `f(z) = z/(1 + cz)`, a pole-only perturbation of the identity.
pub fn moebius_spec(c: Complex64, order: usize) -> Result<ConstructionSpec, FamilyError> {
    let params = ClassParams::new_real(0.5, 1.0).expect("valid parameters");
    ConstructionSpec::new(params, c, SchwarzSpec::constant(re(0.0)).unwrap(), order)
}

/// The Koebe function `z/(1−z)²` as the `U(1, 1)` member with `c = −2`,
/// `ω ≡ −1`; its operator profile is `U(z) = 1 − z²`.
pub fn koebe_spec(order: usize) -> ConstructionSpec {
    let params = ClassParams::new_real(1.0, 1.0).expect("valid parameters");
    ConstructionSpec::new(params, re(-2.0), SchwarzSpec::constant(re(-1.0)).unwrap(), order)
        .expect("valid spec")
}

/// Closed form `z/(1−z)²` for oracle comparisons.
pub fn koebe_at(z: Complex64) -> Complex64 {
    let d = Complex64::new(1.0, 0.0) - z;
    z / (d * d)
}

/// Closed form `z/(1+cz)`.
pub fn moebius_at(c: Complex64, z: Complex64) -> Complex64 {
    z / (Complex64::new(1.0, 0.0) + c * z)
}

/// The catalog rows used by cross-checks and the plot-data exporter.
pub fn standard_catalog(order: usize) -> Vec<(&'static str, ConstructionSpec)> {
    let fk_params = ClassParams::new_real(0.6, 0.8).expect("valid parameters");
    let mut entries = vec![
        ("identity", identity_spec(order)),
        ("moebius", moebius_spec(re(0.5), order).expect("valid spec")),
        ("koebe", koebe_spec(order)),
    ];
    for (name, k) in [("f2", 2usize), ("f3", 3), ("f4", 4), ("f5", 5)] {
        entries.push((
            name,
            extremal_fk_spec(k, &fk_params, re(0.0), order).expect("valid spec"),
        ));
    }
    let f0_cases = [
        ("f0a", 0.8, 0.9, 0.7),
        ("f0b", 1.0, 1.0, 0.5),
        ("f0c", 0.6, 0.9, 1.0),
    ];
    for (name, lambda, mu, p) in f0_cases {
        let params = ClassParams::new_real(lambda, mu).expect("valid parameters");
        entries.push((name, extremal_f0_spec(&params, p, order).expect("valid spec")));
    }
    entries
}

/// Looks a catalog entry up by its name.
pub fn by_name(name: &str, order: usize) -> Option<ConstructionSpec> {
    standard_catalog(order)
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, spec)| spec)
}

/// The catalog names, for CLI help and error messages.
pub fn names() -> Vec<&'static str> {
    standard_catalog(8).into_iter().map(|(n, _)| n).collect()
}
