//! The class machinery: the defining operator, the representation-formula
//! constructor, extremal functions, sharp coefficient bounds, and the
//! parameter-region classifier.
//!
//! Throughout, `f` is normalized (`f(0) = 0`, `f'(0) = 1`) and may have
//! poles in the disk; everything is therefore computed through `h = z/f`,
//! which is analytic on the whole disk for class members. The defining
//! operator is
//!
//! `U(z) = (z/f)² f' = h(z) − z h'(z)`,
//!
//! and membership in the class with parameters `(λ, μ)` means
//! `|U(z) − μ| < λ` on the disk. Writing `a = (1 − μ)/λ`, members are
//! exactly the functions
//!
//! `f(z) = z / (1 + cz − λz ∫₀ᶻ (1−|a|²)ω(t) / (1 + ā t² ω(t)) dt)`
//!
//! with free `c ∈ ℂ` and unit-bounded `ω`; the integrand is abbreviated
//! `G(t)` below. Two identities carry all pointwise evaluation:
//! `U = 1 + λ z² G(z)` and `f' = U / h²`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::{integrate_from_zero, integrate_segment, QuadError, QUAD_TOL};
use crate::schwarz::{SchwarzError, SchwarzSpec};
use crate::series::{complex_pair, EvalError, PowerSeries, SeriesError, ZERO_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("invalid class parameters: {reason}")]
    InvalidClassParams { reason: String },
    #[error("series is not normalized to f(0)=0, f'(0)=1: {detail}")]
    BadNormalization { detail: String },
    #[error("parameter out of range: {what}")]
    ParameterOutOfRange { what: String },
    #[error("no critical point exists: |λ(1−|a|²) + ā| = {modulus} ≤ 1, every member has nonvanishing derivative")]
    NoWitness { modulus: f64 },
    #[error("the two points coincide")]
    CoincidentPoints,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Schwarz(#[from] SchwarzError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Evaluation(#[from] EvalError),
}

/// Class parameters `(λ, μ)` with the derived center `a = (1 − μ)/λ`.
///
/// The standing hypothesis `|1 − μ| < λ` (equivalently `|a| < 1`) is
/// enforced at construction; it is what makes the class nonempty and the
/// representation machinery valid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ClassParamsRepr", into = "ClassParamsRepr")]
pub struct ClassParams {
    lambda: f64,
    mu: Complex64,
    a: Complex64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassParamsRepr {
    lambda: f64,
    mu: [f64; 2],
}

impl From<ClassParams> for ClassParamsRepr {
    fn from(p: ClassParams) -> Self {
        ClassParamsRepr { lambda: p.lambda, mu: [p.mu.re, p.mu.im] }
    }
}

impl TryFrom<ClassParamsRepr> for ClassParams {
    type Error = FamilyError;
    fn try_from(r: ClassParamsRepr) -> Result<Self, FamilyError> {
        ClassParams::new(r.lambda, Complex64::new(r.mu[0], r.mu[1]))
    }
}

impl ClassParams {
    pub fn new(lambda: f64, mu: Complex64) -> Result<Self, FamilyError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(FamilyError::InvalidClassParams {
                reason: format!("lambda must be a positive real, got {lambda}"),
            });
        }
        if !(mu.re.is_finite() && mu.im.is_finite()) {
            return Err(FamilyError::InvalidClassParams { reason: "mu must be finite".into() });
        }
        let a = (Complex64::new(1.0, 0.0) - mu) / lambda;
        if a.norm() >= 1.0 {
            let one_minus_mu = (Complex64::new(1.0, 0.0) - mu).norm();
            return Err(FamilyError::InvalidClassParams {
                reason: format!("|1 - mu| = {one_minus_mu} must be < lambda = {lambda}"),
            });
        }
        Ok(ClassParams { lambda, mu, a })
    }

    /// Convenience for real `μ`.
    pub fn new_real(lambda: f64, mu: f64) -> Result<Self, FamilyError> {
        Self::new(lambda, Complex64::new(mu, 0.0))
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    /// The induced center `a = (1 − μ)/λ`, always inside the unit disk.
    pub fn a(&self) -> Complex64 {
        self.a
    }

    /// `a` as a real number, when it is one (within round-off).
    pub fn real_a(&self) -> Option<f64> {
        (self.a.im.abs() <= ZERO_TOL).then_some(self.a.re)
    }
}

/// Full data of one representation-formula member: parameters, the free
/// constant `c = −a₂`, the unit-bounded factor, and the series order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConstructionSpecRepr", into = "ConstructionSpecRepr")]
pub struct ConstructionSpec {
    params: ClassParams,
    c: Complex64,
    omega: SchwarzSpec,
    order: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstructionSpecRepr {
    lambda: f64,
    mu: [f64; 2],
    c: [f64; 2],
    omega: SchwarzSpec,
    order: usize,
}

impl From<ConstructionSpec> for ConstructionSpecRepr {
    fn from(s: ConstructionSpec) -> Self {
        ConstructionSpecRepr {
            lambda: s.params.lambda,
            mu: [s.params.mu.re, s.params.mu.im],
            c: [s.c.re, s.c.im],
            omega: s.omega,
            order: s.order,
        }
    }
}

impl TryFrom<ConstructionSpecRepr> for ConstructionSpec {
    type Error = FamilyError;
    fn try_from(r: ConstructionSpecRepr) -> Result<Self, FamilyError> {
        let params = ClassParams::new(r.lambda, Complex64::new(r.mu[0], r.mu[1]))?;
        ConstructionSpec::new(params, Complex64::new(r.c[0], r.c[1]), r.omega, r.order)
    }
}

impl ConstructionSpec {
    pub fn new(
        params: ClassParams,
        c: Complex64,
        omega: SchwarzSpec,
        order: usize,
    ) -> Result<Self, FamilyError> {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(FamilyError::ParameterOutOfRange { what: "c must be finite".into() });
        }
        if order < 4 {
            return Err(FamilyError::ParameterOutOfRange {
                what: format!("order must be at least 4, got {order}"),
            });
        }
        Ok(ConstructionSpec { params, c, omega, order })
    }

    pub fn params(&self) -> &ClassParams {
        &self.params
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn omega(&self) -> &SchwarzSpec {
        &self.omega
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order.max(4);
        self
    }

    /// The representation integrand `G(t) = (1−|a|²)ω(t)/(1 + ā t² ω(t))`.
    ///
    /// The denominator cannot vanish on the disk: `|ā t² ω| ≤ |a| < 1`.
    pub fn integrand_at(&self, t: Complex64) -> Result<Complex64, EvalError> {
        let a = self.params.a;
        let w = self.omega.evaluate(t)?;
        let den = Complex64::new(1.0, 0.0) + a.conj() * t * t * w;
        Ok((1.0 - a.norm_sqr()) * w / den)
    }

    /// `h(z) = z/f(z) = 1 + cz − λz ∫₀ᶻ G`, by adaptive quadrature.
    ///
    /// Analytic on the whole disk; its zeros are the poles of `f`.
    pub fn h_at(&self, z: Complex64) -> Result<Complex64, FamilyError> {
        let integral = integrate_from_zero(&|t| self.integrand_at(t), z)?;
        Ok(Complex64::new(1.0, 0.0) + self.c * z - self.params.lambda * z * integral)
    }

    /// Pointwise `f(z) = z/h(z)`; fails exactly at a pole of `f`.
    pub fn f_at(&self, z: Complex64) -> Result<Complex64, FamilyError> {
        let h = self.h_at(z)?;
        if h.norm() == 0.0 {
            return Err(FamilyError::Evaluation(EvalError::Failed {
                z,
                reason: "pole of f".into(),
            }));
        }
        Ok(z / h)
    }

    /// The defining operator `U(z) = 1 + λ z² G(z)`, in closed form.
    ///
    /// No quadrature is involved, so this is the preferred membership
    /// probe: `|U(z) − μ| = λ|Ω(z)| < λ` holds exactly for every member.
    pub fn u_at(&self, z: Complex64) -> Result<Complex64, EvalError> {
        Ok(Complex64::new(1.0, 0.0) + self.params.lambda * z * z * self.integrand_at(z)?)
    }

    /// `f'(z) = U(z)/h(z)²`; one quadrature for `h`.
    pub fn f_prime_at(&self, z: Complex64) -> Result<Complex64, FamilyError> {
        let h = self.h_at(z)?;
        if h.norm() == 0.0 {
            return Err(FamilyError::Evaluation(EvalError::Failed {
                z,
                reason: "pole of f".into(),
            }));
        }
        Ok(self.u_at(z)? / (h * h))
    }

    /// Series of `h = z/f` to the spec's order, through the series
    /// pipeline (geometric/Möbius expansion of the integrand, term-wise
    /// integration).
    pub fn zf_series(&self) -> PowerSeries {
        let n = self.order;
        let a = self.params.a;
        let w = self.omega.series(n);
        let t2w = w.shift_up(2).truncated(n);
        let denominator = PowerSeries::one(n).add(&t2w.scale(a.conj()));
        let integrand = w
            .scale(Complex64::new(1.0 - a.norm_sqr(), 0.0))
            .mul(&denominator.reciprocal().expect("constant term is 1"));
        let z_integral = integrand.integrate().shift_up(1).truncated(n);
        PowerSeries::one(n)
            .add(&PowerSeries::monomial(self.c, 1, n))
            .sub(&z_integral.scale(Complex64::new(self.params.lambda, 0.0)))
    }

    /// Series of `f` itself to the spec's order.
    pub fn f_series(&self) -> PowerSeries {
        let h = self.zf_series();
        h.reciprocal()
            .expect("constant term is 1")
            .shift_up(1)
            .truncated(self.order)
    }
}

/// `U(z) = h − z h'` for a normalized series `f`, computed from the
/// series of `h = z/f`: the coefficient of `z^k` is `(1−k)·h_k`.
pub fn u_operator(f: &PowerSeries, n: usize) -> Result<PowerSeries, FamilyError> {
    let h = zf_of_series(f)?;
    let coeffs = h
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &g)| g * (1.0 - k as f64))
        .collect();
    Ok(PowerSeries::new(coeffs).truncated(n))
}

/// Series of `z/f` for a normalized `f`; order drops by one.
fn zf_of_series(f: &PowerSeries) -> Result<PowerSeries, FamilyError> {
    if f.coeff(0).norm() > ZERO_TOL {
        return Err(FamilyError::BadNormalization {
            detail: format!("f(0) = {} is not 0", f.coeff(0)),
        });
    }
    if (f.coeff(1) - Complex64::new(1.0, 0.0)).norm() > ZERO_TOL {
        return Err(FamilyError::BadNormalization {
            detail: format!("f'(0) = {} is not 1", f.coeff(1)),
        });
    }
    if f.order() == 0 {
        return Err(FamilyError::BadNormalization { detail: "series of order 0".into() });
    }
    Ok(f.shift_down(1).reciprocal()?)
}

/// The unit-bounded function induced by `f` under the class parameters:
/// `Ω = (U − μ)/λ`. For members, `Ω(0) = a` and `Ω'(0) = 0`.
pub fn induced_omega_of(
    f: &PowerSeries,
    params: &ClassParams,
    n: usize,
) -> Result<PowerSeries, FamilyError> {
    let u = u_operator(f, n)?;
    Ok(u.sub(&PowerSeries::constant(params.mu(), u.order()))
        .scale(Complex64::new(1.0 / params.lambda(), 0.0)))
}

/// Builds the member series from its representation data.
///
/// The result is normalized (`a₁ = 1` exactly) with `a₂ = −c`.
pub fn construct(spec: &ConstructionSpec) -> Result<PowerSeries, FamilyError> {
    Ok(spec.f_series())
}

/// Series of `z/f` for the member described by `spec`.
pub fn construct_zf(spec: &ConstructionSpec) -> PowerSeries {
    spec.zf_series()
}

/// The coefficient-extremal member: `ω(z) = −z^{k−2}`, which drives the
/// k-th coefficient of `z/f` to its sharp modulus `λ(1−|a|²)/(k−1)`.
pub fn extremal_fk_spec(
    k: usize,
    params: &ClassParams,
    c: Complex64,
    order: usize,
) -> Result<ConstructionSpec, FamilyError> {
    if k < 2 {
        return Err(FamilyError::ParameterOutOfRange { what: format!("k must be ≥ 2, got {k}") });
    }
    let omega = SchwarzSpec::monomial(Complex64::new(-1.0, 0.0), k - 2)?;
    ConstructionSpec::new(*params, c, omega, order)
}

pub fn extremal_fk(
    k: usize,
    params: &ClassParams,
    c: Complex64,
    order: usize,
) -> Result<PowerSeries, FamilyError> {
    construct(&extremal_fk_spec(k, params, c, order)?)
}

/// The second-coefficient-extremal member for real `a ∈ [0, 1)`:
/// `ω ≡ −1` with `c = −A₂(p)`. Its `z/f` vanishes at `z = p` (the pole
/// of `f` sits on the positive axis at the analyticity radius).
pub fn extremal_f0_spec(
    params: &ClassParams,
    p: f64,
    order: usize,
) -> Result<ConstructionSpec, FamilyError> {
    let a2 = a2_bound(params, p)?;
    let omega = SchwarzSpec::constant(Complex64::new(-1.0, 0.0))?;
    ConstructionSpec::new(*params, Complex64::new(-a2, 0.0), omega, order)
}

pub fn extremal_f0(
    params: &ClassParams,
    p: f64,
    order: usize,
) -> Result<PowerSeries, FamilyError> {
    construct(&extremal_f0_spec(params, p, order)?)
}

/// Coefficients `b₁..b_K` of `z/f − 1` for a normalized `f`.
///
/// `b₁ = −a₂`, `b₂ = a₂² − a₃`; indices above `f.order() − 1` are not
/// determined by `f` and are rejected.
pub fn b_coefficients(f: &PowerSeries, kmax: usize) -> Result<Vec<Complex64>, FamilyError> {
    let h = zf_of_series(f)?;
    if kmax > h.order() {
        return Err(FamilyError::ParameterOutOfRange {
            what: format!(
                "b_{kmax} requires a series of order ≥ {}, got {}",
                kmax + 1,
                f.order()
            ),
        });
    }
    Ok((1..=kmax).map(|k| h.coeff(k)).collect())
}

/// Sharp modulus bound for `b_k`, `k ≥ 2`: `λ(1 − |a|²)/(k − 1)`.
pub fn bk_bound(k: usize, params: &ClassParams) -> f64 {
    assert!(k >= 2, "the bound is stated for k >= 2");
    params.lambda() * (1.0 - params.a().norm_sqr()) / (k as f64 - 1.0)
}

/// Sharp bound for the weighted tail `Σ_{k≥2} |b_k|²(k−1)²`: `λ²(1−|a|²)`.
pub fn l2_bound(params: &ClassParams) -> f64 {
    let lambda = params.lambda();
    lambda * lambda * (1.0 - params.a().norm_sqr())
}

/// Truncated weighted sum `Σ_{k=2..K} |b_k|²(k−1)²`.
pub fn l2_weighted_sum(f: &PowerSeries, kmax: usize) -> Result<f64, FamilyError> {
    let b = b_coefficients(f, kmax)?;
    Ok(b
        .iter()
        .enumerate()
        .skip(1) // the sum starts at k = 2; b[0] is b₁
        .map(|(i, bk)| {
            let k_minus_1 = (i + 1) as f64 - 1.0;
            bk.norm_sqr() * k_minus_1 * k_minus_1
        })
        .sum())
}

/// Sharp bound `A₂` on `|a₂|` for members analytic in `|z| < p`, stated
/// for real `a ∈ [0, 1)`:
///
/// `A₂ = 1/p + λ ∫₀^p (1−a²)/(1−at²) dt`
/// `   = 1/p + λ(1−a²)/(2√a) · log((1+p√a)/(1−p√a))`  (`a ≠ 0`)
/// `   = 1/p + λp`                                      (`a = 0`).
///
/// Other `μ` are rejected: for them only the optimizer's implicit lower
/// bound is available, not a closed form.
pub fn a2_bound(params: &ClassParams, p: f64) -> Result<f64, FamilyError> {
    let a = real_a_in_range(params)?;
    if !(p.is_finite() && p > 0.0 && p <= 1.0) {
        return Err(FamilyError::ParameterOutOfRange {
            what: format!("p must lie in (0, 1], got {p}"),
        });
    }
    let lambda = params.lambda();
    if a <= ZERO_TOL {
        return Ok(1.0 / p + lambda * p);
    }
    let s = a.sqrt();
    Ok(1.0 / p + lambda * (1.0 - a * a) / (2.0 * s) * ((1.0 + p * s) / (1.0 - p * s)).ln())
}

fn real_a_in_range(params: &ClassParams) -> Result<f64, FamilyError> {
    match params.real_a() {
        Some(a) if (0.0..1.0).contains(&a) => Ok(a),
        _ => Err(FamilyError::ParameterOutOfRange {
            what: format!(
                "a = (1−μ)/λ = {} must be real in [0, 1) for this closed form (μ ∈ (1−λ, 1])",
                params.a()
            ),
        }),
    }
}

/// How the parameter point `(λ, μ)` sits relative to the two structural
/// regions: whether every member is locally univalent (`|μ| ≥ λ`),
/// whether univalence of all members is guaranteed (`λ ≤ 1/2`, or
/// `|1−μ| ≤ 1−λ` for `λ ∈ (1/2, 1]`), or whether the point lies in the
/// open region between the two. Boundary ties follow the non-strict
/// inequalities exactly as stated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub locally_univalent_all: bool,
    pub univalence_guaranteed: bool,
    pub contains_non_locally_univalent: bool,
    pub open_region: bool,
}

pub fn classify(params: &ClassParams) -> Result<RegionVerdict, FamilyError> {
    let lambda = params.lambda();
    if lambda > 1.0 {
        return Err(FamilyError::InvalidClassParams {
            reason: format!("classification requires lambda in (0, 1], got {lambda}"),
        });
    }
    let locally_univalent_all = params.mu().norm() >= lambda;
    let one_minus_mu = (Complex64::new(1.0, 0.0) - params.mu()).norm();
    let univalence_guaranteed = lambda <= 0.5 || one_minus_mu <= 1.0 - lambda;
    Ok(RegionVerdict {
        locally_univalent_all,
        univalence_guaranteed,
        contains_non_locally_univalent: !locally_univalent_all,
        open_region: locally_univalent_all && !univalence_guaranteed,
    })
}

/// A point where the `ω ≡ 1` member's derivative vanishes, with the
/// quadrature-evaluated residual `|f'(z₁)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalWitness {
    #[serde(with = "complex_pair")]
    pub z1: Complex64,
    pub f_prime_modulus: f64,
}

/// Produces a critical point of the `ω ≡ 1` member when one exists.
///
/// Solving `U(z₁) = 0` for `ω ≡ 1` gives `z₁² = −1/K`, `K = λ(1−|a|²)+ā`;
/// a root lands inside the disk exactly when `|K| > 1`, which is
/// equivalent to `|μ| < λ`. For `|μ| ≥ λ` this returns `NoWitness`.
pub fn critical_point_witness(params: &ClassParams) -> Result<CriticalWitness, FamilyError> {
    let a = params.a();
    let k = params.lambda() * (1.0 - a.norm_sqr()) + a.conj();
    if k.norm() <= 1.0 {
        return Err(FamilyError::NoWitness { modulus: k.norm() });
    }
    let mut z1 = (-Complex64::new(1.0, 0.0) / k).sqrt();
    // Both square roots witness the same zero; report the upper-half-plane one.
    if z1.im < 0.0 || (z1.im == 0.0 && z1.re < 0.0) {
        z1 = -z1;
    }
    let spec = ConstructionSpec::new(
        *params,
        Complex64::new(0.0, 0.0),
        SchwarzSpec::constant(Complex64::new(1.0, 0.0))?,
        16,
    )?;
    let f_prime_modulus = spec.f_prime_at(z1)?.norm();
    Ok(CriticalWitness { z1, f_prime_modulus })
}

/// Injectivity margin for one point pair: `1 − |λ z₁z₂/(z₁−z₂) ∫_{z₂}^{z₁} G|`.
///
/// The member satisfies `f(z₁) ≠ f(z₂)` whenever the margin is positive;
/// the quantity is exactly the modulus in the two-point form of the
/// difference quotient of `1/f`.
pub fn difference_quotient_margin(
    spec: &ConstructionSpec,
    z1: Complex64,
    z2: Complex64,
) -> Result<f64, FamilyError> {
    for z in [z1, z2] {
        if z.norm() >= 1.0 {
            return Err(FamilyError::Evaluation(EvalError::OutsideDisk { modulus: z.norm() }));
        }
        if z.norm() == 0.0 {
            return Err(FamilyError::ParameterOutOfRange {
                what: "points must be nonzero (the margin compares 1/f values)".into(),
            });
        }
    }
    if (z1 - z2).norm() == 0.0 {
        return Err(FamilyError::CoincidentPoints);
    }
    let integral = integrate_segment(&|t| spec.integrand_at(t), z2, z1, QUAD_TOL)?;
    let value = spec.params.lambda() * z1 * z2 / (z1 - z2) * integral;
    Ok(1.0 - value.norm())
}

/// Which sharp bound a [`BoundReport`] row concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Bk,
    L2,
    A2,
}

/// One bound-vs-achieved row: the sharp bound, the value an extremal
/// construction actually attains, and the gap between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<f64>,
    pub bound_value: f64,
    pub achieved_value: f64,
    pub gap: f64,
}

/// Bound row for `|b_k|`, with the achieved value read off the extremal
/// member's series.
pub fn bk_report(params: &ClassParams, k: usize, order: usize) -> Result<BoundReport, FamilyError> {
    if k < 2 {
        return Err(FamilyError::ParameterOutOfRange { what: format!("k must be ≥ 2, got {k}") });
    }
    let order = order.max(k + 4);
    let f = extremal_fk(k, params, Complex64::new(0.0, 0.0), order)?;
    let achieved = b_coefficients(&f, k)?[k - 1].norm();
    let bound = bk_bound(k, params);
    Ok(BoundReport {
        kind: BoundKind::Bk,
        k: Some(k),
        p: None,
        bound_value: bound,
        achieved_value: achieved,
        gap: bound - achieved,
    })
}

/// Bound row for the weighted coefficient tail, achieved by the `k = 2`
/// extremal member summed to `kmax`.
pub fn l2_report(
    params: &ClassParams,
    kmax: usize,
    order: usize,
) -> Result<BoundReport, FamilyError> {
    let order = order.max(kmax + 4);
    let f = extremal_fk(2, params, Complex64::new(0.0, 0.0), order)?;
    let achieved = l2_weighted_sum(&f, kmax)?;
    let bound = l2_bound(params);
    Ok(BoundReport {
        kind: BoundKind::L2,
        k: Some(kmax),
        p: None,
        bound_value: bound,
        achieved_value: achieved,
        gap: bound - achieved,
    })
}

/// Bound row for `|a₂|` at analyticity radius `p`, achieved by the pole
/// extremal.
pub fn a2_report(params: &ClassParams, p: f64, order: usize) -> Result<BoundReport, FamilyError> {
    let bound = a2_bound(params, p)?;
    let f = extremal_f0(params, p, order)?;
    let achieved = b_coefficients(&f, 1)?[0].norm();
    Ok(BoundReport {
        kind: BoundKind::A2,
        k: None,
        p: Some(p),
        bound_value: bound,
        achieved_value: achieved,
        gap: bound - achieved,
    })
}
