//! Unit-bounded analytic factors on the disk and the Möbius recombination
//! that turns them into centered bounded functions.
//!
//! The four constructible families (constants, monomials, finite Blaschke
//! products, convex mixes) all satisfy `|ω(z)| ≤ 1` by construction, so
//! the bound is a type invariant rather than a runtime check. Construction
//! validates parameters and rejects anything that would break it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

use crate::series::{EvalError, PowerSeries};

/// Slack for moduli that carry float round-off from polar construction.
/// Values within this band above 1 are treated as boundary intent and
/// rescaled onto the circle; anything larger is rejected.
const MODULUS_SLACK: f64 = 1e-12;

/// Tolerance on convex weights summing to one; accepted sums are
/// renormalized so the bound stays exact downstream.
const WEIGHT_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchwarzError {
    #[error("{what} must have modulus at most 1, got {modulus}")]
    ModulusExceedsOne { what: &'static str, modulus: f64 },
    #[error("unimodular factor must have modulus 1, got {modulus}")]
    NotUnimodular { modulus: f64 },
    #[error("Blaschke zero must lie strictly inside the disk, got modulus {modulus}")]
    ZeroNotInDisk { modulus: f64 },
    #[error("invalid convex weights: {reason}")]
    BadWeights { reason: String },
    #[error("parameter out of range: {what}")]
    ParameterOutOfRange { what: String },
}

/// One of the four constructible unit-bounded families.
///
/// Fields are private so a value can only exist through the validating
/// constructors (or serde, which routes through them).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchwarzRepr", into = "SchwarzRepr")]
pub struct SchwarzSpec {
    kind: Kind,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Kind {
    /// ω(z) = u, |u| ≤ 1.
    Constant { u: Complex64 },
    /// ω(z) = u z^m, |u| ≤ 1.
    Monomial { u: Complex64, m: usize },
    /// ω(z) = e · Π (z − α_i)/(1 − ᾱ_i z), |α_i| < 1, |e| = 1.
    Blaschke { zeros: Vec<Complex64>, factor: Complex64 },
    /// ω = Σ w_i ω_i, w_i ≥ 0, Σ w_i = 1.
    Mix { weights: Vec<f64>, parts: Vec<SchwarzSpec> },
}

fn check_finite(z: Complex64, what: &'static str) -> Result<(), SchwarzError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(SchwarzError::ParameterOutOfRange { what: format!("{what} must be finite") })
    }
}

/// Accepts a coefficient meant to satisfy `|z| ≤ 1`, absorbing round-off.
fn accept_unit_ball(z: Complex64, what: &'static str) -> Result<Complex64, SchwarzError> {
    check_finite(z, what)?;
    let n = z.norm();
    if n <= 1.0 {
        Ok(z)
    } else if n <= 1.0 + MODULUS_SLACK {
        Ok(z / n)
    } else {
        Err(SchwarzError::ModulusExceedsOne { what, modulus: n })
    }
}

impl SchwarzSpec {
    /// The constant function `ω ≡ u`.
    pub fn constant(u: Complex64) -> Result<Self, SchwarzError> {
        Ok(SchwarzSpec { kind: Kind::Constant { u: accept_unit_ball(u, "constant value")? } })
    }

    /// The monomial `ω(z) = u z^m`.
    pub fn monomial(u: Complex64, m: usize) -> Result<Self, SchwarzError> {
        Ok(SchwarzSpec { kind: Kind::Monomial { u: accept_unit_ball(u, "monomial coefficient")?, m } })
    }

    /// A finite Blaschke product with the given zeros and unimodular factor.
    pub fn blaschke(zeros: Vec<Complex64>, factor: Complex64) -> Result<Self, SchwarzError> {
        for &alpha in &zeros {
            check_finite(alpha, "Blaschke zero")?;
            if alpha.norm() >= 1.0 {
                return Err(SchwarzError::ZeroNotInDisk { modulus: alpha.norm() });
            }
        }
        check_finite(factor, "unimodular factor")?;
        let n = factor.norm();
        if (n - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(SchwarzError::NotUnimodular { modulus: n });
        }
        Ok(SchwarzSpec { kind: Kind::Blaschke { zeros, factor: factor / n } })
    }

    /// A convex combination `Σ w_i ω_i`.
    pub fn mix(weights: Vec<f64>, parts: Vec<SchwarzSpec>) -> Result<Self, SchwarzError> {
        if weights.len() != parts.len() {
            return Err(SchwarzError::BadWeights {
                reason: format!("{} weights for {} parts", weights.len(), parts.len()),
            });
        }
        if weights.is_empty() {
            return Err(SchwarzError::BadWeights { reason: "empty mix".into() });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(SchwarzError::BadWeights { reason: "weights must be finite and nonnegative".into() });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(SchwarzError::BadWeights { reason: format!("weights sum to {sum}, expected 1") });
        }
        let weights = weights.iter().map(|w| w / sum).collect();
        Ok(SchwarzSpec { kind: Kind::Mix { weights, parts } })
    }

    /// Structural view for in-crate parameter flattening (the optimizer
    /// treats a spec as a template whose numeric entries are free).
    pub(crate) fn kind(&self) -> &Kind {
        &self.kind
    }

    /// Pointwise value; defined on the open disk and bounded by 1 there.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, EvalError> {
        if z.norm() >= 1.0 {
            return Err(EvalError::OutsideDisk { modulus: z.norm() });
        }
        Ok(self.evaluate_unchecked(z))
    }

    fn evaluate_unchecked(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            Kind::Constant { u } => *u,
            Kind::Monomial { u, m } => u * cpow(z, *m),
            Kind::Blaschke { zeros, factor } => {
                let mut acc = *factor;
                for &alpha in zeros {
                    acc *= (z - alpha) / (Complex64::new(1.0, 0.0) - alpha.conj() * z);
                }
                acc
            }
            Kind::Mix { weights, parts } => weights
                .iter()
                .zip(parts)
                .map(|(w, p)| p.evaluate_unchecked(z) * *w)
                .fold(Complex64::new(0.0, 0.0), |a, b| a + b),
        }
    }

    /// Taylor expansion at 0 to order `n`. Exact for constants and
    /// monomials; Blaschke factors expand through the geometric series of
    /// `1/(1 − ᾱz)` and multiply out.
    pub fn series(&self, n: usize) -> PowerSeries {
        match &self.kind {
            Kind::Constant { u } => PowerSeries::constant(*u, n),
            Kind::Monomial { u, m } => PowerSeries::monomial(*u, *m, n),
            Kind::Blaschke { zeros, factor } => {
                let mut acc = PowerSeries::constant(*factor, n);
                for &alpha in zeros {
                    let geometric = PowerSeries::new(
                        (0..=n)
                            .scan(Complex64::new(1.0, 0.0), |st, _| {
                                let cur = *st;
                                *st *= alpha.conj();
                                Some(cur)
                            })
                            .collect(),
                    );
                    let numerator = PowerSeries::variable(n).sub(&PowerSeries::constant(alpha, n));
                    acc = acc.mul(&numerator).mul(&geometric);
                }
                acc
            }
            Kind::Mix { weights, parts } => {
                let mut acc = PowerSeries::zero(n);
                for (w, p) in weights.iter().zip(parts) {
                    acc = acc.add(&p.series(n).scale(Complex64::new(*w, 0.0)));
                }
                acc
            }
        }
    }
}

fn cpow(z: Complex64, mut m: usize) -> Complex64 {
    let mut base = z;
    let mut acc = Complex64::new(1.0, 0.0);
    while m > 0 {
        if m & 1 == 1 {
            acc *= base;
        }
        base *= base;
        m >>= 1;
    }
    acc
}

/// Pointwise evaluation of a Schwarz-family member.
pub fn evaluate_omega(omega: &SchwarzSpec, z: Complex64) -> Result<Complex64, EvalError> {
    omega.evaluate(z)
}

/// Taylor expansion of a Schwarz-family member to order `n`.
pub fn omega_series(omega: &SchwarzSpec, n: usize) -> PowerSeries {
    omega.series(n)
}

/// A unit-bounded analytic function carried as a pointwise evaluator plus
/// an on-demand series view. Both views describe the same function; the
/// series is the algebraic expansion, not a numerical fit.
#[derive(Clone)]
pub struct BoundedAnalytic {
    evaluator: Arc<dyn Fn(Complex64) -> Result<Complex64, EvalError> + Send + Sync>,
    series_builder: Arc<dyn Fn(usize) -> PowerSeries + Send + Sync>,
}

impl std::fmt::Debug for BoundedAnalytic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BoundedAnalytic").finish_non_exhaustive()
    }
}

impl BoundedAnalytic {
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, EvalError> {
        (self.evaluator)(z)
    }

    pub fn series(&self, n: usize) -> PowerSeries {
        (self.series_builder)(n)
    }
}

/// The centered recombination `Ω(z) = (a + z²ω(z)) / (1 + ā z²ω(z))`.
///
/// For `|a| < 1` this is again unit-bounded, with `Ω(0) = a` and
/// `Ω'(0) = 0`; it is the shape every member function induces.
pub fn induced_capital_omega(
    omega: &SchwarzSpec,
    a: Complex64,
    _n: usize,
) -> Result<BoundedAnalytic, SchwarzError> {
    check_finite(a, "center a")?;
    if a.norm() >= 1.0 {
        return Err(SchwarzError::ParameterOutOfRange {
            what: format!("|a| = {} must be < 1", a.norm()),
        });
    }
    let omega_eval = omega.clone();
    let omega_series = omega.clone();
    let evaluator = move |z: Complex64| -> Result<Complex64, EvalError> {
        let w = omega_eval.evaluate(z)?;
        let t = z * z * w;
        // |ā t| ≤ |a| < 1, so the denominator cannot vanish.
        Ok((a + t) / (Complex64::new(1.0, 0.0) + a.conj() * t))
    };
    let series_builder = move |n: usize| -> PowerSeries {
        let t = omega_series.series(n).shift_up(2).truncated(n);
        let numerator = PowerSeries::constant(a, n).add(&t);
        let denominator = PowerSeries::one(n).add(&t.scale(a.conj()));
        // Constant term of the denominator is exactly 1.
        numerator.mul(&denominator.reciprocal().expect("denominator starts at 1"))
    };
    Ok(BoundedAnalytic {
        evaluator: Arc::new(evaluator),
        series_builder: Arc::new(series_builder),
    })
}

/// Wire form, tagged by `kind`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SchwarzRepr {
    Constant(ConstantRepr),
    Monomial(MonomialRepr),
    Blaschke(BlaschkeRepr),
    Mix(MixRepr),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantRepr {
    u: [f64; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialRepr {
    u: [f64; 2],
    m: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlaschkeRepr {
    zeros: Vec<[f64; 2]>,
    unimodular_factor: [f64; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MixRepr {
    weights: Vec<f64>,
    parts: Vec<SchwarzSpec>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl From<SchwarzSpec> for SchwarzRepr {
    fn from(s: SchwarzSpec) -> Self {
        match s.kind {
            Kind::Constant { u } => SchwarzRepr::Constant(ConstantRepr { u: pair(u) }),
            Kind::Monomial { u, m } => SchwarzRepr::Monomial(MonomialRepr { u: pair(u), m }),
            Kind::Blaschke { zeros, factor } => SchwarzRepr::Blaschke(BlaschkeRepr {
                zeros: zeros.into_iter().map(pair).collect(),
                unimodular_factor: pair(factor),
            }),
            Kind::Mix { weights, parts } => SchwarzRepr::Mix(MixRepr { weights, parts }),
        }
    }
}

impl TryFrom<SchwarzRepr> for SchwarzSpec {
    type Error = SchwarzError;

    fn try_from(r: SchwarzRepr) -> Result<Self, SchwarzError> {
        match r {
            SchwarzRepr::Constant(c) => SchwarzSpec::constant(unpair(c.u)),
            SchwarzRepr::Monomial(m) => SchwarzSpec::monomial(unpair(m.u), m.m),
            SchwarzRepr::Blaschke(b) => SchwarzSpec::blaschke(
                b.zeros.into_iter().map(unpair).collect(),
                unpair(b.unimodular_factor),
            ),
            SchwarzRepr::Mix(m) => SchwarzSpec::mix(m.weights, m.parts),
        }
    }
}
