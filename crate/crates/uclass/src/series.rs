//! Truncated complex power series and a Cauchy-integral coefficient oracle.
//!
//! Every function on the unit disk is represented downstream as a
//! `PowerSeries`: Taylor coefficients at 0 up to a fixed truncation order.
//! Arithmetic follows one truncation policy: a result never claims more
//! order than its weakest operand, and nothing is extended silently.
//! `coeffs_by_cauchy_dft` recovers coefficients from a pointwise evaluator
//! by a trapezoidal Cauchy integral and serves as the independent oracle
//! for every coefficient the series pipeline produces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance separating a genuinely singular constant term from round-off.
pub const ZERO_TOL: f64 = 1e-13;

/// Serde adapter rendering a `Complex64` as a `[re, im]` pair.
pub mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 128;

/// Default sample count for the Cauchy-integral oracle at order `n`.
///
/// Four samples per coefficient leave a comfortable aliasing margin.
pub fn default_dft_samples(n: usize) -> usize {
    4 * (n + 1)
}

/// Failure of a pointwise evaluator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("evaluation failed at z = {z}: {reason}")]
    Failed { z: Complex64, reason: String },
    #[error("|z| = {modulus} is not inside the open unit disk")]
    OutsideDisk { modulus: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("constant term has modulus {modulus:.3e} (< {ZERO_TOL:.0e}); series is not invertible")]
    ZeroConstantTerm { modulus: f64 },
    #[error("inner series of a composition must vanish at 0, got modulus {modulus:.3e}")]
    InnerConstantNonzero { modulus: f64 },
    #[error("log requires constant term 1, got {got}")]
    ConstantNotOne { got: Complex64 },
    #[error("oracle needs more than 2N samples: got M = {m} for N = {n}")]
    TooFewSamples { m: usize, n: usize },
    #[error("oracle radius must be finite and positive, got {r}")]
    BadRadius { r: f64 },
    #[error(transparent)]
    EvaluatorFailure(#[from] EvalError),
}

/// A truncated complex Taylor series: coefficients of `z^0 .. z^order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct PowerSeries {
    order: usize,
    coeffs: Vec<Complex64>,
}

/// Wire form: `{"order": N, "coeffs": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<[f64; 2]>,
}

impl From<PowerSeries> for SeriesRepr {
    fn from(s: PowerSeries) -> Self {
        SeriesRepr {
            order: s.order,
            coeffs: s.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for PowerSeries {
    type Error = String;

    fn try_from(r: SeriesRepr) -> Result<Self, String> {
        if r.coeffs.len() != r.order + 1 {
            return Err(format!(
                "series of order {} must carry {} coefficients, got {}",
                r.order,
                r.order + 1,
                r.coeffs.len()
            ));
        }
        let coeffs: Vec<Complex64> = r.coeffs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err("series coefficients must be finite".into());
        }
        Ok(PowerSeries::new(coeffs))
    }
}

impl PowerSeries {
    /// Builds a series from coefficients `c_0 .. c_N`; the order is `N`.
    ///
    /// Coefficients must be finite and nonempty: those are programmer
    /// contracts, not runtime conditions, so violations panic.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least the constant term");
        assert!(
            coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()),
            "series coefficients must be finite"
        );
        PowerSeries { order: coeffs.len() - 1, coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries { order, coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), order)
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The monomial `c z^k`, truncated to `order` (zero if `k > order`).
    pub fn monomial(c: Complex64, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The identity series `z`.
    pub fn variable(order: usize) -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), 1, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `z^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Truncates to order `min(n, self.order)`. Never extends.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.order);
        PowerSeries { order: n, coeffs: self.coeffs[..=n].to_vec() }
    }

    /// Coefficient-wise sum to the weaker operand's order.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.order.min(other.order);
        let coeffs = (0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect();
        PowerSeries { order: n, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order.min(other.order);
        let coeffs = (0..=n).map(|k| self.coeffs[k] - other.coeffs[k]).collect();
        PowerSeries { order: n, coeffs }
    }

    pub fn neg(&self) -> Self {
        PowerSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        PowerSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Cauchy product truncated to the weaker operand's order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order.min(other.order);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        for (i, &a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries { order: n, coeffs }
    }

    /// Multiplicative inverse: `self * reciprocal(self) = 1 + O(z^{N+1})`.
    ///
    /// The constant term must be nonzero; `ZERO_TOL` separates a genuine
    /// singularity from round-off.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let s0 = self.coeffs[0];
        if s0.norm() <= ZERO_TOL {
            return Err(SeriesError::ZeroConstantTerm { modulus: s0.norm() });
        }
        let inv0 = Complex64::new(1.0, 0.0) / s0;
        let mut r = vec![Complex64::new(0.0, 0.0); self.order + 1];
        r[0] = inv0;
        for k in 1..=self.order {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * r[k - j];
            }
            r[k] = -acc * inv0;
        }
        Ok(PowerSeries { order: self.order, coeffs: r })
    }

    /// Term-wise derivative; order drops by one (floor at zero).
    pub fn differentiate(&self) -> Self {
        if self.order == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=self.order)
            .map(|k| self.coeffs[k] * Complex64::new(k as f64, 0.0))
            .collect();
        PowerSeries { order: self.order - 1, coeffs }
    }

    /// Term-wise antiderivative with zero constant term.
    ///
    /// Integration is exact, so the order rises by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.order + 2];
        for k in 0..=self.order {
            coeffs[k + 1] = self.coeffs[k] / Complex64::new((k + 1) as f64, 0.0);
        }
        PowerSeries { order: self.order + 1, coeffs }
    }

    /// Multiplies by `z^k` (exact; order rises by `k`).
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.order + k + 1];
        coeffs[k..].copy_from_slice(&self.coeffs);
        PowerSeries { order: self.order + k, coeffs }
    }

    /// Divides by `z^k`, discarding the coefficients below `z^k`.
    ///
    /// The caller is responsible for those coefficients being zero.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(k <= self.order, "cannot shift a series of order {} down by {}", self.order, k);
        PowerSeries { order: self.order - k, coeffs: self.coeffs[k..].to_vec() }
    }

    /// Composition `self(inner(z))`; the inner series must vanish at 0.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        let t0 = inner.coeffs[0];
        if t0.norm() > ZERO_TOL {
            return Err(SeriesError::InnerConstantNonzero { modulus: t0.norm() });
        }
        let n = self.order.min(inner.order);
        let inner = inner.truncated(n);
        // Horner over the outer coefficients; terms beyond z^n cannot
        // contribute below order n+1 because inner has a zero at 0.
        let mut acc = PowerSeries::constant(self.coeff(n), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += self.coeff(k);
        }
        Ok(acc)
    }

    /// Principal-branch logarithm of a series with constant term 1.
    ///
    /// Computed from the chain rule: `log(s) = ∫ s'/s`, which pins the
    /// value 0 at z = 0.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let s0 = self.coeffs[0];
        if (s0 - Complex64::new(1.0, 0.0)).norm() > ZERO_TOL {
            return Err(SeriesError::ConstantNotOne { got: s0 });
        }
        let quotient = self.differentiate().mul(&self.reciprocal()?);
        Ok(quotient.integrate().truncated(self.order))
    }

    /// Horner evaluation of the truncated polynomial.
    ///
    /// Truncation error grows with `|z|`; callers stay inside the region
    /// where the tail is negligible.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Largest coefficient modulus, a cheap conditioning probe.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::add(self, rhs)
    }
}

impl std::ops::Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::mul(self, rhs)
    }
}

/// Recovers Taylor coefficients `c_0 .. c_n` of an analytic function from
/// pointwise values on the circle `|z| = r`:
///
/// `c_k ≈ r^{-k} (1/M) Σ_j f(r e^{iθ_j}) e^{-ikθ_j}`, `θ_j = 2πj/M`.
///
/// Exact for polynomials up to aliasing; for analytic `f` the aliasing
/// error decays like `r^M` when `r < 1`. Requires `m > 2n`.
pub fn coeffs_by_cauchy_dft<F>(f: F, r: f64, n: usize, m: usize) -> Result<PowerSeries, SeriesError>
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    if !(r.is_finite() && r > 0.0) {
        return Err(SeriesError::BadRadius { r });
    }
    if m <= 2 * n {
        return Err(SeriesError::TooFewSamples { m, n });
    }
    // The r^{-k} normalization amplifies every sample-level error by
    // 1/r^k, so the summation must not add noise of its own: twiddles
    // come from a table with exactly reduced angle indices (a recurrence
    // w *= step drifts by ~M·eps), and the sums are compensated.
    let mut samples = Vec::with_capacity(m);
    for j in 0..m {
        let theta = std::f64::consts::TAU * j as f64 / m as f64;
        samples.push(f(Complex64::from_polar(r, theta))?);
    }
    let roots: Vec<Complex64> = (0..m)
        .map(|i| Complex64::from_polar(1.0, -std::f64::consts::TAU * i as f64 / m as f64))
        .collect();
    let m_inv = 1.0 / m as f64;
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut sum = Kahan::default();
        for (j, fj) in samples.iter().enumerate() {
            sum.add(fj * roots[(j * k) % m]);
        }
        coeffs.push(sum.value() * m_inv / r.powi(k as i32));
    }
    Ok(PowerSeries::new(coeffs))
}

/// Componentwise compensated (Kahan) accumulator.
#[derive(Default)]
struct Kahan {
    sum: Complex64,
    comp: Complex64,
}

impl Kahan {
    fn add(&mut self, term: Complex64) {
        let y = term - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> Complex64 {
        self.sum
    }
}
