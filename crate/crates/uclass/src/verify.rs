//! Numerical verdicts: membership in the class, local and global
//! univalence probes, subordination tests, and series-vs-integral
//! cross-checks.
//!
//! Everything here is sampling-based. Verdicts are three-valued on
//! purpose: a grid can *refute* (with a re-checkable witness point) and
//! can *support*, but it can never prove; anything the machinery cannot
//! settle robustly comes back `Inconclusive` with a reason.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{ClassParams, ConstructionSpec, FamilyError};
use crate::series::{complex_pair, coeffs_by_cauchy_dft, default_dft_samples, EvalError, PowerSeries};

/// Supported-verdict slack: membership needs `sup < λ − tol`.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// A sampled `|f'|` below this refutes local univalence.
pub const DERIVATIVE_TOL: f64 = 1e-8;
/// Relative collision tolerance for the pairwise-distinct test.
pub const COLLISION_RTOL: f64 = 1e-9;
/// Pairs closer than this in the domain are never collision candidates.
pub const COLLISION_MIN_SEP: f64 = 1e-6;
/// Polygonal resolution of closed image curves.
pub const CURVE_SAMPLES: usize = 2048;
/// A single polygon segment turning more than this (radians) around the
/// probe point means the curve is too coarse there to trust the winding.
const SEGMENT_TURN_GUARD: f64 = 2.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("invalid sampling grid: {reason}")]
    BadGrid { reason: String },
    #[error("subordination requires matching centers: g(0) = {g0}, h(0) = {h0}")]
    CenterMismatch { g0: Complex64, h0: Complex64 },
    #[error("cross-check radius must lie in (0, 1), got {r}")]
    RadiusTooLarge { r: f64 },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Evaluation(#[from] EvalError),
}

/// Concentric sampling rings with a deterministic jittered companion
/// lattice. The regular angles `2πj/n` are always present (so symmetric
/// landmark points are hit exactly); the jittered copies kill angular
/// blind spots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct SamplingGrid {
    radii: Vec<f64>,
    angles_per_ring: usize,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridRepr {
    radii: Vec<f64>,
    angles_per_ring: usize,
    seed: u64,
}

impl From<SamplingGrid> for GridRepr {
    fn from(g: SamplingGrid) -> Self {
        GridRepr { radii: g.radii, angles_per_ring: g.angles_per_ring, seed: g.seed }
    }
}

impl TryFrom<GridRepr> for SamplingGrid {
    type Error = VerifyError;
    fn try_from(r: GridRepr) -> Result<Self, VerifyError> {
        SamplingGrid::new(r.radii, r.angles_per_ring, r.seed)
    }
}

impl SamplingGrid {
    pub fn new(radii: Vec<f64>, angles_per_ring: usize, seed: u64) -> Result<Self, VerifyError> {
        if radii.is_empty() {
            return Err(VerifyError::BadGrid { reason: "no radii".into() });
        }
        if !radii.iter().all(|r| r.is_finite() && *r > 0.0 && *r < 1.0) {
            return Err(VerifyError::BadGrid { reason: "radii must lie in (0, 1)".into() });
        }
        if !radii.windows(2).all(|w| w[0] < w[1]) {
            return Err(VerifyError::BadGrid { reason: "radii must be strictly increasing".into() });
        }
        if angles_per_ring < 64 {
            return Err(VerifyError::BadGrid {
                reason: format!("need at least 64 angles per ring, got {angles_per_ring}"),
            });
        }
        Ok(SamplingGrid { radii, angles_per_ring, seed })
    }

    /// Boundary-weighted default: outer rings dominate every quantity of
    /// interest by the maximum principle.
    pub fn default_grid(seed: u64) -> Self {
        SamplingGrid::new(vec![0.5, 0.9, 0.99, 0.999], 512, seed).expect("valid default")
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles_per_ring(&self) -> usize {
        self.angles_per_ring
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn outermost(&self) -> f64 {
        *self.radii.last().expect("nonempty")
    }

    /// Regular plus jittered points on ring `i`.
    pub fn ring_points(&self, i: usize) -> Vec<Complex64> {
        let r = self.radii[i];
        let n = self.angles_per_ring;
        let step = std::f64::consts::TAU / n as f64;
        let mut pts = Vec::with_capacity(2 * n);
        for j in 0..n {
            pts.push(Complex64::from_polar(r, step * j as f64));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(0x9e37_79b9 * (i as u64 + 1)));
        for j in 0..n {
            let jitter: f64 = rng.gen();
            pts.push(Complex64::from_polar(r, step * (j as f64 + jitter)));
        }
        pts
    }

    /// All points, inner rings first.
    pub fn points(&self) -> Vec<Complex64> {
        (0..self.radii.len()).flat_map(|i| self.ring_points(i)).collect()
    }
}

/// Three-valued verdict with a point witness on refutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    MemberSupported,
    RefutedAt {
        #[serde(with = "complex_pair")]
        z: Complex64,
        #[serde(with = "complex_pair")]
        value: Complex64,
    },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub sup_estimate: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub grid: SamplingGrid,
}

/// Membership probe for an arbitrary operator evaluator: samples
/// `|U(z) − μ|` over the grid and compares the sup against `λ`.
pub fn membership_with<F>(u: F, params: &ClassParams, grid: &SamplingGrid) -> MembershipReport
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    let mut sup = 0.0f64;
    let mut witness: Option<(Complex64, Complex64)> = None;
    let mut failure: Option<String> = None;
    for z in grid.points() {
        match u(z) {
            Ok(value) => {
                let d = (value - params.mu()).norm();
                if d > sup {
                    sup = d;
                    witness = Some((z, value));
                }
            }
            Err(e) => {
                if failure.is_none() {
                    failure = Some(format!("operator evaluation failed: {e}"));
                }
            }
        }
    }
    let lambda = params.lambda();
    let verdict = if let Some(reason) = failure {
        Verdict::Inconclusive { reason }
    } else if sup >= lambda {
        let (z, value) = witness.expect("sup > 0 has a witness");
        Verdict::RefutedAt { z, value }
    } else if sup < lambda - MEMBERSHIP_TOL {
        Verdict::MemberSupported
    } else {
        Verdict::Inconclusive {
            reason: format!("sup {sup} within {MEMBERSHIP_TOL:e} of lambda = {lambda}"),
        }
    };
    MembershipReport { sup_estimate: sup, margin: lambda - sup, verdict, grid: grid.clone() }
}

/// Membership of a series-represented function. The operator series is
/// evaluated by Horner, so the answer is only as good as the truncation
/// allows on the outermost ring; prefer [`membership_of_spec`] for
/// constructed members.
pub fn membership(
    f: &PowerSeries,
    params: &ClassParams,
    grid: &SamplingGrid,
) -> Result<MembershipReport, VerifyError> {
    let u = crate::family::u_operator(f, f.order().saturating_sub(1))?;
    Ok(membership_with(|z| Ok(u.evaluate(z)), params, grid))
}

/// Membership of a constructed member, using the closed-form operator
/// `U = 1 + λz²G(z)`: exact up to round-off at every radius.
pub fn membership_of_spec(
    spec: &ConstructionSpec,
    params: &ClassParams,
    grid: &SamplingGrid,
) -> MembershipReport {
    membership_with(|z| spec.u_at(z), params, grid)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalUnivalenceReport {
    pub min_abs_derivative: f64,
    #[serde(with = "complex_pair")]
    pub argmin: Complex64,
    pub verdict: Verdict,
    pub grid: SamplingGrid,
}

/// Scans `|f'|` over the grid; a value below [`DERIVATIVE_TOL`] refutes
/// local univalence at that point.
pub fn local_univalence_check<F>(f_prime: F, grid: &SamplingGrid) -> LocalUnivalenceReport
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    let mut min = f64::INFINITY;
    let mut argmin = Complex64::new(0.0, 0.0);
    let mut minval = Complex64::new(0.0, 0.0);
    let mut failure: Option<String> = None;
    for z in grid.points() {
        match f_prime(z) {
            Ok(value) => {
                if value.norm() < min {
                    min = value.norm();
                    argmin = z;
                    minval = value;
                }
            }
            Err(e) => {
                if failure.is_none() {
                    failure = Some(format!("derivative evaluation failed: {e}"));
                }
            }
        }
    }
    let verdict = if let Some(reason) = failure {
        Verdict::Inconclusive { reason }
    } else if min < DERIVATIVE_TOL {
        Verdict::RefutedAt { z: argmin, value: minval }
    } else {
        Verdict::MemberSupported
    };
    LocalUnivalenceReport { min_abs_derivative: min, argmin, verdict, grid: grid.clone() }
}

pub fn local_univalence_of_series(f: &PowerSeries, grid: &SamplingGrid) -> LocalUnivalenceReport {
    let fp = f.differentiate();
    local_univalence_check(|z| Ok(fp.evaluate(z)), grid)
}

pub fn local_univalence_of_spec(spec: &ConstructionSpec, grid: &SamplingGrid) -> LocalUnivalenceReport {
    local_univalence_check(
        |z| {
            spec.f_prime_at(z).map_err(|e| EvalError::Failed {
                z,
                reason: format!("derivative unavailable: {e}"),
            })
        },
        grid,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UnivalenceVerdict {
    ConsistentWithUnivalence,
    RefutedAt {
        #[serde(with = "complex_pair")]
        z1: Complex64,
        #[serde(with = "complex_pair")]
        z2: Complex64,
        #[serde(with = "complex_pair")]
        value: Complex64,
    },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivalenceReport {
    pub verdict: UnivalenceVerdict,
    pub pairs_tested: usize,
    pub winding_targets_tested: usize,
    pub poles_assumed_inside: usize,
    pub grid: SamplingGrid,
}

/// Grid univalence probe for a disk-analytic function: pairwise-distinct
/// images plus an argument-principle preimage count (`winding = 1`)
/// around targets sampled from the inner rings.
pub fn univalence_grid<F>(f: F, grid: &SamplingGrid) -> UnivalenceReport
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    univalence_grid_with_poles(f, grid, 0)
}

/// Same probe for a function with a known number of poles strictly
/// inside the outermost ring: each pole shifts the expected winding of
/// the boundary image around an attained value down by one.
pub fn univalence_grid_with_poles<F>(
    f: F,
    grid: &SamplingGrid,
    poles_inside: usize,
) -> UnivalenceReport
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    let points = grid.points();
    let mut values = Vec::with_capacity(points.len());
    for &z in &points {
        match f(z) {
            Ok(v) => values.push(v),
            Err(e) => {
                return UnivalenceReport {
                    verdict: UnivalenceVerdict::Inconclusive {
                        reason: format!("evaluation failed at {z}: {e}"),
                    },
                    pairs_tested: 0,
                    winding_targets_tested: 0,
                    poles_assumed_inside: poles_inside,
                    grid: grid.clone(),
                };
            }
        }
    }

    // Pairwise-distinct scan, sorted by Re f so only value-near pairs are
    // compared. The window bound uses the largest image modulus, which
    // dominates every pair's relative tolerance.
    let max_abs = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let window = COLLISION_RTOL * (1.0 + max_abs);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].re.total_cmp(&values[j].re));
    let mut pairs_tested = 0usize;
    for (rank, &i) in order.iter().enumerate() {
        for &j in order.iter().skip(rank + 1) {
            if values[j].re - values[i].re > window {
                break;
            }
            pairs_tested += 1;
            let sep = (points[i] - points[j]).norm();
            if sep <= COLLISION_MIN_SEP {
                continue;
            }
            let tol = COLLISION_RTOL * (1.0 + values[i].norm());
            if (values[i] - values[j]).norm() < tol {
                return UnivalenceReport {
                    verdict: UnivalenceVerdict::RefutedAt {
                        z1: points[i],
                        z2: points[j],
                        value: values[i],
                    },
                    pairs_tested,
                    winding_targets_tested: 0,
                    poles_assumed_inside: poles_inside,
                    grid: grid.clone(),
                };
            }
        }
    }

    // Argument principle on the outermost ring: the boundary image must
    // wind 1 − P times around values attained strictly inside.
    let outer = grid.outermost();
    let curve = match image_curve(&f, outer) {
        Ok(c) => c,
        Err(e) => {
            return UnivalenceReport {
                verdict: UnivalenceVerdict::Inconclusive {
                    reason: format!("boundary curve evaluation failed: {e}"),
                },
                pairs_tested,
                winding_targets_tested: 0,
                poles_assumed_inside: poles_inside,
                grid: grid.clone(),
            };
        }
    };
    let expected = 1i64 - poles_inside as i64;
    let inner_count = points.len() - 2 * grid.angles_per_ring();
    let stride = (inner_count / 64).max(1);
    let mut targets_tested = 0usize;
    for idx in (0..inner_count).step_by(stride) {
        let w = values[idx];
        targets_tested += 1;
        match winding_number(&curve, w) {
            WindingOutcome::Count(k) if k == expected => {}
            WindingOutcome::Count(k) => {
                return UnivalenceReport {
                    verdict: UnivalenceVerdict::Inconclusive {
                        reason: format!(
                            "boundary image winds {k} (expected {expected}) around f({}) = {w}; \
                             some value is attained more than once or the grid is too coarse",
                            points[idx]
                        ),
                    },
                    pairs_tested,
                    winding_targets_tested: targets_tested,
                    poles_assumed_inside: poles_inside,
                    grid: grid.clone(),
                };
            }
            WindingOutcome::TooCoarse => {
                return UnivalenceReport {
                    verdict: UnivalenceVerdict::Inconclusive {
                        reason: format!("boundary curve too coarse near target {w}"),
                    },
                    pairs_tested,
                    winding_targets_tested: targets_tested,
                    poles_assumed_inside: poles_inside,
                    grid: grid.clone(),
                };
            }
        }
    }

    UnivalenceReport {
        verdict: UnivalenceVerdict::ConsistentWithUnivalence,
        pairs_tested,
        winding_targets_tested: targets_tested,
        poles_assumed_inside: poles_inside,
        grid: grid.clone(),
    }
}

/// Number of poles of `f` strictly inside `|z| < r`, counted as zeros of
/// the analytic `h = z/f` via the argument principle. `Ok(None)` means
/// the boundary curve was too coarse to trust.
pub fn pole_count(spec: &ConstructionSpec, r: f64) -> Result<Option<usize>, VerifyError> {
    if !(r.is_finite() && r > 0.0 && r < 1.0) {
        return Err(VerifyError::RadiusTooLarge { r });
    }
    let h = |z: Complex64| {
        spec.h_at(z).map_err(|e| EvalError::Failed { z, reason: format!("{e}") })
    };
    let curve = image_curve(&h, r).map_err(VerifyError::Evaluation)?;
    Ok(match winding_number(&curve, Complex64::new(0.0, 0.0)) {
        WindingOutcome::Count(k) if k >= 0 => Some(k as usize),
        WindingOutcome::Count(_) | WindingOutcome::TooCoarse => None,
    })
}

/// Univalence probe for a constructed member. Counts the poles inside
/// the outermost ring first (zeros of the analytic `h = z/f`, by the
/// argument principle) and feeds that count into the winding target.
pub fn univalence_of_spec(spec: &ConstructionSpec, grid: &SamplingGrid) -> UnivalenceReport {
    let poles = match pole_count(spec, grid.outermost()) {
        Ok(Some(p)) => p,
        Ok(None) => {
            return UnivalenceReport {
                verdict: UnivalenceVerdict::Inconclusive {
                    reason: "pole count near the outer ring is not resolvable".into(),
                },
                pairs_tested: 0,
                winding_targets_tested: 0,
                poles_assumed_inside: 0,
                grid: grid.clone(),
            };
        }
        Err(e) => {
            return UnivalenceReport {
                verdict: UnivalenceVerdict::Inconclusive {
                    reason: format!("pole counting failed: {e}"),
                },
                pairs_tested: 0,
                winding_targets_tested: 0,
                poles_assumed_inside: 0,
                grid: grid.clone(),
            };
        }
    };
    univalence_grid_with_poles(
        |z| spec.f_at(z).map_err(|e| EvalError::Failed { z, reason: format!("{e}") }),
        grid,
        poles,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SubordinationVerdict {
    Supported,
    RefutedAt {
        r: f64,
        theta: f64,
        #[serde(with = "complex_pair")]
        value: Complex64,
    },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinationReport {
    pub verdict: SubordinationVerdict,
    pub max_winding_defect: i64,
    pub radii: Vec<f64>,
}

/// Containment form of subordination for a univalent majorant: for each
/// tested radius, every sample of `g` on `|z| = r` must lie inside the
/// closed image curve of `h` on `|z| = r` (winding 1). Samples landing on
/// the curve itself (within round-off of a polygon vertex or edge) count
/// as contained, which makes the test reflexive.
pub fn subordination_check<G, H>(
    g: G,
    h: H,
    radii: &[f64],
) -> Result<SubordinationReport, VerifyError>
where
    G: Fn(Complex64) -> Result<Complex64, EvalError>,
    H: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    if radii.is_empty() || !radii.iter().all(|r| r.is_finite() && *r > 0.0 && *r < 1.0) {
        return Err(VerifyError::BadGrid { reason: "radii must lie in (0, 1)".into() });
    }
    let zero = Complex64::new(0.0, 0.0);
    let g0 = g(zero)?;
    let h0 = h(zero)?;
    if (g0 - h0).norm() > 1e-9 {
        return Err(VerifyError::CenterMismatch { g0, h0 });
    }

    let mut max_defect = 0i64;
    for &r in radii {
        let curve = image_curve(&h, r).map_err(VerifyError::Evaluation)?;
        let scale = curve.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let on_curve_tol = 1e-9 * (1.0 + scale);
        let samples = CURVE_SAMPLES / 4;
        for i in 0..samples {
            let theta = std::f64::consts::TAU * i as f64 / samples as f64;
            let w = g(Complex64::from_polar(r, theta))?;
            if distance_to_polyline(&curve, w) <= on_curve_tol {
                continue;
            }
            match winding_number(&curve, w) {
                WindingOutcome::Count(1) => {}
                WindingOutcome::Count(k) => {
                    max_defect = max_defect.max((k - 1).abs());
                    if k == 0 {
                        return Ok(SubordinationReport {
                            verdict: SubordinationVerdict::RefutedAt { r, theta, value: w },
                            max_winding_defect: max_defect,
                            radii: radii.to_vec(),
                        });
                    }
                    return Ok(SubordinationReport {
                        verdict: SubordinationVerdict::Inconclusive {
                            reason: format!(
                                "majorant curve at r = {r} winds {k} times around {w}; \
                                 the majorant is not injective there"
                            ),
                        },
                        max_winding_defect: max_defect,
                        radii: radii.to_vec(),
                    });
                }
                WindingOutcome::TooCoarse => {
                    return Ok(SubordinationReport {
                        verdict: SubordinationVerdict::Inconclusive {
                            reason: format!("majorant curve too coarse near {w} at r = {r}"),
                        },
                        max_winding_defect: max_defect,
                        radii: radii.to_vec(),
                    });
                }
            }
        }
    }
    Ok(SubordinationReport {
        verdict: SubordinationVerdict::Supported,
        max_winding_defect: max_defect,
        radii: radii.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub max_discrepancy: f64,
    pub at_index: usize,
    pub radius: f64,
    pub order: usize,
}

/// Compares the series-pipeline coefficients of `z/f` with the Cauchy
/// integral of the quadrature-based pointwise evaluator on `|z| = r`.
/// Two fully independent routes to the same numbers; their agreement is
/// the strongest internal consistency signal the crate has.
pub fn oracle_cross_check(
    spec: &ConstructionSpec,
    r: f64,
    n: usize,
) -> Result<CrossCheckReport, VerifyError> {
    if !(r.is_finite() && r > 0.0 && r < 1.0) {
        return Err(VerifyError::RadiusTooLarge { r });
    }
    let spec_n = spec.clone().with_order(n.max(spec.order()));
    let pipeline = spec_n.zf_series();
    let oracle = coeffs_by_cauchy_dft(
        |z| spec.h_at(z).map_err(|e| EvalError::Failed { z, reason: format!("{e}") }),
        r,
        n,
        default_dft_samples(n),
    )
    .map_err(FamilyError::from)?;
    let mut max_discrepancy = 0.0f64;
    let mut at_index = 0usize;
    for k in 0..=n {
        let d = (pipeline.coeff(k) - oracle.coeff(k)).norm();
        if d > max_discrepancy {
            max_discrepancy = d;
            at_index = k;
        }
    }
    Ok(CrossCheckReport { max_discrepancy, at_index, radius: r, order: n })
}

enum WindingOutcome {
    Count(i64),
    TooCoarse,
}

/// Closed image curve of `f` on `|z| = r` with [`CURVE_SAMPLES`] vertices.
fn image_curve<F>(f: &F, r: f64) -> Result<Vec<Complex64>, EvalError>
where
    F: Fn(Complex64) -> Result<Complex64, EvalError>,
{
    let mut curve = Vec::with_capacity(CURVE_SAMPLES);
    for j in 0..CURVE_SAMPLES {
        let theta = std::f64::consts::TAU * j as f64 / CURVE_SAMPLES as f64;
        curve.push(f(Complex64::from_polar(r, theta))?);
    }
    Ok(curve)
}

/// Winding of the closed polygon around `w` by summed argument
/// increments. Refuses to answer when a single segment turns more than
/// [`SEGMENT_TURN_GUARD`] radians around `w` or passes through it.
fn winding_number(curve: &[Complex64], w: Complex64) -> WindingOutcome {
    let mut total = 0.0f64;
    let n = curve.len();
    for j in 0..n {
        let a = curve[j] - w;
        let b = curve[(j + 1) % n] - w;
        if a.norm() == 0.0 || b.norm() == 0.0 {
            return WindingOutcome::TooCoarse;
        }
        let turn = (b / a).arg();
        if turn.abs() >= SEGMENT_TURN_GUARD {
            return WindingOutcome::TooCoarse;
        }
        total += turn;
    }
    let raw = total / std::f64::consts::TAU;
    let rounded = raw.round();
    if (raw - rounded).abs() > 0.5 {
        return WindingOutcome::TooCoarse;
    }
    WindingOutcome::Count(rounded as i64)
}

/// Distance from `w` to the closed polygon through the given vertices.
fn distance_to_polyline(curve: &[Complex64], w: Complex64) -> f64 {
    let n = curve.len();
    let mut best = f64::INFINITY;
    for j in 0..n {
        let a = curve[j];
        let b = curve[(j + 1) % n];
        best = best.min(distance_to_segment(a, b, w));
    }
    best
}

fn distance_to_segment(a: Complex64, b: Complex64, w: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let t = ((w - a).re * ab.re + (w - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (w - (a + ab * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{koebe_at, koebe_spec, moebius_spec};
    use crate::family::{critical_point_witness, extremal_fk_spec};
    use crate::schwarz::SchwarzSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn small_grid(radii: Vec<f64>) -> SamplingGrid {
        SamplingGrid::new(radii, 64, 7).unwrap()
    }

    #[test]
    fn grid_validates_and_is_deterministic() {
        assert!(SamplingGrid::new(vec![0.9, 0.5], 64, 0).is_err());
        assert!(SamplingGrid::new(vec![0.5, 1.0], 64, 0).is_err());
        assert!(SamplingGrid::new(vec![0.5], 32, 0).is_err());
        let g = SamplingGrid::default_grid(11);
        assert_eq!(g.points(), g.points());
        assert_eq!(g.points().len(), 4 * 2 * 512);
        // Regular lattice hits exact angles.
        let ring = g.ring_points(0);
        assert_eq!(ring[0], Complex64::from_polar(0.5, 0.0));
        // Different seed moves only the jittered half.
        let g2 = SamplingGrid::new(vec![0.5, 0.9, 0.99, 0.999], 512, 12).unwrap();
        assert_eq!(g.ring_points(0)[..512], g2.ring_points(0)[..512]);
        assert_ne!(g.ring_points(0)[512..], g2.ring_points(0)[512..]);
    }

    #[test]
    fn membership_identity_is_supported() {
        let params = ClassParams::new_real(0.5, 1.0).unwrap();
        let grid = small_grid(vec![0.5, 0.9]);
        let f = PowerSeries::variable(8);
        let rep = membership(&f, &params, &grid).unwrap();
        assert_eq!(rep.verdict, Verdict::MemberSupported);
        assert_eq!(rep.sup_estimate, 0.0);
        assert!((rep.margin - 0.5).abs() < 1e-15);
    }

    #[test]
    fn membership_koebe_profile() {
        // U = 1 - z^2: sup over ring r of |U - 1| is r^2.
        let spec = koebe_spec(16);
        let params = ClassParams::new_real(1.0, 1.0).unwrap();
        let grid = small_grid(vec![0.5, 0.9, 0.99]);
        let rep = membership_of_spec(&spec, &params, &grid);
        assert!((rep.sup_estimate - 0.99f64.powi(2)).abs() < 1e-9);
        assert_eq!(rep.verdict, Verdict::MemberSupported);

        // Same profile fails lambda = 0.5 with a concrete witness.
        let tight = ClassParams::new_real(0.5, 1.0).unwrap();
        let rep2 = membership_of_spec(&spec, &tight, &grid);
        match rep2.verdict {
            Verdict::RefutedAt { z, value } => {
                assert!((value - spec.u_at(z).unwrap()).norm() < 1e-12);
                assert!((value - tight.mu()).norm() >= 0.5);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn membership_sup_grows_with_outer_radius() {
        let spec = koebe_spec(16);
        let params = ClassParams::new_real(1.0, 1.0).unwrap();
        let mut last = 0.0;
        for radii in [vec![0.5], vec![0.5, 0.9], vec![0.5, 0.9, 0.99]] {
            let rep = membership_of_spec(&spec, &params, &small_grid(radii));
            assert!(rep.sup_estimate >= last);
            last = rep.sup_estimate;
        }
    }

    #[test]
    fn local_univalence_examples() {
        let grid = small_grid(vec![0.5, 0.99]);
        let rep = local_univalence_of_series(&PowerSeries::variable(8), &grid);
        assert_eq!(rep.min_abs_derivative, 1.0);
        assert_eq!(rep.verdict, Verdict::MemberSupported);

        // f = z/(1+0.5z): |f'| = 1/|1+0.5z|^2, minimal at z = 0.99.
        let spec = moebius_spec(c(0.5, 0.0), 16).unwrap();
        let rep2 = local_univalence_of_spec(&spec, &grid);
        let expected = 1.0 / (1.0 + 0.5 * 0.99f64).powi(2);
        assert!((rep2.min_abs_derivative - expected).abs() < 1e-9);

        // The omega = 1 witness drops |f'| to round-off level when the
        // grid passes through the critical point.
        let params = ClassParams::new_real(0.9, 0.5).unwrap();
        let w = critical_point_witness(&params).unwrap();
        let wspec = crate::family::ConstructionSpec::new(
            params,
            c(0.0, 0.0),
            SchwarzSpec::constant(c(1.0, 0.0)).unwrap(),
            16,
        )
        .unwrap();
        let wgrid = SamplingGrid::new(vec![0.5, w.z1.norm()], 64, 3).unwrap();
        let rep3 = local_univalence_of_spec(&wspec, &wgrid);
        assert!(rep3.min_abs_derivative <= 1e-8, "min = {}", rep3.min_abs_derivative);
        assert!(matches!(rep3.verdict, Verdict::RefutedAt { .. }));
    }

    #[test]
    fn univalence_identity_and_koebe_consistent() {
        let grid = small_grid(vec![0.5, 0.9]);
        let rep = univalence_grid(Ok, &grid);
        assert_eq!(rep.verdict, UnivalenceVerdict::ConsistentWithUnivalence);

        let rep2 = univalence_grid(|z| Ok(koebe_at(z)), &small_grid(vec![0.5, 0.99]));
        assert_eq!(rep2.verdict, UnivalenceVerdict::ConsistentWithUnivalence);
    }

    #[test]
    fn univalence_catches_quadratic_collision() {
        // f = z + 2z^2 identifies z1 + z2 = -1/2; ring 0.5 with 384 angles
        // contains the symmetric pair at angle ±2π/3 exactly.
        let f = |z: Complex64| Ok(z + 2.0 * z * z);
        let grid = SamplingGrid::new(vec![0.35, 0.5], 384, 5).unwrap();
        let rep = univalence_grid(f, &grid);
        match rep.verdict {
            UnivalenceVerdict::RefutedAt { z1, z2, .. } => {
                let s = z1 + z2;
                assert!((s - c(-0.5, 0.0)).norm() < 1e-9, "pair sums to {s}");
            }
            other => panic!("expected a collision, got {other:?}"),
        }
    }

    #[test]
    fn univalence_winding_spots_double_cover() {
        // z^2 on a ring: every target is hit twice; no grid collision
        // survives the min-separation filter at conjugate pairs? It does:
        // z and -z are far apart with equal images.
        let rep = univalence_grid(|z| Ok(z * z), &small_grid(vec![0.3, 0.6]));
        assert!(
            matches!(rep.verdict, UnivalenceVerdict::RefutedAt { .. }),
            "got {:?}",
            rep.verdict
        );
    }

    #[test]
    fn univalence_of_spec_handles_pole_inside() {
        // f = z/(1+0.9z) has a pole at -1/0.9 outside the disk; with
        // c = 1.25 the pole 1/1.25 = 0.8 sits inside the outer ring.
        let spec = moebius_spec(c(1.25, 0.0), 16).unwrap();
        let grid = small_grid(vec![0.5, 0.9]);
        let rep = univalence_of_spec(&spec, &grid);
        assert_eq!(rep.poles_assumed_inside, 1);
        assert_eq!(rep.verdict, UnivalenceVerdict::ConsistentWithUnivalence);

        let nopole = moebius_spec(c(0.9, 0.0), 16).unwrap();
        let rep2 = univalence_of_spec(&nopole, &grid);
        assert_eq!(rep2.poles_assumed_inside, 0);
        assert_eq!(rep2.verdict, UnivalenceVerdict::ConsistentWithUnivalence);
    }

    #[test]
    fn subordination_reflexive_and_schwarz_factor() {
        let spec = koebe_spec(16);
        let h = |z: Complex64| {
            spec.h_at(z).map_err(|e| EvalError::Failed { z, reason: format!("{e}") })
        };
        let rep = subordination_check(h, h, &[0.3, 0.6, 0.9]).unwrap();
        assert_eq!(rep.verdict, SubordinationVerdict::Supported);
        assert_eq!(rep.max_winding_defect, 0);

        // g(z) = h(z^2): explicit Schwarz factor.
        let g = |z: Complex64| h(z * z);
        let rep2 = subordination_check(g, h, &[0.3, 0.6, 0.9]).unwrap();
        assert_eq!(rep2.verdict, SubordinationVerdict::Supported);
    }

    #[test]
    fn subordination_refutes_scaling() {
        // g = 2h - h(0) leaves the image of h near the boundary of each disk image.
        let h = |z: Complex64| Ok(z);
        let g = |z: Complex64| Ok(2.0 * z);
        let rep = subordination_check(g, h, &[0.5]).unwrap();
        assert!(matches!(rep.verdict, SubordinationVerdict::RefutedAt { .. }));
    }

    #[test]
    fn subordination_rejects_center_mismatch() {
        let h = |z: Complex64| Ok(z);
        let g = |z: Complex64| Ok(z + 0.1);
        assert!(matches!(
            subordination_check(g, h, &[0.5]),
            Err(VerifyError::CenterMismatch { .. })
        ));
    }

    // Contour data on |z| = r resolves coefficient k only to about
    // eps/r^k, so the comparison depth below is matched to the radius:
    // r = 0.5 supports k ≤ 24 at the 1e-8 level, r = 0.6 supports k ≤ 28.

    #[test]
    fn cross_check_trivial_and_extremal() {
        let spec = moebius_spec(c(0.5, 0.0), 32).unwrap();
        let rep = oracle_cross_check(&spec, 0.5, 8).unwrap();
        assert!(rep.max_discrepancy <= 1e-12, "moebius {}", rep.max_discrepancy);

        let params = ClassParams::new_real(0.6, 0.8).unwrap();
        let fk = extremal_fk_spec(4, &params, c(0.0, 0.0), 32).unwrap();
        let rep2 = oracle_cross_check(&fk, 0.6, 24).unwrap();
        assert!(rep2.max_discrepancy <= 1e-8, "f4 {}", rep2.max_discrepancy);

        assert!(matches!(
            oracle_cross_check(&spec, 1.2, 8),
            Err(VerifyError::RadiusTooLarge { .. })
        ));
    }

    #[test]
    fn cross_check_random_spec() {
        let params = ClassParams::new(0.8, c(0.7, 0.15)).unwrap();
        let omega = SchwarzSpec::blaschke(vec![c(0.3, -0.1), c(-0.2, 0.2)], c(1.0, 0.0)).unwrap();
        let spec = crate::family::ConstructionSpec::new(params, c(1.0, -0.5), omega, 40).unwrap();
        let rep = oracle_cross_check(&spec, 0.5, 24).unwrap();
        assert!(rep.max_discrepancy <= 1e-8, "random {}", rep.max_discrepancy);
    }

    #[test]
    fn winding_machinery_basics() {
        let circle: Vec<Complex64> = (0..256)
            .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 256.0))
            .collect();
        match winding_number(&circle, c(0.0, 0.0)) {
            WindingOutcome::Count(1) => {}
            _ => panic!("unit circle should wind once around 0"),
        }
        match winding_number(&circle, c(2.0, 0.0)) {
            WindingOutcome::Count(0) => {}
            _ => panic!("outside point should wind zero times"),
        }
        // Distance to the polygon from the center is about 1.
        let d = distance_to_polyline(&circle, c(0.0, 0.0));
        assert!((d - 1.0).abs() < 1e-3);
        assert!(distance_to_polyline(&circle, circle[3]) == 0.0);
    }

    #[test]
    fn report_serde_shapes() {
        let v = Verdict::RefutedAt { z: c(0.1, 0.2), value: c(0.3, -0.4) };
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"kind":"refuted-at","z":[0.1,0.2],"value":[0.3,-0.4]}"#);
        let grid = SamplingGrid::new(vec![0.5], 64, 1).unwrap();
        let rep = MembershipReport {
            sup_estimate: 0.1,
            margin: 0.4,
            verdict: Verdict::MemberSupported,
            grid,
        };
        let back: MembershipReport =
            serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
        assert_eq!(back, rep);
    }
}
