//! Numerical attack on the open questions: a derivative-free maximizer
//! for the boundary modulus functional, parameter sweeps across the
//! region map, and batch subordination scans against the slit extremal.
//!
//! Everything here produces evidence and lower bounds, never proofs:
//! the searches range over finite-dimensional slices of the unit ball
//! of analytic functions, and every refutation ships a witness.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{
    a2_bound, bk_bound, classify, critical_point_witness, extremal_f0_spec, l2_bound, ClassParams,
    ConstructionSpec, FamilyError, RegionVerdict,
};
use crate::schwarz::{Kind, SchwarzSpec};
use crate::series::complex_pair;
use crate::verify::{
    local_univalence_of_spec, pole_count, subordination_check, univalence_grid,
    univalence_of_spec, SamplingGrid, SubordinationVerdict, UnivalenceVerdict, Verdict,
    VerifyError, DERIVATIVE_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExploreError {
    #[error("invalid optimizer configuration: {reason}")]
    BadConfig { reason: String },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Multistart simplex-search settings. The `family` field is a template:
/// its numeric entries (constant values, Blaschke zeros, mix weights) are
/// the free coordinates of the search; its structure is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OptimizeConfigRepr", into = "OptimizeConfigRepr")]
pub struct OptimizeConfig {
    family: SchwarzSpec,
    starts: usize,
    max_iters: usize,
    tolerance: f64,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptimizeConfigRepr {
    family: SchwarzSpec,
    starts: usize,
    max_iters: usize,
    tolerance: f64,
    seed: u64,
}

impl From<OptimizeConfig> for OptimizeConfigRepr {
    fn from(c: OptimizeConfig) -> Self {
        OptimizeConfigRepr {
            family: c.family,
            starts: c.starts,
            max_iters: c.max_iters,
            tolerance: c.tolerance,
            seed: c.seed,
        }
    }
}

impl TryFrom<OptimizeConfigRepr> for OptimizeConfig {
    type Error = ExploreError;
    fn try_from(r: OptimizeConfigRepr) -> Result<Self, ExploreError> {
        OptimizeConfig::new(r.family, r.starts, r.max_iters, r.tolerance, r.seed)
    }
}

impl OptimizeConfig {
    pub fn new(
        family: SchwarzSpec,
        starts: usize,
        max_iters: usize,
        tolerance: f64,
        seed: u64,
    ) -> Result<Self, ExploreError> {
        if starts < 1 {
            return Err(ExploreError::BadConfig { reason: "starts must be at least 1".into() });
        }
        if max_iters < 1 {
            return Err(ExploreError::BadConfig { reason: "max_iters must be at least 1".into() });
        }
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(ExploreError::BadConfig {
                reason: format!("tolerance must be a positive real, got {tolerance}"),
            });
        }
        Ok(OptimizeConfig { family, starts, max_iters, tolerance, seed })
    }

    /// Sensible search budget for a given template.
    pub fn default_for(family: SchwarzSpec) -> Self {
        OptimizeConfig { family, starts: 8, max_iters: 250, tolerance: 1e-9, seed: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn family(&self) -> &SchwarzSpec {
        &self.family
    }

    pub fn starts(&self) -> usize {
        self.starts
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxReport {
    pub best_value: f64,
    pub argmax_omega: SchwarzSpec,
    #[serde(with = "complex_pair")]
    pub argmax_z: Complex64,
    /// Best value found by each start, in start order.
    pub history: Vec<f64>,
    pub best_start: usize,
}

/// `|1 − λz ∫₀ᶻ G_ω|` on `|z| = p`: the modulus whose maximum over the
/// unit ball and the circle gives the sharp `|a₂|·p` value.
pub fn h_modulus_objective(
    params: &ClassParams,
    p: f64,
    omega: &SchwarzSpec,
    z: Complex64,
) -> Result<f64, ExploreError> {
    check_p(p)?;
    if (z.norm() - p).abs() > 1e-9 * p.max(1.0) {
        return Err(ExploreError::BadConfig {
            reason: format!("|z| = {} but the circle radius is {p}", z.norm()),
        });
    }
    let spec = ConstructionSpec::new(*params, Complex64::new(0.0, 0.0), omega.clone(), 8)?;
    Ok(spec.h_at(z)?.norm())
}

/// Multistart Nelder-Mead maximization of [`h_modulus_objective`] over the
/// template family and the angle of `z = p·e^{iθ}` jointly. Returns a
/// certified-by-reevaluation lower bound on the true maximum.
pub fn maximize_h_modulus(
    params: &ClassParams,
    p: f64,
    config: &OptimizeConfig,
) -> Result<MaxReport, ExploreError> {
    check_p(p)?;
    let template = Template::new(&config.family);
    let dim = template.cube_dim() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let offsets: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    let alphas = rd_alphas(dim);

    let evaluate = |x: &[f64]| -> f64 {
        let omega = template.rebuild(&x[..x.len() - 1]);
        let theta = x[x.len() - 1];
        let z = Complex64::from_polar(p, theta);
        let spec = ConstructionSpec::new(*params, Complex64::new(0.0, 0.0), omega, 8)
            .expect("rebuilt omega is valid");
        match spec.h_at(z) {
            Ok(h) => -h.norm(),
            Err(_) => f64::INFINITY,
        }
    };

    let outcomes: Vec<(Vec<f64>, f64)> = (0..config.starts)
        .into_par_iter()
        .map(|s| {
            let u = rd_point(&offsets, &alphas, s as u64);
            let x0 = template.coords_from_cube(&u);
            nelder_mead(&evaluate, x0, 0.3, config.max_iters, config.tolerance)
        })
        .collect();

    let history: Vec<f64> = outcomes.iter().map(|(_, v)| -v).collect();
    let mut best_start = 0;
    for (s, value) in history.iter().enumerate() {
        if *value > history[best_start] {
            best_start = s;
        }
    }
    let best_x = &outcomes[best_start].0;
    let argmax_omega = template.rebuild(&best_x[..best_x.len() - 1]);
    let argmax_z = Complex64::from_polar(p, best_x[best_x.len() - 1]);
    let best_value = h_modulus_objective(params, p, &argmax_omega, argmax_z)?;
    Ok(MaxReport { best_value, argmax_omega, argmax_z, history, best_start })
}

fn check_p(p: f64) -> Result<(), ExploreError> {
    if !(p.is_finite() && p > 0.0 && p <= 1.0) {
        return Err(ExploreError::BadConfig { reason: format!("p must lie in (0, 1], got {p}") });
    }
    Ok(())
}

// --- search-space plumbing -------------------------------------------------

/// Coordinate layout of a template: disks contribute (re, im) pairs, unit
/// factors an angle, convex weights a bare nonnegative number.
enum Slot {
    Disk { radius: f64 },
    Angle,
    Weight,
}

struct Template {
    spec: SchwarzSpec,
    slots: Vec<Slot>,
}

impl Template {
    fn new(spec: &SchwarzSpec) -> Self {
        let mut slots = Vec::new();
        collect_slots(spec, &mut slots);
        Template { spec: spec.clone(), slots }
    }

    /// Raw coordinate dimension (a disk slot is two coordinates).
    fn coord_dim(&self) -> usize {
        self.slots
            .iter()
            .map(|s| match s {
                Slot::Disk { .. } => 2,
                Slot::Angle | Slot::Weight => 1,
            })
            .sum()
    }

    /// Unit-cube dimension used by the low-discrepancy initializer.
    fn cube_dim(&self) -> usize {
        self.coord_dim()
    }

    /// Maps a point of `[0,1)^{dim+1}` to raw coordinates plus the angle
    /// of `z` (last coordinate).
    fn coords_from_cube(&self, u: &[f64]) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.coord_dim() + 1);
        let mut i = 0;
        for slot in &self.slots {
            match slot {
                Slot::Disk { radius } => {
                    let w = Complex64::from_polar(
                        0.98 * radius * u[i].sqrt(),
                        std::f64::consts::TAU * u[i + 1],
                    );
                    x.push(w.re);
                    x.push(w.im);
                    i += 2;
                }
                Slot::Angle => {
                    x.push(std::f64::consts::TAU * u[i]);
                    i += 1;
                }
                Slot::Weight => {
                    x.push(0.05 + 0.9 * u[i]);
                    i += 1;
                }
            }
        }
        x.push(std::f64::consts::TAU * u[u.len() - 1]);
        x
    }

    /// Projects raw coordinates back into the admissible set and rebuilds
    /// a valid spec from them.
    fn rebuild(&self, x: &[f64]) -> SchwarzSpec {
        let mut pos = 0;
        rebuild_spec(&self.spec, x, &mut pos)
    }
}

fn collect_slots(spec: &SchwarzSpec, slots: &mut Vec<Slot>) {
    match spec.kind() {
        Kind::Constant { .. } | Kind::Monomial { .. } => slots.push(Slot::Disk { radius: 1.0 }),
        Kind::Blaschke { zeros, .. } => {
            for _ in zeros {
                slots.push(Slot::Disk { radius: 1.0 - 1e-6 });
            }
            slots.push(Slot::Angle);
        }
        Kind::Mix { parts, .. } => {
            for _ in parts {
                slots.push(Slot::Weight);
            }
            for part in parts {
                collect_slots(part, slots);
            }
        }
    }
}

fn rebuild_spec(spec: &SchwarzSpec, x: &[f64], pos: &mut usize) -> SchwarzSpec {
    match spec.kind() {
        Kind::Constant { .. } => {
            let u = clamp_disk(take_pair(x, pos), 1.0);
            SchwarzSpec::constant(u).expect("clamped into the ball")
        }
        Kind::Monomial { m, .. } => {
            let u = clamp_disk(take_pair(x, pos), 1.0);
            SchwarzSpec::monomial(u, *m).expect("clamped into the ball")
        }
        Kind::Blaschke { zeros, .. } => {
            let new_zeros: Vec<Complex64> =
                (0..zeros.len()).map(|_| clamp_disk(take_pair(x, pos), 1.0 - 1e-6)).collect();
            let phi = take_one(x, pos);
            SchwarzSpec::blaschke(new_zeros, Complex64::from_polar(1.0, phi))
                .expect("zeros clamped inside the disk")
        }
        Kind::Mix { parts, .. } => {
            let raw: Vec<f64> = (0..parts.len()).map(|_| take_one(x, pos).abs() + 1e-12).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let new_parts: Vec<SchwarzSpec> =
                parts.iter().map(|part| rebuild_spec(part, x, pos)).collect();
            SchwarzSpec::mix(weights, new_parts).expect("weights normalized")
        }
    }
}

fn take_pair(x: &[f64], pos: &mut usize) -> Complex64 {
    let v = Complex64::new(x[*pos], x[*pos + 1]);
    *pos += 2;
    v
}

fn take_one(x: &[f64], pos: &mut usize) -> f64 {
    let v = x[*pos];
    *pos += 1;
    v
}

fn clamp_disk(w: Complex64, radius: f64) -> Complex64 {
    let n = w.norm();
    if n.is_finite() && n <= radius {
        w
    } else if n.is_finite() && n > 0.0 {
        w * (radius / n)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Additive-recurrence low-discrepancy sequence: the generalized
/// golden-ratio constants give well-spread multistart seeds in any
/// dimension.
fn rd_alphas(dim: usize) -> Vec<f64> {
    let mut phi = 1.5f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
    }
    let mut alphas = Vec::with_capacity(dim);
    let mut a = 1.0;
    for _ in 0..dim {
        a /= phi;
        alphas.push(a);
    }
    alphas
}

fn rd_point(offsets: &[f64], alphas: &[f64], n: u64) -> Vec<f64> {
    offsets
        .iter()
        .zip(alphas)
        .map(|(o, a)| (o + n as f64 * a).fract())
        .collect()
}

/// Standard Nelder-Mead (reflect 1, expand 2, contract 1/2, shrink 1/2)
/// minimizing `f`; returns the best vertex and its value.
fn nelder_mead<F>(
    f: &F,
    x0: Vec<f64>,
    step: f64,
    max_iters: usize,
    tolerance: f64,
) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = f(&x0);
    simplex.push((x0.clone(), v0));
    for i in 0..dim {
        let mut xi = x0.clone();
        xi[i] += step;
        let vi = f(&xi);
        simplex.push((xi, vi));
    }

    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        if (worst - best).abs() <= tolerance * (1.0 + best.abs()) {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let worst_x = simplex[dim].0.clone();
        let reflect: Vec<f64> =
            centroid.iter().zip(&worst_x).map(|(c, w)| c + (c - w)).collect();
        let fr = f(&reflect);

        if fr < simplex[0].1 {
            let expand: Vec<f64> =
                centroid.iter().zip(&worst_x).map(|(c, w)| c + 2.0 * (c - w)).collect();
            let fe = f(&expand);
            simplex[dim] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflect, fr);
        } else {
            let (towards, ft) =
                if fr < simplex[dim].1 { (reflect.clone(), fr) } else { (worst_x.clone(), simplex[dim].1) };
            let contract: Vec<f64> =
                centroid.iter().zip(&towards).map(|(c, t)| c + 0.5 * (t - c)).collect();
            let fc = f(&contract);
            if fc < ft {
                simplex[dim] = (contract, fc);
            } else {
                let best_x = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> =
                        best_x.iter().zip(&entry.0).map(|(b, e)| b + 0.5 * (e - b)).collect();
                    let fs = f(&shrunk);
                    *entry = (shrunk, fs);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

// --- random members ---------------------------------------------------------

/// Uniform draw from the closed disk of the given radius.
fn disk_sample(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = std::f64::consts::TAU * rng.gen::<f64>();
    Complex64::from_polar(r, t)
}

/// Random valid class parameters: λ uniform in [0.1, 1], the ratio
/// (1−μ)/λ uniform in the disk of radius 0.9. The λ floor and ratio cap
/// keep the defining inequality's margin resolvable on rings up to 0.999.
pub fn sample_params(rng: &mut ChaCha8Rng) -> ClassParams {
    let lambda = 0.1 + 0.9 * rng.gen::<f64>();
    let a = disk_sample(rng, 0.9);
    let mu = Complex64::new(1.0, 0.0) - lambda * a;
    ClassParams::new(lambda, mu).expect("sampled parameters are admissible")
}

/// Random factor spec: uniform over the variant kinds with parameters
/// uniform in their admissible ranges.
fn sample_omega(rng: &mut ChaCha8Rng) -> SchwarzSpec {
    match rng.gen_range(0..4u8) {
        0 => SchwarzSpec::constant(disk_sample(rng, 1.0)).expect("in the ball"),
        1 => {
            let u = disk_sample(rng, 1.0);
            let m = rng.gen_range(0..=6usize);
            SchwarzSpec::monomial(u, m).expect("in the ball")
        }
        2 => {
            let count = rng.gen_range(1..=2usize);
            let zeros: Vec<Complex64> = (0..count).map(|_| disk_sample(rng, 0.7)).collect();
            let phi = std::f64::consts::TAU * rng.gen::<f64>();
            SchwarzSpec::blaschke(zeros, Complex64::from_polar(1.0, phi)).expect("zeros inside")
        }
        _ => {
            let w = 0.1 + 0.8 * rng.gen::<f64>();
            let parts = vec![
                SchwarzSpec::constant(disk_sample(rng, 1.0)).expect("in the ball"),
                SchwarzSpec::monomial(disk_sample(rng, 1.0), rng.gen_range(1..=4usize))
                    .expect("in the ball"),
            ];
            SchwarzSpec::mix(vec![w, 1.0 - w], parts).expect("convex weights")
        }
    }
}

/// Random member of the family at fixed parameters: random factor spec
/// and `|c| ≤ 3` (covers the extremal second-coefficient range).
pub fn sample_member(
    params: &ClassParams,
    rng: &mut ChaCha8Rng,
    order: usize,
) -> ConstructionSpec {
    let omega = sample_omega(rng);
    let c = disk_sample(rng, 3.0);
    ConstructionSpec::new(*params, c, omega, order).expect("sampled member is valid")
}

/// Random member with random parameters; the seeded generator drives
/// both draws, so a fixed seed reproduces the whole spec.
pub fn sample_spec(rng: &mut ChaCha8Rng, order: usize) -> ConstructionSpec {
    let params = sample_params(rng);
    sample_member(&params, rng, order)
}

// --- parameter sweep ---------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMetric {
    /// Bounds, region verdicts, optimizer lower bound, and the
    /// Monte-Carlo univalence scan.
    All,
    /// Region verdicts and closed-form bounds only.
    Bounds,
    /// Region verdicts and the Monte-Carlo univalence scan only.
    Univalence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Disk radius for the second-coefficient bound and the maximizer.
    pub p: f64,
    pub metric: SweepMetric,
    /// Random members probed per row (the ω ≡ 1 witness probe is extra).
    pub mc_samples: usize,
    pub order: usize,
    pub grid: SamplingGrid,
    pub optimizer_starts: usize,
    pub optimizer_iters: usize,
    pub seed: u64,
}

impl SweepOptions {
    pub fn new(seed: u64) -> Self {
        SweepOptions {
            p: 0.5,
            metric: SweepMetric::All,
            mc_samples: 4,
            order: 48,
            grid: SamplingGrid::new(vec![0.35, 0.7], 64, seed).expect("valid grid"),
            optimizer_starts: 4,
            optimizer_iters: 120,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    #[serde(with = "complex_pair")]
    pub mu: Complex64,
    pub verdict: Option<RegionVerdict>,
    pub b2_bound: Option<f64>,
    pub l2_bound: Option<f64>,
    /// Second-coefficient bound at the configured radius; absent when the
    /// parameter ratio is not real-in-range.
    pub a2_bound: Option<f64>,
    pub h_max_lower_bound: Option<f64>,
    pub mc_tested: usize,
    pub mc_local_refuted: usize,
    pub mc_collision_refuted: usize,
    pub mc_inconclusive: usize,
    pub error: Option<String>,
}

/// One row per parameter point; rows are computed in parallel and
/// assembled in input order, and every per-row random stream is seeded
/// by (seed, row index), so the table is reproducible bit for bit.
pub fn sweep(param_grid: &[ClassParams], options: &SweepOptions) -> Vec<SweepRow> {
    param_grid
        .par_iter()
        .enumerate()
        .map(|(index, params)| sweep_row(index, params, options))
        .collect()
}

fn sweep_row(index: usize, params: &ClassParams, options: &SweepOptions) -> SweepRow {
    let mut row = SweepRow {
        lambda: params.lambda(),
        mu: params.mu(),
        verdict: None,
        b2_bound: None,
        l2_bound: None,
        a2_bound: None,
        h_max_lower_bound: None,
        mc_tested: 0,
        mc_local_refuted: 0,
        mc_collision_refuted: 0,
        mc_inconclusive: 0,
        error: None,
    };
    let mut errors: Vec<String> = Vec::new();

    match classify(params) {
        Ok(v) => row.verdict = Some(v),
        Err(e) => errors.push(format!("classify: {e}")),
    }

    if options.metric != SweepMetric::Univalence {
        row.b2_bound = Some(bk_bound(2, params));
        row.l2_bound = Some(l2_bound(params));
        row.a2_bound = a2_bound(params, options.p).ok();
        let family = SchwarzSpec::constant(Complex64::new(-0.5, 0.0)).expect("template");
        match OptimizeConfig::new(
            family,
            options.optimizer_starts.max(1),
            options.optimizer_iters.max(1),
            1e-9,
            options.seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
        )
        .and_then(|config| maximize_h_modulus(params, options.p, &config))
        {
            Ok(rep) => row.h_max_lower_bound = Some(rep.best_value),
            Err(e) => errors.push(format!("maximizer: {e}")),
        }
    }

    if options.metric != SweepMetric::Bounds {
        let mut rng = ChaCha8Rng::seed_from_u64(
            options.seed ^ (index as u64).wrapping_mul(0x51ab_f00d_2bad_cafe).wrapping_add(1),
        );
        // Deterministic first probe: the constant factor 1 produces the
        // zero-derivative witness whenever one exists.
        match probe_unit_constant(params, options) {
            Ok((local, collision, inconclusive)) => {
                row.mc_tested += 1;
                row.mc_local_refuted += local;
                row.mc_collision_refuted += collision;
                row.mc_inconclusive += inconclusive;
            }
            Err(e) => errors.push(format!("unit-constant probe: {e}")),
        }
        for _ in 0..options.mc_samples {
            let spec = sample_member(params, &mut rng, options.order);
            row.mc_tested += 1;
            let local = local_univalence_of_spec(&spec, &options.grid);
            if matches!(local.verdict, Verdict::RefutedAt { .. }) {
                row.mc_local_refuted += 1;
            }
            match univalence_of_spec(&spec, &options.grid).verdict {
                UnivalenceVerdict::RefutedAt { .. } => row.mc_collision_refuted += 1,
                UnivalenceVerdict::Inconclusive { .. } => row.mc_inconclusive += 1,
                UnivalenceVerdict::ConsistentWithUnivalence => {}
            }
        }
    }

    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row
}

/// Probes the member with factor ≡ 1: if the parameters admit a critical
/// point, its derivative vanishes there, which the probe checks directly
/// at the witness instead of hoping a grid ring passes through it.
fn probe_unit_constant(
    params: &ClassParams,
    options: &SweepOptions,
) -> Result<(usize, usize, usize), ExploreError> {
    let omega = SchwarzSpec::constant(Complex64::new(1.0, 0.0)).expect("unit constant");
    let spec = ConstructionSpec::new(*params, Complex64::new(0.0, 0.0), omega, options.order)?;
    let mut local = 0;
    match critical_point_witness(params) {
        Ok(w) => {
            let fp = spec.f_prime_at(w.z1)?;
            if fp.norm() < DERIVATIVE_TOL {
                local = 1;
            }
        }
        Err(FamilyError::NoWitness { .. }) => {
            let rep = local_univalence_of_spec(&spec, &options.grid);
            if matches!(rep.verdict, Verdict::RefutedAt { .. }) {
                local = 1;
            }
        }
        Err(e) => return Err(e.into()),
    }
    let (mut collision, mut inconclusive) = (0, 0);
    match univalence_of_spec(&spec, &options.grid).verdict {
        UnivalenceVerdict::RefutedAt { .. } => collision = 1,
        UnivalenceVerdict::Inconclusive { .. } => inconclusive = 1,
        UnivalenceVerdict::ConsistentWithUnivalence => {}
    }
    Ok((local, collision, inconclusive))
}

// --- subordination scan -------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinationScanRow {
    pub lambda: f64,
    #[serde(with = "complex_pair")]
    pub mu: Complex64,
    /// The real ratio the scan ran with; absent when the row was rejected.
    pub a: Option<f64>,
    pub tested: usize,
    pub supported: usize,
    pub refuted: usize,
    pub inconclusive: usize,
    /// Samples whose function had a pole strictly inside the disk; the
    /// conjecture is about analytic members, so these are not evidence.
    pub skipped_nonanalytic: usize,
    pub first_refutation: Option<SubordinationVerdict>,
    pub error: Option<String>,
}

/// Batch evidence scan: does `z/f` stay subordinate to `z/f₀` (the slit
/// extremal with boundary pole) for sampled analytic members? Rows with
/// ratio a outside (0, 1) are rejected: a = 0 (μ = 1) is the already
/// settled case, and the conjecture is posed for real positive ratios.
pub fn subordination_scan(
    param_grid: &[ClassParams],
    samples_per_row: usize,
    radii: &[f64],
    seed: u64,
) -> Vec<SubordinationScanRow> {
    param_grid
        .par_iter()
        .enumerate()
        .map(|(index, params)| scan_row(index, params, samples_per_row, radii, seed))
        .collect()
}

fn scan_row(
    index: usize,
    params: &ClassParams,
    samples_per_row: usize,
    radii: &[f64],
    seed: u64,
) -> SubordinationScanRow {
    let mut row = SubordinationScanRow {
        lambda: params.lambda(),
        mu: params.mu(),
        a: None,
        tested: 0,
        supported: 0,
        refuted: 0,
        inconclusive: 0,
        skipped_nonanalytic: 0,
        first_refutation: None,
        error: None,
    };

    let a = match params.real_a() {
        Some(a) if a > 0.0 && a < 1.0 => a,
        Some(0.0) => {
            row.error = Some(
                "the ratio a = (1-mu)/lambda is 0 (mu = 1): that case is already solved; \
                 the scan covers real a in (0, 1) only"
                    .into(),
            );
            return row;
        }
        _ => {
            row.error =
                Some("the scan requires a real ratio a = (1-mu)/lambda in (0, 1)".into());
            return row;
        }
    };
    row.a = Some(a);

    let f0 = match extremal_f0_spec(params, 1.0, 32) {
        Ok(spec) => spec,
        Err(e) => {
            row.error = Some(format!("majorant construction: {e}"));
            return row;
        }
    };
    let h0 = |z: Complex64| {
        f0.h_at(z).map_err(|e| crate::series::EvalError::Failed { z, reason: format!("{e}") })
    };

    // The containment test presumes the majorant is injective on each
    // tested circle; probe that once per row.
    let mut grid_radii: Vec<f64> = radii.to_vec();
    grid_radii.sort_by(f64::total_cmp);
    grid_radii.dedup();
    match SamplingGrid::new(grid_radii, 64, seed) {
        Ok(grid) => {
            if !matches!(
                univalence_grid(h0, &grid).verdict,
                UnivalenceVerdict::ConsistentWithUnivalence
            ) {
                row.error = Some("majorant failed its univalence probe".into());
                return row;
            }
        }
        Err(e) => {
            row.error = Some(format!("bad radii: {e}"));
            return row;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(
        seed ^ (index as u64).wrapping_mul(0xd1b5_4a32_d192_ed03).wrapping_add(2),
    );
    let mut samples: Vec<ConstructionSpec> = Vec::with_capacity(samples_per_row);
    samples.push(f0.clone());
    if samples_per_row > 1 {
        let moebius = SchwarzSpec::constant(Complex64::new(0.0, 0.0)).expect("zero constant");
        if let Ok(spec) =
            ConstructionSpec::new(*params, Complex64::new(0.3, 0.0), moebius, 32)
        {
            samples.push(spec);
        }
    }
    while samples.len() < samples_per_row {
        samples.push(sample_member(params, &mut rng, 32));
    }

    // Bucket invariants: tested + skipped_nonanalytic = samples drawn, and
    // supported + refuted + inconclusive = tested.
    for spec in &samples {
        // Members with poles inside the disk are outside the conjecture's
        // hypothesis (it concerns analytic members).
        match pole_count(spec, 0.995) {
            Ok(Some(0)) => {}
            Ok(_) => {
                row.skipped_nonanalytic += 1;
                continue;
            }
            Err(e) => {
                row.tested += 1;
                row.inconclusive += 1;
                if row.error.is_none() {
                    row.error = Some(format!("pole probe: {e}"));
                }
                continue;
            }
        }
        let g = |z: Complex64| {
            spec.h_at(z)
                .map_err(|e| crate::series::EvalError::Failed { z, reason: format!("{e}") })
        };
        row.tested += 1;
        match subordination_check(g, h0, radii) {
            Ok(report) => match report.verdict {
                SubordinationVerdict::Supported => row.supported += 1,
                SubordinationVerdict::RefutedAt { .. } => {
                    row.refuted += 1;
                    if row.first_refutation.is_none() {
                        row.first_refutation = Some(report.verdict);
                    }
                }
                SubordinationVerdict::Inconclusive { .. } => row.inconclusive += 1,
            },
            Err(e) => {
                row.inconclusive += 1;
                if row.error.is_none() {
                    row.error = Some(format!("subordination check: {e}"));
                }
            }
        }
    }
    row
}
