//! Construction, verification and numerical exploration of classes of
//! meromorphic functions on the unit disk characterized by a bounded
//! differential expression.

pub mod catalog;
pub mod explore;
pub mod family;
pub mod quad;
pub mod schwarz;
pub mod series;
pub mod verify;

pub use explore::{
    maximize_h_modulus, h_modulus_objective, sample_member, sample_params, sample_spec,
    subordination_scan, sweep, ExploreError, MaxReport, OptimizeConfig, SubordinationScanRow,
    SweepMetric, SweepOptions, SweepRow,
};
pub use family::{
    a2_bound, a2_report, b_coefficients, bk_bound, bk_report, classify, construct, construct_zf,
    critical_point_witness, difference_quotient_margin, extremal_f0, extremal_f0_spec,
    extremal_fk, extremal_fk_spec, induced_omega_of, l2_bound, l2_report, l2_weighted_sum,
    u_operator, BoundKind, BoundReport, ClassParams, ConstructionSpec, CriticalWitness,
    FamilyError, RegionVerdict,
};
pub use schwarz::{
    evaluate_omega, induced_capital_omega, omega_series, BoundedAnalytic, SchwarzError,
    SchwarzSpec,
};
pub use series::{coeffs_by_cauchy_dft, EvalError, PowerSeries, SeriesError};
pub use verify::{
    local_univalence_check, local_univalence_of_series, local_univalence_of_spec, membership,
    membership_of_spec, membership_with, oracle_cross_check, pole_count, subordination_check,
    univalence_grid, univalence_grid_with_poles, univalence_of_spec, CrossCheckReport,
    LocalUnivalenceReport, MembershipReport, SamplingGrid, SubordinationReport,
    SubordinationVerdict, UnivalenceReport, UnivalenceVerdict, Verdict, VerifyError,
};
