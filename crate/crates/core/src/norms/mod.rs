//! Lower bounds for operator norms of truncated Hilbert transforms, and the
//! closed-form constants they are compared against.

mod ascent;
mod consistency;
mod constants;
mod operators;
mod power;

pub use ascent::{phi_psi_ratio, phi_psi_ratio_ascent, AscentOptions, Constraint};
pub use consistency::{cross_domain_consistency, ConsistencyReport, EstimateSequence};
pub use constants::{conjugate_max, extrapolation_constant, pichorides_constant, reference_constants, ReferenceConstants};
pub use operators::{
    cell_average_kernel, discrete_kernel, DenseOperator, IdentityOperator, LinearOperator, PeriodicGridOperator,
    ToeplitzOperator,
};
pub use power::{
    embed_witness, norm_ladder, p_norm_best_of, p_norm_power_iteration, rayleigh_ratio, seed_vector, LadderOptions,
    NormEstimate, Seed,
};
