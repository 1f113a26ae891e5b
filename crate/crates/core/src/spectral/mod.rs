//! Fourier representation of periodic fields on `[0, 2π)³`.

mod field;
mod grid;
mod ops;
mod snapshot;

pub use field::{
    fft_forward, fft_inverse, forward_real, inverse_real, symmetrize, ModalField, PhysicalField3,
    PhysicalTensorField, SpectralField3, SpectralMatrixField, SpectralTensorField, TENSOR_ENTRIES,
};
pub use grid::Grid;
pub use ops::{
    antisym_gradient, consistency_residual, dealias_in_place, directional_derivative_form,
    directional_identity_residual, directional_strain, gradient_tensor, helmholtz_project,
    isometry_audit, leray_project_in_place, neg_laplacian, scalar_gradient, sobolev_norm_sq,
    sym_gradient, tensor_inner, tracefree_hessian, velocity_from_strain, vorticity,
    DirectionPartition, IsometryReport, CONSTRAINT_LIMIT,
};
pub(crate) use field::{forward_real_pair, inverse_real_pair};
pub use snapshot::{FieldKind, Snapshot, FORMAT_TAG};
