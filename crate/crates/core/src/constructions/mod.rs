//! Builders: double extensions, complexifications, cotangent-type metrics
//! and the named catalog.

pub mod catalog;
pub mod complexify;
pub mod cotangent;
pub mod double_extension;

pub use catalog::{catalog, CATALOG};
pub use complexify::{complex_structure, complexify, type_i_metric};
pub use cotangent::{bordemann_cotangent, central_extension_metric, two_step_parallel, two_step_parallel_checked};
pub use double_extension::{
    check_parallel_conditions, closed_form_connection, closed_form_ricci, double_extension, extension_invariants,
    DoubleExtensionSpec, ExtensionInvariants, ParallelConditions, SpecResiduals,
};
