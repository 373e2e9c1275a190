//! Finite-type group shifts: closure groups, sliding block codes, components,
//! composition series of the connected part, and Galois-twisted simplicity.

pub mod blocks;
pub mod classify;
pub mod code;
pub mod decompose;
pub mod error;
pub mod fixture;
pub mod galois;
pub mod group;
pub mod hom;
pub mod limits;
pub mod oracle;
pub mod report;
pub mod shift;
pub mod sigma;
pub mod subgroup;
pub mod topology;

pub use blocks::BlockGroup;
pub use classify::{brute_force_surjective, classify_normal_in_benign, normal_window_subshifts, NormalClassification};
pub use code::{higher_block, quotient_shift, SlidingBlockHom};
pub use decompose::{
    decompose, decompose_via, eventual_image, recognize_full_up_to_isomorphism, series_connected, series_equivalent,
    series_through, substandard_descent_step, verify_series, DecompositionReport, DescentStep,
};
pub use error::{Error, Result, Witness};
pub use fixture::{parse_fixture, Analyzable, Fixture};
pub use galois::{components_over_base, sigma_stably_equivalent, DeltaContext, DeltaGroup};
pub use group::{build_group, Elem, FiniteGroup, GroupDescriptor};
pub use hom::{find_isomorphism, GroupHom};
pub use limits::Limits;
pub use oracle::{oracle_check, OracleReport};
pub use report::{analyze, ObjectReport, SeriesRecord};
pub use shift::{Comparison, GroupShift};
pub use sigma::FiniteSigmaGroup;
pub use subgroup::{
    is_simple, normal_subgroup_inventory, quotient_group, subgroup_generated, NormalInventory, Subgroup,
};
pub use topology::{
    analyze_components, component_partition, finite_space_sigma_components, identity_component, nub_closure, pi0,
    sigma_components, ComponentCertificate, ComponentPartition, Components,
};
