//! Closing-off machinery: φ-closures, diagonal intersections and the
//! finite-stage reflection construction.

mod closure;
mod reflection;

pub use closure::{
    cantor_pair, diagonal_intersection, is_phi_invariant, phi_closure, ClosureRun, DiagonalRun,
    FinitarySet,
};
pub use reflection::{
    reflection_construct, verify_witnesses, FzWitness, ReflectionConfig, ReflectionTrace,
    StageRecord, Trigger, WitnessMaps, XfWitness,
};
