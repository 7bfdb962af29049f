//! Elementary algebraic sets and the Zariski topology on groups.
//!
//! * [`group`]: finite, finitely generated abelian and direct-sum groups,
//!   subgroup and centralizer machinery.
//! * [`word`]: one-variable word equations, their parser, evaluator and the
//!   linear solver over abelian groups.
//! * [`zariski`]: closed-set expressions, canonical forms over abelian
//!   groups, subgroup restriction and discreteness covers.
//! * [`club`]: closing-off engines and the staged reflection construction.

pub mod club;
pub mod group;
pub mod snf;
pub mod word;
pub mod zariski;
