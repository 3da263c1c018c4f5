//! Mod-p cohomology of small p-groups, stable-element limits over categories
//! of injections, graph-of-groups constructions and Dickson invariants.

pub mod algebra;
pub mod bar;
pub mod catalog;
pub mod category;
pub mod conjugator;
pub mod error;
pub mod gamma;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod perm;
pub mod presets;
pub mod resolution;
pub mod stable;

pub use error::{Error, Result};
pub use group::{GroupHom, PermGroup};
pub use linalg::{FpMatrix, Prime, Subspace};
pub use perm::Perm;
pub use resolution::{minimal_resolution, CohomClass, Resolution};
