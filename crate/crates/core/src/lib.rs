//! Loop homology rings of global quotient orbifolds `[M/G]`.
//!
//! Given a catalog presentation `A` of the loop homology ring of `M`, a finite
//! group `G` and a field `k` whose characteristic does not divide `|G|`, the
//! loop homology of `[M/G]` is computed as `A ⊗ Z(k[G])`. The crate provides
//! the pieces: exact fields, finite groups and their conjugacy classes, the
//! center of the group algebra, graded-commutative normal forms, the twisted
//! sector model with its transfer map, and the hypothesis checker that decides
//! when the splitting applies.

pub mod catalog;
pub mod conditions;
pub mod error;
pub mod field;
pub mod graded;
pub mod group;
pub mod group_algebra;
pub mod input;
pub mod linalg;
pub mod par;
pub mod sector;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use graded::{GradedAlgebra, GradedElement, GradedPresentation, Generator, Monomial};
pub use group::{ConjugacyClassSet, FiniteGroup};
pub use group_algebra::{CenterBasis, ClassConstants, GroupAlgebraElement};
pub use par::Exec;
pub use sector::{QuotientElement, SectorElement, SectorModel, TensorElement};
pub use catalog::{Catalog, ManifoldEntry, AmbientGroupEntry, Tncz};
pub use conditions::{assemble, OrbifoldProblem, OrbifoldReport, TrivialityVerdict};
pub use input::{GroupSpec, ProblemSpec};
