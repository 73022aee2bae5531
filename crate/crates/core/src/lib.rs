//! Finite groups, semidirect products and amalgamated free products.
//!
//! The crate builds `(A ∗_D B) ⋊ C` and `(A⋊C) ∗_{D⋊C} (B⋊C)` for finite
//! `A`, `B`, `C`, `D`, checks the isomorphism between them, and uses it to
//! write every matrix in `GL₂(ℤ)` as a normal form in `D₄ ∗_{D₂} D₆`.

pub mod amalgam;
pub mod group;
pub mod iso;
pub mod matgroup;
#[cfg(any(test, feature = "oracles"))]
pub mod oracle;
pub mod products;
pub mod report;

pub use amalgam::{make_amalgam, AmalgamError, AmalgamSpec, AmalgamWord, NormalForm, Side, Syllable};
pub use group::{
    check_group_axioms, hom_compose, hom_from_generators, is_injective, make_cyclic, make_dihedral,
    AxiomViolation, Elem, FiniteGroup, Generator, GroupAction, GroupError, GroupHom,
};
pub use iso::{CompatibleActionTriple, IsoError, IsoInstance, SampleConfig, SmallElement};
pub use matgroup::{build_dihedral_model, gl2_split, DihedralModel, Glt2Word, Letter, Mat2, MatError};
pub use products::{functor_on_hom, semidirect, verify_functor_laws, ProductError, SemidirectElement, SemidirectGroup};
pub use report::{CheckRecord, Report, Status};
