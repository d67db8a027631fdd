//! Exact computation of the homotopy of Real Johnson–Wilson theories ER(n)
//! through their Borel spectral sequence, together with blockwise checks of
//! the fibration long exact sequences relating ER(n) and E(n).
//!
//! Everything is graded and finite per block: a block is a fixed
//! RO(Z/2)-degree, `v_n`-exponent and (for spectral sequence pages) filtration.
//! Coefficients are the 2-local integers, so odd numbers are units and every
//! group is a sum of copies of `Z_(2)` and `Z/2^k`.

pub mod degree;
pub mod ehomotopy;
pub mod erring;
pub mod error;
pub mod group;
pub mod les;
pub mod maps;
pub mod matrix;
pub mod pages;
pub mod scalar;
pub mod snf;
pub mod sseq;

pub use degree::Degree;
pub use ehomotopy::{e_block_basis, e_graded_basis, EMonomial, SigmaConvention};
pub use erring::{
    distinguished, er_block_basis, er_graded_basis, er_product, lambda, period, DistinguishedElement,
    DistinguishedName, ERBasisElement,
};
pub use error::{AlgebraError, EngineError, ParseError};
pub use group::{FGGroup, GroupHom, GroupInvariants, Order};
pub use les::{BlockResult, CheckKind, CheckReport, LesWindow, Status, SCHEMA_VERSION};
pub use maps::{map_block, map_matrix, GradedMap, MapKind, SlotBasis, SpectrumSlot, Theory};
pub use matrix::IntMatrix;
pub use pages::{BlockIndex, Grading, PageBasis, PageElement, PageMonomial, Window};
pub use scalar::TwoLocalScalar;
pub use snf::{smith_normal_form, SmithForm};
pub use sseq::{e_infinity, page, turn_page, Differential};
