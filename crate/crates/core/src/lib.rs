//! Pure homological algebra over `Z` and `Z/m`: purity of sequences and
//! complexes, pure projective and pure injective resolutions, `Pext`, pure
//! dimensions, and countable towers for the non-finitely-generated cases.

pub mod complex;
pub mod dim;
pub mod error;
pub mod gen;
pub mod module;
pub mod purity;
pub mod resolve;
pub mod ring;
pub mod tower;

pub use complex::{cone, total_hom, truncate, BoundedComplex, ChainMap, GradedMap, Homotopy, TotalHom, Triangle, TruncationMode};
pub use dim::{criteria_report, pext, pgldim_probe, pid, ppd, CriteriaReport, DimReport, PextRoute};
pub use error::{Error, Result};
pub use module::{CanonicalForm, Element, FgModule, ModuleMap, ShortSequence};
pub use purity::{is_pure_quasi_iso, is_pure_sequence, purity_profile, ExtendedInt, PurityProfile, TestFamily};
pub use resolve::{pure_injective_resolution, pure_projective_resolution, roof_normalize, split_off_tail, Resolution, Roof, Side};
pub use ring::{int, BaseRing, Int, RingMatrix};
pub use tower::{cocycle_decide, colim_presentation, hocolim_resolution, holim_injective_resolution, pext1_colim, Cocycle, Tower};
