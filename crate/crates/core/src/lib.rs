pub mod characteristics;
pub mod error;
pub mod json;
pub mod lattice;
pub mod siegel;
pub mod strata_nerve;

pub use characteristics::{Characteristic, Parity};
pub use error::{Error, Result};
pub use siegel::{CMatrix, CVector, PeriodMatrix, SymplecticIntMatrix, TorusPoint};
pub mod locus;
pub mod surface_group;
pub mod theta;
pub mod verification;
