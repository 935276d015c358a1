pub mod error;
pub mod fpcore;
pub mod groups;
pub mod kgmod;
pub mod resolve;
pub mod cohom;
pub mod serre;
pub mod generation;
pub mod fingen;

pub use error::{Error, Result};
pub use fpcore::{Echelon, FpMatrix, Solver, Zp2Scalar};
pub use groups::{build_group, catalog, catalog_group, FiniteGroup, GroupSpec, QuotientGroup, Subgroup};
pub use kgmod::{KGModule, ModuleMap};
pub use resolve::{free_resolution, minimal_resolution, ExactSequence, FreeResolution, ResolutionCache};
pub use cohom::{cohomology_dim, ring_presentation, CohomologyClass, GroupCohomology, RingPresentation};
pub use serre::{find_witness, splice, SerreWitness, SplicedSequence};
pub use generation::{generation_certificate, verify_certificate, GenerationCertificate, GenerationLimits};
pub use fingen::{lemma1_check, module_generators, FiniteGenerationReport, ModuleFGReport};
