//! Radial Hartree model: self-consistent solutions at fixed mass, the critical
//! mass where the chemical potential vanishes, and identity/lemma checks.

pub mod eigen;
pub mod scf;
