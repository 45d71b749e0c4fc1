pub mod error;
pub mod functionals;
pub mod grid;
pub mod profile;
pub mod special;
pub mod hartree;
pub mod bounds;
pub mod gn;
pub mod beta;
pub mod report;
