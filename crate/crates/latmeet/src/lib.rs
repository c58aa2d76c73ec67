pub mod bench;
pub mod cli;
pub mod endo;
pub mod files;
pub mod generators;
pub mod knowledge;
pub mod lattice;
pub mod meet;
pub mod partition;
