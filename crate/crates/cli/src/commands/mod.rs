pub mod mc;
pub mod mi;
pub mod report;
pub mod series;
pub mod tails;

use typicality::{SubsystemDims, TripartiteDims};

use crate::Failure;

pub fn subsystem(d_s: u64, d_e: u64) -> Result<SubsystemDims, Failure> {
    Ok(SubsystemDims::new(d_s, d_e)?)
}

pub fn tripartite(d_a: u64, d_b: u64, d_e: u64) -> Result<TripartiteDims, Failure> {
    Ok(TripartiteDims::new(d_a, d_b, d_e)?)
}
