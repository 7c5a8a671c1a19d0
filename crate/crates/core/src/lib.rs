//! Exact and high-precision verification toolkit for Jacobian elliptic K3
//! families obtained by base change from the SU(2) Seiberg-Witten curves.

pub mod arith;
pub mod weierstrass;
pub mod families;
pub mod isogeny;
pub mod kummer;
pub mod lattice;
pub mod monodromy;
pub mod periods;
pub mod sampling;
pub mod suite;
