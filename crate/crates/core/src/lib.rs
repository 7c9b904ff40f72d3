//! Prime splitting in Galois extensions of ℚ, Dirichlet density estimation,
//! an exact calculus for densities of unions of splitting sets, Weyl-group
//! constants, and the explicit index bound pipeline built from them.

pub mod bounds;
pub mod calculus;
pub mod density;
pub mod exact;
pub mod poly;
pub mod primes;
pub mod sets;
pub mod splitting;
pub mod verify;
pub mod weyl;

pub use exact::ExactDensity;
