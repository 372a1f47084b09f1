//! Certified ν₂ (completely bounded Schur-multiplier) norms of finite
//! matrices with explicit Hilbert-space factorizations, Monte-Carlo
//! γ-boundedness estimation for finite operator families, and numerical
//! verification of the factorization inequality and its group, semigroup and
//! power-operator corollaries on finite truncations.

pub mod calculus;
pub mod factor;
pub mod gamma;
pub mod group;
pub mod json;
pub mod num;
pub mod schur;
pub mod sdp;
