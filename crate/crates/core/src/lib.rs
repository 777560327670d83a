//! # fef-core
//!
//! Computes, bounds and certifies the fully entangled fraction (FEF) of
//! d⊗d bipartite quantum states,
//!
//! ```text
//! F(ρ) = max_U ⟨φ₊| (U†⊗I) ρ (U⊗I) |φ₊⟩,    |φ₊⟩ = (1/√d) Σ_s |ss⟩,
//! ```
//!
//! working in the Bloch representation over the SU(d) generator basis.
//!
//! Modules:
//!
//! * [`gellmann`] — the generator basis {ω_m, u_lk, v_lk} with its
//!   Ω₁/Ω₂/Ω₃ index partition, closed-form spectra and matrix elements.
//! * [`bloch`] — density-matrix validation and conversion to/from the Bloch
//!   form (local vectors r, s and correlation matrix T), plus the Ky-Fan norm.
//! * [`bounds`] — all closed-form quantities: the FEF objective (direct and in
//!   Bloch form), the singlet fraction, upper bounds, exact FEF for states
//!   with diagonal sign-patterned T, the two-qubit formula, the Δ(U,i,j)
//!   envelope, teleportation fidelity and distillability.
//! * [`optimizer`] — a deterministic multi-start maximizer over U(d) that
//!   produces certified numeric lower estimates of the FEF.
//! * [`states`] — constructors for the state families used in the test suites
//!   and the CLI (maximally entangled, isotropic, several 3⊗3 families,
//!   correlation-free states, seeded random densities).
//! * [`verify`] — the cross-validation suites wiring all of the above
//!   together, runnable at two sample-count levels.

pub mod bloch;
pub mod bounds;
pub mod error;
pub mod gellmann;
pub mod optimizer;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
