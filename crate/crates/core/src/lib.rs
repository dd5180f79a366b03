//! Maslov indices for Lagrangian and symplectic paths.
//!
//! The crate works on the universal covering of the Lagrangian Grassmannian
//! of R²ⁿ and builds, on top of it:
//!
//! - the Leray index `m(ℓ_∞, ℓ'_∞)` and the Kashiwara signature `τ(ℓ, ℓ', ℓ'')`
//!   ([`indices`]);
//! - Maslov indices of symplectic paths and Lagrangian loops ([`paths`]);
//! - Floquet splitting of periodic quadratic Hamiltonian flows and the
//!   associated index identities ([`monodromy`]);
//! - a JSON job runner used by the `maslov` binary ([`io`]).
//!
//! Conventions: `J = (0 I; −I 0)`, `σ(z, z') = z'ᵀ J z`, `u = A + iB ∈ U(n)`
//! acts as `(A −B; B A)`, and a plane `ℓ = u ℓ_p` is represented by `w = u uᵀ`.
//! Hamiltonian vector fields satisfy `σ(X_H, ·) = dH`, so the linearized flow
//! of `H` solves `Ṡ = J⁻¹ H'' S` and `H = ½|z|²` turns `ℓ_p` counterclockwise.

pub mod error;
pub mod indices;
pub mod io;
pub mod kernel;
pub mod lagrangian;
pub mod monodromy;
pub mod paths;
pub mod sampling;
pub mod tolerances;

pub use error::{Error, Result};
pub use lagrangian::{LagrangianFrame, LagrangianLift, Plane, SouriauPoint, SymplecticMatrix};
pub use tolerances::Tolerances;
