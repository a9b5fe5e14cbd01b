//! Core algebra for the Hecke operators `T_x` of the pair
//! `(PGL2(F[e]/(e^2)), PGL2(O[e]/(e^2)))` with `F = Q_p`, `p` an odd prime.
//!
//! The crate is organised bottom-up:
//!
//! * [`local`] — truncated p-adic arithmetic and the dual-number extension.
//! * [`proj`] — elements of `PGL2` over `F` and `F_e`, membership in the
//!   maximal compact subgroups, the semidirect splitting.
//! * [`coset`] — coset representative families, double-coset classification,
//!   affine Springer fiber membership and orbit canonicalization.
//! * [`hecke`] — exact convolution structure constants and products `T_x * T_y`.
//! * [`talg`] — the commutative subalgebra generated by the `T_x` and its
//!   evaluation morphisms, over exact cyclotomic coefficients.
//! * [`operators`] — closed-form operator matrices on invariant spaces and an
//!   independent brute-force action oracle computing the same matrices.
//! * [`spectral`] — Sturm-bisection eigensolver, spectral bounds, arcsine
//!   statistics, Chebyshev closed forms.
//! * [`weil`] — exact characteristic polynomials and Weil-number certification
//!   by rational Sturm counting.
//! * [`measure`] — truncated spectral measures, exact moments and the
//!   semicircle limit of the infinite-dimensional case.
//!
//! Everything here is `no_std` + `alloc`; IO, file formats and the CLI live in
//! the companion `heckelab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod coset;
pub mod error;
pub mod hecke;
pub mod local;
pub mod measure;
pub mod operators;
pub mod proj;
pub mod spectral;
pub mod talg;
pub mod weil;

pub use error::ArithError;
pub use local::{AdditiveCharacter, DualElement, LocalElement, LocalRing};
pub use proj::{LieElement, ProjMatrix};
