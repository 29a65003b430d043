//! Finite-temperature thermodynamics of the osp(1|2) integrable spin chain.
//!
//! The crate is organized around three independent routes to the same physics,
//! cross-validating each other:
//!
//! * [`algebra`] — graded R-matrix, Temperley-Lieb generator, Hamiltonian and
//!   transfer matrix on the full Hilbert space.
//! * [`exact`] / [`bethe`] — exact diagonalization and Bethe-root machinery
//!   (Q-functions, dressed-vacuum-form eigenvalues, Newton solving of the
//!   Bethe equations, string configurations).
//! * [`kernels`] / [`tba`] — integral kernels, Fourier-side operator algebra
//!   and the truncated thermodynamic-Bethe-ansatz solver for the free energy,
//!   densities, energy and entropy per site.
//!
//! Conventions: `k_B = 1`, `ħ = 1`; temperatures and energies share the units
//! of the coupling `J` (`J > 0` ferromagnetic, `J < 0` antiferromagnetic).

pub mod algebra;
pub mod bethe;
pub mod exact;
pub mod kernels;
pub mod lapack;
pub mod tba;
pub mod util;
