//! Point-group symmetry reduction for unitary coupled-cluster ansatz
//! circuits, with a dense statevector VQE engine and exact-diagonalization
//! references.
//!
//! The pipeline: parse MO-basis integrals from an FCIDUMP file
//! ([`integrals`]), enumerate the spin-adapted singles-and-doubles pool
//! ([`fermionics`]), drop every operator whose excited determinant leaves
//! the reference irrep ([`symmetry`]), map the survivors onto qubits
//! ([`pauli_jw`]), compile a first-order Trotterized circuit ([`circuit`]),
//! and minimize the energy on a statevector simulator
//! ([`simulator`], [`solvers`]). For an Abelian group of order `h`, roughly
//! `1/h` of the pool survives, with no loss of accuracy against the
//! unfiltered ansatz.
//!
//! ```no_run
//! use symucc::integrals::IntegralTable;
//! use symucc::fermionics::enumerate_pool;
//! use symucc::symmetry::filter_pool;
//!
//! let table = IntegralTable::from_file("fixtures/beh2.fcidump")?;
//! let pool = enumerate_pool(&table);
//! let kept = filter_pool(&pool, &table, table.reference_determinant().irrep);
//! println!("{} of {} operators survive", kept.len(), pool.len());
//! # Ok::<(), symucc::error::Error>(())
//! ```
//!
//! Runnable walkthroughs for each capability live under `examples/`; the
//! `symucc` binary exposes the same pipeline as subcommands.

pub mod circuit;
pub mod cli;
pub mod error;
pub mod fermionics;
pub mod integrals;
pub mod pauli_jw;
pub mod simulator;
pub mod solvers;
pub mod symmetry;

pub use error::{Error, Result};
