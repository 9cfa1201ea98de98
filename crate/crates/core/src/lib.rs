//! Symmetric-group recoupling coefficients, Schur–Weyl projectors and the
//! tripartite entropy experiments built on them.

pub mod combinatorics;
pub mod error;
pub mod experiments;
pub mod intertwiner;
pub mod quantumstates;
pub mod recoupling;
pub mod repsym;
pub mod schurweyl;
pub mod tensorlinalg;

pub use combinatorics::{CycleType, Partition, Permutation, StandardTableau};
pub use error::{Error, Result};
pub use experiments::{ExperimentReport, Gate, GateKind, OutputFormat};
pub use intertwiner::IntertwinerBasis;
pub use quantumstates::{DensityMatrix, SpectraTuple};
pub use recoupling::{RecouplingTensor, RecouplingUnitary, SixLabels};
pub use repsym::RepMatrixSet;
pub use schurweyl::{CopyLayout, TripartiteLabels};
pub use tensorlinalg::{ComplexMatrix, Matrix, RealMatrix};
