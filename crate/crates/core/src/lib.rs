//! Compiler and run-time model for issuing quantum instructions to a network of
//! node controllers through a shared, narrow interface.
//!
//! The flow is: logical circuit ([`circuit`]) → basis transpile → layer
//! scheduling ([`schedule`]) → physical decomposition ([`decompose`]) →
//! hardware grouping ([`subnet`]) → cycle counts ([`runtime`]).
//!
//! ```
//! use qpar::bench::{builtin_benchmark, run_pipeline};
//! use qpar::{AddressingMode, CxTemplate, DistributionMode, EncodingScheme, ExactSpeedups, TimingModel};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let circuit = builtin_benchmark("ising", 32, 1)?;
//! let dist = DistributionMode::Semi;
//! let mode = AddressingMode::for_network(EncodingScheme::SubIdNcBit, dist.network_size(), 16, 16)?;
//! let r = run_pipeline(&circuit, dist, &mode, &TimingModel::default(), &CxTemplate::default())?;
//! let exact: ExactSpeedups = r.speedups();
//! assert_eq!(exact.compiler * exact.hardware, exact.combined);
//! # Ok(())
//! # }
//! ```

pub mod bench;
pub mod circuit;
pub mod decompose;
pub mod error;
pub mod hardware;
pub mod runtime;
pub mod scalar;
pub mod schedule;
pub mod subnet;

pub use circuit::{Circuit, GateKind, Instruction};
pub use decompose::{CxTemplate, PhysicalInstruction, PhysicalOpcode, PhysicalProgram, SeqTag};
pub use hardware::{AddressingMode, DistributionMode, EncodingScheme, QubitMap};
pub use runtime::TimingModel;
pub use scalar::{Real, SpeedupScalar};
pub use schedule::LayeredCircuit;

/// Double-precision unitary oracle.
pub type Unitary64 = circuit::Unitary<f64>;
/// Single-precision unitary oracle.
pub type Unitary32 = circuit::Unitary<f32>;
/// Floating-point speedups.
pub type Speedups64 = bench::Speedups<f64>;
/// Exact rational speedups.
pub type ExactSpeedups = bench::Speedups<num_rational::Ratio<u128>>;
