mod bits;
pub mod clustering;
pub mod codec;
pub mod error;
pub mod exponent;
mod render;
pub mod source;
pub mod sweep;
pub mod typicality;

pub use clustering::ClusterModel;
pub use codec::{Codec, Codeword, CodewordLayout, DecodeOutcome};
pub use error::{Error, Result};
pub use exponent::ExponentReport;
pub use source::{SourceModel, SymbolBlock};
pub use sweep::{ResultRow, SweepConfig};
pub use typicality::{TypicalPartition, Zone};
