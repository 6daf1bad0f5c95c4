//! Bit-exact tensor container, flat key=value configuration, and
//! deterministic seeded randomness.

pub mod config;
pub mod container;
pub mod seed;

pub use config::{parse_config, ConfigValue, RunConfig};
pub use container::{read_tensor, write_tensor, Dtype, Tensor};
pub use seed::SeedStream;
