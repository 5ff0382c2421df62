//! Serialization and file input.

pub mod bytes;
pub mod container;
pub mod dataset;

pub use container::{deserialize, read_archive, read_info, serialize, write_archive, ContainerInfo};
pub use dataset::{encode_symbols, parse_dataset, read_dataset};
