//! Online Ramsey games for monotone paths in ordered hypergraphs.

pub mod bounds;
pub mod builders;
pub mod combin;
pub mod digraph;
pub mod error;
pub mod game;
pub mod oracle;
pub mod painters;
pub mod play;
pub mod posets;

pub use error::{Error, Result};
