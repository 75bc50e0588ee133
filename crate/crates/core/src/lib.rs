//! Elderly inculcation, gifts and the relative consumption of the old.

pub mod accumulation;
pub mod error;
pub mod ethno;
pub mod oracle;
pub mod property_rights;
pub mod static_economy;
pub mod verify;

pub use error::{ModelError, Result};
