pub mod commands;
pub mod error;
pub mod sweep;
pub mod verify;
