pub mod classify;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod lie;
pub mod linalg;
pub mod sampling;
