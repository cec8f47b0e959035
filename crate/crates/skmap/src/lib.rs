pub mod domain;
pub mod error;
pub mod prime;
pub mod schottky;
pub mod prefactor;
pub mod quad;
pub mod slitmaps;
mod serdes;
