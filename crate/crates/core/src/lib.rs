//! Exact local and global invariants of finitely generated subgroups of
//! GL_d(Q): norms at every place, projective distances, heights, joint
//! spectral radius bounds, escape from subvarieties, and verifiable ping-pong
//! certificates.

pub mod eigen;
pub mod escape;
pub mod error;
pub mod factor;
pub mod genset;
pub mod heights;
pub mod interval;
pub mod jsr;
pub mod lattice;
pub mod magnitude;
pub mod matrix;
pub mod metrics;
pub mod multipoly;
pub mod newton;
pub mod pingpong;
pub mod place;
pub mod poly;
pub mod qrnorm;
pub mod rat;
pub mod roots;
pub mod serial;
pub mod subspace;
pub mod walk;

pub use error::{Error, Result};
pub use genset::GenSet;
pub use heights::HeightValue;
pub use interval::Interval;
pub use magnitude::{NormValue, Radical};
pub use matrix::Mat;
pub use metrics::ProjPoint;
pub use multipoly::MultiPoly;
pub use place::Place;
pub use poly::Poly;
pub use rat::Rat;
pub use subspace::Subspace;
