//! Exact chain-level engine for Čech–Hochschild complexes of matrix
//! factorizations along a smooth divisor, and the maps relating them to
//! twisted de Rham complexes.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cdg;
pub mod error;
pub mod forms;
pub mod hochschild;
pub mod homology;
pub mod lin;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod rat;
pub mod sample;
pub mod scene;
pub mod signs;

pub use error::{Error, Result};
pub use lin::Lin;
pub use matrix::{rank_kernel, QMatrix};
pub use parse::parse_poly;
pub use poly::{normal_form, LocPoly, Mono, RawLoc, Ring, RingMap, RingRef};
pub use rat::Rat;
pub use scene::{builtin, builtin_scene, validate_scene, Lead, Scene, SceneSpec, Tuple};
