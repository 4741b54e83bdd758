//! Exact computation in the Higman–Thompson group V_n and its supergroups
//! V_n(G), where a subgroup G of S_n acts letterwise on n-ary Cantor space.
//!
//! The crate works with three layers of objects:
//!
//! * finite combinatorics: permutations, permutation groups, orbit
//!   transversals ([`perm`]), finite words and eventually periodic points
//!   ([`words`]);
//! * homeomorphisms of Cantor space in prefix-substitution normal form
//!   ([`elements`]) and as synchronous letter-to-letter transducers
//!   ([`transducer`]);
//! * the structural results: conjugating V_n(HG) onto V_n(G) by an orbit
//!   transducer ([`conjugation`]), orbit-dynamics obstructions
//!   ([`dynamics`]), and the certified isomorphism classification of the
//!   V_n(G) for small n ([`classify`]).
//!
//! Compositions are written left to right everywhere: `x·(fg) = (x·f)·g`.
//! With the `parallel` feature (default) the heavy verification and
//! classification loops run on rayon; disabling it falls back to the same
//! sequential code paths.

pub mod classify;
pub mod conjugation;
pub mod dynamics;
pub mod elements;
mod error;
pub(crate) mod par;
pub mod perm;
pub mod transducer;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
