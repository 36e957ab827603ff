//! Exact computations for monic polynomial endomorphisms of projective space.
//!
//! A monic map of degree `d` on `P^N` has components `x_i^d + x_N g_i` for
//! `i < N` and `x_N^d`. This crate provides exact forms and resultants, the
//! divisor pushforward `f_*`, local and global heights of divisors, and the
//! machinery that certifies a map as post-critically finite (PCF) or not.

pub mod divisor;
pub mod error;
pub mod form;
pub mod gcd;
pub mod heights;
pub mod interp;
pub mod interval;
pub mod matrix;
pub mod modular;
pub mod multi_index;
pub mod pcf;
pub mod poly;
pub mod polymap;
pub mod pushforward;
pub mod rational;
pub mod resultant;

pub use divisor::{normalize_divisor, Divisor};
pub use error::{Error, Result};
pub use form::Form;
pub use multi_index::MultiIndex;
pub use poly::Poly;
pub use polymap::PolyMap;
pub use rational::Rational;
