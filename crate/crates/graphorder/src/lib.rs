//! Random graph orders: sampling, exact dimension, realiser constructions,
//! asymptotic bound curves, and a reproducible experiment harness.
//!
//! Elements of every poset are labelled `1..=n`. Orders sampled from the two
//! random models respect labels (`x < y` in the order implies `x < y` as
//! integers), so the identity permutation is always a linear extension of a
//! sampled order; nothing else in the crate relies on that property.

pub mod construct;
pub mod dimension;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod numerics;
pub mod poset;
pub mod random;
