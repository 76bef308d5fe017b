//! Quasiperiodically forced piecewise-linear interval maps: bifurcation
//! curves, critical forcing amplitudes and the curves that converge to the
//! attracting and repelling invariant objects.

pub mod analysis;
pub mod cohomology;
pub mod curves;
pub mod error;
pub mod forcing;
pub mod maps;
mod numeric;
pub mod rng;

pub use error::{Error, Result};
pub use forcing::TrigPoly;
pub use maps::{Branch, MapParams, SystemKind, Variant};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/forcing.md")]
    mod forcing {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    mod cohomology {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
}
