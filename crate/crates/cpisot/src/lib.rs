//! Voronoi tessellation spectra of cut-and-project sets over cubic complex
//! Pisot units, computed with exact predicates in the field `Q(beta)`.

pub mod cutproject;
pub mod delone;
pub mod error;
pub mod field;
pub mod interval;
pub mod json;
pub mod numeration;
pub mod spectra;
pub mod svg;
pub mod sweep;
pub mod voronoi;
pub mod windowexpr;

pub use error::{Error, Result};
pub use field::{make_base, BaseSpec, CrossPair, QBeta, RootKind, ZGamma};
pub use interval::{Rat, RatInterval};

// The guide chapters double as doc-tests so the book and the crate cannot
// drift apart.
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod guide_introduction {}
#[doc = include_str!("../../../book/src/field.md")]
pub mod guide_field {}
#[doc = include_str!("../../../book/src/cutproject.md")]
pub mod guide_cutproject {}
#[doc = include_str!("../../../book/src/voronoi.md")]
pub mod guide_voronoi {}
#[doc = include_str!("../../../book/src/spectra.md")]
pub mod guide_spectra {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod guide_cli {}
