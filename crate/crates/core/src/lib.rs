//! Exact q-series arithmetic for overpartition congruences.
//!
//! The crate builds truncated Laurent series with exact rational
//! coefficients, expands eta quotients and Eisenstein series, computes the
//! smallest-parts generating functions for overpartitions, applies
//! half-integral weight Hecke operators and Shimura lifts, and checks the
//! resulting congruences and identities coefficient by coefficient.
//!
//! ```
//! use qhecke::forms::NamedForm;
//! use qhecke::hecke::{hecke, HeckeSpec};
//!
//! let f = NamedForm::Pbar.expand(2000)?.pow_int(-7)?;
//! let image = hecke(&f, &HeckeSpec::trivial(3, 3)?)?;
//! assert_eq!(image, f.truncate(image.end()).scale_int(3i64.pow(5) + 1));
//! # Ok::<(), qhecke::Error>(())
//! ```

pub mod error;
pub mod forms;
pub mod hecke;
pub mod numthy;
pub mod series;
pub mod spt;
pub mod verify;

pub use error::{Error, Result};
pub use numthy::QuadChar;
pub use series::{Congruence, Mismatch, SeriesJson, TruncatedSeries};
