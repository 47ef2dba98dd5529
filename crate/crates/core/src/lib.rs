//! Ball packings and coverings generated by complete Coxeter orthoscheme
//! groups of hyperbolic 3-space.
//!
//! [`orthoscheme::Orthoscheme`] builds the vertex and plane vectors of
//! `W_{uvw}` in the Lorentz model, [`points`] adds the truncation points and
//! midpoints, [`volume`] evaluates the orthoscheme volume, and [`cases`]
//! turns all of it into packing and covering densities. [`survey`] runs
//! sweeps and compares against the reference tables.

pub mod cases;
pub mod error;
pub mod lorentz;
pub mod orthoscheme;
pub mod points;
pub mod survey;
pub mod volume;

pub use cases::{evaluate, radius, stabilizer, verify_radius, CaseId, CaseResult, Mode, StabOrder};
pub use error::{Error, Result};
pub use lorentz::{bilinear, classify, dist_pp, dist_pplane, LorentzVec, PointClass};
pub use orthoscheme::{Order, OrthoParams, Orthoscheme};
pub use volume::{ball_volume, lobachevsky, orthoscheme_volume, theta, Angles};
