//! Three-dimensional contact Lie groups: canonical frames, classification,
//! explicit contactomorphisms to the standard structure on `R^3`, matrix
//! models and left-invariant geodesics.

pub mod algebra;
pub mod classify;
pub mod embedding;
pub mod error;
pub mod expm;
pub mod frame;
pub mod geodesic;
pub mod io;
pub mod models;
pub mod presets;
pub mod pullback;
pub mod verify;

pub use algebra::{ContactData, KillingForm, Mat3, StructureConstants, Vec3};
pub use classify::{classify, CaseTag, ChartGenerators, ClassificationResult};
pub use embedding::{psi_embedding, GridSpec, PushforwardReport};
pub use error::{Error, Result};
pub use frame::{canonical_frame, CanonicalFrame};
pub use pullback::SecondKindChart;
