//! SAR image representation, amplitude normalization, patch extraction,
//! synthetic scene generation, and despeckling.

pub mod despeckle;
pub mod normalize;
pub mod patches;
pub mod scene;
mod slc;

pub use despeckle::{despeckle_boxcar, BoxcarDespeckler, Despeckler, ExternalDespeckler};
pub use normalize::{normalize_amplitude, NormalizationParams, NormalizedPatch};
pub use patches::{extract_patches, reflect_index, PadMode, PatchGrid};
pub use scene::{synthesize_scene, Region, SceneSpec, TextureKind};
pub use slc::SlcImage;
