//! Far-field speech processing kit: multichannel enhancement, room
//! simulation and corpus augmentation, and factorized TDNN training kernels.
//!
//! The crate is organized around four subsystems:
//!
//! * [`signal`] — waveforms, STFT analysis/synthesis, resampling, MFCC
//!   features, and WAV file I/O,
//! * [`enhancement`] — guided source separation (spatial mixture model EM
//!   with activity clamping), spatial covariance estimation, MVDR
//!   beamforming, and WPE dereverberation,
//! * [`augmentation`] — image-source room impulse response simulation,
//!   reverberant convolution, speed perturbation, and the 15-fold corpus
//!   expansion recipe,
//! * [`ftdnn`] — factorized TDNN / projected-LSTM layer kernels with
//!   semi-orthogonal weight constraints, exact gradients, and a small
//!   cross-entropy trainer.
//!
//! Everything is `f64`/`Complex64` end to end; all operations are pure
//! functions over immutable inputs and safe to call from multiple threads.

pub mod augmentation;
pub mod config;
pub mod enhancement;
pub mod ftdnn;
pub mod linalg;
pub mod signal;
