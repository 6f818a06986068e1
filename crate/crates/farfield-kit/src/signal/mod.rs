//! Time-frequency analysis/synthesis, resampling, acoustic features, and
//! audio file I/O shared by the enhancement, augmentation, and network
//! modules.
//!
//! The central types are [`Waveform`] (multi-channel time-domain audio) and
//! [`ComplexSpectrogram`] (its one-sided STFT). Analysis parameters live in
//! [`StftConfig`], which checks the constant-overlap-add condition at
//! construction so that [`istft`]∘[`stft`] is exact on the interior.

mod mfcc;
mod resample;
mod stft;
mod wav;

pub use mfcc::{mfcc, FeatureConfig};
pub use resample::resample;
pub use stft::{istft, stft};
pub use wav::{read_wav, write_wav_float32, write_wav_int16};

use ndarray::{Array2, Array3, ArrayView1};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by the signal layer.
#[derive(Debug, Error)]
pub enum SignalError {
    #[error("signal too short: need at least {needed} samples, got {got}")]
    SignalTooShort { needed: usize, got: usize },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("resample ratio {0} outside [0.5, 2.0]")]
    InvalidRatio(f64),
    #[error("channel mismatch: expected {expected} channel(s), got {got}")]
    ChannelMismatch { expected: usize, got: usize },
    #[error("waveform contains non-finite samples")]
    NonFinite,
    #[error("waveform has no samples")]
    Empty,
    #[error("unsupported wav: {0}")]
    UnsupportedWav(String),
    #[error("malformed wav: {0}")]
    MalformedWav(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SignalError>;

/// Multi-channel time-domain audio.
///
/// Samples are stored channels × length with a nominal range of [-1, 1].
/// Construction rejects empty or non-finite data, so every `Waveform` in
/// flight satisfies the type's invariants.
#[derive(Debug, Clone)]
pub struct Waveform {
    samples: Array2<f64>,
    sample_rate_hz: u32,
}

impl Waveform {
    pub fn new(samples: Array2<f64>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(SignalError::InvalidConfig("sample rate must be positive".into()));
        }
        if samples.nrows() == 0 || samples.ncols() == 0 {
            return Err(SignalError::Empty);
        }
        if !samples.iter().all(|s| s.is_finite()) {
            return Err(SignalError::NonFinite);
        }
        Ok(Self { samples, sample_rate_hz })
    }

    /// Wrap a single channel of samples.
    pub fn from_mono(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        let n = samples.len();
        let arr = Array2::from_shape_vec((1, n), samples)
            .expect("shape follows from the vector length");
        Self::new(arr, sample_rate_hz)
    }

    pub fn samples(&self) -> &Array2<f64> {
        &self.samples
    }

    pub fn channels(&self) -> usize {
        self.samples.nrows()
    }

    /// Samples per channel.
    pub fn len(&self) -> usize {
        self.samples.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.ncols() == 0
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn channel(&self, c: usize) -> ArrayView1<'_, f64> {
        self.samples.row(c)
    }

    /// A new waveform holding only the given channel.
    pub fn select_channel(&self, c: usize) -> Result<Self> {
        if c >= self.channels() {
            return Err(SignalError::ChannelMismatch { expected: self.channels(), got: c });
        }
        Self::new(
            self.samples.row(c).insert_axis(ndarray::Axis(0)).to_owned(),
            self.sample_rate_hz,
        )
    }

    /// Total energy summed over channels and samples.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s * s).sum()
    }

    pub fn duration_s(&self) -> f64 {
        self.len() as f64 / self.sample_rate_hz as f64
    }
}

/// Analysis window shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Hann,
    SqrtHann,
    Hamming,
    Rect,
}

impl WindowKind {
    /// Periodic window coefficients of the given length.
    pub fn coefficients(self, length: usize) -> Vec<f64> {
        let n = length as f64;
        (0..length)
            .map(|i| {
                let phase = 2.0 * std::f64::consts::PI * i as f64 / n;
                match self {
                    WindowKind::Hann => 0.5 * (1.0 - phase.cos()),
                    WindowKind::SqrtHann => (0.5 * (1.0 - phase.cos())).sqrt(),
                    WindowKind::Hamming => 0.54 - 0.46 * phase.cos(),
                    WindowKind::Rect => 1.0,
                }
            })
            .collect()
    }

    /// True when synthesis applies the window a second time (root windows),
    /// false for plain overlap-add.
    pub(crate) fn windowed_synthesis(self) -> bool {
        matches!(self, WindowKind::SqrtHann)
    }
}

/// STFT analysis parameters.
///
/// Construction verifies `0 < hop <= window_length <= fft_size` and the
/// constant-overlap-add condition of the effective synthesis envelope
/// (relative deviation at most 1e-10), so a value of this type always
/// describes an invertible transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StftConfig {
    window_length: usize,
    hop: usize,
    fft_size: usize,
    window_kind: WindowKind,
}

const COLA_TOLERANCE: f64 = 1e-10;

impl StftConfig {
    pub fn new(
        window_length: usize,
        hop: usize,
        fft_size: usize,
        window_kind: WindowKind,
    ) -> Result<Self> {
        if hop == 0 || hop > window_length || window_length > fft_size {
            return Err(SignalError::InvalidConfig(format!(
                "need 0 < hop <= window_length <= fft_size, got hop={hop}, \
                 window_length={window_length}, fft_size={fft_size}"
            )));
        }
        let cfg = Self { window_length, hop, fft_size, window_kind };
        let envelope = cfg.overlap_envelope();
        let max = envelope.iter().cloned().fold(f64::MIN, f64::max);
        let min = envelope.iter().cloned().fold(f64::MAX, f64::min);
        let mean = envelope.iter().sum::<f64>() / envelope.len() as f64;
        if mean <= 0.0 || (max - min) / mean > COLA_TOLERANCE {
            return Err(SignalError::InvalidConfig(format!(
                "window {window_kind:?} with hop {hop}/{window_length} violates \
                 constant overlap-add (relative deviation {:.3e})",
                (max - min) / mean.max(f64::MIN_POSITIVE),
            )));
        }
        Ok(cfg)
    }

    /// 1024-sample window, 256 hop, Hann — the enhancement-chain default.
    pub fn default_enhancement() -> Self {
        Self::new(1024, 256, 1024, WindowKind::Hann).expect("hann at 25% hop is COLA")
    }

    pub fn window_length(&self) -> usize {
        self.window_length
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    pub fn window_kind(&self) -> WindowKind {
        self.window_kind
    }

    /// Number of one-sided frequency bins, `fft_size / 2 + 1`.
    pub fn bins(&self) -> usize {
        self.fft_size / 2 + 1
    }

    /// Frames produced from `len` samples (full frames only).
    pub fn frame_count(&self, len: usize) -> Option<usize> {
        if len < self.window_length {
            None
        } else {
            Some(1 + (len - self.window_length) / self.hop)
        }
    }

    /// Center time of frame `t` in seconds at the given rate.
    pub fn frame_center_s(&self, frame: usize, sample_rate_hz: u32) -> f64 {
        (frame * self.hop + self.window_length / 2) as f64 / sample_rate_hz as f64
    }

    pub(crate) fn analysis_window(&self) -> Vec<f64> {
        self.window_kind.coefficients(self.window_length)
    }

    pub(crate) fn synthesis_window(&self) -> Vec<f64> {
        if self.window_kind.windowed_synthesis() {
            self.analysis_window()
        } else {
            vec![1.0; self.window_length]
        }
    }

    /// Periodic overlap-add sum of analysis × synthesis window, one hop period.
    fn overlap_envelope(&self) -> Vec<f64> {
        let wa = self.analysis_window();
        let ws = self.synthesis_window();
        let mut acc = vec![0.0; self.hop];
        for j in 0..self.window_length {
            acc[j % self.hop] += wa[j] * ws[j];
        }
        acc
    }
}

impl<'de> Deserialize<'de> for StftConfig {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            window_length: usize,
            hop: usize,
            fft_size: usize,
            window_kind: WindowKind,
        }
        let raw = Raw::deserialize(deserializer)?;
        StftConfig::new(raw.window_length, raw.hop, raw.fft_size, raw.window_kind)
            .map_err(serde::de::Error::custom)
    }
}

/// One-sided complex STFT tensor, frames × bins × channels, together with
/// the analysis configuration that produced it.
#[derive(Debug, Clone)]
pub struct ComplexSpectrogram {
    values: Array3<Complex64>,
    config: StftConfig,
    sample_rate_hz: u32,
}

impl ComplexSpectrogram {
    pub fn new(values: Array3<Complex64>, config: StftConfig, sample_rate_hz: u32) -> Result<Self> {
        if values.shape()[1] != config.bins() {
            return Err(SignalError::InvalidConfig(format!(
                "spectrogram has {} bins, config requires {}",
                values.shape()[1],
                config.bins()
            )));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(SignalError::NonFinite);
        }
        Ok(Self { values, config, sample_rate_hz })
    }

    pub fn values(&self) -> &Array3<Complex64> {
        &self.values
    }

    pub fn config(&self) -> &StftConfig {
        &self.config
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn frames(&self) -> usize {
        self.values.shape()[0]
    }

    pub fn bins(&self) -> usize {
        self.values.shape()[1]
    }

    pub fn channels(&self) -> usize {
        self.values.shape()[2]
    }

    /// Replace the channel contents, keeping configuration and rate.
    pub fn with_values(&self, values: Array3<Complex64>) -> Result<Self> {
        Self::new(values, self.config, self.sample_rate_hz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn waveform_rejects_nan() {
        let err = Waveform::new(array![[0.0, f64::NAN]], 16000).unwrap_err();
        assert!(matches!(err, SignalError::NonFinite));
    }

    #[test]
    fn cola_accepts_standard_pairs() {
        for kind in [WindowKind::Hann, WindowKind::SqrtHann] {
            for hop in [256, 128] {
                StftConfig::new(512, hop, 512, kind).unwrap();
            }
        }
        StftConfig::new(512, 256, 512, WindowKind::Hamming).unwrap();
        StftConfig::new(512, 512, 512, WindowKind::Rect).unwrap();
    }

    #[test]
    fn cola_rejects_bad_pairs() {
        // Hann at hop == window has a wildly varying envelope.
        let err = StftConfig::new(512, 512, 512, WindowKind::Hann).unwrap_err();
        assert!(matches!(err, SignalError::InvalidConfig(_)));
        // Non-divisor hop breaks the periodic sum for hann.
        assert!(StftConfig::new(512, 200, 512, WindowKind::Hann).is_err());
    }

    #[test]
    fn config_rejects_inconsistent_sizes() {
        assert!(StftConfig::new(512, 0, 512, WindowKind::Hann).is_err());
        assert!(StftConfig::new(512, 600, 512, WindowKind::Hann).is_err());
        assert!(StftConfig::new(512, 256, 256, WindowKind::Hann).is_err());
    }

    #[test]
    fn frame_count_formula() {
        let cfg = StftConfig::new(400, 160, 512, WindowKind::Hann).unwrap();
        assert_eq!(cfg.frame_count(16000), Some(1 + (16000 - 400) / 160));
        assert_eq!(cfg.frame_count(399), None);
    }
}
