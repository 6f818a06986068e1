//! Forward and inverse short-time Fourier transform.
//!
//! Analysis takes full frames only (no edge padding). Synthesis overlap-adds
//! with the configuration's synthesis window and divides by the accumulated
//! window envelope, which makes `istft(stft(x))` reproduce `x` exactly on the
//! fully-overlapped interior for every constant-overlap-add configuration.

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{ComplexSpectrogram, Result, SignalError, StftConfig, Waveform};

/// Forward STFT of a multi-channel waveform.
///
/// Output frame `t` is the one-sided DFT of the windowed segment starting at
/// `t * hop`; the frame count is `1 + (len - window_length) / hop`.
pub fn stft(wave: &Waveform, config: &StftConfig) -> Result<ComplexSpectrogram> {
    let len = wave.len();
    let window_length = config.window_length();
    let frames = config.frame_count(len).ok_or(SignalError::SignalTooShort {
        needed: window_length,
        got: len,
    })?;
    let bins = config.bins();
    let channels = wave.channels();
    let fft_size = config.fft_size();
    let window = config.analysis_window();

    let fft = FftPlanner::<f64>::new().plan_fft_forward(fft_size);
    let mut buffer = vec![Complex64::default(); fft_size];
    let mut values = Array3::<Complex64>::zeros((frames, bins, channels));

    for c in 0..channels {
        let samples = wave.channel(c);
        for t in 0..frames {
            let start = t * config.hop();
            for i in 0..fft_size {
                let x = if i < window_length { samples[start + i] * window[i] } else { 0.0 };
                buffer[i] = Complex64::new(x, 0.0);
            }
            fft.process(&mut buffer);
            for (f, v) in buffer[..bins].iter().enumerate() {
                values[(t, f, c)] = *v;
            }
        }
    }

    ComplexSpectrogram::new(values, *config, wave.sample_rate_hz())
}

/// Inverse STFT by weighted overlap-add.
///
/// The output has `window_length + (frames - 1) * hop` samples per channel.
/// Samples whose accumulated window envelope is (numerically) zero are set
/// to zero; all interior samples reproduce the analyzed signal.
pub fn istft(spec: &ComplexSpectrogram) -> Result<Waveform> {
    let config = spec.config();
    let frames = spec.frames();
    let bins = spec.bins();
    let channels = spec.channels();
    if frames == 0 || channels == 0 {
        return Err(SignalError::Empty);
    }
    let window_length = config.window_length();
    let fft_size = config.fft_size();
    let hop = config.hop();
    let out_len = window_length + (frames - 1) * hop;

    let synthesis = config.synthesis_window();
    let analysis = config.analysis_window();

    let ifft = FftPlanner::<f64>::new().plan_fft_inverse(fft_size);
    let mut buffer = vec![Complex64::default(); fft_size];
    let mut samples = Array2::<f64>::zeros((channels, out_len));
    let mut envelope = vec![0.0_f64; out_len];

    for t in 0..frames {
        let start = t * hop;
        for i in 0..window_length {
            envelope[start + i] += analysis[i] * synthesis[i];
        }
    }
    let env_floor = envelope.iter().cloned().fold(0.0_f64, f64::max) * 1e-12;

    let scale = 1.0 / fft_size as f64;
    for c in 0..channels {
        for t in 0..frames {
            // Rebuild the full spectrum from the one-sided half.
            for f in 0..bins {
                buffer[f] = spec.values()[(t, f, c)];
            }
            for f in bins..fft_size {
                buffer[f] = spec.values()[(t, fft_size - f, c)].conj();
            }
            ifft.process(&mut buffer);
            let start = t * hop;
            for i in 0..window_length {
                samples[(c, start + i)] += buffer[i].re * scale * synthesis[i];
            }
        }
        for (n, e) in envelope.iter().enumerate() {
            if *e > env_floor {
                samples[(c, n)] /= e;
            } else {
                samples[(c, n)] = 0.0;
            }
        }
    }

    Waveform::new(samples, spec.sample_rate_hz())
}
