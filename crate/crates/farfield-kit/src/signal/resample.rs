//! Band-limited resampling by polyphase windowed-sinc interpolation.
//!
//! The kernel is a Kaiser-windowed sinc (beta 8.6, 64 taps per phase)
//! tabulated at 512 phases with linear interpolation between phases. When
//! the ratio exceeds 1 the kernel cutoff drops to `1/ratio` of Nyquist so
//! the shortened output stays alias-free.

use ndarray::Array2;

use super::{Result, SignalError, Waveform};

const HALF_WIDTH: usize = 32;
const PHASES: usize = 512;
const KAISER_BETA: f64 = 8.6;

/// Resample every channel by `ratio`.
///
/// The output holds `round(len / ratio)` samples per channel; a pure tone at
/// `f` Hz in the input appears at `ratio * f` Hz in the output when both are
/// read at the same sample rate. `ratio` must lie in `[0.5, 2.0]`.
pub fn resample(wave: &Waveform, ratio: f64) -> Result<Waveform> {
    if !(0.5..=2.0).contains(&ratio) || !ratio.is_finite() {
        return Err(SignalError::InvalidRatio(ratio));
    }
    let in_len = wave.len();
    let out_len = (in_len as f64 / ratio).round() as usize;
    if out_len == 0 {
        return Err(SignalError::Empty);
    }

    let kernel = KernelTable::new(if ratio > 1.0 { 1.0 / ratio } else { 1.0 });
    let mut out = Array2::<f64>::zeros((wave.channels(), out_len));
    for c in 0..wave.channels() {
        let x = wave.channel(c);
        for n in 0..out_len {
            let t = n as f64 * ratio;
            let i = t.floor() as isize;
            let frac = t - i as f64;
            let mut acc = 0.0;
            for m in (1 - HALF_WIDTH as isize)..=(HALF_WIDTH as isize) {
                let j = i + m;
                if j < 0 || j >= in_len as isize {
                    continue;
                }
                acc += x[j as usize] * kernel.eval(frac - m as f64);
            }
            out[(c, n)] = acc;
        }
    }
    Waveform::new(out, wave.sample_rate_hz())
}

/// Zeroth-order modified Bessel function, power series.
fn bessel_i0(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let half_sq = x * x / 4.0;
    for k in 1..64 {
        term *= half_sq / (k * k) as f64;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

struct KernelTable {
    values: Vec<f64>,
}

impl KernelTable {
    /// `cutoff` is the lowpass edge as a fraction of Nyquist.
    fn new(cutoff: f64) -> Self {
        let i0_beta = bessel_i0(KAISER_BETA);
        let n = 2 * HALF_WIDTH * PHASES;
        let mut values = Vec::with_capacity(n + 2);
        for j in 0..=n {
            let u = j as f64 / PHASES as f64 - HALF_WIDTH as f64;
            let frac = u / HALF_WIDTH as f64;
            let kaiser = bessel_i0(KAISER_BETA * (1.0 - frac * frac).max(0.0).sqrt()) / i0_beta;
            values.push(cutoff * sinc(cutoff * u) * kaiser);
        }
        values.push(0.0);
        Self { values }
    }

    /// Kernel value at offset `u` (samples), |u| < HALF_WIDTH.
    #[inline]
    fn eval(&self, u: f64) -> f64 {
        let pos = (u + HALF_WIDTH as f64) * PHASES as f64;
        let idx = pos.floor() as usize;
        let w = pos - idx as f64;
        self.values[idx] * (1.0 - w) + self.values[idx + 1] * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rustfft::FftPlanner;
    use std::f64::consts::PI;

    fn tone(freq: f64, len: usize, fs: u32) -> Waveform {
        let samples: Vec<f64> =
            (0..len).map(|n| (2.0 * PI * freq * n as f64 / fs as f64).sin()).collect();
        Waveform::from_mono(samples, fs).unwrap()
    }

    fn dominant_hz(wave: &Waveform) -> f64 {
        let n = wave.len();
        let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
        let mut buf: Vec<Complex64> =
            wave.channel(0).iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft.process(&mut buf);
        let peak = (0..n / 2)
            .max_by(|&a, &b| buf[a].norm().partial_cmp(&buf[b].norm()).unwrap())
            .unwrap();
        peak as f64 * wave.sample_rate_hz() as f64 / n as f64
    }

    #[test]
    fn ratio_one_is_identity() {
        let wave = tone(440.0, 4000, 16000);
        let out = resample(&wave, 1.0).unwrap();
        assert_eq!(out.len(), 4000);
        for (a, b) in wave.channel(0).iter().zip(out.channel(0).iter()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn output_length_rounds() {
        let wave = tone(440.0, 16000, 16000);
        assert_eq!(resample(&wave, 1.1).unwrap().len(), 14545);
        assert_eq!(resample(&wave, 0.9).unwrap().len(), 17778);
    }

    #[test]
    fn ratio_out_of_range_rejected() {
        let wave = tone(440.0, 1000, 16000);
        assert!(matches!(resample(&wave, 0.3), Err(SignalError::InvalidRatio(_))));
        assert!(matches!(resample(&wave, 2.5), Err(SignalError::InvalidRatio(_))));
        assert!(resample(&wave, f64::NAN).is_err());
    }

    #[test]
    fn tone_frequency_scales_with_ratio() {
        let wave = tone(440.0, 32000, 16000);
        let down = resample(&wave, 0.9).unwrap();
        let hz = dominant_hz(&down);
        assert!((hz - 396.0).abs() < 1.0, "got {hz}");
        let up = resample(&wave, 1.1).unwrap();
        let hz = dominant_hz(&up);
        assert!((hz - 484.0).abs() < 1.0, "got {hz}");
    }

    #[test]
    fn composition_error_below_minus_40_db() {
        // Band-limited input: random tones below 0.7 Nyquist.
        let fs = 16000;
        let len = 16000;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut samples = vec![0.0; len];
        for _ in 0..50 {
            let f = rng.gen_range(20.0..5600.0);
            let phase = rng.gen_range(0.0..2.0 * PI);
            let amp = rng.gen_range(0.1..1.0);
            for (n, s) in samples.iter_mut().enumerate() {
                *s += amp * (2.0 * PI * f * n as f64 / fs as f64 + phase).sin();
            }
        }
        let wave = Waveform::from_mono(samples, fs as u32).unwrap();
        for r in [0.9, 1.1] {
            let composed = resample(&resample(&wave, r).unwrap(), 1.0 / r).unwrap();
            let n = composed.len().min(wave.len());
            let margin = 2 * HALF_WIDTH;
            let mut err = 0.0;
            let mut sig = 0.0;
            for i in margin..(n - margin) {
                let d = composed.channel(0)[i] - wave.channel(0)[i];
                err += d * d;
                sig += wave.channel(0)[i] * wave.channel(0)[i];
            }
            assert!(err / sig < 1e-4, "ratio {r}: error energy {} dB", 10.0 * (err / sig).log10());
        }
    }
}
