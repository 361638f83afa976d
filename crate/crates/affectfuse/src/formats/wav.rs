//! 16-bit PCM WAV input and output.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use affectfuse_core::dataset::AudioSignal;

use super::FormatError;

const FULL_SCALE: f64 = 32768.0;

/// Decoder errors. The file itself was opened by the caller, so read failures
/// here mean truncated or malformed content.
fn wav_error(path: &Path, e: hound::Error) -> FormatError {
    match e {
        hound::Error::Unsupported => FormatError::UnsupportedEncoding {
            path: path.into(),
            detail: "format not handled by the decoder".into(),
        },
        other => FormatError::CorruptHeader {
            path: path.into(),
            detail: other.to_string(),
        },
    }
}

/// Reads mono or stereo 16-bit integer PCM. Stereo frames are averaged and
/// samples divided by 32768.
pub fn load_wav(path: &Path) -> Result<AudioSignal, FormatError> {
    let file = File::open(path).map_err(|e| FormatError::io(path, e))?;
    let reader = hound::WavReader::new(BufReader::new(file)).map_err(|e| wav_error(path, e))?;
    let spec = reader.spec();
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(FormatError::UnsupportedEncoding {
            path: path.into(),
            detail: format!("{:?} {}-bit", spec.sample_format, spec.bits_per_sample),
        });
    }
    let channels = usize::from(spec.channels);
    if !(1..=2).contains(&channels) {
        return Err(FormatError::UnsupportedEncoding {
            path: path.into(),
            detail: format!("{channels} channels"),
        });
    }
    let raw = reader
        .into_samples::<i16>()
        .collect::<Result<Vec<i16>, _>>()
        .map_err(|e| wav_error(path, e))?;
    let samples: Vec<f64> = raw
        .chunks_exact(channels)
        .map(|frame| {
            frame.iter().map(|&s| f64::from(s)).sum::<f64>() / (channels as f64 * FULL_SCALE)
        })
        .collect();
    AudioSignal::new(samples, f64::from(spec.sample_rate)).map_err(|source| FormatError::Dataset {
        path: path.into(),
        source,
    })
}

/// Writes mono 16-bit PCM, rounding `s * 32768` and saturating at the type range.
pub fn write_wav(path: &Path, samples: &[f64], sample_rate_hz: u32) -> Result<(), FormatError> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: sample_rate_hz,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let write_err = |e: hound::Error| match e {
        hound::Error::IoError(source) => FormatError::io(path, source),
        other => FormatError::io(path, std::io::Error::other(other.to_string())),
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(write_err)?;
    for &s in samples {
        let q = (s * FULL_SCALE).round().clamp(-FULL_SCALE, FULL_SCALE - 1.0) as i16;
        writer.write_sample(q).map_err(write_err)?;
    }
    writer.finalize().map_err(write_err)
}
