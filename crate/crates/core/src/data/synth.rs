use std::f64::consts::PI;

use rand::Rng;

use crate::dataset::LabeledDataset;
use crate::error::{invalid, Result};
use crate::rng::seeded_rng;
use crate::signal::Signal;

/// Class template: a sinusoid around 0.5 whose frequency and phase depend on
/// the class, with amplitude `0.4 · separation` (capped at 0.5).
fn template(class: usize, class_count: usize, len: usize, separation: f64) -> Vec<f64> {
    let amp = (0.4 * separation).min(0.5);
    let freq = (class + 1) as f64;
    let phase = PI * class as f64 / class_count as f64;
    (0..len)
        .map(|t| 0.5 + amp * (2.0 * PI * freq * t as f64 / len as f64 + phase).sin())
        .collect()
}

/// Deterministic synthetic classification set with values in `[0, 1]`.
///
/// Signal `j` belongs to class `j / per_class`. Each signal is its class
/// template plus i.i.d. uniform noise on `[-noise, noise]`, clipped to `[0, 1]`.
pub fn synth_dataset(
    class_count: usize,
    per_class: usize,
    length: usize,
    class_separation: f64,
    noise: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if class_count == 0 || per_class == 0 || length == 0 {
        return Err(invalid("class count, per-class count and length must be positive"));
    }
    if !(class_separation.is_finite() && class_separation >= 0.0 && noise.is_finite() && noise >= 0.0) {
        return Err(invalid("separation and noise must be finite and non-negative"));
    }
    let mut rng = seeded_rng(seed);
    let mut signals = Vec::with_capacity(class_count * per_class);
    let mut labels = Vec::with_capacity(class_count * per_class);
    for k in 0..class_count {
        let base = template(k, class_count, length, class_separation);
        for _ in 0..per_class {
            let values = base
                .iter()
                .map(|&v| {
                    let jitter = if noise > 0.0 { rng.random_range(-noise..=noise) } else { 0.0 };
                    (v + jitter).clamp(0.0, 1.0)
                })
                .collect();
            signals.push(Signal::new(values)?);
            labels.push(k);
        }
    }
    LabeledDataset::from_labeled(signals, &labels, class_count)
}
