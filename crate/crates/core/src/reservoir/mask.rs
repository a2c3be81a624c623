use rand::Rng;

use crate::error::{invalid, Result};
use crate::signal::Signal;

/// Input multiplexing mask with entries in `{+1, -1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexMask(Vec<f64>);

impl MultiplexMask {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("mask length must be at least 1"));
        }
        if values.iter().any(|&v| v != 1.0 && v != -1.0) {
            return Err(invalid("mask entries must be exactly +1 or -1"));
        }
        Ok(MultiplexMask(values))
    }

    /// Mask of `len` independent fair ±1 draws.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<Self> {
        let values = (0..len)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        MultiplexMask::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Expand each raw sample `z_k` into the block `z_k · m`, concatenated in order.
pub fn apply_mask(raw: &Signal, mask: &MultiplexMask) -> Signal {
    let m = mask.values();
    let values = raw
        .iter()
        .flat_map(|&z| m.iter().map(move |&s| z * s))
        .collect();
    Signal::new(values).expect("mask expansion of a valid signal is valid")
}
