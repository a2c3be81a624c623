use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Elementwise reservoir nonlinearity together with its optimal Lipschitz constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Activation {
    #[default]
    Sine,
    Tanh,
    Logistic,
    Identity,
}

impl Activation {
    pub const ALL: [Activation; 4] = [
        Activation::Sine,
        Activation::Tanh,
        Activation::Logistic,
        Activation::Identity,
    ];

    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Sine => x.sin(),
            Activation::Tanh => x.tanh(),
            Activation::Logistic => 1.0 / (1.0 + (-x).exp()),
            Activation::Identity => x,
        }
    }

    /// The optimal Lipschitz constant `L` of the activation.
    pub fn lipschitz(self) -> f64 {
        match self {
            Activation::Sine | Activation::Tanh | Activation::Identity => 1.0,
            Activation::Logistic => 0.25,
        }
    }

    /// Closed output range, if bounded.
    pub fn range(self) -> Option<(f64, f64)> {
        match self {
            Activation::Sine | Activation::Tanh => Some((-1.0, 1.0)),
            Activation::Logistic => Some((0.0, 1.0)),
            Activation::Identity => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Sine => "sine",
            Activation::Tanh => "tanh",
            Activation::Logistic => "logistic",
            Activation::Identity => "identity",
        }
    }
}

/// Free-function form of [`Activation::apply`].
pub fn activate(a: Activation, x: f64) -> f64 {
    a.apply(x)
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sine" | "sin" => Ok(Activation::Sine),
            "tanh" => Ok(Activation::Tanh),
            "logistic" | "sigmoid" => Ok(Activation::Logistic),
            "identity" | "linear" => Ok(Activation::Identity),
            other => Err(Error::InvalidParameter(format!("unknown activation '{other}'"))),
        }
    }
}
