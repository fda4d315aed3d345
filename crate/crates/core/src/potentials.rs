//! Built-in test potentials.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::domain::{DelayParameter, PotentialPair};
use crate::error::{Error, Result};

/// Reproducible fixtures: zero, a real pair and a complex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestPotential {
    /// `q = p = 0`
    P0,
    /// `q = sin t`, `p = cos 2t`
    P1,
    /// `q = sin t + 0.5 i t`, `p = i cos t`
    P2,
}

impl TestPotential {
    pub const ALL: [TestPotential; 3] = [Self::P0, Self::P1, Self::P2];

    pub fn q(self, t: f64) -> Complex64 {
        match self {
            Self::P0 => Complex64::new(0.0, 0.0),
            Self::P1 => Complex64::new(t.sin(), 0.0),
            Self::P2 => Complex64::new(t.sin(), 0.5 * t),
        }
    }

    pub fn p(self, t: f64) -> Complex64 {
        match self {
            Self::P0 => Complex64::new(0.0, 0.0),
            Self::P1 => Complex64::new((2.0 * t).cos(), 0.0),
            Self::P2 => Complex64::new(0.0, t.cos()),
        }
    }

    /// Samples the pair on `cells` subintervals of `[a, π]`.
    pub fn sample(self, a: DelayParameter, cells: usize) -> Result<PotentialPair> {
        PotentialPair::from_fns(a, cells, |t| self.q(t), |t| self.p(t))
    }
}

impl fmt::Display for TestPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::P0 => "P0",
            Self::P1 => "P1",
            Self::P2 => "P2",
        };
        f.write_str(s)
    }
}

impl FromStr for TestPotential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P0" | "ZERO" => Ok(Self::P0),
            "P1" => Ok(Self::P1),
            "P2" => Ok(Self::P2),
            _ => Err(Error::Input(format!("unknown test potential `{s}`"))),
        }
    }
}
