use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Basis ordering used by the four-level model.
pub const G1: usize = 0;
pub const G2: usize = 1;
pub const H: usize = 2;
pub const R: usize = 3;

/// Amplitudes of the atom-only part of the state on {|g₁⟩, |g₂⟩, |h⟩, |r⟩}.
///
/// The squared norm is the probability that no photon has been emitted (or,
/// for a receiver, that the incoming photon has been taken up); it shrinks
/// under the anti-Hermitian decay of |r⟩.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AtomState {
    pub c_g1: C64,
    pub c_g2: C64,
    pub c_h: C64,
    pub c_r: C64,
}

impl AtomState {
    pub fn g1() -> Self {
        Self {
            c_g1: C64::new(1.0, 0.0),
            ..Self::default()
        }
    }

    pub fn g2() -> Self {
        Self {
            c_g2: C64::new(1.0, 0.0),
            ..Self::default()
        }
    }

    pub fn r() -> Self {
        Self {
            c_r: C64::new(1.0, 0.0),
            ..Self::default()
        }
    }

    /// No amplitude in the atom-only sector. A receiver waiting in |g₂⟩ with
    /// the photon still in flight starts here.
    pub fn vacant() -> Self {
        Self::default()
    }

    pub fn to_array(self) -> [C64; 4] {
        [self.c_g1, self.c_g2, self.c_h, self.c_r]
    }

    pub fn from_array(a: [C64; 4]) -> Self {
        Self {
            c_g1: a[G1],
            c_g2: a[G2],
            c_h: a[H],
            c_r: a[R],
        }
    }

    pub fn populations(&self) -> [f64; 4] {
        self.to_array().map(|c| c.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.populations().iter().sum()
    }
}
