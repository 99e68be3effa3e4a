//! Small shared pieces of the report schemas: complex numbers serialize as
//! `[re, im]` pairs everywhere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexPair(pub [f64; 2]);

impl From<Complex64> for ComplexPair {
    fn from(z: Complex64) -> Self {
        ComplexPair([z.re, z.im])
    }
}

impl From<ComplexPair> for Complex64 {
    fn from(p: ComplexPair) -> Self {
        Complex64::new(p.0[0], p.0[1])
    }
}

impl ComplexPair {
    pub fn re(self) -> f64 {
        self.0[0]
    }

    pub fn im(self) -> f64 {
        self.0[1]
    }
}

impl std::fmt::Display for ComplexPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [re, im] = self.0;
        if im >= 0.0 {
            write!(f, "{re:.6}+{im:.6}i")
        } else {
            write!(f, "{re:.6}-{:.6}i", -im)
        }
    }
}
