//! Lobachevsky function, the orthoscheme volume formula and ball volumes.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radicands down to this value are treated as the `B = 0` limit.
const RADICAND_CLAMP: f64 = -1e-12;

/// Essential angles `pi/u`, `pi/v`, `pi/w` of an orthoscheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    pub alpha01: f64,
    pub alpha12: f64,
    pub alpha23: f64,
}

impl Angles {
    pub fn new(alpha01: f64, alpha12: f64, alpha23: f64) -> Self {
        Angles { alpha01, alpha12, alpha23 }
    }

    pub fn mirrored(&self) -> Self {
        Angles { alpha01: self.alpha23, alpha12: self.alpha12, alpha23: self.alpha01 }
    }
}

/// `|B_2n| / (2n (2n+1)!)` for `n = 1..=30`.
const CLAUSEN_COEFFS: [f64; 30] = [
    1.388_888_888_888_889e-2,
    6.944_444_444_444_444e-5,
    7.873519778281683e-7,
    1.1482216343327454e-8,
    1.897_886_998_897_1e-10,
    3.387_301_370_953_521e-12,
    6.372_636_443_183_181e-14,
    1.2462059912950672e-15,
    2.5105444608999546e-17,
    5.178_258_806_090_623e-19,
    1.0887357368300849e-20,
    2.325_744_114_302_087e-22,
    5.035_195_213_147_39e-24,
    1.1026499294381215e-25,
    2.4386585509007345e-27,
    5.440_142_678_856_253e-29,
    1.2228340131217352e-30,
    2.767_263_468_967_951e-32,
    6.3000905918320139e-34,
    1.4420868388418475e-35,
    3.3170939991595428e-37,
    7.663_913_557_920_658e-39,
    1.7778714733830658e-40,
    4.1396058982341373e-42,
    9.671_557_036_081_102e-44,
    2.2667187016766124e-45,
    5.327956311328254e-47,
    1.2557248389564336e-48,
    2.967_000_542_247_094e-50,
    7.026_787_317_600_742e-52,
];

/// Clausen function `Cl2(t)` for `|t| <= pi`.
fn clausen_reduced(t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let t2 = t * t;
    // Horner in t^2, terms shrink at least as fast as 4^-n on [-pi, pi]
    let mut acc = 0.0;
    for c in CLAUSEN_COEFFS.iter().rev() {
        acc = acc * t2 + c;
    }
    t - t * t.abs().ln() + acc * t2 * t
}

/// Lobachevsky function `L(x) = -int_0^x log|2 sin t| dt`.
///
/// Odd and `pi`-periodic. Evaluated as `Cl2(2x) / 2` with the argument
/// reduced to `[-pi, pi]`.
pub fn lobachevsky(x: f64) -> f64 {
    let r = x - PI * (x / PI).round();
    0.5 * clausen_reduced(2.0 * r)
}

/// `theta` in `[0, pi/2)` with
/// `tan(theta) = sqrt(cos^2 a12 - sin^2 a01 sin^2 a23) / (cos a01 cos a23)`.
pub fn theta(angles: &Angles) -> Result<f64> {
    let Angles { alpha01, alpha12, alpha23 } = *angles;
    let mut radicand = alpha12.cos().powi(2) - (alpha01.sin() * alpha23.sin()).powi(2);
    if radicand < 0.0 {
        if radicand < RADICAND_CLAMP {
            return Err(Error::ThetaUndefined { radicand });
        }
        radicand = 0.0;
    }
    Ok(radicand.sqrt().atan2(alpha01.cos() * alpha23.cos()))
}

/// Volume of the orthoscheme with essential angles `angles`.
pub fn orthoscheme_volume(angles: &Angles) -> Result<f64> {
    let t = theta(angles)?;
    let Angles { alpha01: a, alpha12: b, alpha23: c } = *angles;
    let l = lobachevsky;
    let sum = l(a + t) - l(a - t)
        + l(FRAC_PI_2 + b - t)
        + l(FRAC_PI_2 - b - t)
        + l(c + t)
        - l(c - t)
        + 2.0 * l(FRAC_PI_2 - t);
    Ok(0.25 * sum)
}

/// Volume `pi (sinh 2r - 2r)` of a hyperbolic ball of radius `r`.
pub fn ball_volume(r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::NegativeRadius(r));
    }
    let x = 2.0 * r;
    if x > 0.5 {
        return Ok(PI * (x.sinh() - x));
    }
    // sinh x - x summed directly to avoid cancellation
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = 0.0;
    let mut k = 3.0;
    while term > sum * 1e-17 && term > 0.0 {
        sum += term;
        term *= x2 / ((k + 1.0) * (k + 2.0));
        k += 2.0;
    }
    Ok(PI * sum)
}
