//! Signature-(1,3) linear algebra on homogeneous coordinates.
//!
//! Points of hyperbolic 3-space are the projective classes of vectors with
//! `<x,x> < 0`; vectors with `<x,x> > 0` are outer points and double as poles
//! of planes. Everything here is scale invariant in each argument.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for classifying a vector by the sign of its normalized form value.
pub const CLASSIFY_EPS: f64 = 1e-10;

pub type Mat4 = Matrix4<f64>;

/// A vector of the Lorentz space `E^{1,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LorentzVec(pub [f64; 4]);

/// Position of a projective point relative to the absolute quadric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    Proper,
    Boundary,
    Outer,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointClass::Proper => "proper",
            PointClass::Boundary => "boundary",
            PointClass::Outer => "outer",
        })
    }
}

impl LorentzVec {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self([x0, x1, x2, x3])
    }

    /// Linear combination `sum coeffs[i] * basis[i]`.
    pub fn combination(coeffs: &[f64; 4], basis: &[LorentzVec; 4]) -> Self {
        let mut out = [0.0; 4];
        for (c, b) in coeffs.iter().zip(basis) {
            for (o, x) in out.iter_mut().zip(b.0) {
                *o += c * x;
            }
        }
        Self(out)
    }

    /// The form value `<x,x>`.
    pub fn norm(&self) -> f64 {
        bilinear(self, self)
    }

    pub fn euclidean_norm_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Representative with `<x,x> = -1` and positive time coordinate.
    fn unit_timelike(&self) -> Self {
        let s = (-self.norm()).sqrt();
        let s = if self.0[0] < 0.0 { -s } else { s };
        *self * (1.0 / s)
    }
}

impl Index<usize> for LorentzVec {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for LorentzVec {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for LorentzVec {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Mul<f64> for LorentzVec {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0.map(|x| x * rhs))
    }
}

impl Mul<LorentzVec> for f64 {
    type Output = LorentzVec;
    fn mul(self, rhs: LorentzVec) -> LorentzVec {
        rhs * self
    }
}

impl Neg for LorentzVec {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

/// `<x,y> = -x0 y0 + x1 y1 + x2 y2 + x3 y3`.
pub fn bilinear(x: &LorentzVec, y: &LorentzVec) -> f64 {
    -x.0[0] * y.0[0] + x.0[1] * y.0[1] + x.0[2] * y.0[2] + x.0[3] * y.0[3]
}

/// Classifies `x` by the sign of `<x,x> / |x|^2` with tolerance [`CLASSIFY_EPS`].
pub fn classify(x: &LorentzVec) -> Result<PointClass> {
    if x.max_abs() < CLASSIFY_EPS {
        return Err(Error::ZeroVector);
    }
    let q = x.norm() / x.euclidean_norm_sq();
    Ok(if q < -CLASSIFY_EPS {
        PointClass::Proper
    } else if q > CLASSIFY_EPS {
        PointClass::Outer
    } else {
        PointClass::Boundary
    })
}

fn require(x: &LorentzVec, class: PointClass, err: Error) -> Result<()> {
    if classify(x)? == class {
        Ok(())
    } else {
        Err(err)
    }
}

/// Hyperbolic distance between two proper points.
///
/// Mathematically `arcosh(|<x,y>| / sqrt(<x,x><y,y>))`; evaluated as
/// `2 arsinh(|x^ - y^| / 2)` on unit representatives, which stays accurate
/// for nearby points.
pub fn dist_pp(x: &LorentzVec, y: &LorentzVec) -> Result<f64> {
    require(x, PointClass::Proper, Error::NotProper)?;
    require(y, PointClass::Proper, Error::NotProper)?;
    let d = x.unit_timelike() - y.unit_timelike();
    let chord = d.norm().max(0.0).sqrt();
    Ok(2.0 * (chord / 2.0).asinh())
}

/// Distance from the proper point `x` to the plane whose pole is `plane`.
pub fn dist_pplane(x: &LorentzVec, plane: &LorentzVec) -> Result<f64> {
    require(x, PointClass::Proper, Error::NotProper)?;
    require(plane, PointClass::Outer, Error::DegeneratePlane)?;
    let s = bilinear(x, plane).abs() / (-x.norm() * plane.norm()).sqrt();
    Ok(s.asinh())
}

/// Inverse of a nonsingular 4x4 matrix.
///
/// The matrix counts as singular when `|det| <= 1e-14 * (max row norm)^4`.
pub fn invert4(b: &Mat4) -> Result<Mat4> {
    let max_row = b
        .row_iter()
        .map(|r| r.norm())
        .fold(0.0_f64, f64::max);
    let threshold = 1e-14 * max_row.powi(4);
    let det = b.determinant();
    if !(det.abs() > threshold) {
        return Err(Error::Singular { det, threshold });
    }
    b.try_inverse().ok_or(Error::Singular { det, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn proper_point(t: f64, theta: f64, phi: f64) -> LorentzVec {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        LorentzVec::new(t.cosh(), t.sinh() * st * cp, t.sinh() * st * sp, t.sinh() * ct)
    }

    prop_compose! {
        fn any_proper()(t in 0.0..3.0f64, th in 0.0..3.1f64, ph in 0.0..6.2f64) -> LorentzVec {
            proper_point(t, th, ph)
        }
    }

    prop_compose! {
        fn any_vec()(x in prop::array::uniform4(-5.0..5.0f64)) -> LorentzVec {
            LorentzVec(x)
        }
    }

    #[test]
    fn bilinear_basis_values() {
        let e0 = LorentzVec::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(bilinear(&e0, &e0), -1.0);
        assert_eq!(
            bilinear(&LorentzVec::new(0.0, 1.0, 0.0, 0.0), &LorentzVec::new(0.0, 0.0, 1.0, 0.0)),
            0.0
        );
        let null = LorentzVec::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(bilinear(&null, &null), 0.0);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&LorentzVec::new(1.0, 0.0, 0.0, 0.0)), Ok(PointClass::Proper));
        assert_eq!(classify(&LorentzVec::new(1.0, 1.0, 0.0, 0.0)), Ok(PointClass::Boundary));
        assert_eq!(classify(&LorentzVec::new(0.0, 1.0, 0.0, 0.0)), Ok(PointClass::Outer));
        assert_eq!(classify(&LorentzVec::new(0.0, 1e-12, 0.0, 0.0)), Err(Error::ZeroVector));
        // scale invariance, including negative representatives
        assert_eq!(classify(&LorentzVec::new(-1e6, 3e5, 0.0, 0.0)), Ok(PointClass::Proper));
    }

    #[test]
    fn distance_examples() {
        let o = LorentzVec::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(dist_pp(&o, &o).unwrap(), 0.0);
        let p = LorentzVec::new(1f64.cosh(), 1f64.sinh(), 0.0, 0.0);
        assert_abs_diff_eq!(dist_pp(&o, &p).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dist_pp(&(-2.0 * o), &(3.0 * p)).unwrap(), 1.0, epsilon = 1e-14);

        let plane = LorentzVec::new(0.0, 0.0, 1.0, 0.0);
        assert_eq!(dist_pplane(&p, &plane).unwrap(), 0.0);
        assert_eq!(dist_pplane(&o, &LorentzVec::new(0.0, 1.0, 0.0, 0.0)).unwrap(), 0.0);
        // plane x1 = tanh(1) x0 passes through p; o sits at distance 1 from it
        let through_p = LorentzVec::new(1f64.sinh(), 1f64.cosh(), 0.0, 0.0);
        assert_abs_diff_eq!(dist_pplane(&p, &through_p).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dist_pplane(&o, &through_p).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn distance_errors() {
        let o = LorentzVec::new(1.0, 0.0, 0.0, 0.0);
        let null = LorentzVec::new(1.0, 1.0, 0.0, 0.0);
        let outer = LorentzVec::new(0.0, 1.0, 0.0, 0.0);
        assert_eq!(dist_pp(&o, &null), Err(Error::NotProper));
        assert_eq!(dist_pp(&outer, &o), Err(Error::NotProper));
        assert_eq!(dist_pplane(&null, &outer), Err(Error::NotProper));
        assert_eq!(dist_pplane(&o, &null), Err(Error::DegeneratePlane));
        assert_eq!(dist_pplane(&o, &o), Err(Error::DegeneratePlane));
    }

    #[test]
    fn invert4_examples() {
        let id = Mat4::identity();
        assert_eq!(invert4(&id).unwrap(), id);
        let d = Mat4::from_diagonal(&nalgebra::Vector4::new(1.0, 2.0, 4.0, 8.0));
        let inv = invert4(&d).unwrap();
        let expected = Mat4::from_diagonal(&nalgebra::Vector4::new(1.0, 0.5, 0.25, 0.125));
        assert_abs_diff_eq!(inv, expected, epsilon = 1e-15);
        let mut s = Mat4::identity();
        s[(3, 3)] = 0.0;
        assert!(matches!(invert4(&s), Err(Error::Singular { .. })));
        let rank3 = Mat4::from_fn(|i, j| (i + j) as f64);
        assert!(matches!(invert4(&rank3), Err(Error::Singular { .. })));
    }

    proptest! {
        #[test]
        fn bilinear_symmetric_and_linear(x in any_vec(), y in any_vec(), z in any_vec(), a in -3.0..3.0f64) {
            prop_assert!((bilinear(&x, &y) - bilinear(&y, &x)).abs() < 1e-12);
            let lhs = bilinear(&(x * a + z), &y);
            let rhs = a * bilinear(&x, &y) + bilinear(&z, &y);
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }

        #[test]
        fn distances_projectively_invariant(x in any_proper(), y in any_proper(), p in any_vec(),
                                           s in prop_oneof![-4.0..-0.25f64, 0.25..4.0f64],
                                           t in prop_oneof![-4.0..-0.25f64, 0.25..4.0f64]) {
            let d = dist_pp(&x, &y).unwrap();
            prop_assert!((dist_pp(&(x * s), &(y * t)).unwrap() - d).abs() < 1e-12);
            prop_assert!((dist_pp(&y, &x).unwrap() - d).abs() < 1e-12);
            if classify(&p) == Ok(PointClass::Outer) {
                let e = dist_pplane(&x, &p).unwrap();
                prop_assert!((dist_pplane(&(x * s), &(p * t)).unwrap() - e).abs() < 1e-12);
            }
        }

        #[test]
        fn triangle_inequality(x in any_proper(), y in any_proper(), z in any_proper()) {
            let xy = dist_pp(&x, &y).unwrap();
            let yz = dist_pp(&y, &z).unwrap();
            let xz = dist_pp(&x, &z).unwrap();
            prop_assert!(xz <= xy + yz + 1e-12);
        }

        #[test]
        fn dist_pp_matches_arcosh_form(x in any_proper(), y in any_proper()) {
            let c = bilinear(&x, &y).abs() / (x.norm() * y.norm()).sqrt();
            let d = dist_pp(&x, &y).unwrap();
            // arcosh loses precision near 1; compare in cosh space instead
            prop_assert!((d.cosh() - c).abs() < 1e-10 * c);
        }
    }
}
