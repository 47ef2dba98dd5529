//! Truncation points, edge midpoints and foot points of a complete orthoscheme.
//!
//! When `A0` is outer its polar plane cuts the edges `A0A1`, `A0A2`, `A0A3`
//! in `C`, `L`, `H`; when `A3` is outer its polar plane cuts `A3A0`, `A3A1`,
//! `A3A2` in `J`, `E`, `Q`. `F03`, `F12` are the edge midpoints used by the
//! half-turn symmetric cases and `K` is the midpoint of `A2Q`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{bilinear, classify, LorentzVec, PointClass};
use crate::orthoscheme::{GramPair, Orthoscheme, Trig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointTag {
    A0,
    A1,
    A2,
    A3,
    C,
    L,
    H,
    J,
    E,
    Q,
    K,
    F03,
    F12,
    /// Foot of the perpendicular from vertex `A_vertex` onto the face plane `b^plane`.
    Foot { vertex: usize, plane: usize },
}

impl fmt::Display for PointTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointTag::Foot { vertex, plane } => write!(f, "A{vertex}^{plane}"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// A plane given by its pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlaneTag {
    /// Face plane `b^i` of the orthoscheme.
    Face(usize),
    /// Polar plane of the outer principal vertex `A_i` (`i` is 0 or 3).
    Polar(usize),
}

impl fmt::Display for PlaneTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneTag::Face(i) => write!(f, "b{i}"),
            PlaneTag::Polar(i) => write!(f, "a{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EssentialPoint {
    pub tag: PointTag,
    pub vec: LorentzVec,
    /// `<vec, vec>`
    pub norm: f64,
}

impl EssentialPoint {
    fn new(tag: PointTag, vec: LorentzVec) -> Self {
        EssentialPoint { tag, vec, norm: vec.norm() }
    }

    pub fn class(&self) -> PointClass {
        classify(&self.vec).unwrap_or(PointClass::Boundary)
    }
}

fn is_outer(v: &LorentzVec) -> bool {
    classify(v) == Ok(PointClass::Outer)
}

/// `C, L, H` on the polar plane of an outer `A0`.
pub fn truncation_points_a0(g: &GramPair, verts: &[LorentzVec; 4]) -> Result<[EssentialPoint; 3]> {
    if !is_outer(&verts[0]) {
        return Err(Error::NotTruncated { vertex: 0 });
    }
    let a00 = g.a(0, 0);
    let cut = |i: usize| verts[i] - verts[0] * (g.a(0, i) / a00);
    Ok([
        EssentialPoint::new(PointTag::C, cut(1)),
        EssentialPoint::new(PointTag::L, cut(2)),
        EssentialPoint::new(PointTag::H, cut(3)),
    ])
}

/// `J, E, Q` on the polar plane of an outer `A3`.
pub fn truncation_points_a3(g: &GramPair, verts: &[LorentzVec; 4]) -> Result<[EssentialPoint; 3]> {
    if !is_outer(&verts[3]) {
        return Err(Error::NotTruncated { vertex: 3 });
    }
    let a33 = g.a(3, 3);
    let cut = |i: usize| verts[i] - verts[3] * (g.a(i, 3) / a33);
    Ok([
        EssentialPoint::new(PointTag::J, cut(0)),
        EssentialPoint::new(PointTag::E, cut(1)),
        EssentialPoint::new(PointTag::Q, cut(2)),
    ])
}

/// `F03 = a0 + a3` and `F12 = a1 + a2`.
///
/// These are midpoints because the vertex vectors carry the normalization
/// `<a_i, a_i> = a_ii`, with `a00 = a33` and `a11 = a22` when `u = w`.
pub fn midpoints(verts: &[LorentzVec; 4]) -> [EssentialPoint; 2] {
    [
        EssentialPoint::new(PointTag::F03, verts[0] + verts[3]),
        EssentialPoint::new(PointTag::F12, verts[1] + verts[2]),
    ]
}

/// Midpoint `K` of `A2Q`: the sum of the unit representatives of `a2` and `q`.
pub fn midpoint_k(g: &GramPair, verts: &[LorentzVec; 4], q: &LorentzVec) -> Result<EssentialPoint> {
    if !is_outer(&verts[3]) {
        return Err(Error::NotTruncated { vertex: 3 });
    }
    let qq = q.norm();
    let a22 = g.a(2, 2);
    if !(qq < 0.0 && a22 < 0.0) {
        return Err(Error::NotProper);
    }
    let k = verts[2] * (1.0 / (-a22).sqrt()) + *q * (1.0 / (-qq).sqrt());
    Ok(EssentialPoint::new(PointTag::K, k))
}

/// Foot of the perpendicular from `x` onto the plane with pole `plane`.
pub fn foot_point(x: &LorentzVec, plane: &LorentzVec) -> Result<LorentzVec> {
    match classify(plane)? {
        PointClass::Boundary => Err(Error::DegeneratePlane),
        _ => Ok(*x - *plane * (bilinear(x, plane) / plane.norm())),
    }
}

/// Closed-form norms of the essential points, as functions of the Gram data.
///
/// Returns `None` for tags without a closed form (vertices have `a_ii`).
pub fn closed_norm(tag: PointTag, g: &GramPair, t: &Trig) -> Option<f64> {
    let a = |i, j| g.a(i, j);
    let det = g.det;
    Some(match tag {
        PointTag::A0 => a(0, 0),
        PointTag::A1 => a(1, 1),
        PointTag::A2 => a(2, 2),
        PointTag::A3 => a(3, 3),
        PointTag::C => a(1, 1) / a(0, 0),
        PointTag::L => 1.0 / (det * a(0, 0)),
        PointTag::H => t.sv * t.sv / (det * a(0, 0)),
        PointTag::J => t.sv * t.sv / (det * a(3, 3)),
        PointTag::E => 1.0 / (det * a(3, 3)),
        PointTag::Q => a(2, 2) / a(3, 3),
        PointTag::K => -2.0 * (1.0 + (1.0 / a(3, 3)).sqrt()),
        // 2(a00 + a03) and 2(a11 + a12) once u = w
        PointTag::F03 => a(0, 0) + 2.0 * a(0, 3) + a(3, 3),
        PointTag::F12 => a(1, 1) + 2.0 * a(1, 2) + a(2, 2),
        PointTag::Foot { .. } => return None,
    })
}

/// All essential points of one orthoscheme; truncation points exist only
/// for outer principal vertices.
#[derive(Debug, Clone)]
pub struct EssentialPoints {
    pub vertices: [EssentialPoint; 4],
    pub f03: EssentialPoint,
    pub f12: EssentialPoint,
    pub a0_truncation: Option<[EssentialPoint; 3]>,
    pub a3_truncation: Option<[EssentialPoint; 3]>,
    pub k: Option<EssentialPoint>,
}

impl EssentialPoints {
    pub fn new(w: &Orthoscheme) -> Self {
        let tags = [PointTag::A0, PointTag::A1, PointTag::A2, PointTag::A3];
        let vertices = std::array::from_fn(|i| EssentialPoint::new(tags[i], w.vertices[i]));
        let [f03, f12] = midpoints(&w.vertices);
        let a0_truncation = truncation_points_a0(&w.gram, &w.vertices).ok();
        let a3_truncation = truncation_points_a3(&w.gram, &w.vertices).ok();
        let k = a3_truncation
            .as_ref()
            .and_then(|[_, _, q]| midpoint_k(&w.gram, &w.vertices, &q.vec).ok());
        EssentialPoints { vertices, f03, f12, a0_truncation, a3_truncation, k }
    }

    pub fn get(&self, tag: PointTag) -> Option<&EssentialPoint> {
        match tag {
            PointTag::A0 => Some(&self.vertices[0]),
            PointTag::A1 => Some(&self.vertices[1]),
            PointTag::A2 => Some(&self.vertices[2]),
            PointTag::A3 => Some(&self.vertices[3]),
            PointTag::F03 => Some(&self.f03),
            PointTag::F12 => Some(&self.f12),
            PointTag::C => self.a0_truncation.as_ref().map(|p| &p[0]),
            PointTag::L => self.a0_truncation.as_ref().map(|p| &p[1]),
            PointTag::H => self.a0_truncation.as_ref().map(|p| &p[2]),
            PointTag::J => self.a3_truncation.as_ref().map(|p| &p[0]),
            PointTag::E => self.a3_truncation.as_ref().map(|p| &p[1]),
            PointTag::Q => self.a3_truncation.as_ref().map(|p| &p[2]),
            PointTag::K => self.k.as_ref(),
            PointTag::Foot { .. } => None,
        }
    }

    /// All points present for this orthoscheme.
    pub fn iter(&self) -> impl Iterator<Item = &EssentialPoint> {
        self.vertices
            .iter()
            .chain([&self.f03, &self.f12])
            .chain(self.a0_truncation.iter().flatten())
            .chain(self.a3_truncation.iter().flatten())
            .chain(self.k.iter())
    }
}

/// Pole vector of a plane of the orthoscheme.
pub fn plane_pole(w: &Orthoscheme, plane: PlaneTag) -> LorentzVec {
    match plane {
        PlaneTag::Face(i) => w.poles[i],
        PlaneTag::Polar(i) => w.vertices[i],
    }
}
