//! Coxeter orthoschemes `W_{uvw}`: Coxeter-Schläfli matrix, its inverse,
//! concrete vertex and pole vectors, and the configuration of the principal
//! vertices `A0` and `A3`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::SymmetricEigen;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lorentz::{invert4, LorentzVec, Mat4, PointClass};
use crate::points::EssentialPoints;
use crate::volume::{self, Angles};

/// Margin required in `cos(pi/v) - sin(pi/u) sin(pi/w) > 0`; the only
/// Euclidean triple in range, (4,3,4), sits at exactly zero.
const HYPERBOLIC_MARGIN: f64 = 1e-12;

/// An extended natural number `>= 3` or infinity, the branch order of a
/// dihedral angle `pi/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn new(n: u32) -> Result<Self> {
        if n >= 3 {
            Ok(Order::Finite(n))
        } else {
            Err(Error::InvalidOrder(n.to_string()))
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }

    /// The dihedral angle `pi/n`, zero for infinity.
    pub fn angle(self) -> f64 {
        match self {
            Order::Finite(n) => PI / n as f64,
            Order::Infinite => 0.0,
        }
    }

    pub fn cos(self) -> f64 {
        match self {
            Order::Finite(_) => self.angle().cos(),
            Order::Infinite => 1.0,
        }
    }

    pub fn sin(self) -> f64 {
        match self {
            Order::Finite(_) => self.angle().sin(),
            Order::Infinite => 0.0,
        }
    }

    /// `1/n` as an exact fraction `(numerator, denominator)`.
    fn reciprocal(self) -> (u64, u64) {
        match self {
            Order::Finite(n) => (1, n as u64),
            Order::Infinite => (0, 1),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Order::Finite(n) => n as f64,
            Order::Infinite => f64::INFINITY,
        }
    }
}

/// Exact comparison of `1/p + 1/q` with `1/2`.
pub fn angle_sum_vs_half(p: Order, q: Order) -> Ordering {
    let (n1, d1) = p.reciprocal();
    let (n2, d2) = q.reciprocal();
    (2 * (n1 * d2 + n2 * d1)).cmp(&(d1 * d2))
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" | "+inf" => Ok(Order::Infinite),
            _ => t
                .parse::<u32>()
                .map_err(|_| Error::InvalidOrder(t.to_string()))
                .and_then(Order::new),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_u32(*n),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(OrderVisitor)
    }
}

struct OrderVisitor;

impl<'de> Visitor<'de> for OrderVisitor {
    type Value = Order;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer >= 3 or \"inf\"")
    }

    fn visit_u64<E: de::Error>(self, n: u64) -> std::result::Result<Order, E> {
        u32::try_from(n)
            .map_err(|_| E::custom(format!("order {n} out of range")))
            .and_then(|n| Order::new(n).map_err(E::custom))
    }

    fn visit_i64<E: de::Error>(self, n: i64) -> std::result::Result<Order, E> {
        u64::try_from(n)
            .map_err(|_| E::custom(Error::InvalidOrder(n.to_string())))
            .and_then(|n| self.visit_u64(n))
    }

    // csv hands over "inf" as a float
    fn visit_f64<E: de::Error>(self, x: f64) -> std::result::Result<Order, E> {
        if x == f64::INFINITY {
            Ok(Order::Infinite)
        } else if x.fract() == 0.0 && x >= 0.0 {
            self.visit_u64(x as u64)
        } else {
            Err(E::custom(Error::InvalidOrder(x.to_string())))
        }
    }

    fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Order, E> {
        s.parse().map_err(E::custom)
    }
}

/// The parameter triple `(u, v, w)` of `W_{uvw}`, checked for hyperbolicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrthoParams {
    pub u: Order,
    pub v: Order,
    pub w: Order,
}

impl OrthoParams {
    pub fn new(u: Order, v: Order, w: Order) -> Result<Self> {
        let p = OrthoParams { u, v, w };
        if p.v.cos() - p.u.sin() * p.w.sin() > HYPERBOLIC_MARGIN {
            Ok(p)
        } else {
            Err(Error::NotHyperbolic(p))
        }
    }

    /// Convenience constructor for finite triples.
    pub fn finite(u: u32, v: u32, w: u32) -> Result<Self> {
        Self::new(Order::new(u)?, Order::new(v)?, Order::new(w)?)
    }

    pub fn is_symmetric(&self) -> bool {
        self.u == self.w
    }

    /// The triple `(w, v, u)`, realizing the `0,1 <-> 3,2` relabelling.
    pub fn mirrored(&self) -> Self {
        OrthoParams { u: self.w, v: self.v, w: self.u }
    }

    pub fn trig(&self) -> Trig {
        Trig {
            cu: self.u.cos(),
            su: self.u.sin(),
            cv: self.v.cos(),
            sv: self.v.sin(),
            cw: self.w.cos(),
            sw: self.w.sin(),
        }
    }

    pub fn angles(&self) -> Angles {
        Angles {
            alpha01: self.u.angle(),
            alpha12: self.v.angle(),
            alpha23: self.w.angle(),
        }
    }
}

impl fmt::Display for OrthoParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.u, self.v, self.w)
    }
}

impl FromStr for OrthoParams {
    type Err = Error;

    /// Parses `u,v,w` with optional surrounding parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidOrder(s.to_string()));
        }
        OrthoParams::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?)
    }
}

/// Cosines and sines of `pi/u`, `pi/v`, `pi/w` with exact limit values at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trig {
    pub cu: f64,
    pub su: f64,
    pub cv: f64,
    pub sv: f64,
    pub cw: f64,
    pub sw: f64,
}

/// The Coxeter-Schläfli matrix `b`, its inverse `a` and `det b`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramPair {
    pub b: Mat4,
    pub a: Mat4,
    /// `det b = sin^2(pi/u) sin^2(pi/w) - cos^2(pi/v)`, negative.
    pub det: f64,
}

impl GramPair {
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[(i, j)]
    }

    pub fn b(&self, i: usize, j: usize) -> f64 {
        self.b[(i, j)]
    }
}

/// Builds `b` from the dihedral angles and `a` from its closed-form inverse.
pub fn gram(params: &OrthoParams) -> Result<GramPair> {
    let t = params.trig();
    if !(t.cv - t.su * t.sw > HYPERBOLIC_MARGIN) {
        return Err(Error::NotHyperbolic(*params));
    }
    #[rustfmt::skip]
    let b = Mat4::new(
        1.0,   -t.cu, 0.0,   0.0,
        -t.cu, 1.0,   -t.cv, 0.0,
        0.0,   -t.cv, 1.0,   -t.cw,
        0.0,   0.0,   -t.cw, 1.0,
    );
    let (su2, sw2, cv2) = (t.su * t.su, t.sw * t.sw, t.cv * t.cv);
    let det = su2 * sw2 - cv2;
    #[rustfmt::skip]
    let adj = Mat4::new(
        sw2 - cv2,          t.cu * sw2, t.cu * t.cv, t.cu * t.cv * t.cw,
        t.cu * sw2,         sw2,        t.cv,        t.cw * t.cv,
        t.cu * t.cv,        t.cv,       su2,         t.cw * su2,
        t.cu * t.cv * t.cw, t.cw * t.cv, t.cw * su2, su2 - cv2,
    );
    Ok(GramPair { b, a: adj / det, det })
}

/// Numeric inverse of `b`, the independent route to `a`.
pub fn gram_numeric_inverse(g: &GramPair) -> Result<Mat4> {
    invert4(&g.b)
}

/// Vertex vectors `a_0..a_3` with `<a_i, a_j> = a_ij`.
///
/// Realized through the spectral decomposition `a = V diag(l) V^T`: the
/// single negative eigenvalue supplies the time-like coordinate.
pub fn vertices(g: &GramPair) -> Result<[LorentzVec; 4]> {
    let eig = SymmetricEigen::new(g.a);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let l = |k: usize| eig.eigenvalues[order[k]];
    if !(l(0) < 0.0 && l(1) > 0.0) {
        return Err(Error::FactorizationFailed);
    }
    let mut x = Mat4::from_fn(|i, k| eig.eigenvectors[(i, order[k])] * l(k).abs().sqrt());
    // The eigenvectors are only accurate to ~1e-8 relative for some triples;
    // Newton steps X += E X^-T J / 2 on X J X^T = a restore full precision.
    let j = Mat4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0));
    let scale = g.a.abs().max();
    for _ in 0..4 {
        let e = g.a - x * j * x.transpose();
        if e.abs().max() <= 1e-15 * scale {
            break;
        }
        let inv_t = x.transpose().try_inverse().ok_or(Error::FactorizationFailed)?;
        x += e * inv_t * j * 0.5;
    }
    Ok(std::array::from_fn(|i| LorentzVec(std::array::from_fn(|k| x[(i, k)]))))
}

/// Plane poles `b^i = sum_j b^{ij} a_j`, dual to the vertices.
pub fn poles(g: &GramPair, verts: &[LorentzVec; 4]) -> [LorentzVec; 4] {
    std::array::from_fn(|i| {
        let row: [f64; 4] = std::array::from_fn(|j| g.b(i, j));
        LorentzVec::combination(&row, verts)
    })
}

/// Main configuration of the principal vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConfigLabel {
    #[serde(rename = "1.i")]
    OneI,
    #[serde(rename = "1.s.i")]
    OneSI,
    #[serde(rename = "1.ii")]
    OneII,
    #[serde(rename = "2.i")]
    TwoI,
    #[serde(rename = "2.ii")]
    TwoII,
    #[serde(rename = "2.s.ii")]
    TwoSII,
}

impl fmt::Display for ConfigLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfigLabel::OneI => "1.i",
            ConfigLabel::OneSI => "1.s.i",
            ConfigLabel::OneII => "1.ii",
            ConfigLabel::TwoI => "2.i",
            ConfigLabel::TwoII => "2.ii",
            ConfigLabel::TwoSII => "2.s.ii",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub a0_class: PointClass,
    pub a3_class: PointClass,
    pub symmetric: bool,
    pub label: ConfigLabel,
}

fn class_from_angle_sum(p: Order, q: Order) -> PointClass {
    match angle_sum_vs_half(p, q) {
        Ordering::Greater => PointClass::Proper,
        Ordering::Equal => PointClass::Boundary,
        Ordering::Less => PointClass::Outer,
    }
}

/// Classifies `A0` and `A3` by the exact angle-sum tests.
pub fn configure(params: &OrthoParams) -> Configuration {
    let a3_class = class_from_angle_sum(params.u, params.v);
    let a0_class = class_from_angle_sum(params.v, params.w);
    let symmetric = params.is_symmetric();
    let a0_outer = a0_class == PointClass::Outer;
    let label = match (a3_class == PointClass::Outer, a0_outer, symmetric) {
        (false, false, false) => ConfigLabel::OneI,
        (false, false, true) => ConfigLabel::OneSI,
        (false, true, _) => ConfigLabel::OneII,
        (true, false, _) => ConfigLabel::TwoI,
        (true, true, false) => ConfigLabel::TwoII,
        (true, true, true) => ConfigLabel::TwoSII,
    };
    Configuration { a0_class, a3_class, symmetric, label }
}

/// Everything derived from one parameter triple, with the essential points
/// and the volume computed on first use.
#[derive(Debug)]
pub struct Orthoscheme {
    pub params: OrthoParams,
    pub trig: Trig,
    pub gram: GramPair,
    pub vertices: [LorentzVec; 4],
    pub poles: [LorentzVec; 4],
    pub config: Configuration,
    points: OnceLock<EssentialPoints>,
    volume: OnceLock<Result<f64>>,
}

impl Orthoscheme {
    pub fn new(params: OrthoParams) -> Result<Self> {
        let gram = gram(&params)?;
        let vertices = vertices(&gram)?;
        let poles = poles(&gram, &vertices);
        Ok(Orthoscheme {
            params,
            trig: params.trig(),
            config: configure(&params),
            gram,
            vertices,
            poles,
            points: OnceLock::new(),
            volume: OnceLock::new(),
        })
    }

    /// Class of vertex `A_i`. `A1` and `A2` are boundary exactly when `w`
    /// resp. `u` is infinite (`a11 ~ sin^2(pi/w)`, `a22 ~ sin^2(pi/u)`).
    pub fn vertex_class(&self, i: usize) -> PointClass {
        match i {
            0 => self.config.a0_class,
            1 if self.params.w.is_infinite() => PointClass::Boundary,
            2 if self.params.u.is_infinite() => PointClass::Boundary,
            1 | 2 => PointClass::Proper,
            3 => self.config.a3_class,
            _ => panic!("vertex index {i} out of range"),
        }
    }

    pub fn points(&self) -> &EssentialPoints {
        self.points.get_or_init(|| EssentialPoints::new(self))
    }

    pub fn volume(&self) -> Result<f64> {
        self.volume
            .get_or_init(|| volume::orthoscheme_volume(&self.params.angles()))
            .clone()
    }
}
