//! Ball centre cases: packing and covering radii, stabilizer orders and densities.
//!
//! Every case lists the distances from the centre that compete for the
//! optimal radius: the packing radius is the smallest of them, the covering
//! radius the largest. Each distance has a closed form in the Gram entries
//! and is cross-checked against the generic point and plane distances.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lorentz::{classify, dist_pp, dist_pplane, LorentzVec, PointClass};
use crate::orthoscheme::{angle_sum_vs_half, ConfigLabel, Order, OrthoParams, Orthoscheme};
use crate::points::{plane_pole, PlaneTag, PointTag};
use crate::volume::ball_volume;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Packing,
    Covering,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::Packing, Mode::Covering];
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Packing => "packing",
            Mode::Covering => "covering",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "packing" | "p" => Ok(Mode::Packing),
            "covering" | "c" => Ok(Mode::Covering),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

/// Ball centres. The letter is the case suffix of the case id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Centre {
    /// a: principal vertex `A3`
    A3,
    /// b: vertex `A2`
    A2,
    /// c: edge midpoint `F03`
    F03,
    /// d: edge midpoint `F12`
    F12,
    /// e: truncation point `Q`
    Q,
}

impl Centre {
    pub fn point(self) -> PointTag {
        match self {
            Centre::A3 => PointTag::A3,
            Centre::A2 => PointTag::A2,
            Centre::F03 => PointTag::F03,
            Centre::F12 => PointTag::F12,
            Centre::Q => PointTag::Q,
        }
    }
}

/// A centre case such as `1.s.i.a`: configuration plus centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    OneIA,
    OneSIA,
    OneIB,
    OneSIB,
    OneSIC,
    OneSID,
    OneIIA,
    OneIIB,
    TwoIB,
    TwoIIB,
    TwoSIIB,
    TwoSIIC,
    TwoSIID,
    TwoSIIE,
}

impl CaseId {
    pub const ALL: [CaseId; 14] = [
        CaseId::OneIA,
        CaseId::OneSIA,
        CaseId::OneIB,
        CaseId::OneSIB,
        CaseId::OneSIC,
        CaseId::OneSID,
        CaseId::OneIIA,
        CaseId::OneIIB,
        CaseId::TwoIB,
        CaseId::TwoIIB,
        CaseId::TwoSIIB,
        CaseId::TwoSIIC,
        CaseId::TwoSIID,
        CaseId::TwoSIIE,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::OneIA => "1.i.a",
            CaseId::OneSIA => "1.s.i.a",
            CaseId::OneIB => "1.i.b",
            CaseId::OneSIB => "1.s.i.b",
            CaseId::OneSIC => "1.s.i.c",
            CaseId::OneSID => "1.s.i.d",
            CaseId::OneIIA => "1.ii.a",
            CaseId::OneIIB => "1.ii.b",
            CaseId::TwoIB => "2.i.b",
            CaseId::TwoIIB => "2.ii.b",
            CaseId::TwoSIIB => "2.s.ii.b",
            CaseId::TwoSIIC => "2.s.ii.c",
            CaseId::TwoSIID => "2.s.ii.d",
            CaseId::TwoSIIE => "2.s.ii.e",
        }
    }

    pub fn centre(self) -> Centre {
        use CaseId::*;
        match self {
            OneIA | OneSIA | OneIIA => Centre::A3,
            OneIB | OneSIB | OneIIB | TwoIB | TwoIIB | TwoSIIB => Centre::A2,
            OneSIC | TwoSIIC => Centre::F03,
            OneSID | TwoSIID => Centre::F12,
            TwoSIIE => Centre::Q,
        }
    }

    pub fn configuration(self) -> ConfigLabel {
        use CaseId::*;
        match self {
            OneIA | OneIB => ConfigLabel::OneI,
            OneSIA | OneSIB | OneSIC | OneSID => ConfigLabel::OneSI,
            OneIIA | OneIIB => ConfigLabel::OneII,
            TwoIB => ConfigLabel::TwoI,
            TwoIIB => ConfigLabel::TwoII,
            TwoSIIB | TwoSIIC | TwoSIID | TwoSIIE => ConfigLabel::TwoSII,
        }
    }

    /// `.s.` cases need `u = w` and use the half-turn extended group.
    pub fn requires_symmetric(self) -> bool {
        matches!(
            self.configuration(),
            ConfigLabel::OneSI | ConfigLabel::TwoSII
        )
    }

    pub fn requires_a3_outer(self) -> bool {
        matches!(
            self.configuration(),
            ConfigLabel::TwoI | ConfigLabel::TwoII | ConfigLabel::TwoSII
        )
    }

    pub fn requires_a0_outer(self) -> bool {
        matches!(
            self.configuration(),
            ConfigLabel::OneII | ConfigLabel::TwoII | ConfigLabel::TwoSII
        )
    }

    /// Conditions on `1/u + 1/v` and `1/v + 1/w` relative to `1/2`.
    pub fn regime(self, mode: Mode) -> (Rel, Rel) {
        use CaseId::*;
        use Rel::*;
        match (self, mode) {
            (OneIA | OneSIA, Mode::Packing) => (Gt, Ge),
            (OneIA | OneSIA, Mode::Covering) => (Ge, Gt),
            (OneIB, Mode::Packing) => (Ge, Ge),
            (OneIB, Mode::Covering) => (Ge, Gt),
            (OneSIB | OneSIC | OneSID, _) => (Ge, Ge),
            (OneIIA, _) => (Gt, Lt),
            (OneIIB, Mode::Packing) => (Ge, Lt),
            (OneIIB, Mode::Covering) => (Gt, Lt),
            (TwoIB, Mode::Packing) => (Lt, Ge),
            (TwoIB, Mode::Covering) => (Lt, Gt),
            (TwoIIB | TwoSIIB | TwoSIIC | TwoSIID | TwoSIIE, _) => (Lt, Lt),
        }
    }

    /// Competing distances in the order the case lists them.
    pub fn candidates(self, mode: Mode) -> &'static [Span] {
        use CaseId::*;
        use Span::*;
        match (self, mode) {
            (OneIA, Mode::Packing) => &[A3A2],
            (OneIA, Mode::Covering) => &[A3A0],
            (OneSIA, Mode::Packing) => &[A3A2, A3F03],
            (OneSIA, Mode::Covering) => &[A3F12],
            (OneIB, Mode::Packing) => &[A2b2],
            (OneIB, Mode::Covering) => &[A2A3, A2A0],
            (OneSIB, Mode::Packing) => &[A2b2, A2F12],
            (OneSIB, Mode::Covering) => &[A2A3, A2F03],
            (OneSIC, Mode::Packing) => &[F03b0],
            (OneSIC, Mode::Covering) => &[F03A3, F03A2],
            (OneSID, Mode::Packing) => &[F12b2],
            (OneSID, Mode::Covering) => &[A3F12],
            (OneIIA, Mode::Packing) => &[A3A2, A3H],
            (OneIIA, Mode::Covering) => &[A3C],
            (OneIIB, Mode::Packing) => &[A2b2, A2L],
            (OneIIB, Mode::Covering) => &[A2C, A2A3, A2H],
            (TwoIB, Mode::Packing) => &[A2b2, A2Q],
            (TwoIB, Mode::Covering) => &[A2A0, A2J],
            (TwoIIB, Mode::Packing) => &[A2b2, A2Q, A2L],
            (TwoIIB, Mode::Covering) => &[A2C, A2H, A2J],
            (TwoSIIB, Mode::Packing) => &[A2b2, A2Q, A2F12],
            (TwoSIIB, Mode::Covering) => &[A2J, A2F03],
            (TwoSIIC, Mode::Packing) => &[F03b0, F03J],
            (TwoSIIC, Mode::Covering) => &[F03A2, F03Q],
            (TwoSIID, Mode::Packing) => &[F12b1, F12a3],
            (TwoSIID, Mode::Covering) => &[F12J, F12Q],
            (TwoSIIE, Mode::Packing) => &[QA2, QE, HalfQC],
            (TwoSIIE, Mode::Covering) => &[QF03, QF12],
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == t)
            .ok_or_else(|| Error::UnknownCase(t.to_string()))
    }
}

impl Serialize for CaseId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CaseId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Required relation of an angle sum to `1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Gt,
    Ge,
    Lt,
}

impl Rel {
    fn holds(self, o: Ordering) -> bool {
        match self {
            Rel::Gt => o == Ordering::Greater,
            Rel::Ge => o != Ordering::Less,
            Rel::Lt => o == Ordering::Less,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Lt => "<",
        }
    }
}

/// How the two ends of a distance are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ends {
    Points(PointTag, PointTag),
    PointPlane(PointTag, PlaneTag),
    /// Half the distance between two points.
    HalfPoints(PointTag, PointTag),
}

/// A distance from a case centre, named as printed (centre first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Span {
    A3A2,
    A3A0,
    A3F03,
    A3F12,
    A3H,
    A3C,
    A2b2,
    A2A3,
    A2A0,
    A2F12,
    A2F03,
    A2L,
    A2C,
    A2H,
    A2Q,
    A2J,
    F03b0,
    F03A3,
    F03A2,
    F03J,
    F03Q,
    F12b1,
    F12b2,
    F12a3,
    F12J,
    F12Q,
    QA2,
    QE,
    HalfQC,
    QF03,
    QF12,
}

impl Span {
    pub fn label(self) -> &'static str {
        use Span::*;
        match self {
            A3A2 => "A3A2",
            A3A0 => "A3A0",
            A3F03 => "A3F03",
            A3F12 => "A3F12",
            A3H => "A3H",
            A3C => "A3C",
            A2b2 => "A2b2",
            A2A3 => "A2A3",
            A2A0 => "A2A0",
            A2F12 => "A2F12",
            A2F03 => "A2F03",
            A2L => "A2L",
            A2C => "A2C",
            A2H => "A2H",
            A2Q => "A2Q",
            A2J => "A2J",
            F03b0 => "F03b0",
            F03A3 => "F03A3",
            F03A2 => "F03A2",
            F03J => "F03J",
            F03Q => "F03Q",
            F12b1 => "F12b1",
            F12b2 => "F12b2",
            F12a3 => "F12a3",
            F12J => "F12J",
            F12Q => "F12Q",
            QA2 => "QA2",
            QE => "QE",
            HalfQC => "QC/2",
            QF03 => "QF03",
            QF12 => "QF12",
        }
    }

    pub fn ends(self) -> Ends {
        use Ends::*;
        use PointTag as P;
        use Span::*;
        match self {
            A3A2 => Points(P::A3, P::A2),
            A3A0 => Points(P::A3, P::A0),
            A3F03 => Points(P::A3, P::F03),
            A3F12 => Points(P::A3, P::F12),
            A3H => Points(P::A3, P::H),
            A3C => Points(P::A3, P::C),
            A2b2 => PointPlane(P::A2, PlaneTag::Face(2)),
            A2A3 => Points(P::A2, P::A3),
            A2A0 => Points(P::A2, P::A0),
            A2F12 => Points(P::A2, P::F12),
            A2F03 => Points(P::A2, P::F03),
            A2L => Points(P::A2, P::L),
            A2C => Points(P::A2, P::C),
            A2H => Points(P::A2, P::H),
            A2Q => Points(P::A2, P::Q),
            A2J => Points(P::A2, P::J),
            F03b0 => PointPlane(P::F03, PlaneTag::Face(0)),
            F03A3 => Points(P::F03, P::A3),
            F03A2 => Points(P::F03, P::A2),
            F03J => Points(P::F03, P::J),
            F03Q => Points(P::F03, P::Q),
            F12b1 => PointPlane(P::F12, PlaneTag::Face(1)),
            F12b2 => PointPlane(P::F12, PlaneTag::Face(2)),
            F12a3 => PointPlane(P::F12, PlaneTag::Polar(3)),
            F12J => Points(P::F12, P::J),
            F12Q => Points(P::F12, P::Q),
            QA2 => Points(P::Q, P::A2),
            QE => Points(P::Q, P::E),
            HalfQC => HalfPoints(P::Q, P::C),
            QF03 => Points(P::Q, P::F03),
            QF12 => Points(P::Q, P::F12),
        }
    }

    /// Closed-form `cosh` of the distance (up to sign).
    pub fn closed_cosh(self, w: &Orthoscheme) -> f64 {
        use Span::*;
        let a = |i, j| w.gram.a(i, j);
        let t = &w.trig;
        let det = w.gram.det;
        let (cu, su, cv, sv) = (t.cu, t.su, t.cv, t.sv);
        let su2 = su * su;
        match self {
            A3A2 | A2A3 => -a(2, 3) / (a(2, 2) * a(3, 3)).sqrt(),
            A3A0 => -a(0, 3) / (a(0, 0) * a(3, 3)).sqrt(),
            A3F03 | F03A3 => (a(0, 3) / (2.0 * a(3, 3)) + 0.5).sqrt(),
            A3F12 => -(a(1, 3) + a(2, 3)) / (2.0 * a(3, 3) * (a(1, 2) + a(2, 2))).sqrt(),
            A3H => (1.0 - a(0, 3).powi(2) / (a(0, 0) * a(3, 3))).sqrt(),
            A3C => {
                (a(0, 1) * a(0, 3) - a(0, 0) * a(1, 3))
                    / (a(0, 0) * a(3, 3) * (a(1, 1) * a(0, 0) - a(0, 1).powi(2))).sqrt()
            }
            A2b2 => (1.0 - 1.0 / a(2, 2)).sqrt(),
            A2A0 => -a(0, 2) / (a(0, 0) * a(2, 2)).sqrt(),
            A2F12 => (a(1, 2) / (2.0 * a(2, 2)) + 0.5).sqrt(),
            A2F03 | F03A2 => -(a(0, 2) + a(2, 3)) / (2.0 * a(2, 2) * (a(3, 3) + a(0, 3))).sqrt(),
            A2L => (1.0 - a(0, 2).powi(2) / (a(0, 0) * a(2, 2))).sqrt(),
            A2C => {
                (a(0, 1) * a(0, 2) - a(1, 2) * a(0, 0))
                    / (a(0, 0) * a(2, 2) * (a(1, 1) * a(0, 0) - a(0, 1).powi(2))).sqrt()
            }
            A2H => {
                (a(0, 2) * a(0, 3) - a(2, 3) * a(0, 0))
                    / (a(0, 0) * a(2, 2) * (a(3, 3) * a(0, 0) - a(0, 3).powi(2))).sqrt()
            }
            A2Q | QA2 => 1.0 / a(3, 3).sqrt(),
            A2J => {
                (a(0, 3) * a(2, 3) - a(0, 2) * a(3, 3))
                    / (a(3, 3) * a(2, 2) * (a(3, 3) * a(0, 0) - a(0, 3).powi(2))).sqrt()
            }
            F03b0 => (1.0 + (cv - su2) / (2.0 * (1.0 - cv))).sqrt(),
            F03J => sv / (2.0 * det * a(3, 3) * (a(3, 3) + a(0, 3))).sqrt(),
            F03Q | QF03 => cu / su * cv / (2.0 * det * a(3, 3) * (a(3, 3) + a(0, 3))).sqrt(),
            F12b1 | F12b2 => (1.0 + (cv - su2) / 2.0).sqrt(),
            F12a3 => (1.0 + cu * cu * (cv + su2) / (2.0 * (cv * cv - su2))).sqrt(),
            F12J => cu * (1.0 + cv) / (sv * (2.0 * a(3, 3) * (cv + su2)).sqrt()),
            F12Q | QF12 => ((cv + su2) / (2.0 * a(3, 3) * su2)).sqrt(),
            QE => cv / su,
            HalfQC => (0.5 + a(1, 2) / (2.0 * a(2, 2) * a(3, 3))).sqrt(),
        }
    }

    /// Closed-form distance; `None` where the expression leaves its domain.
    pub fn closed_distance(self, w: &Orthoscheme) -> Option<f64> {
        let c = self.closed_cosh(w).abs();
        if !c.is_finite() {
            return None;
        }
        // round-off may push a zero distance just below 1
        Some(c.max(1.0).acosh())
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Exact class of an essential point where the parameters decide it,
/// numeric classification otherwise. `None` if the point does not exist.
pub fn point_class(w: &Orthoscheme, tag: PointTag) -> Option<PointClass> {
    let p = w.params;
    match tag {
        PointTag::A0 => Some(w.vertex_class(0)),
        PointTag::A1 => Some(w.vertex_class(1)),
        PointTag::A2 => Some(w.vertex_class(2)),
        PointTag::A3 => Some(w.vertex_class(3)),
        PointTag::F03 if p.v.is_infinite() && p.is_symmetric() => Some(PointClass::Boundary),
        PointTag::C if p.w.is_infinite() => w.points().get(tag).map(|_| PointClass::Boundary),
        PointTag::Q if p.u.is_infinite() => w.points().get(tag).map(|_| PointClass::Boundary),
        PointTag::H | PointTag::J if p.v.is_infinite() => {
            w.points().get(tag).map(|_| PointClass::Boundary)
        }
        _ => w.points().get(tag).map(|q| classify(&q.vec).unwrap_or(PointClass::Boundary)),
    }
}

fn point_vec(w: &Orthoscheme, tag: PointTag) -> Option<LorentzVec> {
    w.points().get(tag).map(|p| p.vec)
}

/// Outcome of one candidate distance.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Reach {
    Finite(f64),
    /// An endpoint lies on the absolute.
    Infinite,
}

fn inapplicable(w: &Orthoscheme, case: CaseId, mode: Mode, reason: String) -> Error {
    Error::CaseInapplicable { params: w.params, case, mode, reason }
}

fn reach(w: &Orthoscheme, case: CaseId, mode: Mode, span: Span) -> Result<Reach> {
    let tags = match span.ends() {
        Ends::Points(x, y) | Ends::HalfPoints(x, y) => vec![x, y],
        Ends::PointPlane(x, _) => vec![x],
    };
    for tag in tags {
        match point_class(w, tag) {
            None => return Err(inapplicable(w, case, mode, format!("point {tag} does not exist"))),
            Some(PointClass::Boundary) => return Ok(Reach::Infinite),
            Some(PointClass::Outer) => {
                return Err(inapplicable(w, case, mode, format!("point {tag} is not proper")))
            }
            Some(PointClass::Proper) => {}
        }
    }
    span.closed_distance(w)
        .map(Reach::Finite)
        .ok_or_else(|| inapplicable(w, case, mode, format!("closed form for {span} is undefined")))
}

/// Checks the configuration regime, symmetry and centre for a case.
pub fn check_applicable(w: &Orthoscheme, case: CaseId, mode: Mode) -> Result<()> {
    let p = w.params;
    if case.requires_symmetric() && !p.is_symmetric() {
        return Err(Error::NotSymmetric { params: p, case });
    }
    let centre = case.centre().point();
    let centre_class = point_class(w, centre);
    // a ball centred on the absolute has no covering radius, whatever the regime
    if mode == Mode::Covering && centre_class == Some(PointClass::Boundary) {
        return Err(Error::CoveringUndefined { params: p, case, witness: centre.to_string() });
    }
    let (r_uv, r_vw) = case.regime(mode);
    let o_uv = angle_sum_vs_half(p.u, p.v);
    let o_vw = angle_sum_vs_half(p.v, p.w);
    if !(r_uv.holds(o_uv) && r_vw.holds(o_vw)) {
        let reason = format!(
            "{mode} regime requires 1/u+1/v {} 1/2 and 1/v+1/w {} 1/2",
            r_uv.symbol(),
            r_vw.symbol()
        );
        return Err(inapplicable(w, case, mode, reason));
    }
    match centre_class {
        Some(PointClass::Proper) => Ok(()),
        Some(class) => Err(inapplicable(w, case, mode, format!("centre {centre} is {class}"))),
        None => Err(inapplicable(w, case, mode, format!("centre {centre} does not exist"))),
    }
}

/// Optimal radius of a case on an orthoscheme, with the realizing distance.
pub fn radius_on(w: &Orthoscheme, case: CaseId, mode: Mode) -> Result<(f64, Span)> {
    check_applicable(w, case, mode)?;
    let mut best: Option<(f64, Span)> = None;
    for &span in case.candidates(mode) {
        let d = match (reach(w, case, mode, span)?, mode) {
            (Reach::Finite(d), _) => d,
            (Reach::Infinite, Mode::Packing) => continue,
            (Reach::Infinite, Mode::Covering) => {
                return Err(Error::CoveringUndefined {
                    params: w.params,
                    case,
                    witness: span.label().to_string(),
                })
            }
        };
        let better = match (best, mode) {
            (None, _) => true,
            (Some((b, _)), Mode::Packing) => d < b,
            (Some((b, _)), Mode::Covering) => d > b,
        };
        if better {
            best = Some((d, span));
        }
    }
    best.ok_or_else(|| inapplicable(w, case, mode, "every candidate distance is infinite".into()))
}

pub fn radius(params: OrthoParams, case: CaseId, mode: Mode) -> Result<(f64, Span)> {
    radius_on(&Orthoscheme::new(params)?, case, mode)
}

/// Stabilizer order of the ball centre as a reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabOrder {
    pub num: u64,
    pub den: u64,
    /// The half-turn extension halves the order in `.s.` cases.
    pub halved: bool,
}

impl StabOrder {
    fn new(num: u64, den: u64, halved: bool) -> Self {
        let g = num.gcd(&den);
        StabOrder { num: num / g, den: den / g, halved }
    }

    /// Order in the Coxeter group.
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Order used in the density, halved in `.s.` cases.
    pub fn effective(&self) -> f64 {
        if self.halved {
            self.value() / 2.0
        } else {
            self.value()
        }
    }
}

impl fmt::Display for StabOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

pub fn stabilizer(params: OrthoParams, case: CaseId) -> Result<StabOrder> {
    let infinite = Error::InfiniteStabilizer { params, case };
    let finite = |o: Order| match o {
        Order::Finite(n) => Ok(n as u64),
        Order::Infinite => Err(infinite.clone()),
    };
    let halved = case.requires_symmetric();
    let (num, den) = match case.centre() {
        Centre::A3 => {
            let (u, v) = (finite(params.u)? as i64, finite(params.v)? as i64);
            let den = 4 - (u - 2) * (v - 2);
            if den <= 0 {
                return Err(infinite);
            }
            (8 * u as u64 * v as u64, den as u64)
        }
        Centre::A2 | Centre::Q => (4 * finite(params.u)?, 1),
        Centre::F03 => (4 * finite(params.v)?, 1),
        Centre::F12 => (8, 1),
    };
    Ok(StabOrder::new(num, den, halved))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub params: OrthoParams,
    pub case_id: CaseId,
    pub mode: Mode,
    pub radius: f64,
    pub vol_w: f64,
    pub vol_ball: f64,
    pub stab: StabOrder,
    pub density: f64,
    pub witness: String,
}

pub fn evaluate_on(w: &Orthoscheme, case: CaseId, mode: Mode) -> Result<CaseResult> {
    let (radius, span) = radius_on(w, case, mode)?;
    let stab = stabilizer(w.params, case)?;
    let vol_w = w.volume()?;
    let vol_ball = ball_volume(radius)?;
    Ok(CaseResult {
        params: w.params,
        case_id: case,
        mode,
        radius,
        vol_w,
        vol_ball,
        stab,
        density: vol_ball / (stab.effective() * vol_w),
        witness: span.label().to_string(),
    })
}

pub fn evaluate(params: OrthoParams, case: CaseId, mode: Mode) -> Result<CaseResult> {
    evaluate_on(&Orthoscheme::new(params)?, case, mode)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanCheck {
    pub span: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub deviation: f64,
}

/// Closed forms of a case's candidate distances against the generic
/// distance routines on the constructed points and planes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusReport {
    pub checks: Vec<SpanCheck>,
    pub max_deviation: f64,
}

fn oracle_distance(w: &Orthoscheme, span: Span) -> Option<f64> {
    match span.ends() {
        Ends::Points(x, y) => dist_pp(&point_vec(w, x)?, &point_vec(w, y)?).ok(),
        Ends::HalfPoints(x, y) => dist_pp(&point_vec(w, x)?, &point_vec(w, y)?).ok().map(|d| d / 2.0),
        Ends::PointPlane(x, plane) => dist_pplane(&point_vec(w, x)?, &plane_pole(w, plane)).ok(),
    }
}

/// Spans with a boundary or missing endpoint are skipped.
pub fn verify_radius_on(w: &Orthoscheme, case: CaseId, mode: Mode) -> RadiusReport {
    let mut checks = vec![];
    for &span in case.candidates(mode) {
        if !matches!(reach(w, case, mode, span), Ok(Reach::Finite(_))) {
            continue;
        }
        let (Some(closed_form), Some(oracle)) = (span.closed_distance(w), oracle_distance(w, span)) else {
            checks.push(SpanCheck {
                span: span.label().to_string(),
                closed_form: f64::NAN,
                oracle: f64::NAN,
                deviation: f64::INFINITY,
            });
            continue;
        };
        checks.push(SpanCheck {
            span: span.label().to_string(),
            closed_form,
            oracle,
            deviation: (closed_form - oracle).abs(),
        });
    }
    let max_deviation = checks.iter().map(|c| c.deviation).fold(0.0, f64::max);
    RadiusReport { checks, max_deviation }
}

pub fn verify_radius(params: OrthoParams, case: CaseId, mode: Mode) -> Result<RadiusReport> {
    Ok(verify_radius_on(&Orthoscheme::new(params)?, case, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(u: u32, v: u32, w: u32) -> OrthoParams {
        OrthoParams::finite(u, v, w).unwrap()
    }

    fn sweep() -> Vec<Orthoscheme> {
        let orders: Vec<Order> = (3..=9).map(Order::Finite).chain([Order::Infinite]).collect();
        let mut out = vec![];
        for &u in &orders {
            for &v in &orders {
                for &w in &orders {
                    if let Ok(p) = OrthoParams::new(u, v, w) {
                        out.push(Orthoscheme::new(p).unwrap());
                    }
                }
            }
        }
        out
    }

    #[test]
    fn case_id_round_trip() {
        for c in CaseId::ALL {
            assert_eq!(c.as_str().parse::<CaseId>().unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(serde_json::from_str::<CaseId>(&json).unwrap(), c);
        }
        assert_eq!("2.i.e".parse::<CaseId>(), Err(Error::UnknownCase("2.i.e".into())));
    }

    #[test]
    fn radius_examples() {
        let (r, s) = radius(p(5, 3, 5), CaseId::OneSIA, Mode::Packing).unwrap();
        assert_abs_diff_eq!(r, 0.95142, epsilon = 5e-6);
        assert_eq!(s, Span::A3F03);
        let (r, s) = radius(p(5, 3, 5), CaseId::OneSIA, Mode::Covering).unwrap();
        assert_abs_diff_eq!(r, 1.12484, epsilon = 5e-6);
        assert_eq!(s, Span::A3F12);
        let (r, _) = radius(p(7, 3, 3), CaseId::TwoIB, Mode::Packing).unwrap();
        assert_abs_diff_eq!(r, 0.70133, epsilon = 5e-6);
    }

    #[test]
    fn half_edge_identity() {
        let w = Orthoscheme::new(p(5, 3, 5)).unwrap();
        let r = Span::A3F03.closed_distance(&w).unwrap();
        let full = dist_pp(&w.vertices[0], &w.vertices[3]).unwrap();
        assert_abs_diff_eq!(r, 0.5 * full, epsilon = 1e-12);
    }

    #[test]
    fn stabilizer_examples() {
        let s = stabilizer(p(5, 3, 5), CaseId::OneSIA).unwrap();
        assert_eq!((s.num, s.den, s.halved), (120, 1, true));
        assert_eq!(s.effective(), 60.0);
        assert_eq!(stabilizer(p(4, 3, 5), CaseId::OneIA).unwrap().value(), 48.0);
        for case in [CaseId::OneSID, CaseId::TwoSIID] {
            assert_eq!(stabilizer(p(5, 4, 5), case).unwrap().value(), 8.0);
        }
        assert_eq!(stabilizer(p(7, 3, 3), CaseId::TwoIB).unwrap().value(), 28.0);
        assert_eq!(stabilizer(p(4, 5, 4), CaseId::TwoSIIE).unwrap().value(), 16.0);
        assert_eq!(stabilizer(p(3, 5, 3), CaseId::OneSIC).unwrap().value(), 20.0);
        assert_eq!(
            stabilizer(p(7, 3, 3), CaseId::OneIA),
            Err(Error::InfiniteStabilizer { params: p(7, 3, 3), case: CaseId::OneIA })
        );
    }

    #[test]
    fn evaluate_examples() {
        let r = evaluate(p(5, 3, 5), CaseId::OneSIA, Mode::Packing).unwrap();
        assert_abs_diff_eq!(r.density, 0.77147, epsilon = 5e-6);
        let r = evaluate(p(5, 3, 5), CaseId::OneSIA, Mode::Covering).unwrap();
        assert_abs_diff_eq!(r.density, 1.36893, epsilon = 5e-6);
        let r = evaluate(p(3, 5, 3), CaseId::OneIA, Mode::Packing).unwrap();
        assert_abs_diff_eq!(r.density, 0.68003, epsilon = 5e-6);
        let r = evaluate(p(3, 5, 3), CaseId::OneSIC, Mode::Packing).unwrap();
        assert_abs_diff_eq!(r.density, 0.62355, epsilon = 1e-5);
    }

    #[test]
    fn regime_and_symmetry_gating() {
        let e = evaluate(p(4, 4, 4), CaseId::OneSIA, Mode::Packing).unwrap_err();
        assert!(matches!(e, Error::CaseInapplicable { .. }), "{e}");
        let e = evaluate(p(4, 3, 5), CaseId::OneSIA, Mode::Packing).unwrap_err();
        assert!(matches!(e, Error::NotSymmetric { .. }));
    }

    #[test]
    fn boundary_a3_covering_undefined() {
        let e = evaluate(p(6, 3, 6), CaseId::OneSIA, Mode::Covering).unwrap_err();
        assert!(matches!(e, Error::CoveringUndefined { .. }), "{e}");
        for w in [3, 4, 5, 7] {
            let params = p(6, 3, w);
            let o = Orthoscheme::new(params).unwrap();
            assert_eq!(o.vertex_class(3), PointClass::Boundary);
            let e = evaluate(params, CaseId::OneIA, Mode::Covering).unwrap_err();
            assert!(matches!(e, Error::CoveringUndefined { .. }), "{e}");
            assert!(matches!(
                evaluate(params, CaseId::OneIA, Mode::Packing),
                Err(Error::CaseInapplicable { .. })
            ));
        }
    }

    #[test]
    fn exact_point_classes_agree_with_numeric() {
        for w in sweep() {
            for q in w.points().iter() {
                let exact = point_class(&w, q.tag).unwrap();
                let numeric = classify(&q.vec).unwrap();
                if q.tag == PointTag::F03 && !w.params.is_symmetric() {
                    continue;
                }
                assert_eq!(exact, numeric, "{} {}", w.params, q.tag);
            }
        }
    }

    #[test]
    fn closed_forms_match_oracle_over_sweep() {
        let mut checked = 0;
        for w in sweep() {
            for case in CaseId::ALL {
                for mode in Mode::BOTH {
                    if check_applicable(&w, case, mode).is_err() {
                        continue;
                    }
                    let report = verify_radius_on(&w, case, mode);
                    checked += report.checks.len();
                    assert!(report.max_deviation < 1e-10, "{} {case} {mode}: {report:?}", w.params);
                }
            }
        }
        assert!(checked > 500);
    }

    #[test]
    fn verify_examples() {
        let r = verify_radius(p(5, 3, 5), CaseId::OneIA, Mode::Packing).unwrap();
        assert!(r.max_deviation < 1e-10);
        let params = OrthoParams::new(Order::Finite(3), Order::Finite(3), Order::Infinite).unwrap();
        let r = verify_radius(params, CaseId::OneIIA, Mode::Packing).unwrap();
        assert!(r.checks.iter().any(|c| c.span == "A3H"));
        assert!(r.max_deviation < 1e-10);
        let r = verify_radius(p(5, 4, 5), CaseId::TwoSIIC, Mode::Covering).unwrap();
        assert!(r.checks.iter().any(|c| c.span == "F03Q"));
        assert!(r.max_deviation < 1e-10);
    }

    #[test]
    fn candidate_order_does_not_change_radius() {
        for w in sweep() {
            for case in CaseId::ALL {
                for mode in Mode::BOTH {
                    let Ok((r, _)) = radius_on(&w, case, mode) else { continue };
                    let ds: Vec<f64> = case
                        .candidates(mode)
                        .iter()
                        .rev()
                        .filter_map(|&s| match reach(&w, case, mode, s) {
                            Ok(Reach::Finite(d)) => Some(d),
                            _ => None,
                        })
                        .collect();
                    let alt = match mode {
                        Mode::Packing => ds.iter().cloned().fold(f64::INFINITY, f64::min),
                        Mode::Covering => ds.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                    };
                    assert_eq!(r, alt);
                }
            }
        }
    }

    #[test]
    fn packing_below_covering() {
        for w in sweep() {
            for case in CaseId::ALL {
                let (Ok(pk), Ok(cv)) = (radius_on(&w, case, Mode::Packing), radius_on(&w, case, Mode::Covering)) else {
                    continue;
                };
                assert!(pk.0 <= cv.0 + 1e-12, "{} {case}", w.params);
            }
        }
    }
}
