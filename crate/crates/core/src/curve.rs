//! Isotopy classes of essential simple closed curves in finitely-supported
//! intersection/twist coordinates relative to the base decomposition.
//!
//! A curve is either a base curve `gamma:<j>` of the chart, or a crossing
//! curve recorded by its nonzero coordinates `j -> (m, t)`: `m` is the
//! geometric intersection number with the base curve `j`, `t` the twist.
//! The coordinate vector is the canonical normal form; two curves are
//! isotopic exactly when their fields coincide.
//!
//! Twist sign convention: right-handed twists are positive.  All modules
//! and tests use this convention.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{CurveId, PantsId, Subsurface, SurfaceModel, WindowKind};
use crate::slope::{gcd, Slope};

/// Coordinate pair at one base curve: intersection count and twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CurveCoord {
    pub m: u64,
    pub t: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Curve {
    base: Option<CurveId>,
    coords: BTreeMap<CurveId, CurveCoord>,
}

impl Curve {
    /// The base curve `gamma:<j>` itself.
    pub fn base(j: CurveId) -> Curve {
        Curve { base: Some(j), coords: BTreeMap::new() }
    }

    /// The curve of the given slope inside the window of `site`.
    /// Slope `1/0` is the base curve of the site.
    pub fn window(model: &SurfaceModel, site: CurveId, slope: Slope) -> Curve {
        if slope.is_base() {
            return Curve::base(site);
        }
        let m = match model.window_kind(site) {
            WindowKind::Torus => slope.den() as u64,
            WindowKind::Sphere => 2 * slope.den() as u64,
        };
        Curve {
            base: None,
            coords: BTreeMap::from([(site, CurveCoord { m, t: slope.num() })]),
        }
    }

    /// General coordinate curve.  Entries must have `m > 0` and satisfy
    /// the per-pants parity condition.
    pub fn from_coords(model: &SurfaceModel, coords: BTreeMap<CurveId, CurveCoord>) -> Result<Curve> {
        if coords.is_empty() {
            return Err(Error::Parse("coordinate curve needs at least one entry".into()));
        }
        if coords.values().any(|c| c.m == 0) {
            return Err(Error::Parse("coordinate entries must have m > 0".into()));
        }
        let curve = Curve { base: None, coords };
        for p in curve.carried_pants(model) {
            let mv = slot_m_values(model, std::slice::from_ref(&curve), p);
            if !(mv[0] + mv[1] + mv[2]).is_multiple_of(2) {
                return Err(Error::ParityViolation(p));
            }
        }
        Ok(curve)
    }

    pub fn as_base(&self) -> Option<CurveId> {
        self.base
    }

    pub fn coords(&self) -> &BTreeMap<CurveId, CurveCoord> {
        &self.coords
    }

    /// Intersection number with the base curve `c`.
    pub fn m_at(&self, c: CurveId) -> u64 {
        self.coords.get(&c).map_or(0, |cc| cc.m)
    }

    pub fn t_at(&self, c: CurveId) -> i64 {
        self.coords.get(&c).map_or(0, |cc| cc.t)
    }

    /// Interprets a single-site curve as (site, slope).
    pub fn as_window(&self, model: &SurfaceModel) -> Option<(CurveId, Slope)> {
        if let Some(j) = self.base {
            return Some((j, Slope::BASE));
        }
        if self.coords.len() != 1 {
            return None;
        }
        let (&site, cc) = self.coords.iter().next().unwrap();
        let den = match model.window_kind(site) {
            WindowKind::Torus => cc.m,
            WindowKind::Sphere => {
                if cc.m % 2 != 0 {
                    return None;
                }
                cc.m / 2
            }
        };
        if den == 0 || gcd(cc.t.unsigned_abs(), den) != 1 {
            return None;
        }
        Some((site, Slope::new(cc.t, den as i64).ok()?))
    }

    /// Pants cells the curve passes through (none for a base curve, which
    /// lies on a gluing curve rather than inside cells).
    pub fn carried_pants(&self, model: &SurfaceModel) -> BTreeSet<PantsId> {
        let mut out = BTreeSet::new();
        for &site in self.coords.keys() {
            let ((p1, _), (p2, _)) = model.curve_sides(site);
            out.insert(p1);
            out.insert(p2);
        }
        out
    }

    /// Whether the curve intersects the subsurface.  A base curve on the
    /// boundary of `sub` meets it.
    pub fn meets(&self, model: &SurfaceModel, sub: &Subsurface) -> bool {
        if let Some(j) = self.base {
            let ((p1, _), (p2, _)) = model.curve_sides(j);
            return sub.contains_pants(p1) || sub.contains_pants(p2);
        }
        self.carried_pants(model).iter().any(|&p| sub.contains_pants(p))
    }

    /// Whether the curve lies inside the subsurface.  A base curve on the
    /// boundary of `sub` is not contained in it.
    pub fn contained_in(&self, model: &SurfaceModel, sub: &Subsurface) -> bool {
        if let Some(j) = self.base {
            return sub.contains_curve_interior(model, j);
        }
        self.carried_pants(model).iter().all(|&p| sub.contains_pants(p))
    }

    /// Applies a twist with exponent `e` along base curve `j`.
    pub(crate) fn twisted(&self, j: CurveId, e: i64) -> Curve {
        let mut out = self.clone();
        if let Some(cc) = out.coords.get_mut(&j) {
            cc.t += e * cc.m as i64;
        }
        out
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            Some(j) => write!(f, "gamma:{j}"),
            None => {
                write!(f, "{{")?;
                for (i, (j, cc)) in self.coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{j}:({},{})", cc.m, cc.t)?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Curve> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("gamma:") {
            let j: CurveId = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad base curve index `{rest}`")))?;
            return Ok(Curve::base(j));
        }
        let inner = s
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| {
                Error::Parse(format!(
                    "curve literal `{s}` is neither gamma:<j> nor {{j:(m,t),...}}"
                ))
            })?;
        let mut coords = BTreeMap::new();
        for part in inner.split("),") {
            let part = part.trim().trim_end_matches(')');
            if part.is_empty() {
                continue;
            }
            let (j, mt) = part
                .split_once(":(")
                .ok_or_else(|| Error::Parse(format!("bad coordinate entry `{part}`")))?;
            let (m, t) = mt
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad coordinate pair `{mt}`")))?;
            let j: CurveId = j.trim().parse().map_err(|_| Error::Parse(format!("bad site `{j}`")))?;
            let m: u64 = m.trim().parse().map_err(|_| Error::Parse(format!("bad m `{m}`")))?;
            let t: i64 = t.trim().parse().map_err(|_| Error::Parse(format!("bad t `{t}`")))?;
            if m == 0 {
                return Err(Error::Parse("coordinate entries must have m > 0".into()));
            }
            coords.insert(j, CurveCoord { m, t });
        }
        if coords.is_empty() {
            return Err(Error::Parse("empty coordinate curve".into()));
        }
        Ok(Curve { base: None, coords })
    }
}

impl Serialize for Curve {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Curve, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Restriction of a disjoint curve family to a subsurface: per-pants
/// normal-arc multiplicities, coordinates at interior base curves,
/// crossing counts at the boundary, and closed components parallel to
/// base curves (including boundary-parallel ones).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RestrictionData {
    pub arcs: BTreeMap<PantsId, BTreeMap<(u8, u8), u64>>,
    pub interior: BTreeMap<CurveId, CurveCoord>,
    pub crossings: BTreeMap<CurveId, u64>,
    pub closed: BTreeMap<CurveId, u64>,
}

impl RestrictionData {
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
            && self.interior.is_empty()
            && self.crossings.is_empty()
            && self.closed.is_empty()
    }
}

fn slot_m_values(model: &SurfaceModel, curves: &[Curve], p: PantsId) -> [u64; 3] {
    let slots = model.pants_slots(p);
    let mut mv = [0u64; 3];
    for (i, &c) in slots.iter().enumerate() {
        mv[i] = curves.iter().map(|cv| cv.m_at(c)).sum();
    }
    mv
}

/// Normal-arc counts in one pants from its three slot intersection counts:
/// the unique consistent half-sum solution, with same-slot arcs taking up
/// the slack when the triangle inequality fails.
fn resolve_arcs(mv: [u64; 3]) -> BTreeMap<(u8, u8), u64> {
    let m = [mv[0] as i64, mv[1] as i64, mv[2] as i64];
    let mut out = BTreeMap::new();
    let mut put = |a: u8, b: u8, v: i64| {
        if v > 0 {
            out.insert((a.min(b), a.max(b)), v as u64);
        }
    };
    // at most one slot can exceed the sum of the other two
    let mut excess = None;
    for i in 0..3 {
        if m[i] > m[(i + 1) % 3] + m[(i + 2) % 3] {
            excess = Some(i);
        }
    }
    match excess {
        Some(i) => {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            put(i as u8, j as u8, m[j]);
            put(i as u8, k as u8, m[k]);
            put(i as u8, i as u8, (m[i] - m[j] - m[k]) / 2);
        }
        None => {
            put(0, 1, (m[0] + m[1] - m[2]) / 2);
            put(0, 2, (m[0] + m[2] - m[1]) / 2);
            put(1, 2, (m[1] + m[2] - m[0]) / 2);
        }
    }
    out
}

/// Restriction of a pairwise-disjoint family of curves to `sub`.
pub fn restrict(model: &SurfaceModel, curves: &[Curve], sub: &Subsurface) -> Result<RestrictionData> {
    let mut interior: BTreeMap<CurveId, CurveCoord> = BTreeMap::new();
    let mut crossings: BTreeMap<CurveId, u64> = BTreeMap::new();
    let mut closed: BTreeMap<CurveId, u64> = BTreeMap::new();
    for curve in curves {
        if let Some(j) = curve.as_base() {
            if curve.meets(model, sub) {
                *closed.entry(j).or_insert(0) += 1;
            }
            continue;
        }
        for (&site, cc) in curve.coords() {
            if sub.contains_curve_interior(model, site) {
                let e = interior.entry(site).or_insert(CurveCoord { m: 0, t: 0 });
                e.m += cc.m;
                e.t += cc.t;
            } else if sub.has_curve_on_boundary(model, site) {
                *crossings.entry(site).or_insert(0) += cc.m;
            }
        }
    }
    let mut arcs: BTreeMap<PantsId, BTreeMap<(u8, u8), u64>> = BTreeMap::new();
    for &p in sub.pants() {
        let mv = slot_m_values_restricted(model, curves, sub, p);
        if !(mv[0] + mv[1] + mv[2]).is_multiple_of(2) {
            return Err(Error::ParityViolation(p));
        }
        let resolved = resolve_arcs(mv);
        if !resolved.is_empty() {
            arcs.insert(p, resolved);
        }
    }
    Ok(RestrictionData { arcs, interior, crossings, closed })
}

/// Slot intersection counts of a pants inside `sub`.  Every slot curve of
/// an included pants is interior to or on the boundary of `sub`, so all
/// crossings there are visible.
fn slot_m_values_restricted(
    model: &SurfaceModel,
    curves: &[Curve],
    _sub: &Subsurface,
    p: PantsId,
) -> [u64; 3] {
    slot_m_values(model, curves, p)
}

/// Isotopy type of one component of a restriction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKey {
    /// A closed curve, identified by its coordinates.
    Closed(Curve),
    /// A properly embedded arc inside one pants cell, joining the given
    /// boundary slots.
    Arc { pants: PantsId, slots: (u8, u8) },
}

pub type ComponentMultiset = BTreeMap<ComponentKey, u64>;

/// Traces the components of a restriction.  Multiplicity counts parallel
/// copies; forgetting it yields the simplex in the arc-and-curve complex.
///
/// The restriction must come from a union of base curves and single-window
/// curves (everything this crate constructs); per-site data then
/// determines the components exactly.
pub fn components(model: &SurfaceModel, r: &RestrictionData) -> Result<ComponentMultiset> {
    let mut out: ComponentMultiset = BTreeMap::new();
    for (&j, &mult) in &r.closed {
        *out.entry(ComponentKey::Closed(Curve::base(j))).or_insert(0) += mult;
    }
    for (&site, cc) in &r.interior {
        let q = match model.window_kind(site) {
            WindowKind::Torus => cc.m,
            WindowKind::Sphere => {
                if cc.m % 2 != 0 {
                    return Err(Error::CorruptRestriction(format!(
                        "odd crossing count {} at sphere-window site {site}",
                        cc.m
                    )));
                }
                cc.m / 2
            }
        };
        let d = gcd(q, cc.t.unsigned_abs());
        let slope = Slope::new(cc.t / d as i64, (q / d) as i64)
            .map_err(|_| Error::CorruptRestriction(format!("degenerate slope at site {site}")))?;
        let curve = Curve::window(model, site, slope);
        *out.entry(ComponentKey::Closed(curve)).or_insert(0) += d;
    }
    for (&site, &m) in &r.crossings {
        if m % 2 != 0 {
            return Err(Error::CorruptRestriction(format!(
                "odd boundary crossing count {m} at site {site}"
            )));
        }
        let ((p1, s1), (p2, s2)) = model.curve_sides(site);
        // exactly one side pants of a boundary curve lies inside
        let (p_in, s_in) = if r.arcs.contains_key(&p1) {
            (p1, s1)
        } else {
            (p2, s2)
        };
        *out.entry(ComponentKey::Arc { pants: p_in, slots: (s_in, s_in) })
            .or_insert(0) += m / 2;
    }
    Ok(out)
}

/// Whether two curves have geometric intersection number zero.  Exact for
/// base curves and curves supported in a single window; larger supports
/// are rejected rather than guessed.
pub fn disjoint(model: &SurfaceModel, a: &Curve, b: &Curve) -> Result<bool> {
    const MAX_WINDOWS: usize = 1;
    for c in [a, b] {
        if c.as_base().is_none() && c.as_window(model).is_none() {
            return Err(Error::SupportTooLarge(c.coords().len(), MAX_WINDOWS));
        }
    }
    if a == b {
        return Ok(true); // isotopic parallel copies
    }
    let (sa, slope_a) = a.as_window(model).unwrap();
    let (sb, slope_b) = b.as_window(model).unwrap();
    match (slope_a.is_base(), slope_b.is_base()) {
        (true, true) => Ok(true),
        (true, false) | (false, true) => Ok(sa != sb),
        (false, false) => {
            if sa == sb {
                // distinct slopes in one window always intersect
                Ok(false)
            } else {
                // deviated occupants of overlapping windows always cross:
                // their normal arcs in the shared pants separate it in dual ways
                Ok(!model.windows_overlap(sa, sb))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SurfaceModel;
    use crate::oracle;

    fn m() -> SurfaceModel {
        SurfaceModel::build(4).unwrap()
    }

    fn s(n: i64, d: i64) -> Slope {
        Slope::new(n, d).unwrap()
    }

    #[test]
    fn literal_round_trip() {
        let model = m();
        for c in [
            Curve::base(7),
            Curve::window(&model, 3, s(2, 5)),
            Curve::window(&model, 1, s(-1, 3)),
        ] {
            let back: Curve = c.to_string().parse().unwrap();
            assert_eq!(back, c);
        }
        let parsed: Curve = "{3:(5,2)}".parse().unwrap();
        assert_eq!(parsed, Curve::window(&m(), 3, s(2, 5)));
    }

    #[test]
    fn window_curve_coordinates() {
        let model = m();
        // torus window: slope p/q crosses the handle curve q times
        let c = Curve::window(&model, 3, s(2, 5));
        assert_eq!(c.m_at(3), 5);
        assert_eq!(c.t_at(3), 2);
        // sphere window: slope p/q crosses the site curve 2q times
        let c = Curve::window(&model, 2, s(1, 3));
        assert_eq!(c.m_at(2), 6);
        assert_eq!(c.as_window(&model), Some((2, s(1, 3))));
    }

    #[test]
    fn meets_and_containment() {
        let model = m();
        let s0 = model.exhaustion(0);
        // base curve inside S_0
        assert!(Curve::base(2).meets(&model, &s0));
        assert!(Curve::base(2).contained_in(&model, &s0));
        // boundary base curve of S_0 meets but is not contained
        let b = model.boundary_site(0);
        assert!(Curve::base(b).meets(&model, &s0));
        assert!(!Curve::base(b).contained_in(&model, &s0));
        // window curve beyond S_0
        let far = Curve::window(&model, model.boundary_site(2), s(0, 1));
        assert!(!far.meets(&model, &s0));
        // window curve crossing the boundary of S_0
        let crossing = Curve::window(&model, b, s(0, 1));
        assert!(crossing.meets(&model, &s0));
        assert!(!crossing.contained_in(&model, &s0));
    }

    #[test]
    fn arc_resolution_matches_oracle_enumeration() {
        for m1 in 0..=6u64 {
            for m2 in 0..=6u64 {
                for m3 in 0..=6u64 {
                    if (m1 + m2 + m3) % 2 != 0 {
                        continue;
                    }
                    let ours = resolve_arcs([m1, m2, m3]);
                    let oracle = oracle::pants_arc_counts([m1, m2, m3]).unwrap();
                    let keyed = [
                        ((0u8, 1u8), oracle[0]),
                        ((0, 2), oracle[1]),
                        ((1, 2), oracle[2]),
                        ((0, 0), oracle[3]),
                        ((1, 1), oracle[4]),
                        ((2, 2), oracle[5]),
                    ];
                    for (k, v) in keyed {
                        assert_eq!(
                            ours.get(&k).copied().unwrap_or(0),
                            v,
                            "arc counts differ at {k:?} for {:?}",
                            (m1, m2, m3)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn restrict_empty_and_single_base() {
        let model = m();
        let s0 = model.exhaustion(0);
        let r = restrict(&model, &[], &s0).unwrap();
        assert!(r.is_empty());
        let r = restrict(&model, &[Curve::base(2)], &s0).unwrap();
        assert_eq!(r.closed, BTreeMap::from([(2, 1)]));
        assert!(r.arcs.is_empty());
        let comps = components(&model, &r).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[&ComponentKey::Closed(Curve::base(2))], 1);
    }

    #[test]
    fn restrict_crossing_curve_yields_parallel_arcs() {
        let model = m();
        let s0 = model.exhaustion(0);
        let b = model.boundary_site(0);
        // slope 1/2 at the boundary site: m = 4, two parallel arcs in the
        // last chain pants of S_0
        let c = Curve::window(&model, b, s(1, 2));
        let r = restrict(&model, &[c], &s0).unwrap();
        assert_eq!(r.crossings, BTreeMap::from([(b, 4)]));
        let comps = components(&model, &r).unwrap();
        assert_eq!(comps.len(), 1);
        let (key, mult) = comps.iter().next().unwrap();
        assert_eq!(*mult, 2);
        match key {
            ComponentKey::Arc { pants, slots } => {
                let ((p1, s1), _) = model.curve_sides(b);
                assert_eq!((*pants, *slots), (p1, (s1, s1)));
            }
            _ => panic!("expected an arc component"),
        }
    }

    #[test]
    fn restrict_contained_window_curve_is_closed() {
        let model = m();
        let s0 = model.exhaustion(0);
        let c = Curve::window(&model, 3, s(2, 5));
        let r = restrict(&model, std::slice::from_ref(&c), &s0).unwrap();
        assert!(r.crossings.is_empty());
        let comps = components(&model, &r).unwrap();
        assert_eq!(comps, BTreeMap::from([(ComponentKey::Closed(c), 1)]));
        // arc + closed curve together
        let b = model.boundary_site(0);
        let c2 = Curve::window(&model, b, s(1, 1));
        let c3 = Curve::window(&model, 3, s(2, 5));
        let r = restrict(&model, &[c3, c2], &s0).unwrap();
        let comps = components(&model, &r).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps.values().copied().collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn parallel_copies_trace_with_multiplicity() {
        let model = m();
        let s0 = model.exhaustion(0);
        // two parallel copies of the slope-1/2 torus curve, as one
        // aggregate coordinate entry (m, t) = (4, 2)
        let double = Curve { base: None, coords: BTreeMap::from([(3, CurveCoord { m: 4, t: 2 })]) };
        let r = restrict(&model, &[double], &s0).unwrap();
        let comps = components(&model, &r).unwrap();
        let key = ComponentKey::Closed(Curve::window(&model, 3, s(1, 2)));
        assert_eq!(comps, BTreeMap::from([(key, 2)]));
    }

    #[test]
    fn disjointness_cases() {
        let model = m();
        let c = Curve::window(&model, 3, s(1, 2));
        assert!(disjoint(&model, &c, &c).unwrap());
        // slopes 0/1 and 1/0 in one torus window intersect once
        let z = Curve::window(&model, 3, s(0, 1));
        assert!(!disjoint(&model, &z, &Curve::base(3)).unwrap());
        // slopes 0/1 and 1/1 in one sphere window intersect twice
        let a = Curve::window(&model, 2, s(0, 1));
        let b = Curve::window(&model, 2, s(1, 1));
        assert!(!disjoint(&model, &a, &b).unwrap());
        // distinct base curves are disjoint
        assert!(disjoint(&model, &Curve::base(0), &Curve::base(4)).unwrap());
        // overlapping windows with both occupants deviated always cross
        let h = Curve::window(&model, 3, s(0, 1)); // handle window of T_1
        let stem = Curve::window(&model, 2, s(0, 1)); // stem window {C_1, T_1}
        assert!(!disjoint(&model, &h, &stem).unwrap());
        // far apart windows are disjoint
        let far = Curve::window(&model, 30, s(0, 1));
        assert!(disjoint(&model, &h, &far).unwrap());
    }

    #[test]
    fn farey_cross_check_determinant() {
        let model = m();
        for a in oracle::slopes_of_height(12) {
            for b in oracle::slopes_of_height(12) {
                let ca = Curve::window(&model, 3, a);
                let cb = Curve::window(&model, 3, b);
                let dis = disjoint(&model, &ca, &cb).unwrap();
                assert_eq!(dis, a.det(b) == 0, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn farey_cross_check_traced_oracle() {
        let model = m();
        for a in oracle::slopes_of_height(4) {
            for b in oracle::slopes_of_height(4) {
                let ca = Curve::window(&model, 3, a);
                let cb = Curve::window(&model, 3, b);
                let dis = disjoint(&model, &ca, &cb).unwrap();
                assert_eq!(dis, oracle::torus_intersection(a, b) == 0, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn multi_window_support_rejected() {
        let model = m();
        let big = Curve {
            base: None,
            coords: BTreeMap::from([
                (3, CurveCoord { m: 1, t: 0 }),
                (6, CurveCoord { m: 1, t: 0 }),
            ]),
        };
        let c = Curve::window(&model, 0, s(0, 1));
        assert!(matches!(
            disjoint(&model, &big, &c),
            Err(Error::SupportTooLarge(2, 1))
        ));
    }
}
