//! Pants decompositions of the model surface and the elementary-move
//! graph on them.
//!
//! An infinite decomposition is presented finitely: an eventually-periodic
//! tail rule assigns a default slope to every window site, and a finite
//! override map replaces the rule on finitely many sites.  Slope `1/0`
//! denotes the base curve of the site, so the all-base tail presents the
//! base decomposition.
//!
//! Validity is the non-overlap invariant: two sites whose windows share a
//! pants cell never both deviate from their base curves (deviated
//! occupants of overlapping windows always intersect).  Within this class,
//! two decompositions are elementary-move adjacent exactly when they
//! differ at a single site with Farey-adjacent occupants, and each move
//! records its window, so window identification never requires general
//! recognition of complexity-1 complements.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde_json::{json, Value};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::model::{CurveId, ExhaustionIndex, PantsId, SurfaceModel, WindowKind};
use crate::slope::Slope;

/// Eventually-periodic default rule `site j -> period[j mod len]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TailPattern {
    period: Vec<Slope>,
}

impl TailPattern {
    /// The all-base tail (the base decomposition's rule).
    pub fn base() -> TailPattern {
        TailPattern { period: vec![Slope::BASE] }
    }

    /// Builds a tail rule and checks that it yields a valid decomposition:
    /// no two overlapping sites may both deviate.
    pub fn new(model: &SurfaceModel, period: Vec<Slope>) -> Result<TailPattern> {
        if period.is_empty() {
            return Err(Error::InvalidTail("period must be non-empty".into()));
        }
        let tail = TailPattern { period }.primitive();
        let span = 3 * tail.period.len() as u64 + 6;
        for j in 0..span {
            if tail.slope_at(j).is_base() {
                continue;
            }
            for l in model.overlapping_sites(j) {
                if l > j && !tail.slope_at(l).is_base() {
                    return Err(Error::InvalidTail(format!(
                        "sites {j} and {l} both deviate but their windows overlap"
                    )));
                }
            }
        }
        Ok(tail)
    }

    pub fn slope_at(&self, site: CurveId) -> Slope {
        self.period[(site % self.period.len() as u64) as usize]
    }

    pub fn period(&self) -> &[Slope] {
        &self.period
    }

    /// Smallest repeating period presenting the same rule.
    fn primitive(self) -> TailPattern {
        let n = self.period.len();
        'outer: for d in 1..n {
            if !n.is_multiple_of(d) {
                continue;
            }
            for i in d..n {
                if self.period[i] != self.period[i % d] {
                    continue 'outer;
                }
            }
            return TailPattern { period: self.period[..d].to_vec() };
        }
        self
    }

    pub(crate) fn from_raw_period(period: Vec<Slope>) -> TailPattern {
        TailPattern { period }.primitive()
    }
}

/// A pants decomposition in canonical form: a tail rule plus the finite
/// set of sites where it is overridden.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PantsDecomposition {
    tail: TailPattern,
    overrides: BTreeMap<CurveId, Slope>,
}

impl PantsDecomposition {
    /// The base decomposition (all base curves).
    pub fn base() -> PantsDecomposition {
        PantsDecomposition { tail: TailPattern::base(), overrides: BTreeMap::new() }
    }

    pub fn new(
        model: &SurfaceModel,
        tail: TailPattern,
        overrides: BTreeMap<CurveId, Slope>,
    ) -> Result<PantsDecomposition> {
        let mut canon = overrides;
        canon.retain(|&site, &mut slope| tail.slope_at(site) != slope);
        let dec = PantsDecomposition { tail, overrides: canon };
        dec.validate(model)?;
        Ok(dec)
    }

    fn validate(&self, model: &SurfaceModel) -> Result<()> {
        for (&j, &slope) in &self.overrides {
            if slope.is_base() {
                continue;
            }
            for l in model.overlapping_sites(j) {
                if l != j && !self.occupant(l).is_base() {
                    return Err(Error::OverlappingDeviation(j, l));
                }
            }
        }
        Ok(())
    }

    pub fn tail(&self) -> &TailPattern {
        &self.tail
    }

    pub fn overrides(&self) -> &BTreeMap<CurveId, Slope> {
        &self.overrides
    }

    /// The slope occupying window site `j`.
    pub fn occupant(&self, site: CurveId) -> Slope {
        self.overrides
            .get(&site)
            .copied()
            .unwrap_or_else(|| self.tail.slope_at(site))
    }

    /// The curve occupying window site `j`.
    pub fn curve_at(&self, model: &SurfaceModel, site: CurveId) -> Curve {
        Curve::window(model, site, self.occupant(site))
    }

    /// Whether the curve is one of the decomposition's curves.
    pub fn contains_curve(&self, model: &SurfaceModel, c: &Curve) -> bool {
        match c.as_window(model) {
            Some((site, slope)) => self.occupant(site) == slope,
            None => false,
        }
    }

    /// Minimal exhaustion index whose subsurface contains every override
    /// curve's window.
    pub fn horizon(&self, model: &SurfaceModel) -> ExhaustionIndex {
        self.overrides
            .keys()
            .map(|&j| model.window_exhaustion(j))
            .max()
            .unwrap_or(0)
    }

    /// Returns a copy with `site` occupied by `slope` (validated).
    pub fn with_occupant(
        &self,
        model: &SurfaceModel,
        site: CurveId,
        slope: Slope,
    ) -> Result<PantsDecomposition> {
        let mut overrides = self.overrides.clone();
        if self.tail.slope_at(site) == slope {
            overrides.remove(&site);
        } else {
            overrides.insert(site, slope);
        }
        let dec = PantsDecomposition { tail: self.tail.clone(), overrides };
        dec.validate(model)?;
        Ok(dec)
    }

    /// Sites up to `max_site` (inclusive) where the occupants differ.
    pub fn differing_sites_up_to(&self, other: &PantsDecomposition, max_site: CurveId) -> Vec<CurveId> {
        let mut candidates: Vec<CurveId>;
        if self.tail == other.tail {
            candidates = self
                .overrides
                .keys()
                .chain(other.overrides.keys())
                .copied()
                .filter(|&j| j <= max_site)
                .collect();
            candidates.sort_unstable();
            candidates.dedup();
        } else {
            candidates = (0..=max_site).collect();
        }
        candidates
            .into_iter()
            .filter(|&j| self.occupant(j) != other.occupant(j))
            .collect()
    }

    pub fn to_json(&self, model: &SurfaceModel) -> Value {
        let overrides: BTreeMap<String, String> = self
            .overrides
            .iter()
            .map(|(j, s)| (j.to_string(), s.to_string()))
            .collect();
        json!({
            "tail": { "period": self.tail.period().iter().map(|s| s.to_string()).collect::<Vec<_>>() },
            "horizon": self.horizon(model),
            "overrides": overrides,
        })
    }

    pub fn from_json(model: &SurfaceModel, v: &Value) -> Result<PantsDecomposition> {
        let period = v["tail"]["period"]
            .as_array()
            .ok_or_else(|| Error::Parse("decomposition JSON needs tail.period".into()))?
            .iter()
            .map(|s| {
                s.as_str()
                    .ok_or_else(|| Error::Parse("period entries must be slope strings".into()))
                    .and_then(|s| s.parse())
            })
            .collect::<Result<Vec<Slope>>>()?;
        let tail = TailPattern::new(model, period)?;
        let mut overrides = BTreeMap::new();
        if let Some(map) = v["overrides"].as_object() {
            for (k, s) in map {
                let site: CurveId = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad override site `{k}`")))?;
                let slope: Slope = s
                    .as_str()
                    .ok_or_else(|| Error::Parse("override values must be slope strings".into()))?
                    .parse()?;
                overrides.insert(site, slope);
            }
        }
        PantsDecomposition::new(model, tail, overrides)
    }
}

/// Replacement of one curve by a minimally-intersecting curve of its
/// window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryMove {
    pub site: CurveId,
    pub from: Slope,
    pub to: Slope,
}

impl ElementaryMove {
    pub fn window_kind(&self, model: &SurfaceModel) -> WindowKind {
        model.window_kind(self.site)
    }

    pub fn window_pants(&self, model: &SurfaceModel) -> Vec<PantsId> {
        model.window_pants(self.site)
    }

    /// Geometric intersection of the removed and inserted curves: 1 in a
    /// torus window, 2 in a sphere window.
    pub fn intersection_number(&self, model: &SurfaceModel) -> u64 {
        match self.window_kind(model) {
            WindowKind::Torus => 1,
            WindowKind::Sphere => 2,
        }
    }

    pub fn removed(&self, model: &SurfaceModel) -> Curve {
        Curve::window(model, self.site, self.from)
    }

    pub fn inserted(&self, model: &SurfaceModel) -> Curve {
        Curve::window(model, self.site, self.to)
    }

    pub fn reversed(&self) -> ElementaryMove {
        ElementaryMove { site: self.site, from: self.to, to: self.from }
    }
}

/// Height-bounded move enumeration with an explicit completeness bound:
/// every window holds infinitely many curves, so consumers always see the
/// truncation height.
#[derive(Clone, Debug)]
pub struct MoveSet {
    pub moves: Vec<ElementaryMove>,
    /// The enumeration is complete for replacement slopes of height up to
    /// this bound.
    pub complete_to_height: u64,
}

/// All elementary moves replacing `alpha` in `X` by curves of coordinate
/// height at most `budget`.
pub fn enumerate_moves(
    model: &SurfaceModel,
    x: &PantsDecomposition,
    alpha: &Curve,
    budget: u64,
) -> Result<MoveSet> {
    let (site, slope) = alpha.as_window(model).ok_or(Error::NotInDecomposition)?;
    if x.occupant(site) != slope {
        return Err(Error::NotInDecomposition);
    }
    if slope.is_base() {
        // moving the base occupant out requires the standard window to be
        // intact: every overlapping site must sit on its base curve
        for l in model.overlapping_sites(site) {
            if !x.occupant(l).is_base() {
                return Err(Error::WindowDeformed(site));
            }
        }
    }
    let moves = slope
        .neighbors(budget)
        .into_iter()
        .map(|to| ElementaryMove { site, from: slope, to })
        .collect();
    Ok(MoveSet { moves, complete_to_height: budget })
}

/// Applies a validated elementary move, re-establishing canonical form.
pub fn apply_move(
    model: &SurfaceModel,
    x: &PantsDecomposition,
    mv: &ElementaryMove,
) -> Result<PantsDecomposition> {
    if x.occupant(mv.site) != mv.from {
        return Err(Error::InvalidMove(format!(
            "site {} holds {}, not {}",
            mv.site,
            x.occupant(mv.site),
            mv.from
        )));
    }
    if !mv.from.is_adjacent(mv.to) {
        return Err(Error::InvalidMove(format!(
            "slopes {} and {} are not minimally intersecting",
            mv.from, mv.to
        )));
    }
    x.with_occupant(model, mv.site, mv.to)
}

pub fn apply_moves(
    model: &SurfaceModel,
    x: &PantsDecomposition,
    word: &[ElementaryMove],
) -> Result<PantsDecomposition> {
    let mut cur = x.clone();
    for mv in word {
        cur = apply_move(model, &cur, mv)?;
    }
    Ok(cur)
}

/// Exact symmetric difference of two decompositions, or a certificate
/// that it is infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetricDifference {
    /// Sites where the decompositions differ, with both occupants.
    Finite(Vec<(CurveId, Slope, Slope)>),
    /// Tail rules mismatch periodically; the first three differing sites
    /// are given as evidence.
    Infinite { evidence: [CurveId; 3] },
}

impl SymmetricDifference {
    pub fn is_finite(&self) -> bool {
        matches!(self, SymmetricDifference::Finite(_))
    }

    pub fn count(&self) -> Option<usize> {
        match self {
            SymmetricDifference::Finite(v) => Some(v.len()),
            SymmetricDifference::Infinite { .. } => None,
        }
    }
}

pub fn symmetric_difference(x: &PantsDecomposition, y: &PantsDecomposition) -> SymmetricDifference {
    if x.tail() == y.tail() {
        let mut sites: Vec<CurveId> = x
            .overrides()
            .keys()
            .chain(y.overrides().keys())
            .copied()
            .collect();
        sites.sort_unstable();
        sites.dedup();
        let diffs: Vec<_> = sites
            .into_iter()
            .filter(|&j| x.occupant(j) != y.occupant(j))
            .map(|j| (j, x.occupant(j), y.occupant(j)))
            .collect();
        return SymmetricDifference::Finite(diffs);
    }
    // distinct primitive periods: the rules mismatch on a nonempty set of
    // residue classes, which finitely many overrides cannot patch
    let max_override = x
        .overrides()
        .keys()
        .chain(y.overrides().keys())
        .copied()
        .max()
        .unwrap_or(0);
    let mut evidence = Vec::new();
    let mut j = max_override + 1;
    while evidence.len() < 3 {
        if x.occupant(j) != y.occupant(j) {
            evidence.push(j);
        }
        j += 1;
    }
    SymmetricDifference::Infinite { evidence: [evidence[0], evidence[1], evidence[2]] }
}

/// Two decompositions lie in the same connected component of the pants
/// graph exactly when their symmetric difference is finite.
pub fn same_component(x: &PantsDecomposition, y: &PantsDecomposition) -> bool {
    symmetric_difference(x, y).is_finite()
}

/// The unique differing site of an elementary-move-adjacent pair.
pub fn defining_site(x: &PantsDecomposition, y: &PantsDecomposition) -> Option<CurveId> {
    match symmetric_difference(x, y) {
        SymmetricDifference::Finite(d) if d.len() == 1 && d[0].1.is_adjacent(d[0].2) => {
            Some(d[0].0)
        }
        _ => None,
    }
}

/// Greedy extraction of curves of `C` whose windows are pairwise disjoint.
/// Each chosen curve excludes at most four window-sharing curves, so the
/// result has at least `ceil(|C| / 5)` elements (capped at `k`).
pub fn extract_disjoint_windows(
    model: &SurfaceModel,
    x: &PantsDecomposition,
    curves: &[Curve],
    k: usize,
) -> Result<Vec<Curve>> {
    let mut sites = Vec::new();
    for c in curves {
        let (site, slope) = c.as_window(model).ok_or(Error::NotInDecomposition)?;
        if x.occupant(site) != slope {
            return Err(Error::NotInDecomposition);
        }
        sites.push((site, c.clone()));
    }
    sites.sort_by_key(|(site, _)| *site);
    let mut chosen: Vec<(CurveId, Curve)> = Vec::new();
    for (site, c) in sites {
        if chosen.len() >= k {
            break;
        }
        if chosen.iter().all(|(s, _)| !model.windows_overlap(*s, site)) {
            chosen.push((site, c));
        }
    }
    Ok(chosen.into_iter().map(|(_, c)| c).collect())
}

/// Breadth-first distance in the elementary-move graph, exploring moves
/// at sites up to `max_site` with replacement heights up to
/// `height_budget`.  Returns `None` when `to` is unreachable within
/// `max_depth`.
pub fn bfs_distance(
    model: &SurfaceModel,
    from: &PantsDecomposition,
    to: &PantsDecomposition,
    max_depth: u32,
    height_budget: u64,
    max_site: CurveId,
) -> Option<u32> {
    if from == to {
        return Some(0);
    }
    let mut seen: HashMap<PantsDecomposition, u32> = HashMap::new();
    seen.insert(from.clone(), 0);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(cur) = queue.pop_front() {
        let d = seen[&cur];
        if d >= max_depth {
            continue;
        }
        for site in 0..=max_site {
            let alpha = cur.curve_at(model, site);
            let Ok(set) = enumerate_moves(model, &cur, &alpha, height_budget) else {
                continue; // deformed window: no moves at this site
            };
            for mv in set.moves {
                if let Ok(next) = apply_move(model, &cur, &mv) {
                    if next == *to {
                        return Some(d + 1);
                    }
                    if !seen.contains_key(&next) {
                        seen.insert(next.clone(), d + 1);
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    None
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

    fn with(model: &SurfaceModel, entries: &[(CurveId, Slope)]) -> PantsDecomposition {
        PantsDecomposition::new(
            model,
            TailPattern::base(),
            entries.iter().copied().collect(),
        )
        .unwrap()
    }

    #[test]
    fn canonical_form_drops_noop_overrides() {
        let model = m();
        let x = with(&model, &[(3, Slope::BASE)]);
        assert_eq!(x, PantsDecomposition::base());
        assert_eq!(x.horizon(&model), 0);
    }

    #[test]
    fn overlap_invariant_rejected() {
        let model = m();
        // sites 2 (stem a_1) and 3 (handle h_1) share the handle pants T_1
        let bad = PantsDecomposition::new(
            &model,
            TailPattern::base(),
            BTreeMap::from([(2, s(0, 1)), (3, s(0, 1))]),
        );
        assert!(matches!(bad, Err(Error::OverlappingDeviation(_, _))));
    }

    #[test]
    fn tail_patterns_validate_overlap() {
        let model = m();
        // all handle sites deviated: handle windows are pairwise disjoint
        let ok = TailPattern::new(&model, vec![s(0, 1), Slope::BASE, Slope::BASE]);
        assert!(ok.is_ok());
        // stem sites deviated too would overlap the handle windows
        let bad = TailPattern::new(&model, vec![s(0, 1), Slope::BASE, s(0, 1)]);
        assert!(bad.is_err());
    }

    #[test]
    fn symmetric_difference_finite() {
        let model = m();
        let x = PantsDecomposition::base();
        assert_eq!(symmetric_difference(&x, &x), SymmetricDifference::Finite(vec![]));
        let y = with(&model, &[(3, s(0, 1)), (10, s(1, 1))]);
        let d = symmetric_difference(&x, &y);
        assert_eq!(d.count(), Some(2));
        assert!(same_component(&x, &y));
    }

    #[test]
    fn symmetric_difference_infinite_for_distinct_tails() {
        let model = m();
        let x = PantsDecomposition::base();
        let tail = TailPattern::new(&model, vec![s(0, 1), Slope::BASE, Slope::BASE]).unwrap();
        let y = PantsDecomposition::new(&model, tail, BTreeMap::new()).unwrap();
        match symmetric_difference(&x, &y) {
            SymmetricDifference::Infinite { evidence } => {
                for j in evidence {
                    assert_ne!(x.occupant(j), y.occupant(j));
                }
            }
            d => panic!("expected infinite difference, got {d:?}"),
        }
        assert!(!same_component(&x, &y));
    }

    #[test]
    fn move_enumeration_farey_neighbors() {
        let model = m();
        let x = with(&model, &[(3, s(0, 1))]);
        let alpha = Curve::window(&model, 3, s(0, 1));
        let set = enumerate_moves(&model, &x, &alpha, 2).unwrap();
        let targets: Vec<Slope> = set.moves.iter().map(|mv| mv.to).collect();
        for t in [Slope::BASE, s(1, 1), s(-1, 1)] {
            assert!(targets.contains(&t), "missing Farey neighbor {t}");
        }
        assert_eq!(set.complete_to_height, 2);
        // sphere-window moves intersect the removed curve exactly twice
        let y = PantsDecomposition::base();
        let beta = Curve::base(1);
        let set = enumerate_moves(&model, &y, &beta, 1).unwrap();
        assert!(!set.moves.is_empty());
        for mv in &set.moves {
            assert_eq!(mv.intersection_number(&model), 2);
        }
        // budget 0 gives the empty set with its flag, never silent truncation
        let set = enumerate_moves(&model, &y, &beta, 0).unwrap();
        assert!(set.moves.is_empty());
        assert_eq!(set.complete_to_height, 0);
    }

    #[test]
    fn moves_at_deformed_windows_are_rejected() {
        let model = m();
        let x = with(&model, &[(3, s(0, 1))]); // handle h_1 deviated
        // the stem site 2 shares T_1, so its standard window is deformed
        let beta = Curve::base(2);
        assert!(matches!(
            enumerate_moves(&model, &x, &beta, 2),
            Err(Error::WindowDeformed(2))
        ));
    }

    #[test]
    fn apply_move_is_local_involution() {
        let model = m();
        let x = PantsDecomposition::base();
        let mv = ElementaryMove { site: 3, from: Slope::BASE, to: s(0, 1) };
        let y = apply_move(&model, &x, &mv).unwrap();
        assert_eq!(symmetric_difference(&x, &y).count(), Some(1));
        // curves outside the window unchanged
        for j in (0..20).filter(|&j| j != 3) {
            assert_eq!(x.occupant(j), y.occupant(j));
        }
        let back = apply_move(&model, &y, &mv.reversed()).unwrap();
        assert_eq!(back, x);
        // invalid moves rejected
        assert!(apply_move(&model, &x, &ElementaryMove { site: 3, from: s(0, 1), to: s(1, 1) }).is_err());
        assert!(apply_move(&model, &x, &ElementaryMove { site: 3, from: Slope::BASE, to: s(1, 2) }).is_err());
    }

    #[test]
    fn torus_move_matches_oracle_adjacency() {
        let model = m();
        let x = with(&model, &[(3, s(0, 1))]);
        let alpha = Curve::window(&model, 3, s(0, 1));
        let set = enumerate_moves(&model, &x, &alpha, 3).unwrap();
        for mv in &set.moves {
            assert_eq!(oracle::torus_intersection(mv.from, mv.to), 1);
        }
    }

    #[test]
    fn extraction_yields_disjoint_windows() {
        let model = m();
        let x = PantsDecomposition::base();
        // ten consecutive base curves in the chain
        let curves: Vec<Curve> = (0..10).map(Curve::base).collect();
        let picked = extract_disjoint_windows(&model, &x, &curves, 100).unwrap();
        assert!(picked.len() >= 2, "greedy bound |A| >= ceil(10/5)");
        for (i, a) in picked.iter().enumerate() {
            for b in &picked[i + 1..] {
                let sa = a.as_window(&model).unwrap().0;
                let sb = b.as_window(&model).unwrap().0;
                assert!(!model.windows_overlap(sa, sb));
            }
        }
        // single curve: itself
        let single = extract_disjoint_windows(&model, &x, &[Curve::base(4)], 5).unwrap();
        assert_eq!(single, vec![Curve::base(4)]);
    }

    #[test]
    fn json_round_trip() {
        let model = m();
        let tail = TailPattern::new(&model, vec![s(0, 1), Slope::BASE, Slope::BASE]).unwrap();
        // override at a chain site whose window avoids the deviated handles
        let x = PantsDecomposition::new(&model, tail, BTreeMap::from([(4, s(2, 3))])).unwrap();
        let v = x.to_json(&model);
        let back = PantsDecomposition::from_json(&model, &v).unwrap();
        assert_eq!(back, x);
        assert_eq!(v["horizon"], serde_json::json!(x.horizon(&model)));
    }

    #[test]
    fn bfs_realizes_product_distance_on_disjoint_windows() {
        let model = m();
        let x = PantsDecomposition::base();
        // handle sites 3 and 6 have disjoint windows
        let y = with(&model, &[(3, s(1, 1)), (6, s(0, 1))]);
        assert_eq!(bfs_distance(&model, &x, &y, 3, 2, 8), Some(2));
    }
}
