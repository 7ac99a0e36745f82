//! The five agreement relations on pants decompositions and their classes.
//!
//! Level 0 is equality.  On the exhaustion subsurface `S_n`, level 1
//! compares the sets of curves meeting `S_n`, level 2 the restrictions
//! with arc multiplicities and interior twists, level 3 the component
//! types with multiplicities forgotten, and level 4 the sets of curves
//! contained in `S_n`.  Each relation is computed as equality of a
//! canonical fingerprint, so reflexivity, symmetry, transitivity and the
//! disjoint-or-equal property of the classes hold by construction and are
//! re-checked by the test suites.
//!
//! Interior twist values count toward level 2; twists at the boundary of
//! `S_n` do not (proper isotopy lets endpoints slide along the boundary),
//! while boundary crossing counts do.

use std::collections::BTreeSet;

use crate::curve::{self, Curve, RestrictionData};
use crate::decomposition::{apply_move, PantsDecomposition, TailPattern};
use crate::error::{Error, Result};
use crate::model::{CurveId, ExhaustionIndex, SurfaceModel, WindowKind};
use crate::slope::Slope;

/// One of the five agreement levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgreementLevel(u8);

impl AgreementLevel {
    pub fn new(i: u8) -> Result<AgreementLevel> {
        if i > 4 {
            return Err(Error::ParamRange(format!("agreement level {i} not in 0..=4")));
        }
        Ok(AgreementLevel(i))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub const ALL: [AgreementLevel; 5] = [
        AgreementLevel(0),
        AgreementLevel(1),
        AgreementLevel(2),
        AgreementLevel(3),
        AgreementLevel(4),
    ];
}

impl std::fmt::Display for AgreementLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Canonical level-dependent agreement data of a decomposition on `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FingerprintPayload {
    /// Level 0: the decomposition itself.
    Whole(PantsDecomposition),
    /// Level 1: occupants of every window site meeting `S_n`.
    Meeting(Vec<(CurveId, Slope)>),
    /// Level 2: the exact restriction data.
    Restriction(RestrictionData),
    /// Level 3: component types of the restriction, multiplicities
    /// forgotten.
    ComponentTypes(BTreeSet<curve::ComponentKey>),
    /// Level 4: occupants of every site whose curve is contained in `S_n`.
    Contained(Vec<(CurveId, Slope)>),
}

/// Fingerprint bucket realizing the agreement class of a decomposition:
/// two decompositions get equal keys exactly when they agree at the level
/// on `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BallKey {
    pub level: AgreementLevel,
    pub n: ExhaustionIndex,
    pub payload: FingerprintPayload,
}

/// Curves of the decomposition meeting `S_n`: exactly the occupants of
/// the sites up to and including the boundary site.
pub fn meeting_curves(
    model: &SurfaceModel,
    x: &PantsDecomposition,
    n: ExhaustionIndex,
) -> Vec<Curve> {
    (0..=model.boundary_site(n))
        .map(|j| x.curve_at(model, j))
        .collect()
}

pub fn ball_key(
    model: &SurfaceModel,
    level: AgreementLevel,
    n: ExhaustionIndex,
    x: &PantsDecomposition,
) -> Result<BallKey> {
    let payload = match level.get() {
        0 => FingerprintPayload::Whole(x.clone()),
        1 => FingerprintPayload::Meeting(
            (0..=model.boundary_site(n)).map(|j| (j, x.occupant(j))).collect(),
        ),
        2 => {
            let sub = model.exhaustion(n);
            FingerprintPayload::Restriction(curve::restrict(model, &meeting_curves(model, x, n), &sub)?)
        }
        3 => {
            let sub = model.exhaustion(n);
            let r = curve::restrict(model, &meeting_curves(model, x, n), &sub)?;
            FingerprintPayload::ComponentTypes(
                curve::components(model, &r)?.into_keys().collect(),
            )
        }
        _ => {
            let sub = model.exhaustion(n);
            let contained = (0..=model.boundary_site(n))
                .filter(|&j| x.curve_at(model, j).contained_in(model, &sub))
                .map(|j| (j, x.occupant(j)))
                .collect();
            FingerprintPayload::Contained(contained)
        }
    };
    Ok(BallKey { level, n, payload })
}

/// Per-site agreement contribution: the part of the level-`i` fingerprint
/// on `S_n` attributable to one window site.  `None` marks sites the
/// fingerprint cannot see.  The fingerprints decompose sitewise because a
/// pants cell of `S_n` receives crossings from at most one occupant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SiteContrib {
    /// The occupant itself (levels 1 and 4, and interior types at 3).
    Occ(Slope),
    /// A closed component parallel to the base curve.
    ClosedBase,
    /// Interior crossing data (m, t).
    Interior(u64, i64),
    /// Boundary crossing count.
    Crossing(u64),
    /// Some positive number of boundary arcs (multiplicity forgotten).
    ArcPresent,
}

pub(crate) fn site_contrib(
    model: &SurfaceModel,
    level: AgreementLevel,
    n: ExhaustionIndex,
    site: CurveId,
    occupant: Slope,
) -> Option<SiteContrib> {
    let bsite = model.boundary_site(n);
    if site > bsite {
        return None;
    }
    let boundary = site == bsite;
    match level.get() {
        1 => Some(SiteContrib::Occ(occupant)),
        2 => {
            if occupant.is_base() {
                Some(SiteContrib::ClosedBase)
            } else if boundary {
                Some(SiteContrib::Crossing(2 * occupant.den() as u64))
            } else {
                let m = match model.window_kind(site) {
                    WindowKind::Torus => occupant.den() as u64,
                    WindowKind::Sphere => 2 * occupant.den() as u64,
                };
                Some(SiteContrib::Interior(m, occupant.num()))
            }
        }
        3 => {
            if occupant.is_base() {
                Some(SiteContrib::ClosedBase)
            } else if boundary {
                Some(SiteContrib::ArcPresent)
            } else {
                Some(SiteContrib::Occ(occupant))
            }
        }
        4 => {
            if boundary {
                None // nothing at the boundary site is contained in S_n
            } else {
                Some(SiteContrib::Occ(occupant))
            }
        }
        _ => unreachable!("level 0 has no sitewise form"),
    }
}

/// Sites up to the boundary site of `S_n` where the level-`i`
/// contributions of the two decompositions differ.
pub fn mismatch_sites(
    model: &SurfaceModel,
    level: AgreementLevel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
    n: ExhaustionIndex,
) -> Vec<CurveId> {
    debug_assert!(level.get() >= 1);
    x.differing_sites_up_to(y, model.boundary_site(n))
        .into_iter()
        .filter(|&j| {
            site_contrib(model, level, n, j, x.occupant(j))
                != site_contrib(model, level, n, j, y.occupant(j))
        })
        .collect()
}

/// Whether the decompositions `i`-agree on `S_n`.
pub fn agrees(
    model: &SurfaceModel,
    level: AgreementLevel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
    n: ExhaustionIndex,
) -> bool {
    if level.get() == 0 {
        return x == y;
    }
    mismatch_sites(model, level, x, y, n).is_empty()
}

/// Largest agreement index, the sentinel for disagreement even on `S_0`,
/// or the probe bound when agreement extends past it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaxAgreement {
    /// The decompositions disagree even on `S_0`.
    DisagreeOnBase,
    /// Largest `n` with agreement on `S_n` (agreement fails at `n + 1`).
    Exact(ExhaustionIndex),
    /// Agreement holds at least up to the probe bound.
    AtLeast(ExhaustionIndex),
}

/// Scans upward, using monotonicity of agreement in `n`: the first failing
/// index ends the scan.
pub fn max_agreement(
    model: &SurfaceModel,
    level: AgreementLevel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
    n_max: ExhaustionIndex,
) -> MaxAgreement {
    if !agrees(model, level, x, y, 0) {
        return MaxAgreement::DisagreeOnBase;
    }
    for n in 1..=n_max {
        if !agrees(model, level, x, y, n) {
            return MaxAgreement::Exact(n - 1);
        }
    }
    MaxAgreement::AtLeast(n_max)
}

/// Searches move-generated decompositions for a pair that `i`-agrees but
/// does not `(i-1)`-agree on `S_n`.  The search is deterministic: the
/// candidate pool consists of all decompositions reachable from the base
/// decomposition by at most two moves at sites near the boundary of
/// `S_n`, enumerated in canonical order.
pub fn make_separating_pair(
    model: &SurfaceModel,
    level: AgreementLevel,
    n: ExhaustionIndex,
    height_budget: u64,
) -> Result<(PantsDecomposition, PantsDecomposition)> {
    if !(2..=4).contains(&level.get()) {
        return Err(Error::ParamRange(format!(
            "separating pairs exist for levels 2..=4, got {level}"
        )));
    }
    let weaker = AgreementLevel::new(level.get() - 1).unwrap();
    let bsite = model.boundary_site(n);
    let sites: Vec<CurveId> = (bsite.saturating_sub(3)..=bsite + 3).collect();
    let base = PantsDecomposition::base();
    let mut pool: Vec<PantsDecomposition> = vec![base.clone()];
    let mut frontier = vec![base];
    for _ in 0..2 {
        let mut next = Vec::new();
        for x in &frontier {
            for &site in &sites {
                let alpha = x.curve_at(model, site);
                let Ok(set) = crate::decomposition::enumerate_moves(model, x, &alpha, height_budget)
                else {
                    continue;
                };
                for mv in set.moves {
                    if let Ok(y) = apply_move(model, x, &mv) {
                        next.push(y);
                    }
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        pool.extend(next.clone());
        frontier = next;
    }
    pool.sort_unstable();
    pool.dedup();
    for (i, a) in pool.iter().enumerate() {
        for b in pool.iter().skip(i + 1) {
            if agrees(model, level, a, b, n) && !agrees(model, weaker, a, b, n) {
                return Ok((a.clone(), b.clone()));
            }
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no ({level}, not {weaker}) pair within two moves of the base decomposition at height {height_budget}"
    )))
}

/// A canonical representative of the agreement class of `x`: every site
/// invisible to the level-`n` fingerprint is reset to its base curve and
/// the tail is replaced by the all-base rule.
pub(crate) fn class_representative(
    model: &SurfaceModel,
    level: AgreementLevel,
    n: ExhaustionIndex,
    x: &PantsDecomposition,
) -> PantsDecomposition {
    let mut overrides = std::collections::BTreeMap::new();
    for j in 0..=model.boundary_site(n) {
        let occ = x.occupant(j);
        if site_contrib(model, level, n, j, occ).is_some() && !occ.is_base() {
            overrides.insert(j, occ);
        }
    }
    PantsDecomposition::new(model, TailPattern::base(), overrides)
        .expect("visible occupants of a valid decomposition stay valid")
}

/// Decides whether some member of the class of `v` has an elementary-move
/// neighbor inside the class of `w` (classes at level `i` on `S_n`), and
/// returns such an edge.  Exact: fingerprints decompose sitewise, so a
/// single move can reconcile them only at a unique mismatch site, where
/// the admissible replacement slopes can be solved for directly.
pub fn class_has_neighbor_into(
    model: &SurfaceModel,
    level: AgreementLevel,
    n: ExhaustionIndex,
    v: &PantsDecomposition,
    w: &PantsDecomposition,
) -> Option<(PantsDecomposition, PantsDecomposition)> {
    if level.get() == 0 {
        // level 0 classes are singletons: need v adjacent to w
        if crate::decomposition::defining_site(v, w).is_some() {
            return Some((v.clone(), w.clone()));
        }
        return None;
    }
    let mismatches = mismatch_sites(model, level, v, w, n);
    let rep = class_representative(model, level, n, v);
    match mismatches.len() {
        0 => {
            // any move beyond the fingerprint's horizon works
            let far_block = model.last_block(n) + 2;
            let site = 3 * far_block; // a far handle site, neighbors at base
            let w_new = rep
                .with_occupant(model, site, Slope::new(0, 1).unwrap())
                .expect("far handle move on the canonical representative is valid");
            Some((rep, w_new))
        }
        1 => {
            let s = mismatches[0];
            let from = rep.occupant(s);
            let target = site_contrib(model, level, n, s, w.occupant(s))?;
            for tau in contrib_preimage_neighbors(model, level, n, s, from, target) {
                if let Ok(cand) = rep.with_occupant(model, s, tau) {
                    debug_assert!(agrees(model, level, &cand, w, n));
                    return Some((rep, cand));
                }
            }
            None
        }
        _ => None, // one move changes one site; two mismatches cannot be fixed
    }
}

/// Slopes adjacent to `from` whose level contribution at `site` equals
/// `target`.  Finite by level structure.
fn contrib_preimage_neighbors(
    model: &SurfaceModel,
    level: AgreementLevel,
    n: ExhaustionIndex,
    site: CurveId,
    from: Slope,
    target: SiteContrib,
) -> Vec<Slope> {
    let mut out = Vec::new();
    let mut push = |t: Slope| {
        if from.is_adjacent(t) && site_contrib(model, level, n, site, t) == Some(target) {
            out.push(t);
        }
    };
    match target {
        SiteContrib::Occ(sigma) => push(sigma),
        SiteContrib::ClosedBase => push(Slope::BASE),
        SiteContrib::Interior(m, t) => {
            let den = match model.window_kind(site) {
                WindowKind::Torus => m,
                WindowKind::Sphere => m / 2,
            };
            if let Ok(sigma) = Slope::new(t, den as i64) {
                push(sigma);
            }
        }
        SiteContrib::Crossing(m) => {
            // slopes of denominator m/2 adjacent to `from`:
            // det(from, tau) = from.num * den_t - from.den * num_t = ±1
            let den_t = (m / 2) as i64;
            if from.is_base() {
                if den_t == 1 {
                    for r in -2..=2 {
                        push(Slope::new(r, 1).unwrap());
                    }
                }
            } else {
                for sign in [1i64, -1] {
                    let num = from.num() * den_t - sign;
                    if num % from.den() == 0 {
                        if let Ok(t) = Slope::new(num / from.den(), den_t) {
                            push(t);
                        }
                    }
                }
            }
        }
        SiteContrib::ArcPresent => {
            // any deviated neighbor
            for t in from.neighbors(from.height() + 2) {
                if !t.is_base() {
                    push(t);
                }
            }
        }
    }
    out
}
