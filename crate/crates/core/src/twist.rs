//! Twist-profile mapping classes: commuting products of Dehn twists along
//! base curves with eventually-periodic exponents, their action on curves,
//! decompositions and pants-space points, and the continuity harness for
//! the action.
//!
//! Right-handed twists are positive.  A twist along base curve `j` adds
//! `e * m_j` to the twist coordinate of a crossing curve and fixes
//! everything else, which on a window's slopes is the transvection
//! `p/q -> (p + e q)/q` (doubled in sphere windows).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::decomposition::{PantsDecomposition, TailPattern};
use crate::error::{Error, Result};
use crate::model::{CurveId, ExhaustionIndex, SurfaceModel, WindowKind};
use crate::pspace::{self, CertifiedPointStream, ConvergenceVerdict, PantsPoint};
use crate::slope::Slope;

/// Exponent profile `base curve -> twist exponent`, finitely presented as
/// overrides over an eventually-periodic rule.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwistProfile {
    period: Vec<i64>,
    #[serde(default)]
    overrides: BTreeMap<CurveId, i64>,
}

impl TwistProfile {
    pub fn zero() -> TwistProfile {
        TwistProfile { period: vec![0], overrides: BTreeMap::new() }
    }

    pub fn new(period: Vec<i64>, overrides: BTreeMap<CurveId, i64>) -> Result<TwistProfile> {
        if period.is_empty() {
            return Err(Error::InvalidTail("twist profile period must be non-empty".into()));
        }
        let mut profile = TwistProfile { period, overrides };
        profile.canonicalize();
        Ok(profile)
    }

    pub fn finite(overrides: BTreeMap<CurveId, i64>) -> TwistProfile {
        let mut profile = TwistProfile { period: vec![0], overrides };
        profile.canonicalize();
        profile
    }

    fn canonicalize(&mut self) {
        // primitive period
        let n = self.period.len();
        for d in 1..n {
            if n.is_multiple_of(d) && (d..n).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        let period = self.period.clone();
        self.overrides
            .retain(|&j, &mut e| period[(j % period.len() as u64) as usize] != e);
    }

    pub fn exponent(&self, j: CurveId) -> i64 {
        self.overrides
            .get(&j)
            .copied()
            .unwrap_or_else(|| self.period[(j % self.period.len() as u64) as usize])
    }

    /// Whether all but finitely many exponents vanish.
    pub fn is_finite_support(&self) -> bool {
        self.period.iter().all(|&e| e == 0)
    }

    /// Support sites up to a bound (complete for finite-support profiles
    /// when `max_site` exceeds every override).
    pub fn support_up_to(&self, max_site: CurveId) -> Vec<CurveId> {
        (0..=max_site).filter(|&j| self.exponent(j) != 0).collect()
    }

    /// Composition is exponent addition: the profiles commute.
    pub fn compose(&self, other: &TwistProfile) -> TwistProfile {
        let len = lcm(self.period.len(), other.period.len());
        let period: Vec<i64> = (0..len as u64)
            .map(|j| {
                self.period[(j % self.period.len() as u64) as usize]
                    + other.period[(j % other.period.len() as u64) as usize]
            })
            .collect();
        let mut overrides = BTreeMap::new();
        for &j in self.overrides.keys().chain(other.overrides.keys()) {
            overrides.insert(j, self.exponent(j) + other.exponent(j));
        }
        let mut out = TwistProfile { period, overrides };
        out.canonicalize();
        out
    }

    pub fn inverse(&self) -> TwistProfile {
        let mut out = TwistProfile {
            period: self.period.iter().map(|e| -e).collect(),
            overrides: self.overrides.iter().map(|(&j, &e)| (j, -e)).collect(),
        };
        out.canonicalize();
        out
    }
}

fn lcm(a: usize, b: usize) -> usize {
    let g = crate::slope::gcd(a as u64, b as u64) as usize;
    a / g * b
}

fn twist_slope(model: &SurfaceModel, site: CurveId, slope: Slope, e: i64) -> Slope {
    if slope.is_base() || e == 0 {
        return slope;
    }
    let step = match model.window_kind(site) {
        WindowKind::Torus => e,
        WindowKind::Sphere => 2 * e,
    };
    Slope::new(slope.num() + step * slope.den(), slope.den())
        .expect("transvections preserve reduced slopes")
}

/// Action on a curve: `t_j += e_j * m_j` at every supported coordinate;
/// intersection numbers are unchanged and base curves are fixed.
pub fn act_on_curve(f: &TwistProfile, c: &Curve) -> Curve {
    let mut out = c.clone();
    let sites: Vec<CurveId> = c.coords().keys().copied().collect();
    for j in sites {
        out = out.twisted(j, f.exponent(j));
    }
    out
}

/// Curve-wise action on a decomposition.  Twists are homeomorphisms, so
/// validity and the deviation pattern are preserved; the tail rule is
/// transformed consistently (the window kinds repeat with period 3).
pub fn act_on_decomposition(
    model: &SurfaceModel,
    f: &TwistProfile,
    x: &PantsDecomposition,
) -> PantsDecomposition {
    // the periodic part of the profile transforms the tail rule; override
    // exponents act sitewise and become decomposition overrides
    let tail_len = x.tail().period().len();
    let len = lcm(lcm(tail_len, f.period.len()), 3);
    let periodic_exponent =
        |j: u64| f.period[(j % f.period.len() as u64) as usize];
    let period: Vec<Slope> = (0..len as u64)
        .map(|j| twist_slope(model, j, x.tail().slope_at(j), periodic_exponent(j)))
        .collect();
    let tail = TailPattern::from_raw_period(period);
    let mut overrides = BTreeMap::new();
    for &j in x.overrides().keys().chain(f.overrides.keys()) {
        overrides.insert(j, twist_slope(model, j, x.occupant(j), f.exponent(j)));
    }
    PantsDecomposition::new(model, tail, overrides)
        .expect("the twist action preserves validity")
}

/// Componentwise action on a pants-space point.
pub fn act_on_point(model: &SurfaceModel, f: &TwistProfile, p: &PantsPoint) -> PantsPoint {
    match p {
        PantsPoint::Vertex(x) => PantsPoint::Vertex(act_on_decomposition(model, f, x)),
        PantsPoint::Edge { x, a, y } => PantsPoint::normalize(
            act_on_decomposition(model, f, x),
            *a,
            act_on_decomposition(model, f, y),
        )
        .expect("the action maps edges to edges"),
    }
}

/// A profile sequence with a stabilization certificate: after index
/// `stabilization[k].1`, exponents agree with the limit profile on every
/// base curve of `S_{stabilization[k].0}`.
#[derive(Clone, Debug)]
pub struct CertifiedProfileStream {
    pub terms: Vec<TwistProfile>,
    pub stabilization: Vec<(ExhaustionIndex, usize)>,
}

impl CertifiedProfileStream {
    /// The truncated partial products of a profile: term `k` applies the
    /// limit's exponents on sites up to the boundary of `S_k` and nothing
    /// beyond.
    pub fn truncations(model: &SurfaceModel, f: &TwistProfile, len: usize) -> Self {
        let mut terms = Vec::new();
        for k in 0..len {
            let bound = model.boundary_site(k as ExhaustionIndex);
            let overrides: BTreeMap<CurveId, i64> = (0..=bound)
                .filter_map(|j| {
                    let e = f.exponent(j);
                    (e != 0).then_some((j, e))
                })
                .collect();
            terms.push(TwistProfile::finite(overrides));
        }
        let stabilization = (0..len).map(|k| (k as ExhaustionIndex, k)).collect();
        CertifiedProfileStream { terms, stabilization }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileConvergence {
    pub terms_checked: usize,
    pub depth: ExhaustionIndex,
}

/// Validates the stabilization certificate on the materialized prefix:
/// this is the compact-open convergence proxy for twist profiles.
pub fn profile_converges(
    model: &SurfaceModel,
    stream: &CertifiedProfileStream,
    f: &TwistProfile,
    k_max: ExhaustionIndex,
) -> Result<ProfileConvergence> {
    let mut depth = 0;
    for &(k, idx) in &stream.stabilization {
        if k > k_max {
            continue;
        }
        depth = depth.max(k);
        let bound = model.boundary_site(k);
        for (t, term) in stream.terms.iter().enumerate().skip(idx) {
            for j in 0..=bound {
                if term.exponent(j) != f.exponent(j) {
                    return Err(Error::CertificateViolation(format!(
                        "profile {t} disagrees with the limit at base curve {j} inside S_{k}"
                    )));
                }
            }
        }
    }
    Ok(ProfileConvergence { terms_checked: stream.terms.len(), depth })
}

/// Applies the profile stream to the point stream term by term and checks
/// that the image stream converges to `f(P)`, with the image certificate
/// derived from the input certificates: exponents and occupants on the
/// sites of `S_n` determine the image data on `S_n`, so the image
/// stabilizes once both inputs have.
pub fn action_continuity_test(
    model: &SurfaceModel,
    level: crate::agreement::AgreementLevel,
    profiles: &CertifiedProfileStream,
    points: &CertifiedPointStream,
    f: &TwistProfile,
    p: &PantsPoint,
) -> Result<ConvergenceVerdict> {
    if profiles.terms.len() != points.reps.len() {
        return Err(Error::CertificateViolation(
            "profile and point streams have different lengths".into(),
        ));
    }
    let k_max = profiles
        .stabilization
        .iter()
        .map(|&(k, _)| k)
        .max()
        .unwrap_or(0);
    profile_converges(model, profiles, f, k_max)?;
    pspace::converges(model, level, points, p)?;
    let image_reps: Vec<_> = profiles
        .terms
        .iter()
        .zip(&points.reps)
        .map(|(fj, (x, a, y))| {
            (
                act_on_decomposition(model, fj, x),
                *a,
                act_on_decomposition(model, fj, y),
            )
        })
        .collect();
    let derive = |stab: &[(ExhaustionIndex, usize)]| -> Vec<(ExhaustionIndex, usize)> {
        stab.iter()
            .filter_map(|&(n, idx)| {
                profiles
                    .stabilization
                    .iter()
                    .find(|&&(k, _)| k >= n)
                    .map(|&(_, pidx)| (n, idx.max(pidx)))
            })
            .collect()
    };
    let image_stream = CertifiedPointStream {
        reps: image_reps,
        clause: points.clause,
        x_stab: derive(&points.x_stab),
        y_stab: derive(&points.y_stab),
        a_mod: points.a_mod.clone(),
        a_limit: points.a_limit,
    };
    let image_limit = act_on_point(model, f, p);
    pspace::converges(model, level, &image_stream, &image_limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agreement::{agrees, AgreementLevel};
    use crate::decomposition::same_component;
    use crate::metric::rat;
    use crate::oracle;

    fn m() -> SurfaceModel {
        SurfaceModel::build(4).unwrap()
    }

    fn s(n: i64, d: i64) -> Slope {
        Slope::new(n, d).unwrap()
    }

    fn lv(i: u8) -> AgreementLevel {
        AgreementLevel::new(i).unwrap()
    }

    #[test]
    fn zero_profile_is_identity() {
        let model = m();
        let f = TwistProfile::zero();
        let c = Curve::window(&model, 3, s(2, 5));
        assert_eq!(act_on_curve(&f, &c), c);
        let x = PantsDecomposition::base();
        assert_eq!(act_on_decomposition(&model, &f, &x), x);
    }

    #[test]
    fn base_curves_are_fixed() {
        let model = m();
        let f = TwistProfile::new(vec![1, -2, 3], BTreeMap::from([(5, 7)])).unwrap();
        for j in 0..30 {
            assert_eq!(act_on_curve(&f, &Curve::base(j)), Curve::base(j));
        }
        // any profile fixes the base decomposition curve-wise
        let x = PantsDecomposition::base();
        assert_eq!(act_on_decomposition(&model, &f, &x), x);
    }

    #[test]
    fn twist_adds_exponent_times_m() {
        let model = m();
        let f = TwistProfile::finite(BTreeMap::from([(3, 1)]));
        let c = Curve::window(&model, 3, s(0, 2)); // would not be reduced; use (1,2)
        let _ = c;
        let c = Curve::window(&model, 3, s(1, 2)); // m = 2 at site 3
        let tc = act_on_curve(&f, &c);
        assert_eq!(tc.t_at(3), c.t_at(3) + 2);
        assert_eq!(tc.m_at(3), c.m_at(3));
    }

    #[test]
    fn torus_transvection_matches_oracle() {
        let model = m();
        let f = TwistProfile::finite(BTreeMap::from([(3, 1)]));
        for a in oracle::slopes_of_height(3) {
            for b in oracle::slopes_of_height(3) {
                let ta = act_on_curve(&f, &Curve::window(&model, 3, a));
                let tb = act_on_curve(&f, &Curve::window(&model, 3, b));
                let (_, sa) = ta.as_window(&model).unwrap();
                let (_, sb) = tb.as_window(&model).unwrap();
                assert_eq!(
                    oracle::torus_intersection(sa, sb),
                    oracle::torus_intersection(a, b),
                    "transvection must preserve intersections ({a},{b})"
                );
            }
        }
    }

    #[test]
    fn group_laws() {
        let model = m();
        let f = TwistProfile::new(vec![1, 0], BTreeMap::from([(4, -3)])).unwrap();
        let g = TwistProfile::new(vec![0, 2, 5], BTreeMap::new()).unwrap();
        let c = Curve::window(&model, 7, s(1, 2));
        let fg = f.compose(&g);
        assert_eq!(act_on_curve(&fg, &c), act_on_curve(&f, &act_on_curve(&g, &c)));
        let id = f.compose(&f.inverse());
        assert_eq!(act_on_curve(&id, &c), c);
        let x = PantsDecomposition::new(
            &model,
            TailPattern::base(),
            BTreeMap::from([(7, s(1, 2)), (12, s(2, 3))]),
        )
        .unwrap();
        assert_eq!(
            act_on_decomposition(&model, &f.inverse(), &act_on_decomposition(&model, &f, &x)),
            x
        );
    }

    #[test]
    fn finite_support_stays_in_component() {
        let model = m();
        let f = TwistProfile::finite(BTreeMap::from([(0, 2), (7, -1), (12, 3)]));
        let x = PantsDecomposition::new(
            &model,
            TailPattern::new(&model, vec![s(0, 1), Slope::BASE, Slope::BASE]).unwrap(),
            BTreeMap::from([(7, s(1, 2))]),
        )
        .unwrap();
        let fx = act_on_decomposition(&model, &f, &x);
        assert!(same_component(&x, &fx));
        // infinitely supported profiles can leave the component on
        // deviated tails
        let g = TwistProfile::new(vec![1], BTreeMap::new()).unwrap();
        let gx = act_on_decomposition(&model, &g, &x);
        assert!(!same_component(&x, &gx));
    }

    #[test]
    fn untouched_region_four_agrees() {
        let model = m();
        // profile supported beyond S_1
        let far = model.boundary_site(1) + 5;
        let f = TwistProfile::finite(BTreeMap::from([(far, 2)]));
        let x = PantsDecomposition::new(
            &model,
            TailPattern::base(),
            BTreeMap::from([(3, s(1, 2)), (far, s(1, 1))]),
        )
        .unwrap();
        let fx = act_on_decomposition(&model, &f, &x);
        for n in 0..=1 {
            assert!(agrees(&model, lv(4), &x, &fx, n));
        }
        assert!(!agrees(&model, lv(4), &x, &fx, 3));
    }

    #[test]
    fn nonzero_profiles_move_crossing_curves() {
        let model = m();
        let f = TwistProfile::finite(BTreeMap::from([(3, 1)]));
        let c = Curve::window(&model, 3, s(0, 1));
        assert_ne!(act_on_curve(&f, &c), c);
    }

    #[test]
    fn profile_stream_certificates() {
        let model = m();
        let f = TwistProfile::new(vec![1], BTreeMap::new()).unwrap();
        let stream = CertifiedProfileStream::truncations(&model, &f, 5);
        profile_converges(&model, &stream, &f, 4).unwrap();
        // constant stream converges
        let constant = CertifiedProfileStream {
            terms: vec![f.clone(); 4],
            stabilization: (0..4).map(|k| (k, 0)).collect(),
        };
        profile_converges(&model, &constant, &f, 3).unwrap();
        // a stream flipping an exponent forever fails
        let mut flip = constant.clone();
        flip.terms[3] = TwistProfile::finite(BTreeMap::from([(0, 99)]));
        assert!(profile_converges(&model, &flip, &f, 3).is_err());
    }

    #[test]
    fn action_continuity_on_truncated_twists() {
        let model = m();
        let f = TwistProfile::new(vec![1], BTreeMap::new()).unwrap();
        let profiles = CertifiedProfileStream::truncations(&model, &f, 5);
        // point stream: truncations of a target decomposition
        let x = PantsDecomposition::base();
        let y = x.with_occupant(&model, 3, s(0, 1)).unwrap();
        let mut reps = Vec::new();
        for k in 0..5u32 {
            let far = 3 * (model.last_block(k) + 1);
            let xk = x.with_occupant(&model, far, s(1, 1)).unwrap();
            let yk = xk.with_occupant(&model, 3, s(0, 1)).unwrap();
            reps.push((xk, rat(1, 3), yk));
        }
        let points = CertifiedPointStream {
            reps,
            clause: pspace::Clause::Components,
            x_stab: (0..5).map(|k| (k as u32, k)).collect(),
            y_stab: (0..5).map(|k| (k as u32, k)).collect(),
            a_mod: vec![(1, 0)],
            a_limit: rat(1, 3),
        };
        let p = PantsPoint::normalize(x, rat(1, 3), y).unwrap();
        let verdict =
            action_continuity_test(&model, lv(1), &profiles, &points, &f, &p).unwrap();
        assert_eq!(verdict.clause, pspace::Clause::Components);
    }
}
