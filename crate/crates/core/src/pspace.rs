//! The pants space: vertices together with edge points `(X, a, Y)`, the
//! basic open sets of its topology as decidable membership predicates and
//! samplers, convergence certificates for point sequences, separation
//! witnesses, closure predicates, and the explicit path construction.
//!
//! No open set is ever materialized: every basic open is infinite, so the
//! module exposes membership tests whose inner existential quantifiers
//! are resolved constructively through the sitewise agreement calculus
//! (`agreement::class_has_neighbor_into`).

use num::Signed;
use rand::Rng;

use crate::agreement::{self, AgreementLevel};
use crate::decomposition::PantsDecomposition;
use crate::error::{Error, Result};
use crate::metric::{self, rat, ConvergePath, Rat};
use crate::model::{ExhaustionIndex, SurfaceModel};
use crate::slope::Slope;

/// A point of the pants space: a vertex or an interior edge point.
/// Edge points are normalized so the smaller endpoint comes first,
/// resolving `(X, a, Y) = (Y, 1-a, X)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PantsPoint {
    Vertex(PantsDecomposition),
    Edge {
        x: PantsDecomposition,
        a: Rat,
        y: PantsDecomposition,
    },
}

impl PantsPoint {
    pub fn vertex(x: PantsDecomposition) -> PantsPoint {
        PantsPoint::Vertex(x)
    }

    /// Normalizes a raw triple: collapses endpoints, orients canonically,
    /// and rejects non-adjacent endpoint pairs.
    pub fn normalize(x: PantsDecomposition, a: Rat, y: PantsDecomposition) -> Result<PantsPoint> {
        if a < rat(0, 1) || a > rat(1, 1) {
            return Err(Error::ParamRange(format!("edge parameter {a} outside [0, 1]")));
        }
        if !metric::adjacent(&x, &y) {
            return Err(Error::NotAdjacent(
                "edge points require endpoints that differ by one elementary move".into(),
            ));
        }
        if a == rat(0, 1) {
            return Ok(PantsPoint::Vertex(x));
        }
        if a == rat(1, 1) {
            return Ok(PantsPoint::Vertex(y));
        }
        if x <= y {
            Ok(PantsPoint::Edge { x, a, y })
        } else {
            Ok(PantsPoint::Edge { x: y, a: rat(1, 1) - a, y: x })
        }
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self, PantsPoint::Vertex(_))
    }

    /// The two representations of an edge point (one for a vertex).
    fn reps(&self) -> Vec<(PantsDecomposition, Rat, PantsDecomposition)> {
        match self {
            PantsPoint::Vertex(_) => vec![],
            PantsPoint::Edge { x, a, y } => vec![
                (x.clone(), *a, y.clone()),
                (y.clone(), rat(1, 1) - *a, x.clone()),
            ],
        }
    }
}

/// Pointwise agreement on `S_n`: vertices delegate to the vertex relation;
/// edge points must agree componentwise under some matching of
/// representations with equal edge parameters.
pub fn point_agrees(
    model: &SurfaceModel,
    level: AgreementLevel,
    p: &PantsPoint,
    q: &PantsPoint,
    n: ExhaustionIndex,
) -> bool {
    match (p, q) {
        (PantsPoint::Vertex(a), PantsPoint::Vertex(b)) => agreement::agrees(model, level, a, b, n),
        (PantsPoint::Edge { x: x1, a: a1, y: y1 }, PantsPoint::Edge { .. }) => {
            q.reps().iter().any(|(x2, a2, y2)| {
                a1 == a2
                    && agreement::agrees(model, level, x1, x2, n)
                    && agreement::agrees(model, level, y1, y2, n)
            })
        }
        _ => false,
    }
}

fn floor_inverse(eps: Rat) -> Result<ExhaustionIndex> {
    if eps <= rat(0, 1) || eps > rat(1, 1) {
        return Err(Error::ParamRange(format!(
            "basic opens are indexed by rational eps in (0, 1], got {eps}"
        )));
    }
    let inv = rat(1, 1) / eps;
    Ok(inv.floor().to_integer() as ExhaustionIndex)
}

/// Membership in the basic open set of radius `eps` around `P`, using the
/// single-parameter convention `n = floor(1/eps)`.
pub fn in_basic_open(
    model: &SurfaceModel,
    level: AgreementLevel,
    eps: Rat,
    p: &PantsPoint,
    q: &PantsPoint,
) -> Result<bool> {
    let n = floor_inverse(eps)?;
    in_basic_open_at(model, level, eps, n, p, q)
}

/// Membership in the two-parameter basic open set (`eps` bounds the graph
/// step, `n` the agreement depth).
pub fn in_basic_open_at(
    model: &SurfaceModel,
    level: AgreementLevel,
    eps: Rat,
    n: ExhaustionIndex,
    p: &PantsPoint,
    q: &PantsPoint,
) -> Result<bool> {
    if eps <= rat(0, 1) || eps > rat(1, 1) {
        return Err(Error::ParamRange(format!(
            "basic opens support rational eps in (0, 1], got {eps}"
        )));
    }
    Ok(membership(model, level, eps, n, p, q, true))
}

/// Membership in the closure of the basic open set, by the closed-form
/// descriptions (`<=` in place of `<`).  Parameter ranges follow the
/// closed-form hypotheses: `eps <= 1/2` for a vertex center; for an edge
/// center, `eps < max(a, 1-a)` and `n` large enough to separate the
/// endpoints.
pub fn in_closure(
    model: &SurfaceModel,
    level: AgreementLevel,
    eps: Rat,
    n: ExhaustionIndex,
    p: &PantsPoint,
    q: &PantsPoint,
) -> Result<bool> {
    if eps <= rat(0, 1) {
        return Err(Error::ParamRange("eps must be positive".into()));
    }
    match p {
        PantsPoint::Vertex(_) => {
            if eps > rat(1, 2) {
                return Err(Error::ParamRange(
                    "closure formula for a vertex center needs eps <= 1/2".into(),
                ));
            }
        }
        PantsPoint::Edge { x, a, y } => {
            let margin = (*a).max(rat(1, 1) - *a);
            if eps >= margin {
                return Err(Error::ParamRange(
                    "closure formula for an edge center needs eps < max(a, 1-a)".into(),
                ));
            }
            if agreement::agrees(model, level, x, y, n) {
                return Err(Error::ParamRange(
                    "closure formula needs n separating the edge endpoints".into(),
                ));
            }
        }
    }
    Ok(membership(model, level, eps, n, p, q, false))
}

/// Shared membership core.  `strict` selects the open set (`<`) versus
/// its closure (`<=`).
fn membership(
    model: &SurfaceModel,
    level: AgreementLevel,
    eps: Rat,
    n: ExhaustionIndex,
    p: &PantsPoint,
    q: &PantsPoint,
    strict: bool,
) -> bool {
    let lt = |a: Rat, b: Rat| if strict { a < b } else { a <= b };
    let ag = |u: &PantsDecomposition, v: &PantsDecomposition| agreement::agrees(model, level, u, v, n);
    let chn = |u: &PantsDecomposition, v: &PantsDecomposition| {
        agreement::class_has_neighbor_into(model, level, n, u, v).is_some()
    };
    match p {
        PantsPoint::Vertex(x) => match q {
            PantsPoint::Vertex(qv) => ag(x, qv),
            PantsPoint::Edge { .. } => q.reps().iter().any(|(q1, aq, q2)| {
                // whole edges inside the class, or a short step onto an
                // incident edge
                (ag(q1, x) && ag(q2, x)) || (ag(q1, x) && lt(*aq, eps))
            }),
        },
        PantsPoint::Edge { .. } => p.reps().iter().any(|(x, a, y)| match q {
            PantsPoint::Vertex(qv) => lt(*a, eps) && ag(qv, x),
            PantsPoint::Edge { .. } => q.reps().iter().any(|(q1, aq, q2)| {
                // slice around the edge's own class
                (ag(q1, x) && ag(q2, y) && lt((*aq - *a).abs(), eps))
                    // through the X'-side vertex: whole incident edges...
                    || (lt(*a, eps) && ag(q1, x) && ag(q2, x))
                    // ...or a short step onto another incident edge
                    || (lt(*a + *aq, eps) && ag(q1, x) && chn(x, y) && chn(x, q2))
            }),
        }),
    }
}

/// Clause of the convergence definition a certified stream claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// Componentwise convergence of edge representations with convergent
    /// edge parameters.
    Components,
    /// Vertex limit: first components converge to it, parameters to 0.
    VertexShrink,
    /// Vertex limit: both component streams converge to it.
    VertexSqueeze,
}

/// A sequence of points with one chosen representation per term and
/// moduli certifying the claimed convergence clause.
#[derive(Clone, Debug)]
pub struct CertifiedPointStream {
    pub reps: Vec<(PantsDecomposition, Rat, PantsDecomposition)>,
    pub clause: Clause,
    /// After index `x_stab[k].1`, first components agree with the limit's
    /// on `S_{x_stab[k].0}`.
    pub x_stab: Vec<(ExhaustionIndex, usize)>,
    /// Same for second components (clauses 1 and 3).
    pub y_stab: Vec<(ExhaustionIndex, usize)>,
    /// After index `a_mod[k].1`, `|a_j - a_limit| < 1/a_mod[k].0`.
    pub a_mod: Vec<(u32, usize)>,
    pub a_limit: Rat,
}

impl CertifiedPointStream {
    pub fn points(&self) -> Result<Vec<PantsPoint>> {
        self.reps
            .iter()
            .map(|(x, a, y)| {
                if *a == rat(0, 1) || *a == rat(1, 1) || metric::adjacent(x, y) {
                    PantsPoint::normalize(x.clone(), *a, y.clone())
                } else {
                    Err(Error::NotAdjacent("stream term is not a valid point".into()))
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvergenceVerdict {
    pub clause: Clause,
    pub terms_checked: usize,
}

/// Validates the claimed clause of the certificate on the materialized
/// prefix.
pub fn converges(
    model: &SurfaceModel,
    level: AgreementLevel,
    stream: &CertifiedPointStream,
    p: &PantsPoint,
) -> Result<ConvergenceVerdict> {
    let check_component = |target: &PantsDecomposition,
                           stab: &[(ExhaustionIndex, usize)],
                           side: usize|
     -> Result<()> {
        for &(nn, idx) in stab {
            for (k, (x, _, y)) in stream.reps.iter().enumerate().skip(idx) {
                let comp = if side == 0 { x } else { y };
                if !agreement::agrees(model, level, comp, target, nn) {
                    return Err(Error::CertificateViolation(format!(
                        "term {k} component {side} does not agree with the limit on S_{nn}"
                    )));
                }
            }
        }
        Ok(())
    };
    let check_a = |limit: Rat| -> Result<()> {
        for &(kk, idx) in &stream.a_mod {
            for (j, (_, a, _)) in stream.reps.iter().enumerate().skip(idx) {
                if (*a - limit).abs() >= rat(1, kk as i64) {
                    return Err(Error::CertificateViolation(format!(
                        "term {j} parameter {a} is not within 1/{kk} of {limit}"
                    )));
                }
            }
        }
        Ok(())
    };
    match (stream.clause, p) {
        (Clause::Components, PantsPoint::Edge { x, a, y }) => {
            // the certificate fixes one orientation of the limit
            let direct = check_component(x, &stream.x_stab, 0)
                .and_then(|_| check_component(y, &stream.y_stab, 1))
                .and_then(|_| {
                    if stream.a_limit == *a {
                        check_a(*a)
                    } else {
                        Err(Error::CertificateViolation("parameter limit mismatch".into()))
                    }
                });
            if direct.is_err() {
                check_component(y, &stream.x_stab, 0)?;
                check_component(x, &stream.y_stab, 1)?;
                if stream.a_limit != rat(1, 1) - *a {
                    return Err(Error::CertificateViolation("parameter limit mismatch".into()));
                }
                check_a(stream.a_limit)?;
            }
            Ok(ConvergenceVerdict { clause: Clause::Components, terms_checked: stream.reps.len() })
        }
        (Clause::VertexShrink, PantsPoint::Vertex(v)) => {
            check_component(v, &stream.x_stab, 0)?;
            if stream.a_limit != rat(0, 1) {
                return Err(Error::CertificateViolation(
                    "vertex-shrink streams need parameter limit 0".into(),
                ));
            }
            check_a(rat(0, 1))?;
            Ok(ConvergenceVerdict { clause: Clause::VertexShrink, terms_checked: stream.reps.len() })
        }
        (Clause::VertexSqueeze, PantsPoint::Vertex(v)) => {
            check_component(v, &stream.x_stab, 0)?;
            check_component(v, &stream.y_stab, 1)?;
            Ok(ConvergenceVerdict { clause: Clause::VertexSqueeze, terms_checked: stream.reps.len() })
        }
        _ => Err(Error::CertificateViolation(
            "clause does not match the limit point's kind".into(),
        )),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparationCase {
    EdgeParameterGap,
    EdgeEndpointClasses,
    Vertices,
    VertexVersusEdge,
}

#[derive(Clone, Debug)]
pub struct SeparationWitness {
    pub eps: Rat,
    pub n: ExhaustionIndex,
    pub case: SeparationCase,
}

/// Smallest index at which the two decompositions stop agreeing.  Defined
/// for distinct decompositions; the first differing site becomes interior
/// soon enough.
fn separation_index(
    model: &SurfaceModel,
    level: AgreementLevel,
    u: &PantsDecomposition,
    v: &PantsDecomposition,
) -> Option<ExhaustionIndex> {
    if u == v {
        return None;
    }
    let limit = u.horizon(model).max(v.horizon(model)) + 3;
    (0..=limit).find(|&n| !agreement::agrees(model, level, u, v, n))
}

/// Parameters of two provably disjoint basic opens around distinct
/// points, following the Hausdorff case analysis: separate parameters
/// when possible, otherwise separate endpoint classes.
pub fn separation_witness(
    model: &SurfaceModel,
    level: AgreementLevel,
    p: &PantsPoint,
    q: &PantsPoint,
) -> Result<SeparationWitness> {
    if p == q {
        return Err(Error::PointsEqual);
    }
    let half = |r: Rat| r / rat(2, 1);
    let margin = |a: Rat| a.min(rat(1, 1) - a);
    match (p, q) {
        (PantsPoint::Vertex(u), PantsPoint::Vertex(v)) => {
            let n = separation_index(model, level, u, v).ok_or(Error::PointsEqual)?;
            Ok(SeparationWitness { eps: rat(1, 2), n, case: SeparationCase::Vertices })
        }
        (PantsPoint::Vertex(_), PantsPoint::Edge { x, a, y })
        | (PantsPoint::Edge { x, a, y }, PantsPoint::Vertex(_)) => {
            let n = separation_index(model, level, x, y)
                .expect("edge endpoints are distinct decompositions");
            Ok(SeparationWitness {
                eps: half(margin(*a)),
                n,
                case: SeparationCase::VertexVersusEdge,
            })
        }
        (PantsPoint::Edge { x: x1, a: a1, y: y1 }, PantsPoint::Edge { x: x2, a: a2, y: y2 }) => {
            let g1 = (*a1 - *a2).abs();
            let g2 = (*a1 + *a2 - rat(1, 1)).abs();
            let margins = margin(*a1).min(margin(*a2));
            if g1 != rat(0, 1) && g2 != rat(0, 1) {
                // no matching equalizes the parameters: slice separation
                let eps = half(g1.min(g2).min(margins));
                // endpoint separation keeps the slices honest
                let n = separation_index(model, level, x1, y1)
                    .unwrap_or(0)
                    .max(separation_index(model, level, x2, y2).unwrap_or(0));
                Ok(SeparationWitness { eps, n, case: SeparationCase::EdgeParameterGap })
            } else {
                // parameters can be matched under some representation: the
                // edges must differ there, so separate every unequal
                // endpoint pair; the other matching may still leave a
                // nonzero parameter gap, which eps has to clear as well
                // (the same-edge pair (x, a, y), (x, 1-a, y) collides at
                // the midpoint otherwise)
                let mut n = 0;
                let all = [x1, y1, x2, y2];
                for (i, u) in all.iter().enumerate() {
                    for v in all.iter().skip(i + 1) {
                        if let Some(m) = separation_index(model, level, u, v) {
                            n = n.max(m);
                        }
                    }
                }
                let mut eps = margins;
                for gap in [g1, g2] {
                    if gap != rat(0, 1) {
                        eps = eps.min(gap);
                    }
                }
                Ok(SeparationWitness {
                    eps: half(eps),
                    n,
                    case: SeparationCase::EdgeEndpointClasses,
                })
            }
        }
    }
}

/// Sampled members of the basic open `eps`-set around `p`, used to probe
/// separation witnesses.  All returned points satisfy the membership
/// predicate by construction: far perturbations preserve every agreement
/// class on `S_n`, so they work at any level.
pub fn sample_basic_open(
    model: &SurfaceModel,
    _level: AgreementLevel,
    eps: Rat,
    n: ExhaustionIndex,
    p: &PantsPoint,
    rng: &mut impl Rng,
    count: usize,
) -> Vec<PantsPoint> {
    let mut out = vec![p.clone()];
    for _ in 0..count {
        match p {
            PantsPoint::Vertex(x) => {
                let x2 = far_perturbation(model, n, x, rng);
                out.push(PantsPoint::Vertex(x2.clone()));
                // an incident edge point within eps
                let denom = rng.gen_range(3..9i64);
                let a = eps * rat(1, denom);
                if a > rat(0, 1) && a < rat(1, 1) {
                    let y = far_perturbation(model, n, &x2, rng);
                    if let Ok(pt) = PantsPoint::normalize(x2, a, y) {
                        out.push(pt);
                    }
                }
            }
            PantsPoint::Edge { x, a, y } => {
                // perturb both endpoints by the same far move so they stay
                // adjacent, then wiggle the parameter inside the slice
                let x2 = far_perturbation(model, n, x, rng);
                let site = crate::decomposition::defining_site(x, y)
                    .expect("edge endpoints differ by one elementary move");
                let y2 = x2
                    .with_occupant(model, site, y.occupant(site))
                    .expect("the defining move of the edge applies to the perturbed endpoint");
                let denom = rng.gen_range(3..9i64);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                let a2 = *a + eps * rat(sign, denom);
                if a2 > rat(0, 1) && a2 < rat(1, 1) && (a2 - *a).abs() < eps {
                    if let Ok(pt) = PantsPoint::normalize(x2, a2, y2) {
                        out.push(pt);
                    }
                }
            }
        }
    }
    out.truncate(count.max(1));
    out
}

/// A perturbation at a far handle site: invisible to every fingerprint on
/// `S_n`, so it stays inside the agreement class.  The site is chosen
/// beyond the decomposition's own horizon, where every overlapping site
/// still follows the tail rule.
pub fn far_perturbation<R: Rng>(
    model: &SurfaceModel,
    n: ExhaustionIndex,
    d: &PantsDecomposition,
    rng: &mut R,
) -> PantsDecomposition {
    let horizon_block = model.last_block(d.horizon(model));
    let block = model.last_block(n).max(horizon_block) + 2 + rng.gen_range(0..4);
    let slope = Slope::new(rng.gen_range(-2..3), 1).unwrap();
    d.with_occupant(model, 3 * block, slope)
        .expect("far handle perturbations stay valid")
}

/// The explicit path function through a converging move word: `f(1 - 1/n)`
/// is the n-th vertex, `f(1)` the target, and the interior parameters
/// interpolate along the successive edges.
pub fn path_point(model: &SurfaceModel, path: &ConvergePath, t: Rat) -> Result<PantsPoint> {
    let _ = model;
    if t < rat(0, 1) || t > rat(1, 1) {
        return Err(Error::ParamRange(format!("path parameter {t} outside [0, 1]")));
    }
    if t == rat(1, 1) {
        return Ok(PantsPoint::Vertex(path.target.clone()));
    }
    if path.states.len() == 1 {
        return Ok(PantsPoint::Vertex(path.states[0].clone()));
    }
    // find n >= 1 with 1 - 1/n <= t < 1 - 1/(n+1)
    let one = rat(1, 1);
    let mut n: i64 = 1;
    while one - rat(1, n + 1) <= t {
        n += 1;
        if n as usize > path.states.len() + 1 {
            return Err(Error::BudgetExhausted(
                "path parameter requires vertices beyond the materialized word".into(),
            ));
        }
    }
    let lower = one - rat(1, n);
    if t == lower {
        let idx = (n - 1) as usize;
        if idx >= path.states.len() {
            return Err(Error::BudgetExhausted(
                "path parameter requires vertices beyond the materialized word".into(),
            ));
        }
        return Ok(PantsPoint::Vertex(path.states[idx].clone()));
    }
    let idx = (n - 1) as usize;
    if idx + 1 >= path.states.len() {
        return Err(Error::BudgetExhausted(
            "path parameter requires vertices beyond the materialized word".into(),
        ));
    }
    // normalize the offset to traverse the whole edge
    let a = (t - lower) * rat(n, 1) * rat(n + 1, 1);
    PantsPoint::normalize(path.states[idx].clone(), a, path.states[idx + 1].clone())
}

/// The unordered endpoint pair of an edge point: two edge points lie in
/// the same connected component of the edge-point subspace exactly when
/// their classes coincide.
pub fn edge_class(p: &PantsPoint) -> Result<(PantsDecomposition, PantsDecomposition)> {
    match p {
        PantsPoint::Edge { x, y, .. } => Ok((x.clone(), y.clone())),
        PantsPoint::Vertex(_) => Err(Error::ParamRange("vertices have no edge class".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::TailPattern;
    use crate::model::CurveId;
    use rand::SeedableRng;

    fn m() -> SurfaceModel {
        SurfaceModel::build(4).unwrap()
    }

    fn s(n: i64, d: i64) -> Slope {
        Slope::new(n, d).unwrap()
    }

    fn lv(i: u8) -> AgreementLevel {
        AgreementLevel::new(i).unwrap()
    }

    fn with(model: &SurfaceModel, entries: &[(CurveId, Slope)]) -> PantsDecomposition {
        PantsDecomposition::new(model, TailPattern::base(), entries.iter().copied().collect())
            .unwrap()
    }

    #[test]
    fn normalize_collapses_and_orients() {
        let model = m();
        let x = PantsDecomposition::base();
        let y = with(&model, &[(3, s(0, 1))]);
        assert_eq!(
            PantsPoint::normalize(x.clone(), rat(0, 1), y.clone()).unwrap(),
            PantsPoint::Vertex(x.clone())
        );
        assert_eq!(
            PantsPoint::normalize(x.clone(), rat(1, 1), y.clone()).unwrap(),
            PantsPoint::Vertex(y.clone())
        );
        let p = PantsPoint::normalize(x.clone(), rat(1, 3), y.clone()).unwrap();
        let q = PantsPoint::normalize(y.clone(), rat(2, 3), x.clone()).unwrap();
        assert_eq!(p, q);
        // non-adjacent pairs rejected
        let z = with(&model, &[(3, s(1, 2))]);
        assert!(PantsPoint::normalize(x, rat(1, 2), z).is_err());
    }

    #[test]
    fn point_agreement_matchings() {
        let model = m();
        let x = PantsDecomposition::base();
        let y = with(&model, &[(3, s(0, 1))]);
        let p = PantsPoint::normalize(x.clone(), rat(1, 3), y.clone()).unwrap();
        assert!(point_agrees(&model, lv(1), &p, &p, 3));
        // components perturbed beyond S_n
        let far = 3 * (model.last_block(2) + 2);
        let x2 = x.with_occupant(&model, far, s(0, 1)).unwrap();
        let y2 = y.with_occupant(&model, far, s(0, 1)).unwrap();
        let q = PantsPoint::normalize(x2, rat(1, 3), y2).unwrap();
        assert!(point_agrees(&model, lv(1), &p, &q, 2));
        // equal components but different parameter
        let r = PantsPoint::normalize(x.clone(), rat(1, 4), y.clone()).unwrap();
        assert!(!point_agrees(&model, lv(1), &p, &r, 2));
        // mixed kinds never agree
        assert!(!point_agrees(&model, lv(1), &p, &PantsPoint::Vertex(x), 2));
    }

    #[test]
    fn basic_open_membership_vertex_center() {
        let model = m();
        let x = PantsDecomposition::base();
        let p = PantsPoint::Vertex(x.clone());
        assert!(in_basic_open(&model, lv(1), rat(1, 2), &p, &p).unwrap());
        // vertex in the class
        let far = 3 * (model.last_block(2) + 2);
        let x2 = x.with_occupant(&model, far, s(0, 1)).unwrap();
        assert!(in_basic_open(&model, lv(1), rat(1, 2), &p, &PantsPoint::Vertex(x2.clone())).unwrap());
        // incident edge point within eps
        let y = with(&model, &[(3, s(0, 1))]);
        let close = PantsPoint::normalize(x.clone(), rat(1, 3), y.clone()).unwrap();
        assert!(in_basic_open(&model, lv(1), rat(1, 2), &p, &close).unwrap());
        let farther = PantsPoint::normalize(x.clone(), rat(2, 3), y.clone()).unwrap();
        assert!(!in_basic_open(&model, lv(1), rat(1, 2), &p, &farther).unwrap());
        // vertex outside the class
        let z = with(&model, &[(3, s(0, 1))]);
        assert!(!in_basic_open(&model, lv(1), rat(1, 2), &p, &PantsPoint::Vertex(z)).unwrap());
    }

    #[test]
    fn basic_open_membership_edge_center() {
        let model = m();
        let x = PantsDecomposition::base();
        let y = with(&model, &[(3, s(0, 1))]);
        let a = rat(1, 2);
        let p = PantsPoint::normalize(x.clone(), a, y.clone()).unwrap();
        // eps below both margins: the slice holds no vertices
        let eps = rat(1, 3);
        assert!(!in_basic_open(&model, lv(1), eps, &p, &PantsPoint::Vertex(x.clone())).unwrap());
        // slice member: same classes, nearby parameter
        let q = PantsPoint::normalize(x.clone(), rat(5, 12), y.clone()).unwrap();
        assert!(in_basic_open(&model, lv(1), eps, &p, &q).unwrap());
        // parameter too far
        let q = PantsPoint::normalize(x.clone(), rat(1, 12), y.clone()).unwrap();
        assert!(!in_basic_open(&model, lv(1), eps, &p, &q).unwrap());
        // through-vertex route with eps above the margin
        let p_near = PantsPoint::normalize(x.clone(), rat(1, 4), y.clone()).unwrap();
        let other = with(&model, &[(6, s(0, 1))]);
        let q = PantsPoint::normalize(x.clone(), rat(1, 3), other).unwrap();
        assert!(in_basic_open(&model, lv(1), rat(3, 4), &p_near, &q).unwrap());
    }

    #[test]
    fn closure_membership_edge_center() {
        let model = m();
        let x = PantsDecomposition::base();
        let y = with(&model, &[(3, s(0, 1))]);
        let a = rat(1, 2);
        let p = PantsPoint::normalize(x.clone(), a, y.clone()).unwrap();
        let eps = rat(1, 4);
        let n = 1;
        // open-set member lies in the closure
        let q = PantsPoint::normalize(x.clone(), rat(5, 12), y.clone()).unwrap();
        assert!(in_closure(&model, lv(1), eps, n, &p, &q).unwrap());
        // boundary point at exactly a + eps: in the closure, not the open set
        let q = PantsPoint::normalize(x.clone(), a + eps, y.clone()).unwrap();
        assert!(!in_basic_open(&model, lv(1), eps, &p, &q).unwrap());
        assert!(in_closure(&model, lv(1), eps, n, &p, &q).unwrap());
        // past the closed band
        let q = PantsPoint::normalize(x.clone(), a + eps + rat(1, 8), y.clone()).unwrap();
        assert!(!in_closure(&model, lv(1), eps, n, &p, &q).unwrap());
        // parameter validation
        assert!(in_closure(&model, lv(1), rat(2, 3), n, &p, &q).is_err());
    }

    #[test]
    fn separation_witnesses_disjoint_on_probes() {
        let model = m();
        let x = PantsDecomposition::base();
        let y = with(&model, &[(3, s(0, 1))]);
        let z = with(&model, &[(0, s(1, 1))]);
        let pairs = vec![
            (PantsPoint::Vertex(x.clone()), PantsPoint::Vertex(y.clone())),
            (
                PantsPoint::Vertex(x.clone()),
                PantsPoint::normalize(x.clone(), rat(1, 2), y.clone()).unwrap(),
            ),
            (
                PantsPoint::normalize(x.clone(), rat(1, 3), y.clone()).unwrap(),
                PantsPoint::normalize(x.clone(), rat(2, 3), y.clone()).unwrap(),
            ),
            (
                PantsPoint::normalize(x.clone(), rat(1, 2), y.clone()).unwrap(),
                PantsPoint::normalize(x.clone(), rat(1, 2), z.clone()).unwrap(),
            ),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (p, q) in pairs {
            let w = separation_witness(&model, lv(1), &p, &q).unwrap();
            for probe in sample_basic_open(&model, lv(1), w.eps, w.n, &p, &mut rng, 6) {
                assert!(
                    !membership(&model, lv(1), w.eps, w.n, &q, &probe, true),
                    "probe of the first open lies in the second ({:?})",
                    w.case
                );
            }
            for probe in sample_basic_open(&model, lv(1), w.eps, w.n, &q, &mut rng, 6) {
                assert!(!membership(&model, lv(1), w.eps, w.n, &p, &probe, true));
            }
        }
    }

    #[test]
    fn separation_handles_flip_symmetric_parameters() {
        let model = m();
        let x = PantsDecomposition::base();
        let y = with(&model, &[(3, s(0, 1))]);
        // same edge, parameters symmetric about 1/2: the midpoint sits
        // between both bands unless eps clears the parameter gap
        let p = PantsPoint::normalize(x.clone(), rat(2, 5), y.clone()).unwrap();
        let q = PantsPoint::normalize(x.clone(), rat(3, 5), y.clone()).unwrap();
        let w = separation_witness(&model, lv(1), &p, &q).unwrap();
        let mid = PantsPoint::normalize(x.clone(), rat(1, 2), y.clone()).unwrap();
        let in_p = in_basic_open_at(&model, lv(1), w.eps, w.n, &p, &mid).unwrap();
        let in_q = in_basic_open_at(&model, lv(1), w.eps, w.n, &q, &mid).unwrap();
        assert!(!(in_p && in_q), "witness opens overlap at the midpoint");
        // and more broadly on a parameter sweep
        for num in 1..20i64 {
            let probe = PantsPoint::normalize(x.clone(), rat(num, 20), y.clone()).unwrap();
            let in_p = in_basic_open_at(&model, lv(1), w.eps, w.n, &p, &probe).unwrap();
            let in_q = in_basic_open_at(&model, lv(1), w.eps, w.n, &q, &probe).unwrap();
            assert!(!(in_p && in_q), "overlap at parameter {num}/20");
        }
    }

    #[test]
    fn convergence_clauses_validate() {
        let model = m();
        let x = PantsDecomposition::base();
        let y = with(&model, &[(3, s(0, 1))]);
        let p = PantsPoint::normalize(x.clone(), rat(2, 5), y.clone()).unwrap();
        // clause 1: truncations agree more and more deeply
        let mut reps = Vec::new();
        for k in 0..5u64 {
            let far = 3 * (model.last_block(k as u32) + 1);
            let xk = x.with_occupant(&model, far, s(0, 1)).unwrap();
            let yk = xk.with_occupant(&model, 3, s(0, 1)).unwrap();
            reps.push((xk, rat(2, 5), yk));
        }
        let stream = CertifiedPointStream {
            reps,
            clause: Clause::Components,
            x_stab: (0..5).map(|k| (k as u32, k)).collect(),
            y_stab: (0..5).map(|k| (k as u32, k)).collect(),
            a_mod: vec![(1, 0)],
            a_limit: rat(2, 5),
        };
        let v = converges(&model, lv(1), &stream, &p).unwrap();
        assert_eq!(v.clause, Clause::Components);
        // clause 2 toward the vertex x
        let mut reps = Vec::new();
        for k in 1..6u64 {
            let far = 3 * (model.last_block(k as u32 - 1) + 1);
            let xk = x.with_occupant(&model, far, s(1, 1)).unwrap();
            let yk = xk.with_occupant(&model, far + 3, s(0, 1)).unwrap();
            reps.push((xk, rat(1, k as i64 + 1), yk));
        }
        let stream2 = CertifiedPointStream {
            reps,
            clause: Clause::VertexShrink,
            x_stab: (0..5).map(|k| (k as u32, k)).collect(),
            y_stab: vec![],
            a_mod: (1..=5).map(|k| (k as u32, k - 1)).collect(),
            a_limit: rat(0, 1),
        };
        converges(&model, lv(1), &stream2, &PantsPoint::Vertex(x.clone())).unwrap();
        // certificate violations detected
        let mut bad = stream2.clone();
        bad.reps[4].0 = with(&model, &[(0, s(0, 1))]);
        assert!(converges(&model, lv(1), &bad, &PantsPoint::Vertex(x)).is_err());
    }

    #[test]
    fn path_point_endpoints_and_interpolation() {
        let model = m();
        let x = PantsDecomposition::base();
        let y = with(&model, &[(0, s(1, 1)), (12, s(0, 1))]);
        let path = metric::converge_path(&model, &x, &y, 2).unwrap();
        assert_eq!(path_point(&model, &path, rat(0, 1)).unwrap(), PantsPoint::Vertex(x));
        assert_eq!(path_point(&model, &path, rat(1, 1)).unwrap(), PantsPoint::Vertex(y));
        // t = 1 - 1/3 lands on the third vertex of the word
        if path.states.len() >= 3 {
            assert_eq!(
                path_point(&model, &path, rat(2, 3)).unwrap(),
                PantsPoint::Vertex(path.states[2].clone())
            );
        }
        // interior parameters give edge points between consecutive vertices
        let p = path_point(&model, &path, rat(1, 4)).unwrap();
        match p {
            PantsPoint::Edge { .. } => {}
            PantsPoint::Vertex(_) => panic!("interior parameter must give an edge point"),
        }
    }

    #[test]
    fn edge_classes() {
        let model = m();
        let x = PantsDecomposition::base();
        let y = with(&model, &[(3, s(0, 1))]);
        let p = PantsPoint::normalize(x.clone(), rat(1, 3), y.clone()).unwrap();
        let q = PantsPoint::normalize(y.clone(), rat(1, 3), x.clone()).unwrap();
        assert_eq!(edge_class(&p).unwrap(), edge_class(&q).unwrap());
        let z = with(&model, &[(6, s(0, 1))]);
        let r = PantsPoint::normalize(x.clone(), rat(1, 3), z).unwrap();
        assert_ne!(edge_class(&p).unwrap(), edge_class(&r).unwrap());
        assert!(edge_class(&PantsPoint::Vertex(x)).is_err());
    }

    #[test]
    fn ratio_floor_indexing() {
        assert_eq!(floor_inverse(rat(1, 1)).unwrap(), 1);
        assert_eq!(floor_inverse(rat(1, 2)).unwrap(), 2);
        assert_eq!(floor_inverse(rat(1, 3)).unwrap(), 3);
        assert_eq!(floor_inverse(rat(2, 5)).unwrap(), 2);
        assert!(floor_inverse(rat(3, 2)).is_err());
    }
}
