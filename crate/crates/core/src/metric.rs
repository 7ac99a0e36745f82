//! The vertex-space metric: the partial step distance, certified distance
//! bounds, converging paths, limits of stabilizing streams, and the
//! non-ultrametricity witness.
//!
//! All values are exact rationals.  The step distance takes values in
//! `{0} ∪ {1/n}`; the induced path metric is only ever reported as a
//! certified interval `[lo, hi]` with an explicit witness sequence for the
//! upper bound, since computing exact distances above 1 is open-ended.

use num::rational::Ratio;

use crate::agreement::{self, AgreementLevel, MaxAgreement};
use crate::decomposition::{
    self, ElementaryMove, PantsDecomposition, SymmetricDifference, TailPattern,
};
use crate::error::{Error, Result};
use crate::model::{CurveId, ExhaustionIndex, SurfaceModel};
use crate::slope::Slope;

pub type Rat = Ratio<i64>;

pub fn rat(num: i64, den: i64) -> Rat {
    Ratio::new(num, den)
}

/// Value of the partial step distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dhat {
    Exact(Rat),
    /// Agreement extended past the probe bound: the value is below this.
    Below(Rat),
    Undefined,
}

impl Dhat {
    pub fn exact(self) -> Option<Rat> {
        match self {
            Dhat::Exact(v) => Some(v),
            _ => None,
        }
    }

    /// A valid upper estimate (`Exact` and `Below` only).
    fn upper(self) -> Option<Rat> {
        match self {
            Dhat::Exact(v) => Some(v),
            Dhat::Below(b) => Some(b),
            Dhat::Undefined => None,
        }
    }
}

fn requires_level(level: AgreementLevel) -> Result<()> {
    if level.get() == 0 {
        return Err(Error::ParamRange(
            "the step distance is defined for levels 1..=4".into(),
        ));
    }
    Ok(())
}

/// Whether the decompositions differ by a single elementary move.
pub fn adjacent(x: &PantsDecomposition, y: &PantsDecomposition) -> bool {
    match decomposition::symmetric_difference(x, y) {
        SymmetricDifference::Finite(d) => d.len() == 1 && d[0].1.is_adjacent(d[0].2),
        SymmetricDifference::Infinite { .. } => false,
    }
}

/// The partial step distance: 0 on equal decompositions, `1/n` when the
/// pair agrees on `S_{n-1}` but not `S_n`, 1 on adjacent pairs that
/// disagree even on `S_0`, undefined on non-adjacent such pairs.
pub fn dhat(
    model: &SurfaceModel,
    level: AgreementLevel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
    n_max: ExhaustionIndex,
) -> Result<Dhat> {
    requires_level(level)?;
    if x == y {
        return Ok(Dhat::Exact(rat(0, 1)));
    }
    Ok(match agreement::max_agreement(model, level, x, y, n_max) {
        MaxAgreement::DisagreeOnBase => {
            if adjacent(x, y) {
                Dhat::Exact(rat(1, 1))
            } else {
                Dhat::Undefined
            }
        }
        MaxAgreement::Exact(m) => Dhat::Exact(rat(1, m as i64 + 1)),
        MaxAgreement::AtLeast(n) => Dhat::Below(rat(1, n as i64)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UltraCheck {
    pub d_xy: Rat,
    pub d_yz: Rat,
    pub d_xz: Rat,
    pub holds: bool,
}

/// Checks the strong triangle inequality `d(X,Z) <= max(d(X,Y), d(Y,Z))`
/// on a triple where all three step distances are defined.
pub fn ultrametric_check(
    model: &SurfaceModel,
    level: AgreementLevel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
    z: &PantsDecomposition,
    n_max: ExhaustionIndex,
) -> Result<UltraCheck> {
    let get = |a: &PantsDecomposition, b: &PantsDecomposition| -> Result<Rat> {
        dhat(model, level, a, b, n_max)?.exact().ok_or_else(|| {
            Error::NotApplicable("a pairwise step distance is undefined or unresolved".into())
        })
    };
    let d_xy = get(x, y)?;
    let d_yz = get(y, z)?;
    let d_xz = get(x, z)?;
    Ok(UltraCheck { d_xy, d_yz, d_xz, holds: d_xz <= d_xy.max(d_yz) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub value: Rat,
    /// Exhaustion index containing the windows of the witness sites.
    pub n: ExhaustionIndex,
    pub witness_sites: Vec<CurveId>,
}

/// Certified lower bound `1 + 1/n` for pairs whose step distance is
/// undefined, with `n` the least index (at least 1) such that `S_n`
/// contains the window of the differing curve (one difference) or the
/// windows of two differing curves.
pub fn lower_bound(
    model: &SurfaceModel,
    level: AgreementLevel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
) -> Result<LowerBound> {
    requires_level(level)?;
    if x == y || agreement::agrees(model, level, x, y, 0) || adjacent(x, y) {
        return Err(Error::StepDistanceDefined);
    }
    let witness_sites: Vec<CurveId> = match decomposition::symmetric_difference(x, y) {
        SymmetricDifference::Finite(d) => {
            let sites: Vec<CurveId> = d.iter().map(|(j, _, _)| *j).collect();
            if sites.len() == 1 {
                sites
            } else {
                sites[..2].to_vec()
            }
        }
        SymmetricDifference::Infinite { .. } => {
            // first two differing sites; window depth is monotone in the
            // site index, so these minimize the containment index
            let mut found = Vec::new();
            let mut j: CurveId = 0;
            while found.len() < 2 {
                if x.occupant(j) != y.occupant(j) {
                    found.push(j);
                }
                j += 1;
            }
            found
        }
    };
    let n_raw = witness_sites
        .iter()
        .map(|&j| model.window_exhaustion(j))
        .max()
        .unwrap();
    let n = n_raw.max(1);
    Ok(LowerBound { value: rat(1, 1) + rat(1, n as i64), n, witness_sites })
}

#[derive(Clone, Debug)]
pub struct DistBounds {
    pub lo: Rat,
    pub hi: Rat,
    pub exact: bool,
    /// Sequence of decompositions whose step-distance sum realizes `hi`.
    pub witness: Vec<PantsDecomposition>,
}

/// Certified bounds on the path distance.  Exact whenever the step
/// distance is defined; otherwise a lower bound from window containment
/// and an upper bound from the best witness chain found (unit-move runs
/// through the base region plus class jumps for everything beyond).
pub fn distance(
    model: &SurfaceModel,
    level: AgreementLevel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
    budget: ExhaustionIndex,
) -> Result<DistBounds> {
    requires_level(level)?;
    let probe = probe_depth(model, x, y, budget);
    match dhat(model, level, x, y, probe)? {
        Dhat::Exact(v) => Ok(DistBounds {
            lo: v,
            hi: v,
            exact: true,
            witness: if x == y { vec![x.clone()] } else { vec![x.clone(), y.clone()] },
        }),
        Dhat::Below(b) => Ok(DistBounds {
            lo: rat(0, 1),
            hi: b,
            exact: false,
            witness: vec![x.clone(), y.clone()],
        }),
        Dhat::Undefined => {
            let lo = lower_bound(model, level, x, y)?;
            let mut best: Option<(Rat, Vec<PantsDecomposition>)> = None;
            for plan in [plan_moves_then_jump(model, x, y), plan_jump_then_moves(model, x, y)]
                .into_iter()
                .flatten()
            {
                if let Some(total) = evaluate_chain(model, level, &plan, probe) {
                    if best.as_ref().is_none_or(|(t, _)| total < *t) {
                        best = Some((total, plan));
                    }
                }
            }
            let (hi, witness) = best.ok_or_else(|| {
                Error::BudgetExhausted("no witness chain could be evaluated".into())
            })?;
            Ok(DistBounds { lo: lo.value, hi, exact: lo.value == hi, witness })
        }
    }
}

fn probe_depth(
    model: &SurfaceModel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
    budget: ExhaustionIndex,
) -> ExhaustionIndex {
    x.horizon(model).max(y.horizon(model)).max(budget) + 2
}

/// Sum of consecutive step-distance upper estimates along a chain.
fn evaluate_chain(
    model: &SurfaceModel,
    level: AgreementLevel,
    chain: &[PantsDecomposition],
    probe: ExhaustionIndex,
) -> Option<Rat> {
    let mut total = rat(0, 1);
    for w in chain.windows(2) {
        total += dhat(model, level, &w[0], &w[1], probe).ok()?.upper()?;
    }
    Some(total)
}

/// Move word aligning `cur` with `target` on the given sites, in two
/// phases: first the sites where `cur` deviates (whose windows are intact
/// by validity), then the sites where only `target` deviates (whose
/// overlapping sites are base on both sides by then).
fn align_sites(
    model: &SurfaceModel,
    cur: &mut PantsDecomposition,
    target: &PantsDecomposition,
    sites: &[CurveId],
) -> Result<Vec<ElementaryMove>> {
    let mut word = Vec::new();
    let run = |cur: &mut PantsDecomposition, site: CurveId, word: &mut Vec<ElementaryMove>| -> Result<()> {
        let path = cur.occupant(site).path_to(target.occupant(site));
        for w in path.windows(2) {
            let mv = ElementaryMove { site, from: w[0], to: w[1] };
            *cur = decomposition::apply_move(model, cur, &mv)?;
            word.push(mv);
        }
        Ok(())
    };
    for &site in sites {
        if cur.occupant(site) != target.occupant(site) && !cur.occupant(site).is_base() {
            run(cur, site, &mut word)?;
        }
    }
    for &site in sites {
        if cur.occupant(site) != target.occupant(site) {
            run(cur, site, &mut word)?;
        }
    }
    Ok(word)
}

/// Witness chain: unit-move runs fixing every differing site in the base
/// region, then one jump within the common agreement class.
fn plan_moves_then_jump(
    model: &SurfaceModel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
) -> Option<Vec<PantsDecomposition>> {
    let bs0 = model.boundary_site(0);
    let sites = x.differing_sites_up_to(y, bs0);
    let mut chain = vec![x.clone()];
    let mut cur = x.clone();
    let before = chain.len();
    let word = align_sites(model, &mut cur, y, &sites).ok()?;
    let mut replay = x.clone();
    for mv in &word {
        replay = decomposition::apply_move(model, &replay, mv).ok()?;
        chain.push(replay.clone());
    }
    debug_assert_eq!(replay, cur);
    let _ = before;
    if chain.last() != Some(y) {
        chain.push(y.clone());
    }
    Some(chain)
}

/// Witness chain: jump to the hybrid splice carrying `x`'s data inside
/// `S_0` and `y`'s outside (repaired by inserting base curves at seam
/// conflicts), then unit-move runs, then a closing jump if repairs remain.
fn plan_jump_then_moves(
    model: &SurfaceModel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
) -> Option<Vec<PantsDecomposition>> {
    let bs0 = model.boundary_site(0);
    // hybrid: y's tail and far data, x's occupants inside S_0
    let mut overrides = std::collections::BTreeMap::new();
    for (&j, &s) in y.overrides() {
        if j > bs0 {
            overrides.insert(j, s);
        }
    }
    for j in 0..=bs0 {
        overrides.insert(j, x.occupant(j));
    }
    // repair seam conflicts: an inside deviation whose window overlaps a
    // deviated outside site forces the outside site back to its base curve
    for j in 0..=bs0 {
        if overrides.get(&j).is_some_and(|s| !s.is_base()) {
            for l in model.overlapping_sites(j) {
                let outside_dev = l > bs0
                    && !overrides
                        .get(&l)
                        .copied()
                        .unwrap_or_else(|| y.tail().slope_at(l))
                        .is_base();
                if outside_dev {
                    overrides.insert(l, Slope::BASE);
                }
            }
        }
    }
    let hybrid = PantsDecomposition::new(model, y.tail().clone(), overrides).ok()?;
    let mut chain = vec![x.clone()];
    if hybrid != *x {
        chain.push(hybrid.clone());
    }
    let sites = hybrid.differing_sites_up_to(y, bs0);
    let mut cur = hybrid;
    let word = align_sites(model, &mut cur, y, &sites).ok()?;
    let mut replay = chain.last().unwrap().clone();
    for mv in &word {
        replay = decomposition::apply_move(model, &replay, mv).ok()?;
        chain.push(replay.clone());
    }
    if chain.last() != Some(y) {
        chain.push(y.clone());
    }
    Some(chain)
}

/// A move word converging to `y`: stage `k` aligns the sites of the shell
/// between `S_{k-1}` and `S_k`, so it never touches `S_{k-1}` data, and
/// ends agreeing with `y` on `S_k` while containing `∂S_k`.
#[derive(Clone, Debug)]
pub struct ConvergePath {
    pub start: PantsDecomposition,
    pub target: PantsDecomposition,
    pub word: Vec<ElementaryMove>,
    /// `stage_ends[k]` is the word index after which stage `k` is done.
    pub stage_ends: Vec<usize>,
    /// All intermediate decompositions (`states[0] = start`).
    pub states: Vec<PantsDecomposition>,
}

impl ConvergePath {
    /// The decomposition at the end of stage `k`.
    pub fn stage_state(&self, k: usize) -> &PantsDecomposition {
        &self.states[self.stage_ends[k]]
    }
}

pub fn converge_path(
    model: &SurfaceModel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
    depth: ExhaustionIndex,
) -> Result<ConvergePath> {
    for k in 0..=depth {
        if !y.occupant(model.boundary_site(k)).is_base() {
            return Err(Error::ParamRange(format!(
                "target deviates at the boundary site of S_{k}; the chart-aligned staged path needs base curves there"
            )));
        }
    }
    let mut cur = x.clone();
    let mut word = Vec::new();
    let mut states = vec![x.clone()];
    let mut stage_ends = Vec::new();
    for k in 0..=depth {
        let lo = if k == 0 { 0 } else { model.boundary_site(k - 1) + 1 };
        let hi = model.boundary_site(k);
        let sites: Vec<CurveId> = (lo..=hi).collect();
        let stage_word = align_sites(model, &mut cur, y, &sites)?;
        for mv in &stage_word {
            let prev = states.last().unwrap();
            states.push(decomposition::apply_move(model, prev, mv)?);
        }
        word.extend(stage_word);
        stage_ends.push(word.len());
        debug_assert!(cur.occupant(model.boundary_site(k)).is_base());
    }
    Ok(ConvergePath { start: x.clone(), target: y.clone(), word, stage_ends, states })
}

/// A stream of decompositions with a stabilization certificate: after
/// index `stabilization[k].1`, all terms agree on `S_{stabilization[k].0}`
/// with the limit.  `limit_tail` declares the limit beyond the horizon the
/// finite prefix can pin down.
#[derive(Clone, Debug)]
pub struct CertifiedDecompositionStream {
    pub terms: Vec<PantsDecomposition>,
    pub stabilization: Vec<(ExhaustionIndex, usize)>,
    pub limit_tail: TailPattern,
}

impl CertifiedDecompositionStream {
    pub fn constant(x: &PantsDecomposition, len: usize, depth: ExhaustionIndex) -> Self {
        CertifiedDecompositionStream {
            terms: vec![x.clone(); len],
            stabilization: (0..=depth).map(|n| (n, 0)).collect(),
            limit_tail: x.tail().clone(),
        }
    }

    /// The stage states of a converging path, certified by its stages.
    pub fn from_converge_path(path: &ConvergePath) -> Self {
        let terms: Vec<PantsDecomposition> =
            (0..path.stage_ends.len()).map(|k| path.stage_state(k).clone()).collect();
        let stabilization = (0..terms.len()).map(|k| (k as ExhaustionIndex, k)).collect();
        CertifiedDecompositionStream {
            terms,
            stabilization,
            limit_tail: path.target.tail().clone(),
        }
    }
}

/// Assembles the limit of a stabilizing stream and validates the
/// certificate on the materialized prefix.
pub fn limit_of(
    model: &SurfaceModel,
    level: AgreementLevel,
    stream: &CertifiedDecompositionStream,
) -> Result<PantsDecomposition> {
    requires_level(level)?;
    if stream.terms.is_empty() || stream.stabilization.is_empty() {
        return Err(Error::CertificateViolation("empty stream or certificate".into()));
    }
    let (n_top, idx_top) = *stream
        .stabilization
        .iter()
        .max_by_key(|(n, _)| *n)
        .unwrap();
    let pin = stream
        .terms
        .get(idx_top)
        .ok_or_else(|| Error::CertificateViolation("stabilization index beyond the prefix".into()))?;
    let mut overrides = std::collections::BTreeMap::new();
    for j in 0..=model.boundary_site(n_top) {
        overrides.insert(j, pin.occupant(j));
    }
    let limit = PantsDecomposition::new(model, stream.limit_tail.clone(), overrides)
        .map_err(|e| Error::CertificateViolation(format!("assembled limit is invalid: {e}")))?;
    for &(n, idx) in &stream.stabilization {
        for (k, term) in stream.terms.iter().enumerate().skip(idx) {
            if !agreement::agrees(model, level, term, &limit, n) {
                return Err(Error::CertificateViolation(format!(
                    "term {k} does not agree with the assembled limit on S_{n}"
                )));
            }
        }
    }
    Ok(limit)
}

/// A triple witnessing that the metric is not an ultrametric: both legs
/// have step distance at most 1 while the certified lower bound on the
/// ends exceeds 1.
pub fn find_nonultrametric_witness(
    model: &SurfaceModel,
    level: AgreementLevel,
) -> Result<(PantsDecomposition, PantsDecomposition, PantsDecomposition)> {
    requires_level(level)?;
    let near = 0; // handle site inside S_0
    let far = 3 * (model.last_block(0) + 1); // first handle site beyond S_0
    let zero = Slope::new(0, 1).unwrap();
    let one = Slope::new(1, 1).unwrap();
    let mk = |entries: &[(CurveId, Slope)]| {
        PantsDecomposition::new(model, TailPattern::base(), entries.iter().copied().collect())
    };
    let x = mk(&[(near, zero), (far, zero)])?;
    let y = mk(&[(near, zero), (far, one)])?;
    let z = mk(&[(far, one)])?;
    let probe = probe_depth(model, &x, &z, 2);
    let leg = |a: &PantsDecomposition, b: &PantsDecomposition| -> Result<Rat> {
        dhat(model, level, a, b, probe)?
            .exact()
            .ok_or_else(|| Error::BudgetExhausted("witness leg did not resolve".into()))
    };
    let d_xy = leg(&x, &y)?;
    let d_yz = leg(&y, &z)?;
    let lb = lower_bound(model, level, &x, &z)?;
    if d_xy <= rat(1, 1) && d_yz <= rat(1, 1) && lb.value > rat(1, 1) {
        Ok((x, y, z))
    } else {
        Err(Error::BudgetExhausted(
            "constructed triple failed verification".into(),
        ))
    }
}
