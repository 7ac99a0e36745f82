//! The seeded property battery behind the `suite` CLI subcommand and the
//! acceptance tests: one record per check, each re-verifying a family of
//! structural properties at desk scale.  Every sample is drawn from a
//! seeded generator, so a fixed configuration reproduces byte-identical
//! results.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::agreement::{self, AgreementLevel};
use crate::curve::Curve;
use crate::decomposition::{
    self, enumerate_moves, same_component, PantsDecomposition, TailPattern,
};
use crate::error::Result;
use crate::metric::{self, rat, CertifiedDecompositionStream, Dhat, Rat};
use crate::model::{CurveId, ExhaustionIndex, SurfaceModel};
use crate::oracle;
use crate::pspace::{self, CertifiedPointStream, Clause, PantsPoint};
use crate::slope::Slope;
use crate::twist::{self, CertifiedProfileStream, TwistProfile};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub shell_size: u32,
    pub seed: u64,
    pub pairs: usize,
    pub triples: usize,
    pub gap_pairs: usize,
    pub path_fixtures: usize,
    pub windowed_pairs: usize,
    pub coherence_probes: usize,
    pub continuity_fixtures: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            shell_size: 4,
            seed: 7,
            pairs: 10_000,
            triples: 10_000,
            gap_pairs: 100,
            path_fixtures: 20,
            windowed_pairs: 100,
            coherence_probes: 100,
            continuity_fixtures: 20,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRecord {
    pub check: String,
    pub pass: bool,
    pub details: serde_json::Value,
}

impl SuiteRecord {
    fn new(check: &str, pass: bool, details: serde_json::Value) -> SuiteRecord {
        SuiteRecord { check: check.to_string(), pass, details }
    }
}

/// Runs the whole battery and returns one record per check, in a fixed
/// order.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<SuiteRecord>> {
    let model = SurfaceModel::build(config.shell_size)?;
    Ok(CHECKS.iter().map(|(_, check)| check(&model, config)).collect())
}

type Check = fn(&SurfaceModel, &SuiteConfig) -> SuiteRecord;

const CHECKS: [(&str, Check); 10] = [
    ("agreement-hierarchy", check_hierarchy),
    ("separating-fixtures", check_separating_fixtures),
    ("equivalence-partition", check_equivalence_partition),
    ("metric-axioms", check_metric_axioms),
    ("gap-bound", check_gap_bound),
    ("non-ultrametric", check_non_ultrametric),
    ("converging-path", check_converging_paths),
    ("oracle-equivalence", check_oracle_equivalence),
    ("pants-space-coherence", check_pants_space_coherence),
    ("action-continuity", check_action_continuity),
];

/// Runs a single named check of the battery.
pub fn run_check(config: &SuiteConfig, name: &str) -> Result<SuiteRecord> {
    let model = SurfaceModel::build(config.shell_size)?;
    CHECKS
        .iter()
        .find(|(slug, _)| *slug == name)
        .map(|(_, check)| check(&model, config))
        .ok_or_else(|| crate::error::Error::ParamRange(format!("unknown check `{name}`")))
}

fn lv(i: u8) -> AgreementLevel {
    AgreementLevel::new(i).unwrap()
}

struct Sampler<'a> {
    model: &'a SurfaceModel,
    rng: ChaCha8Rng,
    slopes: Vec<Slope>,
    tails: Vec<TailPattern>,
}

impl<'a> Sampler<'a> {
    fn new(model: &'a SurfaceModel, seed: u64, salt: u64) -> Sampler<'a> {
        let handle_tail =
            TailPattern::new(model, vec![Slope::new(0, 1).unwrap(), Slope::BASE, Slope::BASE])
                .unwrap();
        let handle_tail_alt =
            TailPattern::new(model, vec![Slope::new(1, 1).unwrap(), Slope::BASE, Slope::BASE])
                .unwrap();
        Sampler {
            model,
            rng: ChaCha8Rng::seed_from_u64(seed ^ (salt.wrapping_mul(0x9e37_79b9))),
            slopes: oracle::slopes_of_height(3),
            tails: vec![TailPattern::base(), handle_tail, handle_tail_alt],
        }
    }

    fn slope(&mut self) -> Slope {
        *self.slopes.choose(&mut self.rng).unwrap()
    }

    fn decomposition(&mut self, max_site: CurveId, deviations: usize) -> PantsDecomposition {
        let tail = self.tails.choose(&mut self.rng).unwrap().clone();
        let mut x = PantsDecomposition::new(self.model, tail, BTreeMap::new()).unwrap();
        for _ in 0..deviations {
            let site = self.rng.gen_range(0..=max_site);
            let slope = self.slope();
            if let Ok(next) = x.with_occupant(self.model, site, slope) {
                x = next;
            }
        }
        x
    }

    /// Perturbs finitely many sites of `x`, keeping validity.
    fn perturb(&mut self, x: &PantsDecomposition, max_site: CurveId, tries: usize) -> PantsDecomposition {
        let mut y = x.clone();
        for _ in 0..tries {
            let site = self.rng.gen_range(0..=max_site);
            let slope = self.slope();
            if let Ok(next) = y.with_occupant(self.model, site, slope) {
                y = next;
            }
        }
        y
    }

    /// A partner often related to `x` on small exhaustions: either a far
    /// perturbation, a boundary-twin flip, or a fresh draw.
    fn partner(&mut self, x: &PantsDecomposition, max_site: CurveId) -> PantsDecomposition {
        match self.rng.gen_range(0..4u8) {
            0 => x.clone(),
            1 => {
                // twin flip at a deviated site, invisible to coarse levels
                let deviated: Vec<CurveId> = (0..=max_site)
                    .filter(|&j| !x.occupant(j).is_base())
                    .collect();
                if let Some(&site) = deviated.choose(&mut self.rng) {
                    let s = x.occupant(site);
                    if let Ok(flip) = Slope::new(-s.num(), s.den()) {
                        if let Ok(y) = x.with_occupant(self.model, site, flip) {
                            return y;
                        }
                    }
                }
                x.clone()
            }
            2 => self.perturb(x, max_site, 1),
            _ => self.decomposition(max_site, 3),
        }
    }
}

fn check_hierarchy(model: &SurfaceModel, config: &SuiteConfig) -> SuiteRecord {
    let mut sampler = Sampler::new(model, config.seed, 1);
    let max_site = model.boundary_site(5) + 6;
    let mut violations = 0u64;
    let mut agree_events = 0u64;
    let start = std::time::Instant::now();
    for _ in 0..config.pairs {
        let x = sampler.decomposition(max_site, 3);
        let y = sampler.partner(&x, max_site);
        for n in 0..=5u32 {
            for i in 0..4u8 {
                if agreement::agrees(model, lv(i), &x, &y, n) {
                    agree_events += 1;
                    if !agreement::agrees(model, lv(i + 1), &x, &y, n) {
                        violations += 1;
                    }
                }
            }
        }
    }
    // runtime budget enforced, but not embedded: suite output stays
    // byte-identical across runs
    let within_budget = start.elapsed().as_secs() < 60;
    SuiteRecord::new(
        "agreement-hierarchy",
        violations == 0 && within_budget,
        json!({
            "pairs": config.pairs,
            "agree_implications_checked": agree_events,
            "violations": violations,
        }),
    )
}

/// The frozen separating fixtures at the boundary site of `S_0`, found by
/// the bounded search and pinned here as literals.
pub fn frozen_separating_fixtures(
    model: &SurfaceModel,
) -> Vec<(u8, PantsDecomposition, PantsDecomposition)> {
    let b = model.boundary_site(0);
    let mk = |entries: &[(CurveId, Slope)]| {
        PantsDecomposition::new(model, TailPattern::base(), entries.iter().copied().collect())
            .unwrap()
    };
    let s = |n: i64, d: i64| Slope::new(n, d).unwrap();
    vec![
        (2, mk(&[(b, s(1, 1))]), mk(&[(b, s(-1, 1))])),
        (3, mk(&[(b, s(1, 1))]), mk(&[(b, s(1, 2))])),
        (4, mk(&[]), mk(&[(b, s(1, 1))])),
    ]
}

fn check_separating_fixtures(model: &SurfaceModel, _config: &SuiteConfig) -> SuiteRecord {
    let mut pass = true;
    let mut found = Vec::new();
    for (i, x, y) in frozen_separating_fixtures(model) {
        let strong = agreement::agrees(model, lv(i), &x, &y, 0);
        let weak = agreement::agrees(model, lv(i - 1), &x, &y, 0);
        pass &= strong && !weak;
        found.push(json!({ "level": i, "agrees": strong, "weaker_agrees": weak }));
    }
    // the bounded search rediscovers pairs of each kind
    for i in 2..=4u8 {
        match agreement::make_separating_pair(model, lv(i), 0, 2) {
            Ok((a, b)) => {
                pass &= agreement::agrees(model, lv(i), &a, &b, 0)
                    && !agreement::agrees(model, lv(i - 1), &a, &b, 0);
            }
            Err(_) => pass = false,
        }
    }
    SuiteRecord::new("separating-fixtures", pass, json!({ "fixtures": found }))
}

fn check_equivalence_partition(model: &SurfaceModel, config: &SuiteConfig) -> SuiteRecord {
    let mut sampler = Sampler::new(model, config.seed, 3);
    let max_site = model.boundary_site(3) + 6;
    let mut violations = 0u64;
    let mut transitive_hits = 0u64;
    for _ in 0..config.triples {
        let x = sampler.decomposition(max_site, 2);
        let y = sampler.partner(&x, max_site);
        let z = sampler.partner(&y, max_site);
        let n = sampler.rng.gen_range(0..=3u32);
        for i in 1..=4u8 {
            let level = lv(i);
            // reflexivity and symmetry
            if !agreement::agrees(model, level, &x, &x, n) {
                violations += 1;
            }
            let xy = agreement::agrees(model, level, &x, &y, n);
            if xy != agreement::agrees(model, level, &y, &x, n) {
                violations += 1;
            }
            // transitivity
            let yz = agreement::agrees(model, level, &y, &z, n);
            if xy && yz {
                transitive_hits += 1;
                if !agreement::agrees(model, level, &x, &z, n) {
                    violations += 1;
                }
            }
            // bucketing never splits an agreeing pair
            if xy {
                let kx = agreement::ball_key(model, level, n, &x).unwrap();
                let ky = agreement::ball_key(model, level, n, &y).unwrap();
                if kx != ky {
                    violations += 1;
                }
            }
        }
    }
    SuiteRecord::new(
        "equivalence-partition",
        violations == 0,
        json!({
            "triples": config.triples,
            "transitive_instances": transitive_hits,
            "violations": violations,
        }),
    )
}

fn check_metric_axioms(model: &SurfaceModel, config: &SuiteConfig) -> SuiteRecord {
    let mut sampler = Sampler::new(model, config.seed, 4);
    let mut violations = 0u64;
    let mut defined_triples = 0u64;
    let probe = 8;
    // shared base-region pattern so step distances are defined pairwise
    for _ in 0..config.triples {
        let level = lv(sampler.rng.gen_range(1..=4u8));
        let core = sampler.decomposition(model.boundary_site(0), 2);
        let far_lo = model.boundary_site(0) + 1;
        let far_hi = model.boundary_site(4);
        let variant = |sampler: &mut Sampler| {
            let mut v = core.clone();
            for _ in 0..2 {
                let site = sampler.rng.gen_range(far_lo..=far_hi);
                let slope = sampler.slope();
                if let Ok(next) = v.with_occupant(model, site, slope) {
                    v = next;
                }
            }
            v
        };
        let x = variant(&mut sampler);
        let y = variant(&mut sampler);
        let z = variant(&mut sampler);
        // identity and symmetry of the step distance
        if metric::dhat(model, level, &x, &x, probe).unwrap() != Dhat::Exact(rat(0, 1)) {
            violations += 1;
        }
        let dxy = metric::dhat(model, level, &x, &y, probe).unwrap();
        if dxy != metric::dhat(model, level, &y, &x, probe).unwrap() {
            violations += 1;
        }
        if x != y && dxy == Dhat::Exact(rat(0, 1)) {
            violations += 1;
        }
        // strong triangle inequality on defined triples
        if let Ok(check) = metric::ultrametric_check(model, level, &x, &y, &z, probe) {
            defined_triples += 1;
            if !check.holds {
                violations += 1;
            }
        }
        // distance() is exact and equals the step distance when defined
        if let Dhat::Exact(v) = dxy {
            let d = metric::distance(model, level, &x, &y, 4).unwrap();
            if !(d.exact && d.lo == v && d.hi == v) {
                violations += 1;
            }
        }
    }
    SuiteRecord::new(
        "metric-axioms",
        violations == 0 && defined_triples as usize >= config.triples / 2,
        json!({
            "triples": config.triples,
            "defined_triples": defined_triples,
            "violations": violations,
        }),
    )
}

/// Independent recomputation of the gap index: the least `n >= 1` whose
/// exhaustion subsurface contains the window pants of the witness sites,
/// found by direct containment search rather than index arithmetic.
fn recompute_gap_index(model: &SurfaceModel, sites: &[CurveId]) -> ExhaustionIndex {
    for n in 0..64u32 {
        let sub = model.exhaustion(n);
        let ok = sites
            .iter()
            .all(|&j| model.window_pants(j).iter().all(|p| sub.contains_pants(*p)));
        if ok {
            return n.max(1);
        }
    }
    unreachable!("windows of finitely many sites lie in some exhaustion subsurface")
}

fn check_gap_bound(model: &SurfaceModel, config: &SuiteConfig) -> SuiteRecord {
    let mut sampler = Sampler::new(model, config.seed, 5);
    let mut produced = 0usize;
    let mut mismatches = 0u64;
    let mut attempts = 0usize;
    while produced < config.gap_pairs && attempts < config.gap_pairs * 50 {
        attempts += 1;
        let level = lv(sampler.rng.gen_range(1..=4u8));
        let x = sampler.decomposition(model.boundary_site(2), 2);
        let y = sampler.perturb(&x, model.boundary_site(2), 3);
        let Ok(lb) = metric::lower_bound(model, level, &x, &y) else {
            continue;
        };
        produced += 1;
        let independent = recompute_gap_index(model, &lb.witness_sites);
        if independent != lb.n || lb.value != rat(1, 1) + rat(1, lb.n as i64) {
            mismatches += 1;
        }
        // the gap itself: undefined step distance forces lo > 1
        if lb.value <= rat(1, 1) {
            mismatches += 1;
        }
        // and conversely distance() reports the same bound, with a
        // witness chain whose step distances sum to the upper bound
        let d = metric::distance(model, level, &x, &y, 4).unwrap();
        if d.lo != lb.value || d.lo > d.hi {
            mismatches += 1;
        }
        let probe = x.horizon(model).max(y.horizon(model)) + 6;
        let mut total = rat(0, 1);
        let mut summable = true;
        for w in d.witness.windows(2) {
            match metric::dhat(model, level, &w[0], &w[1], probe).unwrap().exact() {
                Some(v) => total += v,
                None => summable = false,
            }
        }
        if !summable || total != d.hi {
            mismatches += 1;
        }
    }
    SuiteRecord::new(
        "gap-bound",
        produced >= config.gap_pairs && mismatches == 0,
        json!({
            "pairs": produced,
            "index_mismatches": mismatches,
        }),
    )
}

fn check_non_ultrametric(model: &SurfaceModel, config: &SuiteConfig) -> SuiteRecord {
    let mut pass = true;
    let mut details = Vec::new();
    for i in 1..=4u8 {
        match metric::find_nonultrametric_witness(model, lv(i)) {
            Ok((x, y, z)) => {
                let probe = 6;
                let d_xy = metric::dhat(model, lv(i), &x, &y, probe).unwrap().exact();
                let d_yz = metric::dhat(model, lv(i), &y, &z, probe).unwrap().exact();
                let lb = metric::lower_bound(model, lv(i), &x, &z).unwrap();
                let ok = d_xy.is_some_and(|v| v <= rat(1, 1))
                    && d_yz.is_some_and(|v| v <= rat(1, 1))
                    && lb.value > rat(1, 1);
                pass &= ok;
                details.push(json!({ "level": i, "lo_exceeds_one": lb.value > rat(1,1) }));
            }
            Err(_) => pass = false,
        }
    }
    // diameter-at-most-1 triples are fully ultrametric
    let mut sampler = Sampler::new(model, config.seed, 6);
    let mut checked = 0u64;
    let mut failures = 0u64;
    for _ in 0..config.triples.min(2_000) {
        let level = lv(sampler.rng.gen_range(1..=4u8));
        let core = sampler.decomposition(model.boundary_site(0), 2);
        let far_lo = model.boundary_site(0) + 1;
        let far_hi = model.boundary_site(3);
        let variant = |sampler: &mut Sampler| {
            let mut v = core.clone();
            let site = sampler.rng.gen_range(far_lo..=far_hi);
            let slope = sampler.slope();
            if let Ok(next) = v.with_occupant(model, site, slope) {
                v = next;
            }
            v
        };
        let x = variant(&mut sampler);
        let y = variant(&mut sampler);
        let z = variant(&mut sampler);
        if let Ok(check) = metric::ultrametric_check(model, level, &x, &y, &z, 7) {
            checked += 1;
            if !check.holds {
                failures += 1;
            }
        }
    }
    SuiteRecord::new(
        "non-ultrametric",
        pass && failures == 0 && checked > 0,
        json!({
            "witnesses": details,
            "diameter_one_triples": checked,
            "ultrametric_failures": failures,
        }),
    )
}

fn check_converging_paths(model: &SurfaceModel, config: &SuiteConfig) -> SuiteRecord {
    let mut sampler = Sampler::new(model, config.seed, 7);
    let depth = 4u32;
    let mut fixtures = 0usize;
    let mut violations = 0u64;
    let mut attempts = 0usize;
    while fixtures < config.path_fixtures && attempts < config.path_fixtures * 20 {
        attempts += 1;
        let x = sampler.decomposition(model.boundary_site(1), 2);
        let mut y = sampler.decomposition(model.boundary_site(depth), 4);
        // keep the chart boundary sites on base curves for the staged path
        for k in 0..=depth {
            if let Ok(fixed) = y.with_occupant(model, model.boundary_site(k), Slope::BASE) {
                y = fixed;
            }
        }
        let Ok(path) = metric::converge_path(model, &x, &y, depth) else {
            continue;
        };
        fixtures += 1;
        // stage words never touch the previous exhaustion subsurface
        let mut idx = 0;
        for (k, &end) in path.stage_ends.iter().enumerate() {
            while idx < end {
                if k > 0 {
                    let prev = model.exhaustion(k as u32 - 1);
                    if path.word[idx]
                        .window_pants(model)
                        .iter()
                        .any(|p| prev.contains_pants(*p))
                    {
                        violations += 1;
                    }
                }
                idx += 1;
            }
        }
        // step distance to the target decays below 1/k after stage k
        for k in 1..=depth {
            let state = path.stage_state(k as usize);
            match metric::dhat(model, lv(1), state, &y, depth + 6).unwrap() {
                Dhat::Exact(v) => {
                    if v >= rat(1, k as i64) {
                        violations += 1;
                    }
                }
                Dhat::Below(b) => {
                    if b > rat(1, k as i64) {
                        violations += 1;
                    }
                }
                Dhat::Undefined => violations += 1,
            }
        }
    }
    SuiteRecord::new(
        "converging-path",
        fixtures >= config.path_fixtures && violations == 0,
        json!({ "fixtures": fixtures, "violations": violations }),
    )
}

fn check_oracle_equivalence(model: &SurfaceModel, config: &SuiteConfig) -> SuiteRecord {
    let start = std::time::Instant::now();
    let mut violations = 0u64;
    // move enumeration matches brute-force adjacency on both window kinds
    let torus_site: CurveId = 3; // handle window {T_1}
    let sphere_site: CurveId = 4; // chain window {C_1, C_2}
    for (site, sub_pants) in [(torus_site, vec![2u64]), (sphere_site, vec![1u64, 3u64])] {
        let sub = crate::model::Subsurface::from_pants(sub_pants);
        let graph = oracle::brute_pants_graph(model, &sub, 3).unwrap();
        for v in &graph.vertices {
            let sigma = v[0];
            let x = PantsDecomposition::base()
                .with_occupant(model, site, sigma)
                .unwrap();
            let alpha = Curve::window(model, site, sigma);
            let set = enumerate_moves(model, &x, &alpha, 3).unwrap();
            let mut engine: Vec<Slope> = set.moves.iter().map(|mv| mv.to).collect();
            engine.sort_unstable();
            let i = graph.vertex_index(v).unwrap();
            let mut brute: Vec<Slope> =
                graph.adjacency[i].iter().map(|&j| graph.vertices[j][0]).collect();
            brute.sort_unstable();
            if engine != brute {
                violations += 1;
            }
        }
    }
    // windowed graph distances match the product of Farey distances
    let mut sampler = Sampler::new(model, config.seed, 8);
    let sites: [CurveId; 2] = [3, 6]; // disjoint handle windows T_1, T_2
    let small = oracle::slopes_of_height(2);
    let mut pairs_checked = 0usize;
    let mut attempts = 0usize;
    while pairs_checked < config.windowed_pairs && attempts < config.windowed_pairs * 60 {
        attempts += 1;
        let pick = |s: &mut Sampler| {
            let a = *small.choose(&mut s.rng).unwrap();
            let b = *small.choose(&mut s.rng).unwrap();
            [a, b]
        };
        let u = pick(&mut sampler);
        let v = pick(&mut sampler);
        let wu = oracle::WindowedDecomposition::new(
            model,
            BTreeMap::from([(sites[0], u[0]), (sites[1], u[1])]),
        )
        .unwrap();
        let wv = oracle::WindowedDecomposition::new(
            model,
            BTreeMap::from([(sites[0], v[0]), (sites[1], v[1])]),
        )
        .unwrap();
        let Ok(product) = oracle::product_distance(&wu, &wv) else {
            continue;
        };
        if product > 4 {
            continue;
        }
        pairs_checked += 1;
        let mk = |t: [Slope; 2]| {
            PantsDecomposition::base()
                .with_occupant(model, sites[0], t[0])
                .unwrap()
                .with_occupant(model, sites[1], t[1])
                .unwrap()
        };
        let x = mk(u);
        let y = mk(v);
        let bfs = decomposition::bfs_distance(model, &x, &y, product as u32, 4, 8);
        if bfs != Some(product as u32) {
            violations += 1;
        }
    }
    let within_budget = start.elapsed().as_secs() < 300;
    SuiteRecord::new(
        "oracle-equivalence",
        violations == 0 && pairs_checked >= config.windowed_pairs && within_budget,
        json!({
            "windowed_pairs": pairs_checked,
            "violations": violations,
        }),
    )
}

/// Clause-1 stream toward an edge point: truncations of both endpoints.
fn density_stream(
    model: &SurfaceModel,
    x: &PantsDecomposition,
    y: &PantsDecomposition,
    a: Rat,
    len: usize,
) -> CertifiedPointStream {
    let mut reps = Vec::new();
    for k in 0..len {
        let bound = model.boundary_site(k as u32);
        // base-component approximation: copy all occupants inside S_k,
        // base curves beyond
        let truncate = |d: &PantsDecomposition| {
            let overrides: BTreeMap<CurveId, Slope> = (0..=bound)
                .filter_map(|j| {
                    let s = d.occupant(j);
                    (!s.is_base()).then_some((j, s))
                })
                .collect();
            PantsDecomposition::new(model, TailPattern::base(), overrides).unwrap()
        };
        reps.push((truncate(x), a, truncate(y)));
    }
    CertifiedPointStream {
        reps,
        clause: Clause::Components,
        x_stab: (0..len).map(|k| (k as u32, k)).collect(),
        y_stab: (0..len).map(|k| (k as u32, k)).collect(),
        a_mod: vec![(1, 0)],
        a_limit: a,
    }
}

fn check_pants_space_coherence(model: &SurfaceModel, config: &SuiteConfig) -> SuiteRecord {
    let mut sampler = Sampler::new(model, config.seed, 9);
    let mut violations = 0u64;
    // convergence fixtures eventually enter every basic open around the limit
    let base = PantsDecomposition::base();
    let x = base
        .with_occupant(model, 0, Slope::new(2, 1).unwrap())
        .unwrap()
        .with_occupant(model, 25, Slope::new(1, 2).unwrap())
        .unwrap()
        .with_occupant(model, 39, Slope::new(1, 1).unwrap())
        .unwrap();
    let y = x.with_occupant(model, 3, Slope::new(0, 1).unwrap()).unwrap();
    let p = PantsPoint::normalize(x.clone(), rat(2, 5), y.clone()).unwrap();
    let stream = density_stream(model, &x, &y, rat(2, 5), 5);
    if pspace::converges(model, lv(1), &stream, &p).is_err() {
        violations += 1;
    }
    for eps in [rat(1, 1), rat(1, 2), rat(1, 3)] {
        let points = stream.points().unwrap();
        let n_eps = (rat(1, 1) / eps).floor().to_integer() as usize;
        let mut entered = false;
        for (k, q) in points.iter().enumerate() {
            let inside = pspace::in_basic_open(model, lv(1), eps, &p, q).unwrap();
            if k > n_eps && !inside {
                violations += 1;
            }
            entered |= inside;
        }
        if !entered {
            violations += 1;
        }
    }
    // clause-2 and clause-3 fixtures also enter every basic open
    {
        let v = base.with_occupant(model, 0, Slope::new(1, 1).unwrap()).unwrap();
        let mut reps2 = Vec::new();
        let mut reps3 = Vec::new();
        for k in 0..5u32 {
            let far = 3 * (model.last_block(k) + 1);
            let vk = v.with_occupant(model, far, Slope::new(0, 1).unwrap()).unwrap();
            let wk = vk.with_occupant(model, far + 3, Slope::new(2, 1).unwrap()).unwrap();
            reps2.push((vk.clone(), rat(1, k as i64 + 2), wk.clone()));
            reps3.push((vk, rat(1, 2), wk));
        }
        let stab: Vec<(u32, usize)> = (0..5).map(|k| (k as u32, k)).collect();
        let stream2 = CertifiedPointStream {
            reps: reps2,
            clause: Clause::VertexShrink,
            x_stab: stab.clone(),
            y_stab: vec![],
            a_mod: (1..=5).map(|k| (k, k as usize - 1)).collect(),
            a_limit: rat(0, 1),
        };
        let stream3 = CertifiedPointStream {
            reps: reps3,
            clause: Clause::VertexSqueeze,
            x_stab: stab.clone(),
            y_stab: stab,
            a_mod: vec![],
            a_limit: rat(1, 2),
        };
        let limit = PantsPoint::Vertex(v);
        for (stream, needs_all_eps) in [(&stream2, true), (&stream3, false)] {
            if pspace::converges(model, lv(1), stream, &limit).is_err() {
                violations += 1;
            }
            for eps in [rat(1, 1), rat(1, 2), rat(1, 3)] {
                let points = stream.points().unwrap();
                let n_eps = (rat(1, 1) / eps).floor().to_integer() as usize;
                for (k, q) in points.iter().enumerate() {
                    let inside = pspace::in_basic_open(model, lv(1), eps, &limit, q).unwrap();
                    // squeeze terms keep a fixed parameter, so only the
                    // deep-agreement route admits them
                    if k > n_eps && needs_all_eps && !inside {
                        violations += 1;
                    }
                    if !needs_all_eps && k > n_eps + 1 && !inside {
                        violations += 1;
                    }
                }
            }
        }
    }
    // sampled A-like classes are disjoint or equal: probes lying in the
    // classes of two points force the classes to coincide
    for _ in 0..config.coherence_probes {
        let n = sampler.rng.gen_range(0..=2u32);
        let a = sampler.decomposition(model.boundary_site(2), 2);
        let b = sampler.partner(&a, model.boundary_site(2));
        let probe = sampler.partner(&a, model.boundary_site(2) + 9);
        let in_a = agreement::agrees(model, lv(1), &probe, &a, n);
        let in_b = agreement::agrees(model, lv(1), &probe, &b, n);
        if in_a && in_b && !agreement::agrees(model, lv(1), &a, &b, n) {
            violations += 1;
        }
    }
    // the edge-point slices behave the same way: membership in two slices
    // forces the slices to coincide
    for _ in 0..config.coherence_probes.min(40) {
        let n = sampler.rng.gen_range(0..=2u32);
        let level = lv(sampler.rng.gen_range(1..=4u8));
        let p1 = random_point(model, &mut sampler);
        let p2 = random_point(model, &mut sampler);
        if p1.is_vertex() || p2.is_vertex() {
            continue;
        }
        let probe = match &p1 {
            PantsPoint::Edge { x, a, y } => {
                let x2 = pspace::far_perturbation(model, n, x, &mut sampler.rng);
                let site = decomposition::defining_site(x, y).unwrap();
                let y2 = x2.with_occupant(model, site, y.occupant(site)).unwrap();
                PantsPoint::normalize(x2, *a, y2).unwrap()
            }
            PantsPoint::Vertex(_) => unreachable!(),
        };
        let in_1 = pspace::point_agrees(model, level, &probe, &p1, n);
        let in_2 = pspace::point_agrees(model, level, &probe, &p2, n);
        if in_1 && in_2 && !pspace::point_agrees(model, level, &p1, &p2, n) {
            violations += 1;
        }
    }
    // agreeing points define identical basic opens on sampled probes
    for _ in 0..config.coherence_probes.min(40) {
        let n = sampler.rng.gen_range(1..=2u32);
        let eps = rat(1, n as i64);
        let level = lv(sampler.rng.gen_range(1..=4u8));
        let p = random_point(model, &mut sampler);
        let q = match &p {
            PantsPoint::Vertex(x) => {
                PantsPoint::Vertex(pspace::far_perturbation(model, n, x, &mut sampler.rng))
            }
            PantsPoint::Edge { x, a, y } => {
                let x2 = pspace::far_perturbation(model, n, x, &mut sampler.rng);
                let site = decomposition::defining_site(x, y).unwrap();
                let y2 = x2.with_occupant(model, site, y.occupant(site)).unwrap();
                PantsPoint::normalize(x2, *a, y2).unwrap()
            }
        };
        if !pspace::point_agrees(model, level, &p, &q, n) {
            violations += 1;
            continue;
        }
        for _ in 0..4 {
            let probe = random_point(model, &mut sampler);
            let in_p = pspace::in_basic_open_at(model, level, eps, n, &p, &probe).unwrap();
            let in_q = pspace::in_basic_open_at(model, level, eps, n, &q, &probe).unwrap();
            if in_p != in_q {
                violations += 1;
            }
        }
    }
    // separation witnesses over distinct point pairs, verified on probes
    let mut pairs_done = 0usize;
    let mut attempts = 0usize;
    while pairs_done < config.coherence_probes && attempts < config.coherence_probes * 20 {
        attempts += 1;
        let p = random_point(model, &mut sampler);
        let q = random_point(model, &mut sampler);
        if p == q {
            continue;
        }
        let level = lv(sampler.rng.gen_range(1..=4u8));
        let Ok(w) = pspace::separation_witness(model, level, &p, &q) else {
            violations += 1;
            continue;
        };
        pairs_done += 1;
        for probe in pspace::sample_basic_open(model, level, w.eps, w.n, &p, &mut sampler.rng, 4) {
            if pspace::in_basic_open_at(model, level, w.eps, w.n, &q, &probe).unwrap_or(false) {
                violations += 1;
            }
        }
        for probe in pspace::sample_basic_open(model, level, w.eps, w.n, &q, &mut sampler.rng, 4) {
            if pspace::in_basic_open_at(model, level, w.eps, w.n, &p, &probe).unwrap_or(false) {
                violations += 1;
            }
        }
    }
    // closure predicates match the closed-form windows on constructed probes
    let mut closure_done = 0usize;
    while closure_done < config.coherence_probes {
        let a = rat(sampler.rng.gen_range(2..5i64), 7);
        let eps = rat(1, sampler.rng.gen_range(5..9i64));
        let x = sampler.decomposition(model.boundary_site(0), 2);
        let Ok(y) = x.with_occupant(model, 3 * (model.last_block(1) + 1), Slope::new(0, 1).unwrap())
        else {
            continue;
        };
        if !metric::adjacent(&x, &y) {
            continue;
        }
        let center = PantsPoint::normalize(x.clone(), a, y.clone()).unwrap();
        let n = 3;
        if agreement::agrees(model, lv(1), &x, &y, n) {
            continue;
        }
        closure_done += 1;
        let at = |aa: Rat| PantsPoint::normalize(x.clone(), aa, y.clone()).unwrap();
        // inside the open band, on the closed rim, and beyond it
        let inside = at(a + eps / rat(2, 1));
        let rim = at(a + eps);
        let outside = at(a + eps + rat(1, 100));
        let ok = pspace::in_closure(model, lv(1), eps, n, &center, &inside).unwrap()
            && pspace::in_closure(model, lv(1), eps, n, &center, &rim).unwrap()
            && !pspace::in_basic_open(model, lv(1), eps, &center, &rim).unwrap_or(true)
            && !pspace::in_closure(model, lv(1), eps, n, &center, &outside).unwrap();
        if !ok {
            violations += 1;
        }
    }
    // explicit path: endpoints and clause-validated convergence at t -> 1
    let target = sampler.decomposition(model.boundary_site(3), 3);
    let target = {
        let mut t = target;
        for k in 0..=4u32 {
            if let Ok(fixed) = t.with_occupant(model, model.boundary_site(k), Slope::BASE) {
                t = fixed;
            }
        }
        t
    };
    let start = PantsDecomposition::base();
    match metric::converge_path(model, &start, &target, 4) {
        Ok(path) => {
            let p0 = pspace::path_point(model, &path, rat(0, 1)).unwrap();
            let p1 = pspace::path_point(model, &path, rat(1, 1)).unwrap();
            if p0 != PantsPoint::Vertex(start.clone()) || p1 != PantsPoint::Vertex(target.clone()) {
                violations += 1;
            }
            // vertex stream along the stages converges to the target
            let dstream = CertifiedDecompositionStream::from_converge_path(&path);
            if metric::limit_of(model, lv(1), &dstream).ok().as_ref() != Some(&target) {
                violations += 1;
            }
            let reps: Vec<_> = dstream
                .terms
                .iter()
                .map(|d| {
                    let far = 3 * (model.last_block(4) + 3);
                    let w = d.with_occupant(model, far, Slope::new(0, 1).unwrap()).unwrap();
                    (d.clone(), rat(0, 1), w)
                })
                .collect();
            let len = reps.len();
            let vstream = CertifiedPointStream {
                reps,
                clause: Clause::VertexShrink,
                x_stab: (0..len).map(|k| (k as u32, k)).collect(),
                y_stab: vec![],
                a_mod: vec![(1, 0)],
                a_limit: rat(0, 1),
            };
            if pspace::converges(model, lv(1), &vstream, &PantsPoint::Vertex(target)).is_err() {
                violations += 1;
            }
        }
        Err(_) => violations += 1,
    }
    SuiteRecord::new(
        "pants-space-coherence",
        violations == 0 && pairs_done >= config.coherence_probes,
        json!({
            "separation_pairs": pairs_done,
            "closure_probes": closure_done,
            "violations": violations,
        }),
    )
}

fn random_point(model: &SurfaceModel, sampler: &mut Sampler) -> PantsPoint {
    let x = sampler.decomposition(model.boundary_site(1), 2);
    if sampler.rng.gen_bool(0.4) {
        return PantsPoint::Vertex(x);
    }
    // perturb one site by an adjacent slope to get an edge partner
    for j in 0..=model.boundary_site(1) {
        let sigma = x.occupant(j);
        for tau in sigma.neighbors(2) {
            if let Ok(y) = x.with_occupant(model, j, tau) {
                let den = sampler.rng.gen_range(2..7i64);
                let num = sampler.rng.gen_range(1..den.max(2));
                let a = rat(num, den);
                return PantsPoint::normalize(x, a, y).unwrap();
            }
        }
    }
    PantsPoint::Vertex(x)
}

fn check_action_continuity(model: &SurfaceModel, config: &SuiteConfig) -> SuiteRecord {
    let mut sampler = Sampler::new(model, config.seed, 10);
    let mut violations = 0u64;
    // every profile fixes the base decomposition curve-wise
    for _ in 0..50 {
        let f = random_profile(&mut sampler);
        let base = PantsDecomposition::base();
        if twist::act_on_decomposition(model, &f, &base) != base {
            violations += 1;
        }
    }
    // finite-support profiles stay within the component
    for _ in 0..50 {
        let f = random_finite_profile(&mut sampler, model.boundary_site(2));
        let x = sampler.decomposition(model.boundary_site(2), 3);
        let fx = twist::act_on_decomposition(model, &f, &x);
        if !same_component(&x, &fx) {
            violations += 1;
        }
    }
    // certified stream fixtures through the continuity harness
    let mut fixtures = 0usize;
    while fixtures < config.continuity_fixtures {
        let f = if sampler.rng.gen_bool(0.5) {
            TwistProfile::new(vec![sampler.rng.gen_range(-2..3i64)], BTreeMap::new()).unwrap()
        } else {
            random_finite_profile(&mut sampler, model.boundary_site(1))
        };
        let profiles = CertifiedProfileStream::truncations(model, &f, 5);
        let x = sampler.decomposition(model.boundary_site(0), 2);
        let Some((xe, ye)) = edge_partner(model, &x) else {
            continue;
        };
        let a = rat(1, sampler.rng.gen_range(2..6i64));
        let p = PantsPoint::normalize(xe.clone(), a, ye.clone()).unwrap();
        let stream = density_stream(model, &xe, &ye, a, 5);
        match twist::action_continuity_test(model, lv(1), &profiles, &stream, &f, &p) {
            Ok(_) => fixtures += 1,
            Err(_) => {
                violations += 1;
                fixtures += 1;
            }
        }
    }
    SuiteRecord::new(
        "action-continuity",
        violations == 0 && fixtures >= config.continuity_fixtures,
        json!({ "fixtures": fixtures, "violations": violations }),
    )
}

fn edge_partner(
    model: &SurfaceModel,
    x: &PantsDecomposition,
) -> Option<(PantsDecomposition, PantsDecomposition)> {
    for j in 0..=model.boundary_site(0) {
        for tau in x.occupant(j).neighbors(2) {
            if let Ok(y) = x.with_occupant(model, j, tau) {
                return Some((x.clone(), y));
            }
        }
    }
    None
}

fn random_profile(sampler: &mut Sampler) -> TwistProfile {
    let len = sampler.rng.gen_range(1..4usize);
    let period: Vec<i64> = (0..len).map(|_| sampler.rng.gen_range(-2..3i64)).collect();
    let mut overrides = BTreeMap::new();
    for _ in 0..sampler.rng.gen_range(0..3usize) {
        overrides.insert(sampler.rng.gen_range(0..40u64), sampler.rng.gen_range(-3..4i64));
    }
    TwistProfile::new(period, overrides).unwrap()
}

fn random_finite_profile(sampler: &mut Sampler, max_site: CurveId) -> TwistProfile {
    let mut overrides = BTreeMap::new();
    for _ in 0..sampler.rng.gen_range(1..4usize) {
        overrides.insert(
            sampler.rng.gen_range(0..=max_site),
            sampler.rng.gen_range(-3..4i64),
        );
    }
    TwistProfile::finite(overrides)
}
