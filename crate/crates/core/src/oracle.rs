//! Independent brute-force ground truth.
//!
//! Nothing here is computed through the coordinate formulas of the main
//! engine.  Intersection numbers are obtained by tracing flat geodesics on
//! universal models (the square torus and the pillowcase orbifold) with
//! exact rational arithmetic; pants-graph adjacency is derived from those
//! traces; normal-arc counts in a pants are found by constrained
//! enumeration; Farey distances come from a strip BFS with a separator
//! certificate.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num::rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CurveId, Subsurface, SurfaceModel, WindowKind};
use crate::slope::Slope;

type Q = Ratio<i128>;

fn frac(x: Q) -> Q {
    x - x.floor()
}

/// Geometric intersection number of two slope curves on the flat torus,
/// counted by enumerating the actual crossing points of the line families
/// `den*y - num*x = offset + k`.
pub fn torus_intersection(a: Slope, b: Slope) -> u64 {
    trace_lines(a, Q::new(0, 1), b, Q::new(1, 2)).len() as u64
}

/// Geometric intersection number of two slope curves on the four-holed
/// sphere, traced on its pillowcase model: each curve is the image of a
/// pair of offset torus geodesics under `z ~ -z`, and crossings are
/// counted upstairs and folded.
pub fn sphere_intersection(a: Slope, b: Slope) -> u64 {
    if a == b {
        return 0;
    }
    let ca = Q::new(1, 5);
    let cb = Q::new(1, 7);
    let mut pts: BTreeSet<(Q, Q)> = BTreeSet::new();
    for sa in [ca, -ca] {
        for sb in [cb, -cb] {
            pts.extend(trace_lines(a, sa, b, sb));
        }
    }
    // fold by the hyperelliptic involution z -> -z
    let mut orbits: BTreeSet<(Q, Q)> = BTreeSet::new();
    for &(x, y) in &pts {
        let neg = (frac(-x), frac(-y));
        assert!(
            (x, y) != neg,
            "trace hit a cone point; offsets are not generic"
        );
        orbits.insert(std::cmp::min((x, y), neg));
    }
    orbits.len() as u64
}

/// All crossing points (as points of `[0,1)^2`) between the line family of
/// slope `a` at `offset_a` and the family of slope `b` at `offset_b`.
fn trace_lines(a: Slope, offset_a: Q, b: Slope, offset_b: Q) -> BTreeSet<(Q, Q)> {
    let mut out = BTreeSet::new();
    let (p, q) = (a.num() as i128, a.den() as i128);
    let (r, s) = (b.num() as i128, b.den() as i128);
    let det = q * r - p * s;
    if det == 0 {
        return out; // parallel families never cross
    }
    // line A_k: q*y - p*x = offset_a + k; over [0,1)^2 the level ranges over
    // (-|p|, |q|) up to the offset, so a padded window of k suffices.
    let ka = p.abs() + q.abs() + 2;
    let kb = r.abs() + s.abs() + 2;
    for k in -ka..=ka {
        let alpha = offset_a + Q::new(k, 1);
        for l in -kb..=kb {
            let beta = offset_b + Q::new(l, 1);
            // solve  -p x + q y = alpha ; -r x + s y = beta
            let d = Q::new(det, 1);
            let x = (alpha * Q::new(s, 1) - beta * Q::new(q, 1)) / d;
            let y = (alpha * Q::new(r, 1) - beta * Q::new(p, 1)) / d;
            out.insert((frac(x), frac(y)));
        }
    }
    out
}

/// Edge test of the window's curve graph.  Torus windows use the
/// determinant criterion; sphere windows use the doubled intersection
/// criterion evaluated by tracing.
pub fn farey_adjacent(kind: WindowKind, a: Slope, b: Slope) -> bool {
    match kind {
        WindowKind::Torus => a.det(b).abs() == 1,
        WindowKind::Sphere => sphere_intersection(a, b) == 2,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FareyDistance {
    pub distance: u32,
    /// True when a separator lower bound met the BFS upper bound.
    pub certified: bool,
}

const FAREY_BUDGET_DEN: i64 = 64;

/// Distance in the Farey graph on slopes, by continued-fraction-guided
/// strip BFS.  Optimality is certified through vertex-disjoint separating
/// edges of the tessellation strip.
pub fn farey_distance(a: Slope, b: Slope) -> Result<FareyDistance> {
    if a == b {
        return Ok(FareyDistance { distance: 0, certified: true });
    }
    if a.det(b).abs() == 1 {
        return Ok(FareyDistance { distance: 1, certified: true });
    }
    // normalize a to the base slope with an integer unimodular map
    let (u, v) = bezout(a.num(), a.den());
    let map = |t: Slope| -> Slope {
        Slope::new(
            u * t.num() + v * t.den(),
            -a.den() * t.num() + a.num() * t.den(),
        )
        .expect("unimodular image of a slope is a slope")
    };
    debug_assert_eq!(map(a), Slope::BASE);
    let x = map(b);
    let q = x.den();
    if q > FAREY_BUDGET_DEN {
        return Err(Error::BudgetExhausted(format!(
            "farey distance: normalized denominator {q} exceeds budget {FAREY_BUDGET_DEN}"
        )));
    }
    // x is not an integer here (that would be the adjacent case)
    let floor = x.num().div_euclid(q);
    let upper = bfs_strip(x, floor)?;
    let lower = separator_bound(x, floor);
    Ok(FareyDistance {
        distance: upper,
        certified: upper == lower,
    })
}

/// BFS from the base slope to `x` inside the tessellation strip hull
/// `{r/s : floor <= r/s <= floor+1, s <= den(x)} ∪ {base}`.
fn bfs_strip(x: Slope, floor: i64) -> Result<u32> {
    let q = x.den();
    let mut verts: Vec<Slope> = vec![Slope::BASE];
    for s in 1..=q {
        for r in (floor * s)..=((floor + 1) * s) {
            if let Ok(t) = Slope::new(r, s) {
                if t.den() == s {
                    verts.push(t);
                }
            }
        }
    }
    verts.sort_unstable();
    verts.dedup();
    let index: HashMap<Slope, usize> = verts.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let target = index[&x];
    let start = index[&Slope::BASE];
    let mut dist = vec![u32::MAX; verts.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    let max_h = (q.unsigned_abs()).max((floor.unsigned_abs() + 1) * q.unsigned_abs()) + 1;
    while let Some(i) = queue.pop_front() {
        if i == target {
            return Ok(dist[i]);
        }
        for nb in verts[i].neighbors(max_h) {
            if let Some(&j) = index.get(&nb) {
                if dist[j] == u32::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
    }
    Err(Error::BudgetExhausted(
        "farey distance: strip BFS did not reach the target".into(),
    ))
}

/// Lower bound: count vertex-disjoint strip edges separating the base
/// slope from `x`; every path must visit one endpoint of each.
fn separator_bound(x: Slope, floor: i64) -> u32 {
    let mut l = Slope::new(floor, 1).unwrap();
    let mut r = Slope::new(floor + 1, 1).unwrap();
    let mut edges: Vec<(Slope, Slope)> = vec![(l, r)];
    loop {
        let m = Slope::new(l.num() + r.num(), l.den() + r.den()).unwrap();
        if m == x {
            break;
        }
        // decide the side by comparing m with x as rationals
        if (x.num() as i128) * (m.den() as i128) < (m.num() as i128) * (x.den() as i128) {
            r = m;
        } else {
            l = m;
        }
        edges.push((l, r));
    }
    let mut used: BTreeSet<Slope> = BTreeSet::new();
    let mut picked = 0u32;
    for (u, v) in edges {
        if !used.contains(&u) && !used.contains(&v) {
            used.insert(u);
            used.insert(v);
            picked += 1;
        }
    }
    picked + 1
}

/// A decomposition of a finite sub-chart given by one slope per
/// pairwise-disjoint window site.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WindowedDecomposition {
    pub slopes: BTreeMap<CurveId, Slope>,
}

impl WindowedDecomposition {
    pub fn new(model: &SurfaceModel, slopes: BTreeMap<CurveId, Slope>) -> Result<Self> {
        let sites: Vec<CurveId> = slopes.keys().copied().collect();
        for (i, &a) in sites.iter().enumerate() {
            for &b in &sites[i + 1..] {
                if model.windows_overlap(a, b) {
                    return Err(Error::UnsupportedSubsurface(format!(
                        "window sites {a} and {b} overlap"
                    )));
                }
            }
        }
        Ok(WindowedDecomposition { slopes })
    }
}

/// Sum of per-window Farey distances: the graph metric of the Cartesian
/// product of the window graphs.
pub fn product_distance(u: &WindowedDecomposition, v: &WindowedDecomposition) -> Result<u64> {
    if u.slopes.keys().ne(v.slopes.keys()) {
        return Err(Error::UnsupportedSubsurface(
            "windowed decompositions have different window sets".into(),
        ));
    }
    let mut total = 0u64;
    for (site, &a) in &u.slopes {
        let d = farey_distance(a, v.slopes[site])?;
        if !d.certified {
            return Err(Error::BudgetExhausted(format!(
                "uncertified farey distance at site {site}"
            )));
        }
        total += d.distance as u64;
    }
    Ok(total)
}

/// Exhaustively built pants graph of a union of complexity-1 windows.
#[derive(Clone, Debug)]
pub struct BruteGraph {
    pub sites: Vec<CurveId>,
    pub kinds: Vec<WindowKind>,
    pub vertices: Vec<Vec<Slope>>,
    pub adjacency: Vec<Vec<usize>>,
}

impl BruteGraph {
    pub fn vertex_index(&self, v: &[Slope]) -> Option<usize> {
        self.vertices.iter().position(|w| w == v)
    }

    pub fn distance(&self, from: usize, to: usize) -> Option<u32> {
        let mut dist = vec![u32::MAX; self.vertices.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            if i == to {
                return Some(dist[i]);
            }
            for &j in &self.adjacency[i] {
                if dist[j] == u32::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        None
    }
}

/// Builds the pants graph of `sub` by exhaustion over slopes of height at
/// most `height`, with edges decided by the traced minimal-intersection
/// test.  `sub` must be a disjoint union of one or two complexity-1
/// windows; connected complexity-2 pieces are not supported.
pub fn brute_pants_graph(model: &SurfaceModel, sub: &Subsurface, height: u64) -> Result<BruteGraph> {
    let comps = sub.components(model);
    let kappa = sub.complexity(model);
    if !(1..=2).contains(&kappa) {
        return Err(Error::UnsupportedSubsurface(format!(
            "complexity {kappa} out of range"
        )));
    }
    if comps.len() as u64 != kappa {
        return Err(Error::UnsupportedSubsurface(
            "connected complexity-2 subsurfaces are not window products".into(),
        ));
    }
    let mut sites = Vec::new();
    let mut kinds = Vec::new();
    for comp in &comps {
        let interior = comp.interior_curves(model);
        if interior.len() != 1 {
            return Err(Error::UnsupportedSubsurface(
                "component is not a complexity-1 window".into(),
            ));
        }
        let site = *interior.iter().next().unwrap();
        let wp: BTreeSet<_> = model.window_pants(site).into_iter().collect();
        if &wp != comp.pants() {
            return Err(Error::UnsupportedSubsurface(format!(
                "component is not the window of its interior curve {site}"
            )));
        }
        sites.push(site);
        kinds.push(model.window_kind(site));
    }
    let per_site: Vec<Vec<Slope>> = kinds
        .iter()
        .map(|_| slopes_of_height(height))
        .collect();
    let mut vertices: Vec<Vec<Slope>> = vec![Vec::new()];
    for site_slopes in &per_site {
        let mut next = Vec::new();
        for v in &vertices {
            for &s in site_slopes {
                let mut w = v.clone();
                w.push(s);
                next.push(w);
            }
        }
        vertices = next;
    }
    // adjacency: exactly one coordinate changes, by a traced minimal move
    let mut pair_adjacent: Vec<HashMap<(Slope, Slope), bool>> = vec![HashMap::new(); sites.len()];
    for (si, kind) in kinds.iter().enumerate() {
        for &a in &per_site[si] {
            for &b in &per_site[si] {
                let adj = match kind {
                    WindowKind::Torus => torus_intersection(a, b) == 1,
                    WindowKind::Sphere => sphere_intersection(a, b) == 2,
                };
                pair_adjacent[si].insert((a, b), adj);
            }
        }
    }
    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (i, v) in vertices.iter().enumerate() {
        for (j, w) in vertices.iter().enumerate().skip(i + 1) {
            let mut diff = None;
            let mut ok = true;
            for k in 0..sites.len() {
                if v[k] != w[k] {
                    if diff.is_some() {
                        ok = false;
                        break;
                    }
                    diff = Some(k);
                }
            }
            if let (true, Some(k)) = (ok, diff) {
                if pair_adjacent[k][&(v[k], w[k])] {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
    }
    Ok(BruteGraph { sites, kinds, vertices, adjacency })
}

pub fn slopes_of_height(height: u64) -> Vec<Slope> {
    let h = height as i64;
    let mut out = vec![Slope::BASE];
    for den in 1..=h {
        for num in -h..=h {
            if let Ok(t) = Slope::new(num, den) {
                if t.num() == num && t.den() == den {
                    out.push(t);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Normal-arc counts `(x12, x13, x23, x11, x22, x33)` in a single pants
/// with boundary intersection numbers `(m1, m2, m3)`, found by exhaustive
/// enumeration of realizable disjoint arc systems.  The solution is
/// required to be unique.
pub fn pants_arc_counts(m: [u64; 3]) -> Result<[u64; 6]> {
    if !(m[0] + m[1] + m[2]).is_multiple_of(2) {
        return Err(Error::ParityViolation(0));
    }
    let mut solutions = Vec::new();
    for x12 in 0..=m[0].min(m[1]) {
        for x13 in 0..=m[0].min(m[2]) {
            for x23 in 0..=m[1].min(m[2]) {
                let r1 = m[0] as i64 - x12 as i64 - x13 as i64;
                let r2 = m[1] as i64 - x12 as i64 - x23 as i64;
                let r3 = m[2] as i64 - x13 as i64 - x23 as i64;
                if r1 < 0 || r2 < 0 || r3 < 0 || r1 % 2 != 0 || r2 % 2 != 0 || r3 % 2 != 0 {
                    continue;
                }
                let (x11, x22, x33) = (r1 as u64 / 2, r2 as u64 / 2, r3 as u64 / 2);
                // disjointness: at most one same-boundary family, and a
                // same-boundary family at i forbids arcs joining the other two
                let same: Vec<u64> = vec![x11, x22, x33];
                if same.iter().filter(|&&x| x > 0).count() > 1 {
                    continue;
                }
                if (x11 > 0 && x23 > 0) || (x22 > 0 && x13 > 0) || (x33 > 0 && x12 > 0) {
                    continue;
                }
                solutions.push([x12, x13, x23, x11, x22, x33]);
            }
        }
    }
    match solutions.len() {
        1 => Ok(solutions[0]),
        0 => Err(Error::CorruptRestriction(format!(
            "no normal arc system realizes boundary counts {m:?}"
        ))),
        _ => Err(Error::CorruptRestriction(format!(
            "normal arc system for {m:?} is not unique: {solutions:?}"
        ))),
    }
}

fn bezout(a: i64, b: i64) -> (i64, i64) {
    if b == 0 {
        return (a.signum(), 0);
    }
    let (u, v) = bezout(b, a.rem_euclid(b));
    (v, u - a.div_euclid(b) * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64) -> Slope {
        Slope::new(n, d).unwrap()
    }

    #[test]
    fn torus_traces_match_determinant() {
        let slopes = slopes_of_height(4);
        for &a in &slopes {
            for &b in &slopes {
                assert_eq!(
                    torus_intersection(a, b),
                    a.det(b).unsigned_abs(),
                    "i({a},{b})"
                );
            }
        }
    }

    #[test]
    fn torus_window_minimal_intersections() {
        assert_eq!(torus_intersection(s(0, 1), Slope::BASE), 1);
        assert_eq!(torus_intersection(s(0, 1), s(1, 1)), 1);
        assert_eq!(torus_intersection(s(0, 1), s(2, 1)), 2);
        assert_eq!(torus_intersection(s(1, 1), s(-1, 1)), 2);
    }

    #[test]
    fn sphere_traces_are_doubled() {
        let slopes = slopes_of_height(3);
        for &a in &slopes {
            for &b in &slopes {
                assert_eq!(
                    sphere_intersection(a, b),
                    2 * a.det(b).unsigned_abs(),
                    "i({a},{b})"
                );
            }
        }
    }

    #[test]
    fn sphere_window_minimal_intersections() {
        assert_eq!(sphere_intersection(s(0, 1), s(1, 1)), 2);
        assert_eq!(sphere_intersection(s(0, 1), Slope::BASE), 2);
    }

    #[test]
    fn adjacency_criteria_per_window_kind() {
        assert!(farey_adjacent(WindowKind::Torus, s(0, 1), Slope::BASE));
        assert!(farey_adjacent(WindowKind::Torus, s(0, 1), s(1, 1)));
        assert!(!farey_adjacent(WindowKind::Torus, s(0, 1), s(2, 1)));
        // the sphere criterion is the doubled intersection, by tracing
        for &a in &slopes_of_height(2) {
            for &b in &slopes_of_height(2) {
                assert_eq!(
                    farey_adjacent(WindowKind::Sphere, a, b),
                    sphere_intersection(a, b) == 2
                );
                assert_eq!(
                    farey_adjacent(WindowKind::Torus, a, b),
                    torus_intersection(a, b) == 1
                );
            }
        }
    }

    #[test]
    fn farey_distance_small_cases() {
        let d = |a, b| farey_distance(a, b).unwrap();
        assert_eq!(d(s(0, 1), s(0, 1)).distance, 0);
        assert_eq!(d(s(0, 1), Slope::BASE).distance, 1);
        let r = d(s(0, 1), s(2, 5));
        assert_eq!(r.distance, 2); // 0/1 ~ 1/2 ~ 2/5
        assert!(r.certified);
        let r = d(Slope::BASE, s(7, 5));
        assert_eq!(r.distance, 3); // no integer is adjacent to 7/5
        assert!(r.certified);
    }

    #[test]
    fn farey_distance_symmetry_and_triangle() {
        let slopes = slopes_of_height(3);
        for &a in &slopes {
            for &b in &slopes {
                let dab = farey_distance(a, b).unwrap();
                let dba = farey_distance(b, a).unwrap();
                assert_eq!(dab.distance, dba.distance, "d({a},{b})");
                assert!(dab.certified);
                for &c in &slopes {
                    let dac = farey_distance(a, c).unwrap().distance;
                    let dcb = farey_distance(c, b).unwrap().distance;
                    assert!(dab.distance <= dac + dcb);
                }
            }
        }
    }

    #[test]
    fn arc_counts_examples() {
        assert_eq!(pants_arc_counts([2, 2, 0]).unwrap(), [2, 0, 0, 0, 0, 0]);
        assert_eq!(pants_arc_counts([2, 2, 2]).unwrap(), [1, 1, 1, 0, 0, 0]);
        assert_eq!(pants_arc_counts([4, 1, 1]).unwrap(), [1, 1, 0, 1, 0, 0]);
        assert_eq!(pants_arc_counts([0, 0, 2]).unwrap(), [0, 0, 0, 0, 0, 1]);
        assert_eq!(pants_arc_counts([0, 0, 0]).unwrap(), [0; 6]);
        assert!(pants_arc_counts([1, 0, 0]).is_err());
    }

    #[test]
    fn brute_graph_torus_window_is_farey() {
        let m = SurfaceModel::build(4).unwrap();
        let sub = Subsurface::from_pants([2]); // {T_1}
        let g = brute_pants_graph(&m, &sub, 2).unwrap();
        assert_eq!(g.kinds, vec![WindowKind::Torus]);
        for (i, v) in g.vertices.iter().enumerate() {
            for &j in &g.adjacency[i] {
                assert!(v[0].is_adjacent(g.vertices[j][0]));
            }
        }
    }

    #[test]
    fn brute_graph_product_of_two_windows() {
        let m = SurfaceModel::build(4).unwrap();
        let sub = Subsurface::from_pants([2, 4]); // {T_1, T_2}
        let g = brute_pants_graph(&m, &sub, 1).unwrap();
        assert_eq!(g.sites.len(), 2);
        // product distance equals BFS distance on the explicit graph
        let u = g.vertex_index(&[s(0, 1), s(0, 1)]).unwrap();
        let v = g.vertex_index(&[s(1, 1), Slope::BASE]).unwrap();
        assert_eq!(g.distance(u, v), Some(2));
    }

    #[test]
    fn connected_complexity_two_rejected() {
        let m = SurfaceModel::build(4).unwrap();
        let sub = Subsurface::from_pants([1, 2]); // {C_1, T_1}: connected, kappa = 2
        assert!(brute_pants_graph(&m, &sub, 1).is_err());
    }
}
