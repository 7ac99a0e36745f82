//! The model surface: a one-ended, infinite-genus chart.
//!
//! The surface is built from a linear chain of pants with one torus handle
//! per link.  Pants cells are indexed
//!
//! * `0` — the cap: two of its slots are glued to each other (handle
//!   curve `h_0`), the third continues the chain along `b_0`;
//! * `2k-1` — the chain pants `C_k` with slots `(b_{k-1}, a_k, b_k)`;
//! * `2k` — the handle pants `T_k` with slots `(a_k, h_k, h_k)`, the two
//!   `h_k` slots glued to each other.
//!
//! Base curves are indexed `h_0 = 0`, and for `k >= 1`: `a_k = 3k-1`,
//! `h_k = 3k`, `b_k = 3k+1` (with `b_0 = 1`).  Removing a base curve frees
//! a complexity-1 window: a one-holed torus at every handle curve, a
//! four-holed sphere at every stem and chain curve, so both window kinds
//! occur.
//!
//! The principal exhaustion is chart-aligned: `S_n` consists of the cap
//! and the first `(n+1) * shell_size - 1` links, so every `∂S_n` is the
//! single chain curve `b_{B(n)}`.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};

pub type PantsId = u64;
pub type CurveId = u64;
pub type ExhaustionIndex = u32;

/// Window kind freed by removing a base curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WindowKind {
    /// One-holed torus; replacement curves intersect the removed one once.
    Torus,
    /// Four-holed sphere; replacement curves intersect the removed one twice.
    Sphere,
}

/// Structural role of a base curve in the chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveClass {
    /// `h_k`: the self-glued curve of the k-th handle.
    Handle(u64),
    /// `a_k`: attaches handle pants `T_k` to chain pants `C_k`.
    Stem(u64),
    /// `b_k`: joins chain pants `C_k` to `C_{k+1}` (`b_0` joins the cap).
    Chain(u64),
}

/// The fixed infinite-type surface with its base decomposition, window
/// table, and principal exhaustion.  Immutable after construction; all
/// queries are formulaic in the indices, so the infinite chart is never
/// materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    shell_size: u32,
}

impl SurfaceModel {
    /// Builds the canonical model.  `shell_size` is the number of links
    /// per exhaustion shell; fewer than 4 is rejected so every shell
    /// comfortably clears the complexity-6 floor, which is re-validated
    /// on the first few materialized shells.
    pub fn build(shell_size: u32) -> Result<SurfaceModel> {
        if shell_size < 4 {
            return Err(Error::ShellTooSmall(shell_size));
        }
        let model = SurfaceModel { shell_size };
        for n in 0..3u32 {
            for comp in model.shell(n).components(&model) {
                let kappa = comp.complexity(&model);
                assert!(
                    kappa >= 6,
                    "shell {n} component has complexity {kappa} < 6"
                );
            }
        }
        Ok(model)
    }

    pub fn shell_size(&self) -> u32 {
        self.shell_size
    }

    pub fn curve_class(&self, c: CurveId) -> CurveClass {
        if c == 0 {
            return CurveClass::Handle(0);
        }
        match (c - 1) % 3 {
            0 => CurveClass::Chain((c - 1) / 3),
            1 => CurveClass::Stem((c + 1) / 3),
            _ => CurveClass::Handle(c / 3),
        }
    }

    pub fn curve_id(&self, class: CurveClass) -> CurveId {
        match class {
            CurveClass::Handle(0) => 0,
            CurveClass::Handle(k) => 3 * k,
            CurveClass::Stem(k) => 3 * k - 1,
            CurveClass::Chain(k) => 3 * k + 1,
        }
    }

    pub fn window_kind(&self, c: CurveId) -> WindowKind {
        match self.curve_class(c) {
            CurveClass::Handle(_) => WindowKind::Torus,
            _ => WindowKind::Sphere,
        }
    }

    /// Pants cells of the complexity-1 window freed by removing `c`.
    pub fn window_pants(&self, c: CurveId) -> Vec<PantsId> {
        match self.curve_class(c) {
            CurveClass::Handle(0) => vec![0],
            CurveClass::Handle(k) => vec![2 * k],
            CurveClass::Stem(k) => vec![2 * k - 1, 2 * k],
            CurveClass::Chain(0) => vec![0, 1],
            CurveClass::Chain(k) => vec![2 * k - 1, 2 * k + 1],
        }
    }

    /// The three boundary slots of a pants cell, as base-curve ids.
    /// Repeated ids mark a self-gluing.
    pub fn pants_slots(&self, p: PantsId) -> [CurveId; 3] {
        if p == 0 {
            return [0, 0, 1];
        }
        let k = p.div_ceil(2);
        if p % 2 == 1 {
            // chain pants C_k: (b_{k-1}, a_k, b_k)
            [3 * k - 2, 3 * k - 1, 3 * k + 1]
        } else {
            // handle pants T_k: (a_k, h_k, h_k)
            [3 * k - 1, 3 * k, 3 * k]
        }
    }

    /// The two sides of a base curve as (pants, slot) pairs.
    pub fn curve_sides(&self, c: CurveId) -> ((PantsId, u8), (PantsId, u8)) {
        match self.curve_class(c) {
            CurveClass::Handle(0) => ((0, 0), (0, 1)),
            CurveClass::Handle(k) => ((2 * k, 1), (2 * k, 2)),
            CurveClass::Stem(k) => ((2 * k - 1, 1), (2 * k, 0)),
            CurveClass::Chain(0) => ((0, 2), (1, 0)),
            CurveClass::Chain(k) => ((2 * k - 1, 2), (2 * k + 1, 0)),
        }
    }

    /// Chain block carrying a pants cell (block 0 is the cap).
    pub fn block_of_pants(&self, p: PantsId) -> u64 {
        p.div_ceil(2)
    }

    /// Sites whose windows share a pants cell with the window of `c`.
    /// Never more than four, which drives the greedy disjoint-window
    /// extraction bound.
    pub fn overlapping_sites(&self, c: CurveId) -> Vec<CurveId> {
        let mine: BTreeSet<PantsId> = self.window_pants(c).into_iter().collect();
        let mut out = BTreeSet::new();
        for &p in &mine {
            for slot_curve in self.pants_slots(p) {
                if slot_curve != c {
                    out.insert(slot_curve);
                }
            }
        }
        // a slot curve's window shares `p` by construction
        out.into_iter().collect()
    }

    pub fn windows_overlap(&self, a: CurveId, b: CurveId) -> bool {
        if a == b {
            return true;
        }
        let wa: BTreeSet<PantsId> = self.window_pants(a).into_iter().collect();
        self.window_pants(b).iter().any(|p| wa.contains(p))
    }

    /// Last chain block inside `S_n`.
    pub fn last_block(&self, n: ExhaustionIndex) -> u64 {
        (n as u64 + 1) * self.shell_size as u64 - 1
    }

    /// The single chain curve forming `∂S_n`.
    pub fn boundary_site(&self, n: ExhaustionIndex) -> CurveId {
        3 * self.last_block(n) + 1
    }

    /// The nested finite-type subsurface `S_n`.
    pub fn exhaustion(&self, n: ExhaustionIndex) -> Subsurface {
        let mut pants = BTreeSet::new();
        pants.insert(0);
        for k in 1..=self.last_block(n) {
            pants.insert(2 * k - 1);
            pants.insert(2 * k);
        }
        Subsurface { pants }
    }

    /// The shell `S_n \ S_{n-1}` (with `S_{-1} = ∅`).
    pub fn shell(&self, n: ExhaustionIndex) -> Subsurface {
        if n == 0 {
            return self.exhaustion(0);
        }
        let lo = self.last_block(n - 1) + 1;
        let hi = self.last_block(n);
        let mut pants = BTreeSet::new();
        for k in lo..=hi {
            pants.insert(2 * k - 1);
            pants.insert(2 * k);
        }
        Subsurface { pants }
    }

    /// Least `n` with the whole window of `c` inside `S_n`.
    pub fn window_exhaustion(&self, c: CurveId) -> ExhaustionIndex {
        let max_block = self
            .window_pants(c)
            .iter()
            .map(|&p| self.block_of_pants(p))
            .max()
            .unwrap();
        // need last_block(n) >= max_block, i.e. (n + 1) * s >= max_block + 1
        let s = self.shell_size as u64;
        ((max_block + 1).div_ceil(s) - 1) as ExhaustionIndex
    }

    /// Least `n` with `c` in the interior of `S_n`.
    pub fn interior_exhaustion(&self, c: CurveId) -> ExhaustionIndex {
        let s = self.shell_size as u64;
        // interior iff c <= 3 * last_block(n), i.e. last_block(n) >= ceil(c / 3)
        let need = c.div_ceil(3);
        ((need + 1).div_ceil(s) - 1) as ExhaustionIndex
    }

    /// JSON chart dump of all cells and windows up to curve `max_index`.
    pub fn chart_dump(&self, max_index: CurveId) -> serde_json::Value {
        let max_block = max_index / 3 + 1;
        let mut pants = Vec::new();
        for p in 0..=(2 * max_block) {
            pants.push(json!({ "id": p, "slots": self.pants_slots(p) }));
        }
        let mut curves = Vec::new();
        for c in 0..=max_index {
            let ((p1, s1), (p2, s2)) = self.curve_sides(c);
            curves.push(json!({
                "id": c,
                "sides": [[p1, s1], [p2, s2]],
                "window_kind": self.window_kind(c),
                "window_pants": self.window_pants(c),
            }));
        }
        json!({
            "shell_size": self.shell_size,
            "pants": pants,
            "curves": curves,
        })
    }
}

/// A finite union of pants cells of the chart.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subsurface {
    pants: BTreeSet<PantsId>,
}

impl Subsurface {
    pub fn from_pants<I: IntoIterator<Item = PantsId>>(pants: I) -> Subsurface {
        Subsurface {
            pants: pants.into_iter().collect(),
        }
    }

    pub fn pants(&self) -> &BTreeSet<PantsId> {
        &self.pants
    }

    pub fn is_empty(&self) -> bool {
        self.pants.is_empty()
    }

    pub fn contains_pants(&self, p: PantsId) -> bool {
        self.pants.contains(&p)
    }

    pub fn is_subset(&self, other: &Subsurface) -> bool {
        self.pants.is_subset(&other.pants)
    }

    fn curve_side_membership(&self, model: &SurfaceModel, c: CurveId) -> (bool, bool) {
        let ((p1, _), (p2, _)) = model.curve_sides(c);
        (self.pants.contains(&p1), self.pants.contains(&p2))
    }

    /// Base curves with both sides inside.
    pub fn interior_curves(&self, model: &SurfaceModel) -> BTreeSet<CurveId> {
        self.candidate_curves(model)
            .into_iter()
            .filter(|&c| self.curve_side_membership(model, c) == (true, true))
            .collect()
    }

    /// Base curves with exactly one side inside: `∂` of the subsurface.
    pub fn boundary_curves(&self, model: &SurfaceModel) -> BTreeSet<CurveId> {
        self.candidate_curves(model)
            .into_iter()
            .filter(|&c| {
                let (a, b) = self.curve_side_membership(model, c);
                a != b
            })
            .collect()
    }

    pub fn contains_curve_interior(&self, model: &SurfaceModel, c: CurveId) -> bool {
        self.curve_side_membership(model, c) == (true, true)
    }

    pub fn has_curve_on_boundary(&self, model: &SurfaceModel, c: CurveId) -> bool {
        let (a, b) = self.curve_side_membership(model, c);
        a != b
    }

    fn candidate_curves(&self, model: &SurfaceModel) -> BTreeSet<CurveId> {
        let mut out = BTreeSet::new();
        for &p in &self.pants {
            out.extend(model.pants_slots(p));
        }
        out
    }

    /// Connected components in the dual graph of the chart.
    pub fn components(&self, model: &SurfaceModel) -> Vec<Subsurface> {
        let mut remaining: BTreeSet<PantsId> = self.pants.clone();
        let mut comps = Vec::new();
        while let Some(&seed) = remaining.iter().next() {
            let mut comp = BTreeSet::new();
            let mut stack = vec![seed];
            remaining.remove(&seed);
            while let Some(p) = stack.pop() {
                comp.insert(p);
                for c in model.pants_slots(p) {
                    let ((p1, _), (p2, _)) = model.curve_sides(c);
                    for q in [p1, p2] {
                        if remaining.remove(&q) {
                            stack.push(q);
                        }
                    }
                }
            }
            comps.push(Subsurface { pants: comp });
        }
        comps
    }

    /// Complexity `3g - 3 + b + n` summed over components, computed from
    /// the chart and cross-checked against the interior base-curve count.
    pub fn complexity(&self, model: &SurfaceModel) -> u64 {
        let interior = self.interior_curves(model).len() as u64;
        let mut by_formula = 0i64;
        for comp in self.components(model) {
            let p = comp.pants.len() as i64;
            let b = comp.boundary_curves(model).len() as i64;
            // chi = -p = 2 - 2g - b (no punctures in the model)
            let two_g = 2 + p - b;
            assert!(two_g >= 0 && two_g % 2 == 0, "chart inconsistency");
            let g = two_g / 2;
            by_formula += 3 * g - 3 + b;
        }
        assert_eq!(
            by_formula as u64, interior,
            "complexity formula disagrees with interior curve count"
        );
        interior
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_rejects_small_shells() {
        assert_eq!(
            SurfaceModel::build(3).unwrap_err(),
            Error::ShellTooSmall(3)
        );
        assert!(SurfaceModel::build(4).is_ok());
    }

    #[test]
    fn build_is_deterministic() {
        assert_eq!(SurfaceModel::build(4).unwrap(), SurfaceModel::build(4).unwrap());
    }

    #[test]
    fn curve_indexing_round_trips() {
        let m = SurfaceModel::build(4).unwrap();
        for c in 0..200 {
            assert_eq!(m.curve_id(m.curve_class(c)), c);
        }
    }

    #[test]
    fn window_kinds() {
        let m = SurfaceModel::build(4).unwrap();
        assert_eq!(m.window_kind(0), WindowKind::Torus); // h_0
        assert_eq!(m.window_kind(1), WindowKind::Sphere); // b_0
        assert_eq!(m.window_kind(2), WindowKind::Sphere); // a_1
        assert_eq!(m.window_kind(3), WindowKind::Torus); // h_1
        assert_eq!(m.window_kind(4), WindowKind::Sphere); // b_1
    }

    #[test]
    fn complexity_of_small_pieces() {
        let m = SurfaceModel::build(4).unwrap();
        // one-holed torus {T_1}
        assert_eq!(Subsurface::from_pants([2]).complexity(&m), 1);
        // four-holed sphere {C_1, C_2}
        assert_eq!(Subsurface::from_pants([1, 3]).complexity(&m), 1);
        // two disjoint one-holed tori
        assert_eq!(Subsurface::from_pants([2, 4]).complexity(&m), 2);
    }

    #[test]
    fn exhaustion_is_strictly_nested_with_single_boundary() {
        let m = SurfaceModel::build(4).unwrap();
        for n in 0..4u32 {
            let sn = m.exhaustion(n);
            let sn1 = m.exhaustion(n + 1);
            assert!(sn.is_subset(&sn1));
            assert!(sn.pants().len() < sn1.pants().len());
            let bd = sn.boundary_curves(&m);
            assert_eq!(bd.len(), 1);
            assert!(bd.contains(&m.boundary_site(n)));
        }
    }

    #[test]
    fn shells_have_complexity_at_least_six() {
        let m = SurfaceModel::build(4).unwrap();
        for n in 0..4u32 {
            for comp in m.shell(n).components(&m) {
                assert!(comp.complexity(&m) >= 6);
            }
        }
    }

    #[test]
    fn overlap_degree_at_most_four() {
        let m = SurfaceModel::build(4).unwrap();
        for c in 0..120 {
            let deg = m.overlapping_sites(c).len();
            assert!(deg <= 4, "site {c} overlaps {deg} sites");
        }
    }

    #[test]
    fn window_exhaustion_indices() {
        let m = SurfaceModel::build(4).unwrap();
        // h_0 sits in the cap, inside S_0
        assert_eq!(m.window_exhaustion(0), 0);
        // boundary site of S_0 has its window split across S_0 and S_1
        let b = m.boundary_site(0);
        assert_eq!(m.window_exhaustion(b), 1);
        assert_eq!(m.interior_exhaustion(b), 1);
    }
}
