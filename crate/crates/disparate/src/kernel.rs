//! The disparate kernel and the two elimination-based calculation methods.
//!
//! An elimination point of a set `W` is a point `(x, y)` outside `W` whose
//! commitment makes the restriction to `W` unsolvable; no disparate
//! selection ever passes through such a point, so it can be deleted without
//! changing the solution set. Calculation Method 1 deletes elimination
//! points to a fixed point; on solvable inputs the fixed point is exactly
//! the disparate kernel (the set of points realized by some disparate
//! selection), and an emptied domain on the way certifies infeasibility.
//! Calculation Method 2 alternates kernel computation with committing a
//! single kernel point, producing a disparate selection.
//!
//! Solvability of committed restrictions is decided by the oracle's
//! backtracking core and memoized per `(W, committed point)` for the
//! current domain state; the elimination-set search probes the same
//! queries the subsequent full elimination computation needs.

use std::collections::HashMap;

use itertools::Itertools;

use crate::disparate::{complement_mapping, ComplementMapSpec};
use crate::error::{Error, Result};
use crate::instance::{ColorId, Instance, Point, PointSet, Selection, VertexId, VertexSet};
use crate::oracle::CompiledInstance;

/// Memo for committed-restriction solvability; entries are keyed by
/// `(W, x, y)` and valid for one domain state, so the cache resets itself
/// whenever the instance it serves changes.
#[derive(Default)]
pub struct SolveCache {
    universe: Vec<VertexId>,
    domains: Vec<u32>,
    map: HashMap<(u128, u32, u32), bool>,
}

impl SolveCache {
    pub fn new() -> Self {
        SolveCache::default()
    }

    fn sync(&mut self, compiled: &CompiledInstance) {
        let domains: Vec<u32> =
            (0..compiled.vertex_count()).map(|v| compiled.domain_mask(v)).collect();
        if self.universe != compiled.vertices() || self.domains != domains {
            self.universe = compiled.vertices().to_vec();
            self.domains = domains;
            self.map.clear();
        }
    }

    fn committed_unsolvable(
        &mut self,
        compiled: &CompiledInstance,
        w_mask: u128,
        x: usize,
        y: usize,
    ) -> bool {
        let key = (w_mask, x as u32, y as u32);
        if let Some(&known) = self.map.get(&key) {
            return known;
        }
        let unsolvable = !compiled.committed_solvable(w_mask, x, y);
        self.map.insert(key, unsolvable);
        unsolvable
    }
}

fn elimination_scan(
    compiled: &CompiledInstance,
    w_mask: u128,
    cache: &mut SolveCache,
    stop_at_first: bool,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..compiled.vertex_count() {
        if w_mask & (1 << x) != 0 {
            continue;
        }
        let mut dom = compiled.domain_mask(x);
        while dom != 0 {
            let y = dom.trailing_zeros() as usize;
            dom &= dom - 1;
            if cache.committed_unsolvable(compiled, w_mask, x, y) {
                out.push((x, y));
                if stop_at_first {
                    return out;
                }
            }
        }
    }
    out
}

/// `elim_F(W)`: points of `G(F|_(X\W))` whose commitment makes the
/// restriction to `W` unsolvable.
pub fn elimination_points(inst: &Instance, w: &VertexSet) -> Result<PointSet> {
    if w.is_empty() {
        return Err(Error::EmptySet("elimination set candidate".into()));
    }
    let compiled = CompiledInstance::new(inst);
    let w_mask = compiled.vertex_mask(w)?;
    let mut cache = SolveCache::new();
    cache.sync(&compiled);
    Ok(elimination_scan(&compiled, w_mask, &mut cache, false)
        .into_iter()
        .map(|(x, y)| Point {
            x: compiled.vertices()[x].clone(),
            y: compiled.colors()[y].clone(),
        })
        .collect())
}

/// First `W` (by size, then canonical order, `|W| <= w_cap`) with nonempty
/// elimination points; `None` when no elimination set exists within the cap.
pub fn find_elimination_set(inst: &Instance, w_cap: usize) -> Option<VertexSet> {
    let mut cache = SolveCache::new();
    find_elimination_set_cached(inst, w_cap, &mut cache)
}

fn find_elimination_set_cached(
    inst: &Instance,
    w_cap: usize,
    cache: &mut SolveCache,
) -> Option<VertexSet> {
    let compiled = CompiledInstance::new(inst);
    cache.sync(&compiled);
    let n = compiled.vertex_count();
    if n == 0 {
        return None;
    }
    // W = X never yields elimination points: they live outside W.
    let max_size = w_cap.min(n - 1);
    for size in 1..=max_size {
        for combo in (0..n).combinations(size) {
            let w_mask: u128 = combo.iter().fold(0u128, |m, &i| m | (1 << i));
            if !elimination_scan(&compiled, w_mask, cache, true).is_empty() {
                return Some(combo.into_iter().map(|i| compiled.vertices()[i].clone()).collect());
            }
        }
    }
    None
}

/// One reduction step of Calculation Method 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelStep {
    pub witness: VertexSet,
    pub removed: PointSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelOutcome {
    Kernel(PointSet),
    Infeasible(VertexId),
}

/// Ordered record of a Calculation Method 1 run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelTrace {
    pub steps: Vec<KernelStep>,
    pub outcome: KernelOutcome,
}

impl KernelTrace {
    /// One line per step, tab-separated: step index, the witness set as a
    /// sorted vertex list, the removed points as sorted `(x,y)` pairs.
    pub fn serialize_steps(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.steps.iter().enumerate() {
            let w = step.witness.iter().map(|v| v.token()).join(" ");
            let removed = step.removed.iter().map(|p| format!("({},{})", p.x, p.y)).join(" ");
            out.push_str(&format!("{}\t{}\t{}\n", i + 1, w, removed));
        }
        out
    }
}

/// Calculation Method 1: repeatedly choose an elimination set and delete its
/// elimination points. Stops with the kernel when no elimination set
/// remains, or `Infeasible` when a domain empties. The elimination search is
/// capped at `|W| <= w_cap`; `w_cap >= |X| - 1` makes the search exhaustive
/// and the result exactly the disparate kernel.
pub fn calc_method_1(inst: &Instance, w_cap: usize) -> KernelTrace {
    calc_method_1_with(inst, &mut SolveCache::new(), |cur, cache| {
        find_elimination_set_cached(cur, w_cap, cache)
    })
}

/// Calculation Method 1 with a pluggable elimination-set chooser; the final
/// kernel does not depend on the choice, only the trace does. The cache is
/// tied to the instance state and must not be shared across unrelated
/// instances (it resets itself when the state changes).
pub fn calc_method_1_with(
    inst: &Instance,
    cache: &mut SolveCache,
    mut choose: impl FnMut(&Instance, &mut SolveCache) -> Option<VertexSet>,
) -> KernelTrace {
    let mut steps = Vec::new();
    if !inst.vertices().is_empty() && inst.graph_of().is_empty() {
        let x = inst.vertices()[0].clone();
        return KernelTrace { steps, outcome: KernelOutcome::Infeasible(x) };
    }
    let mut current = inst.clone();
    loop {
        let Some(w) = choose(&current, cache) else {
            return KernelTrace { steps, outcome: KernelOutcome::Kernel(current.graph_of()) };
        };
        let removed = elimination_points_cached(&current, &w, cache);
        debug_assert!(!removed.is_empty());
        let graph: PointSet =
            current.graph_of().into_iter().filter(|p| !removed.contains(p)).collect();
        current = current.with_graph_points(&graph).expect("points stay in the product");
        steps.push(KernelStep { witness: w, removed });
        if let Some(x) = current.vertices().iter().find(|x| current.domain(x).is_empty()) {
            return KernelTrace { steps, outcome: KernelOutcome::Infeasible(x.clone()) };
        }
    }
}

fn elimination_points_cached(inst: &Instance, w: &VertexSet, cache: &mut SolveCache) -> PointSet {
    let compiled = CompiledInstance::new(inst);
    cache.sync(&compiled);
    let w_mask = compiled.vertex_mask(w).expect("chooser returned a valid set");
    elimination_scan(&compiled, w_mask, cache, false)
        .into_iter()
        .map(|(x, y)| Point {
            x: compiled.vertices()[x].clone(),
            y: compiled.colors()[y].clone(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Selection(Selection),
    Infeasible,
}

/// Ordered record of a Calculation Method 2 run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveTrace {
    pub steps: Vec<(VertexId, ColorId)>,
    pub outcome: SolveOutcome,
}

/// Calculation Method 2: alternate kernel computation (Calculation Method 1)
/// with committing the canonically least kernel point via the complement
/// mapping. With an exhaustive cap this finds a disparate selection exactly
/// when one exists; the committed prefix is never retracted.
pub fn calc_method_2(inst: &Instance, w_cap: usize) -> SolveTrace {
    let mut cache = SolveCache::new();
    let mut steps: Vec<(VertexId, ColorId)> = Vec::new();
    let mut current = inst.clone();
    loop {
        if current.vertices().is_empty() {
            let outcome = SolveOutcome::Selection(steps.iter().cloned().collect());
            return SolveTrace { steps, outcome };
        }
        let trace = calc_method_1_with(&current, &mut cache, |cur, cache| {
            find_elimination_set_cached(cur, w_cap, cache)
        });
        let kernel = match trace.outcome {
            KernelOutcome::Kernel(k) => k,
            KernelOutcome::Infeasible(_) => {
                return SolveTrace { steps, outcome: SolveOutcome::Infeasible }
            }
        };
        let chosen = kernel.iter().next().expect("kernel outcome has a nonempty graph").clone();
        steps.push((chosen.x.clone(), chosen.y.clone()));
        let kernel_map =
            current.with_graph_points(&kernel).expect("kernel points stay in the product");
        current = complement_mapping(&kernel_map, &ComplementMapSpec::point(chosen))
            .expect("kernel point lies in its own graph");
    }
}

/// `F` is a disparate mapping: nonempty graph and kernel equal to the graph.
pub fn is_disparate_mapping(inst: &Instance) -> bool {
    let graph = inst.graph_of();
    if graph.is_empty() {
        return false;
    }
    let w_cap = inst.vertices().len().saturating_sub(1).max(1);
    match calc_method_1(inst, w_cap).outcome {
        KernelOutcome::Kernel(kernel) => kernel == graph,
        KernelOutcome::Infeasible(_) => false,
    }
}

/// Every kernel fiber is a singleton: the instance has exactly one disparate
/// selection.
pub fn has_unique_selection(inst: &Instance) -> bool {
    let w_cap = inst.vertices().len().saturating_sub(1).max(1);
    match calc_method_1(inst, w_cap).outcome {
        KernelOutcome::Kernel(kernel) => {
            inst.vertices().iter().all(|x| kernel.iter().filter(|p| &p.x == x).count() == 1)
        }
        KernelOutcome::Infeasible(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disparate::is_disparate_set;
    use crate::instance::{fixtures, selection_graph};
    use crate::oracle::kernel_bruteforce;

    fn vset(tokens: &[&str]) -> VertexSet {
        tokens.iter().map(|t| VertexId::new(*t)).collect()
    }

    fn pset(pairs: &[(&str, &str)]) -> PointSet {
        pairs.iter().map(|(x, y)| Point::new(*x, *y)).collect()
    }

    #[test]
    fn elimination_points_fixtures() {
        let conflict = fixtures::conflict();
        assert_eq!(elimination_points(&conflict, &vset(&["2"])).unwrap(), pset(&[("1", "1")]));
        let path3 = fixtures::path3();
        assert_eq!(elimination_points(&path3, &vset(&["1"])).unwrap(), pset(&[("2", "1")]));
        let edge2 = fixtures::edge2();
        assert!(elimination_points(&edge2, &vset(&["1"])).unwrap().is_empty());
        assert!(elimination_points(&edge2, &VertexSet::new()).is_err());
    }

    #[test]
    fn find_elimination_set_fixtures() {
        assert_eq!(find_elimination_set(&fixtures::conflict(), 1), Some(vset(&["1"])));
        assert_eq!(find_elimination_set(&fixtures::edge2(), 1), None);
        assert_eq!(find_elimination_set(&fixtures::path3(), 2), Some(vset(&["1"])));
    }

    #[test]
    fn method_1_fixtures() {
        let path3 = fixtures::path3();
        let trace = calc_method_1(&path3, 2);
        assert_eq!(
            trace.outcome,
            KernelOutcome::Kernel(pset(&[("1", "1"), ("2", "2"), ("3", "1")]))
        );
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].removed, pset(&[("2", "1")]));

        let conflict = fixtures::conflict();
        let trace = calc_method_1(&conflict, 1);
        assert_eq!(trace.outcome, KernelOutcome::Infeasible(VertexId::new("2")));
        assert_eq!(trace.steps[0].witness, vset(&["1"]));

        let edge2 = fixtures::edge2();
        let trace = calc_method_1(&edge2, 1);
        assert_eq!(trace.outcome, KernelOutcome::Kernel(edge2.graph_of()));
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn method_1_matches_bruteforce_on_fixtures() {
        for inst in [fixtures::single(), fixtures::edge2(), fixtures::path3(), fixtures::cliques()]
        {
            let w_cap = inst.vertices().len().saturating_sub(1).max(1);
            match calc_method_1(&inst, w_cap).outcome {
                KernelOutcome::Kernel(k) => assert_eq!(k, kernel_bruteforce(&inst)),
                KernelOutcome::Infeasible(_) => panic!("fixture is solvable"),
            }
        }
    }

    #[test]
    fn method_1_trace_invariants() {
        let path3 = fixtures::path3();
        let trace = calc_method_1(&path3, 2);
        let graph = path3.graph_of();
        let mut seen = PointSet::new();
        for step in &trace.steps {
            assert!(!step.removed.is_empty());
            assert!(step.removed.is_subset(&graph));
            assert!(step.removed.is_disjoint(&seen));
            seen.extend(step.removed.iter().cloned());
        }
    }

    #[test]
    fn method_1_empty_graph_is_infeasible() {
        let inst = Instance::from_parts(&["1", "2"], &[], &["1"], &[]).unwrap();
        let trace = calc_method_1(&inst, 1);
        assert_eq!(trace.outcome, KernelOutcome::Infeasible(VertexId::new("1")));
    }

    #[test]
    fn method_1_flushes_empty_domains() {
        // A vertex with an empty domain but a nonempty overall graph: the
        // singleton witness {x} eliminates everything, certifying
        // infeasibility.
        let inst =
            Instance::from_parts(&["1", "2"], &[], &["1"], &[("2", &["1"])]).unwrap();
        let trace = calc_method_1(&inst, 1);
        assert!(matches!(trace.outcome, KernelOutcome::Infeasible(_)));
    }

    #[test]
    fn method_2_fixtures() {
        let edge2 = fixtures::edge2();
        let trace = calc_method_2(&edge2, 1);
        match &trace.outcome {
            SolveOutcome::Selection(s) => {
                let expected: Selection = [("1", "1"), ("2", "2")]
                    .iter()
                    .map(|(x, y)| (VertexId::new(*x), ColorId::new(*y)))
                    .collect();
                assert_eq!(s, &expected);
                assert!(is_disparate_set(&edge2, &selection_graph(s)));
            }
            SolveOutcome::Infeasible => panic!("edge2 is solvable"),
        }
        assert_eq!(trace.steps.len(), edge2.vertices().len());

        assert_eq!(calc_method_2(&fixtures::conflict(), 1).outcome, SolveOutcome::Infeasible);

        let path3 = fixtures::path3();
        match calc_method_2(&path3, 2).outcome {
            SolveOutcome::Selection(s) => {
                let expected: Selection = [("1", "1"), ("2", "2"), ("3", "1")]
                    .iter()
                    .map(|(x, y)| (VertexId::new(*x), ColorId::new(*y)))
                    .collect();
                assert_eq!(s, expected);
            }
            SolveOutcome::Infeasible => panic!("path3 is solvable"),
        }
    }

    #[test]
    fn disparate_mapping_and_uniqueness_fixtures() {
        assert!(is_disparate_mapping(&fixtures::edge2()));
        assert!(!is_disparate_mapping(&fixtures::path3()));
        assert!(!is_disparate_mapping(&fixtures::conflict()));

        assert!(has_unique_selection(&fixtures::path3()));
        assert!(!has_unique_selection(&fixtures::edge2()));
        assert!(!has_unique_selection(&fixtures::conflict()));
    }

    #[test]
    fn trace_serialization_format() {
        let trace = calc_method_1(&fixtures::path3(), 2);
        assert_eq!(trace.serialize_steps(), "1\t1\t(2,1)\n");
    }
}
