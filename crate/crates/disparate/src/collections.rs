//! Collections and Hall collections.
//!
//! A collection assigns to every nonempty vertex set `V` a point set
//! `A_V ⊂ G(F|_V)`. Collections are intensional here: a query function
//! backed either by a selection (`A_V = G(s|_V)`), by an explicit table
//! (tiny instances only), or by the restriction/derivation rules that
//! produce `H|_W` and `H_W` from an existing collection. A table over all
//! `2^|X| - 1` subsets is infeasible beyond tiny `X`, so unions over a
//! collection enumerate subsets only under a configurable cap, with the
//! definitional closed form used for selection-induced collections.
//!
//! A collection is a *Hall collection* when every `A_V` is disparate with
//! `|A_V| >= |V|`; it is *W-distributed* when the part of `A_{W ∪ V}`
//! absorbed by `W` and by the hull of the restricted collection never
//! exceeds `|W|`.

use std::collections::BTreeMap;

use crate::disparate::{compl, hull, is_disparate_set};
use crate::error::{Error, Result};
use crate::instance::{selection_graph, Instance, PointSet, Selection, VertexSet};

/// Caps guarding the exponential enumerations in this module and in
/// [`crate::cascades`].
#[derive(Clone, Debug)]
pub struct EnumerationCaps {
    /// Maximum set size whose subsets may be enumerated (unions over
    /// restricted collections, distributedness quantifiers, Hall checks).
    pub subset_cap: usize,
    /// Maximum `|X|` for the tiny direct generalized-Hall checker.
    pub tiny_vertices: usize,
    /// Maximum `|Y|` for the tiny direct generalized-Hall checker.
    pub tiny_colors: usize,
    /// Cascade depth cap; `None` means `2 * |X|`.
    pub depth_cap: Option<usize>,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps { subset_cap: 12, tiny_vertices: 3, tiny_colors: 3, depth_cap: None }
    }
}

impl EnumerationCaps {
    pub fn depth_cap_for(&self, inst: &Instance) -> usize {
        self.depth_cap.unwrap_or(2 * inst.vertices().len().max(1))
    }
}

/// All nonempty subsets of `set`, in (size, lexicographic) order.
pub(crate) fn nonempty_subsets(set: &VertexSet) -> Vec<VertexSet> {
    let items: Vec<_> = set.iter().cloned().collect();
    let n = items.len();
    let mut out: Vec<VertexSet> = Vec::with_capacity((1usize << n).saturating_sub(1));
    for mask in 1u64..(1u64 << n) {
        out.push(
            (0..n).filter(|i| mask & (1 << i) != 0).map(|i| items[i].clone()).collect(),
        );
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn check_subset_cap(set: &VertexSet, caps: &EnumerationCaps, what: &str) -> Result<()> {
    if set.len() > caps.subset_cap {
        return Err(Error::CapExceeded(format!(
            "{} would enumerate 2^{} subsets (cap {})",
            what,
            set.len(),
            caps.subset_cap
        )));
    }
    Ok(())
}

#[derive(Clone, Debug)]
enum Kind {
    /// `A_V = graph ∩ (V x Y)` for a selection graph.
    Induced { graph: PointSet },
    /// Explicit assignments for every nonempty subset of the domain.
    Table { entries: BTreeMap<VertexSet, PointSet> },
    /// `H|_W`: the base collection answering only within the new domain.
    Restricted { base: Box<Collection> },
    /// `H_W`: `A_V = base(W ∪ V) ∩ filter ∩ (V x Y)` with
    /// `filter = compl(∪ H|_W)` precomputed in the stage instance.
    Derived { base: Box<Collection>, removed: VertexSet, filter: PointSet },
}

/// An intensional collection over a vertex domain.
#[derive(Clone, Debug)]
pub struct Collection {
    domain: VertexSet,
    kind: Kind,
}

impl Collection {
    pub fn domain(&self) -> &VertexSet {
        &self.domain
    }

    /// The assignment `A_V` for a nonempty `V` within the domain.
    pub fn assign(&self, v: &VertexSet) -> Result<PointSet> {
        if v.is_empty() {
            return Err(Error::EmptySet("collection query".into()));
        }
        if !v.is_subset(&self.domain) {
            return Err(Error::OutOfDomain(
                format!("{:?}", v.iter().map(|x| x.token()).collect::<Vec<_>>()),
                format!("{:?}", self.domain.iter().map(|x| x.token()).collect::<Vec<_>>()),
            ));
        }
        self.assign_unchecked(v)
    }

    fn assign_unchecked(&self, v: &VertexSet) -> Result<PointSet> {
        match &self.kind {
            Kind::Induced { graph } => {
                Ok(graph.iter().filter(|p| v.contains(&p.x)).cloned().collect())
            }
            Kind::Table { entries } => entries.get(v).cloned().ok_or_else(|| {
                Error::OutOfDomain(format!("{v:?}"), "table keys".into())
            }),
            Kind::Restricted { base } => base.assign_unchecked(v),
            Kind::Derived { base, removed, filter } => {
                let wv: VertexSet = removed.union(v).cloned().collect();
                let a = base.assign_unchecked(&wv)?;
                Ok(a.into_iter().filter(|p| filter.contains(p) && v.contains(&p.x)).collect())
            }
        }
    }

    /// Union of `A_V'` over all nonempty `V' ⊂ w`. Definitional closed form
    /// for selection-induced collections; subset enumeration (capped)
    /// otherwise.
    pub fn union_over_subsets(&self, w: &VertexSet, caps: &EnumerationCaps) -> Result<PointSet> {
        if !w.is_subset(&self.domain) {
            return Err(Error::OutOfDomain(
                format!("{:?}", w.iter().map(|x| x.token()).collect::<Vec<_>>()),
                format!("{:?}", self.domain.iter().map(|x| x.token()).collect::<Vec<_>>()),
            ));
        }
        match &self.kind {
            Kind::Induced { graph } => {
                Ok(graph.iter().filter(|p| w.contains(&p.x)).cloned().collect())
            }
            Kind::Restricted { base } => base.union_over_subsets(w, caps),
            _ => {
                check_subset_cap(w, caps, "collection union")?;
                let mut out = PointSet::new();
                for v in nonempty_subsets(w) {
                    out.extend(self.assign_unchecked(&v)?);
                }
                Ok(out)
            }
        }
    }

    pub(crate) fn table_unchecked(domain: VertexSet, entries: BTreeMap<VertexSet, PointSet>) -> Self {
        Collection { domain, kind: Kind::Table { entries } }
    }
}

/// The collection induced by a selection: `A_V = G(s|_V)`.
pub fn induced_collection(inst: &Instance, s: &Selection) -> Result<Collection> {
    if !inst.is_selection(s) {
        let offender = s
            .iter()
            .find(|(x, y)| !inst.contains_vertex(x) || !inst.domain(x).contains(*y))
            .map(|(x, _)| x.token().to_owned())
            .unwrap_or_else(|| "missing vertex".into());
        return Err(Error::InvalidSelection(offender));
    }
    Ok(Collection { domain: inst.vertex_set(), kind: Kind::Induced { graph: selection_graph(s) } })
}

/// An explicit table collection; must assign every nonempty subset of `X`
/// a subset of `G(F|_V)`.
pub fn table_collection(
    inst: &Instance,
    entries: BTreeMap<VertexSet, PointSet>,
) -> Result<Collection> {
    let domain = inst.vertex_set();
    let expected = nonempty_subsets(&domain);
    if entries.len() != expected.len() || expected.iter().any(|v| !entries.contains_key(v)) {
        return Err(Error::Malformed(
            "table collection must assign exactly the nonempty subsets of X".into(),
        ));
    }
    for (v, a) in &entries {
        for p in a {
            if !v.contains(&p.x) || !inst.domain(&p.x).contains(&p.y) {
                return Err(Error::PointsOutOfGraph(format!(
                    "{p} is outside the graph of the restriction"
                )));
            }
        }
    }
    Ok(Collection { domain, kind: Kind::Table { entries } })
}

/// `H|_W`: the restriction of a collection to a nonempty `W`.
pub fn restrict_collection(h: &Collection, w: &VertexSet) -> Result<Collection> {
    if w.is_empty() {
        return Err(Error::EmptySet("restriction set".into()));
    }
    if !w.is_subset(h.domain()) {
        return Err(Error::OutOfDomain("restriction set".into(), "collection domain".into()));
    }
    if w == h.domain() {
        return Ok(h.clone());
    }
    Ok(Collection { domain: w.clone(), kind: Kind::Restricted { base: Box::new(h.clone()) } })
}

/// `H_W`: the derived collection over `X \ W` with
/// `A_V = A_{W ∪ V} ∩ compl(∪_{A ∈ H|_W} A) ∩ (V x Y)`.
pub fn derive_collection(
    inst: &Instance,
    h: &Collection,
    w: &VertexSet,
    caps: &EnumerationCaps,
) -> Result<Collection> {
    if w.is_empty() {
        return Err(Error::EmptySet("derivation set".into()));
    }
    if h.domain() != &inst.vertex_set() {
        return Err(Error::OutOfDomain("collection domain".into(), "instance vertices".into()));
    }
    if !w.is_subset(h.domain()) || w == h.domain() {
        return Err(Error::OutOfDomain(
            "derivation set".into(),
            "proper subsets of the collection domain".into(),
        ));
    }
    let union = h.union_over_subsets(w, caps)?;
    let filter = compl(inst, &union);
    let rest: VertexSet = h.domain().difference(w).cloned().collect();
    Ok(Collection {
        domain: rest,
        kind: Kind::Derived { base: Box::new(h.clone()), removed: w.clone(), filter },
    })
}

/// The submapping `F^{H_W}` on `W` with graph
/// `G(F|_W) ∩ compl(∪_{A ∈ H_W} A)`; the union ranges over all nonempty
/// `V ⊂ X \ W` (empty when `W = X`).
pub fn submap_from_collection(
    inst: &Instance,
    h: &Collection,
    w: &VertexSet,
    caps: &EnumerationCaps,
) -> Result<Instance> {
    if w.is_empty() {
        return Err(Error::EmptySet("submapping set".into()));
    }
    if h.domain() != &inst.vertex_set() || !w.is_subset(h.domain()) {
        return Err(Error::OutOfDomain("submapping set".into(), "collection domain".into()));
    }
    let union = if w == h.domain() {
        PointSet::new()
    } else {
        let derived = derive_collection(inst, h, w, caps)?;
        let rest: VertexSet = h.domain().difference(w).cloned().collect();
        derived.union_over_subsets(&rest, caps)?
    };
    let surviving = compl(inst, &union);
    let restricted = inst.restrict(w)?;
    let graph: PointSet =
        restricted.graph_of().into_iter().filter(|p| surviving.contains(p)).collect();
    restricted.with_graph_points(&graph)
}

/// Every `A_V` disparate with `|A_V| >= |V|`, over all nonempty `V ⊂ X`.
pub fn is_hall_collection(
    inst: &Instance,
    h: &Collection,
    caps: &EnumerationCaps,
) -> Result<bool> {
    let domain = inst.vertex_set();
    if h.domain() != &domain {
        return Err(Error::OutOfDomain("collection domain".into(), "instance vertices".into()));
    }
    check_subset_cap(&domain, caps, "Hall collection check")?;
    for v in nonempty_subsets(&domain) {
        let a = h.assign(&v)?;
        if a.len() < v.len() || !is_disparate_set(inst, &a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The W-distributed bound:
/// `|A_{W ∪ V} ∩ ((W x Y) ∪ (hull(∪ H|_W) ∩ (V x Y)))| <= |W|`
/// for every nonempty `V ⊂ X \ W`.
pub fn is_w_distributed(
    inst: &Instance,
    h: &Collection,
    w: &VertexSet,
    caps: &EnumerationCaps,
) -> Result<bool> {
    let domain = inst.vertex_set();
    if h.domain() != &domain {
        return Err(Error::OutOfDomain("collection domain".into(), "instance vertices".into()));
    }
    if w.is_empty() {
        return Err(Error::EmptySet("distribution set".into()));
    }
    if !w.is_subset(&domain) || w == &domain {
        return Err(Error::OutOfDomain(
            "distribution set".into(),
            "proper subsets of the instance vertices".into(),
        ));
    }
    let rest: VertexSet = domain.difference(w).cloned().collect();
    check_subset_cap(&rest, caps, "distribution check")?;
    let union = h.union_over_subsets(w, caps)?;
    let hull_of_union = hull(inst, &union);
    for v in nonempty_subsets(&rest) {
        let wv: VertexSet = w.union(&v).cloned().collect();
        let a = h.assign(&wv)?;
        let absorbed = a
            .iter()
            .filter(|p| w.contains(&p.x) || (hull_of_union.contains(p) && v.contains(&p.x)))
            .count();
        if absorbed > w.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{fixtures, ColorId, Point, VertexId};
    use crate::oracle::enumerate_selections;

    fn caps() -> EnumerationCaps {
        EnumerationCaps::default()
    }

    fn vs(tokens: &[&str]) -> VertexSet {
        tokens.iter().map(|t| VertexId::new(*t)).collect()
    }

    fn pts(pairs: &[(&str, &str)]) -> PointSet {
        pairs.iter().map(|(x, y)| Point::new(*x, *y)).collect()
    }

    fn sel(pairs: &[(&str, &str)]) -> Selection {
        pairs.iter().map(|(x, y)| (VertexId::new(*x), ColorId::new(*y))).collect()
    }

    fn path3_collection() -> (Instance, Collection) {
        let inst = fixtures::path3();
        let s = sel(&[("1", "1"), ("2", "2"), ("3", "1")]);
        let h = induced_collection(&inst, &s).unwrap();
        (inst, h)
    }

    #[test]
    fn induced_collection_reads_off_selection() {
        let (_, h) = path3_collection();
        assert_eq!(h.assign(&vs(&["1", "3"])).unwrap(), pts(&[("1", "1"), ("3", "1")]));
        assert_eq!(h.assign(&vs(&["2"])).unwrap(), pts(&[("2", "2")]));

        let edge2 = fixtures::edge2();
        let h2 = induced_collection(&edge2, &sel(&[("1", "1"), ("2", "2")])).unwrap();
        assert_eq!(h2.assign(&vs(&["1", "2"])).unwrap(), pts(&[("1", "1"), ("2", "2")]));

        // Not a selection: color outside the domain.
        let bad = sel(&[("1", "1"), ("2", "2"), ("3", "2")]);
        assert!(induced_collection(&fixtures::path3(), &bad).is_err());
    }

    #[test]
    fn restriction_answers_only_inside() {
        let (_, h) = path3_collection();
        let r = restrict_collection(&h, &vs(&["1", "3"])).unwrap();
        assert_eq!(r.assign(&vs(&["1", "3"])).unwrap(), pts(&[("1", "1"), ("3", "1")]));
        assert!(r.assign(&vs(&["2"])).is_err());
        assert!(r.assign(&vs(&[])).is_err());

        let r2 = restrict_collection(&h, &vs(&["2"])).unwrap();
        assert_eq!(r2.assign(&vs(&["2"])).unwrap(), pts(&[("2", "2")]));

        let full = restrict_collection(&h, &vs(&["1", "2", "3"])).unwrap();
        assert_eq!(full.assign(&vs(&["1", "2", "3"])).unwrap(), h.assign(&vs(&["1", "2", "3"])).unwrap());
    }

    #[test]
    fn derived_collection_matches_direct_formula() {
        let (inst, h) = path3_collection();
        let d = derive_collection(&inst, &h, &vs(&["2"]), &caps()).unwrap();
        assert_eq!(d.assign(&vs(&["1", "3"])).unwrap(), pts(&[("1", "1"), ("3", "1")]));

        let edge2 = fixtures::edge2();
        let h2 = induced_collection(&edge2, &sel(&[("1", "1"), ("2", "2")])).unwrap();
        let d2 = derive_collection(&edge2, &h2, &vs(&["1"]), &caps()).unwrap();
        assert_eq!(d2.assign(&vs(&["2"])).unwrap(), pts(&[("2", "2")]));
    }

    #[test]
    fn derived_collection_empties_when_assignment_sits_inside_w() {
        // A_{1,2} ⊂ W x Y for W = {1}: the V-slice is empty regardless of
        // the complement filter.
        let edge2 = fixtures::edge2();
        let mut entries = BTreeMap::new();
        entries.insert(vs(&["1"]), pts(&[("1", "1"), ("1", "2")]));
        entries.insert(vs(&["2"]), pts(&[("2", "2")]));
        entries.insert(vs(&["1", "2"]), pts(&[("1", "1"), ("1", "2")]));
        let h = table_collection(&edge2, entries).unwrap();
        let d = derive_collection(&edge2, &h, &vs(&["1"]), &caps()).unwrap();
        assert!(d.assign(&vs(&["2"])).unwrap().is_empty());
    }

    #[test]
    fn submapping_from_collection_fixtures() {
        let (inst, h) = path3_collection();
        let sub = submap_from_collection(&inst, &h, &vs(&["2"]), &caps()).unwrap();
        assert_eq!(sub.graph_of(), pts(&[("2", "2")]));

        let full = submap_from_collection(&inst, &h, &vs(&["1", "2", "3"]), &caps()).unwrap();
        assert_eq!(full.graph_of(), inst.graph_of());

        let edge2 = fixtures::edge2();
        let h2 = induced_collection(&edge2, &sel(&[("1", "1"), ("2", "2")])).unwrap();
        let sub2 = submap_from_collection(&edge2, &h2, &vs(&["1"]), &caps()).unwrap();
        assert_eq!(sub2.graph_of(), pts(&[("1", "1")]));
    }

    #[test]
    fn hall_collection_checks() {
        let (inst, h) = path3_collection();
        assert!(is_hall_collection(&inst, &h, &caps()).unwrap());

        // Induced by a non-disparate selection of the conflict fixture.
        let conflict = fixtures::conflict();
        let h_bad = induced_collection(&conflict, &sel(&[("1", "1"), ("2", "1")])).unwrap();
        assert!(!is_hall_collection(&conflict, &h_bad, &caps()).unwrap());

        // An empty singleton assignment violates |A_V| >= |V|.
        let single = fixtures::single();
        let mut entries = BTreeMap::new();
        entries.insert(vs(&["a"]), PointSet::new());
        let h_empty = table_collection(&single, entries).unwrap();
        assert!(!is_hall_collection(&single, &h_empty, &caps()).unwrap());
    }

    #[test]
    fn induced_collections_are_w_distributed() {
        for inst in [fixtures::edge2(), fixtures::path3(), fixtures::cliques()] {
            for s in enumerate_selections(&inst, 3) {
                let h = induced_collection(&inst, &s).unwrap();
                for w in nonempty_subsets(&inst.vertex_set()) {
                    if w == inst.vertex_set() {
                        continue;
                    }
                    assert!(is_w_distributed(&inst, &h, &w, &caps()).unwrap());
                }
            }
        }
    }

    #[test]
    fn distribution_bound_from_table_collections() {
        // Conflict fixture: the absorbed part has exactly |W| points.
        let conflict = fixtures::conflict();
        let mut entries = BTreeMap::new();
        entries.insert(vs(&["1"]), pts(&[("1", "1")]));
        entries.insert(vs(&["2"]), pts(&[("2", "1")]));
        entries.insert(vs(&["1", "2"]), pts(&[("1", "1")]));
        let h = table_collection(&conflict, entries).unwrap();
        assert!(is_w_distributed(&conflict, &h, &vs(&["1"]), &caps()).unwrap());

        // Edge fixture with A_{1,2} two points inside W x Y: bound 2 > 1.
        let edge2 = fixtures::edge2();
        let mut entries = BTreeMap::new();
        entries.insert(vs(&["1"]), pts(&[("1", "1")]));
        entries.insert(vs(&["2"]), pts(&[("2", "2")]));
        entries.insert(vs(&["1", "2"]), pts(&[("1", "1"), ("1", "2")]));
        let h = table_collection(&edge2, entries).unwrap();
        assert!(!is_w_distributed(&edge2, &h, &vs(&["1"]), &caps()).unwrap());
    }

    #[test]
    fn table_collection_requires_full_coverage() {
        let edge2 = fixtures::edge2();
        let mut entries = BTreeMap::new();
        entries.insert(vs(&["1"]), pts(&[("1", "1")]));
        assert!(table_collection(&edge2, entries).is_err());
    }
}
