//! Cascades and the tiny direct decision procedure for the generalized Hall
//! condition.
//!
//! A cascade is a tuple of vertex sets where each step is contained in its
//! predecessor or in the predecessor's complement; it drives the inductive
//! derivation of stage collections (`H|_W` / `H_W`) and stage mappings
//! (`F^{H_W}` / the complement mapping). Critical cascades take every step
//! from the minimal generalized critical sets of the current stage mapping;
//! a Hall collection is *distributed* when it stays W-distributed along every
//! such cascade, and the generalized Hall condition (for more than one
//! vertex) asks for a distributed Hall collection.
//!
//! Criticality of stage mappings is decided by the oracle via solvability;
//! the inductive route through distributed Hall collections is what this
//! module evaluates directly, at tiny scale, by enumerating candidate table
//! collections.

use crate::collections::{
    derive_collection, is_hall_collection, is_w_distributed, nonempty_subsets,
    restrict_collection, submap_from_collection, Collection, EnumerationCaps,
};
use crate::disparate::{complement_mapping, is_disparate_set, ComplementMapSpec};
use crate::error::{Error, Result};
use crate::instance::{Instance, Point, PointSet, VertexSet};
use crate::oracle::minimal_critical_sets;

/// A validated cascade: base `W_0`, steps `(W_1, ..., W_k)`, and the
/// complementary tuple computed by the inductive rule
/// `W^c_i = W_{i-1} \ W_i` (when `W_i ⊂ W_{i-1}`) or `W^c_{i-1} \ W_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cascade {
    base: VertexSet,
    steps: Vec<VertexSet>,
    complements: Vec<VertexSet>,
    pres: Vec<VertexSet>,
}

impl Cascade {
    /// Validates the cascade condition and computes complements and
    /// predecessors for all steps.
    pub fn new(base: VertexSet, steps: Vec<VertexSet>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptySet("cascade steps".into()));
        }
        let mut complements = Vec::with_capacity(steps.len());
        let mut pres = Vec::with_capacity(steps.len());
        let mut prev_w = base.clone();
        let mut prev_wc = base.clone();
        for (idx, w) in steps.iter().enumerate() {
            let (wc, pre) = if w.is_subset(&prev_w) {
                (prev_w.difference(w).cloned().collect::<VertexSet>(), prev_w.clone())
            } else if w.is_subset(&prev_wc) {
                (prev_wc.difference(w).cloned().collect::<VertexSet>(), prev_wc.clone())
            } else {
                return Err(Error::NotACascade { index: idx + 1 });
            };
            complements.push(wc.clone());
            pres.push(pre);
            prev_w = w.clone();
            prev_wc = wc;
        }
        Ok(Cascade { base, steps, complements, pres })
    }

    pub fn base(&self) -> &VertexSet {
        &self.base
    }

    pub fn steps(&self) -> &[VertexSet] {
        &self.steps
    }

    pub fn complements(&self) -> &[VertexSet] {
        &self.complements
    }

    /// Number of steps `k`; always at least 1.
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    /// `pre(i)` for 1-based `i`: the stage domain the `i`-th step lives in.
    pub fn pre(&self, i: usize) -> Result<&VertexSet> {
        if i == 0 || i > self.steps.len() {
            return Err(Error::CascadeIndex { index: i, max: self.steps.len() });
        }
        Ok(&self.pres[i - 1])
    }

    /// The complementary tuple, itself a cascade in the same base.
    pub fn complementary(&self) -> Result<Cascade> {
        Cascade::new(self.base.clone(), self.complements.clone())
    }
}

/// The stage pair `(H(W_1..W_i), F(W_1..W_i))` of a cascade under a
/// collection; `i = 0` returns the inputs themselves. Valid for
/// `0 <= i <= k - 1` since the branch taken at step `j` depends on where
/// `W_{j+1}` lives.
pub fn cascade_derive(
    inst: &Instance,
    h: &Collection,
    cascade: &Cascade,
    i: usize,
    caps: &EnumerationCaps,
) -> Result<(Collection, Instance)> {
    if h.domain() != &inst.vertex_set() || cascade.base() != h.domain() {
        return Err(Error::OutOfDomain("cascade base".into(), "instance vertices".into()));
    }
    let k = cascade.depth();
    if i + 1 > k {
        return Err(Error::CascadeIndex { index: i, max: k - 1 });
    }
    let mut cur_h = h.clone();
    let mut cur_f = inst.clone();
    for j in 1..=i {
        let w_j = &cascade.steps()[j - 1];
        let wc_j = &cascade.complements()[j - 1];
        let next = &cascade.steps()[j];
        let f_tilde = submap_from_collection(&cur_f, &cur_h, w_j, caps)?;
        if next.is_subset(w_j) {
            cur_h = restrict_collection(&cur_h, w_j)?;
            cur_f = f_tilde;
        } else if next.is_subset(wc_j) {
            let spec = ComplementMapSpec::new(w_j.clone(), f_tilde.graph_of());
            cur_h = derive_collection(&cur_f, &cur_h, w_j, caps)?;
            cur_f = complement_mapping(&cur_f, &spec)?;
        } else {
            return Err(Error::NotACascade { index: j + 1 });
        }
    }
    Ok((cur_h, cur_f))
}

/// One admissible extension of a critical cascade: the next step, the stage
/// pair it is critical on, and that stage's complement inside the previous
/// stage domain.
struct StageSide {
    stage_f: Instance,
    stage_h: Collection,
    critical: Vec<VertexSet>,
}

/// The two candidate stage pairs after step `w_last` (with complement
/// `wc_last`): the submapping side on `w_last` and, when the complement is
/// nonempty, the complement-mapping side on `wc_last`.
fn stage_sides(
    f_prev: &Instance,
    h_prev: &Collection,
    w_last: &VertexSet,
    wc_last: &VertexSet,
    caps: &EnumerationCaps,
) -> Result<Vec<StageSide>> {
    let f_tilde = submap_from_collection(f_prev, h_prev, w_last, caps)?;
    let mut sides = Vec::with_capacity(2);
    let comp = if wc_last.is_empty() {
        None
    } else {
        let spec = ComplementMapSpec::new(w_last.clone(), f_tilde.graph_of());
        let stage_f = complement_mapping(f_prev, &spec)?;
        let stage_h = derive_collection(f_prev, h_prev, w_last, caps)?;
        Some((stage_f, stage_h))
    };
    let h_sub = restrict_collection(h_prev, w_last)?;
    let critical = minimal_critical_sets(&f_tilde);
    sides.push(StageSide { stage_f: f_tilde, stage_h: h_sub, critical });
    if let Some((stage_f, stage_h)) = comp {
        let critical = minimal_critical_sets(&stage_f);
        sides.push(StageSide { stage_f, stage_h, critical });
    }
    Ok(sides)
}

/// All primitive critical cascades of `(F, H)` up to `depth_cap`: every step
/// is a minimal generalized critical set of its stage mapping.
pub fn enumerate_primitive_critical_cascades(
    inst: &Instance,
    h: &Collection,
    depth_cap: usize,
    caps: &EnumerationCaps,
) -> Result<Vec<Cascade>> {
    if depth_cap == 0 {
        return Err(Error::CapExceeded("depth cap must be at least 1".into()));
    }
    if h.domain() != &inst.vertex_set() {
        return Err(Error::OutOfDomain("collection domain".into(), "instance vertices".into()));
    }
    fn rec(
        f_prev: &Instance,
        h_prev: &Collection,
        w_last: &VertexSet,
        wc_last: &VertexSet,
        base: &VertexSet,
        prefix: &mut Vec<VertexSet>,
        out: &mut Vec<Cascade>,
        depth_cap: usize,
        caps: &EnumerationCaps,
    ) -> Result<()> {
        if prefix.len() >= depth_cap {
            return Ok(());
        }
        for side in stage_sides(f_prev, h_prev, w_last, wc_last, caps)? {
            for w_next in &side.critical {
                prefix.push(w_next.clone());
                out.push(Cascade::new(base.clone(), prefix.clone())?);
                let wc_next: VertexSet = side
                    .stage_f
                    .vertex_set()
                    .difference(w_next)
                    .cloned()
                    .collect();
                rec(
                    &side.stage_f,
                    &side.stage_h,
                    w_next,
                    &wc_next,
                    base,
                    prefix,
                    out,
                    depth_cap,
                    caps,
                )?;
                prefix.pop();
            }
        }
        Ok(())
    }

    let base = inst.vertex_set();
    let mut out = Vec::new();
    for w1 in minimal_critical_sets(inst) {
        let wc1: VertexSet = base.difference(&w1).cloned().collect();
        let mut prefix = vec![w1.clone()];
        out.push(Cascade::new(base.clone(), prefix.clone())?);
        rec(inst, h, &w1, &wc1, &base, &mut prefix, &mut out, depth_cap, caps)?;
    }
    Ok(out)
}

/// Is `h` a distributed Hall collection: a Hall collection that stays
/// W-distributed at every step of every primitive critical cascade (up to
/// `depth_cap`)?
pub fn is_distributed_hall_collection(
    inst: &Instance,
    h: &Collection,
    depth_cap: usize,
    caps: &EnumerationCaps,
) -> Result<bool> {
    if !is_hall_collection(inst, h, caps)? {
        return Ok(false);
    }
    fn rec(
        f_prev: &Instance,
        h_prev: &Collection,
        w_last: &VertexSet,
        wc_last: &VertexSet,
        depth_left: usize,
        caps: &EnumerationCaps,
    ) -> Result<bool> {
        if depth_left == 0 {
            return Ok(true);
        }
        for side in stage_sides(f_prev, h_prev, w_last, wc_last, caps)? {
            for w_next in &side.critical {
                if !is_w_distributed(&side.stage_f, &side.stage_h, w_next, caps)? {
                    return Ok(false);
                }
                let wc_next: VertexSet =
                    side.stage_f.vertex_set().difference(w_next).cloned().collect();
                if !rec(&side.stage_f, &side.stage_h, w_next, &wc_next, depth_left - 1, caps)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    let base = inst.vertex_set();
    for w1 in minimal_critical_sets(inst) {
        if !is_w_distributed(inst, h, &w1, caps)? {
            return Ok(false);
        }
        let wc1: VertexSet = base.difference(&w1).cloned().collect();
        if !rec(inst, h, &w1, &wc1, depth_cap.saturating_sub(1), caps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Direct tiny-scale evaluation of the generalized Hall condition.
///
/// Base case (`|X| = 1`): `G(F)` nonempty. Otherwise: some table Hall
/// collection (all `A_V` disparate with `|A_V| >= |V|`) is distributed.
/// Candidates are enumerated smallest-first per subset and tested against
/// every primitive critical cascade up to the depth cap.
pub fn check_generalized_hall_tiny(inst: &Instance, caps: &EnumerationCaps) -> Result<bool> {
    let n = inst.vertices().len();
    if n > caps.tiny_vertices || inst.colors().len() > caps.tiny_colors {
        return Err(Error::CapExceeded(format!(
            "tiny checker handles at most {} vertices and {} colors",
            caps.tiny_vertices, caps.tiny_colors
        )));
    }
    if n == 0 {
        return Ok(true);
    }
    if n == 1 {
        return Ok(!inst.graph_of().is_empty());
    }
    let depth_cap = caps.depth_cap_for(inst);
    let domain = inst.vertex_set();
    let subsets = nonempty_subsets(&domain);

    // Candidate assignments per subset: disparate A_V ⊂ G(F|_V) with
    // |A_V| >= |V|, smallest first.
    let mut candidates: Vec<(VertexSet, Vec<PointSet>)> = Vec::with_capacity(subsets.len());
    for v in &subsets {
        let graph_v: Vec<Point> =
            inst.graph_of().into_iter().filter(|p| v.contains(&p.x)).collect();
        let m = graph_v.len();
        let mut options: Vec<PointSet> = Vec::new();
        for mask in 0u64..(1u64 << m) {
            if (mask.count_ones() as usize) < v.len() {
                continue;
            }
            let a: PointSet = (0..m)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| graph_v[i].clone())
                .collect();
            if is_disparate_set(inst, &a) {
                options.push(a);
            }
        }
        if options.is_empty() {
            return Ok(false);
        }
        options.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        candidates.push((v.clone(), options));
    }

    fn dfs(
        inst: &Instance,
        candidates: &[(VertexSet, Vec<PointSet>)],
        idx: usize,
        table: &mut std::collections::BTreeMap<VertexSet, PointSet>,
        domain: &VertexSet,
        depth_cap: usize,
        caps: &EnumerationCaps,
    ) -> Result<bool> {
        if idx == candidates.len() {
            let h = Collection::table_unchecked(domain.clone(), table.clone());
            return is_distributed_hall_collection(inst, &h, depth_cap, caps);
        }
        let (v, options) = &candidates[idx];
        for a in options {
            table.insert(v.clone(), a.clone());
            if dfs(inst, candidates, idx + 1, table, domain, depth_cap, caps)? {
                return Ok(true);
            }
        }
        table.remove(v);
        Ok(false)
    }

    let mut table = std::collections::BTreeMap::new();
    dfs(inst, &candidates, 0, &mut table, &domain, depth_cap, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::induced_collection;
    use crate::instance::{fixtures, ColorId, Selection, VertexId};
    use crate::oracle::exists_selection;

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

    #[test]
    fn cascade_structure_examples() {
        let base = vs(&["1", "2", "3"]);
        let c = Cascade::new(base.clone(), vec![vs(&["1"]), vs(&["2", "3"])]).unwrap();
        assert_eq!(c.complements(), &[vs(&["2", "3"]), vs(&[])]);
        assert_eq!(c.pre(2).unwrap(), &vs(&["2", "3"]));

        let c2 = Cascade::new(base.clone(), vec![vs(&["1", "2"]), vs(&["1"])]).unwrap();
        assert_eq!(c2.complements(), &[vs(&["3"]), vs(&["2"])]);
        assert_eq!(c2.pre(2).unwrap(), &vs(&["1", "2"]));

        let bad = Cascade::new(base, vec![vs(&["1"]), vs(&["1", "2"])]);
        assert!(matches!(bad, Err(Error::NotACascade { index: 2 })));
    }

    #[test]
    fn pre_equals_step_union_complement() {
        let base = vs(&["1", "2", "3", "4"]);
        let cascades = [
            Cascade::new(base.clone(), vec![vs(&["1", "2"]), vs(&["2"]), vs(&["1"])]).unwrap(),
            Cascade::new(base.clone(), vec![vs(&["1", "2", "3"]), vs(&["4"])]).unwrap(),
            Cascade::new(base.clone(), vec![vs(&["1"]), vs(&["2", "3"]), vs(&["4"])]).unwrap(),
        ];
        for c in &cascades {
            for i in 1..=c.depth() {
                let expected: VertexSet =
                    c.steps()[i - 1].union(&c.complements()[i - 1]).cloned().collect();
                assert_eq!(c.pre(i).unwrap(), &expected);
            }
            // The complementary tuple is itself a cascade.
            assert!(c.complementary().is_ok());
        }
    }

    #[test]
    fn cascade_derive_identity_at_zero() {
        let inst = fixtures::path3();
        let h = induced_collection(&inst, &sel(&[("1", "1"), ("2", "2"), ("3", "1")])).unwrap();
        let c = Cascade::new(inst.vertex_set(), vec![vs(&["2"]), vs(&["1", "3"])]).unwrap();
        let (h0, f0) = cascade_derive(&inst, &h, &c, 0, &caps()).unwrap();
        assert_eq!(f0, inst);
        assert_eq!(h0.assign(&vs(&["1", "2", "3"])).unwrap(), h.assign(&vs(&["1", "2", "3"])).unwrap());
    }

    #[test]
    fn cascade_derive_branches() {
        let inst = fixtures::path3();
        let h = induced_collection(&inst, &sel(&[("1", "1"), ("2", "2"), ("3", "1")])).unwrap();

        // Complement branch: W_2 ⊂ W^c_1.
        let c = Cascade::new(inst.vertex_set(), vec![vs(&["2"]), vs(&["1", "3"])]).unwrap();
        let (_, f1) = cascade_derive(&inst, &h, &c, 1, &caps()).unwrap();
        assert_eq!(f1.vertex_set(), vs(&["1", "3"]));
        assert_eq!(f1.graph_of(), pts(&[("1", "1"), ("3", "1")]));

        // Restriction branch: W_2 ⊂ W_1.
        let c = Cascade::new(inst.vertex_set(), vec![vs(&["2"]), vs(&["2"])]).unwrap();
        let (_, f1) = cascade_derive(&inst, &h, &c, 1, &caps()).unwrap();
        assert_eq!(f1.vertex_set(), vs(&["2"]));
        assert_eq!(f1.graph_of(), pts(&[("2", "2")]));

        // Index out of range: the last stage is never defined.
        assert!(cascade_derive(&inst, &h, &c, 2, &caps()).is_err());
    }

    #[test]
    fn primitive_cascades_fixtures() {
        let edge2 = fixtures::edge2();
        let h = induced_collection(&edge2, &sel(&[("1", "1"), ("2", "2")])).unwrap();
        assert!(enumerate_primitive_critical_cascades(&edge2, &h, 4, &caps()).unwrap().is_empty());

        let path3 = fixtures::path3();
        let h = induced_collection(&path3, &sel(&[("1", "1"), ("2", "2"), ("3", "1")])).unwrap();
        let cascades = enumerate_primitive_critical_cascades(&path3, &h, 2, &caps()).unwrap();
        assert!(!cascades.is_empty());
        for c in &cascades {
            let first = &c.steps()[0];
            assert!(first == &vs(&["1"]) || first == &vs(&["3"]));
        }

        let single = fixtures::single();
        let s: Selection = sel(&[("a", "1")]);
        let h = induced_collection(&single, &s).unwrap();
        assert!(enumerate_primitive_critical_cascades(&single, &h, 2, &caps()).unwrap().is_empty());
    }

    #[test]
    fn tiny_checker_fixtures() {
        assert!(check_generalized_hall_tiny(&fixtures::single(), &caps()).unwrap());
        assert!(!check_generalized_hall_tiny(&fixtures::conflict(), &caps()).unwrap());
        let edge2 = fixtures::edge2();
        assert_eq!(check_generalized_hall_tiny(&edge2, &caps()).unwrap(), exists_selection(&edge2));
    }

    #[test]
    fn tiny_checker_rejects_large_instances() {
        assert!(matches!(
            check_generalized_hall_tiny(&fixtures::cliques(), &caps()),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn induced_collections_are_distributed() {
        let path3 = fixtures::path3();
        let h = induced_collection(&path3, &sel(&[("1", "1"), ("2", "2"), ("3", "1")])).unwrap();
        assert!(is_distributed_hall_collection(&path3, &h, 6, &caps()).unwrap());
    }
}
