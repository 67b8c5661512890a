//! Named property suites over a given instance.
//!
//! Each suite draws seeded random objects (point sets, vertex sets,
//! cascades, submappings) on the instance and checks the corresponding
//! identities exactly. A report carries the number of executed checks and
//! the first counterexample, if any; the `verify` CLI command prints it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cascades::{cascade_derive, Cascade};
use crate::collections::{
    derive_collection, induced_collection, is_hall_collection, is_w_distributed,
    nonempty_subsets, restrict_collection, submap_from_collection, Collection, EnumerationCaps,
};
use crate::disparate::{
    compl, complement_mapping, hull, is_disparate_pair, is_disparate_set, ComplementMapSpec,
};
use crate::error::{Error, Result};
use crate::instance::{selection_graph, Instance, PointSet, Selection, VertexSet};
use crate::kernel::{
    calc_method_1, calc_method_1_with, elimination_points, KernelOutcome, SolveCache,
};
use crate::oracle::{
    enumerate_selections, exists_selection, exists_selection_through, kernel_bruteforce,
    max_disparate_size, minimal_critical_sets,
};
use crate::sample::{random_cascade, random_point_subset, random_vertex_subset};
use crate::transitive::{
    clique_components, hall_check_transitive, is_t_critical, is_transitive, size_transitive,
    solve_transitive,
};

/// Outcome of one suite run.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub const SUITES: &[&str] = &["calculus", "collections", "cascades", "kernel", "transitive"];

/// Runs the named suite on the instance with the given seed and case count.
pub fn run_suite(name: &str, inst: &Instance, seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (executed, failure) = match name {
        "calculus" => calculus_suite(inst, &mut rng, cases),
        "collections" => collections_suite(inst, &mut rng, cases),
        "cascades" => cascades_suite(inst, &mut rng, cases),
        "kernel" => kernel_suite(inst, &mut rng, cases),
        "transitive" => transitive_suite(inst, &mut rng, cases),
        other => return Err(Error::UnknownSuite(other.to_owned())),
    };
    Ok(SuiteReport { name: name.to_owned(), cases: executed, failure })
}

type SuiteResult = (usize, Option<String>);

fn greedy_disparate_subset(inst: &Instance, from: &PointSet) -> PointSet {
    let mut out = PointSet::new();
    for p in from {
        if out.iter().all(|q| is_disparate_pair(inst, q, p)) {
            out.insert(p.clone());
        }
    }
    out
}

/// Partition, monotonicity, double complement, the two-statement
/// equivalence, and the decomposition identity.
fn calculus_suite(inst: &Instance, rng: &mut impl Rng, cases: usize) -> SuiteResult {
    let product = inst.product();
    let vertex_set = inst.vertex_set();
    let mut executed = 0;
    for case in 0..cases {
        let a = random_point_subset(rng, &product, 0.4);
        let b_extra = random_point_subset(rng, &product, 0.3);
        let b_superset: PointSet = a.union(&b_extra).cloned().collect();

        let hull_a = hull(inst, &a);
        let compl_a = compl(inst, &a);
        if !hull_a.is_disjoint(&compl_a) {
            return (executed, Some(format!("case {case}: hull and compl overlap")));
        }
        if hull_a.union(&compl_a).cloned().collect::<PointSet>() != product {
            return (executed, Some(format!("case {case}: hull and compl do not cover X x Y")));
        }
        if compl_a != product.difference(&hull_a).cloned().collect() {
            return (executed, Some(format!("case {case}: compl is not the hull's complement")));
        }
        if !a.is_subset(&hull_a) {
            return (executed, Some(format!("case {case}: A not within hull(A)")));
        }
        if !hull_a.is_subset(&hull(inst, &b_superset)) {
            return (executed, Some(format!("case {case}: hull not monotone")));
        }
        if !compl(inst, &b_superset).is_subset(&compl_a) {
            return (executed, Some(format!("case {case}: compl not antitone")));
        }
        if !a.is_subset(&compl(inst, &compl_a)) {
            return (executed, Some(format!("case {case}: A not within compl(compl(A))")));
        }

        // The equivalence, on an arbitrary pair and on a disparate pair.
        let raw_b = random_point_subset(rng, &product, 0.4);
        for (x, y) in [
            (a.clone(), raw_b),
            (
                greedy_disparate_subset(inst, &a),
                greedy_disparate_subset(inst, &random_point_subset(rng, &product, 0.4)),
            ),
        ] {
            let lhs = is_disparate_set(inst, &x)
                && is_disparate_set(inst, &y)
                && y.is_subset(&compl(inst, &x));
            let union: PointSet = x.union(&y).cloned().collect();
            let rhs = x.is_disjoint(&y) && is_disparate_set(inst, &union);
            if lhs != rhs {
                return (
                    executed,
                    Some(format!("case {case}: two-statement equivalence broke ({lhs} vs {rhs})")),
                );
            }
        }

        // Decomposition of (W ∪ V) x Y along hull(Z) / compl(Z).
        let w = random_vertex_subset(rng, &vertex_set, false);
        let rest: VertexSet = vertex_set.difference(&w).cloned().collect();
        let v = random_vertex_subset(rng, &rest, false);
        let z = random_point_subset(rng, &product, 0.4);
        let wy: PointSet = product.iter().filter(|p| w.contains(&p.x)).cloned().collect();
        let vy: PointSet = product.iter().filter(|p| v.contains(&p.x)).cloned().collect();
        let hull_z = hull(inst, &z);
        let compl_z = compl(inst, &z);
        let left: PointSet =
            product.iter().filter(|p| w.contains(&p.x) || v.contains(&p.x)).cloned().collect();
        let part1: PointSet = vy.intersection(&hull_z).cloned().collect();
        let part2: PointSet = vy.intersection(&compl_z).cloned().collect();
        let mut union = wy.clone();
        union.extend(part1.iter().cloned());
        union.extend(part2.iter().cloned());
        if union != left {
            return (executed, Some(format!("case {case}: decomposition union broke")));
        }
        let first: PointSet = wy.union(&part1).cloned().collect();
        if !first.is_disjoint(&part2) {
            return (executed, Some(format!("case {case}: decomposition overlap")));
        }
        executed += 1;
    }
    (executed, None)
}

/// Induced-collection laws: Hall, distributed, closed forms, and the
/// containment lemmas for derived collections.
fn collections_suite(inst: &Instance, rng: &mut impl Rng, cases: usize) -> SuiteResult {
    let caps = EnumerationCaps::default();
    let vertex_set = inst.vertex_set();
    if vertex_set.len() > caps.subset_cap {
        return (0, Some("instance too large for collection enumeration".into()));
    }
    let selections = enumerate_selections(inst, 5);
    let mut executed = 0;
    for (si, s) in selections.iter().enumerate() {
        let h = match induced_collection(inst, s) {
            Ok(h) => h,
            Err(e) => return (executed, Some(format!("selection {si}: {e}"))),
        };
        match is_hall_collection(inst, &h, &caps) {
            Ok(true) => {}
            Ok(false) => return (executed, Some(format!("selection {si}: induced not Hall"))),
            Err(e) => return (executed, Some(format!("selection {si}: {e}"))),
        }
        for w in nonempty_subsets(&vertex_set) {
            if w == vertex_set {
                continue;
            }
            let rest: VertexSet = vertex_set.difference(&w).cloned().collect();
            let ok = (|| -> Result<Option<String>> {
                if !is_w_distributed(inst, &h, &w, &caps)? {
                    return Ok(Some("induced collection not W-distributed".into()));
                }
                let restricted = restrict_collection(&h, &w)?;
                let derived = derive_collection(inst, &h, &w, &caps)?;
                // Closed forms of the restricted and derived collections.
                for v in nonempty_subsets(&w) {
                    let expect: PointSet =
                        selection_graph(s).into_iter().filter(|p| v.contains(&p.x)).collect();
                    if restricted.assign(&v)? != expect {
                        return Ok(Some("restricted closed form broke".into()));
                    }
                }
                for v in nonempty_subsets(&rest) {
                    let expect: PointSet =
                        selection_graph(s).into_iter().filter(|p| v.contains(&p.x)).collect();
                    if derived.assign(&v)? != expect {
                        return Ok(Some("derived closed form broke".into()));
                    }
                }
                let union_restricted = restricted.union_over_subsets(&w, &caps)?;
                let expect_w: PointSet =
                    selection_graph(s).into_iter().filter(|p| w.contains(&p.x)).collect();
                if union_restricted != expect_w {
                    return Ok(Some("restricted union closed form broke".into()));
                }
                let union_derived = derived.union_over_subsets(&rest, &caps)?;
                let expect_rest: PointSet =
                    selection_graph(s).into_iter().filter(|p| rest.contains(&p.x)).collect();
                if union_derived != expect_rest {
                    return Ok(Some("derived union closed form broke".into()));
                }
                // Containment lemmas and the split selections.
                let submap = submap_from_collection(inst, &h, &w, &caps)?;
                if !union_restricted.is_subset(&submap.graph_of()) {
                    return Ok(Some("restricted union escapes the submapping".into()));
                }
                let comp = complement_mapping(
                    inst,
                    &ComplementMapSpec::new(w.clone(), submap.graph_of()),
                )?;
                for v in nonempty_subsets(&rest) {
                    if !derived.assign(&v)?.is_subset(&comp.graph_of()) {
                        return Ok(Some("derived assignment escapes the complement mapping".into()));
                    }
                }
                let s_w: Selection =
                    s.iter().filter(|(x, _)| w.contains(*x)).map(|(x, y)| (x.clone(), y.clone())).collect();
                let s_rest: Selection =
                    s.iter().filter(|(x, _)| rest.contains(*x)).map(|(x, y)| (x.clone(), y.clone())).collect();
                if !submap.is_selection(&s_w) || !is_disparate_set(inst, &selection_graph(&s_w)) {
                    return Ok(Some("restricted selection is not a disparate selection of the submapping".into()));
                }
                if !comp.is_selection(&s_rest)
                    || !is_disparate_set(inst, &selection_graph(&s_rest))
                {
                    return Ok(Some(
                        "outer selection is not a disparate selection of the complement mapping".into(),
                    ));
                }
                // Hall collections push through distribution.
                if !is_hall_collection(&comp, &derived, &caps)? {
                    return Ok(Some("derived collection is not Hall on the complement mapping".into()));
                }
                Ok(None)
            })();
            match ok {
                Ok(None) => executed += 1,
                Ok(Some(msg)) => {
                    return (executed, Some(format!("selection {si}, W {w:?}: {msg}")))
                }
                Err(e) => return (executed, Some(format!("selection {si}, W {w:?}: {e}"))),
            }
            if executed >= cases {
                return (executed, None);
            }
        }
    }
    let _ = rng;
    (executed, None)
}

/// Cascade laws: predecessor identity, complementary cascades, and the
/// shift identities for stage collections and stage mappings.
fn cascades_suite(inst: &Instance, rng: &mut impl Rng, cases: usize) -> SuiteResult {
    let caps = EnumerationCaps::default();
    let mut executed = 0;
    if inst.vertices().is_empty() {
        return (0, None);
    }
    let selection = enumerate_selections(inst, 1).into_iter().next();
    for case in 0..cases {
        let len = rng.gen_range(1..=3.min(inst.vertices().len()));
        let cascade = random_cascade(rng, inst, len);
        for i in 1..=cascade.depth() {
            let expected: VertexSet = cascade.steps()[i - 1]
                .union(&cascade.complements()[i - 1])
                .cloned()
                .collect();
            if cascade.pre(i).expect("index in range") != &expected {
                return (executed, Some(format!("case {case}: pre(i) identity broke")));
            }
        }
        if cascade.complementary().is_err() {
            return (executed, Some(format!("case {case}: complementary tuple not a cascade")));
        }
        if let Some(s) = &selection {
            let h = induced_collection(inst, s).expect("total selection");
            for i in 1..cascade.depth() {
                let direct = cascade_derive(inst, &h, &cascade, i, &caps);
                let shifted = (|| -> Result<(Collection, Instance)> {
                    let (h1, f1) = cascade_derive(inst, &h, &cascade, 1, &caps)?;
                    if i == 1 {
                        return Ok((h1, f1));
                    }
                    let sub = Cascade::new(
                        cascade.pre(2)?.clone(),
                        cascade.steps()[1..].to_vec(),
                    )?;
                    cascade_derive(&f1, &h1, &sub, i - 1, &caps)
                })();
                match (direct, shifted) {
                    (Ok((hd, fd)), Ok((hs, fs))) => {
                        if fd != fs {
                            return (
                                executed,
                                Some(format!("case {case}: stage mapping shift identity broke at {i}")),
                            );
                        }
                        for v in nonempty_subsets(&fd.vertex_set()) {
                            let a = hd.assign(&v);
                            let b = hs.assign(&v);
                            match (a, b) {
                                (Ok(a), Ok(b)) if a == b => {}
                                _ => {
                                    return (
                                        executed,
                                        Some(format!(
                                            "case {case}: stage collection shift identity broke at {i}"
                                        )),
                                    )
                                }
                            }
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        return (executed, Some(format!("case {case}: derivation failed: {e}")))
                    }
                }
            }
        }
        executed += 1;
    }
    (executed, None)
}

/// Kernel algebra, the kernel/elimination decomposition, chooser
/// independence, and the single-point commitment equivalence.
fn kernel_suite(inst: &Instance, rng: &mut impl Rng, cases: usize) -> SuiteResult {
    let n = inst.vertices().len();
    if n > 8 {
        return (0, Some("instance too large for exhaustive elimination enumeration".into()));
    }
    let w_cap = n.saturating_sub(1).max(1);
    let graph = inst.graph_of();
    let kernel_star = kernel_bruteforce(inst);
    let mut executed = 0;

    // Method 1 against the oracle, plus trace shape.
    let trace = calc_method_1(inst, w_cap);
    match &trace.outcome {
        KernelOutcome::Kernel(k) => {
            if !exists_selection(inst) && !inst.vertices().is_empty() {
                return (executed, Some("method stopped with a kernel on an unsolvable instance".into()));
            }
            if *k != kernel_star {
                return (executed, Some("method kernel differs from brute force".into()));
            }
        }
        KernelOutcome::Infeasible(_) => {
            if exists_selection(inst) {
                return (executed, Some("method reported infeasible on a solvable instance".into()));
            }
        }
    }

    // Decomposition: G(F) = G(F*) ∪ ⋃ elim_F(W), with disjointness.
    let vertex_set = inst.vertex_set();
    let mut union = kernel_star.clone();
    for w in nonempty_subsets(&vertex_set) {
        if w == vertex_set {
            continue;
        }
        let elim = elimination_points(inst, &w).expect("valid witness set");
        if !elim.is_disjoint(&kernel_star) {
            return (executed, Some(format!("elim_F({w:?}) meets the kernel")));
        }
        union.extend(elim);
    }
    if union != graph {
        return (executed, Some("kernel/elimination decomposition does not cover G(F)".into()));
    }

    // The kernel itself has no elimination points.
    if exists_selection(inst) && !inst.vertices().is_empty() {
        let kernel_map = inst.with_graph_points(&kernel_star).expect("kernel in product");
        for w in nonempty_subsets(&vertex_set) {
            if w == vertex_set {
                continue;
            }
            if !elimination_points(&kernel_map, &w).expect("valid witness set").is_empty() {
                return (executed, Some(format!("kernel has elimination points at {w:?}")));
            }
        }
    }

    // Single-point commitment: selection through (x,y) iff the complement
    // mapping is solvable.
    for p in &graph {
        let spec = ComplementMapSpec::point(p.clone());
        let committed = complement_mapping(inst, &spec).expect("point in graph");
        if exists_selection_through(inst, p) != exists_selection(&committed) {
            return (executed, Some(format!("commitment equivalence broke at {p}")));
        }
    }

    for case in 0..cases {
        // Kernel algebra on random submappings.
        let q_graph = random_point_subset(rng, &graph, 0.7);
        let q = inst.with_graph_points(&q_graph).expect("subset of product");
        let q_star = kernel_bruteforce(&q);
        if !q_star.is_subset(&kernel_star) {
            return (executed, Some(format!("case {case}: kernel not monotone")));
        }
        let q_star_map = q.with_graph_points(&q_star).expect("subset of product");
        if kernel_bruteforce(&q_star_map) != q_star {
            return (executed, Some(format!("case {case}: kernel not idempotent")));
        }
        // Sandwich: F* ⊂ Q ⊂ F forces Q* = F*.
        let mut sandwich_graph = kernel_star.clone();
        sandwich_graph.extend(random_point_subset(rng, &graph, 0.3));
        let sandwich = inst.with_graph_points(&sandwich_graph).expect("subset of product");
        if kernel_bruteforce(&sandwich) != kernel_star {
            return (executed, Some(format!("case {case}: sandwich identity broke")));
        }

        // Chooser independence: a random elimination set at every step.
        let mut chooser_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        let random_trace = calc_method_1_with(inst, &mut SolveCache::new(), |cur, _| {
            let cur_vertices = cur.vertex_set();
            let mut candidates = Vec::new();
            for w in nonempty_subsets(&cur_vertices) {
                if w == cur_vertices {
                    continue;
                }
                if !elimination_points(cur, &w).expect("valid witness set").is_empty() {
                    candidates.push(w);
                }
            }
            if candidates.is_empty() {
                None
            } else {
                let i = chooser_rng.gen_range(0..candidates.len());
                Some(candidates[i].clone())
            }
        });
        match (&trace.outcome, &random_trace.outcome) {
            (KernelOutcome::Kernel(a), KernelOutcome::Kernel(b)) => {
                if a != b {
                    return (executed, Some(format!("case {case}: kernel depends on the chooser")));
                }
            }
            (KernelOutcome::Infeasible(_), KernelOutcome::Infeasible(_)) => {}
            _ => {
                return (
                    executed,
                    Some(format!("case {case}: outcome kind depends on the chooser")),
                )
            }
        }
        executed += 1;
    }
    (executed, None)
}

/// Closed-form size against brute force, hull invariance, the one-step size
/// bound, t-critical vs generalized critical, and solver agreement.
fn transitive_suite(inst: &Instance, rng: &mut impl Rng, cases: usize) -> SuiteResult {
    if !is_transitive(inst) {
        return (0, Some("instance is not transitive".into()));
    }
    let product = inst.product();
    let vertex_set = inst.vertex_set();
    let mut executed = 0;

    let solvable = exists_selection(inst);
    match solve_transitive(inst) {
        Ok(sel) => {
            if sel.is_some() != solvable {
                return (executed, Some("matching solver disagrees with the oracle".into()));
            }
            if let Some(s) = sel {
                if !inst.is_selection(&s) || !is_disparate_set(inst, &selection_graph(&s)) {
                    return (executed, Some("matching solver returned an invalid selection".into()));
                }
            }
        }
        Err(e) => return (executed, Some(format!("solver failed: {e}"))),
    }
    match hall_check_transitive(inst) {
        Ok(failing) => {
            if failing.is_none() != solvable {
                return (executed, Some("Hall criterion disagrees with the oracle".into()));
            }
            if let Some(w) = failing {
                let restricted = inst.restrict(&w).expect("subset of X");
                let size = size_transitive(inst, &restricted.graph_of()).expect("transitive");
                if size >= w.len() {
                    return (executed, Some("failing set does not violate the size bound".into()));
                }
            }
        }
        Err(e) => return (executed, Some(format!("Hall criterion failed: {e}"))),
    }

    // Minimal t-critical sets equal minimal generalized critical sets.
    if vertex_set.len() <= 5 && !vertex_set.is_empty() {
        let mut t_critical: Vec<VertexSet> = Vec::new();
        for w in nonempty_subsets(&vertex_set) {
            if w == vertex_set {
                continue;
            }
            if is_t_critical(inst, &w).expect("transitive").is_some() {
                t_critical.push(w);
            }
        }
        let mut minimal_t: Vec<VertexSet> = t_critical
            .iter()
            .filter(|w| !t_critical.iter().any(|v| *v != **w && v.is_subset(w)))
            .cloned()
            .collect();
        minimal_t.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        if minimal_t != minimal_critical_sets(inst) {
            return (executed, Some("minimal t-critical sets differ from minimal critical sets".into()));
        }
    }

    let decomp = clique_components(inst).expect("transitive");
    for case in 0..cases {
        let g = random_point_subset(rng, &product, 0.5);
        let closed = size_transitive(inst, &g).expect("transitive");
        if closed != max_disparate_size(inst, &g) {
            return (executed, Some(format!("case {case}: closed-form size differs from brute force")));
        }
        if closed != size_transitive(inst, &hull(inst, &g)).expect("transitive") {
            return (executed, Some(format!("case {case}: size changed under hull")));
        }
        if !vertex_set.is_empty() {
            let w = random_vertex_subset(rng, &vertex_set, true);
            if w != vertex_set {
                let rest: Vec<_> = vertex_set.difference(&w).cloned().collect();
                let x = rest[rng.gen_range(0..rest.len())].clone();
                let colors = inst.colors();
                if !colors.is_empty() {
                    let y = colors[rng.gen_range(0..colors.len())].clone();
                    let committed = crate::disparate::committed_restriction(
                        inst,
                        &w,
                        &crate::instance::Point { x: x.clone(), y: y.clone() },
                    )
                    .expect("valid witness");
                    let restricted = inst.restrict(&w).expect("subset of X");
                    let before =
                        size_transitive(inst, &restricted.graph_of()).expect("transitive");
                    let after =
                        size_transitive(&committed, &committed.graph_of()).expect("transitive");
                    if before > after + 1 {
                        return (executed, Some(format!("case {case}: one-step size bound broke")));
                    }
                }
                // Every t-critical set is generalized critical.
                if is_t_critical(inst, &w).expect("transitive").is_some()
                    && crate::oracle::is_generalized_critical(inst, &w)
                        .expect("valid subset")
                        .is_none()
                {
                    return (
                        executed,
                        Some(format!("case {case}: t-critical set is not generalized critical")),
                    );
                }
            }
            // Complete-subgraph form: |F(W)| = size(G(F|_W)) within a clique.
            let clique = &decomp.cliques()[rng.gen_range(0..decomp.cliques().len())];
            let w_in = random_vertex_subset(rng, clique, true);
            let restricted = inst.restrict(&w_in).expect("subset of X");
            let mut f_w: std::collections::BTreeSet<&crate::instance::ColorId> =
                Default::default();
            for v in &w_in {
                f_w.extend(inst.domain(v).iter());
            }
            if f_w.len() != size_transitive(inst, &restricted.graph_of()).expect("transitive") {
                return (
                    executed,
                    Some(format!("case {case}: complete-subgraph cardinality form broke")),
                );
            }
        }
        executed += 1;
    }
    (executed, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures;

    #[test]
    fn all_suites_pass_on_fixtures() {
        for inst in [fixtures::edge2(), fixtures::path3(), fixtures::conflict()] {
            for name in ["calculus", "collections", "cascades", "kernel"] {
                let report = run_suite(name, &inst, 42, 25).unwrap();
                assert!(
                    report.passed(),
                    "suite {name} failed: {:?}",
                    report.failure
                );
            }
        }
        for inst in [fixtures::single(), fixtures::conflict(), fixtures::cliques()] {
            let report = run_suite("transitive", &inst, 42, 25).unwrap();
            assert!(report.passed(), "transitive failed: {:?}", report.failure);
        }
    }

    #[test]
    fn transitive_suite_rejects_non_transitive_instances() {
        let report = run_suite("transitive", &fixtures::path3(), 1, 5).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run_suite("nope", &fixtures::single(), 1, 1),
            Err(Error::UnknownSuite(_))
        ));
    }
}
