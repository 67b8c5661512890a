//! The disparate relation and its derived set operators.
//!
//! Two points of `X x Y` are disparate when they can appear together in a
//! valid selection: they are distinct, and if they share a color their
//! vertices are non-adjacent. The pair predicate is the single source of
//! truth here; hulls, complements, and the complement mapping are defined by
//! quantifying over it, so the set level cannot drift from the pair level.
//!
//! `hull(A)` collects every point conflicting with some point of `A`;
//! `compl(A)` collects every point disparate to all of `A`. Both are taken
//! against the full product `X x Y` of the instance at hand. The complement
//! mapping commits a point set `Z` on `W` and keeps, outside `W`, exactly the
//! points that survive `compl(Z)`.

use crate::error::{Error, Result};
use crate::instance::{Instance, Point, PointSet, VertexSet};

/// `a` and `b` are disparate: distinct, and equal colors force non-adjacency.
pub fn is_disparate_pair(inst: &Instance, a: &Point, b: &Point) -> bool {
    a != b && (a.y != b.y || !inst.adjacent(&a.x, &b.x))
}

/// Every two distinct points of `A` are disparate; vacuous for `|A| <= 1`.
pub fn is_disparate_set(inst: &Instance, a: &PointSet) -> bool {
    let points: Vec<&Point> = a.iter().collect();
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            if !is_disparate_pair(inst, p, q) {
                return false;
            }
        }
    }
    true
}

/// All points of `X x Y` not disparate to some point of `A`.
pub fn hull(inst: &Instance, a: &PointSet) -> PointSet {
    inst.product()
        .into_iter()
        .filter(|p| a.iter().any(|q| !is_disparate_pair(inst, p, q)))
        .collect()
}

/// All points of `X x Y` disparate to every point of `A`.
pub fn compl(inst: &Instance, a: &PointSet) -> PointSet {
    inst.product()
        .into_iter()
        .filter(|p| a.iter().all(|q| is_disparate_pair(inst, p, q)))
        .collect()
}

/// Parameters of a complement mapping: commit `Z ⊂ G(F|_W)` on `W`.
#[derive(Clone, Debug)]
pub struct ComplementMapSpec {
    pub w: VertexSet,
    pub z: PointSet,
}

impl ComplementMapSpec {
    pub fn new(w: VertexSet, z: PointSet) -> Self {
        ComplementMapSpec { w, z }
    }

    /// Commit a single point: `W = {x}`, `Z = {(x,y)}`.
    pub fn point(p: Point) -> Self {
        ComplementMapSpec {
            w: [p.x.clone()].into_iter().collect(),
            z: [p].into_iter().collect(),
        }
    }
}

/// The complement mapping on `X \ W` whose graph is
/// `G(F|_(X\W)) ∩ compl(Z)`.
pub fn complement_mapping(inst: &Instance, spec: &ComplementMapSpec) -> Result<Instance> {
    for v in &spec.w {
        if !inst.contains_vertex(v) {
            return Err(Error::UnknownVertex(v.token().to_owned()));
        }
    }
    for p in &spec.z {
        if !spec.w.contains(&p.x) || !inst.domain(&p.x).contains(&p.y) {
            return Err(Error::PointsOutOfGraph(format!(
                "{} is not in the graph of the restriction to the committed set",
                p
            )));
        }
    }
    let rest: VertexSet =
        inst.vertices().iter().filter(|v| !spec.w.contains(v)).cloned().collect();
    let restricted = inst.restrict(&rest)?;
    let surviving = compl(inst, &spec.z);
    let graph: PointSet =
        restricted.graph_of().into_iter().filter(|p| surviving.contains(p)).collect();
    restricted.with_graph_points(&graph)
}

/// Commit a single point `(x, y)` and restrict the result to `W`; the
/// committed color `y` is allowed to fall outside `F(x)`, matching how
/// critical-set witnesses range over the whole product.
pub fn committed_restriction(
    inst: &Instance,
    w: &VertexSet,
    committed: &Point,
) -> Result<Instance> {
    let restricted = inst.restrict(w)?;
    let graph: PointSet = restricted
        .graph_of()
        .into_iter()
        .filter(|p| is_disparate_pair(inst, p, committed))
        .collect();
    restricted.with_graph_points(&graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures;

    fn pt(x: &str, y: &str) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn pair_predicate_fixtures() {
        let edge2 = fixtures::edge2();
        assert!(!is_disparate_pair(&edge2, &pt("1", "1"), &pt("2", "1")));
        assert!(is_disparate_pair(&edge2, &pt("1", "1"), &pt("2", "2")));
        let path3 = fixtures::path3();
        assert!(is_disparate_pair(&path3, &pt("1", "1"), &pt("3", "1")));
        // Identical points are never disparate.
        assert!(!is_disparate_pair(&edge2, &pt("1", "1"), &pt("1", "1")));
    }

    #[test]
    fn set_predicate_fixtures() {
        let edge2 = fixtures::edge2();
        assert!(is_disparate_set(&edge2, &[pt("1", "1"), pt("2", "2")].into_iter().collect()));
        // Same vertex, different colors: disparate.
        assert!(is_disparate_set(&edge2, &[pt("1", "1"), pt("1", "2")].into_iter().collect()));
        let conflict = fixtures::conflict();
        assert!(!is_disparate_set(
            &conflict,
            &[pt("1", "1"), pt("2", "1")].into_iter().collect()
        ));
        assert!(is_disparate_set(&conflict, &PointSet::new()));
    }

    #[test]
    fn hull_fixtures() {
        let edge2 = fixtures::edge2();
        let h = hull(&edge2, &[pt("1", "1")].into_iter().collect());
        assert_eq!(h, [pt("1", "1"), pt("2", "1")].into_iter().collect());

        let single = fixtures::single();
        let h = hull(&single, &[pt("a", "1")].into_iter().collect());
        assert_eq!(h, [pt("a", "1")].into_iter().collect());

        assert!(hull(&edge2, &PointSet::new()).is_empty());
    }

    #[test]
    fn compl_fixtures() {
        let edge2 = fixtures::edge2();
        let c = compl(&edge2, &[pt("1", "1")].into_iter().collect());
        assert_eq!(c, [pt("1", "2"), pt("2", "2")].into_iter().collect());

        assert_eq!(compl(&edge2, &PointSet::new()), edge2.product());

        let conflict = fixtures::conflict();
        assert!(compl(&conflict, &[pt("1", "1")].into_iter().collect()).is_empty());
    }

    #[test]
    fn complement_mapping_fixtures() {
        let edge2 = fixtures::edge2();
        let spec = ComplementMapSpec::point(pt("1", "1"));
        let m = complement_mapping(&edge2, &spec).unwrap();
        assert_eq!(m.vertices(), &["2".into()]);
        assert_eq!(m.domain(&"2".into()), &["2".into()].into_iter().collect());

        let conflict = fixtures::conflict();
        let m = complement_mapping(&conflict, &ComplementMapSpec::point(pt("1", "1"))).unwrap();
        assert!(m.domain(&"2".into()).is_empty());

        // F_{∅,∅} = F.
        let id = complement_mapping(&edge2, &ComplementMapSpec::new(VertexSet::new(), PointSet::new()))
            .unwrap();
        assert_eq!(id, edge2);
    }

    #[test]
    fn complement_mapping_rejects_points_outside_committed_graph() {
        let edge2 = fixtures::edge2();
        // Z not within G(F|_W): the committed point sits outside W.
        let spec = ComplementMapSpec::new(
            ["1".into()].into_iter().collect(),
            [pt("2", "1")].into_iter().collect(),
        );
        assert!(complement_mapping(&edge2, &spec).is_err());
    }
}
