//! The fast path for transitive graphs (disjoint unions of cliques).
//!
//! On a transitive graph two points conflict exactly when they share a
//! clique and a color with different vertices, so the size of a point set —
//! the largest disparate subset — is just the number of distinct
//! (clique, color) pairs it touches. That collapses the Hall-collection
//! criterion to a bipartite matching between vertices and (clique, color)
//! pairs, which both decides solvability (the Hall collection criterion is
//! exact here) and constructs a selection in polynomial time.

use std::collections::BTreeMap;

use crate::disparate::committed_restriction;
use crate::error::{Error, Result};
use crate::instance::{ColorId, Instance, Point, PointSet, Selection, VertexId, VertexSet};

/// Partition of a transitive graph into its cliques (connected components).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueDecomposition {
    clique_of: BTreeMap<VertexId, usize>,
    cliques: Vec<VertexSet>,
}

impl CliqueDecomposition {
    pub fn clique_of(&self, v: &VertexId) -> Option<usize> {
        self.clique_of.get(v).copied()
    }

    pub fn cliques(&self) -> &[VertexSet] {
        &self.cliques
    }
}

/// Adjacency (plus identity) is transitive: edges x-y and y-z with `x != z`
/// force the edge x-z.
pub fn is_transitive(inst: &Instance) -> bool {
    transitivity_witness(inst).is_none()
}

fn transitivity_witness(inst: &Instance) -> Option<(VertexId, VertexId, VertexId)> {
    let vertices = inst.vertices();
    for y in vertices {
        let neighbors: Vec<&VertexId> =
            vertices.iter().filter(|x| inst.adjacent(x, y)).collect();
        for (i, x) in neighbors.iter().enumerate() {
            for z in &neighbors[i + 1..] {
                if !inst.adjacent(x, z) {
                    return Some(((*x).clone(), y.clone(), (*z).clone()));
                }
            }
        }
    }
    None
}

fn require_transitive(inst: &Instance) -> Result<()> {
    match transitivity_witness(inst) {
        None => Ok(()),
        Some((x, y, z)) => Err(Error::NotTransitive {
            x: x.token().to_owned(),
            y: y.token().to_owned(),
            z: z.token().to_owned(),
        }),
    }
}

/// Connected components of a transitive graph; each component is a clique.
pub fn clique_components(inst: &Instance) -> Result<CliqueDecomposition> {
    require_transitive(inst)?;
    let vertices = inst.vertices();
    let mut clique_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut cliques: Vec<VertexSet> = Vec::new();
    for v in vertices {
        if clique_of.contains_key(v) {
            continue;
        }
        let idx = cliques.len();
        let mut component: VertexSet = [v.clone()].into_iter().collect();
        // In a transitive graph a component is exactly a closed neighborhood.
        for u in vertices {
            if inst.adjacent(v, u) {
                component.insert(u.clone());
            }
        }
        for u in &component {
            clique_of.insert(u.clone(), idx);
        }
        cliques.push(component);
    }
    Ok(CliqueDecomposition { clique_of, cliques })
}

/// `size(G)` in closed form: the number of distinct (clique, color) pairs
/// occurring in `g`.
pub fn size_transitive(inst: &Instance, g: &PointSet) -> Result<usize> {
    let decomp = clique_components(inst)?;
    let mut pairs: std::collections::BTreeSet<(usize, &ColorId)> = Default::default();
    for p in g {
        let clique = decomp
            .clique_of(&p.x)
            .ok_or_else(|| Error::UnknownVertex(p.x.token().to_owned()))?;
        pairs.insert((clique, &p.y));
    }
    Ok(pairs.len())
}

/// Is `W` a t-critical set: some committed outside point drops the size of
/// the restriction below `|W|`? Returns the canonically first witness.
pub fn is_t_critical(inst: &Instance, w: &VertexSet) -> Result<Option<Point>> {
    require_transitive(inst)?;
    if w.is_empty() {
        return Err(Error::EmptySet("t-critical candidate".into()));
    }
    for x in inst.vertices() {
        if w.contains(x) {
            continue;
        }
        for y in inst.colors() {
            let witness = Point { x: x.clone(), y: y.clone() };
            let restricted = committed_restriction(inst, w, &witness)?;
            if size_transitive(&restricted, &restricted.graph_of())? + 1 <= w.len() {
                return Ok(Some(witness));
            }
        }
    }
    Ok(None)
}

/// Maximum bipartite matching of one clique's vertices into colors with
/// Kuhn's augmenting paths, vertices and colors in canonical order.
struct CliqueMatching {
    /// vertex index -> matched color index
    vertex_match: Vec<Option<usize>>,
    /// color index -> matched vertex index
    color_match: Vec<Option<usize>>,
}

fn match_clique(
    clique: &[VertexId],
    colors: &[ColorId],
    allowed: &dyn Fn(usize, usize) -> bool,
) -> CliqueMatching {
    let mut vertex_match = vec![None; clique.len()];
    let mut color_match = vec![None; colors.len()];
    fn augment(
        v: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
        color_count: usize,
        visited: &mut [bool],
        vertex_match: &mut [Option<usize>],
        color_match: &mut [Option<usize>],
    ) -> bool {
        for c in 0..color_count {
            if !allowed(v, c) || visited[c] {
                continue;
            }
            visited[c] = true;
            if color_match[c].is_none()
                || augment(
                    color_match[c].unwrap(),
                    allowed,
                    color_count,
                    visited,
                    vertex_match,
                    color_match,
                )
            {
                vertex_match[v] = Some(c);
                color_match[c] = Some(v);
                return true;
            }
        }
        false
    }
    for v in 0..clique.len() {
        let mut visited = vec![false; colors.len()];
        augment(v, allowed, colors.len(), &mut visited, &mut vertex_match, &mut color_match);
    }
    CliqueMatching { vertex_match, color_match }
}

/// Hall-collection criterion on a transitive instance, decided without
/// subset enumeration: per clique, match vertices into colors; a deficiency
/// yields a failing set `W` (vertices reachable by alternating paths from an
/// unmatched vertex) with `size(G(F|_W)) < |W|`. Returns `None` when the
/// size bound holds everywhere.
pub fn hall_check_transitive(inst: &Instance) -> Result<Option<VertexSet>> {
    let decomp = clique_components(inst)?;
    let colors: Vec<ColorId> = inst.colors().to_vec();
    for clique in decomp.cliques() {
        let members: Vec<VertexId> = clique.iter().cloned().collect();
        let allowed = |v: usize, c: usize| inst.domain(&members[v]).contains(&colors[c]);
        let matching = match_clique(&members, &colors, &allowed);
        let unmatched =
            (0..members.len()).find(|v| matching.vertex_match[*v].is_none());
        let Some(start) = unmatched else { continue };
        // Alternating-path reachable vertices from the deficiency witness.
        let mut in_w = vec![false; members.len()];
        let mut color_seen = vec![false; colors.len()];
        let mut queue = vec![start];
        in_w[start] = true;
        while let Some(v) = queue.pop() {
            for c in 0..colors.len() {
                if allowed(v, c) && !color_seen[c] {
                    color_seen[c] = true;
                    if let Some(u) = matching.color_match[c] {
                        if !in_w[u] {
                            in_w[u] = true;
                            queue.push(u);
                        }
                    }
                }
            }
        }
        let w: VertexSet = members
            .iter()
            .enumerate()
            .filter(|(i, _)| in_w[*i])
            .map(|(_, v)| v.clone())
            .collect();
        return Ok(Some(w));
    }
    Ok(None)
}

/// Solve a transitive instance by per-clique maximum matching; `None` exactly
/// when the Hall criterion fails.
pub fn solve_transitive(inst: &Instance) -> Result<Option<Selection>> {
    let decomp = clique_components(inst)?;
    let colors: Vec<ColorId> = inst.colors().to_vec();
    let mut selection = Selection::new();
    for clique in decomp.cliques() {
        let members: Vec<VertexId> = clique.iter().cloned().collect();
        let allowed = |v: usize, c: usize| inst.domain(&members[v]).contains(&colors[c]);
        let matching = match_clique(&members, &colors, &allowed);
        for (v, m) in matching.vertex_match.iter().enumerate() {
            match m {
                Some(c) => {
                    selection.insert(members[v].clone(), colors[*c].clone());
                }
                None => return Ok(None),
            }
        }
    }
    Ok(Some(selection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disparate::is_disparate_set;
    use crate::instance::{fixtures, selection_graph};
    use crate::oracle::{exists_selection, max_disparate_size};

    fn vset(tokens: &[&str]) -> VertexSet {
        tokens.iter().map(|t| VertexId::new(*t)).collect()
    }

    #[test]
    fn transitivity_fixtures() {
        assert!(is_transitive(&fixtures::cliques()));
        assert!(!is_transitive(&fixtures::path3()));
        let edgeless = Instance::from_parts(&["1", "2", "3"], &[], &["1"], &[]).unwrap();
        assert!(is_transitive(&edgeless));
    }

    #[test]
    fn clique_components_fixtures() {
        let decomp = clique_components(&fixtures::cliques()).unwrap();
        assert_eq!(decomp.cliques(), &[vset(&["1", "2"]), vset(&["3", "4"])]);

        let edgeless = Instance::from_parts(&["1", "2"], &[], &["1"], &[]).unwrap();
        let decomp = clique_components(&edgeless).unwrap();
        assert_eq!(decomp.cliques(), &[vset(&["1"]), vset(&["2"])]);

        let complete = Instance::from_parts(
            &["1", "2", "3"],
            &[("1", "2"), ("1", "3"), ("2", "3")],
            &["1"],
            &[],
        )
        .unwrap();
        let decomp = clique_components(&complete).unwrap();
        assert_eq!(decomp.cliques(), &[vset(&["1", "2", "3"])]);

        assert!(clique_components(&fixtures::path3()).is_err());
    }

    #[test]
    fn size_fixtures() {
        let cliques = fixtures::cliques();
        assert_eq!(size_transitive(&cliques, &cliques.graph_of()).unwrap(), 4);
        assert_eq!(
            size_transitive(&cliques, &cliques.graph_of()).unwrap(),
            max_disparate_size(&cliques, &cliques.graph_of())
        );

        let conflict = fixtures::conflict();
        assert_eq!(size_transitive(&conflict, &conflict.graph_of()).unwrap(), 1);

        assert_eq!(size_transitive(&cliques, &PointSet::new()).unwrap(), 0);
    }

    #[test]
    fn t_critical_fixtures() {
        let conflict = fixtures::conflict();
        assert_eq!(
            is_t_critical(&conflict, &vset(&["2"])).unwrap(),
            Some(Point::new("1", "1"))
        );

        let cliques = fixtures::cliques();
        assert_eq!(is_t_critical(&cliques, &vset(&["1"])).unwrap(), None);

        let edgeless = Instance::from_parts(
            &["1", "2"],
            &[],
            &["1", "2"],
            &[("1", &["1", "2"]), ("2", &["1", "2"])],
        )
        .unwrap();
        assert_eq!(is_t_critical(&edgeless, &vset(&["1"])).unwrap(), None);
        assert!(is_t_critical(&edgeless, &VertexSet::new()).is_err());
    }

    #[test]
    fn hall_check_fixtures() {
        assert_eq!(hall_check_transitive(&fixtures::conflict()).unwrap(), Some(vset(&["1", "2"])));
        assert_eq!(hall_check_transitive(&fixtures::cliques()).unwrap(), None);

        let empty_domain = Instance::from_parts(&["x"], &[], &["1"], &[]).unwrap();
        assert_eq!(hall_check_transitive(&empty_domain).unwrap(), Some(vset(&["x"])));
    }

    #[test]
    fn failing_sets_violate_the_size_bound() {
        let conflict = fixtures::conflict();
        let w = hall_check_transitive(&conflict).unwrap().unwrap();
        let restricted = conflict.restrict(&w).unwrap();
        assert!(size_transitive(&conflict, &restricted.graph_of()).unwrap() < w.len());
    }

    #[test]
    fn solve_fixtures() {
        let cliques = fixtures::cliques();
        let s = solve_transitive(&cliques).unwrap().unwrap();
        assert!(cliques.is_selection(&s));
        assert!(is_disparate_set(&cliques, &selection_graph(&s)));

        assert_eq!(solve_transitive(&fixtures::conflict()).unwrap(), None);

        let edgeless = Instance::from_parts(
            &["1", "2"],
            &[],
            &["1"],
            &[("1", &["1"]), ("2", &["1"])],
        )
        .unwrap();
        let s = solve_transitive(&edgeless).unwrap().unwrap();
        assert!(edgeless.is_selection(&s));
        assert!(solve_transitive(&fixtures::path3()).is_err());
    }

    #[test]
    fn solve_agrees_with_oracle_on_fixtures() {
        for inst in [fixtures::single(), fixtures::conflict(), fixtures::cliques()] {
            assert_eq!(solve_transitive(&inst).unwrap().is_some(), exists_selection(&inst));
            assert_eq!(
                hall_check_transitive(&inst).unwrap().is_none(),
                exists_selection(&inst)
            );
        }
    }
}
