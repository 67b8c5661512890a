//! Brute-force ground truth.
//!
//! Everything here is decided by definition: selections by backtracking over
//! vertices in canonical order, the kernel by testing every point, the size
//! function by branch-and-bound over subsets, criticality by solvability of
//! committed restrictions. The point is transparency, not speed; the faster
//! engines in [`crate::kernel`] and [`crate::transitive`] are checked against
//! this module. Internally the search runs on a bitmask compilation of the
//! instance (vertices in a `u128`, colors in a `u32`), which keeps the
//! exhaustive acceptance sweeps within their time budgets.

use crate::disparate::is_disparate_pair;
use crate::error::{Error, Result};
use crate::instance::{ColorId, Instance, Point, PointSet, Selection, VertexId, VertexSet};

pub(crate) const MAX_VERTICES: usize = 128;
pub(crate) const MAX_COLORS: usize = 32;

/// Index-based view of an instance for the backtracking core.
pub(crate) struct CompiledInstance {
    vertices: Vec<VertexId>,
    colors: Vec<ColorId>,
    /// Per-vertex admissible colors as a bitmask.
    domains: Vec<u32>,
    /// Per-vertex adjacency as a vertex bitmask.
    adj: Vec<u128>,
}

impl CompiledInstance {
    pub(crate) fn new(inst: &Instance) -> Self {
        let vertices: Vec<VertexId> = inst.vertices().to_vec();
        let colors: Vec<ColorId> = inst.colors().to_vec();
        assert!(
            vertices.len() <= MAX_VERTICES && colors.len() <= MAX_COLORS,
            "instances are limited to {MAX_VERTICES} vertices and {MAX_COLORS} colors"
        );
        let color_index = |c: &ColorId| colors.binary_search(c).expect("color listed");
        let mut domains = vec![0u32; vertices.len()];
        for (i, v) in vertices.iter().enumerate() {
            for c in inst.domain(v) {
                domains[i] |= 1 << color_index(c);
            }
        }
        let mut adj = vec![0u128; vertices.len()];
        for (a, b) in inst.graph().edges() {
            let i = vertices.binary_search(a).expect("endpoint listed");
            let j = vertices.binary_search(b).expect("endpoint listed");
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        CompiledInstance { vertices, colors, domains, adj }
    }

    pub(crate) fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub(crate) fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub(crate) fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub(crate) fn domain_mask(&self, v: usize) -> u32 {
        self.domains[v]
    }

    pub(crate) fn vertex_mask(&self, set: &VertexSet) -> Result<u128> {
        let mut mask = 0u128;
        for v in set {
            let i = self
                .vertices
                .binary_search(v)
                .map_err(|_| Error::UnknownVertex(v.token().to_owned()))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    pub(crate) fn full_mask(&self) -> u128 {
        if self.vertices.is_empty() {
            0
        } else {
            (!0u128) >> (MAX_VERTICES - self.vertices.len())
        }
    }

    /// Is there a disparate selection on the vertices of `active`, using the
    /// given domain masks?
    pub(crate) fn solvable(&self, active: u128, domains: &[u32]) -> bool {
        let order: Vec<usize> = mask_indices(active).collect();
        let mut used = [0u128; MAX_COLORS];
        self.backtrack(&order, 0, &mut used, domains)
    }

    fn backtrack(
        &self,
        order: &[usize],
        idx: usize,
        used: &mut [u128; MAX_COLORS],
        domains: &[u32],
    ) -> bool {
        if idx == order.len() {
            return true;
        }
        let v = order[idx];
        let mut dom = domains[v];
        while dom != 0 {
            let y = dom.trailing_zeros() as usize;
            dom &= dom - 1;
            if used[y] & self.adj[v] == 0 {
                used[y] |= 1 << v;
                let found = self.backtrack(order, idx + 1, used, domains);
                used[y] &= !(1 << v);
                if found {
                    return true;
                }
            }
        }
        false
    }

    /// Solvability of the committed restriction to `w_mask`: the vertex `x`
    /// (outside `w_mask`) is pinned to color `y`, removing `y` from the
    /// domains of its neighbors inside `w_mask`.
    pub(crate) fn committed_solvable(&self, w_mask: u128, x: usize, y: usize) -> bool {
        let mut domains = self.domains.clone();
        let mut affected = self.adj[x] & w_mask;
        while affected != 0 {
            let v = affected.trailing_zeros() as usize;
            affected &= affected - 1;
            domains[v] &= !(1 << y);
        }
        self.solvable(w_mask, &domains)
    }

    /// Walks all disparate selections on `active` in canonical order,
    /// stopping when the visitor returns `false`. Returns `false` iff
    /// stopped early.
    fn walk(&self, active: u128, visit: &mut impl FnMut(&[usize]) -> bool) -> bool {
        let order: Vec<usize> = mask_indices(active).collect();
        let mut assignment = vec![usize::MAX; order.len()];
        let mut used = [0u128; MAX_COLORS];
        self.walk_rec(&order, 0, &mut assignment, &mut used, visit)
    }

    fn walk_rec(
        &self,
        order: &[usize],
        idx: usize,
        assignment: &mut [usize],
        used: &mut [u128; MAX_COLORS],
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if idx == order.len() {
            return visit(assignment);
        }
        let v = order[idx];
        let mut dom = self.domains[v];
        while dom != 0 {
            let y = dom.trailing_zeros() as usize;
            dom &= dom - 1;
            if used[y] & self.adj[v] == 0 {
                assignment[idx] = y;
                used[y] |= 1 << v;
                let keep_going = self.walk_rec(order, idx + 1, assignment, used, visit);
                used[y] &= !(1 << v);
                if !keep_going {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn mask_indices(mask: u128) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Does a disparate selection exist?
pub fn exists_selection(inst: &Instance) -> bool {
    let compiled = CompiledInstance::new(inst);
    let active = compiled.full_mask();
    compiled.solvable(active, &compiled.domains)
}

/// First disparate selection in canonical order, if any.
pub fn first_selection(inst: &Instance) -> Option<Selection> {
    enumerate_selections(inst, 1).into_iter().next()
}

/// All disparate selections in canonical lexicographic order (vertex order,
/// then color order per vertex), truncated at `limit`.
pub fn enumerate_selections(inst: &Instance, limit: usize) -> Vec<Selection> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let compiled = CompiledInstance::new(inst);
    let order: Vec<&VertexId> = compiled.vertices().iter().collect();
    compiled.walk(compiled.full_mask(), &mut |assignment| {
        let s: Selection = assignment
            .iter()
            .enumerate()
            .map(|(i, &y)| (order[i].clone(), compiled.colors()[y].clone()))
            .collect();
        out.push(s);
        out.len() < limit
    });
    out
}

/// Number of disparate selections, counting at most `limit`.
pub fn count_selections(inst: &Instance, limit: usize) -> usize {
    if limit == 0 {
        return 0;
    }
    let compiled = CompiledInstance::new(inst);
    let mut n = 0;
    compiled.walk(compiled.full_mask(), &mut |_| {
        n += 1;
        n < limit
    });
    n
}

/// Is there a disparate selection through `(x, y)`?
pub fn exists_selection_through(inst: &Instance, p: &Point) -> bool {
    let compiled = CompiledInstance::new(inst);
    let Ok(xi) = compiled.vertices.binary_search(&p.x) else {
        return false;
    };
    let Ok(yi) = compiled.colors.binary_search(&p.y) else {
        return false;
    };
    if compiled.domains[xi] & (1 << yi) == 0 {
        return false;
    }
    let mut domains = compiled.domains.clone();
    domains[xi] = 1 << yi;
    compiled.solvable(compiled.full_mask(), &domains)
}

/// The disparate kernel by definition: all points some disparate selection
/// passes through.
pub fn kernel_bruteforce(inst: &Instance) -> PointSet {
    let compiled = CompiledInstance::new(inst);
    let active = compiled.full_mask();
    let mut out = PointSet::new();
    for (xi, x) in compiled.vertices().iter().enumerate() {
        let mut dom = compiled.domains[xi];
        while dom != 0 {
            let yi = dom.trailing_zeros() as usize;
            dom &= dom - 1;
            let mut domains = compiled.domains.clone();
            domains[xi] = 1 << yi;
            if compiled.solvable(active, &domains) {
                out.insert(Point { x: x.clone(), y: compiled.colors()[yi].clone() });
            }
        }
    }
    out
}

/// `size(G)`: the maximum cardinality of a disparate subset of `g`, by
/// branch-and-bound over the compatibility masks of the points.
pub fn max_disparate_size(inst: &Instance, g: &PointSet) -> usize {
    let points: Vec<&Point> = g.iter().collect();
    let n = points.len();
    assert!(n <= MAX_VERTICES, "point sets are limited to {MAX_VERTICES} points");
    let mut compatible = vec![0u128; n];
    for i in 0..n {
        for j in i + 1..n {
            if is_disparate_pair(inst, points[i], points[j]) {
                compatible[i] |= 1 << j;
                compatible[j] |= 1 << i;
            }
        }
    }
    fn bb(compatible: &[u128], candidates: u128, current: usize, best: &mut usize) {
        if current > *best {
            *best = current;
        }
        if current + candidates.count_ones() as usize <= *best {
            return;
        }
        let i = candidates.trailing_zeros() as usize;
        let rest = candidates & !(1u128 << i);
        bb(compatible, rest & compatible[i], current + 1, best);
        bb(compatible, rest, current, best);
    }
    let mut best = 0;
    if n > 0 {
        let all = (!0u128) >> (MAX_VERTICES - n);
        bb(&compatible, all, 0, &mut best);
    }
    best
}

/// Is `W` a generalized critical set? Returns the canonically first witness
/// `(x, y)` in `(X \ W) x Y` whose committed restriction to `W` is
/// unsolvable, per the equivalence of the generalized Hall condition and
/// solvability.
pub fn is_generalized_critical(inst: &Instance, w: &VertexSet) -> Result<Option<Point>> {
    if w.is_empty() {
        return Err(Error::EmptySet("critical-set candidate".into()));
    }
    let compiled = CompiledInstance::new(inst);
    let w_mask = compiled.vertex_mask(w)?;
    Ok(critical_witness(&compiled, w_mask).map(|(x, y)| Point {
        x: compiled.vertices()[x].clone(),
        y: compiled.colors()[y].clone(),
    }))
}

pub(crate) fn critical_witness(compiled: &CompiledInstance, w_mask: u128) -> Option<(usize, usize)> {
    for x in 0..compiled.vertex_count() {
        if w_mask & (1 << x) != 0 {
            continue;
        }
        for y in 0..compiled.colors().len() {
            if !compiled.committed_solvable(w_mask, x, y) {
                return Some((x, y));
            }
        }
    }
    None
}

/// All inclusion-minimal generalized critical sets, ordered by size then
/// lexicographically.
pub fn minimal_critical_sets(inst: &Instance) -> Vec<VertexSet> {
    let compiled = CompiledInstance::new(inst);
    let n = compiled.vertex_count();
    let mut critical: Vec<u128> = Vec::new();
    // W = X can never be critical: no witness point outside W exists.
    for mask in 1u128..(1u128 << n) {
        if mask == compiled.full_mask() {
            continue;
        }
        if critical_witness(&compiled, mask).is_some() {
            critical.push(mask);
        }
    }
    let mut minimal: Vec<VertexSet> = critical
        .iter()
        .filter(|&&w| !critical.iter().any(|&v| v != w && v & w == v))
        .map(|&w| mask_indices(w).map(|i| compiled.vertices()[i].clone()).collect())
        .collect();
    minimal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    minimal
}
