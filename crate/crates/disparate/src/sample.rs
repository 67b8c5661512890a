//! Seeded random generators for property suites and tests.
//!
//! Everything takes an explicit RNG so runs are reproducible; tokens are
//! short decimal strings matching the canonical fixtures.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::apps::{build_sudoku_instance, LatinRectangle, SudokuGrid};
use crate::cascades::Cascade;
use crate::instance::{ColorId, ColorSet, Instance, PointSet, VertexId, VertexSet};
use crate::oracle::count_selections;

/// Random instance with `n` vertices, `m` colors, independent edges with
/// probability `edge_density`, and each color admitted with probability
/// `domain_density`.
pub fn random_instance(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
    edge_density: f64,
    domain_density: f64,
) -> Instance {
    let vertices: Vec<VertexId> = (1..=n).map(|i| VertexId::new(i.to_string())).collect();
    let colors: Vec<ColorId> = (1..=m).map(|i| ColorId::new(i.to_string())).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(edge_density) {
                edges.push((vertices[i].clone(), vertices[j].clone()));
            }
        }
    }
    let mut domains = BTreeMap::new();
    for v in &vertices {
        let dom: ColorSet =
            colors.iter().filter(|_| rng.gen_bool(domain_density)).cloned().collect();
        domains.insert(v.clone(), dom);
    }
    Instance::new(vertices, edges, colors, domains).expect("generated parts are consistent")
}

/// Random transitive instance: vertices partitioned into cliques.
pub fn random_transitive_instance(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
    domain_density: f64,
) -> Instance {
    let vertices: Vec<VertexId> = (1..=n).map(|i| VertexId::new(i.to_string())).collect();
    let colors: Vec<ColorId> = (1..=m).map(|i| ColorId::new(i.to_string())).collect();
    let mut shuffled = vertices.clone();
    shuffled.shuffle(rng);
    let mut edges = Vec::new();
    let mut start = 0;
    while start < n {
        let len = rng.gen_range(1..=n - start);
        let clique = &shuffled[start..start + len];
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                edges.push((clique[i].clone(), clique[j].clone()));
            }
        }
        start += len;
    }
    let mut domains = BTreeMap::new();
    for v in &vertices {
        let dom: ColorSet =
            colors.iter().filter(|_| rng.gen_bool(domain_density)).cloned().collect();
        domains.insert(v.clone(), dom);
    }
    Instance::new(vertices, edges, colors, domains).expect("generated parts are consistent")
}

/// Random subset of a point set, keeping each point with probability `p`.
pub fn random_point_subset(rng: &mut impl Rng, points: &PointSet, p: f64) -> PointSet {
    points.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}

/// Random subset of a vertex set; forced nonempty when requested (the source
/// must then be nonempty).
pub fn random_vertex_subset(rng: &mut impl Rng, from: &VertexSet, nonempty: bool) -> VertexSet {
    loop {
        let sub: VertexSet = from.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if !nonempty || !sub.is_empty() {
            return sub;
        }
    }
}

/// Random cascade of `len` steps in the full vertex set.
///
/// Steps inside the previous step are proper subsets (a repeated nonempty
/// step can invalidate the complementary tuple); steps inside the previous
/// complement are unrestricted.
pub fn random_cascade(rng: &mut impl Rng, inst: &Instance, len: usize) -> Cascade {
    let base = inst.vertex_set();
    let mut steps = Vec::with_capacity(len);
    let mut prev_w = base.clone();
    let mut prev_wc = base.clone();
    let mut first = true;
    for _ in 0..len {
        let take_complement = !first && !prev_wc.is_empty() && rng.gen_bool(0.5);
        let w = if take_complement || first {
            let parent = if first { &prev_w } else { &prev_wc };
            random_vertex_subset(rng, parent, true)
        } else if prev_w.len() >= 2 {
            loop {
                let sub = random_vertex_subset(rng, &prev_w, true);
                if sub != prev_w {
                    break sub;
                }
            }
        } else if !prev_wc.is_empty() {
            random_vertex_subset(rng, &prev_wc, true)
        } else {
            // Singleton with empty complement: only the repeated singleton
            // remains, which is harmless as a tail.
            prev_w.clone()
        };
        let wc: VertexSet = if w.is_subset(&prev_w) {
            prev_w.difference(&w).cloned().collect()
        } else {
            prev_wc.difference(&w).cloned().collect()
        };
        steps.push(w.clone());
        prev_w = w;
        prev_wc = wc;
        first = false;
    }
    Cascade::new(base, steps).expect("construction follows the cascade rule")
}

/// Random valid prepopulated rectangle of order `n` (random `r`, `s`).
pub fn random_rectangle(rng: &mut impl Rng, n: usize) -> LatinRectangle {
    let r = rng.gen_range(1..=n);
    let s = rng.gen_range(1..=n);
    random_rectangle_with(rng, n, r, s)
}

/// Random valid `r x s` rectangle of order `n`, by backtracking with
/// shuffled candidates (always succeeds: 1 <= r,s <= n).
pub fn random_rectangle_with(
    rng: &mut impl Rng,
    n: usize,
    r: usize,
    s: usize,
) -> LatinRectangle {
    fn fill(
        rng: &mut impl Rng,
        n: usize,
        r: usize,
        s: usize,
        cells: &mut Vec<usize>,
    ) -> bool {
        let idx = cells.len();
        if idx == r * s {
            return true;
        }
        let (row, col) = (idx / s, idx % s);
        let mut candidates: Vec<usize> = (1..=n)
            .filter(|v| {
                (0..col).all(|c| cells[row * s + c] != *v)
                    && (0..row).all(|rr| cells[rr * s + col] != *v)
            })
            .collect();
        candidates.shuffle(rng);
        for v in candidates {
            cells.push(v);
            if fill(rng, n, r, s, cells) {
                return true;
            }
            cells.pop();
        }
        false
    }
    let mut cells = Vec::with_capacity(r * s);
    assert!(fill(rng, n, r, s, &mut cells), "an r x s rectangle always exists");
    let entries: Vec<Vec<usize>> =
        (0..r).map(|row| cells[row * s..(row + 1) * s].to_vec()).collect();
    LatinRectangle::new(n, r, s, entries).expect("backtracking respects the constraints")
}

/// Random complete 4x4 Sudoku grid (box order 2), by backtracking with
/// shuffled values.
pub fn random_complete_sudoku4(rng: &mut impl Rng) -> SudokuGrid {
    fn fill(rng: &mut impl Rng, cells: &mut Vec<usize>) -> bool {
        let idx = cells.len();
        if idx == 16 {
            return true;
        }
        let (row, col) = (idx / 4, idx % 4);
        let boxi = (row / 2) * 2 + col / 2;
        let mut candidates: Vec<usize> = (1..=4)
            .filter(|v| {
                (0..idx).all(|j| {
                    let (r2, c2) = (j / 4, j % 4);
                    let b2 = (r2 / 2) * 2 + c2 / 2;
                    cells[j] != *v || (r2 != row && c2 != col && b2 != boxi)
                })
            })
            .collect();
        candidates.shuffle(rng);
        for v in candidates {
            cells.push(v);
            if fill(rng, cells) {
                return true;
            }
            cells.pop();
        }
        false
    }
    let mut cells = Vec::with_capacity(16);
    assert!(fill(rng, &mut cells), "complete 4x4 grids exist");
    SudokuGrid::new(2, cells.into_iter().map(Some).collect()).expect("filled grid is valid")
}

/// Removes givens in random order while the completion count stays 1,
/// yielding a puzzle with a unique solution.
pub fn thin_to_unique_puzzle(rng: &mut impl Rng, grid: &SudokuGrid) -> SudokuGrid {
    let mut current = grid.clone();
    let mut order: Vec<usize> = (0..current.cells().len()).collect();
    order.shuffle(rng);
    for idx in order {
        if current.cells()[idx].is_none() {
            continue;
        }
        let mut cells = current.cells().to_vec();
        cells[idx] = None;
        let candidate = SudokuGrid::new(current.box_order(), cells)
            .expect("removing a given keeps the grid valid");
        let (inst, _) = build_sudoku_instance(&candidate);
        if count_selections(&inst, 2) == 1 {
            current = candidate;
        }
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_reproducible() {
        let a = random_instance(&mut ChaCha8Rng::seed_from_u64(7), 5, 3, 0.4, 0.6);
        let b = random_instance(&mut ChaCha8Rng::seed_from_u64(7), 5, 3, 0.4, 0.6);
        assert_eq!(a, b);
    }

    #[test]
    fn transitive_generator_is_transitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let inst = random_transitive_instance(&mut rng, 6, 3, 0.5);
            assert!(crate::transitive::is_transitive(&inst));
        }
    }

    #[test]
    fn random_cascades_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = random_instance(&mut rng, 5, 2, 0.3, 0.7);
        for _ in 0..20 {
            let c = random_cascade(&mut rng, &inst, 3);
            assert_eq!(c.depth(), 3);
            assert!(c.complementary().is_ok());
        }
    }

    #[test]
    fn unique_puzzles_have_one_completion() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let full = random_complete_sudoku4(&mut rng);
        let puzzle = thin_to_unique_puzzle(&mut rng, &full);
        let (inst, _) = build_sudoku_instance(&puzzle);
        assert_eq!(count_selections(&inst, 3), 1);
    }
}
