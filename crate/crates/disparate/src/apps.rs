//! Model builders: Latin rectangle extension, systems of distinct
//! representatives, and Sudoku.
//!
//! Each front end compiles its combinatorial problem into an [`Instance`]
//! and reuses the solvers. The Latin rectangle model places every missing
//! value `v` of row `r` at a vertex `(v, r)` whose color is the extension
//! column; same-value vertices form cliques (a value may use each column
//! once), so the built graph is transitive and the occurrence-count
//! condition `N(v) >= r + s - n` decides extensibility. SDR families become
//! complete-graph instances. Sudoku blanks become vertices constrained by
//! row, column, and box peers.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::instance::{ColorId, ColorSet, Instance, Selection, VertexId};
use crate::kernel::{calc_method_1, calc_method_2, KernelOutcome, SolveOutcome};
use crate::oracle::first_selection;
use crate::transitive::solve_transitive;

/// A prepopulated `r x s` upper-left rectangle of an order-`n` Latin square,
/// with distinct values in every row and every column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinRectangle {
    n: usize,
    r: usize,
    s: usize,
    entries: Vec<Vec<usize>>,
}

impl LatinRectangle {
    pub fn new(n: usize, r: usize, s: usize, entries: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 || r == 0 || s == 0 || r > n || s > n {
            return Err(Error::InvalidRectangle(format!(
                "need 1 <= r,s <= n, got n={n} r={r} s={s}"
            )));
        }
        if entries.len() != r || entries.iter().any(|row| row.len() != s) {
            return Err(Error::InvalidRectangle("entry shape does not match r x s".into()));
        }
        for row in &entries {
            for &v in row {
                if v == 0 || v > n {
                    return Err(Error::InvalidRectangle(format!("value {v} outside 1..={n}")));
                }
            }
            if row.iter().unique().count() != row.len() {
                return Err(Error::InvalidRectangle("duplicate value in a row".into()));
            }
        }
        for c in 0..s {
            let col: Vec<usize> = entries.iter().map(|row| row[c]).collect();
            if col.iter().unique().count() != col.len() {
                return Err(Error::InvalidRectangle("duplicate value in a column".into()));
            }
        }
        Ok(LatinRectangle { n, r, s, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.r
    }

    pub fn cols(&self) -> usize {
        self.s
    }

    pub fn entries(&self) -> &[Vec<usize>] {
        &self.entries
    }

    /// `N(v)`: occurrences of `v` in the rectangle.
    pub fn occurrences(&self, v: usize) -> usize {
        self.entries.iter().flatten().filter(|&&e| e == v).count()
    }

    /// `R(v)`: 1-based rows where `v` does not occur.
    pub fn rows_missing(&self, v: usize) -> Vec<usize> {
        (1..=self.r).filter(|&row| !self.entries[row - 1].contains(&v)).collect()
    }

    /// Text form: first line `n r s`, then one row per line.
    pub fn serialize(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.r, self.s);
        for row in &self.entries {
            out.push_str(&row.iter().map(|v| v.to_string()).join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parses the rectangle text format: first line `n r s`, then `r` lines of
/// `s` space-separated integers.
pub fn parse_rectangle(text: &str) -> Result<LatinRectangle> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::InvalidRectangle("empty input".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::InvalidRectangle(format!("bad header token {t:?}"))))
        .collect::<Result<_>>()?;
    let [n, r, s] = dims[..] else {
        return Err(Error::InvalidRectangle("header must be `n r s`".into()));
    };
    let mut entries = Vec::with_capacity(r);
    for line in lines {
        let row: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::InvalidRectangle(format!("bad value {t:?}"))))
            .collect::<Result<_>>()?;
        entries.push(row);
    }
    LatinRectangle::new(n, r, s, entries)
}

fn ryser_vertex(v: usize, row: usize) -> VertexId {
    VertexId::new(format!("{v}:{row}"))
}

/// The extension model: vertices `(v, row)` for every row missing `v`,
/// colors `s+1..=n`, full domains, edges between same-value vertices.
pub fn ryser_build(rect: &LatinRectangle) -> Instance {
    let colors: Vec<ColorId> =
        (rect.s + 1..=rect.n).map(|c| ColorId::new(c.to_string())).collect();
    let full: ColorSet = colors.iter().cloned().collect();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut domains = BTreeMap::new();
    for v in 1..=rect.n {
        let missing = rect.rows_missing(v);
        debug_assert_eq!(rect.occurrences(v) + missing.len(), rect.r);
        for &row in &missing {
            let id = ryser_vertex(v, row);
            vertices.push(id.clone());
            domains.insert(id, full.clone());
        }
        for pair in missing.iter().combinations(2) {
            edges.push((ryser_vertex(v, *pair[0]), ryser_vertex(v, *pair[1])));
        }
    }
    Instance::new(vertices, edges, colors, domains).expect("model construction is consistent")
}

/// The occurrence-count condition: `None` iff `N(v) >= r + s - n` for every
/// value, else the smallest failing value.
pub fn ryser_condition(rect: &LatinRectangle) -> Option<usize> {
    let bound = (rect.r + rect.s) as isize - rect.n as isize;
    (1..=rect.n).find(|&v| (rect.occurrences(v) as isize) < bound)
}

/// Extends the rectangle to `r x n`, or `None` when the condition fails.
///
/// The extension must keep values distinct per value-column (the transitive
/// model's edges) and also one value per cell, which adds same-row edges; a
/// disparate selection of that augmented instance is exactly a valid
/// extension, found by backtracking.
pub fn ryser_extend(rect: &LatinRectangle) -> Option<LatinRectangle> {
    if ryser_condition(rect).is_some() {
        return None;
    }
    if rect.s == rect.n {
        return Some(rect.clone());
    }
    let base = ryser_build(rect);
    let mut edges: Vec<(VertexId, VertexId)> = base.graph().edges().cloned().collect();
    let mut by_row: BTreeMap<usize, Vec<(usize, VertexId)>> = BTreeMap::new();
    for v in 1..=rect.n {
        for row in rect.rows_missing(v) {
            by_row.entry(row).or_default().push((v, ryser_vertex(v, row)));
        }
    }
    for members in by_row.values() {
        for pair in members.iter().combinations(2) {
            edges.push((pair[0].1.clone(), pair[1].1.clone()));
        }
    }
    let augmented = Instance::new(
        base.vertices().to_vec(),
        edges,
        base.colors().to_vec(),
        base.vertices().iter().map(|v| (v.clone(), base.domain(v).clone())).collect(),
    )
    .expect("augmented model is consistent");
    let selection = first_selection(&augmented)?;
    let mut entries: Vec<Vec<usize>> = rect
        .entries
        .iter()
        .map(|row| {
            let mut extended = row.clone();
            extended.resize(rect.n, 0);
            extended
        })
        .collect();
    for (row, members) in &by_row {
        for (v, id) in members {
            let col: usize = selection[id].token().parse().expect("column tokens are numeric");
            entries[row - 1][col - 1] = *v;
        }
    }
    Some(LatinRectangle::new(rect.n, rect.r, rect.n, entries).expect("extension is Latin"))
}

/// System of distinct representatives for a family of sets, via the
/// complete-graph instance and the transitive solver.
pub fn hall_sdr_solve(family: &[ColorSet]) -> Option<Vec<ColorId>> {
    if family.is_empty() {
        return Some(Vec::new());
    }
    let vertices: Vec<VertexId> =
        (0..family.len()).map(|i| VertexId::new(i.to_string())).collect();
    let mut colors: ColorSet = ColorSet::new();
    for set in family {
        colors.extend(set.iter().cloned());
    }
    let mut edges = Vec::new();
    for pair in vertices.iter().combinations(2) {
        edges.push((pair[0].clone(), pair[1].clone()));
    }
    let domains: BTreeMap<VertexId, ColorSet> =
        vertices.iter().cloned().zip(family.iter().cloned()).collect();
    let inst = Instance::new(vertices.clone(), edges, colors.into_iter().collect(), domains)
        .expect("SDR model is consistent");
    let selection = solve_transitive(&inst).expect("complete graphs are transitive")?;
    Some(vertices.iter().map(|v| selection[v].clone()).collect())
}

/// A `b^2 x b^2` Sudoku grid; `None` cells are blank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SudokuGrid {
    box_order: usize,
    cells: Vec<Option<usize>>,
}

impl SudokuGrid {
    pub fn new(box_order: usize, cells: Vec<Option<usize>>) -> Result<Self> {
        if box_order == 0 {
            return Err(Error::InvalidGrid("box order must be positive".into()));
        }
        let n = box_order * box_order;
        if cells.len() != n * n {
            return Err(Error::InvalidGrid(format!(
                "expected {} cells, got {}",
                n * n,
                cells.len()
            )));
        }
        for value in cells.iter().flatten() {
            if *value == 0 || *value > n {
                return Err(Error::InvalidGrid(format!("value {value} outside 1..={n}")));
            }
        }
        let grid = SudokuGrid { box_order, cells };
        for unit in grid.units() {
            let givens: Vec<usize> = unit.iter().filter_map(|&i| grid.cells[i]).collect();
            if givens.iter().unique().count() != givens.len() {
                return Err(Error::InvalidGrid("duplicate given within a unit".into()));
            }
        }
        Ok(grid)
    }

    pub fn box_order(&self) -> usize {
        self.box_order
    }

    pub fn side(&self) -> usize {
        self.box_order * self.box_order
    }

    pub fn cells(&self) -> &[Option<usize>] {
        &self.cells
    }

    fn units(&self) -> Vec<Vec<usize>> {
        let n = self.side();
        let b = self.box_order;
        let mut units = Vec::with_capacity(3 * n);
        for r in 0..n {
            units.push((0..n).map(|c| r * n + c).collect());
        }
        for c in 0..n {
            units.push((0..n).map(|r| r * n + c).collect());
        }
        for br in 0..b {
            for bc in 0..b {
                units.push(
                    (0..n)
                        .map(|i| (br * b + i / b) * n + bc * b + i % b)
                        .collect(),
                );
            }
        }
        units
    }

    /// Indices sharing a row, column, or box with `idx`.
    fn peers(&self, idx: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .units()
            .into_iter()
            .filter(|unit| unit.contains(&idx))
            .flatten()
            .filter(|&j| j != idx)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Text form: first line the box order, then one line per row, `.` for
    /// blanks.
    pub fn serialize(&self) -> String {
        let n = self.side();
        let mut out = format!("{}\n", self.box_order);
        for r in 0..n {
            let row = (0..n)
                .map(|c| match self.cells[r * n + c] {
                    Some(v) => v.to_string(),
                    None => ".".to_string(),
                })
                .join(" ");
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}

/// Parses the Sudoku text format: first line `b`, then `b^2` lines of `b^2`
/// tokens, `.` or `0` for blank.
pub fn parse_sudoku(text: &str) -> Result<SudokuGrid> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::InvalidGrid("empty input".into()))?;
    let b: usize = header
        .trim()
        .parse()
        .map_err(|_| Error::InvalidGrid(format!("bad box order {header:?}")))?;
    let mut cells = Vec::new();
    for line in lines {
        for token in line.split_whitespace() {
            if token == "." || token == "0" {
                cells.push(None);
            } else {
                let v: usize = token
                    .parse()
                    .map_err(|_| Error::InvalidGrid(format!("bad cell token {token:?}")))?;
                cells.push(Some(v));
            }
        }
    }
    SudokuGrid::new(b, cells)
}

fn cell_vertex(n: usize, idx: usize) -> VertexId {
    VertexId::new(format!("r{:02}c{:02}", idx / n + 1, idx % n + 1))
}

/// Compiles the blanks of a grid into an instance: domains exclude givens in
/// the cell's row, column, and box; edges connect blanks sharing a unit.
/// Returns the instance plus the blank-cell index of each vertex.
pub fn build_sudoku_instance(grid: &SudokuGrid) -> (Instance, BTreeMap<VertexId, usize>) {
    let n = grid.side();
    let colors: Vec<ColorId> = (1..=n).map(|v| ColorId::new(v.to_string())).collect();
    let blanks: Vec<usize> =
        (0..n * n).filter(|&i| grid.cells()[i].is_none()).collect();
    let mut cell_of = BTreeMap::new();
    let mut domains = BTreeMap::new();
    let mut vertices = Vec::new();
    for &idx in &blanks {
        let id = cell_vertex(n, idx);
        let excluded: std::collections::BTreeSet<usize> =
            grid.peers(idx).iter().filter_map(|&j| grid.cells()[j]).collect();
        let dom: ColorSet = (1..=n)
            .filter(|v| !excluded.contains(v))
            .map(|v| ColorId::new(v.to_string()))
            .collect();
        vertices.push(id.clone());
        domains.insert(id.clone(), dom);
        cell_of.insert(id, idx);
    }
    let mut edges = Vec::new();
    for (i, &a) in blanks.iter().enumerate() {
        let peers = grid.peers(a);
        for &b in &blanks[i + 1..] {
            if peers.contains(&b) {
                edges.push((cell_vertex(n, a), cell_vertex(n, b)));
            }
        }
    }
    let inst = Instance::new(vertices, edges, colors, domains)
        .expect("sudoku model is consistent");
    (inst, cell_of)
}

/// Result of a Sudoku run.
#[derive(Clone, Debug)]
pub struct SudokuReport {
    pub solution: Option<SudokuGrid>,
    /// Singleton-kernel uniqueness; only computed when requested.
    pub unique: Option<bool>,
    /// Per-cell kernel candidates (blank cells only), when computed.
    pub kernel: Option<BTreeMap<usize, Vec<usize>>>,
    /// True when `w_cap` limited the elimination search, making the kernel a
    /// sound over-approximation and infeasibility reports non-exhaustive.
    pub partial: bool,
}

/// Solves a grid through the kernel-based selection method; when
/// `check_unique` is set, also computes the kernel and reports uniqueness by
/// the singleton-fiber criterion.
pub fn sudoku_solve(grid: &SudokuGrid, w_cap: usize, check_unique: bool) -> Result<SudokuReport> {
    let (inst, cell_of) = build_sudoku_instance(grid);
    let blanks = inst.vertices().len();
    let partial = blanks >= 2 && w_cap < blanks - 1;
    let solution = match calc_method_2(&inst, w_cap).outcome {
        SolveOutcome::Selection(s) => Some(fill_grid(grid, &cell_of, &s)?),
        SolveOutcome::Infeasible => None,
    };
    let (unique, kernel) = if check_unique {
        match calc_method_1(&inst, w_cap).outcome {
            KernelOutcome::Kernel(points) => {
                let mut fibers: BTreeMap<usize, Vec<usize>> =
                    cell_of.values().map(|&idx| (idx, Vec::new())).collect();
                for p in &points {
                    let idx = cell_of[&p.x];
                    let v: usize = p.y.token().parse().expect("color tokens are numeric");
                    fibers.get_mut(&idx).expect("vertex cell known").push(v);
                }
                let unique = fibers.values().all(|vals| vals.len() == 1);
                (Some(unique), Some(fibers))
            }
            KernelOutcome::Infeasible(_) => (Some(false), None),
        }
    } else {
        (None, None)
    };
    Ok(SudokuReport { solution, unique, kernel, partial })
}

fn fill_grid(
    grid: &SudokuGrid,
    cell_of: &BTreeMap<VertexId, usize>,
    s: &Selection,
) -> Result<SudokuGrid> {
    let mut cells = grid.cells().to_vec();
    for (vertex, color) in s {
        let idx = cell_of[vertex];
        cells[idx] = Some(color.token().parse().expect("color tokens are numeric"));
    }
    SudokuGrid::new(grid.box_order(), cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{count_selections, exists_selection};
    use crate::transitive::is_transitive;

    fn rect(n: usize, r: usize, s: usize, rows: &[&[usize]]) -> LatinRectangle {
        LatinRectangle::new(n, r, s, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn ryser_build_examples() {
        let a = rect(4, 2, 2, &[&[1, 2], &[3, 4]]);
        let inst = ryser_build(&a);
        assert_eq!(inst.vertices().len(), 4);
        assert_eq!(inst.colors().len(), 2);
        assert_eq!(inst.graph().edge_count(), 0);
        assert!(is_transitive(&inst));

        let b = rect(4, 3, 2, &[&[1, 2], &[2, 3], &[3, 1]]);
        assert_eq!(b.rows_missing(4), vec![1, 2, 3]);
        assert_eq!(b.occurrences(4), 0);
        let inst = ryser_build(&b);
        assert_eq!(inst.vertices().len(), 6);
        // The three (4, row) vertices form a triangle; other values miss
        // only one row each.
        assert_eq!(inst.graph().edge_count(), 3);
        assert!(is_transitive(&inst));

        let c = rect(2, 2, 2, &[&[1, 2], &[2, 1]]);
        let inst = ryser_build(&c);
        assert!(inst.vertices().is_empty());
    }

    #[test]
    fn ryser_condition_examples() {
        assert_eq!(ryser_condition(&rect(4, 2, 2, &[&[1, 2], &[3, 4]])), None);
        assert_eq!(ryser_condition(&rect(4, 3, 2, &[&[1, 2], &[2, 3], &[3, 1]])), Some(4));
        let full = rect(2, 2, 2, &[&[1, 2], &[2, 1]]);
        assert_eq!(ryser_condition(&full), None);
    }

    #[test]
    fn ryser_extend_examples() {
        let a = rect(4, 2, 2, &[&[1, 2], &[3, 4]]);
        let ext = ryser_extend(&a).unwrap();
        assert_eq!(ext.cols(), 4);
        for (row, orig) in ext.entries().iter().zip(a.entries()) {
            assert_eq!(&row[..2], &orig[..]);
        }

        assert_eq!(ryser_extend(&rect(4, 3, 2, &[&[1, 2], &[2, 3], &[3, 1]])), None);

        let full = rect(2, 2, 2, &[&[1, 2], &[2, 1]]);
        assert_eq!(ryser_extend(&full), Some(full.clone()));
    }

    #[test]
    fn ryser_condition_matches_model_solvability() {
        // Solvability of the transitive model tracks the condition.
        let cases = [
            rect(4, 2, 2, &[&[1, 2], &[3, 4]]),
            rect(4, 3, 2, &[&[1, 2], &[2, 3], &[3, 1]]),
            rect(3, 2, 1, &[&[1], &[2]]),
        ];
        for r in cases {
            let inst = ryser_build(&r);
            assert_eq!(ryser_condition(&r).is_none(), exists_selection(&inst), "{r:?}");
        }
    }

    #[test]
    fn rectangle_validation() {
        assert!(LatinRectangle::new(4, 2, 2, vec![vec![1, 2], vec![1, 3]]).is_err());
        assert!(LatinRectangle::new(4, 2, 2, vec![vec![1, 1], vec![2, 3]]).is_err());
        assert!(LatinRectangle::new(4, 5, 2, vec![]).is_err());
        assert!(LatinRectangle::new(4, 2, 2, vec![vec![1, 5], vec![2, 3]]).is_err());
    }

    #[test]
    fn rectangle_text_roundtrip() {
        let r = rect(4, 2, 2, &[&[1, 2], &[3, 4]]);
        assert_eq!(parse_rectangle(&r.serialize()).unwrap(), r);
    }

    #[test]
    fn sdr_examples() {
        let family: Vec<ColorSet> = vec![
            ["1", "2"].iter().map(|c| ColorId::new(*c)).collect(),
            ["2"].iter().map(|c| ColorId::new(*c)).collect(),
            ["2", "3"].iter().map(|c| ColorId::new(*c)).collect(),
        ];
        let reps = hall_sdr_solve(&family).unwrap();
        assert_eq!(reps.len(), 3);
        assert_eq!(reps.iter().unique().count(), 3);
        for (rep, set) in reps.iter().zip(&family) {
            assert!(set.contains(rep));
        }

        let failing: Vec<ColorSet> = vec![
            [ColorId::new("1")].into_iter().collect(),
            [ColorId::new("1")].into_iter().collect(),
        ];
        assert_eq!(hall_sdr_solve(&failing), None);

        assert_eq!(hall_sdr_solve(&[]), Some(Vec::new()));
    }

    fn grid4(cells: &[usize]) -> SudokuGrid {
        SudokuGrid::new(2, cells.iter().map(|&v| if v == 0 { None } else { Some(v) }).collect())
            .unwrap()
    }

    #[test]
    fn sudoku_validation_rejects_duplicate_givens() {
        let mut cells = vec![None; 16];
        cells[0] = Some(1);
        cells[1] = Some(1);
        assert!(SudokuGrid::new(2, cells).is_err());
    }

    #[test]
    fn sudoku_solves_a_4x4() {
        let grid = grid4(&[
            1, 2, 3, 4, //
            3, 4, 1, 2, //
            2, 1, 4, 3, //
            4, 3, 2, 0,
        ]);
        let report = sudoku_solve(&grid, 8, true).unwrap();
        let solved = report.solution.unwrap();
        assert_eq!(solved.cells()[15], Some(1));
        assert_eq!(report.unique, Some(true));
        assert!(!report.partial);
    }

    #[test]
    fn empty_sudoku_is_solvable_but_not_unique() {
        // Capped search: the solution is still valid and the full graph
        // stays multi-valued, so non-uniqueness is reported either way.
        let grid = SudokuGrid::new(2, vec![None; 16]).unwrap();
        let report = sudoku_solve(&grid, 3, true).unwrap();
        assert!(report.solution.is_some());
        assert_eq!(report.unique, Some(false));
        assert!(report.partial);
        let (inst, _) = build_sudoku_instance(&grid);
        assert!(count_selections(&inst, 2) > 1);
    }

    #[test]
    fn sudoku_text_roundtrip() {
        let grid = grid4(&[
            1, 0, 3, 4, //
            0, 4, 1, 2, //
            2, 1, 4, 0, //
            4, 0, 2, 1,
        ]);
        assert_eq!(parse_sudoku(&grid.serialize()).unwrap(), grid);
    }

    #[test]
    fn sudoku_solution_respects_all_units() {
        let grid = grid4(&[
            0, 0, 3, 4, //
            3, 4, 0, 0, //
            0, 1, 4, 0, //
            4, 0, 0, 1,
        ]);
        let report = sudoku_solve(&grid, 12, false).unwrap();
        let solved = report.solution.unwrap();
        for unit in solved.units() {
            let values: Vec<usize> = unit.iter().map(|&i| solved.cells()[i].unwrap()).collect();
            assert_eq!(values.iter().unique().count(), values.len());
        }
        for (i, given) in grid.cells().iter().enumerate() {
            if given.is_some() {
                assert_eq!(solved.cells()[i], *given);
            }
        }
    }
}
