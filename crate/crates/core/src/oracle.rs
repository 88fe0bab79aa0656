//! Brute-force exact cover of a box by bricks.
//!
//! Depth-first search that always covers the lexicographically first empty
//! cell. A brick covering that cell must have its lowest corner there, so
//! each node branches only over brick shapes.
//!
//! Because cells are covered in lexicographic order, the covered region is
//! always a staircase: along axis 0 every column is covered from the top
//! down to some height. The search prunes with necessary conditions on
//! that staircase:
//!
//! * every maximal run of empty cells along the last axis next to a newly
//!   placed brick, and every column's remaining depth along axis 0, must be
//!   a sum of brick extents on that axis;
//! * the box volume must be a sum of brick volumes;
//! * column-height profiles already proven infeasible are not revisited.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoxShape, Brick, Orientation, Placement, RotationPolicy, Tiling};

/// Largest box, in cells, the search accepts.
pub const MAX_CELLS: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub rotation_policy: RotationPolicy,
    pub node_limit: u64,
    pub time_limit: Duration,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            rotation_policy: RotationPolicy::Fixed,
            node_limit: 2_000_000_000,
            time_limit: Duration::from_secs(600),
            parallel: false,
        }
    }
}

impl SearchConfig {
    pub fn with_policy(rotation_policy: RotationPolicy) -> Self {
        SearchConfig {
            rotation_policy,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Tiling),
    /// The whole tree was explored without a solution.
    Infeasible,
    /// A node or time limit stopped the search first.
    Exhausted,
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

#[derive(Debug, Clone)]
struct Shape {
    brick: usize,
    orientation: Orientation,
    extents: Vec<usize>,
    /// Flat offsets of the shape's cells relative to its lowest corner.
    offsets: Vec<usize>,
    /// Offsets of the cells whose last coordinate is 0.
    line_starts: Vec<usize>,
    /// Column indices (flat over axes 1..n) relative to the corner's column.
    columns: Vec<usize>,
}

struct Problem {
    sides: Vec<usize>,
    strides: Vec<usize>,
    shapes: Vec<Shape>,
    /// `row_fillable[len]`: `len` is a sum of last-axis extents.
    row_fillable: Vec<bool>,
    /// `column_fillable[len]`: `len` is a sum of axis-0 extents.
    column_fillable: Vec<bool>,
}

/// Cap on remembered infeasible height profiles.
const MEMO_LIMIT: usize = 1 << 21;

enum Verdict {
    Found,
    Infeasible,
    Exhausted,
}

struct Search<'a> {
    problem: &'a Problem,
    covered: Vec<bool>,
    /// Covered depth of every axis-0 column.
    heights: Vec<u16>,
    dead: HashSet<Box<[u16]>>,
    stack: Vec<(usize, usize)>,
    nodes: u64,
    node_limit: u64,
    deadline: Instant,
}

impl Problem {
    fn new(box_shape: &BoxShape, bricks: &[Brick], policy: RotationPolicy) -> Result<Self> {
        let dim = box_shape.dim();
        if let Some(b) = bricks.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: b.dim(),
            });
        }
        let volume = box_shape.volume();
        if volume > MAX_CELLS {
            return Err(Error::CapExceeded {
                volume,
                cap: MAX_CELLS,
            });
        }
        let sides: Vec<usize> = box_shape.sides().iter().map(|&s| s as usize).collect();
        let mut strides = vec![1usize; dim];
        for j in (0..dim - 1).rev() {
            strides[j] = strides[j + 1] * sides[j + 1];
        }

        let orientations: Vec<Orientation> = match policy {
            RotationPolicy::Fixed => vec![(0..dim as u8).collect()],
            RotationPolicy::AxisPermutations => (0..dim as u8)
                .permutations(dim)
                .map(|p| p.into_iter().collect())
                .collect(),
        };
        let mut shapes: Vec<Shape> = Vec::new();
        for (i, brick) in bricks.iter().enumerate() {
            let mut seen: Vec<Vec<usize>> = Vec::new();
            for o in &orientations {
                let extents: Vec<usize> = brick
                    .oriented(o)
                    .expect("orientation is a permutation")
                    .iter()
                    .map(|&s| s as usize)
                    .collect();
                if seen.contains(&extents) || extents.iter().zip(&sides).any(|(e, s)| e > s) {
                    continue;
                }
                seen.push(extents.clone());
                let mut offsets = Vec::new();
                let mut line_starts = Vec::new();
                let mut columns = Vec::new();
                for cell in extents.iter().map(|&e| 0..e).multi_cartesian_product() {
                    let off: usize = cell.iter().zip(&strides).map(|(c, s)| c * s).sum();
                    offsets.push(off);
                    if cell[dim - 1] == 0 {
                        line_starts.push(off);
                    }
                    if cell[0] == 0 {
                        columns.push(off);
                    }
                }
                shapes.push(Shape {
                    brick: i,
                    orientation: o.clone(),
                    extents,
                    offsets,
                    line_starts,
                    columns,
                });
            }
        }

        let fillable = |axis: usize| {
            let len = sides[axis];
            let mut ok = vec![false; len + 1];
            ok[0] = true;
            for l in 1..=len {
                ok[l] = shapes
                    .iter()
                    .any(|s| s.extents[axis] <= l && ok[l - s.extents[axis]]);
            }
            ok
        };
        let row_fillable = fillable(dim - 1);
        let column_fillable = fillable(0);
        if sides[0] > u16::MAX as usize {
            return Err(Error::CapExceeded {
                volume,
                cap: MAX_CELLS,
            });
        }
        Ok(Problem {
            sides,
            strides,
            shapes,
            row_fillable,
            column_fillable,
        })
    }

    fn cells(&self) -> usize {
        self.strides[0] * self.sides[0]
    }

    fn volume_fillable(&self) -> bool {
        let total = self.cells();
        let vols: Vec<usize> = self
            .shapes
            .iter()
            .map(|s| s.offsets.len())
            .unique()
            .collect();
        let mut ok = vec![false; total + 1];
        ok[0] = true;
        for v in 1..=total {
            ok[v] = vols.iter().any(|&w| w <= v && ok[v - w]);
        }
        ok[total]
    }

    /// Whether `shape` fits with its lowest corner on empty cell `at`.
    fn fits(&self, covered: &[bool], at: usize, shape: &Shape) -> bool {
        let mut rem = at;
        for (j, &stride) in self.strides.iter().enumerate() {
            let c = rem / stride;
            rem %= stride;
            if c + shape.extents[j] > self.sides[j] {
                return false;
            }
        }
        shape.offsets.iter().all(|&o| !covered[at + o])
    }

    fn to_tiling(
        &self,
        box_shape: &BoxShape,
        bricks: &[Brick],
        policy: RotationPolicy,
        stack: &[(usize, usize)],
    ) -> Tiling {
        let mut t = Tiling::new(box_shape.clone(), bricks.to_vec(), policy);
        for &(at, s) in stack {
            let shape = &self.shapes[s];
            let mut rem = at;
            let origin = self
                .strides
                .iter()
                .map(|&stride| {
                    let c = rem / stride;
                    rem %= stride;
                    c as u64
                })
                .collect();
            t.placements.push(Placement::new(
                shape.brick,
                shape.orientation.clone(),
                origin,
            ));
        }
        t.sort_placements();
        t
    }
}

impl<'a> Search<'a> {
    fn new(problem: &'a Problem, cfg: &SearchConfig, deadline: Instant) -> Self {
        Search {
            problem,
            covered: vec![false; problem.cells()],
            heights: vec![0; problem.strides[0]],
            dead: HashSet::new(),
            stack: Vec::new(),
            nodes: 0,
            node_limit: cfg.node_limit,
            deadline,
        }
    }

    fn set(&mut self, at: usize, shape: usize, value: bool) {
        for &o in &self.problem.shapes[shape].offsets {
            self.covered[at + o] = value;
        }
    }

    fn place(&mut self, at: usize, shape: usize) {
        self.set(at, shape, true);
        let s = &self.problem.shapes[shape];
        let plane = self.problem.strides[0];
        let depth = (at / plane + s.extents[0]) as u16;
        for &c in &s.columns {
            self.heights[(at + c) % plane] = depth;
        }
        self.stack.push((at, shape));
    }

    fn unplace(&mut self) {
        let (at, shape) = self.stack.pop().expect("non-empty stack");
        self.set(at, shape, false);
        let plane = self.problem.strides[0];
        let depth = (at / plane) as u16;
        for &c in &self.problem.shapes[shape].columns {
            self.heights[(at + c) % plane] = depth;
        }
    }

    /// Necessary conditions around a freshly placed shape.
    fn locally_fillable(&self, at: usize, shape: usize) -> bool {
        let p = self.problem;
        let s = &p.shapes[shape];
        let dim = p.sides.len();
        let row = p.sides[dim - 1];
        let bottom = p.sides[0] - (at / p.strides[0] + s.extents[0]);
        if !p.column_fillable[bottom] {
            return false;
        }
        let width = s.extents[dim - 1];
        for &start in &s.line_starts {
            let first = at + start;
            let pos = first % row;
            let left = (0..pos)
                .rev()
                .take_while(|&q| !self.covered[first - pos + q])
                .count();
            let right = (pos + width..row)
                .take_while(|&q| !self.covered[first - pos + q])
                .count();
            if !p.row_fillable[left] || !p.row_fillable[right] {
                return false;
            }
        }
        true
    }

    fn run(&mut self, from: usize) -> Verdict {
        let total = self.covered.len();
        let Some(at) = (from..total).find(|&i| !self.covered[i]) else {
            return Verdict::Found;
        };
        if self.dead.contains(self.heights.as_slice()) {
            return Verdict::Infeasible;
        }
        let p = self.problem;
        let row = p.sides[p.sides.len() - 1];
        let row_end = (at / row + 1) * row;
        let gap = (at..row_end).take_while(|&i| !self.covered[i]).count();
        if !p.row_fillable[gap] {
            return Verdict::Infeasible;
        }
        let mut exhausted = false;
        for s in 0..p.shapes.len() {
            if !p.fits(&self.covered, at, &p.shapes[s]) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_limit
                || (self.nodes.is_multiple_of(4096) && Instant::now() > self.deadline)
            {
                return Verdict::Exhausted;
            }
            self.place(at, s);
            if self.locally_fillable(at, s) {
                match self.run(at + 1) {
                    Verdict::Found => return Verdict::Found,
                    Verdict::Exhausted => exhausted = true,
                    Verdict::Infeasible => {}
                }
            }
            self.unplace();
            if exhausted {
                return Verdict::Exhausted;
            }
        }
        if self.dead.len() < MEMO_LIMIT {
            self.dead.insert(self.heights.clone().into_boxed_slice());
        }
        Verdict::Infeasible
    }
}

/// Searches for an exact cover of `box_shape` by copies of `bricks`.
///
/// `Infeasible` is only reported after the complete tree has been
/// explored; hitting a limit yields `Exhausted`. With `parallel` set, the
/// branches at the first cell are searched concurrently and the solution
/// from the earliest branch wins, so the result does not depend on
/// scheduling.
pub fn exact_cover_search(
    box_shape: &BoxShape,
    bricks: &[Brick],
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    let problem = Problem::new(box_shape, bricks, cfg.rotation_policy)?;
    if !problem.volume_fillable() {
        return Ok(SearchOutcome::Infeasible);
    }
    let deadline = Instant::now() + cfg.time_limit;
    let found = |stack: &[(usize, usize)]| {
        SearchOutcome::Found(problem.to_tiling(box_shape, bricks, cfg.rotation_policy, stack))
    };

    if !cfg.parallel {
        let mut search = Search::new(&problem, cfg, deadline);
        return Ok(match search.run(0) {
            Verdict::Found => found(&search.stack),
            Verdict::Infeasible => SearchOutcome::Infeasible,
            Verdict::Exhausted => SearchOutcome::Exhausted,
        });
    }

    let empty = vec![false; problem.cells()];
    let branches: Vec<usize> = (0..problem.shapes.len())
        .filter(|&s| problem.fits(&empty, 0, &problem.shapes[s]))
        .collect();
    let results: Vec<(Verdict, Vec<(usize, usize)>)> = branches
        .par_iter()
        .map(|&s| {
            let mut search = Search::new(&problem, cfg, deadline);
            search.place(0, s);
            let v = if search.locally_fillable(0, s) {
                search.run(1)
            } else {
                Verdict::Infeasible
            };
            (v, search.stack)
        })
        .collect();
    let mut exhausted = false;
    for (verdict, stack) in &results {
        match verdict {
            Verdict::Found => return Ok(found(stack)),
            Verdict::Exhausted => exhausted = true,
            Verdict::Infeasible => {}
        }
    }
    Ok(if exhausted {
        SearchOutcome::Exhausted
    } else {
        SearchOutcome::Infeasible
    })
}

/// Side lengths `a` in `1..=limit` for which the `a × a` square admits no
/// tiling by the given square bricks.
///
/// Squares that a single brick side divides are settled by a grid fill;
/// every other side goes to [`exact_cover_search`].
pub fn threshold_scan(bricks: &[Brick], limit: u64, cfg: &SearchConfig) -> Result<Vec<u64>> {
    let mut sides = Vec::with_capacity(bricks.len());
    for b in bricks {
        match b.sides() {
            [x, y] if x == y => sides.push(*x),
            _ => {
                return Err(Error::PreconditionViolated(format!(
                    "threshold scans take 2-D square bricks, got {:?}",
                    b.sides()
                )))
            }
        }
    }
    let cap_side = (MAX_CELLS as f64).sqrt() as u64;
    if limit > cap_side {
        return Err(Error::CapExceeded {
            volume: (limit as u128) * (limit as u128),
            cap: MAX_CELLS,
        });
    }
    let inner = SearchConfig {
        parallel: false,
        ..cfg.clone()
    };
    let check = |a: u64| -> Result<Option<u64>> {
        if sides.iter().any(|&s| a.is_multiple_of(s)) {
            return Ok(None);
        }
        let square = BoxShape::new(vec![a, a])?;
        match exact_cover_search(&square, bricks, &inner)? {
            SearchOutcome::Found(_) => Ok(None),
            SearchOutcome::Infeasible => Ok(Some(a)),
            SearchOutcome::Exhausted => Err(Error::SearchExhausted),
        }
    };
    let results: Vec<Result<Option<u64>>> = if cfg.parallel {
        (1..=limit).into_par_iter().map(check).collect()
    } else {
        (1..=limit).map(check).collect()
    };
    let mut out = Vec::new();
    for r in results {
        if let Some(a) = r? {
            out.push(a);
        }
    }
    Ok(out)
}
