use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Coords, RotationPolicy, Tiling};

/// Largest box (in cells) that the sampled verifier rasterises when asked
/// for at least as many samples as there are cells.
const RASTER_LIMIT: u128 = 1 << 26;

/// Upper bound on the number of buckets in the point-location grid.
const BUCKET_LIMIT: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A brick's dimension differs from the box's.
    BrickDimension {
        brick: usize,
        expected: usize,
        got: usize,
    },
    /// A placement's origin or orientation has the wrong length.
    PlacementDimension {
        placement: usize,
    },
    BrickIndex {
        placement: usize,
    },
    /// Orientation is not a permutation of the axes.
    BadOrientation {
        placement: usize,
    },
    /// A rotated copy under the fixed-orientation policy.
    RotationForbidden {
        placement: usize,
    },
    OutOfBounds {
        placement: usize,
    },
    /// Interiors of two placements intersect (`first < second`).
    Overlap {
        first: usize,
        second: usize,
    },
    VolumeMismatch {
        box_volume: u128,
        covered: u128,
    },
    /// A sampled cell covered by `count != 1` placements.
    Coverage {
        cell: Vec<u64>,
        count: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BrickDimension {
                brick,
                expected,
                got,
            } => {
                write!(f, "brick {brick} has dimension {got}, box has {expected}")
            }
            Violation::PlacementDimension { placement } => {
                write!(f, "placement {placement} has the wrong dimension")
            }
            Violation::BrickIndex { placement } => {
                write!(f, "placement {placement} refers to a missing brick")
            }
            Violation::BadOrientation { placement } => {
                write!(
                    f,
                    "placement {placement} orientation is not an axis permutation"
                )
            }
            Violation::RotationForbidden { placement } => {
                write!(f, "placement {placement} is rotated under the fixed policy")
            }
            Violation::OutOfBounds { placement } => {
                write!(f, "placement {placement} sticks out of the box")
            }
            Violation::Overlap { first, second } => {
                write!(f, "placements {first} and {second} overlap")
            }
            Violation::VolumeMismatch {
                box_volume,
                covered,
            } => {
                write!(
                    f,
                    "placements cover volume {covered}, box volume is {box_volume}"
                )
            }
            Violation::Coverage { cell, count } => {
                write!(f, "cell {cell:?} is covered {count} times")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyReport {
    Valid,
    Invalid(Violation),
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, VerifyReport::Valid)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyReport::Valid => f.write_str("valid"),
            VerifyReport::Invalid(v) => write!(f, "invalid: {v}"),
        }
    }
}

/// Oriented extent of every placement, after checking each one fits.
fn check_placements(t: &Tiling) -> Result<Vec<Coords>, Violation> {
    let dim = t.dim();
    for (i, b) in t.bricks.iter().enumerate() {
        if b.dim() != dim {
            return Err(Violation::BrickDimension {
                brick: i,
                expected: dim,
                got: b.dim(),
            });
        }
    }
    let mut extents = Vec::with_capacity(t.placements.len());
    for (i, p) in t.placements.iter().enumerate() {
        if p.origin.len() != dim || p.orientation.len() != dim {
            return Err(Violation::PlacementDimension { placement: i });
        }
        let brick = t
            .bricks
            .get(p.brick)
            .ok_or(Violation::BrickIndex { placement: i })?;
        let sides = brick
            .oriented(&p.orientation)
            .ok_or(Violation::BadOrientation { placement: i })?;
        if t.rotation_policy == RotationPolicy::Fixed
            && p.orientation
                .iter()
                .enumerate()
                .any(|(j, &a)| a as usize != j)
        {
            return Err(Violation::RotationForbidden { placement: i });
        }
        let fits = p
            .origin
            .iter()
            .zip(&sides)
            .zip(t.box_shape.sides())
            .all(|((&o, &s), &a)| o.checked_add(s).is_some_and(|end| end <= a));
        if !fits {
            return Err(Violation::OutOfBounds { placement: i });
        }
        extents.push(sides);
    }
    Ok(extents)
}

fn check_volume(t: &Tiling, extents: &[Coords]) -> Result<(), Violation> {
    let box_volume = t.box_shape.volume();
    let covered = extents
        .iter()
        .map(|e| super::volume_of(e))
        .fold(0u128, |acc, v| acc.saturating_add(v));
    if covered != box_volume {
        return Err(Violation::VolumeMismatch {
            box_volume,
            covered,
        });
    }
    Ok(())
}

fn interiors_meet(o1: &[u64], e1: &[u64], o2: &[u64], e2: &[u64]) -> bool {
    (0..o1.len()).all(|j| o1[j] < o2[j] + e2[j] && o2[j] < o1[j] + e1[j])
}

/// Lexicographically first overlapping pair `(i, j)`, `i < j`.
///
/// Sweeps along axis 0 so that only pairs whose axis-0 intervals meet
/// are compared.
fn first_overlap(t: &Tiling, extents: &[Coords]) -> Option<(usize, usize)> {
    let ps = &t.placements;
    let mut order: Vec<usize> = (0..ps.len()).collect();
    order.sort_unstable_by_key(|&i| (ps[i].origin[0], i));
    let mut best: Option<(usize, usize)> = None;
    for (pos, &i) in order.iter().enumerate() {
        let end = ps[i].origin[0] + extents[i][0];
        for &j in &order[pos + 1..] {
            if ps[j].origin[0] >= end {
                break;
            }
            if interiors_meet(&ps[i].origin, &extents[i], &ps[j].origin, &extents[j]) {
                let pair = (i.min(j), i.max(j));
                if best.is_none_or(|b| pair < b) {
                    best = Some(pair);
                }
            }
        }
    }
    best
}

/// Exact check: every placement fits, interiors are pairwise disjoint,
/// and the placements' volumes add up to the box volume.
pub fn verify_full(t: &Tiling) -> VerifyReport {
    let extents = match check_placements(t) {
        Ok(e) => e,
        Err(v) => return VerifyReport::Invalid(v),
    };
    if let Some((first, second)) = first_overlap(t, &extents) {
        return VerifyReport::Invalid(Violation::Overlap { first, second });
    }
    match check_volume(t, &extents) {
        Ok(()) => VerifyReport::Valid,
        Err(v) => VerifyReport::Invalid(v),
    }
}

/// Fit and volume are checked exactly; disjointness is replaced by
/// checking that `samples` random cells (seeded) are each covered exactly
/// once. When `samples` is at least the number of cells and the box is
/// small enough to rasterise, every cell is checked instead, which makes
/// the verdict exact.
pub fn verify_sampled(t: &Tiling, samples: u64, seed: u64) -> VerifyReport {
    let extents = match check_placements(t) {
        Ok(e) => e,
        Err(v) => return VerifyReport::Invalid(v),
    };
    if let Err(v) = check_volume(t, &extents) {
        return VerifyReport::Invalid(v);
    }
    let volume = t.box_shape.volume();
    let result = if samples as u128 >= volume && volume <= RASTER_LIMIT {
        rasterise(t, &extents)
    } else {
        sample(t, &extents, samples, seed)
    };
    match result {
        Ok(()) => VerifyReport::Valid,
        Err(v) => VerifyReport::Invalid(v),
    }
}

fn rasterise(t: &Tiling, extents: &[Coords]) -> Result<(), Violation> {
    let sides = t.box_shape.sides();
    let dim = sides.len();
    let mut strides = vec![1usize; dim];
    for j in (0..dim.saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * sides[j + 1] as usize;
    }
    let total = strides[0] * sides[0] as usize;
    let mut counts = vec![0u32; total];
    let mut cell = vec![0u64; dim];
    for (p, e) in t.placements.iter().zip(extents) {
        // odometer over the placement's cells
        cell.iter_mut().for_each(|c| *c = 0);
        'cells: loop {
            let idx: usize = (0..dim)
                .map(|j| (p.origin[j] + cell[j]) as usize * strides[j])
                .sum();
            counts[idx] = counts[idx].saturating_add(1);
            for j in (0..dim).rev() {
                cell[j] += 1;
                if cell[j] < e[j] {
                    continue 'cells;
                }
                cell[j] = 0;
            }
            break;
        }
    }
    match counts.iter().position(|&c| c != 1) {
        None => Ok(()),
        Some(idx) => {
            let mut rem = idx;
            let cell = strides
                .iter()
                .map(|&s| {
                    let c = rem / s;
                    rem %= s;
                    c as u64
                })
                .collect();
            Err(Violation::Coverage {
                cell,
                count: counts[idx] as usize,
            })
        }
    }
}

/// Uniform grid of buckets; each placement is registered in every bucket
/// its extent touches.
struct BucketGrid {
    widths: Vec<u64>,
    counts: Vec<u64>,
    buckets: Vec<Vec<u32>>,
}

impl BucketGrid {
    fn build(t: &Tiling, extents: &[Coords]) -> Self {
        let sides = t.box_shape.sides();
        let dim = sides.len();
        let mut widths: Vec<u64> = (0..dim)
            .map(|j| extents.iter().map(|e| e[j]).max().unwrap_or(1).max(1))
            .collect();
        let count_on =
            |w: &[u64]| -> Vec<u64> { (0..dim).map(|j| sides[j].div_ceil(w[j])).collect() };
        let mut counts = count_on(&widths);
        while counts.iter().map(|&c| c as u128).product::<u128>() > BUCKET_LIMIT {
            let j = (0..dim).max_by_key(|&j| counts[j]).unwrap();
            widths[j] *= 2;
            counts = count_on(&widths);
        }
        let total = counts.iter().product::<u64>() as usize;
        let mut buckets = vec![Vec::new(); total];
        let mut lo = vec![0u64; dim];
        let mut hi = vec![0u64; dim];
        let mut cur = vec![0u64; dim];
        for (i, (p, e)) in t.placements.iter().zip(extents).enumerate() {
            let i = u32::try_from(i).expect("more than u32::MAX placements");
            for j in 0..dim {
                lo[j] = p.origin[j] / widths[j];
                hi[j] = (p.origin[j] + e[j] - 1) / widths[j];
            }
            cur.copy_from_slice(&lo);
            'walk: loop {
                let idx = flat(&cur, &counts);
                buckets[idx].push(i);
                for j in (0..dim).rev() {
                    cur[j] += 1;
                    if cur[j] <= hi[j] {
                        continue 'walk;
                    }
                    cur[j] = lo[j];
                }
                break;
            }
        }
        BucketGrid {
            widths,
            counts,
            buckets,
        }
    }

    fn candidates(&self, cell: &[u64]) -> &[u32] {
        let b: Vec<u64> = cell.iter().zip(&self.widths).map(|(c, w)| c / w).collect();
        &self.buckets[flat(&b, &self.counts)]
    }
}

fn flat(index: &[u64], counts: &[u64]) -> usize {
    index
        .iter()
        .zip(counts)
        .fold(0u64, |acc, (&i, &c)| acc * c + i) as usize
}

fn sample(t: &Tiling, extents: &[Coords], samples: u64, seed: u64) -> Result<(), Violation> {
    let grid = BucketGrid::build(t, extents);
    let sides = t.box_shape.sides();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cell = vec![0u64; sides.len()];
    for _ in 0..samples {
        for (c, &s) in cell.iter_mut().zip(sides) {
            *c = rng.gen_range(0..s);
        }
        let count = grid
            .candidates(&cell)
            .iter()
            .filter(|&&i| {
                let p = &t.placements[i as usize];
                let e = &extents[i as usize];
                (0..cell.len()).all(|j| p.origin[j] <= cell[j] && cell[j] < p.origin[j] + e[j])
            })
            .count();
        if count != 1 {
            return Err(Violation::Coverage {
                cell: cell.clone(),
                count,
            });
        }
    }
    Ok(())
}
