//! Boxes, bricks, placements and tilings.
//!
//! A [`Tiling`] is only a claim; [`verify_full`] and [`verify_sampled`]
//! decide whether it is an exact cover of its box. The combinators in
//! [`ops`] build larger tilings out of smaller ones and preserve validity.

mod codec;
mod ops;
mod verify;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use codec::{decode, encode};
pub use ops::{assemble, extrude, grid_fill, grid_fill_oriented, permute_axes, stack, stack_refs};
pub use verify::{verify_full, verify_sampled, VerifyReport, Violation};

/// Integer coordinates, one per axis.
pub type Coords = SmallVec<[u64; 4]>;

/// Axis permutation: the oriented brick's side on axis `j` is
/// `brick.sides()[orientation[j]]`.
pub type Orientation = SmallVec<[u8; 4]>;

pub fn identity_orientation(dim: usize) -> Orientation {
    (0..dim as u8).collect()
}

fn checked_sides(sides: Vec<u64>, what: &str) -> Result<Vec<u64>> {
    if sides.is_empty() {
        return Err(Error::PreconditionViolated(format!(
            "{what} needs at least one side"
        )));
    }
    if sides.contains(&0) {
        return Err(Error::PreconditionViolated(format!(
            "{what} sides must be >= 1"
        )));
    }
    if sides.len() > u8::MAX as usize {
        return Err(Error::PreconditionViolated(format!(
            "{what} has too many axes"
        )));
    }
    Ok(sides)
}

/// The region to tile: `sides[0] × … × sides[n-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct BoxShape {
    sides: Vec<u64>,
}

impl BoxShape {
    pub fn new(sides: Vec<u64>) -> Result<Self> {
        Ok(BoxShape {
            sides: checked_sides(sides, "box")?,
        })
    }

    pub fn sides(&self) -> &[u64] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    /// Number of unit cells, saturating at `u128::MAX`.
    pub fn volume(&self) -> u128 {
        volume_of(&self.sides)
    }
}

/// A tile type. Copies may be rotated by axis permutations when the
/// tiling's policy allows it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Brick {
    sides: Vec<u64>,
}

impl Brick {
    pub fn new(sides: Vec<u64>) -> Result<Self> {
        Ok(Brick {
            sides: checked_sides(sides, "brick")?,
        })
    }

    /// The `dim`-dimensional cube of side `side`.
    pub fn cube(side: u64, dim: usize) -> Result<Self> {
        Brick::new(vec![side; dim])
    }

    pub fn sides(&self) -> &[u64] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn volume(&self) -> u128 {
        volume_of(&self.sides)
    }

    /// Drops the last axis; `None` for a one-dimensional brick.
    pub fn project(&self) -> Option<Brick> {
        (self.sides.len() > 1).then(|| Brick {
            sides: self.sides[..self.sides.len() - 1].to_vec(),
        })
    }

    /// Keeps the first `dim` axes.
    pub fn truncate(&self, dim: usize) -> Brick {
        Brick {
            sides: self.sides[..dim].to_vec(),
        }
    }

    /// Side lengths after applying `orientation`, or `None` if it is not a
    /// permutation of this brick's axes.
    pub fn oriented(&self, orientation: &[u8]) -> Option<Coords> {
        if !is_permutation(orientation, self.sides.len()) {
            return None;
        }
        Some(
            orientation
                .iter()
                .map(|&a| self.sides[a as usize])
                .collect(),
        )
    }
}

impl TryFrom<Vec<u64>> for BoxShape {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        BoxShape::new(v)
    }
}

impl From<BoxShape> for Vec<u64> {
    fn from(b: BoxShape) -> Self {
        b.sides
    }
}

impl TryFrom<Vec<u64>> for Brick {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Brick::new(v)
    }
}

impl From<Brick> for Vec<u64> {
    fn from(b: Brick) -> Self {
        b.sides
    }
}

pub(crate) fn volume_of(sides: &[u64]) -> u128 {
    sides
        .iter()
        .try_fold(1u128, |acc, &s| acc.checked_mul(s as u128))
        .unwrap_or(u128::MAX)
}

pub(crate) fn is_permutation(p: &[u8], dim: usize) -> bool {
    if p.len() != dim {
        return false;
    }
    let mut seen = [false; 256];
    for &a in p {
        if a as usize >= dim || seen[a as usize] {
            return false;
        }
        seen[a as usize] = true;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotationPolicy {
    /// Every copy keeps the brick's own axis order.
    Fixed,
    /// Copies may permute their axes.
    AxisPermutations,
}

/// One copy of `bricks[brick]`, rotated by `orientation`, with its lowest
/// corner at `origin`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Placement {
    pub brick: usize,
    pub orientation: Orientation,
    pub origin: Coords,
}

impl Placement {
    pub fn new(brick: usize, orientation: Orientation, origin: Coords) -> Self {
        Placement {
            brick,
            orientation,
            origin,
        }
    }

    pub fn upright(brick: usize, origin: Coords) -> Self {
        let dim = origin.len();
        Placement {
            brick,
            orientation: identity_orientation(dim),
            origin,
        }
    }
}

/// A box, the available brick types, and positioned copies claimed to
/// cover the box exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tiling {
    #[serde(rename = "box")]
    pub box_shape: BoxShape,
    pub bricks: Vec<Brick>,
    pub rotation_policy: RotationPolicy,
    pub placements: Vec<Placement>,
}

impl Tiling {
    pub fn new(box_shape: BoxShape, bricks: Vec<Brick>, rotation_policy: RotationPolicy) -> Self {
        Tiling {
            box_shape,
            bricks,
            rotation_policy,
            placements: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.box_shape.dim()
    }

    /// Sides of a placement's brick after rotation; `None` if the brick
    /// index or orientation is bad.
    pub fn oriented_sides(&self, p: &Placement) -> Option<Coords> {
        self.bricks.get(p.brick)?.oriented(&p.orientation)
    }

    /// Sorts placements lexicographically by origin.
    pub fn sort_placements(&mut self) {
        self.placements
            .sort_unstable_by(|a, b| a.origin.cmp(&b.origin).then(a.brick.cmp(&b.brick)));
    }

    /// Number of placements using each brick type.
    pub fn brick_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.bricks.len()];
        for p in &self.placements {
            if let Some(c) = counts.get_mut(p.brick) {
                *c += 1;
            }
        }
        counts
    }
}
