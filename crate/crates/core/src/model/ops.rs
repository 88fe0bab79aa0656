//! Combinators that assemble tilings out of smaller tilings.

use smallvec::SmallVec;

use super::{identity_orientation, BoxShape, Brick, Coords, Placement, RotationPolicy, Tiling};
use crate::error::{Error, Result};

/// Grid of copies of `bricks[brick]` in the given orientation.
pub fn grid_fill_oriented(
    box_shape: &BoxShape,
    bricks: Vec<Brick>,
    brick: usize,
    orientation: &[u8],
    policy: RotationPolicy,
) -> Result<Tiling> {
    let b = bricks
        .get(brick)
        .ok_or_else(|| Error::PreconditionViolated(format!("no brick with index {brick}")))?;
    if b.dim() != box_shape.dim() {
        return Err(Error::DimensionMismatch {
            expected: box_shape.dim(),
            got: b.dim(),
        });
    }
    let sides = b.oriented(orientation).ok_or_else(|| {
        Error::PreconditionViolated(format!("{orientation:?} is not an axis permutation"))
    })?;
    for (j, (&a, &s)) in box_shape.sides().iter().zip(&sides).enumerate() {
        if a % s != 0 {
            return Err(Error::DivisibilityViolation(format!(
                "brick side {s} does not divide box side {a} on axis {j}"
            )));
        }
    }
    let counts: Vec<u64> = box_shape
        .sides()
        .iter()
        .zip(&sides)
        .map(|(a, s)| a / s)
        .collect();
    let orientation: SmallVec<[u8; 4]> = orientation.iter().copied().collect();
    let dim = counts.len();
    let mut tiling = Tiling::new(box_shape.clone(), bricks, policy);
    let mut idx = vec![0u64; dim];
    // last axis fastest, so origins come out in lexicographic order
    'grid: loop {
        let origin: Coords = idx.iter().zip(&sides).map(|(i, s)| i * s).collect();
        tiling
            .placements
            .push(Placement::new(brick, orientation.clone(), origin));
        for j in (0..dim).rev() {
            idx[j] += 1;
            if idx[j] < counts[j] {
                continue 'grid;
            }
            idx[j] = 0;
        }
        break;
    }
    Ok(tiling)
}

/// The obvious grid tiling of `box_shape` by an upright `brick`.
pub fn grid_fill(box_shape: &BoxShape, brick: &Brick) -> Result<Tiling> {
    let dim = brick.dim();
    grid_fill_oriented(
        box_shape,
        vec![brick.clone()],
        0,
        &identity_orientation(dim),
        RotationPolicy::Fixed,
    )
}

/// Lifts an (n-1)-dimensional tiling to the box `t.box × height`.
///
/// `full_bricks[i]` must project onto `t.bricks[i]`. Each placement becomes
/// a column of `height / x_n` copies of its full brick, where `x_n` is the
/// full brick's last side; that quotient must be exact for every brick the
/// tiling uses.
pub fn extrude(t: &Tiling, full_bricks: &[Brick], height: u64) -> Result<Tiling> {
    let dim = t.dim() + 1;
    if full_bricks.len() != t.bricks.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} full bricks for {} projected bricks",
            full_bricks.len(),
            t.bricks.len()
        )));
    }
    for (full, flat) in full_bricks.iter().zip(&t.bricks) {
        if full.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: full.dim(),
            });
        }
        if full.project().as_ref() != Some(flat) {
            return Err(Error::ShapeMismatch(format!(
                "{:?} does not project onto {:?}",
                full.sides(),
                flat.sides()
            )));
        }
    }
    if height == 0 {
        return Err(Error::PreconditionViolated(
            "extrusion height must be >= 1".into(),
        ));
    }
    let mut used = vec![false; full_bricks.len()];
    for p in &t.placements {
        if let Some(u) = used.get_mut(p.brick) {
            *u = true;
        }
    }
    for (i, full) in full_bricks.iter().enumerate() {
        let last = full.sides()[dim - 1];
        if used[i] && !height.is_multiple_of(last) {
            return Err(Error::DivisibilityViolation(format!(
                "height {height} is not a multiple of brick {i}'s last side {last}"
            )));
        }
    }

    let mut sides = t.box_shape.sides().to_vec();
    sides.push(height);
    let mut out = Tiling::new(
        BoxShape::new(sides)?,
        full_bricks.to_vec(),
        t.rotation_policy,
    );
    for p in &t.placements {
        let step = full_bricks
            .get(p.brick)
            .ok_or_else(|| Error::PreconditionViolated(format!("no brick with index {}", p.brick)))?
            .sides()[dim - 1];
        let mut orientation = p.orientation.clone();
        orientation.push((dim - 1) as u8);
        for layer in 0..height / step {
            let mut origin = p.origin.clone();
            origin.push(layer * step);
            out.placements
                .push(Placement::new(p.brick, orientation.clone(), origin));
        }
    }
    out.sort_placements();
    Ok(out)
}

/// Stacks tilings end to end along `axis`, in the order given.
pub fn stack(parts: &[Tiling], axis: usize) -> Result<Tiling> {
    let refs: Vec<&Tiling> = parts.iter().collect();
    stack_refs(&refs, axis)
}

/// [`stack`] over borrowed parts; the same part may appear repeatedly.
pub fn stack_refs(parts: &[&Tiling], axis: usize) -> Result<Tiling> {
    let first = parts
        .first()
        .ok_or_else(|| Error::ShapeMismatch("nothing to stack".into()))?;
    let dim = first.dim();
    if axis >= dim {
        return Err(Error::ShapeMismatch(format!(
            "axis {axis} out of range for dimension {dim}"
        )));
    }
    let mut length = 0u64;
    for part in parts {
        if part.dim() != dim {
            return Err(Error::ShapeMismatch("parts differ in dimension".into()));
        }
        if part.bricks != first.bricks || part.rotation_policy != first.rotation_policy {
            return Err(Error::ShapeMismatch(
                "parts use different brick lists".into(),
            ));
        }
        let same_cross_section = (0..dim)
            .filter(|&j| j != axis)
            .all(|j| part.box_shape.sides()[j] == first.box_shape.sides()[j]);
        if !same_cross_section {
            return Err(Error::ShapeMismatch(format!(
                "{:?} and {:?} differ off axis {axis}",
                part.box_shape.sides(),
                first.box_shape.sides()
            )));
        }
        length = length
            .checked_add(part.box_shape.sides()[axis])
            .ok_or(Error::Overflow)?;
    }

    let mut sides = first.box_shape.sides().to_vec();
    sides[axis] = length;
    let mut out = Tiling::new(
        BoxShape::new(sides)?,
        first.bricks.clone(),
        first.rotation_policy,
    );
    out.placements
        .reserve(parts.iter().map(|p| p.placements.len()).sum());
    let mut offset = 0u64;
    for part in parts {
        for p in &part.placements {
            let mut q = p.clone();
            q.origin[axis] += offset;
            out.placements.push(q);
        }
        offset += part.box_shape.sides()[axis];
    }
    out.sort_placements();
    Ok(out)
}

/// Places each part at its offset inside `box_shape`. Parts must share the
/// given brick list and fit; coverage is not checked.
pub fn assemble(
    box_shape: BoxShape,
    bricks: Vec<Brick>,
    policy: RotationPolicy,
    parts: &[(&Tiling, Coords)],
) -> Result<Tiling> {
    let dim = box_shape.dim();
    let mut out = Tiling::new(box_shape, bricks, policy);
    for (part, offset) in parts {
        if part.bricks != out.bricks {
            return Err(Error::ShapeMismatch(
                "part uses a different brick list".into(),
            ));
        }
        if part.dim() != dim || offset.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: part.dim(),
            });
        }
        let fits =
            (0..dim).all(|j| offset[j] + part.box_shape.sides()[j] <= out.box_shape.sides()[j]);
        if !fits {
            return Err(Error::ShapeMismatch(format!(
                "part {:?} at {:?} leaves the box",
                part.box_shape.sides(),
                offset.as_slice()
            )));
        }
        for p in &part.placements {
            let mut q = p.clone();
            for (o, d) in q.origin.iter_mut().zip(offset) {
                *o += d;
            }
            out.placements.push(q);
        }
    }
    out.sort_placements();
    Ok(out)
}

/// Relabels axes: new axis `j` is old axis `perm[j]`.
///
/// A placement whose rotated shape coincides with its upright shape (a
/// cube, say) keeps the identity orientation.
pub fn permute_axes(t: &Tiling, perm: &[usize]) -> Result<Tiling> {
    let dim = t.dim();
    let perm8: Vec<u8> = perm.iter().map(|&a| a as u8).collect();
    if perm.iter().any(|&a| a > u8::MAX as usize) || !super::is_permutation(&perm8, dim) {
        return Err(Error::PreconditionViolated(format!(
            "{perm:?} is not a permutation of {dim} axes"
        )));
    }
    let sides: Vec<u64> = perm.iter().map(|&a| t.box_shape.sides()[a]).collect();
    let mut out = Tiling::new(BoxShape::new(sides)?, t.bricks.clone(), t.rotation_policy);
    let identity = identity_orientation(dim);
    for p in &t.placements {
        let origin: Coords = perm.iter().map(|&a| p.origin[a]).collect();
        let mut orientation: SmallVec<[u8; 4]> = perm.iter().map(|&a| p.orientation[a]).collect();
        if let Some(brick) = t.bricks.get(p.brick) {
            if brick.oriented(&orientation) == brick.oriented(&identity) {
                orientation = identity.clone();
            }
        }
        out.placements
            .push(Placement::new(p.brick, orientation, origin));
    }
    out.sort_placements();
    Ok(out)
}
