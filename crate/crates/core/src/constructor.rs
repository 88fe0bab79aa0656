//! Explicit tilings of large boxes by `n + 1` bricks in dimension `n`.
//!
//! For a subset of `k + 1` bricks, the generator set `X_k` collects, for
//! each brick in the subset, the product of the other bricks' sides along
//! axis `k`. When every such set has gcd 1 (the system is *admissible*),
//! any box whose sides all exceed the largest Frobenius number `g_n` among
//! these sets can be tiled:
//!
//! * in one dimension, write the length as a combination of the two brick
//!   lengths and lay the segments end to end;
//! * in dimension `m`, for each brick `j` of the current subset, tile the
//!   `(m-1)`-dimensional cross-section with the other bricks and extrude
//!   every copy along axis `m` up to the product of their `m`-th sides.
//!   That slab has height `X_m`'s generator for `j`; write the last side as
//!   a combination of those heights and stack the slabs.

use std::collections::HashMap;
use std::rc::Rc;

use itertools::Itertools;
use smallvec::smallvec;

use crate::error::{Error, Result};
use crate::model::{extrude, stack_refs, BoxShape, Brick, Placement, RotationPolicy, Tiling};
use crate::semigroup::{frobenius_general, gcd_all, represent, GeneratorSet};

/// `n + 1` bricks of dimension `n`, every side at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickSystem {
    bricks: Vec<Brick>,
}

impl BrickSystem {
    pub fn new(bricks: Vec<Brick>) -> Result<Self> {
        let n = bricks.first().map(Brick::dim).unwrap_or(0);
        if n == 0 || bricks.len() != n + 1 {
            return Err(Error::PreconditionViolated(format!(
                "a system in dimension {n} needs {} bricks, got {}",
                n + 1,
                bricks.len()
            )));
        }
        if let Some(b) = bricks.iter().find(|b| b.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.dim(),
            });
        }
        if bricks.iter().any(|b| b.sides().iter().any(|&s| s < 2)) {
            return Err(Error::PreconditionViolated(
                "every brick side must be >= 2".into(),
            ));
        }
        Ok(BrickSystem { bricks })
    }

    /// Brick `i` is the `n`-cube of side `primes[i]`, `n = primes.len() - 1`.
    pub fn hypercubes(sides: &[u64]) -> Result<Self> {
        if sides.len() < 2 {
            return Err(Error::PreconditionViolated(
                "need at least two cube sides".into(),
            ));
        }
        let n = sides.len() - 1;
        let bricks = sides
            .iter()
            .map(|&p| Brick::cube(p, n))
            .collect::<Result<Vec<_>>>()?;
        BrickSystem::new(bricks)
    }

    pub fn dim(&self) -> usize {
        self.bricks.len() - 1
    }

    pub fn bricks(&self) -> &[Brick] {
        &self.bricks
    }

    /// All `(k, subset)` pairs the admissibility condition ranges over, in
    /// increasing `k` and lexicographic subset order.
    pub fn index_sets(&self) -> impl Iterator<Item = (usize, Vec<usize>)> + '_ {
        let n = self.dim();
        (1..=n).flat_map(move |k| (0..=n).combinations(k + 1).map(move |s| (k, s)))
    }
}

/// The generators of `X_k(subset)`: for each brick in `subset`, the
/// product of the other members' sides on axis `k` (1-based).
pub fn xk_generators(sys: &BrickSystem, k: usize, subset: &[usize]) -> Result<GeneratorSet> {
    let n = sys.dim();
    if k == 0 || k > n {
        return Err(Error::PreconditionViolated(format!(
            "axis {k} outside 1..={n}"
        )));
    }
    if subset.len() != k + 1 || subset.iter().any(|&i| i > n) || !subset.iter().all_unique() {
        return Err(Error::PreconditionViolated(format!(
            "X_{k} needs {} distinct brick indices, got {subset:?}",
            k + 1
        )));
    }
    let sides: Vec<u64> = subset
        .iter()
        .map(|&i| sys.bricks[i].sides()[k - 1])
        .collect();
    let gens = (0..sides.len())
        .map(|skip| {
            sides
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .try_fold(1u64, |acc, (_, &s)| acc.checked_mul(s))
                .ok_or(Error::Overflow)
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(gens)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityReport {
    Valid,
    /// First `X_k(subset)` whose gcd is not 1.
    Fails {
        k: usize,
        subset: Vec<usize>,
        gcd: u64,
    },
}

impl AdmissibilityReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, AdmissibilityReport::Valid)
    }

    fn into_result(self) -> Result<()> {
        match self {
            AdmissibilityReport::Valid => Ok(()),
            AdmissibilityReport::Fails { k, subset, gcd } => {
                Err(Error::NotAdmissible { k, subset, gcd })
            }
        }
    }
}

pub fn check_admissible(sys: &BrickSystem) -> AdmissibilityReport {
    for (k, subset) in sys.index_sets() {
        match xk_generators(sys, k, &subset) {
            Ok(set) if set.gcd() == 1 => {}
            Ok(set) => {
                return AdmissibilityReport::Fails {
                    k,
                    subset,
                    gcd: set.gcd(),
                }
            }
            // an overflowing product cannot be checked; report it as gcd 0
            Err(_) => return AdmissibilityReport::Fails { k, subset, gcd: 0 },
        }
    }
    AdmissibilityReport::Valid
}

/// `g_n`: the largest Frobenius number over every `X_k(subset)`.
pub fn gn_bound(sys: &BrickSystem) -> Result<u64> {
    check_admissible(sys).into_result()?;
    let mut best = 0;
    for (k, subset) in sys.index_sets() {
        best = best.max(frobenius_general(&xk_generators(sys, k, &subset)?)?);
    }
    Ok(best)
}

/// A fixed-orientation tiling of `box_shape` by the system's bricks.
///
/// Every side of the box must exceed [`gn_bound`].
pub fn construct_box(box_shape: &BoxShape, sys: &BrickSystem) -> Result<Tiling> {
    let n = sys.dim();
    if box_shape.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: box_shape.dim(),
        });
    }
    let bound = gn_bound(sys)?;
    for (axis, &side) in box_shape.sides().iter().enumerate() {
        if side <= bound {
            return Err(Error::BoundNotMet {
                axis,
                required: bound,
                got: side,
            });
        }
    }
    let mut builder = Builder {
        sides: box_shape.sides(),
        levels: (1..=n)
            .map(|m| sys.bricks.iter().map(|b| b.truncate(m)).collect())
            .collect(),
        memo: HashMap::new(),
    };
    let all: Vec<usize> = (0..=n).collect();
    let tiling = builder.build(&all)?;
    drop(builder);
    Ok(Rc::try_unwrap(tiling).unwrap_or_else(|rc| (*rc).clone()))
}

struct Builder<'a> {
    sides: &'a [u64],
    /// `levels[m - 1]`: every brick truncated to its first `m` axes.
    levels: Vec<Vec<Brick>>,
    /// Sub-tilings keyed by brick subset; the subset size fixes the level.
    memo: HashMap<Vec<usize>, Rc<Tiling>>,
}

impl Builder<'_> {
    /// Tiles the first `subset.len() - 1` axes of the box with `subset`.
    fn build(&mut self, subset: &[usize]) -> Result<Rc<Tiling>> {
        if let Some(t) = self.memo.get(subset) {
            return Ok(Rc::clone(t));
        }
        let m = subset.len() - 1;
        let bricks = self.levels[m - 1].clone();
        let target = self.sides[m - 1];
        let heights: Vec<u64> = subset
            .iter()
            .map(|&j| {
                subset
                    .iter()
                    .filter(|&&i| i != j)
                    .try_fold(1u64, |acc, &i| acc.checked_mul(bricks[i].sides()[m - 1]))
                    .ok_or(Error::Overflow)
            })
            .collect::<Result<_>>()?;
        let weights = weights_for(target, &heights)?;

        let tiling = if m == 1 {
            let mut t = Tiling::new(
                BoxShape::new(vec![target])?,
                bricks.clone(),
                RotationPolicy::Fixed,
            );
            // in 1-D the slab omitting one brick is a single copy of the
            // other; lay segments in ascending brick order
            let mut at = 0u64;
            for (pos, &w) in weights.iter().enumerate().rev() {
                let brick = subset[1 - pos];
                let len = bricks[brick].sides()[0];
                for _ in 0..w {
                    t.placements.push(Placement::upright(brick, smallvec![at]));
                    at += len;
                }
            }
            t
        } else {
            let mut slabs = Vec::with_capacity(subset.len());
            for (pos, &w) in weights.iter().enumerate() {
                if w == 0 {
                    slabs.push(None);
                    continue;
                }
                let rest: Vec<usize> = subset
                    .iter()
                    .copied()
                    .filter(|&i| i != subset[pos])
                    .collect();
                let base = self.build(&rest)?;
                slabs.push(Some(extrude(&base, &bricks, heights[pos])?));
            }
            let parts: Vec<&Tiling> = slabs
                .iter()
                .zip(&weights)
                .filter_map(|(s, &w)| s.as_ref().map(|s| (s, w)))
                .flat_map(|(s, w)| std::iter::repeat_n(s, w as usize))
                .collect();
            stack_refs(&parts, m - 1)?
        };
        let tiling = Rc::new(tiling);
        self.memo.insert(subset.to_vec(), Rc::clone(&tiling));
        Ok(tiling)
    }
}

/// Coefficients of `target` over `heights` (positionally); equal heights
/// pool their coefficient on the first occurrence.
fn weights_for(target: u64, heights: &[u64]) -> Result<Vec<u64>> {
    let set = GeneratorSet::new(heights.iter().copied())?;
    debug_assert_eq!(gcd_all(set.generators()), 1);
    let rep = represent(target, &set)?.ok_or(Error::Unrepresentable { target })?;
    let mut weights = vec![0u64; heights.len()];
    for (&value, &c) in set.generators().iter().zip(&rep.coefficients) {
        let pos = heights.iter().position(|&h| h == value).unwrap();
        weights[pos] = c;
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{verify_full, verify_sampled};
    use crate::semigroup::gcd;
    use proptest::prelude::*;

    fn br(s: &[u64]) -> Brick {
        Brick::new(s.to_vec()).unwrap()
    }

    fn three_brick_system() -> BrickSystem {
        BrickSystem::new(vec![br(&[6, 4]), br(&[5, 7]), br(&[7, 5])]).unwrap()
    }

    #[test]
    fn xk_examples() {
        let sys = three_brick_system();
        assert_eq!(
            xk_generators(&sys, 2, &[0, 1, 2]).unwrap().generators(),
            &[20, 28, 35]
        );
        assert_eq!(
            xk_generators(&sys, 1, &[0, 1]).unwrap().generators(),
            &[5, 6]
        );
        let squares = BrickSystem::hypercubes(&[2, 3, 5]).unwrap();
        assert_eq!(
            xk_generators(&squares, 2, &[0, 1, 2]).unwrap().generators(),
            &[6, 10, 15]
        );
        assert!(xk_generators(&sys, 2, &[0, 1]).is_err());
        assert!(xk_generators(&sys, 3, &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn admissibility_examples() {
        assert!(check_admissible(&three_brick_system()).is_valid());
        let bad = BrickSystem::hypercubes(&[2, 4, 3]).unwrap();
        assert_eq!(
            check_admissible(&bad),
            AdmissibilityReport::Fails {
                k: 1,
                subset: vec![0, 1],
                gcd: 2
            }
        );
        let line = BrickSystem::new(vec![br(&[4]), br(&[9])]).unwrap();
        assert!(check_admissible(&line).is_valid());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(gn_bound(&three_brick_system()).unwrap(), 197);
        assert_eq!(
            gn_bound(&BrickSystem::hypercubes(&[2, 3, 5]).unwrap()).unwrap(),
            29
        );
        let line = BrickSystem::new(vec![br(&[5]), br(&[7])]).unwrap();
        assert_eq!(gn_bound(&line).unwrap(), 23);
        let bad = BrickSystem::hypercubes(&[2, 4, 3]).unwrap();
        assert!(matches!(gn_bound(&bad), Err(Error::NotAdmissible { .. })));
    }

    #[test]
    fn system_shape_is_checked() {
        assert!(BrickSystem::new(vec![br(&[2, 3]), br(&[3, 2])]).is_err());
        assert!(BrickSystem::new(vec![br(&[2]), br(&[1])]).is_err());
        assert!(BrickSystem::new(vec![br(&[2, 3]), br(&[3]), br(&[5, 7])]).is_err());
    }

    #[test]
    fn one_dimensional_segments() {
        let line = BrickSystem::new(vec![br(&[5]), br(&[7])]).unwrap();
        let t = construct_box(&BoxShape::new(vec![24]).unwrap(), &line).unwrap();
        let lens: Vec<u64> = t
            .placements
            .iter()
            .map(|p| t.bricks[p.brick].sides()[0])
            .collect();
        assert_eq!(lens, vec![5, 5, 7, 7]);
        assert!(verify_full(&t).is_valid());
    }

    #[test]
    fn three_brick_box() {
        let t = construct_box(
            &BoxShape::new(vec![198, 198]).unwrap(),
            &three_brick_system(),
        )
        .unwrap();
        assert!(verify_full(&t).is_valid());
        assert_eq!(t.bricks, three_brick_system().bricks().to_vec());
        assert!(t
            .placements
            .iter()
            .all(|p| p.orientation.as_slice() == [0, 1]));
    }

    #[test]
    fn prime_squares_box() {
        let sys = BrickSystem::hypercubes(&[2, 3, 5]).unwrap();
        let t = construct_box(&BoxShape::new(vec![30, 30]).unwrap(), &sys).unwrap();
        assert!(verify_full(&t).is_valid());
    }

    #[test]
    fn bound_is_strict() {
        let sys = BrickSystem::hypercubes(&[2, 3, 5]).unwrap();
        assert_eq!(
            construct_box(&BoxShape::new(vec![30, 29]).unwrap(), &sys),
            Err(Error::BoundNotMet {
                axis: 1,
                required: 29,
                got: 29
            })
        );
        assert!(matches!(
            construct_box(&BoxShape::new(vec![30]).unwrap(), &sys),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inadmissible_system_never_constructs() {
        let bad = BrickSystem::hypercubes(&[2, 4, 3]).unwrap();
        assert!(matches!(
            construct_box(&BoxShape::new(vec![500, 500]).unwrap(), &bad),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn three_dimensional_small_system() {
        let sys = BrickSystem::new(vec![
            br(&[2, 3, 2]),
            br(&[3, 2, 3]),
            br(&[5, 5, 5]),
            br(&[7, 7, 7]),
        ])
        .unwrap();
        let side = gn_bound(&sys).unwrap() + 1;
        let t = construct_box(
            &BoxShape::new(vec![side, side + 2, side + 1]).unwrap(),
            &sys,
        )
        .unwrap();
        assert!(verify_sampled(&t, 20_000, 3).is_valid());
        assert!(verify_full(&t).is_valid());
    }

    /// Enumerates subsets by bitmask rather than by `combinations`.
    fn bound_by_bitmask(sys: &BrickSystem) -> u64 {
        let n = sys.dim();
        let mut best = 0;
        for mask in 1u32..(1 << (n + 1)) {
            let members: Vec<usize> = (0..=n).filter(|&i| mask & (1 << i) != 0).collect();
            if members.len() < 2 {
                continue;
            }
            let k = members.len() - 1;
            let sides: Vec<u64> = members
                .iter()
                .map(|&i| sys.bricks()[i].sides()[k - 1])
                .collect();
            let product: u64 = sides.iter().product();
            let gens = GeneratorSet::new(sides.iter().map(|&s| product / s)).unwrap();
            best = best.max(frobenius_general(&gens).unwrap());
        }
        best
    }

    fn system_strategy(max_dim: usize) -> impl Strategy<Value = BrickSystem> {
        (1..=max_dim)
            .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(2u64..=12, n), n + 1))
            .prop_map(|raw| {
                BrickSystem::new(raw.into_iter().map(|s| Brick::new(s).unwrap()).collect()).unwrap()
            })
            .prop_filter("admissible", |s| check_admissible(s).is_valid())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bound_matches_independent_enumeration(sys in system_strategy(3)) {
            prop_assert_eq!(gn_bound(&sys).unwrap(), bound_by_bitmask(&sys));
        }

        #[test]
        fn construction_is_sound(sys in system_strategy(2), extra in prop::collection::vec(1u64..=5, 2)) {
            let g = gn_bound(&sys).unwrap();
            let sides: Vec<u64> = extra[..sys.dim()].iter().map(|e| g + e).collect();
            let t = construct_box(&BoxShape::new(sides).unwrap(), &sys).unwrap();
            prop_assert_eq!(&t.bricks, &sys.bricks().to_vec());
            prop_assert!(t.placements.iter().all(|p| p.orientation.iter().enumerate().all(|(j, &a)| a as usize == j)));
            prop_assert!(verify_full(&t).is_valid());
        }

        #[test]
        fn one_dimensional_matches_pair_formula(a in 2u64..40, b in 2u64..40) {
            prop_assume!(gcd(a, b) == 1);
            let sys = BrickSystem::new(vec![br(&[a]), br(&[b])]).unwrap();
            prop_assert_eq!(gn_bound(&sys).unwrap(), a * b - a - b);
        }
    }
}
