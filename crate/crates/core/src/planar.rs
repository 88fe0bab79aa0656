//! Rectangles and squares in the plane.
//!
//! Exact criteria for a single rectangular brick and for two coprime
//! squares, the three-brick threshold for `(p×q), (r×s), (s×r)`, the
//! prime-squares front end to the general constructor, and the complete
//! decision procedure for squares tiled by `2×2`, `3×3` and `p×p`.

use serde::{Deserialize, Serialize};

use crate::constructor::{construct_box, gn_bound, BrickSystem};
use crate::error::{Error, Result};
use crate::model::{
    assemble, decode, encode, grid_fill_oriented, identity_orientation, BoxShape, Brick, Coords,
    Orientation, RotationPolicy, Tiling,
};
use crate::oracle::{exact_cover_search, SearchConfig, SearchOutcome};
use crate::semigroup::{closed_form_primes, frobenius_pair, gcd, gcd_all};

/// Outcome of a tileability decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub tileable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Tiling>,
    /// Which branch of the criterion settled the question.
    pub reason: String,
}

impl Decision {
    fn yes(witness: Tiling, reason: &str) -> Self {
        Decision {
            tileable: true,
            witness: Some(witness),
            reason: reason.to_string(),
        }
    }

    fn no(reason: &str) -> Self {
        Decision {
            tileable: false,
            witness: None,
            reason: reason.to_string(),
        }
    }
}

/// Writes `total = u*x + v*y` with the fewest `y`s, if possible.
fn split2(total: u64, x: u64, y: u64) -> Option<(u64, u64)> {
    (0..x.min(total / y + 1)).find_map(|v| {
        let rest = total - v * y;
        rest.is_multiple_of(x).then(|| (rest / x, v))
    })
}

fn square(side: u64) -> Brick {
    Brick::new(vec![side, side]).expect("positive side")
}

fn rect(a1: u64, a2: u64) -> Result<BoxShape> {
    BoxShape::new(vec![a1, a2])
}

fn swapped() -> Orientation {
    Orientation::from_slice(&[1, 0])
}

/// One band of a strip decomposition: `len` cells thick along the split
/// axis, filled by a grid of `brick` in `orientation`.
struct Band {
    brick: usize,
    orientation: Orientation,
    len: u64,
}

/// Cuts `a1 × a2` along `axis` into consecutive bands.
fn strips(
    a1: u64,
    a2: u64,
    axis: usize,
    bands: &[Band],
    bricks: &[Brick],
    policy: RotationPolicy,
) -> Result<Tiling> {
    let mut parts = Vec::new();
    let mut at = 0;
    for band in bands.iter().filter(|b| b.len > 0) {
        let shape = if axis == 0 {
            rect(band.len, a2)?
        } else {
            rect(a1, band.len)?
        };
        let part = grid_fill_oriented(
            &shape,
            bricks.to_vec(),
            band.brick,
            &band.orientation,
            policy,
        )?;
        let mut offset = Coords::from_slice(&[0, 0]);
        offset[axis] = at;
        parts.push((part, offset));
        at += band.len;
    }
    let refs: Vec<(&Tiling, Coords)> = parts.iter().map(|(t, o)| (t, o.clone())).collect();
    assemble(rect(a1, a2)?, bricks.to_vec(), policy, &refs)
}

fn positive(values: &[u64]) -> Result<()> {
    if values.contains(&0) {
        return Err(Error::PreconditionViolated(
            "all sides must be positive".into(),
        ));
    }
    Ok(())
}

/// Whether `a1 × a2` can be tiled by `x1 × x2` with rotations allowed.
///
/// Holds iff each brick side divides a box side and both box sides are
/// nonnegative combinations of the brick sides. The witness is a grid when
/// one orientation divides the box outright, otherwise bands of the two
/// orientations across the side that needs the combination.
pub fn decide_single_brick(a1: u64, a2: u64, x1: u64, x2: u64) -> Result<Decision> {
    positive(&[a1, a2, x1, x2])?;
    let policy = RotationPolicy::AxisPermutations;
    let bricks = vec![Brick::new(vec![x1, x2])?];
    let upright = identity_orientation(2);

    if a1.is_multiple_of(x1) && a2.is_multiple_of(x2) {
        let t = grid_fill_oriented(&rect(a1, a2)?, bricks, 0, &upright, policy)?;
        return Ok(Decision::yes(t, "grid"));
    }
    if a1.is_multiple_of(x2) && a2.is_multiple_of(x1) {
        let t = grid_fill_oriented(&rect(a1, a2)?, bricks, 0, &swapped(), policy)?;
        return Ok(Decision::yes(t, "grid-rotated"));
    }
    if (!a1.is_multiple_of(x1) && !a2.is_multiple_of(x1))
        || (!a1.is_multiple_of(x2) && !a2.is_multiple_of(x2))
    {
        return Ok(Decision::no("brick-side-divides-no-box-side"));
    }
    // Both brick sides divide the same box side; cut the other one.
    let axis = if a1.is_multiple_of(x1) && a1.is_multiple_of(x2) {
        1
    } else {
        0
    };
    let other = if axis == 1 { a2 } else { a1 };
    let Some((u, v)) = split2(other, x1, x2) else {
        return Ok(Decision::no("side-not-representable"));
    };
    // A band of thickness x1 along `axis` needs x1 on that axis.
    let (thick_x1, thick_x2) = if axis == 0 {
        (upright.clone(), swapped())
    } else {
        (swapped(), upright)
    };
    let bands = [
        Band {
            brick: 0,
            orientation: thick_x1,
            len: u * x1,
        },
        Band {
            brick: 0,
            orientation: thick_x2,
            len: v * x2,
        },
    ];
    let t = strips(a1, a2, axis, &bands, &bricks, policy)?;
    Ok(Decision::yes(t, "strips"))
}

/// Whether `a1 × a2` can be tiled by `x × x` and `y × y` for coprime `x, y`.
pub fn decide_two_squares(a1: u64, a2: u64, x: u64, y: u64) -> Result<Decision> {
    positive(&[a1, a2, x, y])?;
    let d = gcd(x, y);
    if d != 1 {
        return Err(Error::NonCoprime { gcd: d });
    }
    let policy = RotationPolicy::Fixed;
    let bricks = vec![square(x), square(y)];
    let upright = identity_orientation(2);
    let shape = rect(a1, a2)?;

    for (i, s) in [x, y].into_iter().enumerate() {
        if a1.is_multiple_of(s) && a2.is_multiple_of(s) {
            let t = grid_fill_oriented(&shape, bricks, i, &upright, policy)?;
            return Ok(Decision::yes(t, "grid"));
        }
    }
    // One side a multiple of x*y, the other cut into x- and y-bands.
    for (axis, full, other) in [(1, a1, a2), (0, a2, a1)] {
        if full % (x * y) != 0 {
            continue;
        }
        if let Some((u, v)) = split2(other, x, y) {
            let bands = [
                Band {
                    brick: 0,
                    orientation: upright.clone(),
                    len: u * x,
                },
                Band {
                    brick: 1,
                    orientation: upright.clone(),
                    len: v * y,
                },
            ];
            let t = strips(a1, a2, axis, &bands, &bricks, policy)?;
            return Ok(Decision::yes(t, "strips"));
        }
    }
    Ok(Decision::no("no-criterion-branch-applies"))
}

fn check_corollary1(p: u64, q: u64, r: u64, s: u64) -> Result<()> {
    if [p, q, r, s].iter().any(|&v| v < 2) {
        return Err(Error::PreconditionViolated(
            "p, q, r, s must all be at least 2".into(),
        ));
    }
    if r >= s {
        return Err(Error::PreconditionViolated(format!(
            "need r < s, got r = {r}, s = {s}"
        )));
    }
    for (name, a, b) in [("p, r", p, r), ("p, s", p, s), ("r, s", r, s)] {
        if gcd(a, b) != 1 {
            return Err(Error::PreconditionViolated(format!(
                "gcd({name}) = {} is not 1",
                gcd(a, b)
            )));
        }
    }
    let d = gcd_all(&[q * s, q * r, r * s]);
    if d != 1 {
        return Err(Error::PreconditionViolated(format!(
            "gcd(qs, qr, rs) = {d} is not 1"
        )));
    }
    Ok(())
}

/// Smallest side from which every `a1 × a2` box is tiled by `(p×q)`,
/// `(r×s)` and `(s×r)` through the general construction.
///
/// This is one more than the largest of `g(p,r)`, `g(p,s)`, `g(r,s)` and
/// `g(qs,qr,rs) = 2qrs - (qr+qs+rs)`. For `(6,4,5,7)` it is 198, well below
/// the 2214 known before.
pub fn corollary1_threshold(p: u64, q: u64, r: u64, s: u64) -> Result<u64> {
    check_corollary1(p, q, r, s)?;
    let qrs = q
        .checked_mul(r)
        .and_then(|v| v.checked_mul(s))
        .and_then(|v| v.checked_mul(2))
        .ok_or(Error::Overflow)?;
    // q, r, s are pairwise coprime here, so the triple formula applies
    let triple = qrs - (q * r + q * s + r * s);
    let g = [
        frobenius_pair(p, r)?,
        frobenius_pair(p, s)?,
        frobenius_pair(r, s)?,
        triple,
    ]
    .into_iter()
    .max()
    .expect("non-empty");
    Ok(g + 1)
}

fn corollary1_system(p: u64, q: u64, r: u64, s: u64) -> Result<BrickSystem> {
    BrickSystem::new(vec![
        Brick::new(vec![p, q])?,
        Brick::new(vec![r, s])?,
        Brick::new(vec![s, r])?,
    ])
}

/// Tiles `a1 × a2` by `(p×q)`, `(r×s)` and `(s×r)`, all fixed.
pub fn corollary1_construct(a1: u64, a2: u64, p: u64, q: u64, r: u64, s: u64) -> Result<Tiling> {
    let threshold = corollary1_threshold(p, q, r, s)?;
    for (axis, side) in [a1, a2].into_iter().enumerate() {
        if side < threshold {
            return Err(Error::BoundNotMet {
                axis,
                required: threshold - 1,
                got: side,
            });
        }
    }
    construct_box(&rect(a1, a2)?, &corollary1_system(p, q, r, s)?)
}

/// Sides above this value make the `n`-cube tileable by the `p_i`-cubes.
pub fn prime_cubes_bound(primes: &[u64]) -> Result<u64> {
    closed_form_primes(primes)
}

/// The `n`-cube of side `a` tiled by cubes of the `n + 1` given primes.
pub fn prime_cubes_construct(a: u64, primes: &[u64]) -> Result<Tiling> {
    let bound = prime_cubes_bound(primes)?;
    if a <= bound {
        return Err(Error::BoundNotMet {
            axis: 0,
            required: bound,
            got: a,
        });
    }
    let sys = BrickSystem::hypercubes(primes)?;
    debug_assert_eq!(gn_bound(&sys).ok(), Some(bound));
    construct_box(&BoxShape::new(vec![a; primes.len() - 1])?, &sys)
}

struct Squares {
    bricks: Vec<Brick>,
    a: u64,
    b: u64,
    c: u64,
}

impl Squares {
    fn new(a: u64, b: u64, c: u64) -> Self {
        Squares {
            bricks: vec![square(a), square(b), square(c)],
            a,
            b,
            c,
        }
    }

    fn grid(&self, a1: u64, a2: u64, brick: usize) -> Result<Tiling> {
        grid_fill_oriented(
            &rect(a1, a2)?,
            self.bricks.clone(),
            brick,
            &identity_orientation(2),
            RotationPolicy::Fixed,
        )
    }

    /// `a1 × a2` cut along `axis` into bands `(brick, thickness)`.
    fn bands(&self, a1: u64, a2: u64, axis: usize, bands: &[(usize, u64)]) -> Result<Tiling> {
        let bands: Vec<Band> = bands
            .iter()
            .map(|&(brick, len)| Band {
                brick,
                orientation: identity_orientation(2),
                len,
            })
            .collect();
        strips(a1, a2, axis, &bands, &self.bricks, RotationPolicy::Fixed)
    }

    /// Square of side `u + v` from blocks `[u×u] [u×v] / [v×u] [v×v]`.
    fn blocks(&self, u: u64, v: u64, blocks: [Tiling; 4]) -> Result<Tiling> {
        let [uu, uv, vu, vv] = blocks;
        let at = |x: u64, y: u64| Coords::from_slice(&[x, y]);
        assemble(
            rect(u + v, u + v)?,
            self.bricks.clone(),
            RotationPolicy::Fixed,
            &[
                (&uu, at(0, 0)),
                (&uv, at(0, u)),
                (&vu, at(u, 0)),
                (&vv, at(u, u)),
            ],
        )
    }

    /// `(r + ac)²`: `ac × ac` by `a`, `r × r` by `b`, and the two
    /// `ac × r` rectangles as bands of `a` and `c`.
    fn first(&self, r: u64) -> Result<Tiling> {
        let (a, c) = (self.a, self.c);
        let Some((x1, x2)) = split2(r, a, c) else {
            return Err(Error::PreconditionViolated(format!(
                "{r} is not a combination of {a} and {c}"
            )));
        };
        let u = a * c;
        let bands = [(0, x1 * a), (2, x2 * c)];
        self.blocks(
            u,
            r,
            [
                self.grid(u, u, 0)?,
                self.bands(u, r, 1, &bands)?,
                self.bands(r, u, 0, &bands)?,
                self.grid(r, r, 1)?,
            ],
        )
    }

    /// `(Lc + kab)²`: `Lc × Lc` by `c`, `kab × kab` by `a`, and the two
    /// `Lc × kab` rectangles as bands of `a` and `b`.
    fn second(&self, l: u64, k: u64) -> Result<Tiling> {
        let (a, b, c) = (self.a, self.b, self.c);
        let u = l * c;
        let Some((y1, y2)) = split2(u, a, b) else {
            return Err(Error::PreconditionViolated(format!(
                "{u} is not a combination of {a} and {b}"
            )));
        };
        let v = k * a * b;
        let bands = [(0, y1 * a), (1, y2 * b)];
        self.blocks(
            u,
            v,
            [
                self.grid(u, u, 2)?,
                self.bands(u, v, 0, &bands)?,
                self.bands(v, u, 1, &bands)?,
                self.grid(v, v, 0)?,
            ],
        )
    }
}

/// The two squares of sides `r + ac` and `Lc + kab`, tiled by `a × a`,
/// `b × b` and `c × c`.
///
/// Requires `b | r`, `r` a combination of `a` and `c`, `Lc` a combination
/// of `a` and `b`, and `k ≥ 1`.
pub fn compose_squares(a: u64, b: u64, c: u64, r: u64, l: u64, k: u64) -> Result<(Tiling, Tiling)> {
    positive(&[a, b, c, r, l, k])?;
    if !r.is_multiple_of(b) {
        return Err(Error::PreconditionViolated(format!(
            "{b} does not divide r = {r}"
        )));
    }
    let side = |x: u64, y: u64, z: u64| {
        x.checked_mul(y)
            .and_then(|v| v.checked_mul(z))
            .ok_or(Error::Overflow)
    };
    side(a, c, 1)?.checked_add(r).ok_or(Error::Overflow)?;
    side(k, a, b)?
        .checked_add(side(l, c, 1)?)
        .ok_or(Error::Overflow)?;
    let sq = Squares::new(a, b, c);
    Ok((sq.first(r)?, sq.second(l, k)?))
}

const FIXTURE_13_5: &str = include_str!("../fixtures/square_13_p5.json");
const FIXTURE_17_7: &str = include_str!("../fixtures/square_17_p7.json");

/// Stored oracle tilings for the squares the compositions miss.
pub fn stored_square(a: u64, p: u64) -> Option<Tiling> {
    let text = match (a, p) {
        (13, 5) => FIXTURE_13_5,
        (17, 7) => FIXTURE_17_7,
        _ => return None,
    };
    Some(decode(text).expect("stored fixture decodes"))
}

/// Side lengths of the stored squares, as `(a, p)`.
pub const STORED_SQUARES: [(u64, u64); 2] = [(13, 5), (17, 7)];

/// Reruns the oracle for a stored square and returns the serialization
/// the fixture file should hold.
pub fn regenerate_stored_square(a: u64, p: u64) -> Result<String> {
    let bricks = vec![square(2), square(3), square(p)];
    match exact_cover_search(&rect(a, a)?, &bricks, &SearchConfig::default())? {
        SearchOutcome::Found(t) => Ok(encode(&t)),
        SearchOutcome::Infeasible => Err(Error::PreconditionViolated(format!(
            "{a} x {a} has no tiling by 2, 3 and {p}"
        ))),
        SearchOutcome::Exhausted => Err(Error::SearchExhausted),
    }
}

/// Squares proven untileable by the oracle for the two smallest `p`.
fn known_obstruction(a: u64, p: u64) -> bool {
    match p {
        5 => [1, 7].contains(&a),
        7 => [1, 5, 11].contains(&a),
        _ => false,
    }
}

fn check_235p(a: u64, p: u64) -> Result<()> {
    if a == 0 {
        return Err(Error::PreconditionViolated("a must be positive".into()));
    }
    if p.is_multiple_of(2) || p <= 4 || p.is_multiple_of(3) {
        return Err(Error::PreconditionViolated(format!(
            "p must be odd, greater than 4 and prime to 3, got {p}"
        )));
    }
    Ok(())
}

/// Whether the `a × a` square can be tiled by `2×2`, `3×3` and `p×p`.
///
/// Branches, cheapest first: a grid of one brick; `a < p`, where only the
/// two small squares fit; the compositions `s + 2p` with `3 | s` and
/// `Lp + 6k`; stored tilings and known obstructions for `p = 5, 7`; the
/// oracle for anything left, which only happens below `3p + 2`.
pub fn tile_square_235p(a: u64, p: u64) -> Result<Decision> {
    check_235p(a, p)?;
    let sq = Squares::new(2, 3, p);
    for (i, side) in [2, 3, p].into_iter().enumerate() {
        if a.is_multiple_of(side) {
            return Ok(Decision::yes(sq.grid(a, a, i)?, "grid"));
        }
    }
    if a < p {
        return Ok(Decision::no("two-squares-criterion"));
    }
    if a > 2 * p {
        let s = a - 2 * p;
        if s.is_multiple_of(3) && split2(s, 2, p).is_some() {
            return Ok(Decision::yes(sq.first(s)?, "composition-first"));
        }
    }
    for k in 1..=a / 6 {
        let rest = a - 6 * k;
        if rest > 0 && rest.is_multiple_of(p) {
            return Ok(Decision::yes(sq.second(rest / p, k)?, "composition-second"));
        }
    }
    if let Some(t) = stored_square(a, p) {
        return Ok(Decision::yes(t, "stored"));
    }
    if known_obstruction(a, p) {
        return Ok(Decision::no("known-obstruction"));
    }
    match exact_cover_search(&rect(a, a)?, &sq.bricks, &SearchConfig::default())? {
        SearchOutcome::Found(t) => Ok(Decision::yes(t, "oracle")),
        SearchOutcome::Infeasible => Ok(Decision::no("oracle-infeasible")),
        SearchOutcome::Exhausted => Err(Error::SearchExhausted),
    }
}
