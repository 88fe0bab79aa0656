//! Acceptance suite: one line per criterion, each against a pinned time
//! budget. Exits nonzero if any criterion fails or runs over.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use frobtile_core::constructor::{gn_bound, BrickSystem};
use frobtile_core::model::{verify_full, verify_sampled, BoxShape, Brick, RotationPolicy, Tiling};
use frobtile_core::oracle::{exact_cover_search, threshold_scan, SearchConfig, SearchOutcome};
use frobtile_core::planar::{
    compose_squares, corollary1_construct, corollary1_threshold, decide_single_brick,
    decide_two_squares, prime_cubes_bound, prime_cubes_construct, tile_square_235p,
};
use frobtile_core::semigroup::{
    frobenius_general, frobenius_pair, gcd, gcd_all, prime_quotients, reduce_brauer_shockley,
    GeneratorSet,
};
use frobtile_core::Error;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Largest non-representable integer, found by scanning until `min(gens)`
/// consecutive representable values appear.
fn brute_frobenius(gens: &[u64]) -> u64 {
    let m = *gens.iter().min().unwrap() as usize;
    let mut ok = vec![true];
    let mut run = 0;
    let mut last_gap = 0;
    let mut n = 0usize;
    while run < m {
        n += 1;
        let here = gens.iter().any(|&g| g as usize <= n && ok[n - g as usize]);
        ok.push(here);
        if here {
            run += 1;
        } else {
            run = 0;
            last_gap = n;
        }
    }
    last_gap as u64
}

fn brute_representable(target: u64, gens: &[u64]) -> bool {
    let mut ok = vec![false; target as usize + 1];
    ok[0] = true;
    for n in 1..=target as usize {
        ok[n] = gens.iter().any(|&g| g as usize <= n && ok[n - g as usize]);
    }
    ok[target as usize]
}

fn square(s: u64) -> Brick {
    Brick::new(vec![s, s]).unwrap()
}

fn valid(t: &Tiling) -> Result<(), String> {
    let r = verify_full(t);
    ensure!(r.is_valid(), "{:?}: {r:?}", t.box_shape.sides());
    Ok(())
}

fn verdict(out: SearchOutcome) -> Result<bool, String> {
    match out {
        SearchOutcome::Found(t) => valid(&t).map(|_| true),
        SearchOutcome::Infeasible => Ok(false),
        SearchOutcome::Exhausted => Err("oracle hit a limit".into()),
    }
}

fn frobenius_agreement() -> Check {
    let sets: Vec<Vec<u64>> = (2..=4)
        .flat_map(|size| (2u64..=40).combinations(size))
        .filter(|s| gcd_all(s) == 1)
        .collect();
    let count = sets.len();
    sets.par_iter().try_for_each(|s| {
        let want = brute_frobenius(s);
        let set = GeneratorSet::new(s.clone()).map_err(|e| e.to_string())?;
        let general = frobenius_general(&set).map_err(|e| e.to_string())?;
        let reduced = reduce_brauer_shockley(&set).map_err(|e| e.to_string())?;
        ensure!(general == want, "{s:?}: general {general}, scan {want}");
        ensure!(reduced == want, "{s:?}: reduced {reduced}, scan {want}");
        if s.len() == 2 {
            let pair = frobenius_pair(s[0], s[1]).map_err(|e| e.to_string())?;
            ensure!(pair == want, "{s:?}: pair {pair}, scan {want}");
        }
        Ok(())
    })?;
    Ok(format!("{count} generator sets agree with the scan"))
}

fn three_brick_instance() -> Check {
    let t = corollary1_threshold(6, 4, 5, 7).map_err(|e| e.to_string())?;
    ensure!(t == 198, "threshold {t}");
    let set = GeneratorSet::new([20, 28, 35]).unwrap();
    let general = frobenius_general(&set).unwrap();
    let reduced = reduce_brauer_shockley(&set).unwrap();
    let formula = 2 * 4 * 5 * 7 - (4 * 5 + 4 * 7 + 5 * 7);
    let scan = brute_frobenius(&[20, 28, 35]);
    ensure!(
        [general, reduced, formula, scan] == [197; 4],
        "g(20,28,35): general {general}, reduced {reduced}, formula {formula}, scan {scan}"
    );
    ensure!(t < 2214, "threshold not below the earlier 2214");
    Ok("threshold 198 < 2214, g(20,28,35) = 197 by every path".into())
}

fn three_brick_sweep() -> Check {
    let bricks = vec![
        Brick::new(vec![6, 4]).unwrap(),
        Brick::new(vec![5, 7]).unwrap(),
        Brick::new(vec![7, 5]).unwrap(),
    ];
    let boxes: Vec<(u64, u64)> = (198..=210).cartesian_product(198..=210).collect();
    boxes.par_iter().try_for_each(|&(a1, a2)| {
        let t = corollary1_construct(a1, a2, 6, 4, 5, 7).map_err(|e| format!("{a1}x{a2}: {e}"))?;
        ensure!(t.bricks == bricks, "{a1}x{a2}: bricks {:?}", t.bricks);
        ensure!(
            t.rotation_policy == RotationPolicy::Fixed,
            "{a1}x{a2}: rotations"
        );
        ensure!(
            t.placements
                .iter()
                .all(|p| p.orientation.as_slice() == [0, 1]),
            "{a1}x{a2}: rotated placement"
        );
        valid(&t)
    })?;
    Ok(format!("{} boxes tiled and verified", boxes.len()))
}

fn prime_squares() -> Check {
    let b = prime_cubes_bound(&[2, 3, 5]).map_err(|e| e.to_string())?;
    ensure!(b == 29, "bound {b}");
    (30..=60).into_par_iter().try_for_each(|a| {
        let t = prime_cubes_construct(a, &[2, 3, 5]).map_err(|e| format!("{a}: {e}"))?;
        valid(&t)
    })?;
    Ok("bound 29, squares 30..=60 verified".into())
}

fn prime_cubes() -> Check {
    let b = prime_cubes_bound(&[2, 3, 5, 7]).map_err(|e| e.to_string())?;
    ensure!(b == 383, "bound {b}");
    let t = prime_cubes_construct(384, &[2, 3, 5, 7]).map_err(|e| e.to_string())?;
    let covered: u128 = t
        .placements
        .iter()
        .map(|p| t.bricks[p.brick].volume())
        .sum();
    ensure!(covered == 384u128.pow(3), "volume {covered}");
    let r = verify_sampled(&t, 100_000, 0);
    ensure!(r.is_valid(), "{r:?}");
    Ok(format!(
        "bound 383, 384^3 with {} placements, sampled Valid",
        t.placements.len()
    ))
}

fn squares_235p(p: u64, bad: &[u64]) -> Result<(), String> {
    let got: Vec<u64> = (1..=60)
        .map(|a| {
            let d = tile_square_235p(a, p).map_err(|e| format!("{a}: {e}"))?;
            if let Some(t) = &d.witness {
                valid(t)?;
            }
            ensure!(d.tileable == d.witness.is_some(), "{a}: witness mismatch");
            Ok((a, d.tileable))
        })
        .collect::<Result<Vec<_>, String>>()?
        .into_iter()
        .filter(|&(_, ok)| !ok)
        .map(|(a, _)| a)
        .collect();
    ensure!(got == bad, "p = {p}: untileable {got:?}");
    Ok(())
}

fn characterization_235() -> Check {
    let bricks = [square(2), square(3), square(5)];
    let start = Instant::now();
    let seven = exact_cover_search(
        &BoxShape::new(vec![7, 7]).unwrap(),
        &bricks,
        &SearchConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let proof = start.elapsed();
    ensure!(seven == SearchOutcome::Infeasible, "7x7: {seven:?}");
    ensure!(proof < Duration::from_secs(10), "7x7 proof took {proof:?}");
    let scan = threshold_scan(&bricks, 30, &SearchConfig::default()).map_err(|e| e.to_string())?;
    ensure!(scan == [1, 7], "scan {scan:?}");
    squares_235p(5, &[1, 7])?;
    Ok(format!(
        "scan {{1,7}}, decider agrees on 1..=60, 7x7 proof {proof:.2?}"
    ))
}

fn characterization_237() -> Check {
    let bricks = [square(2), square(3), square(7)];
    let cfg = SearchConfig::default();
    let scan = threshold_scan(&bricks, 30, &cfg).map_err(|e| e.to_string())?;
    ensure!(scan == [1, 5, 11], "scan {scan:?}");
    let side = |a: u64| BoxShape::new(vec![a, a]).unwrap();
    let found = verdict(exact_cover_search(&side(17), &bricks, &cfg).map_err(|e| e.to_string())?)?;
    ensure!(found, "17x17 not found");
    let eleven = exact_cover_search(&side(11), &bricks, &cfg).map_err(|e| e.to_string())?;
    ensure!(eleven == SearchOutcome::Infeasible, "11x11: {eleven:?}");
    squares_235p(7, &[1, 5, 11])?;
    Ok("scan {1,5,11}, 17x17 found, 11x11 infeasible".into())
}

fn deciders_vs_oracle() -> Check {
    let cases: Vec<(u64, u64, u64, u64)> = (1..=10)
        .cartesian_product(1..=10)
        .cartesian_product((1..=4).cartesian_product(1..=4))
        .map(|((a1, a2), (x1, x2))| (a1, a2, x1, x2))
        .collect();
    let checked: usize = cases
        .par_iter()
        .map(|&(a1, a2, x1, x2)| -> Result<usize, String> {
            let shape = BoxShape::new(vec![a1, a2]).unwrap();
            let mut n = 0;
            let d = decide_single_brick(a1, a2, x1, x2).map_err(|e| e.to_string())?;
            let cfg = SearchConfig::with_policy(RotationPolicy::AxisPermutations);
            let want = verdict(
                exact_cover_search(&shape, &[Brick::new(vec![x1, x2]).unwrap()], &cfg)
                    .map_err(|e| e.to_string())?,
            )?;
            ensure!(
                d.tileable == want,
                "single {a1}x{a2} by {x1}x{x2}: decider {}",
                d.tileable
            );
            if let Some(t) = &d.witness {
                valid(t)?;
            }
            n += 1;
            if gcd(x1, x2) == 1 {
                let d = decide_two_squares(a1, a2, x1, x2).map_err(|e| e.to_string())?;
                let want = verdict(
                    exact_cover_search(&shape, &[square(x1), square(x2)], &SearchConfig::default())
                        .map_err(|e| e.to_string())?,
                )?;
                ensure!(
                    d.tileable == want,
                    "squares {a1}x{a2} by {x1},{x2}: decider {}",
                    d.tileable
                );
                if let Some(t) = &d.witness {
                    valid(t)?;
                }
                n += 1;
            } else {
                let e = decide_two_squares(a1, a2, x1, x2);
                ensure!(
                    matches!(e, Err(Error::NonCoprime { .. })),
                    "{x1},{x2}: {e:?}"
                );
            }
            Ok(n)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(format!("{checked} decisions match the oracle"))
}

fn subset_maxima() -> Check {
    let primes = [2u64, 3, 5, 7, 11, 13];
    let g = |ps: &[u64]| -> Result<u64, String> {
        let set = GeneratorSet::new(prime_quotients(ps).map_err(|e| e.to_string())?).unwrap();
        frobenius_general(&set).map_err(|e| e.to_string())
    };
    let mut compared = 0;
    for len in 2..=4 {
        for tuple in primes.iter().copied().combinations(len) {
            for size in 2..=len {
                let top = &tuple[len - size..];
                let best = g(top)?;
                for subset in tuple.iter().copied().combinations(size) {
                    let here = g(&subset)?;
                    ensure!(here <= best, "{subset:?} beats top {top:?}");
                    ensure!(
                        (here == best) == (subset == top),
                        "{subset:?} ties top {top:?}"
                    );
                    compared += 1;
                }
            }
            let sys = BrickSystem::hypercubes(&tuple).map_err(|e| e.to_string())?;
            let bound = prime_cubes_bound(&tuple).map_err(|e| e.to_string())?;
            let gn = gn_bound(&sys).map_err(|e| e.to_string())?;
            ensure!(
                bound == gn,
                "{tuple:?}: closed form {bound}, constructor {gn}"
            );
        }
    }
    Ok(format!(
        "{compared} subset comparisons, closed form equals constructor bound"
    ))
}

fn compositions() -> Check {
    let sides = [2u64, 3, 5, 7];
    let mut built = 0;
    for (&a, &b, &c) in sides
        .iter()
        .tuple_combinations::<(_, _, _)>()
        .flat_map(|(x, y, z)| {
            [
                (x, y, z),
                (x, z, y),
                (y, x, z),
                (y, z, x),
                (z, x, y),
                (z, y, x),
            ]
        })
    {
        if gcd(a, b) != 1 || gcd(a, c) != 1 || gcd(b, c) != 1 {
            continue;
        }
        for r in 1..=30 {
            for l in 1..=3 {
                for k in 1..=2 {
                    let pre = r % b == 0
                        && brute_representable(r, &[a, c])
                        && brute_representable(l * c, &[a, b]);
                    match compose_squares(a, b, c, r, l, k) {
                        Ok((t1, t2)) => {
                            ensure!(pre, "({a},{b},{c},{r},{l},{k}) built without preconditions");
                            ensure!(t1.box_shape.sides() == [r + a * c; 2], "first side");
                            ensure!(
                                t2.box_shape.sides() == [l * c + k * a * b; 2],
                                "second side"
                            );
                            valid(&t1)?;
                            valid(&t2)?;
                            built += 1;
                        }
                        Err(Error::PreconditionViolated(_)) => {
                            ensure!(!pre, "({a},{b},{c},{r},{l},{k}) rejected")
                        }
                        Err(e) => return Err(e.to_string()),
                    }
                }
            }
        }
    }
    ensure!(built > 0, "no instance met the preconditions");
    Ok(format!("{built} parameter tuples composed and verified"))
}

fn scaling_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut done = 0;
    while done < 200 {
        let d = rng.gen_range(2..=6u64);
        let s = rng.gen_range(2..=30u64);
        let t: Vec<u64> = (0..rng.gen_range(1..=3))
            .map(|_| rng.gen_range(2..=30))
            .collect();
        let mut core = t.clone();
        core.push(s);
        if gcd(d, s) != 1 || gcd_all(&core) != 1 {
            continue;
        }
        let mut scaled: Vec<u64> = t.iter().map(|x| d * x).collect();
        scaled.push(s);
        let lhs = frobenius_general(&GeneratorSet::new(scaled.clone()).unwrap())
            .map_err(|e| e.to_string())?;
        let core_g = frobenius_general(&GeneratorSet::new(core.clone()).unwrap())
            .map_err(|e| e.to_string())?;
        let rhs = d * core_g + (d - 1) * s;
        ensure!(lhs == rhs, "d={d}, T={t:?}, s={s}: {lhs} != {rhs}");
        ensure!(
            lhs == brute_frobenius(&scaled),
            "scan disagrees on {scaled:?}"
        );
        done += 1;
    }
    Ok("200 random instances satisfy the scaling identity".into())
}

/// Id, title, budget in seconds, check.
type Criterion = (&'static str, &'static str, u64, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        (
            "AC1",
            "Frobenius paths vs brute force",
            10,
            frobenius_agreement,
        ),
        (
            "AC2",
            "three-brick threshold instance",
            10,
            three_brick_instance,
        ),
        (
            "AC3",
            "three-brick constructive sweep",
            120,
            three_brick_sweep,
        ),
        ("AC4", "prime squares, n = 2", 60, prime_squares),
        ("AC5", "prime cubes, n = 3", 300, prime_cubes),
        (
            "AC6",
            "{2,3,5} square characterization",
            60,
            characterization_235,
        ),
        (
            "AC7",
            "{2,3,7} square characterization",
            600,
            characterization_237,
        ),
        (
            "AC8",
            "classical deciders vs oracle",
            300,
            deciders_vs_oracle,
        ),
        ("AC9", "subset maxima of prime quotients", 10, subset_maxima),
        ("AC10", "square compositions", 60, compositions),
        ("AC11", "scaling identity", 5, scaling_identity),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        let took = start.elapsed();
        let over = took > Duration::from_secs(budget);
        let (status, detail) = match (&result, over) {
            (Ok(msg), false) => ("PASS", msg.clone()),
            (Ok(msg), true) => ("FAIL", format!("over budget; {msg}")),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{id:<5} {status} {name}: {detail} [{took:.2?} / {budget}s]");
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
