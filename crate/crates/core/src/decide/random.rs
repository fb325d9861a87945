//! Seeded random decision instances with internally consistent data.
//!
//! The groups satisfy `H₂(X, ∂X) = H₂(X)` coordinatewise, the mod-2
//! reduction sends each free and each even torsion coordinate to its own 𝔽₂
//! coordinate, and an orientable surface of integral class `c` has Euler
//! number `Σ cᵢ²` over the free coordinates, a quadratic form unchanged by
//! `c ↦ −c`.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AmbientReductions, AmbientSpec, Query, Question};
use crate::homology::{mod2_reduce, AbelianGroupPresentation, HomologyClass, IntMatrix, ReductionMap};
use crate::json::{ints_to_json, JsonInt};
use crate::surfaces::{ComponentSpec, SurfaceSpec};

fn random_group<R: Rng>(rng: &mut R) -> AbelianGroupPresentation {
    let free = rng.gen_range(0..=3);
    let mut factors = Vec::new();
    let mut d = *[2i64, 3, 4].choose(rng).expect("nonempty");
    for _ in 0..rng.gen_range(0..=(4 - free)) {
        factors.push(d);
        d *= rng.gen_range(1..=3);
    }
    AbelianGroupPresentation::from_i64(free, &factors).expect("divisibility chain")
}

fn natural_reduction(g: &AbelianGroupPresentation) -> ReductionMap {
    let evens: Vec<usize> = g
        .invariant_factors()
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_even())
        .map(|(k, _)| g.free_rank() + k)
        .collect();
    let sources: Vec<usize> = (0..g.free_rank()).chain(evens).collect();
    let m = IntMatrix::from_fn(sources.len(), g.coordinate_len(), |i, j| {
        BigInt::from(i64::from(sources[i] == j))
    });
    let target = AbelianGroupPresentation::f2(sources.len());
    ReductionMap::new(g.clone(), target, &m).expect("even or free coordinates only")
}

fn random_class<R: Rng>(rng: &mut R, g: &AbelianGroupPresentation) -> HomologyClass {
    let coords: Vec<BigInt> = (0..g.coordinate_len())
        .map(|_| BigInt::from(rng.gen_range(-3i64..=3)))
        .collect();
    HomologyClass::new(g.clone(), coords).expect("coordinate count")
}

fn free_square(c: &HomologyClass) -> i64 {
    let free = c.group().free_rank();
    c.coords()[..free]
        .iter()
        .map(|v| i64::try_from(v * v).expect("small coordinates"))
        .sum()
}

fn json(c: &HomologyClass) -> Option<Vec<JsonInt>> {
    Some(ints_to_json(c.coords()))
}

struct Topology {
    orientable: bool,
    chis: Vec<i64>,
}

fn random_topology<R: Rng>(rng: &mut R) -> Topology {
    let orientable = rng.gen_bool(0.5);
    let n = if rng.gen_bool(0.85) { 1 } else { 2 };
    let choices: &[i64] = if orientable { &[2, 0, -2] } else { &[1, 0, -1] };
    Topology {
        orientable,
        chis: (0..n).map(|_| *choices.choose(rng).expect("nonempty")).collect(),
    }
}

fn surface(id: &str, t: &Topology, e: i64) -> SurfaceSpec {
    let components = t
        .chis
        .iter()
        .enumerate()
        .map(|(i, &chi)| ComponentSpec::closed(t.orientable, chi, if i == 0 { e } else { 0 }))
        .collect();
    SurfaceSpec::closed(id, components)
}

/// One random instance asking a symmetric question about two closed
/// surfaces.
pub fn random_query<R: Rng>(rng: &mut R) -> Query {
    let gz = random_group(rng);
    let red = natural_reduction(&gz);
    let gf = red.target().clone();
    let boundary = rng.gen_bool(0.3);
    let mut x = AmbientSpec::with_groups(rng.gen_bool(0.7), boundary, gf.clone(), gz.clone());
    x.connected = rng.gen_bool(0.95);
    let m = red.matrix();
    x.reductions = AmbientReductions {
        rel: Some(m.clone()),
        abs: Some(m),
    };

    let ta = random_topology(rng);
    let tb = if rng.gen_bool(0.5) {
        Topology {
            orientable: ta.orientable,
            chis: ta.chis.clone(),
        }
    } else {
        random_topology(rng)
    };

    let mut make = |id: &str, t: &Topology, like: Option<&HomologyClass>, like_e: Option<i64>| -> SurfaceSpec {
        if t.orientable {
            let c = match (like, rng.gen_range(0..3)) {
                (Some(c), 0) => c.clone(),
                (Some(c), 1) if c.group() == &gz => c.neg(),
                _ => random_class(rng, &gz),
            };
            let c = if c.group() == &gz { c } else { random_class(rng, &gz) };
            let reduced = mod2_reduce(&c, &red).expect("matching groups");
            let mut s = surface(id, t, free_square(&c));
            s.class_int = json(&c);
            s.class_int_abs = json(&c);
            s.class_mod2 = json(&reduced);
            s.class_mod2_abs = json(&reduced);
            s
        } else {
            let c = match like {
                Some(c) if c.group() == &gf && rng.gen_bool(0.5) => c.clone(),
                _ => {
                    let coords: Vec<BigInt> = (0..gf.coordinate_len())
                        .map(|_| BigInt::from(rng.gen_range(0..2)))
                        .collect();
                    HomologyClass::new(gf.clone(), coords).expect("coordinate count")
                }
            };
            let e = match like_e {
                Some(e) if rng.gen_bool(0.5) => e,
                _ => 2 * rng.gen_range(-3i64..=3),
            };
            let mut s = surface(id, t, e);
            s.class_mod2 = json(&c);
            s.class_mod2_abs = json(&c);
            s
        }
    };

    let a = make("a", &ta, None, None);
    let class_a = |s: &SurfaceSpec| -> HomologyClass {
        let (g, field) = if ta.orientable {
            (&gz, s.class_int.as_ref())
        } else {
            (&gf, s.class_mod2.as_ref())
        };
        HomologyClass::new(g.clone(), field.expect("set above").iter().map(|v| v.0.clone()).collect())
            .expect("coordinate count")
    };
    let ca = class_a(&a);
    let b = make("b", &tb, Some(&ca), Some(a.total_euler()));

    let question = *[Question::Cobordant, Question::CobordantRelBoundary, Question::Concordant]
        .choose(rng)
        .expect("nonempty");
    Query::new(question, x, vec![a, b])
}

/// `count` instances from a fixed seed.
pub fn random_queries(seed: u64, count: usize) -> Vec<Query> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_query(&mut rng)).collect()
}
