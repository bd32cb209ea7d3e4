//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stackvol::scalar::rational_to_f64;
use stackvol::{
    Block, FiniteGroup, FiniteGroupoid, Rational, RandomBounds, RealActionModel, WeightData,
};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds of the random corpus: up to 40 objects, block groups of order up
/// to 8, at most 8 objects per block.
pub fn corpus_bounds() -> RandomBounds {
    RandomBounds::new(40, 8).with_max_block_objects(8)
}

pub fn positive(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.random_range(1..=12), rng.random_range(1..=12))
}

pub fn signed(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.random_range(-12..=12), rng.random_range(1..=12))
}

/// Orbit label of every object, computed by a plain flood fill over the
/// arrow endpoints (independent of the library's orbit decomposition).
pub fn orbit_labels(g: &FiniteGroupoid) -> Vec<usize> {
    let n = g.object_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for a in 0..g.arrow_count() {
        let (s, t) = (find(&mut parent, g.source(a)), find(&mut parent, g.target(a)));
        parent[s] = t;
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = vec![0; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[x] = label[r];
    }
    out
}

/// Weights `a > 0` arbitrary, `b = λ·a` with λ constant on orbits.
pub fn invariant_weights(g: &FiniteGroupoid, rng: &mut ChaCha8Rng) -> WeightData<Rational> {
    let labels = orbit_labels(g);
    let orbits = labels.iter().max().map_or(0, |m| m + 1);
    let lambda: Vec<Rational> = (0..orbits).map(|_| signed(rng)).collect();
    let a: Vec<Rational> = (0..g.object_count()).map(|_| positive(rng)).collect();
    let b = a.iter().zip(&labels).map(|(a, &k)| a * &lambda[k]).collect();
    WeightData::new(a, b)
}

/// Brute-force orbit volume: Σ_O λ(O)·(#O)²/(number of arrows in O).
pub fn brute_orbit_volume(g: &FiniteGroupoid, w: &WeightData<Rational>) -> Rational {
    let labels = orbit_labels(g);
    let orbits = labels.iter().max().map_or(0, |m| m + 1);
    let mut size = vec![0i64; orbits];
    let mut arrows = vec![0i64; orbits];
    let mut lambda = vec![None; orbits];
    for x in 0..g.object_count() {
        size[labels[x]] += 1;
        lambda[labels[x]].get_or_insert_with(|| &w.b[x] / &w.a[x]);
    }
    for a in 0..g.arrow_count() {
        arrows[labels[g.source(a)]] += 1;
    }
    (0..orbits)
        .map(|k| lambda[k].clone().unwrap() * q(size[k] * size[k], arrows[k]))
        .sum()
}

/// The natural permutation action of S3 on three points, as a table
/// indexed by the group's element order (lexicographic permutations).
pub fn s3_on_three(h: usize, x: usize) -> usize {
    const PERMS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS[h][x]
}

/// A second block layout with the same groups but different object counts.
pub fn partner_layout(blocks: &[Block], rng: &mut ChaCha8Rng) -> Vec<Block> {
    blocks
        .iter()
        .map(|b| Block { objects: rng.random_range(1..=4), group: b.group.clone() })
        .collect()
}

pub fn group_named(name: &str) -> FiniteGroup {
    FiniteGroup::small_groups(8)
        .into_iter()
        .find(|g| g.name() == name)
        .unwrap_or_else(|| panic!("no group {name}"))
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}

/// Finite actions used for the consistency check: Z_n or S3 acting on a
/// mix of regular, conjugation and fixed points.
pub fn finite_action_pair(seed: u64) -> (RealActionModel, FiniteGroupoid, WeightData<Rational>) {
    let mut r = rng(seed);
    let groups = FiniteGroup::small_groups(8);
    let group = groups[r.random_range(0..groups.len())].clone();
    let n = group.order();
    let fixed = r.random_range(0..3);
    let points = 2 * n + fixed;
    let g2 = group.clone();
    let act = move |h: usize, x: usize| {
        if x < n {
            g2.mul(h, x)
        } else if x < 2 * n {
            n + g2.mul(g2.mul(h, x - n), g2.inv(h))
        } else {
            x
        }
    };
    let a: Vec<Rational> = (0..points).map(|_| positive(&mut r)).collect();
    let b: Vec<Rational> = (0..points).map(|_| signed(&mut r)).collect();
    let names: Vec<String> = (0..points).map(|i| format!("p{i}")).collect();
    let groupoid = FiniteGroupoid::action(&group, &names, &act).unwrap();
    let model = RealActionModel::finite_action(
        group,
        points,
        &act,
        a.iter().map(rational_to_f64).collect(),
        b.iter().map(rational_to_f64).collect(),
    )
    .unwrap();
    (model, groupoid, WeightData::new(a, b))
}
