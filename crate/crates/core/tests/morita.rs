mod common;

use common::{corpus_bounds, invariant_weights, partner_layout, positive, q, rng};
use proptest::prelude::*;
use stackvol::groupoid::{random_blocks, Axiom};
use stackvol::morita::{
    extend_invariant_section, linking_groupoid, morita_volume_check, restrict_full,
    transfer_section, LEFT_PREFIX, RIGHT_PREFIX,
};
use stackvol::{Bibundle, Error, FiniteGroup, FiniteGroupoid, Rational, WeightData};

fn strip(prefix: &'static str) -> impl Fn(&str) -> String {
    move |s: &str| s.strip_prefix(prefix).expect("prefixed id").to_string()
}

/// The factor of `linking` on `range`, with the side prefix removed.
fn factor(linking: &FiniteGroupoid, range: std::ops::Range<usize>, prefix: &'static str) -> FiniteGroupoid {
    let ix: Vec<usize> = range.collect();
    linking.restrict(&ix).relabel(strip(prefix), strip(prefix)).unwrap()
}

#[test]
fn identity_bibundle_validates() {
    let g = FiniteGroupoid::from_blocks(&[stackvol::Block { objects: 2, group: FiniteGroup::cyclic(3) }]);
    let b = Bibundle::identity(&g);
    assert!(b.validate(&g, &g).is_ok());
    assert_eq!(b.len(), g.arrow_count());
}

#[test]
fn pair_to_point() {
    let pair = FiniteGroupoid::pair(&["x", "y"]);
    let (pt, b) = Bibundle::restriction(&pair, &[0]);
    assert_eq!(pt.object_count(), 1);
    assert!(b.validate(&pair, &pt).is_ok());
    let link = linking_groupoid(&pair, &pt, &b).unwrap();
    assert_eq!(link.object_count(), 3);
    assert_eq!(link.arrow_count(), 9);
    assert!(link.validate().is_ok());
    // linking groupoid of pair(2) and pt is pair(3)
    assert_eq!(link.cardinality::<Rational>().unwrap(), q(1, 1));
}

#[test]
fn non_free_action_is_rejected() {
    let bz2 = FiniteGroupoid::classifying(&FiniteGroup::cyclic(2));
    let pt = FiniteGroupoid::pair(&["p"]);
    // Z2 acting trivially on a single element
    let b = Bibundle::new(
        vec!["e".into()],
        vec![0],
        vec![0],
        (0..bz2.arrow_count()).map(|g| (g, 0, 0)),
        [(0, 0, 0)],
    )
    .unwrap();
    let report = b.validate(&bz2, &pt);
    assert!(report.has(Axiom::LeftActionNotFree), "{report}");
    assert!(matches!(linking_groupoid(&bz2, &pt, &b), Err(Error::InvalidBibundle(_))));
}

#[test]
fn linking_of_classifying_groupoid_with_itself() {
    let bz2 = FiniteGroupoid::classifying(&FiniteGroup::cyclic(2));
    let link = linking_groupoid(&bz2, &bz2, &Bibundle::identity(&bz2)).unwrap();
    assert_eq!(link.arrow_count(), 8);
    let orbits = link.orbits().unwrap();
    assert_eq!(orbits.len(), 1);
    assert_eq!(orbits.orbits[0].isotropy_order, 2);
}

#[test]
fn restrict_full_requires_every_orbit() {
    let g = FiniteGroupoid::from_blocks(&[
        stackvol::Block { objects: 2, group: FiniteGroup::trivial() },
        stackvol::Block { objects: 2, group: FiniteGroup::cyclic(2) },
    ]);
    assert_eq!(restrict_full(&g, &[1, 2]).unwrap().object_count(), 2);
    assert!(matches!(restrict_full(&g, &[0, 1]), Err(Error::NotFull(_))));
}

#[test]
fn extend_section_from_full_subset() {
    let g = FiniteGroupoid::from_blocks(&[
        stackvol::Block { objects: 2, group: FiniteGroup::trivial() },
        stackvol::Block { objects: 3, group: FiniteGroup::cyclic(2) },
    ]);
    let ext = extend_invariant_section(&g, &[(0, q(5, 1)), (3, q(7, 2))]).unwrap();
    assert_eq!(ext, vec![q(5, 1), q(5, 1), q(7, 2), q(7, 2), q(7, 2)]);
    let clash = extend_invariant_section(&g, &[(0, q(1, 1)), (1, q(2, 1)), (2, q(1, 1))]);
    assert!(matches!(clash, Err(Error::InconsistentSection(_))));
}

#[test]
fn transfer_along_identity_and_restriction() {
    let pair = FiniteGroupoid::pair(&["x", "y"]);
    let lambda = vec![q(2, 1), q(2, 1)];
    assert_eq!(transfer_section(&pair, &pair, &Bibundle::identity(&pair), &lambda).unwrap(), lambda);
    let (pt, b) = Bibundle::restriction(&pair, &[1]);
    assert_eq!(transfer_section(&pair, &pt, &b, &lambda).unwrap(), vec![q(2, 1)]);
    let bad = vec![q(1, 1), q(2, 1)];
    assert!(matches!(
        transfer_section(&pair, &pt, &b, &bad),
        Err(Error::NonInvariantSection { .. })
    ));
}

#[test]
fn transfer_respects_composition() {
    let mut r = rng(5);
    let blocks = random_blocks(5, stackvol::RandomBounds::new(10, 6).with_max_block_objects(3)).unwrap();
    let mid = partner_layout(&blocks, &mut r);
    let last = partner_layout(&blocks, &mut r);
    let (g1, g2, g3) = (
        FiniteGroupoid::from_blocks(&blocks),
        FiniteGroupoid::from_blocks(&mid),
        FiniteGroupoid::from_blocks(&last),
    );
    let b12 = Bibundle::between_blocks(&blocks, &mid).unwrap();
    let b23 = Bibundle::between_blocks(&mid, &last).unwrap();
    let b13 = b12.compose(&b23, &g2).unwrap();
    assert!(b13.validate(&g1, &g3).is_ok(), "{}", b13.validate(&g1, &g3));
    let lambda = g1.invariant_section(&g1.orbits().unwrap(), &invariant_weights(&g1, &mut r)).unwrap();
    let via_mid = transfer_section(&g2, &g3, &b23, &transfer_section(&g1, &g2, &b12, &lambda).unwrap()).unwrap();
    assert_eq!(transfer_section(&g1, &g3, &b13, &lambda).unwrap(), via_mid);
}

#[test]
fn morita_volume_check_detects_mismatch() {
    let pair = FiniteGroupoid::pair(&["x", "y"]);
    let (pt, b) = Bibundle::restriction(&pair, &[0]);
    let w1 = WeightData::new(vec![q(1, 1), q(3, 1)], vec![q(2, 1), q(6, 1)]);
    let good = WeightData::new(vec![q(5, 1)], vec![q(10, 1)]);
    let report = morita_volume_check(&pair, &pt, &b, &w1, &good).unwrap();
    assert!(report.equal);
    assert_eq!(report.left, q(2, 1));
    let wrong = WeightData::from_section(vec![q(3, 1)]);
    assert!(matches!(
        morita_volume_check(&pair, &pt, &b, &w1, &wrong),
        Err(Error::SectionsNotCorresponding { .. })
    ));
}

#[test]
fn classifying_groupoid_identity_check() {
    let bz2 = FiniteGroupoid::classifying(&FiniteGroup::cyclic(2));
    let w = WeightData::from_section(vec![q(3, 1)]);
    let report = morita_volume_check(&bz2, &bz2, &Bibundle::identity(&bz2), &w, &w).unwrap();
    assert_eq!((report.left, report.right), (q(3, 2), q(3, 2)));
}

#[test]
fn isomorphic_bibundles_give_the_same_transfer() {
    let blocks = random_blocks(9, stackvol::RandomBounds::new(8, 6).with_max_block_objects(3)).unwrap();
    let other = partner_layout(&blocks, &mut rng(9));
    let (g1, g2) = (FiniteGroupoid::from_blocks(&blocks), FiniteGroupoid::from_blocks(&other));
    let b = Bibundle::between_blocks(&blocks, &other).unwrap();
    let k = b.len();
    let perm: Vec<usize> = (0..k).map(|i| (i * 7 + 3) % k).collect();
    let perm = if common::is_permutation(&perm) { perm } else { (0..k).rev().collect() };
    let b2 = b.permuted(&perm, |s| format!("copy.{s}")).unwrap();
    assert!(b2.validate(&g1, &g2).is_ok());
    let lambda = g1.invariant_section(&g1.orbits().unwrap(), &invariant_weights(&g1, &mut rng(1))).unwrap();
    assert_eq!(
        transfer_section(&g1, &g2, &b, &lambda).unwrap(),
        transfer_section(&g1, &g2, &b2, &lambda).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linking_restricts_back_to_factors(seed in any::<u64>()) {
        let bounds = stackvol::RandomBounds::new(12, 8).with_max_block_objects(4);
        let blocks = random_blocks(seed, bounds).unwrap();
        let other = partner_layout(&blocks, &mut rng(seed));
        let (g1, g2) = (FiniteGroupoid::from_blocks(&blocks), FiniteGroupoid::from_blocks(&other));
        let b = Bibundle::between_blocks(&blocks, &other).unwrap();
        let link = linking_groupoid(&g1, &g2, &b).unwrap();
        prop_assert!(link.validate().is_ok());
        let (n1, n2) = (g1.object_count(), g2.object_count());
        prop_assert_eq!(factor(&link, 0..n1, LEFT_PREFIX), g1.clone());
        prop_assert_eq!(factor(&link, n1..n1 + n2, RIGHT_PREFIX), g2.clone());
        // each factor is full in the linking groupoid
        prop_assert!(restrict_full(&link, &(0..n1).collect::<Vec<_>>()).is_ok());
        prop_assert!(restrict_full(&link, &(n1..n1 + n2).collect::<Vec<_>>()).is_ok());
    }

    #[test]
    fn morita_invariance_of_volume(seed in any::<u64>()) {
        let blocks = random_blocks(seed, corpus_bounds()).unwrap();
        let mut r = rng(seed ^ 3);
        let other = partner_layout(&blocks, &mut r);
        let (g1, g2) = (FiniteGroupoid::from_blocks(&blocks), FiniteGroupoid::from_blocks(&other));
        let b = Bibundle::between_blocks(&blocks, &other).unwrap();
        let w1 = invariant_weights(&g1, &mut r);
        let lambda1 = g1.invariant_section(&g1.orbits().unwrap(), &w1).unwrap();
        let lambda2 = transfer_section(&g1, &g2, &b, &lambda1).unwrap();
        let a2: Vec<Rational> = (0..g2.object_count()).map(|_| positive(&mut r)).collect();
        let b2 = a2.iter().zip(&lambda2).map(|(a, l)| a * l).collect();
        let report = morita_volume_check(&g1, &g2, &b, &w1, &WeightData::new(a2, b2)).unwrap();
        prop_assert!(report.equal);
        prop_assert_eq!(report.left, report.right);
    }

    #[test]
    fn restriction_to_one_point_per_orbit(seed in any::<u64>()) {
        let g = FiniteGroupoid::random(seed, corpus_bounds()).unwrap();
        let mut r = rng(seed ^ 4);
        let reps: Vec<usize> = g.orbits().unwrap().orbits.iter().map(|o| o.representative).collect();
        let (sub, b) = Bibundle::restriction(&g, &reps);
        prop_assert!(b.validate(&g, &sub).is_ok());
        let w = invariant_weights(&g, &mut r);
        let lambda = g.invariant_section(&g.orbits().unwrap(), &w).unwrap();
        let mut sorted = reps.clone();
        sorted.sort_unstable();
        // restricted objects keep the order of g
        let sub_lambda: Vec<Rational> = sorted.iter().map(|&x| lambda[x].clone()).collect();
        let a2: Vec<Rational> = (0..sub.object_count()).map(|_| positive(&mut r)).collect();
        let b2 = a2.iter().zip(&sub_lambda).map(|(a, l)| a * l).collect();
        let report = morita_volume_check(&g, &sub, &b, &w, &WeightData::new(a2, b2)).unwrap();
        prop_assert!(report.equal);
    }

    #[test]
    fn restrict_then_extend_is_identity(seed in any::<u64>()) {
        let g = FiniteGroupoid::random(seed, corpus_bounds()).unwrap();
        let lambda = g.invariant_section(&g.orbits().unwrap(), &invariant_weights(&g, &mut rng(seed))).unwrap();
        let all: Vec<(usize, Rational)> = lambda.iter().cloned().enumerate().collect();
        prop_assert_eq!(extend_invariant_section(&g, &all).unwrap(), lambda);
    }

    #[test]
    fn extend_then_restrict_is_identity(seed in any::<u64>()) {
        let g = FiniteGroupoid::random(seed, corpus_bounds()).unwrap();
        let mut r = rng(seed);
        let lambda = g.invariant_section(&g.orbits().unwrap(), &invariant_weights(&g, &mut r)).unwrap();
        let reps: Vec<(usize, Rational)> = g
            .orbits()
            .unwrap()
            .orbits
            .iter()
            .map(|o| (o.representative, lambda[o.representative].clone()))
            .collect();
        prop_assert_eq!(extend_invariant_section(&g, &reps).unwrap(), lambda);
    }
}
