//! Invertible bibundles between finite groupoids, linking groupoids and the
//! transfer of invariant sections along them.
//!
//! A `(G′, G″)`-bibundle `B` carries a left `G′`-action along `left_anchor`
//! and a right `G″`-action along `right_anchor`. Transfer of a section goes
//! through the linking groupoid: extend from `G′_0`, which is full there, and
//! restrict to `G″_0`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groupoid::{
    ArrowIx, ArrowSpec, Axiom, Block, FiniteGroupoid, ObjectIx, ValidationReport, WeightData,
};
use crate::scalar::Scalar;

pub const LEFT_PREFIX: &str = "left:";
pub const RIGHT_PREFIX: &str = "right:";
pub const BRIDGE_PREFIX: &str = "bridge:";
pub const COBRIDGE_PREFIX: &str = "cobridge:";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bibundle {
    elements: Vec<String>,
    left_anchor: Vec<ObjectIx>,
    right_anchor: Vec<ObjectIx>,
    left_action: HashMap<(ArrowIx, usize), usize>,
    right_action: HashMap<(usize, ArrowIx), usize>,
}

impl Bibundle {
    /// Index-based constructor. Left action entries are `(g, b, g·b)`, right
    /// action entries `(b, h, b·h)`.
    pub fn new(
        elements: Vec<String>,
        left_anchor: Vec<ObjectIx>,
        right_anchor: Vec<ObjectIx>,
        left_action: impl IntoIterator<Item = (ArrowIx, usize, usize)>,
        right_action: impl IntoIterator<Item = (usize, ArrowIx, usize)>,
    ) -> Result<Self> {
        let k = elements.len();
        if left_anchor.len() != k || right_anchor.len() != k {
            return Err(Error::Malformed("every bibundle element needs both anchors".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = elements.iter().find(|e| !seen.insert(*e)) {
            return Err(Error::Malformed(format!("duplicate bibundle element {dup}")));
        }
        let mut left = HashMap::new();
        for (g, b, gb) in left_action {
            if b >= k || gb >= k {
                return Err(Error::Malformed("left action refers to unknown element".into()));
            }
            if left.insert((g, b), gb).is_some_and(|prev| prev != gb) {
                return Err(Error::Malformed(format!("conflicting left action on {}", elements[b])));
            }
        }
        let mut right = HashMap::new();
        for (b, h, bh) in right_action {
            if b >= k || bh >= k {
                return Err(Error::Malformed("right action refers to unknown element".into()));
            }
            if right.insert((b, h), bh).is_some_and(|prev| prev != bh) {
                return Err(Error::Malformed(format!("conflicting right action on {}", elements[b])));
            }
        }
        Ok(Self {
            elements,
            left_anchor,
            right_anchor,
            left_action: left,
            right_action: right,
        })
    }

    /// `G` as a `(G, G)`-bibundle over itself: elements are the arrows, both
    /// actions are composition.
    pub fn identity(g: &FiniteGroupoid) -> Bibundle {
        Self::along_arrows(g, g, &(0..g.object_count()).collect::<Vec<_>>())
    }

    /// Bibundle between `g` and its full subgroupoid on `subset`, formed by
    /// the arrows of `g` ending in `subset`.
    pub fn restriction(g: &FiniteGroupoid, subset: &[ObjectIx]) -> (FiniteGroupoid, Bibundle) {
        let sub = g.restrict(subset);
        let b = Self::along_arrows(g, &sub, subset);
        (sub, b)
    }

    fn along_arrows(g: &FiniteGroupoid, sub: &FiniteGroupoid, subset: &[ObjectIx]) -> Bibundle {
        let mut sub_index = vec![None; g.object_count()];
        for (i, id) in sub.objects().iter().enumerate() {
            sub_index[g.object_index(id).expect("subgroupoid object")] = Some(i);
        }
        debug_assert!(subset.iter().all(|&x| sub_index[x].is_some()));
        let arrows: Vec<ArrowIx> = (0..g.arrow_count())
            .filter(|&a| sub_index[g.target(a)].is_some())
            .collect();
        let mut element_of = vec![usize::MAX; g.arrow_count()];
        for (i, &a) in arrows.iter().enumerate() {
            element_of[a] = i;
        }
        let sub_arrow = |h: ArrowIx| g.arrow_index(sub.arrow_id(h)).expect("subgroupoid arrow");
        let mut left = Vec::new();
        for (i, &b) in arrows.iter().enumerate() {
            for &a in g.incoming(g.source(b)) {
                let ab = g.compose(a, b).expect("valid groupoid");
                left.push((a, i, element_of[ab]));
            }
        }
        let mut right = Vec::new();
        for h in 0..sub.arrow_count() {
            let hg = sub_arrow(h);
            for &b in g.incoming(g.source(hg)) {
                let bh = g.compose(b, hg).expect("valid groupoid");
                right.push((element_of[b], h, element_of[bh]));
            }
        }
        Bibundle::new(
            arrows.iter().map(|&a| g.arrow_id(a).to_string()).collect(),
            arrows.iter().map(|&a| g.source(a)).collect(),
            arrows.iter().map(|&a| sub_index[g.target(a)].unwrap()).collect(),
            left,
            right,
        )
        .expect("arrow bibundle is well-formed")
    }

    /// Bibundle between the block groupoids of two layouts with the same
    /// block groups: in block `i` its elements are `(x, y, γ)` with
    /// `x ∈ pair(n_i)`, `y ∈ pair(m_i)`, `γ ∈ Γ_i`.
    pub fn between_blocks(left: &[Block], right: &[Block]) -> Result<Bibundle> {
        if left.len() != right.len() || left.iter().zip(right).any(|(a, b)| a.group != b.group) {
            return Err(Error::Precondition("block layouts must share their groups".into()));
        }
        let mut elements = Vec::new();
        let mut la = Vec::new();
        let mut ra = Vec::new();
        let mut lact = Vec::new();
        let mut ract = Vec::new();
        let (mut lobj, mut robj, mut larr, mut rarr) = (0, 0, 0, 0);
        for (i, (lb, rb)) in left.iter().zip(right).enumerate() {
            let (n, m, q) = (lb.objects, rb.objects, lb.group.order());
            let group = &lb.group;
            let base = elements.len();
            let elem = |x: usize, y: usize, c: usize| base + (x * m + y) * q + c;
            for x in 0..n {
                for y in 0..m {
                    for c in 0..q {
                        elements.push(format!("b{i}.[x{x},y{y};{c}]"));
                        la.push(lobj + x);
                        ra.push(robj + y);
                    }
                }
            }
            for x in 0..n {
                for y in 0..m {
                    for c in 0..q {
                        // left arrow (j, x, d) sends (x, y, c) to (j, y, dc)
                        for j in 0..n {
                            for d in 0..q {
                                let g = larr + (j * n + x) * q + d;
                                lact.push((g, elem(x, y, c), elem(j, y, group.mul(d, c))));
                            }
                        }
                        // right arrow (y, z, e) sends (x, y, c) to (x, z, ce)
                        for z in 0..m {
                            for e in 0..q {
                                let h = rarr + (y * m + z) * q + e;
                                ract.push((elem(x, y, c), h, elem(x, z, group.mul(c, e))));
                            }
                        }
                    }
                }
            }
            lobj += n;
            robj += m;
            larr += n * n * q;
            rarr += m * m * q;
        }
        Bibundle::new(elements, la, ra, lact, ract)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn left_anchor(&self, b: usize) -> ObjectIx {
        self.left_anchor[b]
    }

    pub fn right_anchor(&self, b: usize) -> ObjectIx {
        self.right_anchor[b]
    }

    /// `g·b`.
    pub fn left_act(&self, g: ArrowIx, b: usize) -> Option<usize> {
        self.left_action.get(&(g, b)).copied()
    }

    /// `b·h`.
    pub fn right_act(&self, b: usize, h: ArrowIx) -> Option<usize> {
        self.right_action.get(&(b, h)).copied()
    }

    /// Left action entries `(g, b, g·b)`, sorted.
    pub fn left_action_entries(&self) -> Vec<(ArrowIx, usize, usize)> {
        let mut v: Vec<_> = self.left_action.iter().map(|(&(g, b), &gb)| (g, b, gb)).collect();
        v.sort_unstable();
        v
    }

    /// Right action entries `(b, h, b·h)`, sorted.
    pub fn right_action_entries(&self) -> Vec<(usize, ArrowIx, usize)> {
        let mut v: Vec<_> = self.right_action.iter().map(|(&(b, h), &bh)| (b, h, bh)).collect();
        v.sort_unstable();
        v
    }

    /// Isomorphic copy in which element `i` becomes element `perm[i]`.
    pub fn permuted(&self, perm: &[usize], ids: impl Fn(&str) -> String) -> Result<Bibundle> {
        let k = self.len();
        let mut inverse = vec![usize::MAX; k];
        for (i, &p) in perm.iter().enumerate() {
            if p >= k || inverse[p] != usize::MAX {
                return Err(Error::Precondition("not a permutation".into()));
            }
            inverse[p] = i;
        }
        let elements = (0..k).map(|p| ids(&self.elements[inverse[p]])).collect();
        Bibundle::new(
            elements,
            (0..k).map(|p| self.left_anchor[inverse[p]]).collect(),
            (0..k).map(|p| self.right_anchor[inverse[p]]).collect(),
            self.left_action.iter().map(|(&(g, b), &gb)| (g, perm[b], perm[gb])),
            self.right_action.iter().map(|(&(b, h), &bh)| (perm[b], h, perm[bh])),
        )
    }

    /// Check every bibundle axiom against `left` (acting on the left) and
    /// `right` (acting on the right).
    pub fn validate(&self, left: &FiniteGroupoid, right: &FiniteGroupoid) -> ValidationReport {
        let mut report = ValidationReport::default();
        let e = |b: usize| self.elements[b].clone();
        for b in 0..self.len() {
            if self.left_anchor[b] >= left.object_count() {
                report.push(Axiom::LeftActionAnchors, vec![e(b)], "left anchor out of range".into());
            }
            if self.right_anchor[b] >= right.object_count() {
                report.push(Axiom::RightActionAnchors, vec![e(b)], "right anchor out of range".into());
            }
        }
        for (&(g, _), _) in self.left_action.iter().filter(|((g, _), _)| *g >= left.arrow_count()) {
            report.push(Axiom::LeftActionDomain, vec![g.to_string()], "unknown left arrow".into());
        }
        for (&(_, h), _) in self.right_action.iter().filter(|((_, h), _)| *h >= right.arrow_count()) {
            report.push(Axiom::RightActionDomain, vec![h.to_string()], "unknown right arrow".into());
        }
        if !report.is_ok() {
            return report;
        }
        let la = |b: usize| self.left_anchor[b];
        let ra = |b: usize| self.right_anchor[b];

        // domains and anchors
        for (&(g, b), &gb) in sorted(&self.left_action) {
            if left.target(g) != la(b) {
                report.push(
                    Axiom::LeftActionDomain,
                    vec![left.arrow_id(g).into(), e(b)],
                    "left action defined although r(g) differs from the left anchor".into(),
                );
            } else if la(gb) != left.source(g) || ra(gb) != ra(b) {
                report.push(
                    Axiom::LeftActionAnchors,
                    vec![left.arrow_id(g).into(), e(b)],
                    "g·b has the wrong anchors".into(),
                );
            }
        }
        for (&(b, h), &bh) in sorted(&self.right_action) {
            if right.source(h) != ra(b) {
                report.push(
                    Axiom::RightActionDomain,
                    vec![e(b), right.arrow_id(h).into()],
                    "right action defined although l(h) differs from the right anchor".into(),
                );
            } else if ra(bh) != right.target(h) || la(bh) != la(b) {
                report.push(
                    Axiom::RightActionAnchors,
                    vec![e(b), right.arrow_id(h).into()],
                    "b·h has the wrong anchors".into(),
                );
            }
        }
        for b in 0..self.len() {
            for &g in left.incoming(la(b)) {
                if self.left_act(g, b).is_none() {
                    report.push(
                        Axiom::LeftActionDomain,
                        vec![left.arrow_id(g).into(), e(b)],
                        "left action undefined on a composable pair".into(),
                    );
                }
            }
            for &h in right.outgoing(ra(b)) {
                if self.right_act(b, h).is_none() {
                    report.push(
                        Axiom::RightActionDomain,
                        vec![e(b), right.arrow_id(h).into()],
                        "right action undefined on a composable pair".into(),
                    );
                }
            }
        }
        if !report.is_ok() {
            return report;
        }

        // unit, associativity, commutation, freeness
        for b in 0..self.len() {
            if self.left_act(left.identity(la(b)), b) != Some(b) {
                report.push(Axiom::LeftActionUnit, vec![e(b)], "identity moves b".into());
            }
            if self.right_act(b, right.identity(ra(b))) != Some(b) {
                report.push(Axiom::RightActionUnit, vec![e(b)], "identity moves b".into());
            }
            for &g in left.incoming(la(b)) {
                let gb = self.left_act(g, b).unwrap();
                if gb == b && g != left.identity(la(b)) {
                    report.push(
                        Axiom::LeftActionNotFree,
                        vec![left.arrow_id(g).into(), e(b)],
                        "non-identity arrow fixes b".into(),
                    );
                }
                for &g2 in left.incoming(left.source(g)) {
                    let composed = left.compose(g2, g).and_then(|gg| self.left_act(gg, b));
                    if composed != self.left_act(g2, gb) {
                        report.push(
                            Axiom::LeftActionAssociativity,
                            vec![left.arrow_id(g2).into(), left.arrow_id(g).into(), e(b)],
                            "(g'g)·b != g'·(g·b)".into(),
                        );
                    }
                }
                for &h in right.outgoing(ra(b)) {
                    let one = self.right_act(gb, h);
                    let two = self.right_act(b, h).and_then(|bh| self.left_act(g, bh));
                    if one != two {
                        report.push(
                            Axiom::ActionsCommute,
                            vec![left.arrow_id(g).into(), e(b), right.arrow_id(h).into()],
                            "(g·b)·h != g·(b·h)".into(),
                        );
                    }
                }
            }
            for &h in right.outgoing(ra(b)) {
                let bh = self.right_act(b, h).unwrap();
                if bh == b && h != right.identity(ra(b)) {
                    report.push(
                        Axiom::RightActionNotFree,
                        vec![e(b), right.arrow_id(h).into()],
                        "non-identity arrow fixes b".into(),
                    );
                }
                for &h2 in right.outgoing(right.target(h)) {
                    let composed = right.compose(h, h2).and_then(|hh| self.right_act(b, hh));
                    if composed != self.right_act(bh, h2) {
                        report.push(
                            Axiom::RightActionAssociativity,
                            vec![e(b), right.arrow_id(h).into(), right.arrow_id(h2).into()],
                            "b·(hh') != (b·h)·h'".into(),
                        );
                    }
                }
            }
            if report.full() {
                return report;
            }
        }

        // principality: transitive on the fibers of the opposite anchor, and
        // both anchors onto
        let mut by_right: Vec<Vec<usize>> = vec![Vec::new(); right.object_count()];
        let mut by_left: Vec<Vec<usize>> = vec![Vec::new(); left.object_count()];
        for b in 0..self.len() {
            by_right[ra(b)].push(b);
            by_left[la(b)].push(b);
        }
        for (y, fiber) in by_right.iter().enumerate() {
            let Some(&b0) = fiber.first() else {
                report.push(
                    Axiom::RightAnchorNotSurjective,
                    vec![right.object_id(y).into()],
                    "no element over this object".into(),
                );
                continue;
            };
            let reached: Vec<usize> =
                left.incoming(la(b0)).iter().filter_map(|&g| self.left_act(g, b0)).collect();
            if let Some(&missed) = fiber.iter().find(|b| !reached.contains(b)) {
                report.push(
                    Axiom::LeftActionNotTransitive,
                    vec![e(b0), e(missed)],
                    "no left arrow carries one element of the fiber to the other".into(),
                );
            }
        }
        for (x, fiber) in by_left.iter().enumerate() {
            let Some(&b0) = fiber.first() else {
                report.push(
                    Axiom::LeftAnchorNotSurjective,
                    vec![left.object_id(x).into()],
                    "no element over this object".into(),
                );
                continue;
            };
            let reached: Vec<usize> =
                right.outgoing(ra(b0)).iter().filter_map(|&h| self.right_act(b0, h)).collect();
            if let Some(&missed) = fiber.iter().find(|b| !reached.contains(b)) {
                report.push(
                    Axiom::RightActionNotTransitive,
                    vec![e(b0), e(missed)],
                    "no right arrow carries one element of the fiber to the other".into(),
                );
            }
        }
        report
    }

    /// Tensor product `B1 ⊗_{G2} B2`: the fibered product over `G2_0`
    /// modulo `(b1·h, b2) ~ (b1, h·b2)`.
    pub fn compose(
        &self,
        next: &Bibundle,
        middle: &FiniteGroupoid,
    ) -> Result<Bibundle> {
        let mut pairs = Vec::new();
        let mut pair_index = HashMap::new();
        for b1 in 0..self.len() {
            for b2 in 0..next.len() {
                if self.right_anchor[b1] == next.left_anchor[b2] {
                    pair_index.insert((b1, b2), pairs.len());
                    pairs.push((b1, b2));
                }
            }
        }
        let mut parent: Vec<usize> = (0..pairs.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let missing = || Error::Precondition("bibundle actions are not total".into());
        for (i, &(b1, b2)) in pairs.iter().enumerate() {
            for &h in middle.outgoing(self.right_anchor[b1]) {
                let b1h = self.right_act(b1, h).ok_or_else(missing)?;
                let hb2 = next.left_act(middle.inverse(h), b2).ok_or_else(missing)?;
                let j = *pair_index.get(&(b1h, hb2)).ok_or_else(missing)?;
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let mut class_of = vec![usize::MAX; pairs.len()];
        let mut reps = Vec::new();
        for i in 0..pairs.len() {
            let root = find(&mut parent, i);
            if class_of[root] == usize::MAX {
                class_of[root] = reps.len();
                reps.push(i);
            }
            class_of[i] = class_of[root];
        }
        let class = |b1: usize, b2: usize| -> Result<usize> {
            let i = *pair_index.get(&(b1, b2)).ok_or_else(missing)?;
            Ok(class_of[i])
        };
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (c, &i) in reps.iter().enumerate() {
            let (b1, b2) = pairs[i];
            for (&(g, x), &gx) in &self.left_action {
                if x == b1 {
                    left.push((g, c, class(gx, b2)?));
                }
            }
            for (&(x, k), &xk) in &next.right_action {
                if x == b2 {
                    right.push((c, k, class(b1, xk)?));
                }
            }
        }
        left.sort_unstable();
        right.sort_unstable();
        Bibundle::new(
            reps.iter()
                .map(|&i| format!("{}*{}", self.elements[pairs[i].0], next.elements[pairs[i].1]))
                .collect(),
            reps.iter().map(|&i| self.left_anchor[pairs[i].0]).collect(),
            reps.iter().map(|&i| next.right_anchor[pairs[i].1]).collect(),
            left,
            right,
        )
    }
}

fn sorted<K: Ord + Copy, V: Copy>(map: &HashMap<K, V>) -> Vec<(&K, &V)> {
    let mut v: Vec<_> = map.iter().collect();
    v.sort_unstable_by_key(|(k, _)| **k);
    v
}

/// The linking groupoid on `G′_0 ⊔ G″_0`: arrows are `G′`, `G″`, the
/// bibundle (from the `G′` side to the `G″` side) and its mirror image.
pub fn linking_groupoid(
    left: &FiniteGroupoid,
    right: &FiniteGroupoid,
    bundle: &Bibundle,
) -> Result<FiniteGroupoid> {
    left.ensure_valid()?;
    right.ensure_valid()?;
    let report = bundle.validate(left, right);
    if !report.is_ok() {
        return Err(Error::InvalidBibundle(report));
    }
    let (n1, m1, m2, k) = (left.object_count(), left.arrow_count(), right.arrow_count(), bundle.len());

    #[derive(Clone, Copy)]
    enum Kind {
        Left(ArrowIx),
        Right(ArrowIx),
        Bridge(usize),
        Cobridge(usize),
    }
    let kind = |a: ArrowIx| {
        if a < m1 {
            Kind::Left(a)
        } else if a < m1 + m2 {
            Kind::Right(a - m1)
        } else if a < m1 + m2 + k {
            Kind::Bridge(a - m1 - m2)
        } else {
            Kind::Cobridge(a - m1 - m2 - k)
        }
    };
    let (off_r, off_b, off_c) = (m1, m1 + m2, m1 + m2 + k);

    let mut objects: Vec<String> = left.objects().iter().map(|x| format!("{LEFT_PREFIX}{x}")).collect();
    objects.extend(right.objects().iter().map(|y| format!("{RIGHT_PREFIX}{y}")));
    let mut specs: Vec<ArrowSpec> = (0..m1)
        .map(|g| (format!("{LEFT_PREFIX}{}", left.arrow_id(g)), left.source(g), left.target(g)))
        .collect();
    specs.extend((0..m2).map(|h| {
        (format!("{RIGHT_PREFIX}{}", right.arrow_id(h)), n1 + right.source(h), n1 + right.target(h))
    }));
    specs.extend((0..k).map(|b| {
        (format!("{BRIDGE_PREFIX}{}", bundle.elements[b]), bundle.left_anchor(b), n1 + bundle.right_anchor(b))
    }));
    specs.extend((0..k).map(|b| {
        (format!("{COBRIDGE_PREFIX}{}", bundle.elements[b]), n1 + bundle.right_anchor(b), bundle.left_anchor(b))
    }));
    let mut identity: Vec<ArrowIx> = (0..n1).map(|x| left.identity(x)).collect();
    identity.extend((0..right.object_count()).map(|y| off_r + right.identity(y)));
    let mut inverse: Vec<ArrowIx> = (0..m1).map(|g| left.inverse(g)).collect();
    inverse.extend((0..m2).map(|h| off_r + right.inverse(h)));
    inverse.extend((0..k).map(|b| off_c + b));
    inverse.extend((0..k).map(|b| off_b + b));

    // g with g·c = b (same right anchor), h with c·h = b (same left anchor)
    let mut left_quotient = HashMap::new();
    let mut right_quotient = HashMap::new();
    for c in 0..k {
        for &g in left.incoming(bundle.left_anchor(c)) {
            left_quotient.insert((c, bundle.left_act(g, c).unwrap()), g);
        }
        for &h in right.outgoing(bundle.right_anchor(c)) {
            right_quotient.insert((c, bundle.right_act(c, h).unwrap()), h);
        }
    }

    let linking = FiniteGroupoid::from_parts(objects, specs, identity, inverse, |a, b| {
        match (kind(a), kind(b)) {
            (Kind::Left(g), Kind::Left(h)) => left.compose(g, h),
            (Kind::Right(g), Kind::Right(h)) => right.compose(g, h).map(|x| off_r + x),
            (Kind::Left(g), Kind::Bridge(c)) => bundle.left_act(g, c).map(|x| off_b + x),
            (Kind::Bridge(c), Kind::Right(h)) => bundle.right_act(c, h).map(|x| off_b + x),
            (Kind::Bridge(b), Kind::Cobridge(c)) => left_quotient.get(&(c, b)).copied(),
            (Kind::Cobridge(c), Kind::Bridge(b)) => right_quotient.get(&(c, b)).map(|x| off_r + x),
            (Kind::Cobridge(c), Kind::Left(g)) => {
                bundle.left_act(left.inverse(g), c).map(|x| off_c + x)
            }
            (Kind::Right(h), Kind::Cobridge(c)) => {
                bundle.right_act(c, right.inverse(h)).map(|x| off_c + x)
            }
            _ => None,
        }
    })?;
    Ok(linking.trusted())
}

/// Full subgroupoid on `subset`; errors when some orbit is missed.
pub fn restrict_full(g: &FiniteGroupoid, subset: &[ObjectIx]) -> Result<FiniteGroupoid> {
    check_full(g, subset)?;
    Ok(g.restrict(subset))
}

fn check_full(g: &FiniteGroupoid, subset: &[ObjectIx]) -> Result<()> {
    let orbits = g.orbits()?;
    if let Some(&x) = subset.iter().find(|&&x| x >= g.object_count()) {
        return Err(Error::UnknownObject(x.to_string()));
    }
    let mut hit = vec![false; orbits.len()];
    for &x in subset {
        hit[orbits.orbit_of(x)] = true;
    }
    match hit.iter().position(|h| !h) {
        Some(k) => Err(Error::NotFull(g.object_id(orbits.orbits[k].representative).to_string())),
        None => Ok(()),
    }
}

/// Unique orbitwise-constant extension of a section given on a full subset.
pub fn extend_invariant_section<S: Scalar>(
    g: &FiniteGroupoid,
    values: &[(ObjectIx, S)],
) -> Result<Vec<S>> {
    let subset: Vec<ObjectIx> = values.iter().map(|(x, _)| *x).collect();
    check_full(g, &subset)?;
    let orbits = g.orbits()?;
    let mut per_orbit: Vec<Option<S>> = vec![None; orbits.len()];
    for (x, v) in values {
        let k = orbits.orbit_of(*x);
        match &per_orbit[k] {
            Some(prev) if prev != v => {
                return Err(Error::InconsistentSection(g.object_id(*x).to_string()))
            }
            Some(_) => {}
            None => per_orbit[k] = Some(v.clone()),
        }
    }
    Ok((0..g.object_count())
        .map(|x| per_orbit[orbits.orbit_of(x)].clone().expect("full subset"))
        .collect())
}

/// Move an invariant section of `left` to the corresponding section of
/// `right` through the linking groupoid.
pub fn transfer_section<S: Scalar>(
    left: &FiniteGroupoid,
    right: &FiniteGroupoid,
    bundle: &Bibundle,
    lambda: &[S],
) -> Result<Vec<S>> {
    if lambda.len() != left.object_count() {
        return Err(Error::Precondition("section must cover every object".into()));
    }
    left.check_invariant(&left.orbits()?, lambda)?;
    let linking = linking_groupoid(left, right, bundle)?;
    let n1 = left.object_count();
    let given: Vec<(ObjectIx, S)> = lambda.iter().cloned().enumerate().collect();
    let extended = extend_invariant_section(&linking, &given)?;
    Ok(extended[n1..].to_vec())
}

/// Both sides of the Morita volume comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct MoritaReport<S> {
    pub left: S,
    pub right: S,
    pub equal: bool,
}

/// Compare the fiber volumes of two Morita-equivalent groupoids whose
/// weights define corresponding sections.
pub fn morita_volume_check<S: Scalar>(
    left: &FiniteGroupoid,
    right: &FiniteGroupoid,
    bundle: &Bibundle,
    left_weights: &WeightData<S>,
    right_weights: &WeightData<S>,
) -> Result<MoritaReport<S>> {
    let lambda_left = left.invariant_section(&left.orbits()?, left_weights)?;
    let expected = transfer_section(left, right, bundle, &lambda_left)?;
    if right_weights.a.len() != right.object_count() || right_weights.b.len() != right.object_count() {
        return Err(Error::Precondition("right weights must cover every object".into()));
    }
    if let Some(y) = right_weights.a.iter().position(|a| a.is_zero()) {
        return Err(Error::ZeroWeight { object: right.object_id(y).to_string() });
    }
    let actual = right_weights.section();
    if let Some(y) = (0..right.object_count()).find(|&y| expected[y] != actual[y]) {
        return Err(Error::SectionsNotCorresponding {
            object: right.object_id(y).to_string(),
            expected: format!("{:?}", expected[y]),
            actual: format!("{:?}", actual[y]),
        });
    }
    let l = left.fiber_volume(left_weights)?;
    let r = right.fiber_volume(right_weights)?;
    let equal = l == r;
    Ok(MoritaReport { left: l, right: r, equal })
}
