//! Finite groupoids given by explicit tables.
//!
//! Conventions: every arrow `g` has a left anchor `l(g)` and a right anchor
//! `r(g)`, and the product `gh` is defined exactly when `r(g) = l(h)`, in
//! which case `l(gh) = l(g)` and `r(gh) = r(h)`.

mod construct;
mod orbits;
mod validate;
mod volume;

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub use construct::{random_blocks, Block, RandomBounds};
pub use orbits::{Orbit, OrbitDecomposition};
pub use validate::{Axiom, ValidationReport, Violation};
pub use volume::{finite_sets_cardinality, WeightData};

pub type ObjectIx = usize;
pub type ArrowIx = usize;

/// A finite groupoid `G ⇉ G_0`.
///
/// Composition is stored densely: for each arrow `g`, one slot per arrow
/// `h` with `l(h) = r(g)`. Entries supplied for non-composable pairs are
/// kept aside so that [`FiniteGroupoid::validate`] can report them.
#[derive(Clone, Debug)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    object_lookup: HashMap<String, ObjectIx>,
    arrow_lookup: HashMap<String, ArrowIx>,
    source: Vec<ObjectIx>,
    target: Vec<ObjectIx>,
    identity: Vec<ArrowIx>,
    inverse: Vec<ArrowIx>,
    outgoing: Vec<Vec<ArrowIx>>,
    incoming: Vec<Vec<ArrowIx>>,
    slot: Vec<usize>,
    compose: Vec<Vec<Option<ArrowIx>>>,
    stray: Vec<(ArrowIx, ArrowIx, ArrowIx)>,
    valid: OnceLock<bool>,
}

/// One arrow as `(id, l, r)` with anchors given as object indices.
pub type ArrowSpec = (String, ObjectIx, ObjectIx);

impl FiniteGroupoid {
    /// Assemble a groupoid from index-based tables. `compose` is queried once
    /// for every composable pair; `None` leaves the slot undefined.
    pub fn from_parts(
        objects: Vec<String>,
        arrows: Vec<ArrowSpec>,
        identity: Vec<ArrowIx>,
        inverse: Vec<ArrowIx>,
        mut compose: impl FnMut(ArrowIx, ArrowIx) -> Option<ArrowIx>,
    ) -> Result<Self> {
        let n = objects.len();
        let m = arrows.len();
        let object_lookup = unique_lookup(&objects, "object")?;
        let arrow_ids: Vec<String> = arrows.iter().map(|a| a.0.clone()).collect();
        let arrow_lookup = unique_lookup(&arrow_ids, "arrow")?;
        let source: Vec<_> = arrows.iter().map(|a| a.1).collect();
        let target: Vec<_> = arrows.iter().map(|a| a.2).collect();
        if let Some(a) = arrows.iter().find(|a| a.1 >= n || a.2 >= n) {
            return Err(Error::Malformed(format!("arrow {} has an unknown anchor", a.0)));
        }
        if identity.len() != n || identity.iter().any(|&g| g >= m) {
            return Err(Error::Malformed("identity table must map every object to an arrow".into()));
        }
        if inverse.len() != m || inverse.iter().any(|&g| g >= m) {
            return Err(Error::Malformed("inverse table must map every arrow to an arrow".into()));
        }

        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        let mut slot = vec![0; m];
        for g in 0..m {
            slot[g] = outgoing[source[g]].len();
            outgoing[source[g]].push(g);
            incoming[target[g]].push(g);
        }
        let mut table = Vec::with_capacity(m);
        for g in 0..m {
            let row: Vec<Option<ArrowIx>> = outgoing[target[g]]
                .iter()
                .map(|&h| compose(g, h))
                .collect();
            if let Some(bad) = row.iter().flatten().find(|&&x| x >= m) {
                return Err(Error::Malformed(format!("composite index {bad} out of range")));
            }
            table.push(row);
        }
        Ok(Self {
            objects,
            arrows: arrow_ids,
            object_lookup,
            arrow_lookup,
            source,
            target,
            identity,
            inverse,
            outgoing,
            incoming,
            slot,
            compose: table,
            stray: Vec::new(),
            valid: OnceLock::new(),
        })
    }

    /// Assemble a groupoid from id-based tables, as read from the interchange
    /// format. Unknown ids, duplicate ids, missing identities or inverses and
    /// conflicting composition entries are malformed input; every other defect
    /// is left for [`FiniteGroupoid::validate`].
    pub fn from_tables(
        objects: Vec<String>,
        arrows: Vec<(String, String, String)>,
        identity: &[(String, String)],
        inverse: &[(String, String)],
        compose: &[(String, String, String)],
    ) -> Result<Self> {
        let object_lookup = unique_lookup(&objects, "object")?;
        let obj = |id: &str| {
            object_lookup
                .get(id)
                .copied()
                .ok_or_else(|| Error::Malformed(format!("unknown object {id}")))
        };
        let mut specs = Vec::with_capacity(arrows.len());
        for (id, l, r) in arrows {
            let (l, r) = (obj(&l)?, obj(&r)?);
            specs.push((id, l, r));
        }
        let arrow_ids: Vec<String> = specs.iter().map(|a| a.0.clone()).collect();
        let arrow_lookup = unique_lookup(&arrow_ids, "arrow")?;
        let arr = |id: &str| {
            arrow_lookup
                .get(id)
                .copied()
                .ok_or_else(|| Error::Malformed(format!("unknown arrow {id}")))
        };

        let mut ident = vec![None; objects.len()];
        for (x, g) in identity {
            let x = obj(x)?;
            if ident[x].replace(arr(g)?).is_some() {
                return Err(Error::Malformed(format!("duplicate identity for {}", objects[x])));
            }
        }
        let ident = ident
            .into_iter()
            .enumerate()
            .map(|(x, g)| g.ok_or_else(|| Error::Malformed(format!("no identity for {}", objects[x]))))
            .collect::<Result<Vec<_>>>()?;

        let mut inv = vec![None; specs.len()];
        for (g, h) in inverse {
            let g = arr(g)?;
            if inv[g].replace(arr(h)?).is_some() {
                return Err(Error::Malformed(format!("duplicate inverse for {}", arrow_ids[g])));
            }
        }
        let inv = inv
            .into_iter()
            .enumerate()
            .map(|(g, h)| h.ok_or_else(|| Error::Malformed(format!("no inverse for {}", arrow_ids[g]))))
            .collect::<Result<Vec<_>>>()?;

        let mut products: HashMap<(ArrowIx, ArrowIx), ArrowIx> = HashMap::new();
        for (g, h, gh) in compose {
            let key = (arr(g)?, arr(h)?);
            let gh = arr(gh)?;
            if let Some(prev) = products.insert(key, gh) {
                if prev != gh {
                    return Err(Error::Malformed(format!("conflicting products for ({g}, {h})")));
                }
            }
        }
        let targets: Vec<ObjectIx> = specs.iter().map(|a| a.2).collect();
        let sources: Vec<ObjectIx> = specs.iter().map(|a| a.1).collect();
        let mut stray: Vec<_> = products
            .iter()
            .filter(|((g, h), _)| targets[*g] != sources[*h])
            .map(|(&(g, h), &gh)| (g, h, gh))
            .collect();
        stray.sort_unstable();

        let mut groupoid = Self::from_parts(objects, specs, ident, inv, |g, h| {
            products.get(&(g, h)).copied()
        })?;
        groupoid.stray = stray;
        Ok(groupoid)
    }

    /// Mark the groupoid as valid by construction, skipping the exhaustive
    /// check in [`FiniteGroupoid::ensure_valid`].
    pub(crate) fn trusted(self) -> Self {
        let _ = self.valid.set(true);
        self
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[String] {
        &self.arrows
    }

    pub fn object_id(&self, x: ObjectIx) -> &str {
        &self.objects[x]
    }

    pub fn arrow_id(&self, g: ArrowIx) -> &str {
        &self.arrows[g]
    }

    pub fn object_index(&self, id: &str) -> Option<ObjectIx> {
        self.object_lookup.get(id).copied()
    }

    pub fn arrow_index(&self, id: &str) -> Option<ArrowIx> {
        self.arrow_lookup.get(id).copied()
    }

    /// Left anchor `l(g)`.
    pub fn source(&self, g: ArrowIx) -> ObjectIx {
        self.source[g]
    }

    /// Right anchor `r(g)`.
    pub fn target(&self, g: ArrowIx) -> ObjectIx {
        self.target[g]
    }

    pub fn identity(&self, x: ObjectIx) -> ArrowIx {
        self.identity[x]
    }

    pub fn inverse(&self, g: ArrowIx) -> ArrowIx {
        self.inverse[g]
    }

    /// `gh`, or `None` when `r(g) != l(h)` or the table leaves it undefined.
    pub fn compose(&self, g: ArrowIx, h: ArrowIx) -> Option<ArrowIx> {
        if self.target[g] != self.source[h] {
            return None;
        }
        self.compose[g][self.slot[h]]
    }

    /// Arrows with `l(g) = x`.
    pub fn outgoing(&self, x: ObjectIx) -> &[ArrowIx] {
        &self.outgoing[x]
    }

    /// Arrows with `r(g) = y`, i.e. the fiber `r^-1(y)`.
    pub fn incoming(&self, y: ObjectIx) -> &[ArrowIx] {
        &self.incoming[y]
    }

    /// Every defined composition entry as `(g, h, gh)`, stray ones included.
    pub fn composition_entries(&self) -> Vec<(ArrowIx, ArrowIx, ArrowIx)> {
        let mut out = Vec::new();
        for g in 0..self.arrow_count() {
            for (k, &h) in self.outgoing[self.target[g]].iter().enumerate() {
                if let Some(gh) = self.compose[g][k] {
                    out.push((g, h, gh));
                }
            }
        }
        out.extend(self.stray.iter().copied());
        out
    }

    pub(crate) fn stray_entries(&self) -> &[(ArrowIx, ArrowIx, ArrowIx)] {
        &self.stray
    }

    /// Run the full axiom check once and cache the verdict.
    pub fn ensure_valid(&self) -> Result<()> {
        if *self.valid.get_or_init(|| self.validate().is_ok()) {
            Ok(())
        } else {
            Err(Error::InvalidGroupoid(self.validate()))
        }
    }

    /// Full subgroupoid on `subset` (object order follows `self`).
    pub fn restrict(&self, subset: &[ObjectIx]) -> FiniteGroupoid {
        let mut keep = vec![None; self.object_count()];
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (new, &old) in sorted.iter().enumerate() {
            keep[old] = Some(new);
        }
        let arrows: Vec<ArrowIx> = (0..self.arrow_count())
            .filter(|&g| keep[self.source[g]].is_some() && keep[self.target[g]].is_some())
            .collect();
        let mut new_arrow = vec![usize::MAX; self.arrow_count()];
        for (new, &old) in arrows.iter().enumerate() {
            new_arrow[old] = new;
        }
        let specs = arrows
            .iter()
            .map(|&g| {
                (
                    self.arrows[g].clone(),
                    keep[self.source[g]].unwrap(),
                    keep[self.target[g]].unwrap(),
                )
            })
            .collect();
        let objects = sorted.iter().map(|&x| self.objects[x].clone()).collect();
        let identity = sorted.iter().map(|&x| new_arrow[self.identity[x]]).collect();
        let inverse = arrows.iter().map(|&g| new_arrow[self.inverse[g]]).collect();
        let lift = |new: ArrowIx| arrows[new];
        let restricted = FiniteGroupoid::from_parts(objects, specs, identity, inverse, |g, h| {
            self.compose(lift(g), lift(h)).map(|gh| new_arrow[gh])
        })
        .expect("restriction of a well-formed groupoid is well-formed");
        if self.valid.get() == Some(&true) {
            restricted.trusted()
        } else {
            restricted
        }
    }

    /// Same groupoid with renamed objects and arrows.
    pub fn relabel(
        &self,
        object: impl Fn(&str) -> String,
        arrow: impl Fn(&str) -> String,
    ) -> Result<FiniteGroupoid> {
        let mut out = self.clone();
        out.objects = self.objects.iter().map(|s| object(s)).collect();
        out.arrows = self.arrows.iter().map(|s| arrow(s)).collect();
        out.object_lookup = unique_lookup(&out.objects, "object")?;
        out.arrow_lookup = unique_lookup(&out.arrows, "arrow")?;
        Ok(out)
    }

    /// Disjoint union with every id prefixed by its part's tag.
    pub fn disjoint_union(parts: &[(&str, &FiniteGroupoid)]) -> Result<FiniteGroupoid> {
        let mut objects = Vec::new();
        let mut specs = Vec::new();
        let mut identity = Vec::new();
        let mut inverse = Vec::new();
        let mut arrow_offsets = Vec::new();
        for (tag, g) in parts {
            let (obj_off, arr_off) = (objects.len(), specs.len());
            arrow_offsets.push(arr_off);
            objects.extend(g.objects.iter().map(|x| format!("{tag}{x}")));
            specs.extend((0..g.arrow_count()).map(|a| {
                (format!("{tag}{}", g.arrows[a]), g.source[a] + obj_off, g.target[a] + obj_off)
            }));
            identity.extend(g.identity.iter().map(|&a| a + arr_off));
            inverse.extend(g.inverse.iter().map(|&a| a + arr_off));
        }
        let locate = |a: ArrowIx| {
            let part = arrow_offsets.partition_point(|&off| off <= a) - 1;
            (part, a - arrow_offsets[part])
        };
        let all_valid = parts.iter().all(|(_, g)| g.valid.get() == Some(&true));
        let union = FiniteGroupoid::from_parts(objects, specs, identity, inverse, |g, h| {
            let ((pg, ig), (ph, ih)) = (locate(g), locate(h));
            if pg != ph {
                return None;
            }
            parts[pg].1.compose(ig, ih).map(|x| x + arrow_offsets[pg])
        })?;
        Ok(if all_valid { union.trusted() } else { union })
    }
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.arrows == other.arrows
            && self.source == other.source
            && self.target == other.target
            && self.identity == other.identity
            && self.inverse == other.inverse
            && self.compose == other.compose
            && self.stray == other.stray
    }
}

fn unique_lookup(ids: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut lookup = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if lookup.insert(id.clone(), i).is_some() {
            return Err(Error::Malformed(format!("duplicate {what} id {id}")));
        }
    }
    Ok(lookup)
}
