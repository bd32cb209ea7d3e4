use super::{FiniteGroupoid, ObjectIx};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// Objects of the orbit in groupoid order.
    pub objects: Vec<ObjectIx>,
    /// Order of the isotropy group at any object of the orbit.
    pub isotropy_order: usize,
    pub representative: ObjectIx,
}

/// Partition of the objects into orbits, ordered by first object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Orbit>,
    orbit_of: Vec<usize>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Index of the orbit containing `x`.
    pub fn orbit_of(&self, x: ObjectIx) -> usize {
        self.orbit_of[x]
    }
}

impl FiniteGroupoid {
    /// Orbits and isotropy orders. Rejects groupoids that fail validation.
    pub fn orbits(&self) -> Result<OrbitDecomposition> {
        self.ensure_valid()?;
        Ok(self.orbits_unchecked())
    }

    pub(crate) fn orbits_unchecked(&self) -> OrbitDecomposition {
        let n = self.object_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in 0..self.arrow_count() {
            let (a, b) = (find(&mut parent, self.source(g)), find(&mut parent, self.target(g)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }

        let mut root_to_orbit = vec![usize::MAX; n];
        let mut orbit_of = vec![0; n];
        let mut orbits: Vec<Orbit> = Vec::new();
        for x in 0..n {
            let root = find(&mut parent, x);
            if root_to_orbit[root] == usize::MAX {
                root_to_orbit[root] = orbits.len();
                let isotropy_order = self.loops_at(x);
                orbits.push(Orbit {
                    objects: Vec::new(),
                    isotropy_order,
                    representative: x,
                });
            }
            let k = root_to_orbit[root];
            orbit_of[x] = k;
            orbits[k].objects.push(x);
        }
        OrbitDecomposition { orbits, orbit_of }
    }

    /// Number of arrows `g` with `l(g) = r(g) = x`.
    pub fn loops_at(&self, x: ObjectIx) -> usize {
        self.outgoing(x).iter().filter(|&&g| self.target(g) == x).count()
    }
}
