//! Finite groups given by multiplication tables.

use crate::error::{Error, Result};

/// A finite group on the elements `0..order`, element `0` being the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Build from a Cayley table, checking the group axioms.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not square over 0..n".into()));
        }
        for x in 0..n {
            if table[0][x] != x || table[x][0] != x {
                return Err(Error::InvalidGroup(format!("0 is not a unit at {x}")));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == 0) {
                Some(y) if table[y][x] == 0 => inverse[x] = y,
                _ => return Err(Error::InvalidGroup(format!("{x} has no two-sided inverse"))),
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            name: name.into(),
            table,
            inverse,
        })
    }

    fn from_table_unchecked(name: String, table: Vec<Vec<usize>>) -> Self {
        let n = table.len();
        let inverse = (0..n)
            .map(|x| (0..n).find(|&y| table[x][y] == 0).expect("group table"))
            .collect();
        Self {
            name,
            table,
            inverse,
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order zero");
        let table = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        Self::from_table_unchecked(format!("Z{n}"), table)
    }

    /// Dihedral group of order `2n`; element `k + n*s` is `rot^k * ref^s`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0);
        let m = 2 * n;
        let mul = |a: usize, b: usize| {
            let (k1, s1) = (a % n, a / n);
            let (k2, s2) = (b % n, b / n);
            // ref * rot^k = rot^-k * ref
            let k = if s1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
            k + n * ((s1 + s2) % 2)
        };
        let table = (0..m).map(|a| (0..m).map(|b| mul(a, b)).collect()).collect();
        Self::from_table_unchecked(format!("D{n}"), table)
    }

    /// Symmetric group on `n` letters, permutations in lexicographic order
    /// (identity first). Product `pq` means "apply q, then p".
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index(&q.iter().map(|&i| p[i]).collect()))
                    .collect()
            })
            .collect();
        Self::from_table_unchecked(format!("S{n}"), table)
    }

    /// Quaternion group `Q8` in the order `1, -1, i, -i, j, -j, k, -k`.
    pub fn quaternion() -> Self {
        // unit index u in {1,i,j,k} -> 0..4, sign bit
        let unit_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let mul = |a: usize, b: usize| {
            let (u, neg) = unit_mul(a / 2, b / 2);
            let sign = (a % 2) ^ (b % 2) ^ (neg as usize);
            2 * u + sign
        };
        let table = (0..8).map(|a| (0..8).map(|b| mul(a, b)).collect()).collect();
        Self::from_table_unchecked("Q8".into(), table)
    }

    /// Direct product; element `(x, y)` is stored as `x * |other| + y`.
    pub fn product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|a| {
                (0..n * m)
                    .map(|b| self.mul(a / m, b / m) * m + other.mul(a % m, b % m))
                    .collect()
            })
            .collect();
        Self::from_table_unchecked(format!("{}x{}", self.name, other.name), table)
    }

    /// One representative of every isomorphism class of order `<= max_order`
    /// (complete up to order 8).
    pub fn small_groups(max_order: usize) -> Vec<FiniteGroup> {
        let z2 = Self::cyclic(2);
        let mut all = vec![
            Self::cyclic(1),
            Self::cyclic(2),
            Self::cyclic(3),
            Self::cyclic(4),
            z2.product(&z2),
            Self::cyclic(5),
            Self::cyclic(6),
            Self::symmetric(3),
            Self::cyclic(7),
            Self::cyclic(8),
            Self::cyclic(4).product(&z2),
            z2.product(&z2).product(&z2),
            Self::dihedral(4),
            Self::quaternion(),
        ];
        all.retain(|g| g.order() <= max_order);
        all
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_tables_satisfy_group_axioms() {
        for g in FiniteGroup::small_groups(8) {
            let checked = FiniteGroup::from_table(g.name(), g.table.clone());
            assert!(checked.is_ok(), "{} fails: {:?}", g.name(), checked.err());
        }
        assert!(FiniteGroup::from_table("S4", FiniteGroup::symmetric(4).table).is_ok());
    }

    #[test]
    fn catalog_orders() {
        let orders: Vec<_> = FiniteGroup::small_groups(8).iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8]);
        assert_eq!(FiniteGroup::small_groups(1).len(), 1);
    }

    #[test]
    fn nonabelian_members_are_nonabelian() {
        for g in [FiniteGroup::symmetric(3), FiniteGroup::dihedral(4), FiniteGroup::quaternion()] {
            let commutes = g
                .elements()
                .all(|a| g.elements().all(|b| g.mul(a, b) == g.mul(b, a)));
            assert!(!commutes, "{}", g.name());
        }
    }

    #[test]
    fn rejects_non_group() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table("bad", bad).is_err());
    }
}
