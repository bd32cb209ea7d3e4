//! Standard constructions: pair groupoids, classifying groupoids, action
//! groupoids and the seeded block generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ArrowSpec, FiniteGroupoid};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// One block `pair(n) × Γ` of a block groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub objects: usize,
    pub group: FiniteGroup,
}

/// Size limits for [`FiniteGroupoid::random`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomBounds {
    /// Upper bound on the total number of objects.
    pub max_objects: usize,
    /// Upper bound on the order of each block group.
    pub max_group_order: usize,
    /// Upper bound on the number of objects in a single block.
    pub max_block_objects: usize,
}

impl RandomBounds {
    pub fn new(max_objects: usize, max_group_order: usize) -> Self {
        Self {
            max_objects,
            max_group_order,
            max_block_objects: max_objects,
        }
    }

    pub fn with_max_block_objects(mut self, n: usize) -> Self {
        self.max_block_objects = n;
        self
    }
}

impl FiniteGroupoid {
    /// Pair groupoid on the given objects: exactly one arrow `(x, y)` for
    /// every ordered pair.
    pub fn pair<S: AsRef<str>>(objects: &[S]) -> FiniteGroupoid {
        let block = Block {
            objects: objects.len(),
            group: FiniteGroup::trivial(),
        };
        let names: Vec<String> = objects.iter().map(|s| s.as_ref().to_string()).collect();
        Self::block_with_names(&block, &names, "")
    }

    /// `pt // Γ`: one object whose arrows are the group elements.
    pub fn classifying(group: &FiniteGroup) -> FiniteGroupoid {
        let block = Block {
            objects: 1,
            group: group.clone(),
        };
        Self::block_with_names(&block, &["pt".to_string()], "")
    }

    /// Disjoint union of blocks `pair(n_i) × Γ_i`; ids are namespaced `b{i}.`.
    pub fn from_blocks(blocks: &[Block]) -> FiniteGroupoid {
        let parts: Vec<FiniteGroupoid> = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let names: Vec<String> = (0..b.objects).map(|j| format!("x{j}")).collect();
                Self::block_with_names(b, &names, &format!("b{i}."))
            })
            .collect();
        let tagged: Vec<(&str, &FiniteGroupoid)> = parts.iter().map(|g| ("", g)).collect();
        FiniteGroupoid::disjoint_union(&tagged).expect("block ids are distinct")
    }

    fn block_with_names(block: &Block, names: &[String], prefix: &str) -> FiniteGroupoid {
        let n = block.objects;
        let group = &block.group;
        let q = group.order();
        let index = |j: usize, k: usize, c: usize| (j * n + k) * q + c;
        let mut specs: Vec<ArrowSpec> = Vec::with_capacity(n * n * q);
        for j in 0..n {
            for k in 0..n {
                for c in 0..q {
                    let id = if q == 1 {
                        format!("{prefix}({},{})", names[j], names[k])
                    } else {
                        format!("{prefix}({},{};{c})", names[j], names[k])
                    };
                    specs.push((id, j, k));
                }
            }
        }
        let objects = names.iter().map(|s| format!("{prefix}{s}")).collect();
        let identity = (0..n).map(|j| index(j, j, group.identity())).collect();
        let inverse = (0..n * n * q)
            .map(|a| {
                let (jk, c) = (a / q, a % q);
                index(jk % n, jk / n, group.inv(c))
            })
            .collect();
        FiniteGroupoid::from_parts(objects, specs, identity, inverse, |g, h| {
            let (j, c1) = (g / q / n, g % q);
            let (l, c2) = ((h / q) % n, h % q);
            Some(index(j, l, group.mul(c1, c2)))
        })
        .expect("block construction is well-formed")
        .trusted()
    }

    /// Transformation groupoid `H × X ⇉ X` of a left action, with
    /// `l(h, x) = h·x` and `r(h, x) = x`. The action axioms are checked.
    pub fn action<S: AsRef<str>>(
        group: &FiniteGroup,
        points: &[S],
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<FiniteGroupoid> {
        let n = points.len();
        let q = group.order();
        let mut table = vec![vec![0; n]; q];
        for h in 0..q {
            for x in 0..n {
                let y = act(h, x);
                if y >= n {
                    return Err(Error::InvalidAction(format!("{h}·{x} = {y} is not a point")));
                }
                table[h][x] = y;
            }
        }
        for x in 0..n {
            if table[group.identity()][x] != x {
                return Err(Error::InvalidAction(format!("identity moves point {x}")));
            }
            for g in 0..q {
                for h in 0..q {
                    if table[group.mul(g, h)][x] != table[g][table[h][x]] {
                        return Err(Error::InvalidAction(format!(
                            "({g}{h})·{x} != {g}·({h}·{x})"
                        )));
                    }
                }
            }
        }
        let names: Vec<&str> = points.iter().map(|p| p.as_ref()).collect();
        let index = |h: usize, x: usize| h * n + x;
        let specs = (0..q)
            .flat_map(|h| (0..n).map(move |x| (h, x)))
            .map(|(h, x)| (format!("{h}@{}", names[x]), table[h][x], x))
            .collect();
        let identity = (0..n).map(|x| index(group.identity(), x)).collect();
        let inverse = (0..q * n)
            .map(|a| {
                let (h, x) = (a / n, a % n);
                index(group.inv(h), table[h][x])
            })
            .collect();
        let groupoid = FiniteGroupoid::from_parts(
            names.iter().map(|s| s.to_string()).collect(),
            specs,
            identity,
            inverse,
            |g, h| {
                // (h1, x1)(h2, x2) = (h1 h2, x2), defined when x1 = h2·x2.
                let (h1, h2, x2) = (g / n, h / n, h % n);
                Some(index(group.mul(h1, h2), x2))
            },
        )?;
        Ok(groupoid.trusted())
    }

    /// Seeded random block groupoid; the same seed always gives the same output.
    pub fn random(seed: u64, bounds: RandomBounds) -> Result<FiniteGroupoid> {
        Ok(Self::from_blocks(&random_blocks(seed, bounds)?))
    }
}

/// The block layout behind [`FiniteGroupoid::random`].
pub fn random_blocks(seed: u64, bounds: RandomBounds) -> Result<Vec<Block>> {
    if bounds.max_objects == 0 || bounds.max_group_order == 0 || bounds.max_block_objects == 0 {
        return Err(Error::Precondition("random groupoid bounds must be positive".into()));
    }
    let groups = FiniteGroup::small_groups(bounds.max_group_order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = rng.random_range(1..=bounds.max_objects);
    let mut remaining = total;
    let mut blocks = Vec::new();
    while remaining > 0 {
        let n = rng.random_range(1..=remaining.min(bounds.max_block_objects));
        let group = groups[rng.random_range(0..groups.len())].clone();
        blocks.push(Block { objects: n, group });
        remaining -= n;
    }
    Ok(blocks)
}
