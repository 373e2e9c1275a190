//! Multiplication-table groups.
//!
//! Elements are indices `0..order`; index 0 is always the identity. Every
//! constructor produces a canonical, deterministic element ordering so that
//! reports built on top of these groups are byte-stable.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::limits::Limits;

/// An element of a [`FiniteGroup`], referenced by index.
pub type Elem = u32;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Elem>,
    inverse: Vec<Elem>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

/// How a group is specified in fixtures and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDescriptor {
    Cyclic(usize),
    Product(Vec<GroupDescriptor>),
    Klein4,
    /// Full multiplication table; row 0 / column 0 must be the identity.
    Table(Vec<Vec<Elem>>),
    /// Permutations of `0..degree` given by their image lists.
    Permutation {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
}

/// Builds a validated group from a descriptor.
pub fn build_group(desc: &GroupDescriptor, limits: &Limits) -> Result<FiniteGroup> {
    match desc {
        GroupDescriptor::Cyclic(n) => FiniteGroup::cyclic_checked(*n, limits),
        GroupDescriptor::Klein4 => {
            let c2 = FiniteGroup::cyclic(2);
            FiniteGroup::product_checked(&[&c2, &c2], limits)
        }
        GroupDescriptor::Product(parts) => {
            let built = parts
                .iter()
                .map(|p| build_group(p, limits))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&FiniteGroup> = built.iter().collect();
            FiniteGroup::product_checked(&refs, limits)
        }
        GroupDescriptor::Table(rows) => {
            if rows.len() > limits.group_order {
                return Err(Error::SizeLimit {
                    what: "group order",
                    needed: rows.len(),
                    limit: limits.group_order,
                });
            }
            FiniteGroup::from_table(rows)
        }
        GroupDescriptor::Permutation { degree, generators } => FiniteGroup::permutation(*degree, generators, limits),
    }
}

impl FiniteGroup {
    /// The trivial group.
    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    /// Cyclic group of order `n` with residues in ascending order.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order zero");
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(((a + b) % n) as Elem);
            }
        }
        FiniteGroup::from_table_unchecked(n, table)
    }

    fn cyclic_checked(n: usize, limits: &Limits) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup("cyclic group of order 0".into()));
        }
        if n > limits.group_order {
            return Err(Error::SizeLimit {
                what: "group order",
                needed: n,
                limit: limits.group_order,
            });
        }
        Ok(FiniteGroup::cyclic(n))
    }

    /// Direct product with lexicographic element order (first factor most significant).
    pub fn product(parts: &[&FiniteGroup]) -> Self {
        FiniteGroup::product_checked(
            parts,
            &Limits {
                group_order: usize::MAX,
                ..Limits::default()
            },
        )
        .expect("unbounded product")
    }

    fn product_checked(parts: &[&FiniteGroup], limits: &Limits) -> Result<Self> {
        let order = parts
            .iter()
            .try_fold(1usize, |acc, g| acc.checked_mul(g.order()))
            .unwrap_or(usize::MAX);
        if order > limits.group_order {
            return Err(Error::SizeLimit {
                what: "group order",
                needed: order,
                limit: limits.group_order,
            });
        }
        let coords: Vec<Vec<Elem>> = (0..order).map(|x| product_coords(parts, x)).collect();
        let mut table = Vec::with_capacity(order * order);
        for a in &coords {
            for b in &coords {
                let mut idx = 0usize;
                for (k, g) in parts.iter().enumerate() {
                    idx = idx * g.order() + g.mul(a[k], b[k]) as usize;
                }
                table.push(idx as Elem);
            }
        }
        Ok(FiniteGroup::from_table_unchecked(order, table))
    }

    /// Klein four group `C2 x C2`.
    pub fn klein4() -> Self {
        let c2 = FiniteGroup::cyclic(2);
        FiniteGroup::product(&[&c2, &c2])
    }

    /// Permutation group generated by `generators` (image lists on `0..degree`).
    ///
    /// Elements are sorted lexicographically by image list, so the identity
    /// permutation lands at index 0. The product `p * q` applies `q` first.
    pub fn permutation(degree: usize, generators: &[Vec<u32>], limits: &Limits) -> Result<Self> {
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree {
                return Err(Error::NotAGroup(format!(
                    "permutation {g:?} does not have degree {degree}"
                )));
            }
            for &x in g {
                if x as usize >= degree || seen[x as usize] {
                    return Err(Error::NotAGroup(format!("{g:?} is not a permutation")));
                }
                seen[x as usize] = true;
            }
        }
        let identity: Vec<u32> = (0..degree as u32).collect();
        let compose = |p: &[u32], q: &[u32]| -> Vec<u32> { q.iter().map(|&i| p[i as usize]).collect() };
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let next = compose(&p, g);
                if seen.insert(next.clone()) {
                    if seen.len() > limits.group_order {
                        return Err(Error::SizeLimit {
                            what: "group order",
                            needed: seen.len(),
                            limit: limits.group_order,
                        });
                    }
                    queue.push_back(next);
                }
            }
        }
        let elems: Vec<Vec<u32>> = seen.into_iter().collect();
        Ok(FiniteGroup::from_elements(&elems, |p, q| compose(p, q)))
    }

    /// Builds the group on an explicit element list closed under `mul`.
    ///
    /// `elems[0]` must be the identity; the list order becomes the index order.
    pub fn from_elements<T, F>(elems: &[T], mul: F) -> Self
    where
        T: std::hash::Hash + Eq + Clone,
        F: Fn(&T, &T) -> T,
    {
        let index: HashMap<&T, Elem> = elems.iter().enumerate().map(|(i, e)| (e, i as Elem)).collect();
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for a in elems {
            for b in elems {
                let c = mul(a, b);
                table.push(*index.get(&c).expect("element list not closed under product"));
            }
        }
        FiniteGroup::from_table_unchecked(n, table)
    }

    /// Validates a user-supplied table: exhaustive associativity, identity at 0, inverses.
    pub fn from_table(rows: &[Vec<Elem>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {i} has length {}", row.len())));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x as usize >= n || seen[x as usize] {
                    return Err(Error::NotAGroup(format!("row {i} is not a permutation")));
                }
                seen[x as usize] = true;
            }
            table.extend_from_slice(row);
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for r in 0..n {
                let x = table[r * n + c] as usize;
                if seen[x] {
                    return Err(Error::NotAGroup(format!("column {c} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        for a in 0..n {
            if table[a] as usize != a || table[a * n] as usize != a {
                return Err(Error::NotAGroup("element 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b] as usize;
                for c in 0..n {
                    let bc = table[b * n + c] as usize;
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err(Error::NotAGroup(format!("associativity fails for ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup::from_table_unchecked(n, table))
    }

    fn from_table_unchecked(order: usize, table: Vec<Elem>) -> Self {
        let mut inverse = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b as Elem;
                    break;
                }
            }
        }
        FiniteGroup { order, table, inverse }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    /// `g h g^-1`.
    pub fn conjugate(&self, h: Elem, g: Elem) -> Elem {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn pow(&self, g: Elem, k: usize) -> Elem {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn element_order(&self, g: Elem) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order)
            .all(|a| (a..self.order).all(|b| self.table[a * self.order + b] == self.table[b * self.order + a]))
    }

    /// Multiplication table as rows (fixture / report form).
    pub fn table_rows(&self) -> Vec<Vec<Elem>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Sorted multiset of element orders.
    pub fn order_census(&self) -> Vec<usize> {
        let mut census: Vec<usize> = self.elements().map(|g| self.element_order(g)).collect();
        census.sort_unstable();
        census
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut members = vec![false; self.order];
        members[0] = true;
        let mut list = vec![0];
        for g in self.elements() {
            if members[g as usize] {
                continue;
            }
            gens.push(g);
            // extend the closure by the new generator
            let mut queue: VecDeque<Elem> = list.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !members[y as usize] {
                        members[y as usize] = true;
                        list.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }
}

/// Coordinates of product element `x` in lexicographic order.
fn product_coords(parts: &[&FiniteGroup], mut x: usize) -> Vec<Elem> {
    let mut coords = vec![0; parts.len()];
    for (k, g) in parts.iter().enumerate().rev() {
        coords[k] = (x % g.order()) as Elem;
        x /= g.order();
    }
    coords
}

/// Index of a product element from its coordinates.
pub fn product_index(orders: &[usize], coords: &[Elem]) -> Elem {
    let mut idx = 0usize;
    for (k, &o) in orders.iter().enumerate() {
        idx = idx * o + coords[k] as usize;
    }
    idx as Elem
}

/// Generators of `A5` on five points as image lists.
pub fn a5_generators() -> Vec<Vec<u32>> {
    vec![vec![1, 2, 3, 4, 0], vec![1, 2, 0, 3, 4]]
}
