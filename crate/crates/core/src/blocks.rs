//! Groups of fixed-length blocks over an alphabet group.
//!
//! A [`BlockGroup`] is a subgroup of `H^len` stored as a lexicographically
//! sorted flat array. The identity block (all zeros) is always index 0.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};

#[derive(Clone)]
pub struct BlockGroup {
    alphabet: Arc<FiniteGroup>,
    len: usize,
    data: Vec<Elem>,
}

impl PartialEq for BlockGroup {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.data == other.data && *self.alphabet == *other.alphabet
    }
}

impl Eq for BlockGroup {}

impl std::fmt::Debug for BlockGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BlockGroup(len {}, {} blocks)", self.len, self.size())
    }
}

fn budget_error(needed: usize, limit: usize) -> Error {
    Error::SizeLimit {
        what: "block enumeration",
        needed,
        limit,
    }
}

impl BlockGroup {
    /// Wraps a set of blocks already known to form a subgroup.
    pub fn from_blocks<I>(alphabet: &Arc<FiniteGroup>, len: usize, blocks: I) -> Self
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let mut all: Vec<Vec<Elem>> = blocks.into_iter().collect();
        all.sort_unstable();
        all.dedup();
        let mut data = Vec::with_capacity(all.len() * len);
        for b in &all {
            debug_assert_eq!(b.len(), len);
            data.extend_from_slice(b);
        }
        BlockGroup {
            alphabet: alphabet.clone(),
            len,
            data,
        }
    }

    /// Already sorted, deduplicated flat data.
    pub(crate) fn from_sorted_data(alphabet: &Arc<FiniteGroup>, len: usize, data: Vec<Elem>) -> Self {
        BlockGroup {
            alphabet: alphabet.clone(),
            len,
            data,
        }
    }

    /// Subgroup generated by `generators` within `H^len`.
    pub fn generated(alphabet: &Arc<FiniteGroup>, len: usize, generators: &[Vec<Elem>], budget: usize) -> Result<Self> {
        for g in generators {
            if g.len() != len {
                return Err(Error::Malformed(format!("generator {g:?} does not have length {len}")));
            }
            if g.iter().any(|&x| x as usize >= alphabet.order()) {
                return Err(Error::Malformed(format!("generator {g:?} is outside the alphabet")));
            }
        }
        let identity = vec![0; len];
        let mut seen: HashSet<Vec<Elem>> = HashSet::new();
        seen.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = mul_blocks(alphabet, &x, g);
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    if seen.len() > budget {
                        return Err(budget_error(seen.len(), budget));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(BlockGroup::from_blocks(alphabet, len, seen))
    }

    /// All of `H^len`.
    pub fn full(alphabet: &Arc<FiniteGroup>, len: usize, budget: usize) -> Result<Self> {
        let size = alphabet
            .order()
            .checked_pow(len as u32)
            .filter(|&s| s <= budget)
            .ok_or_else(|| budget_error(usize::MAX, budget))?;
        let n = alphabet.order() as Elem;
        let mut data = Vec::with_capacity(size * len);
        let mut cur = vec![0; len];
        for _ in 0..size {
            data.extend_from_slice(&cur);
            for k in (0..len).rev() {
                cur[k] += 1;
                if cur[k] < n {
                    break;
                }
                cur[k] = 0;
            }
        }
        Ok(BlockGroup::from_sorted_data(alphabet, len, data))
    }

    pub fn trivial(alphabet: &Arc<FiniteGroup>, len: usize) -> Self {
        BlockGroup::from_sorted_data(alphabet, len, vec![0; len])
    }

    pub fn alphabet(&self) -> &Arc<FiniteGroup> {
        &self.alphabet
    }

    /// Length of each block.
    pub fn block_len(&self) -> usize {
        self.len
    }

    /// Number of blocks.
    pub fn size(&self) -> usize {
        self.data.len().checked_div(self.len).unwrap_or(1)
    }

    pub fn block(&self, i: usize) -> &[Elem] {
        &self.data[i * self.len..(i + 1) * self.len]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        (0..self.size()).map(move |i| self.block(i))
    }

    pub fn index_of(&self, block: &[Elem]) -> Option<usize> {
        if block.len() != self.len {
            return None;
        }
        if self.len == 0 {
            return Some(0);
        }
        let (mut lo, mut hi) = (0usize, self.size());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.block(mid).cmp(block) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, block: &[Elem]) -> bool {
        self.index_of(block).is_some()
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        mul_blocks(&self.alphabet, a, b)
    }

    pub fn inv(&self, a: &[Elem]) -> Vec<Elem> {
        a.iter().map(|&x| self.alphabet.inv(x)).collect()
    }

    pub fn is_subset_of(&self, other: &BlockGroup) -> bool {
        self.len == other.len && self.iter().all(|b| other.contains(b))
    }

    /// Projection onto the coordinates `start..start + len`.
    pub fn project(&self, start: usize, len: usize) -> BlockGroup {
        assert!(start + len <= self.len);
        let blocks: HashSet<Vec<Elem>> = self.iter().map(|b| b[start..start + len].to_vec()).collect();
        BlockGroup::from_blocks(&self.alphabet, len, blocks)
    }

    pub fn prefix(&self, len: usize) -> BlockGroup {
        self.project(0, len)
    }

    pub fn suffix(&self, len: usize) -> BlockGroup {
        self.project(self.len - len, len)
    }

    /// Blocks satisfying `keep`; the caller guarantees the result is a subgroup.
    pub fn filter<F: Fn(&[Elem]) -> bool>(&self, keep: F) -> BlockGroup {
        let mut data = Vec::new();
        for b in self.iter() {
            if keep(b) {
                data.extend_from_slice(b);
            }
        }
        BlockGroup::from_sorted_data(&self.alphabet, self.len, data)
    }

    /// A small generating set chosen greedily in block order.
    pub fn generators(&self) -> Vec<Vec<Elem>> {
        let mut gens: Vec<Vec<Elem>> = Vec::new();
        let mut members = vec![false; self.size()];
        members[0] = true;
        let mut list = vec![0usize];
        for i in 0..self.size() {
            if members[i] {
                continue;
            }
            gens.push(self.block(i).to_vec());
            let mut queue: VecDeque<usize> = list.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for g in &gens {
                    let y = self.mul(self.block(x), g);
                    let j = self.index_of(&y).expect("block set is not closed");
                    if !members[j] {
                        members[j] = true;
                        list.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        gens
    }

    /// Checks closure under products; returns the first violating product.
    pub fn check_subgroup(&self) -> std::result::Result<(), Vec<Elem>> {
        if self.size() == 0 || self.block(0).iter().any(|&x| x != 0) {
            return Err(vec![0; self.len]);
        }
        // closure of greedy generators must stay inside the set and exhaust it
        let mut members = vec![false; self.size()];
        members[0] = true;
        let mut list = vec![0usize];
        let mut gens: Vec<Vec<Elem>> = Vec::new();
        for i in 0..self.size() {
            if members[i] {
                continue;
            }
            gens.push(self.block(i).to_vec());
            let mut queue: VecDeque<usize> = list.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for g in &gens {
                    let y = self.mul(self.block(x), g);
                    match self.index_of(&y) {
                        Some(j) => {
                            if !members[j] {
                                members[j] = true;
                                list.push(j);
                                queue.push_back(j);
                            }
                        }
                        None => return Err(y),
                    }
                }
            }
        }
        Ok(())
    }

    /// Normality of `self` inside `parent`, checked on generators.
    pub fn is_normal_in(&self, parent: &BlockGroup) -> bool {
        let gens = parent.generators();
        let own = self.generators();
        gens.iter().all(|g| {
            let gi = self.inv(g);
            own.iter().all(|n| self.contains(&self.mul(&self.mul(g, n), &gi)))
        })
    }

    /// Number of blocks of the form `(1, ..., 1, h)`.
    pub fn last_coordinate_kernel(&self) -> usize {
        if self.len == 0 {
            return 1;
        }
        self.iter()
            .filter(|b| b[..self.len - 1].iter().all(|&x| x == 0))
            .count()
    }

    /// The block group as an abstract group; element `i` is block `i`.
    pub fn to_group(&self, limit: usize) -> Result<FiniteGroup> {
        if self.size() > limit {
            return Err(Error::SizeLimit {
                what: "group order",
                needed: self.size(),
                limit,
            });
        }
        let blocks: Vec<Vec<Elem>> = self.iter().map(|b| b.to_vec()).collect();
        let alphabet = self.alphabet.clone();
        Ok(FiniteGroup::from_elements(&blocks, |a, b| mul_blocks(&alphabet, a, b)))
    }

    /// Quotient by a normal subgroup. Returns the quotient group and, for each
    /// block index, its coset index (cosets numbered by minimal representative).
    pub fn quotient(&self, normal: &BlockGroup, limit: usize) -> Result<(FiniteGroup, Vec<Elem>)> {
        if !normal.is_subset_of(self) || !normal.is_normal_in(self) {
            return Err(Error::NotNormal("block subgroup".into()));
        }
        let mut coset = vec![u32::MAX; self.size()];
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..self.size() {
            if coset[i] != u32::MAX {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(i);
            let b = self.block(i);
            for n in normal.iter() {
                let j = self.index_of(&self.mul(b, n)).expect("coset outside group");
                coset[j] = idx;
            }
        }
        if reps.len() > limit {
            return Err(Error::SizeLimit {
                what: "group order",
                needed: reps.len(),
                limit,
            });
        }
        let mut rows = Vec::with_capacity(reps.len());
        for &a in &reps {
            let row: Vec<Elem> = reps
                .iter()
                .map(|&b| {
                    let p = self.mul(self.block(a), self.block(b));
                    coset[self.index_of(&p).expect("product outside group")]
                })
                .collect();
            rows.push(row);
        }
        let q = FiniteGroup::from_table(&rows)?;
        Ok((q, coset))
    }

    /// Lookup table from block to index, for hot loops.
    pub fn index_map(&self) -> HashMap<&[Elem], usize> {
        self.iter().enumerate().map(|(i, b)| (b, i)).collect()
    }
}

pub fn mul_blocks(alphabet: &FiniteGroup, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| alphabet.mul(x, y)).collect()
}
