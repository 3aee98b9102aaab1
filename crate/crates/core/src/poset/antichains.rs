//! Brute-force antichain enumeration and counting.
//!
//! Counting antichains of a general poset is #P-complete, so both routines
//! are exponential in the worst case and take an explicit cap.

use fixedbitset::FixedBitSet;

use super::{Antichain, Order, PosetError};

impl Order {
    /// Every antichain (including the empty one) in lexicographic order of
    /// the sorted member lists.
    pub fn enumerate_antichains(&self, cap: u64) -> Result<Vec<Antichain>, PosetError> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        let mut candidates = FixedBitSet::with_capacity(self.len());
        candidates.insert_range(..);
        self.enumerate_from(&mut current, &candidates, cap, &mut out)?;
        Ok(out)
    }

    fn enumerate_from(
        &self,
        current: &mut Vec<usize>,
        candidates: &FixedBitSet,
        cap: u64,
        out: &mut Vec<Antichain>,
    ) -> Result<(), PosetError> {
        if out.len() as u64 >= cap {
            return Err(PosetError::CapExceeded { cap });
        }
        out.push(Antichain::from_sorted(current.clone()));
        for c in candidates.ones() {
            let mut next = candidates.clone();
            next.set_range(..c + 1, false);
            next.difference_with(&self.ancestors[c]);
            next.difference_with(&self.descendants[c]);
            current.push(c);
            self.enumerate_from(current, &next, cap, out)?;
            current.pop();
        }
        Ok(())
    }

    /// Number of antichains of the whole order.
    pub fn count_antichains(&self, cap: u64) -> Result<u64, PosetError> {
        let mut all = FixedBitSet::with_capacity(self.len());
        all.insert_range(..);
        self.count_antichains_within(&all, cap)
    }

    /// Number of antichains of the subposet induced by `mask`.
    pub fn count_antichains_within(&self, mask: &FixedBitSet, cap: u64) -> Result<u64, PosetError> {
        let mut counter = Counter {
            order: self,
            cap,
            total: 0,
        };
        counter.visit(mask.clone())?;
        Ok(counter.total)
    }
}

struct Counter<'a> {
    order: &'a Order,
    cap: u64,
    total: u64,
}

impl Counter<'_> {
    /// Splits on the element with most comparabilities inside `mask`:
    /// antichains either avoid it, or contain it and avoid everything
    /// comparable to it. A mask with no comparabilities contributes
    /// `2^|mask|` at once.
    fn visit(&mut self, mut mask: FixedBitSet) -> Result<(), PosetError> {
        let mut best = None;
        let mut best_degree = 1;
        for v in mask.ones() {
            let degree = self.order.ancestors[v].intersection_count(&mask)
                + self.order.descendants[v].intersection_count(&mask)
                - 1;
            if degree > best_degree {
                best_degree = degree;
                best = Some(v);
            }
        }
        let Some(pivot) = best else {
            let free = mask.count_ones(..) as u32;
            let add = 1u64.checked_shl(free).filter(|_| free < 64).unwrap_or(u64::MAX);
            return self.add(add);
        };
        let mut with = mask.clone();
        with.difference_with(&self.order.ancestors[pivot]);
        with.difference_with(&self.order.descendants[pivot]);
        self.visit(with)?;
        mask.set(pivot, false);
        self.visit(mask)
    }

    fn add(&mut self, n: u64) -> Result<(), PosetError> {
        self.total = self.total.saturating_add(n);
        if self.total > self.cap {
            Err(PosetError::CapExceeded { cap: self.cap })
        } else {
            Ok(())
        }
    }
}
