/// Fixed-capacity set of node labels `1..=n`, one bit per label.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NodeSet {
    words: Vec<u64>,
    capacity: usize,
}

impl NodeSet {
    pub fn new(capacity: usize) -> Self {
        NodeSet {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut set = NodeSet::new(capacity);
        for v in 1..=capacity {
            set.insert(v);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn insert(&mut self, label: usize) {
        debug_assert!(label >= 1 && label <= self.capacity);
        let i = label - 1;
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, label: usize) {
        let i = label - 1;
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, label: usize) -> bool {
        if label == 0 || label > self.capacity {
            return false;
        }
        let i = label - 1;
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: NodeRow<'_>) -> bool {
        self.row().intersects(other)
    }

    pub fn union_with(&mut self, other: NodeRow<'_>) {
        for (a, b) in self.words.iter_mut().zip(other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: NodeRow<'_>) {
        for (a, b) in self.words.iter_mut().zip(other.words) {
            *a &= !b;
        }
    }

    /// Labels in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.row().iter()
    }

    pub fn row(&self) -> NodeRow<'_> {
        NodeRow {
            words: &self.words,
            capacity: self.capacity,
        }
    }
}

/// A borrowed, read-only [`NodeSet`], such as one adjacency row of a graph.
#[derive(Clone, Copy, Debug)]
pub struct NodeRow<'a> {
    words: &'a [u64],
    capacity: usize,
}

impl<'a> NodeRow<'a> {
    pub(crate) fn new(words: &'a [u64], capacity: usize) -> Self {
        NodeRow { words, capacity }
    }

    #[inline]
    pub fn contains(&self, label: usize) -> bool {
        if label == 0 || label > self.capacity {
            return false;
        }
        let i = label - 1;
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: NodeRow<'_>) -> bool {
        self.words.iter().zip(other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + 'a {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit + 1)
            })
        })
    }

    pub fn to_set(&self) -> NodeSet {
        NodeSet {
            words: self.words.to_vec(),
            capacity: self.capacity,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_iterate_remove() {
        let mut s = NodeSet::new(130);
        for v in [130, 1, 64, 65] {
            s.insert(v);
        }
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 64, 65, 130]);
        s.remove(64);
        assert!(!s.contains(64));
        assert!(!s.contains(0) && !s.contains(131));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn set_algebra() {
        let mut a = NodeSet::new(10);
        let mut b = NodeSet::new(10);
        a.insert(2);
        b.insert(3);
        assert!(!a.intersects(b.row()));
        a.union_with(b.row());
        assert!(a.intersects(b.row()));
        a.difference_with(b.row());
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(NodeSet::full(5).len(), 5);
    }
}
