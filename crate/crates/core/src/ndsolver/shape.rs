use std::fmt;

use crate::graph::{TypePartition, VertexSet};

/// One coordinate of a shape: an exact count, or `Free` for any count in
/// `[q, |V_i| − q]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Count(usize),
    Free,
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Count(c) => write!(f, "{c}"),
            Entry::Free => f.write_str("*"),
        }
    }
}

/// Per-type abstraction of a vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape(pub Vec<Entry>);

impl Shape {
    pub fn entries(&self) -> &[Entry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Type sizes and the threshold `q`; everything needed to reason about
/// shapes without looking at the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeSpace {
    sizes: Vec<usize>,
    q: usize,
}

/// Which sides of a move a shape pair pins (see [`ShapeSpace::adjacency`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveTypes {
    /// Type losing a token, when its entry changes.
    pub out: Option<usize>,
    /// Type gaining a token, when its entry changes.
    pub into: Option<usize>,
}

impl ShapeSpace {
    pub fn new(sizes: Vec<usize>, q: usize) -> Self {
        assert!(q >= 1, "q must be positive");
        ShapeSpace { sizes, q }
    }

    pub fn from_partition(partition: &TypePartition, q: usize) -> Self {
        ShapeSpace::new(partition.sizes(), q)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn types(&self) -> usize {
        self.sizes.len()
    }

    pub fn entry(&self, i: usize, count: usize) -> Entry {
        let q = self.q;
        if q <= count && count + q <= self.sizes[i] {
            Entry::Free
        } else {
            Entry::Count(count)
        }
    }

    /// Shape of a set with the given per-type counts.
    pub fn shape_of_counts(&self, counts: &[usize]) -> Shape {
        Shape(counts.iter().enumerate().map(|(i, &c)| self.entry(i, c)).collect())
    }

    /// Whether `e` can occur at coordinate `i`.
    pub fn valid_entry(&self, i: usize, e: Entry) -> bool {
        let (q, n) = (self.q, self.sizes[i]);
        match e {
            Entry::Free => n >= 2 * q,
            Entry::Count(c) => c <= n && (c < q || c + q > n),
        }
    }

    pub fn is_well_formed(&self, shape: &Shape) -> bool {
        shape.len() == self.types() && shape.0.iter().enumerate().all(|(i, &e)| self.valid_entry(i, e))
    }

    /// Possible entries at coordinate `i`, in increasing count order with
    /// `Free` between the low and the high counts.
    pub fn entries_for(&self, i: usize) -> Vec<Entry> {
        let (q, n) = (self.q, self.sizes[i]);
        let mut out: Vec<Entry> = (0..q.min(n + 1)).map(Entry::Count).collect();
        if n >= 2 * q {
            out.push(Entry::Free);
        }
        let hi_start = (n + 1).saturating_sub(q).max(q.min(n + 1));
        out.extend((hi_start..=n).map(Entry::Count));
        out
    }

    /// Number of distinct well-formed shapes.
    pub fn candidate_count(&self) -> u128 {
        (0..self.types())
            .map(|i| self.entries_for(i).len() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    /// `(2q + 1)^t`, the count when every type has at least `2q` members.
    pub fn nominal_count(&self) -> u128 {
        let base = 2 * self.q as u128 + 1;
        (0..self.types()).fold(1u128, |a, _| a.saturating_mul(base))
    }

    /// Lowest count an entry allows at coordinate `i`.
    pub fn low(&self, e: Entry) -> usize {
        match e {
            Entry::Count(c) => c,
            Entry::Free => self.q,
        }
    }

    /// Highest count an entry allows at coordinate `i`.
    pub fn high(&self, i: usize, e: Entry) -> usize {
        match e {
            Entry::Count(c) => c,
            Entry::Free => self.sizes[i] - self.q,
        }
    }

    /// Whether some size-`k` set has this shape.
    pub fn has_set_of_size(&self, shape: &Shape, k: usize) -> bool {
        self.has_pinned_set(shape, k, &[])
    }

    /// Like [`ShapeSpace::has_set_of_size`], with some coordinates forced to
    /// exact counts.
    pub fn has_pinned_set(&self, shape: &Shape, k: usize, pins: &[(usize, usize)]) -> bool {
        let mut lo = 0usize;
        let mut hi = 0usize;
        for (i, &e) in shape.0.iter().enumerate() {
            match pins.iter().find(|p| p.0 == i) {
                Some(&(_, c)) => {
                    if c < self.low(e) || c > self.high(i, e) {
                        return false;
                    }
                    lo += c;
                    hi += c;
                }
                None => {
                    lo += self.low(e);
                    hi += self.high(i, e);
                }
            }
        }
        lo <= k && k <= hi
    }

    /// Per-type counts of the canonical representative: the low counts,
    /// then the remaining mass poured into free coordinates in order.
    pub fn representative_counts(&self, shape: &Shape, k: usize) -> Option<Vec<usize>> {
        if !self.has_set_of_size(shape, k) {
            return None;
        }
        let mut counts: Vec<usize> = shape.0.iter().map(|&e| self.low(e)).collect();
        let mut rest = k - counts.iter().sum::<usize>();
        for (i, &e) in shape.0.iter().enumerate() {
            if rest == 0 {
                break;
            }
            let room = self.high(i, e) - counts[i];
            let add = room.min(rest);
            counts[i] += add;
            rest -= add;
        }
        debug_assert_eq!(rest, 0);
        Some(counts)
    }

    /// A-case test at coordinate `i`: `a → b` when a token leaves type `i`.
    fn a_case(&self, i: usize, a: Entry, b: Entry) -> bool {
        let (q, n) = (self.q, self.sizes[i]);
        match (a, b) {
            (Entry::Count(x), Entry::Count(y)) => x >= 1 && y == x - 1,
            (Entry::Free, Entry::Count(y)) => y + 1 == q,
            (Entry::Count(x), Entry::Free) => x + q == n + 1,
            (Entry::Free, Entry::Free) => false,
        }
    }

    /// B-case test at coordinate `j`: a token enters type `j`.
    fn b_case(&self, j: usize, a: Entry, b: Entry) -> bool {
        self.a_case(j, b, a)
    }

    /// Directed adjacency test: some size-`k` set of shape `a` becomes a set
    /// of shape `b` by one exchange. Returns the coordinates whose entries
    /// change, labelled by direction.
    pub fn adjacency(&self, a: &Shape, b: &Shape, k: usize) -> Option<MoveTypes> {
        let diff: Vec<usize> = (0..self.types()).filter(|&i| a.0[i] != b.0[i]).collect();
        let options: Vec<MoveTypes> = match diff.as_slice() {
            [x] => {
                let mut v = Vec::new();
                if self.a_case(*x, a.0[*x], b.0[*x]) {
                    v.push(MoveTypes { out: Some(*x), into: None });
                }
                if self.b_case(*x, a.0[*x], b.0[*x]) {
                    v.push(MoveTypes { out: None, into: Some(*x) });
                }
                v
            }
            [x, y] => [(*x, *y), (*y, *x)]
                .into_iter()
                .filter(|&(i, j)| self.a_case(i, a.0[i], b.0[i]) && self.b_case(j, a.0[j], b.0[j]))
                .map(|(i, j)| MoveTypes {
                    out: Some(i),
                    into: Some(j),
                })
                .collect(),
            _ => Vec::new(),
        };
        options.into_iter().find(|mt| self.pins_hold(a, b, k, *mt))
    }

    fn pins_hold(&self, a: &Shape, b: &Shape, k: usize, mt: MoveTypes) -> bool {
        let q = self.q;
        let mut pins_a = Vec::new();
        let mut pins_b = Vec::new();
        if let Some(i) = mt.out {
            if a.0[i] == Entry::Free {
                pins_a.push((i, q));
            }
            if b.0[i] == Entry::Free {
                pins_b.push((i, self.sizes[i] - q));
            }
        }
        if let Some(j) = mt.into {
            if a.0[j] == Entry::Free {
                pins_a.push((j, self.sizes[j] - q));
            }
            if b.0[j] == Entry::Free {
                pins_b.push((j, q));
            }
        }
        self.has_pinned_set(a, k, &pins_a) && self.has_pinned_set(b, k, &pins_b)
    }

    /// Shape adjacency, symmetric in its arguments.
    pub fn adjacent(&self, a: &Shape, b: &Shape, k: usize) -> bool {
        a != b && (self.adjacency(a, b, k).is_some() || self.adjacency(b, a, k).is_some())
    }
}

/// Per-type counts `|V_i ∩ X|`.
pub fn signature(partition: &TypePartition, x: &VertexSet) -> Vec<usize> {
    partition.signature(x.iter())
}

/// Shape of `x` with respect to `partition` and threshold `q`.
pub fn shape_of_set(partition: &TypePartition, q: usize, x: &VertexSet) -> Shape {
    ShapeSpace::from_partition(partition, q).shape_of_counts(&signature(partition, x))
}

/// The representative set of a shape: per type, the smallest ids.
pub fn representative_set(partition: &TypePartition, space: &ShapeSpace, shape: &Shape, k: usize) -> Option<VertexSet> {
    let counts = space.representative_counts(shape, k)?;
    Some(
        counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| partition.class(i)[..c].iter().copied())
            .collect(),
    )
}

/// Shape adjacency as a free function.
pub fn shapes_adjacent(space: &ShapeSpace, a: &Shape, b: &Shape, k: usize) -> bool {
    space.adjacent(a, b, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Entry::*;

    #[test]
    fn entries_follow_the_definition() {
        let sp = ShapeSpace::new(vec![10], 2);
        assert_eq!(sp.entry(0, 5), Free);
        assert_eq!(sp.entry(0, 1), Count(1));
        assert_eq!(sp.entry(0, 9), Count(9));
        assert_eq!(sp.entry(0, 8), Free);
        assert_eq!(sp.entries_for(0), vec![Count(0), Count(1), Free, Count(9), Count(10)]);
        let small = ShapeSpace::new(vec![3], 2);
        assert_eq!(small.entries_for(0), (0..=3).map(Count).collect::<Vec<_>>());
        let three = ShapeSpace::new(vec![4, 5, 9], 2);
        assert_eq!(three.candidate_count(), 125);
        assert_eq!(three.nominal_count(), 125);
    }

    #[test]
    fn counting_test() {
        let sp = ShapeSpace::new(vec![10, 10], 2);
        let s = Shape(vec![Free, Count(1)]);
        assert!(!sp.has_set_of_size(&s, 2));
        assert!(sp.has_set_of_size(&s, 3));
        assert!(sp.has_set_of_size(&s, 9));
        assert!(!sp.has_set_of_size(&s, 10));
        assert_eq!(sp.representative_counts(&s, 5), Some(vec![4, 1]));
        assert!(sp.has_pinned_set(&s, 3, &[(0, 2)]));
        assert!(!sp.has_pinned_set(&s, 4, &[(0, 2)]));
    }

    #[test]
    fn adjacency_cases() {
        let sp = ShapeSpace::new(vec![10, 10, 3], 2);
        // A1 + B1.
        let a = Shape(vec![Count(1), Count(0), Count(1)]);
        let b = Shape(vec![Count(0), Count(1), Count(1)]);
        assert!(sp.adjacent(&a, &b, 2));
        // Only the B side changes; the token leaves a free type.
        let a = Shape(vec![Free, Count(0), Count(0)]);
        let b = Shape(vec![Free, Count(1), Count(0)]);
        assert!(sp.adjacent(&a, &b, 4));
        // Three coordinates differ.
        let a = Shape(vec![Count(0), Count(0), Count(0)]);
        let b = Shape(vec![Count(1), Count(1), Count(1)]);
        assert!(!sp.adjacent(&a, &b, 0));
        // A2: free at q tokens drops to q - 1.
        let a = Shape(vec![Free, Count(0), Count(0)]);
        let b = Shape(vec![Count(1), Count(1), Count(0)]);
        assert!(sp.adjacent(&a, &b, 2));
        assert!(!sp.adjacent(&a, &b, 3));
    }
}
