//! Finite posets as cover digraphs with cached reachability.
//!
//! Elements are dense indices `0..n`. A poset is constructed from its cover
//! pairs only; the reflexive-transitive order matrix is computed once and
//! cached. Construction rejects bad input (cycles, transitively implied
//! covers) instead of repairing it.

use crate::bitmat::BitMatrix;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("cover ({a}, {b}) out of range for {n} elements")]
    IndexOutOfRange { a: usize, b: usize, n: usize },
    #[error("duplicate cover ({a}, {b})")]
    DuplicateCover { a: usize, b: usize },
    #[error("cover digraph has a directed cycle")]
    CycleDetected,
    #[error("cover ({a}, {b}) is transitively implied")]
    NotReduced { a: usize, b: usize },
}

/// A finite poset given by the covers of its Hasse diagram.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    up_adj: Vec<Vec<usize>>,
    down_adj: Vec<Vec<usize>>,
    /// up.get(i, j) iff i <= j
    up: BitMatrix,
    /// down.get(i, j) iff j <= i
    down: BitMatrix,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset(n={}, covers={:?})", self.n, self.covers)
    }
}

impl Poset {
    /// Build a poset from its cover pairs. The input must be exactly the
    /// transitive reduction: implied or duplicate pairs are errors, as are
    /// cycles and out-of-range indices.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Poset, PosetError> {
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(PosetError::IndexOutOfRange { a, b, n });
            }
            if a == b {
                return Err(PosetError::CycleDetected);
            }
        }
        let mut sorted: Vec<(usize, usize)> = covers.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(PosetError::DuplicateCover {
                    a: w[0].0,
                    b: w[0].1,
                });
            }
        }

        let mut up_adj = vec![Vec::new(); n];
        let mut down_adj = vec![Vec::new(); n];
        for &(a, b) in &sorted {
            up_adj[a].push(b);
            down_adj[b].push(a);
        }

        let topo = topo_order(n, &up_adj).ok_or(PosetError::CycleDetected)?;

        // reach rows in reverse topological order: up[v] = {v} | up[w] for covers v -> w
        let mut up = BitMatrix::new(n);
        for &v in topo.iter().rev() {
            up.set(v, v);
            for &w in &up_adj[v] {
                up.or_row_into(v, w);
            }
        }

        // every cover must be irredundant: no c distinct from both with a <= c <= b
        for &(a, b) in &sorted {
            for c in 0..n {
                if c != a && c != b && up.get(a, c) && up.get(c, b) {
                    return Err(PosetError::NotReduced { a, b });
                }
            }
        }

        let mut down = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                if up.get(j, i) {
                    down.set(i, j);
                }
            }
        }

        Ok(Poset {
            n,
            covers: sorted,
            up_adj,
            down_adj,
            up,
            down,
        })
    }

    /// The chain with `n` elements ordered `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Poset {
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_covers(n, &covers).expect("chain covers are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cover pairs, sorted lexicographically.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn cover_count(&self) -> usize {
        self.covers.len()
    }

    /// `a <= b` in the order.
    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up.get(a, b)
    }

    /// `a < b` strictly.
    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.up.get(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.up.get(a, b) || self.up.get(b, a)
    }

    /// `a` is covered by `b` in the Hasse diagram.
    pub fn covers_pair(&self, a: usize, b: usize) -> bool {
        self.up_adj[a].contains(&b)
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.up_adj[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.down_adj[x]
    }

    /// Number of elements below-or-equal `x` shared with below-or-equal `y`.
    pub(crate) fn common_below(&self, x: usize, y: usize) -> usize {
        self.down.and_count(x, y)
    }

    pub(crate) fn down_row(&self, x: usize) -> &[u64] {
        self.down.row(x)
    }

    pub(crate) fn up_row(&self, x: usize) -> &[u64] {
        self.up.row(x)
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.down_adj[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.up_adj[x].is_empty()).collect()
    }

    /// The unique least element, if there is one.
    pub fn bottom(&self) -> Option<usize> {
        let mins = self.minimal_elements();
        match mins.as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    /// The unique greatest element, if there is one.
    pub fn top(&self) -> Option<usize> {
        let maxs = self.maximal_elements();
        match maxs.as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.comparable(a, b)))
    }

    /// Number of connected components of the cover graph.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut components = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for &w in self.up_adj[v].iter().chain(&self.down_adj[v]) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    /// Cycle-space dimension of the cover graph: edges - vertices + components.
    pub fn nullity(&self) -> usize {
        self.covers.len() + self.component_count() - self.n
    }

    /// Length of a longest cover path from a minimal element up to `x`.
    pub fn heights(&self) -> Vec<usize> {
        let topo = topo_order(self.n, &self.up_adj).expect("poset is acyclic");
        let mut h = vec![0; self.n];
        for &v in &topo {
            for &w in &self.down_adj[v] {
                h[v] = h[v].max(h[w] + 1);
            }
        }
        h
    }

    /// Length of a longest cover path from `x` up to a maximal element.
    pub fn depths(&self) -> Vec<usize> {
        let topo = topo_order(self.n, &self.up_adj).expect("poset is acyclic");
        let mut d = vec![0; self.n];
        for &v in topo.iter().rev() {
            for &w in &self.up_adj[v] {
                d[v] = d[v].max(d[w] + 1);
            }
        }
        d
    }

    /// Induced subposet on `keep` (ascending, distinct). Element `keep[i]`
    /// becomes index `i`.
    pub fn restrict(&self, keep: &[usize]) -> Poset {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let k = keep.len();
        let mut covers = Vec::new();
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if !self.lt(a, b) {
                    continue;
                }
                // cover in the induced order: no kept element strictly between
                let between = keep
                    .iter()
                    .any(|&c| c != a && c != b && self.lt(a, c) && self.lt(c, b));
                if !between {
                    covers.push((i, j));
                }
            }
        }
        let _ = k;
        Poset::from_covers(k, &covers).expect("induced covers are valid")
    }

    /// Relabel by `perm` where `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        let covers: Vec<(usize, usize)> =
            self.covers.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        Poset::from_covers(self.n, &covers).expect("relabeling preserves validity")
    }

    /// True if `set` is pairwise incomparable.
    pub fn is_antichain(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| !self.comparable(a, b)))
    }

    /// Extend with one new maximal element whose lower covers are `antichain`.
    pub fn with_new_max(&self, antichain: &[usize]) -> Poset {
        debug_assert!(self.is_antichain(antichain));
        let mut covers = self.covers.clone();
        for &a in antichain {
            covers.push((a, self.n));
        }
        Poset::from_covers(self.n + 1, &covers).expect("antichain extension is valid")
    }

    /// Ordinal sum: every element of `self` below every element of `other`.
    pub fn direct_sum(&self, other: &Poset) -> Poset {
        let shift = self.n;
        let mut covers = self.covers.clone();
        covers.extend(other.covers.iter().map(|&(a, b)| (a + shift, b + shift)));
        for &m in &self.maximal_elements() {
            for &w in &other.minimal_elements() {
                covers.push((m, w + shift));
            }
        }
        let sum = Poset::from_covers(self.n + other.n, &covers).expect("sum covers are valid");
        debug_assert!(
            !(self.bottom().is_some()
                && self.top().is_some()
                && other.bottom().is_some()
                && other.top().is_some())
                || sum.cover_count() == self.cover_count() + other.cover_count() + 1
        );
        sum
    }

    /// Search for an induced crown: `2t` elements (t >= 3) whose only
    /// comparabilities form the alternating cycle x1 < y1 > x2 < y2 ... > x1.
    /// Returns the witness subset, ascending. Exhaustive over subsets, so
    /// only suitable at census scale.
    pub fn find_crown(&self) -> Option<Vec<usize>> {
        let mut size = 6;
        while size <= self.n {
            let mut subset = Vec::with_capacity(size);
            if let Some(w) = self.crown_search(0, size, &mut subset) {
                return Some(w);
            }
            size += 2;
        }
        None
    }

    fn crown_search(&self, from: usize, size: usize, subset: &mut Vec<usize>) -> Option<Vec<usize>> {
        if subset.len() == size {
            return if self.is_crown(subset) {
                Some(subset.clone())
            } else {
                None
            };
        }
        if self.n - from < size - subset.len() {
            return None;
        }
        for v in from..self.n {
            subset.push(v);
            if let Some(w) = self.crown_search(v + 1, size, subset) {
                return Some(w);
            }
            subset.pop();
        }
        None
    }

    /// Check that the comparabilities induced on `set` are exactly a crown.
    fn is_crown(&self, set: &[usize]) -> bool {
        let t = set.len();
        // every element comparable to exactly two others, no three-element chain
        let mut adj = vec![Vec::new(); t];
        for i in 0..t {
            for j in 0..t {
                if i != j && self.comparable(set[i], set[j]) {
                    adj[i].push(j);
                }
            }
        }
        if adj.iter().any(|a| a.len() != 2) {
            return false;
        }
        for i in 0..t {
            for &j in &adj[i] {
                for &k in &adj[j] {
                    if self.lt(set[i], set[j]) && self.lt(set[j], set[k]) {
                        return false;
                    }
                }
            }
        }
        // single cycle through all 2t elements
        let mut seen = vec![false; t];
        let mut count = 0;
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            count += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count == t
    }
}

fn topo_order(n: usize, up_adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for adj in up_adj {
        for &w in adj {
            indeg[w] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        order.push(v);
        for &w in &up_adj[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    if order.len() == n {
        Some(order)
    } else {
        None
    }
}

/// Irreducibility classes of a poset, all index lists ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// At most one lower cover and at most one upper cover.
    pub irr: Vec<usize>,
    /// Exactly one lower cover and exactly one upper cover.
    pub irr_star: Vec<usize>,
    /// At least two lower covers or at least two upper covers.
    pub red: Vec<usize>,
}

/// Partition elements into doubly irreducible and reducible sets.
pub fn classify_elements(p: &Poset) -> Classification {
    let mut irr = Vec::new();
    let mut irr_star = Vec::new();
    let mut red = Vec::new();
    for x in 0..p.n() {
        let lo = p.lower_covers(x).len();
        let hi = p.upper_covers(x).len();
        if lo >= 2 || hi >= 2 {
            red.push(x);
        } else {
            irr.push(x);
            if lo == 1 && hi == 1 {
                irr_star.push(x);
            }
        }
    }
    Classification { irr, irr_star, red }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_from_covers() {
        let p = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.is_chain());
        assert_eq!(p.nullity(), 0);
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn rejects_implied_cover() {
        let err = Poset::from_covers(3, &[(0, 1), (1, 2), (0, 2)]).unwrap_err();
        assert_eq!(err, PosetError::NotReduced { a: 0, b: 2 });
    }

    #[test]
    fn rejects_cycle() {
        let err = Poset::from_covers(2, &[(0, 1), (1, 0)]).unwrap_err();
        assert_eq!(err, PosetError::CycleDetected);
    }

    #[test]
    fn rejects_duplicate_and_range() {
        assert_eq!(
            Poset::from_covers(3, &[(0, 1), (0, 1)]).unwrap_err(),
            PosetError::DuplicateCover { a: 0, b: 1 }
        );
        assert!(matches!(
            Poset::from_covers(2, &[(0, 5)]).unwrap_err(),
            PosetError::IndexOutOfRange { .. }
        ));
    }

    #[test]
    fn nullity_examples() {
        // chain
        assert_eq!(Poset::chain(5).nullity(), 0);
        // M2: diamond
        let m2 = Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(m2.nullity(), 1);
        // M3
        let m3 = Poset::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        assert_eq!(m3.nullity(), 2);
    }

    #[test]
    fn classify_chain_and_m2() {
        let c = Poset::chain(5);
        let cl = classify_elements(&c);
        assert!(cl.red.is_empty());
        assert_eq!(cl.irr, vec![0, 1, 2, 3, 4]);
        assert_eq!(cl.irr_star, vec![1, 2, 3]);

        let m2 = Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let cl = classify_elements(&m2);
        assert_eq!(cl.red, vec![0, 3]);
        assert_eq!(cl.irr, vec![1, 2]);
        assert_eq!(cl.irr_star, vec![1, 2]);
    }

    #[test]
    fn classify_n5() {
        // 0 < a=1 < b=2 < 4, 0 < c=3 < 4
        let n5 = Poset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        let cl = classify_elements(&n5);
        assert_eq!(cl.red, vec![0, 4]);
        assert_eq!(cl.irr, vec![1, 2, 3]);
    }

    #[test]
    fn direct_sum_of_chains_is_chain() {
        let s = Poset::chain(2).direct_sum(&Poset::chain(3));
        assert!(s.is_chain());
        assert_eq!(s.n(), 5);
        assert_eq!(s.nullity(), 0);
    }

    #[test]
    fn crown_in_boolean_cube() {
        // subsets of {0,1,2}: 0=empty, 1,2,3=singletons, 4,5,6=pairs, 7=full
        let b3 = Poset::from_covers(
            8,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 4), // {a} < {a,b}
                (1, 5), // {a} < {a,c}
                (2, 4),
                (2, 6),
                (3, 5),
                (3, 6),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
        )
        .unwrap();
        let w = b3.find_crown().expect("B3 contains a crown");
        assert_eq!(w, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn no_crown_in_n5_or_chain() {
        let n5 = Poset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        assert_eq!(n5.find_crown(), None);
        assert_eq!(Poset::chain(7).find_crown(), None);
    }

    #[test]
    fn restrict_keeps_induced_covers() {
        let c = Poset::chain(5);
        let r = c.restrict(&[0, 2, 4]);
        assert!(r.is_chain());
        assert_eq!(r.n(), 3);
        assert_eq!(r.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn heights_and_depths() {
        let n5 = Poset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        assert_eq!(n5.heights(), vec![0, 1, 2, 1, 3]);
        assert_eq!(n5.depths(), vec![3, 2, 1, 1, 0]);
    }
}
