//! Dense binary relations over `0..n`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    cells: Vec<bool>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        Relation {
            size,
            cells: vec![false; size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, |i, j| i == j)
    }

    pub fn total(size: usize) -> Self {
        Relation {
            size,
            cells: vec![true; size * size],
        }
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut r = Self::empty(size);
        for i in 0..size {
            for j in 0..size {
                r.cells[i * size + j] = f(i, j);
            }
        }
        r
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(size);
        for (i, j) in pairs {
            r.insert(i, j);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.size + j]
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.cells[i * self.size + j] = true;
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        self.cells[i * self.size + j] = false;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.size;
        (0..n * n)
            .filter(|k| self.cells[*k])
            .map(move |k| (k / n, k % n))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|i| self.contains(i, i))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.size).all(|i| !self.contains(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive_closure() == *self
    }

    /// First `(a, b, c)` with `a R b`, `b R c` and not `a R c`.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.size;
        for a in 0..n {
            for b in 0..n {
                if !self.contains(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.contains(b, c) && !self.contains(a, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Warshall closure.
    pub fn transitive_closure(&self) -> Relation {
        let n = self.size;
        let mut r = self.clone();
        for k in 0..n {
            for i in 0..n {
                if !r.contains(i, k) {
                    continue;
                }
                for j in 0..n {
                    if r.contains(k, j) {
                        r.insert(i, j);
                    }
                }
            }
        }
        r
    }

    pub fn reflexive_transitive_closure(&self) -> Relation {
        let mut r = self.clone();
        for i in 0..self.size {
            r.insert(i, i);
        }
        r.transitive_closure()
    }

    /// `i < j` iff `i R j` and not `j R i`.
    pub fn strict_part(&self) -> Relation {
        Self::from_fn(self.size, |i, j| {
            self.contains(i, j) && !self.contains(j, i)
        })
    }

    /// A cycle `v0 R v1 R ... R v0` (with `v0` not repeated at the end), if any.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        fn visit(
            r: &Relation,
            v: usize,
            marks: &mut [Mark],
            stack: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            marks[v] = Mark::Active;
            stack.push(v);
            for w in 0..r.size {
                if !r.contains(v, w) {
                    continue;
                }
                match marks[w] {
                    Mark::Active => {
                        let start = stack.iter().position(|x| *x == w).expect("on stack");
                        return Some(stack[start..].to_vec());
                    }
                    Mark::New => {
                        if let Some(c) = visit(r, w, marks, stack) {
                            return Some(c);
                        }
                    }
                    Mark::Done => {}
                }
            }
            stack.pop();
            marks[v] = Mark::Done;
            None
        }
        let mut marks = vec![Mark::New; self.size];
        let mut stack = Vec::new();
        for v in 0..self.size {
            if marks[v] == Mark::New {
                if let Some(c) = visit(self, v, &mut marks, &mut stack) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Relation induced on the listed elements, renumbered in list order.
    pub fn restrict(&self, keep: &[usize]) -> Relation {
        Self::from_fn(keep.len(), |i, j| self.contains(keep[i], keep[j]))
    }

    /// Hasse edges of the strict part of a transitive relation.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let strict = self.strict_part();
        let n = self.size;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if strict.contains(i, j)
                    && !(0..n).any(|k| strict.contains(i, k) && strict.contains(k, j))
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Classes of mutually related elements, ordered by first member.
    pub fn tie_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for i in 0..self.size {
            if seen[i] {
                continue;
            }
            let class: Vec<usize> = (i..self.size)
                .filter(|j| *j == i || (self.contains(i, *j) && self.contains(*j, i)))
                .collect();
            for j in &class {
                seen[*j] = true;
            }
            out.push(class);
        }
        out
    }

    /// Longest-path layering of the strict part: layer 0 holds the minimal
    /// elements. Requires an acyclic strict part.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let strict = self.strict_part();
        let n = self.size;
        let mut depth = vec![None::<usize>; n];
        fn depth_of(strict: &Relation, v: usize, depth: &mut Vec<Option<usize>>) -> usize {
            if let Some(d) = depth[v] {
                return d;
            }
            let d = (0..strict.size)
                .filter(|u| strict.contains(*u, v))
                .map(|u| depth_of(strict, u, depth) + 1)
                .max()
                .unwrap_or(0);
            depth[v] = Some(d);
            d
        }
        let mut layers: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            let d = depth_of(&strict, v, &mut depth);
            if layers.len() <= d {
                layers.resize(d + 1, Vec::new());
            }
            layers[d].push(v);
        }
        layers
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_adds_implied_pairs() {
        let r = Relation::from_pairs(3, [(0, 1), (1, 2)]);
        assert!(!r.is_transitive());
        assert_eq!(r.transitivity_violation(), Some((0, 1, 2)));
        let c = r.transitive_closure();
        assert!(c.contains(0, 2));
        assert!(c.is_transitive());
        assert!(c.is_irreflexive());
    }

    #[test]
    fn cycle_detection() {
        let r = Relation::from_pairs(3, [(0, 1), (1, 2), (2, 1)]);
        assert_eq!(r.find_cycle(), Some(vec![1, 2]));
        assert_eq!(Relation::from_pairs(3, [(0, 1), (1, 2)]).find_cycle(), None);
        assert_eq!(
            Relation::from_pairs(2, [(1, 1)]).find_cycle(),
            Some(vec![1])
        );
    }

    #[test]
    fn ties_covers_and_layers() {
        // 0 ~ 1 < 2 < 3
        let r = Relation::from_pairs(4, [(0, 1), (1, 0), (1, 2), (2, 3)])
            .reflexive_transitive_closure();
        assert_eq!(r.tie_classes(), vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(r.covering_pairs(), vec![(0, 2), (1, 2), (2, 3)]);
        assert_eq!(r.layers(), vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(
            r.restrict(&[3, 0]),
            Relation::from_pairs(2, [(0, 0), (1, 1), (1, 0)])
        );
    }
}
