//! Permutations of {1,…,d}, stored 0-based, composed left to right.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A permutation of `{0,…,d-1}`. `map[x]` is the image of `x`.
///
/// Composition is left to right throughout the crate: `(a * b)(x) = b(a(x))`,
/// written `a.then(&b)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn new(map: Vec<usize>) -> Self {
        let mut seen = vec![false; map.len()];
        for &x in &map {
            assert!(x < map.len() && !seen[x], "not a permutation: {map:?}");
            seen[x] = true;
        }
        Perm { map }
    }

    pub fn identity(d: usize) -> Self {
        Perm {
            map: (0..d).collect(),
        }
    }

    /// Build from disjoint cycles in 1-based notation, e.g. `&[&[1, 2], &[3, 5, 4]]`.
    pub fn from_cycles(d: usize, cycles: &[&[usize]]) -> Self {
        let mut map: Vec<usize> = (0..d).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w] - 1;
                let to = cycle[(w + 1) % cycle.len()] - 1;
                assert!(from < d && to < d);
                map[from] = to;
            }
        }
        Perm::new(map)
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self` then `other`: `(self.then(other))(x) = other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.map.len(), other.map.len());
        Perm {
            map: self.map.iter().map(|&x| other.map[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Perm { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut n = 1;
        while !p.is_identity() {
            p = p.then(self);
            n += 1;
        }
        n
    }

    /// Disjoint cycles covering every point, fixed points included,
    /// each cycle starting at its smallest point, cycles sorted by start point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.map.len();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.map[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.map[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Multiset of cycle lengths, sorted ascending, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable();
        t
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Conjugate by `g`: the permutation `g⁻¹ self g` (left-to-right), i.e. relabel
    /// every point `x` as `g(x)`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        let mut map = vec![0; self.map.len()];
        for x in 0..self.map.len() {
            map[g.map[x]] = g.map[self.map[x]];
        }
        Perm { map }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            if cycle.len() > 1 {
                write!(f, "(")?;
                for (i, x) in cycle.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", x + 1)?;
                }
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

/// True if `perms` act transitively on `{0,…,d-1}`.
pub fn transitive(d: usize, perms: &[&Perm]) -> bool {
    if d == 0 {
        return true;
    }
    let mut seen = vec![false; d];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in perms {
            let y = p.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == d
}

/// Closure of `gens` under composition: the full subgroup, as a sorted vector.
pub fn generated_subgroup(gens: &[Perm]) -> Vec<Perm> {
    assert!(!gens.is_empty());
    let d = gens[0].degree();
    let mut elems = std::collections::BTreeSet::new();
    elems.insert(Perm::identity(d));
    let mut frontier = vec![Perm::identity(d)];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = p.then(g);
            if elems.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    elems.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_left_to_right() {
        let a = Perm::from_cycles(3, &[&[1, 2]]);
        let b = Perm::from_cycles(3, &[&[2, 3]]);
        // x=1: a sends 1→2, then b sends 2→3.
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(b.then(&a).apply(0), 1);
    }

    #[test]
    fn cycles_and_types() {
        let p = Perm::from_cycles(6, &[&[1, 4], &[2, 5, 3]]);
        assert_eq!(p.cycle_type(), vec![1, 2, 3]);
        assert_eq!(p.cycle_count(), 3);
        assert_eq!(p.order(), 6);
        assert_eq!(p.then(&p.inverse()), Perm::identity(6));
    }

    #[test]
    fn conjugation_relabels() {
        let p = Perm::from_cycles(4, &[&[1, 2, 3]]);
        let g = Perm::from_cycles(4, &[&[1, 4]]);
        let q = p.conjugate_by(&g);
        assert_eq!(q, Perm::from_cycles(4, &[&[4, 2, 3]]));
        assert_eq!(q, g.inverse().then(&p).then(&g));
    }

    #[test]
    fn subgroup_closure() {
        let gens = vec![
            Perm::from_cycles(4, &[&[1, 2]]),
            Perm::from_cycles(4, &[&[1, 2, 3, 4]]),
        ];
        assert_eq!(generated_subgroup(&gens).len(), 24);
        assert!(transitive(4, &[&gens[0], &gens[1]]));
        assert!(!transitive(4, &[&gens[0]]));
    }
}
