//! Enumeration of the ramified covers realizing a branching datum, encoded as
//! permutation constellations, one canonical representative per equivalence
//! class under simultaneous conjugation (and, over the D6 base, under
//! exchanging the two indistinguishable order-2 branch points).

use crate::angles::{BaseFamily, BaseOrbifold, ConeTuple};
use crate::branching::BranchingDatum;
use crate::perm::{transitive, Perm};
use serde::ser::SerializeStruct;
use serde::Serialize;
use std::collections::BTreeMap;

/// A triple of permutations of the covering sheets, one per branch point,
/// with σ₁σ₂σ₃ = id under left-to-right composition. Cycles of σⱼ are the
/// preimages of branch point j; a cycle of length ℓ < kⱼ is a cone point of
/// angle ℓ·2π/kⱼ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Constellation {
    pub degree: usize,
    pub sigma: [Perm; 3],
}

impl Serialize for Constellation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Constellation", 2)?;
        st.serialize_field("degree", &self.degree)?;
        let cycles: Vec<Vec<Vec<usize>>> = self
            .sigma
            .iter()
            .map(|p| {
                p.cycles()
                    .into_iter()
                    .map(|c| c.into_iter().map(|x| x + 1).collect())
                    .collect()
            })
            .collect();
        st.serialize_field("sigma", &cycles)?;
        st.end()
    }
}

impl Constellation {
    pub fn new(sigma: [Perm; 3]) -> Self {
        let degree = sigma[0].degree();
        let c = Constellation { degree, sigma };
        assert!(c.product_is_identity(), "σ₁σ₂σ₃ ≠ id");
        c
    }

    pub fn product_is_identity(&self) -> bool {
        self.sigma[0].then(&self.sigma[1]).then(&self.sigma[2]).is_identity()
    }

    pub fn is_transitive(&self) -> bool {
        transitive(self.degree, &[&self.sigma[1], &self.sigma[2]])
    }

    /// c(σ₁)+c(σ₂)+c(σ₃) = d+2: the cover is a sphere.
    pub fn is_genus_zero(&self) -> bool {
        let cycles: usize = self.sigma.iter().map(|p| p.cycle_count()).sum();
        cycles == self.degree + 2
    }

    /// Cone angles read off the cycle structure.
    pub fn cone_tuple(&self, base: &BaseOrbifold) -> ConeTuple {
        let mut angles = Vec::new();
        for (j, bp) in base.branch_points.iter().enumerate() {
            for cycle in self.sigma[j].cycles() {
                if cycle.len() < bp.order {
                    angles.push(bp.angle.scale(cycle.len() as i64));
                }
            }
        }
        ConeTuple::new(angles)
    }

    pub fn matches_datum(&self, datum: &BranchingDatum) -> bool {
        self.degree == datum.degree
            && (0..3).all(|j| self.sigma[j].cycle_type() == datum.columns[j])
            && self.product_is_identity()
            && self.is_transitive()
            && self.is_genus_zero()
    }

    /// The orientation-reversed cover: (σ₁⁻¹, σ₁⁻¹∘σ₂⁻¹∘σ₁, σ₃⁻¹). Preserves
    /// all three cycle types and the identity product; an involution on the
    /// nose, not just up to equivalence.
    pub fn mirror(&self) -> Constellation {
        let s1 = &self.sigma[0];
        let s2 = &self.sigma[1];
        let s3 = &self.sigma[2];
        let t2 = s2.inverse().conjugate_by(&s1.inverse());
        Constellation::new([s1.inverse(), t2, s3.inverse()])
    }

    /// Exchange the roles of the first two branch points:
    /// (σ₂, σ₂⁻¹σ₁σ₂, σ₃), again with identity product. Only meaningful when
    /// the two branch points have equal order (the D6 base).
    pub fn swap_first_two(&self) -> Constellation {
        let t2 = self.sigma[0].conjugate_by(&self.sigma[1]);
        Constellation::new([self.sigma[1].clone(), t2, self.sigma[2].clone()])
    }

    /// Point-major serialization under the greedy relabeling that starts a
    /// BFS at `start`. Transitivity makes the relabeling total.
    fn serialization_from(&self, start: usize) -> (Vec<usize>, Vec<usize>) {
        let d = self.degree;
        let mut old_to_new = vec![usize::MAX; d];
        let mut new_to_old = Vec::with_capacity(d);
        old_to_new[start] = 0;
        new_to_old.push(start);
        let mut ser = Vec::with_capacity(3 * d);
        let mut i = 0;
        while i < new_to_old.len() {
            let old = new_to_old[i];
            for j in 0..3 {
                let img = self.sigma[j].apply(old);
                if old_to_new[img] == usize::MAX {
                    old_to_new[img] = new_to_old.len();
                    new_to_old.push(img);
                }
                ser.push(old_to_new[img]);
            }
            i += 1;
        }
        assert_eq!(new_to_old.len(), d, "constellation not transitive");
        (ser, old_to_new)
    }

    fn min_serialization(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.degree)
            .map(|s| self.serialization_from(s))
            .min()
            .unwrap()
    }

    /// Canonical representative of the conjugation orbit: the relabeling
    /// minimizing the point-major serialization (σ₁(i),σ₂(i),σ₃(i) for
    /// i = 0,…,d−1), over all BFS start points. The greedy label assignment
    /// is forced at the first free slot, so this is the exact lexicographic
    /// minimum over all d! relabelings. `quotient_swap` additionally
    /// minimizes over the first-two-branch-point exchange.
    pub fn canonical(&self, quotient_swap: bool) -> Constellation {
        let (ser, map) = self.min_serialization();
        let mut best = (ser, self.relabel(&map));
        if quotient_swap {
            let swapped = self.swap_first_two();
            let (ser, map) = swapped.min_serialization();
            let cand = (ser, swapped.relabel(&map));
            if cand.0 < best.0 {
                best = cand;
            }
        }
        best.1
    }

    pub fn canonical_key(&self, quotient_swap: bool) -> Vec<usize> {
        let mut key = self.min_serialization().0;
        if quotient_swap {
            let swapped = self.swap_first_two().min_serialization().0;
            if swapped < key {
                key = swapped;
            }
        }
        key
    }

    fn relabel(&self, old_to_new: &[usize]) -> Constellation {
        let d = self.degree;
        let mut new_to_old = vec![0; d];
        for (old, &new) in old_to_new.iter().enumerate() {
            new_to_old[new] = old;
        }
        let sigma = std::array::from_fn(|j| {
            Perm::new(
                (0..d)
                    .map(|i| old_to_new[self.sigma[j].apply(new_to_old[i])])
                    .collect(),
            )
        });
        Constellation::new(sigma)
    }
}

/// True if some relabeling of the sheets carries `a` onto `b` componentwise.
/// Independent of the canonical form: propagates the conjugator from each
/// candidate image of sheet 0 along the Schreier graph, then verifies all
/// constraints.
pub fn conjugate_equivalent(a: &Constellation, b: &Constellation) -> bool {
    if a.degree != b.degree {
        return false;
    }
    let d = a.degree;
    'candidates: for w in 0..d {
        let mut g = vec![usize::MAX; d];
        g[0] = w;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for j in 0..3 {
                let y = a.sigma[j].apply(x);
                let gy = b.sigma[j].apply(g[x]);
                if g[y] == usize::MAX {
                    g[y] = gy;
                    stack.push(y);
                } else if g[y] != gy {
                    continue 'candidates;
                }
            }
        }
        let mut taken = vec![false; d];
        for &img in &g {
            if img == usize::MAX || taken[img] {
                continue 'candidates;
            }
            taken[img] = true;
        }
        for x in 0..d {
            for j in 0..3 {
                if g[a.sigma[j].apply(x)] != b.sigma[j].apply(g[x]) {
                    continue 'candidates;
                }
            }
        }
        return true;
    }
    false
}

/// Equivalence as covers of the datum's base: conjugation, plus the
/// branch-point exchange over D6 when the first two columns coincide.
pub fn cover_equivalent(datum: &BranchingDatum, a: &Constellation, b: &Constellation) -> bool {
    if conjugate_equivalent(a, b) {
        return true;
    }
    datum.base == BaseFamily::D6
        && datum.columns[0] == datum.columns[1]
        && conjugate_equivalent(&a.swap_first_two(), b)
}

/// Search diagnostics, kept so that empty results double as exhaustion
/// certificates.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct SearchAudit {
    /// Point assignments attempted, forced moves included.
    pub nodes: u64,
    /// Complete assignments that reached the final verification.
    pub completions: u64,
    /// Verified solutions before deduplication.
    pub solutions: u64,
}

pub struct CoverSearch {
    pub covers: Vec<Constellation>,
    pub audit: SearchAudit,
}

/// The identity-012…-ordered permutation with the given sorted cycle type.
fn perm_of_type(d: usize, lengths: &[usize]) -> Perm {
    let mut map = vec![0; d];
    let mut next = 0;
    for &len in lengths {
        for i in 0..len {
            map[next + i] = next + (i + 1) % len;
        }
        next += len;
    }
    assert_eq!(next, d);
    Perm::new(map)
}

struct Backtracker {
    d: usize,
    sigma3: Perm,
    sigma3_inv: Perm,
    col1_fixed: usize,
    col1_trans: usize,
    col2_budget: BTreeMap<usize, usize>,
    quotient_swap: bool,
    // σ₂ under construction, with chain bookkeeping for its partial cycles.
    s2: Vec<usize>,
    s2_taken: Vec<bool>,
    s1: Vec<usize>,
    f1_used: usize,
    t1_used: usize,
    head_of: Vec<usize>, // valid at chain tails
    tail_of: Vec<usize>, // valid at chain heads
    len_of: Vec<usize>,  // valid at chain heads
    audit: SearchAudit,
    found: BTreeMap<Vec<usize>, Constellation>,
}

const UNSET: usize = usize::MAX;

enum Undo {
    Assign { u: usize, v: usize },
    Pair { a: usize, u: usize, fixed: bool },
    Close { len: usize },
    Merge { head: usize, mid_head: usize, old_tail: usize, old_len: usize },
}

impl Backtracker {
    fn new(datum: &BranchingDatum) -> Self {
        let d = datum.degree;
        let sigma3 = perm_of_type(d, &datum.columns[2]);
        let sigma3_inv = sigma3.inverse();
        let col1_fixed = datum.columns[0].iter().filter(|&&l| l == 1).count();
        let col1_trans = datum.columns[0].iter().filter(|&&l| l == 2).count();
        assert_eq!(col1_fixed + col1_trans, datum.columns[0].len());
        let mut col2_budget = BTreeMap::new();
        for &l in &datum.columns[1] {
            *col2_budget.entry(l).or_insert(0) += 1;
        }
        Backtracker {
            d,
            sigma3,
            sigma3_inv,
            col1_fixed,
            col1_trans,
            col2_budget,
            quotient_swap: datum.base == BaseFamily::D6 && datum.columns[0] == datum.columns[1],
            s2: vec![UNSET; d],
            s2_taken: vec![false; d],
            s1: vec![UNSET; d],
            f1_used: 0,
            t1_used: 0,
            head_of: (0..d).collect(),
            tail_of: (0..d).collect(),
            len_of: vec![1; d],
            audit: SearchAudit::default(),
            found: BTreeMap::new(),
        }
    }

    /// Apply σ₂(u) = v together with everything it forces: σ₁ pairs
    /// σ₃(v) with u, and the involution then forces σ₂(σ₃(v)) = σ₃⁻¹(u).
    /// Returns false on contradiction; `journal` records what to undo.
    fn apply(&mut self, u: usize, v: usize, journal: &mut Vec<Undo>) -> bool {
        let mut queue = vec![(u, v)];
        while let Some((u, v)) = queue.pop() {
            self.audit.nodes += 1;
            if self.s2[u] != UNSET {
                if self.s2[u] == v {
                    continue;
                }
                return false;
            }
            if self.s2_taken[v] {
                return false;
            }
            // Chain bookkeeping: u is a tail, v is a head.
            let u_head = self.head_of[u];
            if u_head == v {
                // Cycle of σ₂ closes; its length must still be in budget.
                let len = self.len_of[v];
                match self.col2_budget.get_mut(&len) {
                    Some(n) if *n > 0 => *n -= 1,
                    _ => return false,
                }
                journal.push(Undo::Close { len });
            } else {
                let v_tail = self.tail_of[v];
                let old_len = self.len_of[u_head];
                self.head_of[v_tail] = u_head;
                self.tail_of[u_head] = v_tail;
                self.len_of[u_head] += self.len_of[v];
                journal.push(Undo::Merge {
                    head: u_head,
                    mid_head: v,
                    old_tail: u,
                    old_len,
                });
            }
            self.s2[u] = v;
            self.s2_taken[v] = true;
            journal.push(Undo::Assign { u, v });

            // σ₁ must pair a = σ₃(v) with u.
            let a = self.sigma3.apply(v);
            if self.s1[a] != UNSET || self.s1[u] != UNSET {
                if self.s1[a] != u || self.s1[u] != a {
                    return false;
                }
                continue;
            }
            let fixed = a == u;
            if fixed {
                if self.f1_used == self.col1_fixed {
                    return false;
                }
                self.f1_used += 1;
            } else {
                if self.t1_used == self.col1_trans {
                    return false;
                }
                self.t1_used += 1;
            }
            self.s1[a] = u;
            self.s1[u] = a;
            journal.push(Undo::Pair { a, u, fixed });
            if !fixed {
                queue.push((a, self.sigma3_inv.apply(u)));
            }
        }
        true
    }

    fn rollback(&mut self, journal: Vec<Undo>) {
        for step in journal.into_iter().rev() {
            match step {
                Undo::Assign { u, v } => {
                    self.s2[u] = UNSET;
                    self.s2_taken[v] = false;
                }
                Undo::Pair { a, u, fixed } => {
                    self.s1[a] = UNSET;
                    self.s1[u] = UNSET;
                    if fixed {
                        self.f1_used -= 1;
                    } else {
                        self.t1_used -= 1;
                    }
                }
                Undo::Close { len } => {
                    *self.col2_budget.get_mut(&len).unwrap() += 1;
                }
                Undo::Merge {
                    head,
                    mid_head,
                    old_tail,
                    old_len,
                } => {
                    let merged_tail = self.tail_of[head];
                    self.head_of[merged_tail] = mid_head;
                    self.tail_of[head] = old_tail;
                    self.len_of[head] = old_len;
                }
            }
        }
    }

    fn search(&mut self) {
        // Pick the smallest sheet without a σ₂ image.
        let u = match (0..self.d).find(|&x| self.s2[x] == UNSET) {
            Some(u) => u,
            None => {
                self.complete();
                return;
            }
        };
        for v in 0..self.d {
            if self.s2_taken[v] {
                continue;
            }
            let mut journal = Vec::new();
            if self.apply(u, v, &mut journal) {
                self.search();
            }
            self.rollback(journal);
        }
    }

    fn complete(&mut self) {
        self.audit.completions += 1;
        let s2 = Perm::new(self.s2.clone());
        let s1 = Perm::new(self.s1.clone());
        let c = Constellation::new([s1, s2, self.sigma3.clone()]);
        if !c.is_transitive() {
            return;
        }
        assert!(c.is_genus_zero());
        self.audit.solutions += 1;
        let key = c.canonical_key(self.quotient_swap);
        self.found
            .entry(key)
            .or_insert_with(|| c.canonical(self.quotient_swap));
    }
}

/// Enumerate the covers realizing `datum`, with search diagnostics. σ₃ is
/// pinned to a fixed representative of its cycle type; σ₂ is backtracked
/// pointwise; σ₁ is forced by the identity product and must be of
/// involution type (both bases have k₁ = 2), which drives the propagation.
pub fn enumerate_covers_audited(datum: &BranchingDatum) -> CoverSearch {
    let base = datum.base.orbifold();
    assert_eq!(base.orders()[0], 2);
    for (j, col) in datum.columns.iter().enumerate() {
        assert!(col.iter().all(|&l| 1 <= l && l <= base.orders()[j]));
        assert_eq!(col.iter().sum::<usize>(), datum.degree);
    }
    let mut bt = Backtracker::new(datum);
    bt.search();
    let covers: Vec<Constellation> = bt.found.into_values().collect();
    for c in &covers {
        assert!(c.matches_datum(datum));
    }
    CoverSearch {
        covers,
        audit: bt.audit,
    }
}

pub fn enumerate_covers(datum: &BranchingDatum) -> Vec<Constellation> {
    enumerate_covers_audited(datum).covers
}

/// Independent oracle for small degrees: enumerate every permutation triple
/// with the datum's cycle types and identity product, then partition into
/// classes with `cover_equivalent`. Exponential; degree ≤ 7 or so.
pub fn brute_force_classes(datum: &BranchingDatum) -> Vec<Constellation> {
    let d = datum.degree;
    let all_s2 = perms_of_type(d, &datum.columns[1]);
    let all_s3 = perms_of_type(d, &datum.columns[2]);
    let mut reps: Vec<Constellation> = Vec::new();
    for s3 in &all_s3 {
        for s2 in &all_s2 {
            let s1 = s2.then(s3).inverse();
            if s1.cycle_type() != datum.columns[0] {
                continue;
            }
            let c = Constellation::new([s1, s2.clone(), s3.clone()]);
            if !c.is_transitive() {
                continue;
            }
            if !reps.iter().any(|r| cover_equivalent(datum, &c, r)) {
                reps.push(c);
            }
        }
    }
    reps
}

/// All permutations of `{0,…,d-1}` with the given sorted cycle type.
fn perms_of_type(d: usize, lengths: &[usize]) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut map = vec![UNSET; d];
    let mut used = vec![false; d];
    fn rec(map: &mut Vec<usize>, used: &mut Vec<bool>, i: usize, out: &mut Vec<Perm>, t: &[usize]) {
        if i == map.len() {
            let p = Perm::new(map.clone());
            if p.cycle_type() == t {
                out.push(p);
            }
            return;
        }
        for v in 0..map.len() {
            if !used[v] {
                used[v] = true;
                map[i] = v;
                rec(map, used, i + 1, out, t);
                used[v] = false;
            }
        }
        map[i] = UNSET;
    }
    rec(&mut map, &mut used, 0, &mut out, lengths);
    out
}

/// Split a datum's canonical cover list into mirror-symmetric classes and
/// chiral pairs.
pub fn chirality_split(datum: &BranchingDatum, covers: &[Constellation]) -> (usize, usize) {
    let mut achiral = 0;
    let mut chiral = 0;
    for c in covers {
        if cover_equivalent(datum, &c.mirror(), c) {
            achiral += 1;
        } else {
            chiral += 1;
        }
    }
    (achiral, chiral)
}

/// The bipartite map drawn by the cover: edges 1..d, white vertices the σ₁
/// cycles, dark vertices the σ₂ cycles, faces the σ₃ cycles with face degree
/// twice the cycle length.
#[derive(Clone, Debug, Serialize)]
pub struct Dessin {
    pub degree: usize,
    pub white: Vec<Vec<usize>>,
    pub dark: Vec<Vec<usize>>,
    /// (cycle, face degree)
    pub faces: Vec<(Vec<usize>, usize)>,
}

pub fn dessin_of(c: &Constellation) -> Dessin {
    let one_based = |cycles: Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        cycles
            .into_iter()
            .map(|cy| cy.into_iter().map(|x| x + 1).collect())
            .collect()
    };
    Dessin {
        degree: c.degree,
        white: one_based(c.sigma[0].cycles()),
        dark: one_based(c.sigma[1].cycles()),
        faces: one_based(c.sigma[2].cycles())
            .into_iter()
            .map(|cy| {
                let deg = 2 * cy.len();
                (cy, deg)
            })
            .collect(),
    }
}

impl Dessin {
    /// True if the underlying graph is a single open path using all edges
    /// (so both vertex permutations are involution-type).
    pub fn is_segment(&self) -> bool {
        let ends: usize = self
            .white
            .iter()
            .chain(&self.dark)
            .filter(|cy| cy.len() == 1)
            .count();
        let max_deg = self
            .white
            .iter()
            .chain(&self.dark)
            .map(|cy| cy.len())
            .max()
            .unwrap_or(0);
        // Connected (covers are transitive), max degree ≤ 2, exactly two
        // degree-1 endpoints: a path. Edge count is then `degree`.
        max_deg <= 2 && ends == 2 && self.white.len() + self.dark.len() == self.degree + 1
    }

    /// True if the graph is a single closed circle through all edges.
    pub fn is_circle(&self) -> bool {
        let all_deg_two = self
            .white
            .iter()
            .chain(&self.dark)
            .all(|cy| cy.len() == 2);
        all_deg_two && self.white.len() + self.dark.len() == self.degree
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let face_degrees: Vec<String> = self.faces.iter().map(|(_, d)| d.to_string()).collect();
        s.push_str("graph dessin {\n");
        s.push_str(&format!(
            "  // face degrees: {}\n",
            face_degrees.join(", ")
        ));
        s.push_str("  node [shape=circle, style=filled];\n");
        for (i, _) in self.white.iter().enumerate() {
            s.push_str(&format!("  w{i} [fillcolor=white, label=\"w{i}\"];\n"));
        }
        for (i, _) in self.dark.iter().enumerate() {
            s.push_str(&format!("  d{i} [fillcolor=gray, label=\"d{i}\"];\n"));
        }
        for edge in 1..=self.degree {
            let w = self.white.iter().position(|cy| cy.contains(&edge)).unwrap();
            let d = self.dark.iter().position(|cy| cy.contains(&edge)).unwrap();
            s.push_str(&format!("  w{w} -- d{d} [label=\"{edge}\"];\n"));
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{ConeTuple, RationalAngle};
    use crate::branching::{enumerate_branching, enumerate_tuples, TupleFilters};

    fn a(n: i64, d: i64) -> RationalAngle {
        RationalAngle::new(n, d)
    }

    fn t(angles: &[(i64, i64)]) -> ConeTuple {
        ConeTuple::new(angles.iter().map(|&(n, d)| a(n, d)).collect())
    }

    #[test]
    fn degree_one_identity_cover() {
        let d6 = BaseFamily::D6.orbifold();
        let data = enumerate_branching(&t(&[(1, 3), (1, 1), (1, 1)]), &d6);
        let covers = enumerate_covers(&data[0]);
        assert_eq!(covers.len(), 1);
        assert!(covers[0].sigma.iter().all(|p| p.is_identity()));
        assert_eq!(covers[0].mirror().canonical(true), covers[0]);
    }

    #[test]
    fn degree_nine_datum_has_no_cover() {
        let s4 = BaseFamily::S4.orbifold();
        let data = enumerate_branching(&t(&[(1, 1), (3, 2), (3, 2), (3, 2)]), &s4);
        assert_eq!(data.len(), 1);
        let search = enumerate_covers_audited(&data[0]);
        assert!(search.covers.is_empty());
        assert!(search.audit.nodes > 0);
    }

    #[test]
    fn quadrilateral_pair_realized() {
        let s4 = BaseFamily::S4.orbifold();
        let data = enumerate_branching(&t(&[(1, 1), (1, 1), (4, 3), (4, 3)]), &s4);
        assert_eq!(data.len(), 2);
        for datum in &data {
            assert!(!enumerate_covers(datum).is_empty());
        }
    }

    #[test]
    fn mirror_is_involution_and_preserves_types() {
        let s4 = BaseFamily::S4.orbifold();
        for tuple in enumerate_tuples(BaseFamily::S4, 3, TupleFilters::ALL) {
            for datum in enumerate_branching(&tuple, &s4) {
                for c in enumerate_covers(&datum) {
                    let m = c.mirror();
                    assert!(m.matches_datum(&datum));
                    assert_eq!(m.mirror(), c);
                }
            }
        }
    }

    #[test]
    fn backtracker_matches_brute_force_small() {
        for family in BaseFamily::ALL {
            let base = family.orbifold();
            for n in 3..=4 {
                for tuple in enumerate_tuples(family, n, TupleFilters::ALL) {
                    for datum in enumerate_branching(&tuple, &base) {
                        if datum.degree > 5 {
                            continue;
                        }
                        let fast = enumerate_covers(&datum);
                        let slow = brute_force_classes(&datum);
                        assert_eq!(fast.len(), slow.len(), "datum {datum:?}");
                        for r in &slow {
                            assert_eq!(
                                fast.iter()
                                    .filter(|c| cover_equivalent(&datum, c, r))
                                    .count(),
                                1
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_conjugation_invariant() {
        let s4 = BaseFamily::S4.orbifold();
        let tuple = t(&[(2, 3), (1, 1), (1, 1)]);
        for datum in enumerate_branching(&tuple, &s4) {
            for c in enumerate_covers(&datum) {
                // conjugate by a rotation of the points
                let mut rot: Vec<usize> = (1..c.degree).collect();
                rot.push(0);
                let g = Perm::new(rot);
                let conj = Constellation::new(std::array::from_fn(|j| {
                    c.sigma[j].conjugate_by(&g)
                }));
                assert_eq!(conj.canonical(false), c.canonical(false));
            }
        }
    }

    #[test]
    fn d6_segment_dessins() {
        let d6 = BaseFamily::D6.orbifold();
        for n in 1..=5i64 {
            let tuple = t(&[(n, 3), (1, 1), (1, 1)]);
            let mut found = 0;
            for datum in enumerate_branching(&tuple, &d6) {
                for c in enumerate_covers(&datum) {
                    let dessin = dessin_of(&c);
                    assert!(dessin.is_segment(), "n={n}: {dessin:?}");
                    assert!(dessin.degree <= 5);
                    found += 1;
                }
            }
            assert!(found >= 1, "no cover for n={n}");
        }
    }

    #[test]
    fn round_sphere_dessin_is_a_circle() {
        let d6 = BaseFamily::D6.orbifold();
        let data = enumerate_branching(&ConeTuple::empty(), &d6);
        let covers = enumerate_covers(&data[0]);
        assert!(!covers.is_empty());
        for c in &covers {
            assert!(dessin_of(c).is_circle());
            assert_eq!(c.degree, 12);
        }
    }
}
