//! Holonomy computation, double detection, and assembly of the final
//! 32-row classification of singular-vertex links.

use crate::angles::{allowed_angles, BaseFamily, ConeTuple, RationalAngle};
use crate::branching::{
    degree_of, enumerate_branching, enumerate_tuples, BranchingDatum, TupleFilters,
};
use crate::covers::{enumerate_covers_audited, Constellation, SearchAudit};
use crate::perm::{generated_subgroup, Perm};
use crate::{exec_map, Exec};
use serde::Serialize;
use std::collections::BTreeMap;

/// A faithful permutation model of the base's rotation group together with
/// the images g₁, g₂, g₃ of the three branch-point generators,
/// g₁g₂g₃ = id under left-to-right composition and order(gⱼ) = kⱼ.
pub struct RotationModel {
    pub family: BaseFamily,
    pub points: usize,
    pub g: [Perm; 3],
    pub group_order: usize,
}

impl RotationModel {
    /// The cube rotation group S₄ permuting the four diagonals, resp. the
    /// hexagonal prism rotation group D₆ permuting the six prism faces.
    pub fn for_family(family: BaseFamily) -> Self {
        let (points, g) = match family {
            BaseFamily::S4 => (
                4,
                [
                    Perm::from_cycles(4, &[&[1, 2]]),
                    Perm::from_cycles(4, &[&[2, 4, 3]]),
                    Perm::from_cycles(4, &[&[1, 2, 3, 4]]),
                ],
            ),
            BaseFamily::D6 => (
                6,
                [
                    Perm::from_cycles(6, &[&[2, 6], &[3, 5]]),
                    Perm::from_cycles(6, &[&[1, 2], &[3, 6], &[4, 5]]),
                    Perm::from_cycles(6, &[&[1, 6, 5, 4, 3, 2]]),
                ],
            ),
        };
        let base = family.orbifold();
        assert!(g[0].then(&g[1]).then(&g[2]).is_identity());
        for (j, gen) in g.iter().enumerate() {
            assert_eq!(gen.order(), base.branch_points[j].order);
        }
        let group_order = generated_subgroup(&g).len();
        assert_eq!(group_order, base.rotation_group_order);
        RotationModel {
            family,
            points,
            g,
            group_order,
        }
    }
}

/// Isomorphism types of the subgroups of the two rotation groups. Per the
/// subgroup taxonomy of S₄ and D₆, the abstract type (with the
/// cyclic/dihedral distinction) already determines the conjugacy class.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum SubgroupType {
    Trivial,
    C2,
    C3,
    C4,
    D2,
    C6,
    D3,
    D4,
    A4,
    D6,
    S4,
}

impl SubgroupType {
    pub fn order(self) -> usize {
        match self {
            SubgroupType::Trivial => 1,
            SubgroupType::C2 => 2,
            SubgroupType::C3 => 3,
            SubgroupType::C4 | SubgroupType::D2 => 4,
            SubgroupType::C6 | SubgroupType::D3 => 6,
            SubgroupType::D4 => 8,
            SubgroupType::A4 | SubgroupType::D6 => 12,
            SubgroupType::S4 => 24,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SubgroupType::Trivial => "1",
            SubgroupType::C2 => "C2",
            SubgroupType::C3 => "C3",
            SubgroupType::C4 => "C4",
            SubgroupType::D2 => "D2",
            SubgroupType::C6 => "C6",
            SubgroupType::D3 => "D3",
            SubgroupType::D4 => "D4",
            SubgroupType::A4 => "A4",
            SubgroupType::D6 => "D6",
            SubgroupType::S4 => "S4",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            SubgroupType::Trivial,
            SubgroupType::C2,
            SubgroupType::C3,
            SubgroupType::C4,
            SubgroupType::D2,
            SubgroupType::C6,
            SubgroupType::D3,
            SubgroupType::D4,
            SubgroupType::A4,
            SubgroupType::D6,
            SubgroupType::S4,
        ]
        .into_iter()
        .find(|t| t.name() == name)
    }
}

impl std::fmt::Display for SubgroupType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn classify_subgroup(elements: &[Perm]) -> SubgroupType {
    let order = elements.len();
    let has_element_of = |n: usize| elements.iter().any(|p| p.order() == n);
    match order {
        1 => SubgroupType::Trivial,
        2 => SubgroupType::C2,
        3 => SubgroupType::C3,
        4 => {
            if has_element_of(4) {
                SubgroupType::C4
            } else {
                SubgroupType::D2
            }
        }
        6 => {
            if has_element_of(6) {
                SubgroupType::C6
            } else {
                SubgroupType::D3
            }
        }
        8 => SubgroupType::D4,
        12 => {
            if has_element_of(6) {
                SubgroupType::D6
            } else {
                SubgroupType::A4
            }
        }
        24 => SubgroupType::S4,
        _ => panic!("order {order} is not a subgroup order of S4 or D6"),
    }
}

/// Holonomy of the cone surface: the image in the rotation group of the
/// stabilizer of sheet 0, generated by the Schreier elements
/// rep(p)·gⱼ·rep(σⱼ(p))⁻¹ over a BFS coset-representative assignment.
pub fn holonomy_group(c: &Constellation, model: &RotationModel) -> SubgroupType {
    let d = c.degree;
    let mut rep: Vec<Option<Perm>> = vec![None; d];
    rep[0] = Some(Perm::identity(model.points));
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        for j in 0..3 {
            let q = c.sigma[j].apply(p);
            if rep[q].is_none() {
                rep[q] = Some(rep[p].as_ref().unwrap().then(&model.g[j]));
                queue.push_back(q);
            }
        }
    }
    let mut gens = Vec::new();
    for p in 0..d {
        for j in 0..3 {
            let q = c.sigma[j].apply(p);
            let h = rep[p]
                .as_ref()
                .unwrap()
                .then(&model.g[j])
                .then(&rep[q].as_ref().unwrap().inverse());
            if !h.is_identity() && !gens.contains(&h) {
                gens.push(h);
            }
        }
    }
    if gens.is_empty() {
        return SubgroupType::Trivial;
    }
    classify_subgroup(&generated_subgroup(&gens))
}

/// All simplicial reflections of the triangulated cover: involutions f of
/// the sheet set exchanging white and black triangles (wᵢ ↦ b_f(i)) that
/// preserve the three gluing rules, i.e. f∘σ₁∘f = σ₁⁻¹ and
/// f∘σ₂∘f = σ₂⁻¹ as functions. Each is determined by f(0).
pub fn reflections(c: &Constellation) -> Vec<Perm> {
    let d = c.degree;
    let s1 = &c.sigma[0];
    let s2 = &c.sigma[1];
    let s1_inv = s1.inverse();
    let s2_inv = s2.inverse();
    let mut out = Vec::new();
    'candidates: for w in 0..d {
        let mut f = vec![usize::MAX; d];
        f[0] = w;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for (s, s_inv) in [(s1, &s1_inv), (s2, &s2_inv)] {
                let y = s.apply(x);
                let fy = s_inv.apply(f[x]);
                if f[y] == usize::MAX {
                    f[y] = fy;
                    stack.push(y);
                } else if f[y] != fy {
                    continue 'candidates;
                }
            }
        }
        if f.iter().any(|&v| v == usize::MAX) {
            continue;
        }
        let f = Perm::new(f);
        if !(f.then(&f).is_identity()
            && f.then(s1).then(&f) == s1_inv
            && f.then(s2).then(&f) == s2_inv)
        {
            continue;
        }
        out.push(f);
    }
    out
}

/// Edges of the triangulation fixed pointwise by the reflection f:
/// the (p₁p₂) edge of wᵢ iff f(i) = i, the (p₃p₁) edge iff f(i) = σ₁(i),
/// the (p₂p₃) edge iff f(i) = σ₂⁻¹(i).
fn has_fixed_edge(c: &Constellation, f: &Perm) -> bool {
    let s2_inv = c.sigma[1].inverse();
    (0..c.degree).any(|i| {
        f.apply(i) == i || f.apply(i) == c.sigma[0].apply(i) || f.apply(i) == s2_inv.apply(i)
    })
}

/// True iff the glued surface admits an orientation-reversing simplicial
/// involution with a non-empty fixed 1-complex. Weaker than being a
/// polygon double: the fixed circle may avoid some cone points (it does on
/// four of the 32 links).
pub fn has_mirror_reflection(c: &Constellation) -> bool {
    reflections(c).iter().any(|f| has_fixed_edge(c, f))
}

/// True iff the surface is the double of a spherical polygon: some
/// reflection's fixed circle is the polygon boundary, passing through
/// every cone vertex. (Cone vertices sit over branch point j at σⱼ-cycles
/// of length below the branching order kⱼ.)
pub fn is_double(c: &Constellation, base: BaseFamily) -> bool {
    let orders = base.orbifold().orders();
    let s1 = &c.sigma[0];
    let s2_inv = c.sigma[1].inverse();
    reflections(c).iter().any(|f| {
        let vertex_on_axis = |j: usize, cycle: &[usize]| -> bool {
            cycle.iter().any(|&i| match j {
                0 => f.apply(i) == i || f.apply(i) == s1.apply(i),
                1 => f.apply(i) == i || f.apply(i) == s2_inv.apply(i),
                _ => f.apply(i) == s1.apply(i) || f.apply(i) == s2_inv.apply(i),
            })
        };
        has_fixed_edge(c, f)
            && (0..3).all(|j| {
                c.sigma[j]
                    .cycles()
                    .iter()
                    .filter(|cy| cy.len() < orders[j])
                    .all(|cy| vertex_on_axis(j, cy))
            })
    })
}

/// One covering realization of a link.
#[derive(Clone, Debug, Serialize)]
pub struct Realization {
    pub base: BaseFamily,
    pub datum: BranchingDatum,
    pub cover: Constellation,
}

/// One classified singular-vertex link.
#[derive(Clone, Debug, Serialize)]
pub struct LinkRecord {
    pub table_index: usize,
    pub cone_angles: ConeTuple,
    /// ϑ with 2πϑᵢ = αᵢ, the table's convention.
    pub theta: Vec<RationalAngle>,
    pub bases: Vec<BaseFamily>,
    pub monodromy: SubgroupType,
    pub is_double: bool,
    pub realizations: Vec<Realization>,
}

impl LinkRecord {
    pub fn n(&self) -> usize {
        self.cone_angles.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.realizations.iter().map(|r| r.datum.degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }
}

/// Why a candidate tuple produced no link, or what the search found.
#[derive(Clone, Debug, Serialize)]
pub enum TupleOutcome {
    /// Gauss-Bonnet area is not an integer multiple of the base area.
    NonIntegralDegree { area: RationalAngle },
    /// Integral degree, but no admissible column assignment exists.
    NoBranchingData { degree: usize },
    /// Branching data searched, cover lists and audits per datum.
    Searched { degree: usize, data: Vec<DatumSearch> },
}

#[derive(Clone, Debug, Serialize)]
pub struct DatumSearch {
    pub datum: BranchingDatum,
    pub covers: Vec<Constellation>,
    pub audit: SearchAudit,
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleResult {
    pub family: BaseFamily,
    pub tuple: ConeTuple,
    pub outcome: TupleOutcome,
}

impl TupleResult {
    pub fn cover_count(&self) -> usize {
        match &self.outcome {
            TupleOutcome::Searched { data, .. } => data.iter().map(|d| d.covers.len()).sum(),
            _ => 0,
        }
    }

    pub fn nodes_explored(&self) -> u64 {
        match &self.outcome {
            TupleOutcome::Searched { data, .. } => data.iter().map(|d| d.audit.nodes).sum(),
            _ => 0,
        }
    }
}

/// Full pipeline output: the 32 links plus the complete survey of every
/// candidate tuple over both bases (the non-existence certificates).
#[derive(Serialize)]
pub struct Classification {
    pub records: Vec<LinkRecord>,
    pub survey: Vec<TupleResult>,
}

fn search_tuple(family: BaseFamily, tuple: ConeTuple) -> TupleResult {
    let base = family.orbifold();
    let outcome = match degree_of(&tuple, &base) {
        Err(_) => TupleOutcome::NonIntegralDegree {
            area: crate::angles::gb_area(&tuple),
        },
        Ok(degree) => {
            let data = enumerate_branching(&tuple, &base);
            if data.is_empty() {
                TupleOutcome::NoBranchingData { degree }
            } else {
                let data = data
                    .into_iter()
                    .map(|datum| {
                        let search = enumerate_covers_audited(&datum);
                        DatumSearch {
                            datum,
                            covers: search.covers,
                            audit: search.audit,
                        }
                    })
                    .collect();
                TupleOutcome::Searched { degree, data }
            }
        }
    };
    TupleResult {
        family,
        tuple,
        outcome,
    }
}

pub fn classify_all() -> Classification {
    classify_all_with(Exec::default())
}

/// Enumerate candidate tuples with at least three cone points over both
/// bases up to the positivity ceilings, search every branching datum, and
/// merge the covers into isometry classes keyed by
/// (cone-angle multiset, monodromy type).
pub fn classify_all_with(exec: Exec) -> Classification {
    let mut jobs: Vec<(BaseFamily, ConeTuple)> = Vec::new();
    for family in BaseFamily::ALL {
        let ceiling = crate::angles::positivity_ceiling(family);
        for n in 3..=ceiling {
            for tuple in enumerate_tuples(family, n, TupleFilters::ALL) {
                jobs.push((family, tuple));
            }
        }
    }
    let survey = exec_map(exec, jobs, |(family, tuple)| search_tuple(family, tuple));

    let models: BTreeMap<BaseFamily, RotationModel> = BaseFamily::ALL
        .into_iter()
        .map(|f| (f, RotationModel::for_family(f)))
        .collect();

    let mut classes: BTreeMap<(ConeTuple, SubgroupType), Vec<Realization>> = BTreeMap::new();
    for result in &survey {
        if let TupleOutcome::Searched { data, .. } = &result.outcome {
            for ds in data {
                for cover in &ds.covers {
                    let monodromy = holonomy_group(cover, &models[&result.family]);
                    classes
                        .entry((result.tuple.clone(), monodromy))
                        .or_default()
                        .push(Realization {
                            base: result.family,
                            datum: ds.datum.clone(),
                            cover: cover.clone(),
                        });
                }
            }
        }
    }

    let mut records: Vec<LinkRecord> = classes
        .into_iter()
        .map(|((tuple, monodromy), realizations)| {
            let mut bases: Vec<BaseFamily> = realizations.iter().map(|r| r.base).collect();
            bases.sort();
            bases.dedup();
            for r in &realizations {
                assert_eq!(r.cover.cone_tuple(&r.base.orbifold()), tuple);
            }
            let is_double = realizations.iter().any(|r| is_double(&r.cover, r.base));
            LinkRecord {
                table_index: 0,
                cone_angles: tuple.clone(),
                theta: tuple.theta(),
                bases,
                monodromy,
                is_double,
                realizations,
            }
        })
        .collect();

    // Table order: number of cone points, then the angle tuple, then the
    // monodromy order (resolving the single angle collision).
    records.sort_by(|a, b| {
        (a.n(), &a.cone_angles, a.monodromy.order())
            .cmp(&(b.n(), &b.cone_angles, b.monodromy.order()))
    });
    for (i, r) in records.iter_mut().enumerate() {
        r.table_index = i + 1;
        assert!(3 <= r.n() && r.n() <= 5, "unexpected link with n={}", r.n());
    }
    Classification { records, survey }
}

/// Local structure types of a nonnegatively curved integral polyhedral
/// 3-manifold: one regular type, one type per allowed codimension-2 cone
/// angle, and one per singular-vertex link. Restricting to a single base
/// family restricts both the links and the angle list.
pub fn local_type_count(records: &[LinkRecord], family: Option<BaseFamily>) -> usize {
    match family {
        None => {
            let mut union = allowed_angles(BaseFamily::S4);
            for a in allowed_angles(BaseFamily::D6) {
                if !union.contains(&a) {
                    union.push(a);
                }
            }
            records.len() + union.len() + 1
        }
        Some(f) => {
            let links = records.iter().filter(|r| r.bases.contains(&f)).count();
            links + allowed_angles(f).len() + 1
        }
    }
}

/// Summary counts used by the verification mode.
#[derive(Debug, PartialEq, Eq, Serialize)]
pub struct SummaryCounts {
    pub total: usize,
    pub d6_realized: usize,
    pub s4_realized: usize,
    pub both: usize,
    /// S4-realized links with 3, 4, 5 cone points.
    pub s4_by_n: [usize; 3],
}

pub fn summary_counts(records: &[LinkRecord]) -> SummaryCounts {
    let d6: Vec<_> = records
        .iter()
        .filter(|r| r.bases.contains(&BaseFamily::D6))
        .collect();
    let s4: Vec<_> = records
        .iter()
        .filter(|r| r.bases.contains(&BaseFamily::S4))
        .collect();
    let both = records.iter().filter(|r| r.bases.len() == 2).count();
    let mut s4_by_n = [0usize; 3];
    for r in &s4 {
        s4_by_n[r.n() - 3] += 1;
    }
    SummaryCounts {
        total: records.len(),
        d6_realized: d6.len(),
        s4_realized: s4.len(),
        both,
        s4_by_n,
    }
}
