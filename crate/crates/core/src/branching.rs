//! Candidate cone-angle tuples and the multiplicity data realizing them:
//! which branch points of the base the cone points sit over, and with which
//! local multiplicities. All filtering here is exact rational arithmetic.

use crate::angles::{
    allowed_angles, gb_area, BaseFamily, BaseOrbifold, ConeTuple, RationalAngle,
};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Which exact filters to apply while enumerating tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleFilters {
    /// Strict Gauss–Bonnet positivity: `Σ(2π−αᵢ) < 4π`.
    pub positivity: bool,
    /// Strict lune bound: `area < 2·α_min`, required for the surface to embed
    /// into the spherical football `S²(α_min, α_min)`.
    pub lune: bool,
}

impl TupleFilters {
    pub const POSITIVITY: TupleFilters = TupleFilters {
        positivity: true,
        lune: false,
    };
    pub const ALL: TupleFilters = TupleFilters {
        positivity: true,
        lune: true,
    };
}

pub fn passes_positivity(tuple: &ConeTuple) -> bool {
    gb_area(tuple).is_positive()
}

pub fn passes_lune(tuple: &ConeTuple) -> bool {
    match tuple.min_angle() {
        Some(min) => gb_area(tuple) < min.scale(2),
        None => true,
    }
}

/// All size-`n` multisets over the base's allowed angles that pass the
/// requested filters, in canonical (sorted) order.
pub fn enumerate_tuples(family: BaseFamily, n: usize, filters: TupleFilters) -> Vec<ConeTuple> {
    let alphabet = allowed_angles(family);
    let mut out = Vec::new();
    let mut current: Vec<RationalAngle> = Vec::with_capacity(n);
    fn rec(
        alphabet: &[RationalAngle],
        from: usize,
        n: usize,
        current: &mut Vec<RationalAngle>,
        filters: &TupleFilters,
        out: &mut Vec<ConeTuple>,
    ) {
        if current.len() == n {
            let tuple = ConeTuple::new(current.clone());
            if (!filters.positivity || passes_positivity(&tuple))
                && (!filters.lune || passes_lune(&tuple))
            {
                out.push(tuple);
            }
            return;
        }
        for i in from..alphabet.len() {
            current.push(alphabet[i]);
            rec(alphabet, i, n, current, filters, out);
            current.pop();
        }
    }
    rec(&alphabet, 0, n, &mut current, &filters, &mut out);
    out.sort();
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DegreeError {
    #[error("area {area:?} is not a positive integer multiple of the base area {base_area:?}")]
    NotIntegral {
        area: RationalAngle,
        base_area: RationalAngle,
    },
}

/// Covering degree forced by area: `gb_area(tuple) / area(base)`, when that
/// ratio is a positive integer.
pub fn degree_of(tuple: &ConeTuple, base: &BaseOrbifold) -> Result<usize, DegreeError> {
    let area = gb_area(tuple);
    let ratio = area.ratio(&base.area);
    if area.is_positive() && ratio.is_integer() && !ratio.is_zero() {
        Ok(ratio.to_integer() as usize)
    } else {
        Err(DegreeError::NotIntegral {
            area,
            base_area: base.area,
        })
    }
}

/// Multiplicities over the three branch points of a base, realizing some cone
/// tuple at the given degree. Column `j` lists one multiplicity per preimage
/// of branch point `j`; entries equal to the branch order are regular points,
/// smaller entries are cone points of angle `ℓ·2π/kⱼ`. Every column sums to
/// the degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct BranchingDatum {
    pub base: BaseFamily,
    pub degree: usize,
    /// One sorted multiset per branch point, in the base's declared order.
    pub columns: [Vec<usize>; 3],
}

impl BranchingDatum {
    /// The cone angles this datum realizes (entries with `ℓ < kⱼ`).
    pub fn cone_tuple(&self) -> ConeTuple {
        let base = self.base.orbifold();
        let mut angles = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            let bp = &base.branch_points[j];
            for &l in col {
                if l < bp.order {
                    angles.push(bp.angle.scale(l as i64));
                }
            }
        }
        ConeTuple::new(angles)
    }

    /// Cycle counts per column; their sum is `degree + 2` for every datum
    /// that passes the exact area computation (asserted in the constructor).
    pub fn cycle_counts(&self) -> [usize; 3] {
        [
            self.columns[0].len(),
            self.columns[1].len(),
            self.columns[2].len(),
        ]
    }
}

/// All multiplicity data realizing `tuple` over `base` at its forced degree.
/// Empty output is the "ruled out by area-multiplicity bookkeeping" signal.
///
/// Over the D6 base the two order-2 branch points are geometrically
/// indistinguishable, so data are canonicalized with the first two columns
/// sorted; swap-related assignments collapse to one datum.
pub fn enumerate_branching(tuple: &ConeTuple, base: &BaseOrbifold) -> Vec<BranchingDatum> {
    let degree = match degree_of(tuple, base) {
        Ok(d) => d,
        Err(_) => return Vec::new(),
    };
    let orders = base.orders();

    // Per angle, the (branch point, multiplicity) slots that could produce it.
    let mut slot_choices: Vec<Vec<(usize, usize)>> = Vec::new();
    for &angle in tuple.angles() {
        let mut choices = Vec::new();
        for (j, bp) in base.branch_points.iter().enumerate() {
            let l = angle.ratio(&bp.angle);
            if l.is_integer() {
                let l = l.to_integer() as usize;
                if l >= 1 && l < bp.order {
                    choices.push((j, l));
                }
            }
        }
        if choices.is_empty() {
            return Vec::new();
        }
        slot_choices.push(choices);
    }

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut assignment: Vec<(usize, usize)> = Vec::with_capacity(slot_choices.len());
    rec_assign(
        &slot_choices,
        0,
        degree,
        &orders,
        base.family,
        &mut assignment,
        &mut seen,
        &mut out,
    );
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn rec_assign(
    slot_choices: &[Vec<(usize, usize)>],
    i: usize,
    degree: usize,
    orders: &[usize],
    family: BaseFamily,
    assignment: &mut Vec<(usize, usize)>,
    seen: &mut BTreeSet<[Vec<usize>; 3]>,
    out: &mut Vec<BranchingDatum>,
) {
    if i == slot_choices.len() {
        // Pad every column with regular multiplicities up to the degree.
        let mut columns: [Vec<usize>; 3] = Default::default();
        for (j, col) in columns.iter_mut().enumerate() {
            let mut sum = 0;
            for &(cj, l) in assignment.iter() {
                if cj == j {
                    col.push(l);
                    sum += l;
                }
            }
            if sum > degree || (degree - sum) % orders[j] != 0 {
                return;
            }
            col.extend(std::iter::repeat(orders[j]).take((degree - sum) / orders[j]));
            col.sort_unstable();
        }
        if family == BaseFamily::D6 && columns[0] > columns[1] {
            columns.swap(0, 1);
        }
        if seen.insert(columns.clone()) {
            let datum = BranchingDatum {
                base: family,
                degree,
                columns,
            };
            let counts = datum.cycle_counts();
            assert_eq!(counts[0] + counts[1] + counts[2], degree + 2);
            out.push(datum);
        }
        return;
    }
    for &choice in &slot_choices[i] {
        assignment.push(choice);
        rec_assign(
            slot_choices,
            i + 1,
            degree,
            orders,
            family,
            assignment,
            seen,
            out,
        );
        assignment.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: i64, d: i64) -> RationalAngle {
        RationalAngle::new(n, d)
    }

    fn t(angles: &[(i64, i64)]) -> ConeTuple {
        ConeTuple::new(angles.iter().map(|&(n, d)| a(n, d)).collect())
    }

    #[test]
    fn quadruple_counts_over_s4() {
        let pos = enumerate_tuples(BaseFamily::S4, 4, TupleFilters::POSITIVITY);
        assert_eq!(pos.len(), 32);
        let both = enumerate_tuples(BaseFamily::S4, 4, TupleFilters::ALL);
        assert_eq!(both.len(), 31);
        let rejected: Vec<_> = pos.iter().filter(|t| !passes_lune(t)).collect();
        assert_eq!(rejected, vec![&t(&[(1, 2), (3, 2), (3, 2), (3, 2)])]);
    }

    #[test]
    fn septuple_tuples_over_s4() {
        let pos = enumerate_tuples(BaseFamily::S4, 7, TupleFilters::POSITIVITY);
        let expected = vec![
            t(&[(4, 3), (4, 3), (3, 2), (3, 2), (3, 2), (3, 2), (3, 2)]),
            t(&[(4, 3), (3, 2), (3, 2), (3, 2), (3, 2), (3, 2), (3, 2)]),
            t(&[(3, 2), (3, 2), (3, 2), (3, 2), (3, 2), (3, 2), (3, 2)]),
        ];
        assert_eq!(pos, {
            let mut e = expected;
            e.sort();
            e
        });
        assert!(enumerate_tuples(BaseFamily::S4, 8, TupleFilters::POSITIVITY).is_empty());
        assert!(enumerate_tuples(BaseFamily::D6, 12, TupleFilters::POSITIVITY).is_empty());
    }

    #[test]
    fn degrees() {
        let s4 = BaseFamily::S4.orbifold();
        let d6 = BaseFamily::D6.orbifold();
        assert_eq!(degree_of(&t(&[(4, 3), (3, 2), (3, 2), (3, 2)]), &s4), Ok(11));
        assert_eq!(degree_of(&t(&[(1, 3), (1, 1), (1, 1)]), &d6), Ok(1));
        assert_eq!(
            degree_of(&t(&[(4, 3), (4, 3), (4, 3), (3, 2), (3, 2)]), &s4),
            Ok(6)
        );
        // area π/4 against base area π/6: ratio 3/2
        assert!(degree_of(&t(&[(1, 4), (1, 1), (1, 1)]), &s4).is_err());
    }

    #[test]
    fn branching_examples() {
        let s4 = BaseFamily::S4.orbifold();
        let data = enumerate_branching(&t(&[(1, 1), (3, 2), (3, 2), (3, 2)]), &s4);
        assert_eq!(data.len(), 1);
        assert_eq!(data[0].degree, 9);
        assert_eq!(data[0].columns[0], vec![1, 2, 2, 2, 2]);
        assert_eq!(data[0].columns[1], vec![3, 3, 3]);
        assert_eq!(data[0].columns[2], vec![3, 3, 3]);

        assert!(enumerate_branching(&t(&[(4, 3), (3, 2), (3, 2), (3, 2)]), &s4).is_empty());

        let d6 = BaseFamily::D6.orbifold();
        let data = enumerate_branching(&t(&[(1, 3), (1, 1), (1, 1)]), &d6);
        assert_eq!(
            data,
            vec![BranchingDatum {
                base: BaseFamily::D6,
                degree: 1,
                columns: [vec![1], vec![1], vec![1]],
            }]
        );
    }

    #[test]
    fn quadrilateral_split_over_s4() {
        // The π points can sit over y1 or over y3, nothing in between (parity).
        let s4 = BaseFamily::S4.orbifold();
        let data = enumerate_branching(&t(&[(1, 1), (1, 1), (4, 3), (4, 3)]), &s4);
        assert_eq!(data.len(), 2);
        let cols: Vec<_> = data.iter().map(|d| d.columns.clone()).collect();
        assert!(cols.contains(&[vec![1, 1, 2], vec![2, 2], vec![4]]));
        assert!(cols.contains(&[vec![2, 2], vec![2, 2], vec![2, 2]]));
    }

    #[test]
    fn datum_reconstructs_tuple() {
        for family in BaseFamily::ALL {
            let base = family.orbifold();
            for n in 3..=5 {
                for tuple in enumerate_tuples(family, n, TupleFilters::ALL) {
                    for datum in enumerate_branching(&tuple, &base) {
                        assert_eq!(datum.cone_tuple(), tuple);
                        for col in &datum.columns {
                            assert_eq!(col.iter().sum::<usize>(), datum.degree);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn round_sphere_datum_over_d6() {
        // Degree 12, no cone points: the unique unramified-looking datum.
        let d6 = BaseFamily::D6.orbifold();
        let data = enumerate_branching(&ConeTuple::empty(), &d6);
        assert_eq!(data.len(), 1);
        assert_eq!(data[0].columns, [vec![2; 6], vec![2; 6], vec![6, 6]]);
    }
}
