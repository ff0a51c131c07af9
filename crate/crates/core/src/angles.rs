//! Exact angle arithmetic. Angles are rational multiples of π; all of the
//! enumeration filters downstream are therefore bit-exact.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An angle `(p/q)·π`, stored in lowest terms with `q > 0`.
///
/// Serializes as the string `"p/q"` (so `"3/2"` means `3π/2`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalAngle(Ratio<i64>);

impl RationalAngle {
    /// The angle `(num/den)·π`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0);
        RationalAngle(Ratio::new(num, den))
    }

    pub const fn zero() -> Self {
        RationalAngle(Ratio::new_raw(0, 1))
    }

    pub fn pi() -> Self {
        RationalAngle::new(1, 1)
    }

    pub fn two_pi() -> Self {
        RationalAngle::new(2, 1)
    }

    /// Numerator of the multiple of π.
    pub fn num(&self) -> i64 {
        *self.0.numer()
    }

    /// Denominator of the multiple of π.
    pub fn den(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn to_f64(&self) -> f64 {
        std::f64::consts::PI * (*self.0.numer() as f64) / (*self.0.denom() as f64)
    }

    /// The rational ratio `self / other`, exact.
    pub fn ratio(&self, other: &RationalAngle) -> Ratio<i64> {
        assert!(!other.0.is_zero());
        self.0 / other.0
    }

    /// Halve the angle (used when passing from a cone angle to the tuple
    /// entry ϑ = angle/2π and to polygon corner angles).
    pub fn half(&self) -> Self {
        RationalAngle(self.0 / 2)
    }

    pub fn scale(&self, k: i64) -> Self {
        RationalAngle(self.0 * k)
    }

    fn fraction_string(&self) -> String {
        if *self.0.denom() == 1 {
            format!("{}", self.0.numer())
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }

    /// Human form with an explicit π, e.g. `3π/2`.
    pub fn pretty(&self) -> String {
        if self.0.is_zero() {
            return "0".into();
        }
        let (n, d) = (*self.0.numer(), *self.0.denom());
        let num = match n {
            1 => "π".into(),
            -1 => "-π".into(),
            n => format!("{n}π"),
        };
        if d == 1 {
            num
        } else {
            format!("{num}/{d}")
        }
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fraction_string())
    }
}

impl fmt::Debug for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

impl Serialize for RationalAngle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.fraction_string())
    }
}

impl<'de> Deserialize<'de> for RationalAngle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_fraction(&s).ok_or_else(|| serde::de::Error::custom("expected \"p/q\""))
    }
}

/// Parse `"p"` or `"p/q"` as the angle `(p/q)·π`.
pub fn parse_fraction(s: &str) -> Option<RationalAngle> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().ok()?, d.trim().parse().ok()?),
        None => (s.trim().parse().ok()?, 1),
    };
    if den == 0 {
        return None;
    }
    Some(RationalAngle::new(num, den))
}

impl Add for RationalAngle {
    type Output = RationalAngle;
    fn add(self, rhs: Self) -> Self {
        RationalAngle(self.0 + rhs.0)
    }
}

impl Sub for RationalAngle {
    type Output = RationalAngle;
    fn sub(self, rhs: Self) -> Self {
        RationalAngle(self.0 - rhs.0)
    }
}

impl Neg for RationalAngle {
    type Output = RationalAngle;
    fn neg(self) -> Self {
        RationalAngle(-self.0)
    }
}

impl Mul<i64> for RationalAngle {
    type Output = RationalAngle;
    fn mul(self, k: i64) -> Self {
        self.scale(k)
    }
}

/// A multiset of cone angles, kept sorted so multiset equality is structural.
/// Every entry is strictly between 0 and 2π.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ConeTuple(Vec<RationalAngle>);

impl ConeTuple {
    pub fn new(mut angles: Vec<RationalAngle>) -> Self {
        for a in &angles {
            assert!(
                a.is_positive() && *a < RationalAngle::two_pi(),
                "cone angle out of range: {a:?}"
            );
        }
        angles.sort();
        ConeTuple(angles)
    }

    pub fn empty() -> Self {
        ConeTuple(Vec::new())
    }

    pub fn angles(&self) -> &[RationalAngle] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The ϑ convention: each entry as a fraction of 2π.
    pub fn theta(&self) -> Vec<RationalAngle> {
        self.0.iter().map(|a| a.half()).collect()
    }

    pub fn min_angle(&self) -> Option<RationalAngle> {
        self.0.first().copied()
    }
}

impl fmt::Debug for ConeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.pretty()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Spherical Gauss–Bonnet: a closed cone surface with the given cone angles
/// has area `4π − Σ(2π − αᵢ)`, exactly. May be ≤ 0; callers filter.
pub fn gb_area(tuple: &ConeTuple) -> RationalAngle {
    let mut area = RationalAngle::new(4, 1);
    for &a in tuple.angles() {
        area = area - (RationalAngle::two_pi() - a);
    }
    area
}

/// The two base orbifolds covers are enumerated over.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum BaseFamily {
    #[serde(rename = "s4")]
    S4,
    #[serde(rename = "d6")]
    D6,
}

impl BaseFamily {
    pub const ALL: [BaseFamily; 2] = [BaseFamily::S4, BaseFamily::D6];

    pub fn orbifold(self) -> BaseOrbifold {
        BaseOrbifold::new(self)
    }

    pub fn name(self) -> &'static str {
        match self {
            BaseFamily::S4 => "s4",
            BaseFamily::D6 => "d6",
        }
    }
}

impl fmt::Display for BaseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One branch point of a base orbifold: cone angle `2π/order`.
#[derive(Clone, Debug, Serialize)]
pub struct BranchPoint {
    pub label: &'static str,
    pub angle: RationalAngle,
    pub order: usize,
}

/// A spherical quotient orbifold `S²/G` with three branch points.
#[derive(Clone, Debug)]
pub struct BaseOrbifold {
    pub family: BaseFamily,
    pub branch_points: Vec<BranchPoint>,
    pub area: RationalAngle,
    pub rotation_group_order: usize,
}

impl BaseOrbifold {
    pub fn new(family: BaseFamily) -> Self {
        let (labels, orders, group_order): ([&'static str; 3], [usize; 3], usize) = match family {
            BaseFamily::S4 => (["y1", "y2", "y3"], [2, 3, 4], 24),
            BaseFamily::D6 => (["z1", "z2", "z3"], [2, 2, 6], 12),
        };
        let branch_points: Vec<BranchPoint> = labels
            .iter()
            .zip(orders)
            .map(|(&label, order)| BranchPoint {
                label,
                angle: RationalAngle::new(2, order as i64),
                order,
            })
            .collect();
        // Quotient area 4π/|G|, which equals 4π − Σ(2π − 2π/kⱼ).
        let area = RationalAngle::new(4, group_order as i64);
        let mut check = RationalAngle::new(4, 1);
        for bp in &branch_points {
            check = check - (RationalAngle::two_pi() - bp.angle);
        }
        assert_eq!(area, check);
        BaseOrbifold {
            family,
            branch_points,
            area,
            rotation_group_order: group_order,
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        self.branch_points.iter().map(|bp| bp.order).collect()
    }

    /// Largest branch-point order (the last point by convention).
    pub fn max_order(&self) -> usize {
        *self.orders().iter().max().unwrap()
    }
}

/// Cone angles a cover of this base can exhibit: `ℓ·2π/k` for each branch
/// point of order `k` and each `1 ≤ ℓ < k`. Sorted, deduplicated.
pub fn allowed_angles(family: BaseFamily) -> Vec<RationalAngle> {
    let base = family.orbifold();
    let mut out: Vec<RationalAngle> = Vec::new();
    for bp in &base.branch_points {
        for l in 1..bp.order {
            out.push(bp.angle.scale(l as i64));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Tuple size above which `4π − Σ(2π−αᵢ) > 0` is impossible: each angle
/// falls short of 2π by at least the minimum deficit.
pub fn positivity_ceiling(family: BaseFamily) -> usize {
    let max_angle = *allowed_angles(family).last().unwrap();
    let min_deficit = RationalAngle::two_pi() - max_angle;
    let max_n = RationalAngle::new(4, 1).ratio(&min_deficit);
    let mut n = max_n.to_integer() as usize;
    if max_n.is_integer() {
        n -= 1; // strictly positive area needed
    }
    n
}
