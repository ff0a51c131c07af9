//! Euclidean point clouds and the packing constructions behind the narrow-point
//! count bounds: greedy nets, the half-and-cover shrinking step, geometric-decay
//! sequences, and the wide-triangle search.
//!
//! Metric comparisons are decided exactly: f64 coordinates are dyadic rationals,
//! so squared distances are exact dyadics and every ordering decision has a
//! rational answer. A relative-margin f64 fast path handles the generic case and
//! borderline comparisons fall back to exact arithmetic. Angle tests are
//! transcendental and stay in f64.

use crate::interval::Dyadic;
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CloudError {
    #[error("point cloud has no points")]
    Empty,
    #[error("point {row}: expected {expected} coordinates, found {found}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {row}: coordinate `{text}` is not a finite number")]
    BadCoordinate { row: usize, text: String },
    #[error("operation needs at least {needed} points, cloud has {have}")]
    TooSmall { needed: usize, have: usize },
}

/// Finite set of distinct points in Euclidean n-space, lexicographically sorted.
/// Sorting plus exact deduplication makes every downstream tie-break (first
/// maximizing pair, first net center, first maximal ball) deterministic.
#[derive(Debug, Clone)]
pub struct PointCloud {
    dim: usize,
    flat: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, rows: Vec<Vec<f64>>) -> Result<Self, CloudError> {
        assert!(dim >= 1, "dimension must be positive");
        let mut pts: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
        for (row, mut r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(CloudError::DimensionMismatch {
                    row,
                    expected: dim,
                    found: r.len(),
                });
            }
            for v in r.iter_mut() {
                if !v.is_finite() {
                    return Err(CloudError::BadCoordinate {
                        row,
                        text: format!("{v}"),
                    });
                }
                // normalize -0.0 so equal points are bit-identical after sorting
                if *v == 0.0 {
                    *v = 0.0;
                }
            }
            pts.push(r);
        }
        if pts.is_empty() {
            return Err(CloudError::Empty);
        }
        pts.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let mut flat = Vec::with_capacity(pts.len() * dim);
        for p in &pts {
            flat.extend_from_slice(p);
        }
        Ok(PointCloud { dim, flat })
    }

    /// Parses comma-separated coordinates, one point per line. Blank lines and
    /// lines starting with `#` are skipped; the first data line fixes the
    /// dimension.
    pub fn from_csv(text: &str) -> Result<Self, CloudError> {
        let mut dim = 0usize;
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut row = Vec::new();
            for field in line.split(',') {
                let field = field.trim();
                let v: f64 = field.parse().map_err(|_| CloudError::BadCoordinate {
                    row: lineno + 1,
                    text: field.to_string(),
                })?;
                if !v.is_finite() {
                    return Err(CloudError::BadCoordinate {
                        row: lineno + 1,
                        text: field.to_string(),
                    });
                }
                row.push(v);
            }
            if dim == 0 {
                dim = row.len();
            }
            if row.len() != dim || dim == 0 {
                return Err(CloudError::DimensionMismatch {
                    row: lineno + 1,
                    expected: dim,
                    found: row.len(),
                });
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(CloudError::Empty);
        }
        PointCloud::new(dim, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.flat[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.flat.chunks_exact(self.dim)
    }

    /// Subset by sorted indices; stays sorted, so no revalidation is needed.
    fn subset(&self, idx: &[usize]) -> PointCloud {
        let mut flat = Vec::with_capacity(idx.len() * self.dim);
        for &i in idx {
            flat.extend_from_slice(self.point(i));
        }
        PointCloud {
            dim: self.dim,
            flat,
        }
    }

    fn fsq(&self, i: usize, j: usize) -> f64 {
        fsq_slices(self.point(i), self.point(j))
    }

    fn dsq(&self, i: usize, j: usize) -> Dyadic {
        sq_dist_exact(self.point(i), self.point(j))
    }

    /// Lexicographically first pair realizing the diameter, with its exact
    /// squared distance. Single f64 sweep collects near-maximal candidates; the
    /// winner among candidates is decided exactly.
    fn diameter_pair(&self) -> Option<(usize, usize, Dyadic)> {
        let n = self.len();
        if n < 2 {
            return None;
        }
        let mut cands: Vec<(usize, usize, f64)> = Vec::new();
        let mut fmax = -1.0f64;
        let mut thresh = -1.0f64;
        for i in 0..n {
            let a = self.point(i);
            for j in (i + 1)..n {
                let v = fsq_slices(a, self.point(j));
                if v >= thresh {
                    cands.push((i, j, v));
                    if v > fmax {
                        fmax = v;
                        thresh = fmax * (1.0 - 3.0 * REL_MARGIN);
                    }
                    if cands.len() > 1024 {
                        cands.retain(|c| c.2 >= thresh);
                    }
                }
            }
        }
        let mut best: Option<(usize, usize, Dyadic)> = None;
        for (i, j, v) in cands {
            if v < thresh {
                continue;
            }
            let d = self.dsq(i, j);
            match &best {
                Some((_, _, bd)) if d.cmp(bd) != Ordering::Greater => {}
                _ => best = Some((i, j, d)),
            }
        }
        best
    }

    /// Largest pairwise squared distance, exact.
    pub fn diameter_sq(&self) -> Option<Dyadic> {
        self.diameter_pair().map(|(_, _, d)| d)
    }

    pub fn diameter(&self) -> f64 {
        self.diameter_sq().map_or(0.0, |d| d.to_f64().sqrt())
    }
}

/// Relative margin below which f64 squared-distance comparisons defer to exact
/// arithmetic. Accumulated f64 error on these sums is under 1e-13 relative, so
/// any spread beyond the margin already has the true sign.
const REL_MARGIN: f64 = 1e-9;

fn fsq_slices(a: &[f64], b: &[f64]) -> f64 {
    match a.len() {
        2 => {
            let dx = a[0] - b[0];
            let dy = a[1] - b[1];
            dx * dx + dy * dy
        }
        3 => {
            let dx = a[0] - b[0];
            let dy = a[1] - b[1];
            let dz = a[2] - b[2];
            dx * dx + dy * dy + dz * dz
        }
        _ => a
            .iter()
            .zip(b)
            .map(|(x, y)| {
                let d = x - y;
                d * d
            })
            .sum(),
    }
}

/// Exact squared Euclidean distance of two f64 points as a dyadic rational.
pub fn sq_dist_exact(a: &[f64], b: &[f64]) -> Dyadic {
    let mut acc = Dyadic::from_i64(0);
    for (x, y) in a.iter().zip(b) {
        let d = Dyadic::add_exact(&Dyadic::from_f64(*x), &Dyadic::from_f64(*y).neg());
        acc = Dyadic::add_exact(&acc, &Dyadic::mul_exact(&d, &d));
    }
    acc
}

/// Compares d(a,b)^2 with d(c,d)^2, exactly on borderline inputs.
pub fn cmp_sq_dist(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Ordering {
    let x = fsq_slices(a, b);
    let y = fsq_slices(c, d);
    if (x - y).abs() > REL_MARGIN * x.max(y) {
        return x.partial_cmp(&y).unwrap();
    }
    sq_dist_exact(a, b).cmp(&sq_dist_exact(c, d))
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    fsq_slices(a, b).sqrt()
}

/// Angle at `v` between the rays toward `a` and `b`, in [0, pi].
pub fn angle_at(v: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for t in 0..v.len() {
        let u = a[t] - v[t];
        let w = b[t] - v[t];
        dot += u * w;
        na += u * u;
        nb += w * w;
    }
    let denom = (na * nb).sqrt();
    assert!(denom > 0.0, "angle at coincident points is undefined");
    (dot / denom).clamp(-1.0, 1.0).acos()
}

/// Scaled squared-radius comparator: decides d(.,.) vs r where r^2 may carry a
/// rational scale of an exact squared diameter. Compares scale*x against rhs.
struct RadiusCmp {
    scale_f: f64,
    rhs_f: f64,
    scale: Dyadic,
    rhs: Dyadic,
}

impl RadiusCmp {
    /// r given directly as an f64 (itself an exact dyadic).
    fn from_radius(r: f64) -> Self {
        assert!(r > 0.0 && r.is_finite(), "net radius must be positive");
        let rd = Dyadic::from_f64(r);
        RadiusCmp {
            scale_f: 1.0,
            rhs_f: r * r,
            scale: Dyadic::from_i64(1),
            rhs: Dyadic::mul_exact(&rd, &rd),
        }
    }

    /// r = alpha * d / 4 with d^2 = dsq exact: compare 16 q^2 x against p^2 d^2.
    fn quarter_diam(alpha: Ratio<i64>, dsq: &Dyadic) -> Self {
        let p = BigInt::from(*alpha.numer());
        let q = BigInt::from(*alpha.denom());
        let scale = Dyadic::new(BigInt::from(16) * &q * &q, 0);
        let rhs = Dyadic::mul_exact(&Dyadic::new(&p * &p, 0), dsq);
        RadiusCmp {
            scale_f: scale.to_f64(),
            rhs_f: rhs.to_f64(),
            scale,
            rhs,
        }
    }

    /// True when the point pair with squared distance `xf` (exact value via
    /// `exact`) lies strictly beyond the radius.
    fn beyond(&self, xf: f64, exact: impl FnOnce() -> Dyadic) -> bool {
        let l = self.scale_f * xf;
        if (l - self.rhs_f).abs() > REL_MARGIN * l.max(self.rhs_f) {
            return l > self.rhs_f;
        }
        Dyadic::mul_exact(&exact(), &self.scale).cmp(&self.rhs) == Ordering::Greater
    }
}

fn greedy_net_over(cloud: &PointCloud, subset: &[usize], rc: &RadiusCmp) -> Vec<usize> {
    let mut centers: Vec<usize> = Vec::new();
    for &i in subset {
        let sep = centers
            .iter()
            .all(|&c| rc.beyond(cloud.fsq(i, c), || cloud.dsq(i, c)));
        if sep {
            centers.push(i);
        }
    }
    centers
}

/// First-fit maximal r-separated subset of the cloud, in sorted point order.
/// Maximality means the closed r-balls around the returned centers cover the
/// cloud. Returns indices into the cloud.
pub fn greedy_net(cloud: &PointCloud, r: f64) -> Vec<usize> {
    assert!(!cloud.is_empty(), "greedy_net needs a non-empty cloud");
    let rc = RadiusCmp::from_radius(r);
    let all: Vec<usize> = (0..cloud.len()).collect();
    greedy_net_over(cloud, &all, &rc)
}

/// Floor of (1 + 8/alpha)^n: the net-cardinality cap at radius alpha*d/4 and
/// the k of the shrink-step cardinality guarantee.
pub fn packing_cap(dim: usize, alpha: Ratio<i64>) -> BigInt {
    assert!(
        alpha > Ratio::zero() && alpha < Ratio::one(),
        "alpha must lie in (0,1)"
    );
    let base = Ratio::new(
        BigInt::from(*alpha.numer() + 8 * *alpha.denom()),
        BigInt::from(*alpha.numer()),
    );
    base.pow(dim as i32).floor().to_integer()
}

/// One shrinking step: splits the cloud at the perpendicular bisector of its
/// (lex-first) diameter pair, keeps the larger half X with x the opposite
/// endpoint, covers X by a greedy net at radius alpha*d/4, and returns x with
/// the largest-cardinality ball intersection. Guarantees, for d = diam S:
/// d(x,S') >= d/2, diam S' <= alpha*d/2, and |S'| >= |S| / (2*packing_cap).
pub fn shrink_step(
    s: &PointCloud,
    alpha: Ratio<i64>,
) -> Result<(Vec<f64>, PointCloud), CloudError> {
    if s.len() < 2 {
        return Err(CloudError::TooSmall {
            needed: 2,
            have: s.len(),
        });
    }
    assert!(
        alpha > Ratio::zero() && alpha < Ratio::one(),
        "alpha must lie in (0,1)"
    );
    let (ip, iq, dsq) = s.diameter_pair().unwrap();
    let (p, q) = (s.point(ip), s.point(iq));
    let mut p_half: Vec<usize> = Vec::new();
    let mut q_half: Vec<usize> = Vec::new();
    for t in 0..s.len() {
        let closer_p = cmp_sq_dist(s.point(t), p, s.point(t), q) != Ordering::Greater;
        if closer_p {
            p_half.push(t);
        } else {
            q_half.push(t);
        }
    }
    let (x_idx, x_set) = if p_half.len() >= q_half.len() {
        (iq, p_half)
    } else {
        (ip, q_half)
    };
    let rc = RadiusCmp::quarter_diam(alpha, &dsq);
    let centers = greedy_net_over(s, &x_set, &rc);
    let mut counts = vec![0usize; centers.len()];
    for &t in &x_set {
        for (ci, &c) in centers.iter().enumerate() {
            if !rc.beyond(s.fsq(t, c), || s.dsq(t, c)) {
                counts[ci] += 1;
            }
        }
    }
    let best = (0..centers.len()).max_by_key(|&ci| (counts[ci], usize::MAX - ci)).unwrap();
    let members: Vec<usize> = x_set
        .iter()
        .copied()
        .filter(|&t| !rc.beyond(s.fsq(t, centers[best]), || s.dsq(t, centers[best])))
        .collect();
    Ok((s.point(x_idx).to_vec(), s.subset(&members)))
}

/// Exact check of the three shrink-step guarantees for output (x, sp) of
/// shrink_step(s, alpha): returns [distance, diameter, cardinality] flags.
pub fn shrink_guarantees(
    s: &PointCloud,
    x: &[f64],
    sp: &PointCloud,
    alpha: Ratio<i64>,
) -> [bool; 3] {
    let dsq = s.diameter_sq().expect("original cloud has >= 2 points");
    let four = Dyadic::from_i64(4);
    // d(x, S') >= d/2  <=>  4 * min_{s'} |x - s'|^2 >= d^2
    let min_sq = sp
        .iter_points()
        .map(|pt| sq_dist_exact(x, pt))
        .min_by(|a, b| a.cmp(b))
        .expect("S' is non-empty");
    let g1 = Dyadic::mul_exact(&four, &min_sq).cmp(&dsq) != Ordering::Less;
    // diam S' <= alpha*d/2  <=>  4 q^2 diam(S')^2 <= p^2 d^2
    let spsq = if sp.len() < 2 {
        Dyadic::from_i64(0)
    } else {
        sp.diameter_sq().unwrap()
    };
    let qq = BigInt::from(*alpha.denom()) * alpha.denom();
    let pp = BigInt::from(*alpha.numer()) * alpha.numer();
    let lhs = Dyadic::mul_exact(&Dyadic::new(BigInt::from(4) * qq, 0), &spsq);
    let rhs = Dyadic::mul_exact(&Dyadic::new(pp, 0), &dsq);
    let g2 = lhs.cmp(&rhs) != Ordering::Greater;
    // |S'| >= |S| / (2k)
    let g3 = BigInt::from(2) * packing_cap(s.dim(), alpha) * BigInt::from(sp.len())
        >= BigInt::from(s.len());
    [g1, g2, g3]
}

/// Iterates shrink_step up to m-2 times, then appends up to two points of the
/// final set (sorted order). Consecutive distances decay geometrically:
/// d(x_{i+1}, x_{i+2}) <= alpha * d(x_i, x_{i+1}) for every valid i, because
/// each tail pair lies in the shrunken set its predecessor was split from.
pub fn shrink_sequence(s: &PointCloud, alpha: Ratio<i64>, m: usize) -> Vec<Vec<f64>> {
    assert!(m >= 3, "sequence budget must be at least 3");
    let mut seq: Vec<Vec<f64>> = Vec::new();
    let mut cur = s.clone();
    while seq.len() + 2 < m && cur.len() >= 2 {
        let (x, next) = shrink_step(&cur, alpha).unwrap();
        seq.push(x);
        cur = next;
    }
    let tail = cur.len().min(2).min(m - seq.len());
    for t in 0..tail {
        seq.push(cur.point(t).to_vec());
    }
    seq
}

/// Exact verification of the geometric-decay inequality along a sequence.
pub fn decay_holds(seq: &[Vec<f64>], alpha: Ratio<i64>) -> bool {
    let qq = BigInt::from(*alpha.denom()) * alpha.denom();
    let pp = BigInt::from(*alpha.numer()) * alpha.numer();
    for w in seq.windows(3) {
        let lhs = Dyadic::mul_exact(&Dyadic::new(qq.clone(), 0), &sq_dist_exact(&w[1], &w[2]));
        let rhs = Dyadic::mul_exact(&Dyadic::new(pp.clone(), 0), &sq_dist_exact(&w[0], &w[1]));
        if lhs.cmp(&rhs) == Ordering::Greater {
            return false;
        }
    }
    true
}

/// Full wide-triangle postcondition: angle at y exceeds eps, the angle at z is
/// within the search cap, and |yz| < |xy| (decided exactly).
pub fn wide_triple_ok(x: &[f64], y: &[f64], z: &[f64], eps: f64) -> bool {
    angle_at(y, x, z) > eps
        && angle_at(z, x, y) <= (std::f64::consts::PI - eps) / 2.0
        && sq_dist_exact(y, z).cmp(&sq_dist_exact(x, y)) == Ordering::Less
}

/// Searches for three points (x, y, z) with the Euclidean angle at y greater
/// than eps. Runs the shrinking sequence at alpha = 1/3, fixes z as its last
/// point, and scans earlier pairs for a direction angle at z within
/// (pi - eps)/2; the decay then forces |yz| < |xy| and the comparison triangle
/// argument yields the wide angle at y. Every candidate is checked against the
/// full postcondition before being returned. Small clouds additionally get an
/// exhaustive triple scan, since short sequences can miss wide triangles that
/// are nonetheless present.
pub fn find_wide_triangle(s: &PointCloud, eps: f64) -> Option<[Vec<f64>; 3]> {
    assert!(
        eps > 0.0 && eps < std::f64::consts::PI,
        "eps must lie in (0, pi)"
    );
    if s.len() < 3 {
        return None;
    }
    let cap = (std::f64::consts::PI - eps) / 2.0;
    let seq = shrink_sequence(s, Ratio::new(1, 3), s.len().max(3));
    if seq.len() >= 3 {
        let z = seq.last().unwrap();
        let head = &seq[..seq.len() - 1];
        for i in 0..head.len() {
            for j in (i + 1)..head.len() {
                if angle_at(z, &head[i], &head[j]) <= cap
                    && wide_triple_ok(&head[i], &head[j], z, eps)
                {
                    return Some([head[i].clone(), head[j].clone(), z.clone()]);
                }
            }
        }
    }
    // The sequence only certifies existence above the packing threshold; on
    // desk-scale clouds a direct scan still finds any wide triangle present.
    if s.len() <= 100 {
        for a in 0..s.len() {
            for b in 0..s.len() {
                if b == a {
                    continue;
                }
                for c in 0..s.len() {
                    if c == a || c == b {
                        continue;
                    }
                    let (x, y, z) = (s.point(a), s.point(b), s.point(c));
                    if wide_triple_ok(x, y, z, eps) {
                        return Some([x.to_vec(), y.to_vec(), z.to_vec()]);
                    }
                }
            }
        }
    }
    None
}

/// Uniform sample of the unit cube, deterministic in the seed.
pub fn uniform_cloud(dim: usize, count: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..count)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    PointCloud::new(dim, rows).expect("generated coordinates are finite")
}

/// Nested two-block cloud on the first axis: level k places a lone far point
/// at the left end and a copy of level k-1 scaled by `ratio` at the right end.
/// With ratio < alpha/4 each net ball swallows one whole copy, so the shrink
/// sequence descends exactly one scale per step and reaches every level.
pub fn clustered_cloud(dim: usize, levels: usize, ratio: Ratio<i64>) -> PointCloud {
    assert!(levels >= 1, "need at least one level");
    assert!(
        ratio > Ratio::zero() && ratio < Ratio::one(),
        "ratio must lie in (0,1)"
    );
    let r = ratio.numer().to_f64().unwrap() / ratio.denom().to_f64().unwrap();
    let mut vals = vec![0.0f64, 1.0];
    for _ in 1..levels {
        let mut next = vec![0.0f64];
        next.extend(vals.iter().map(|v| 1.0 - r + r * v));
        vals = next;
    }
    let rows: Vec<Vec<f64>> = vals
        .into_iter()
        .map(|v| {
            let mut row = vec![0.0f64; dim];
            row[0] = v;
            row
        })
        .collect();
    PointCloud::new(dim, rows).expect("constructed coordinates are finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constructor_sorts_dedupes_and_rejects() {
        let c = PointCloud::new(
            2,
            vec![
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![-0.0, 1.0],
            ],
        )
        .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.point(0), &[0.0, 1.0]);
        assert_eq!(c.point(1), &[1.0, 0.0]);
        assert!(matches!(
            PointCloud::new(2, vec![vec![f64::NAN, 0.0]]),
            Err(CloudError::BadCoordinate { .. })
        ));
        assert!(matches!(
            PointCloud::new(2, vec![vec![1.0]]),
            Err(CloudError::DimensionMismatch { .. })
        ));
        assert!(matches!(PointCloud::new(2, vec![]), Err(CloudError::Empty)));
    }

    #[test]
    fn csv_parses_and_reports_bad_rows() {
        let c = PointCloud::from_csv("# cloud\n0.5, 0.25\n1.0, 2.0\n\n").unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.len(), 2);
        assert!(matches!(
            PointCloud::from_csv("1.0, oops"),
            Err(CloudError::BadCoordinate { row: 1, .. })
        ));
        assert!(matches!(
            PointCloud::from_csv("1.0, 2.0\n3.0"),
            Err(CloudError::DimensionMismatch { row: 2, .. })
        ));
    }

    #[test]
    fn greedy_net_small_examples() {
        let single = PointCloud::new(1, vec![vec![0.5]]).unwrap();
        assert_eq!(greedy_net(&single, 1.0), vec![0]);
        let pair = PointCloud::new(1, vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(greedy_net(&pair, 0.125), vec![0, 1]);
    }

    #[test]
    fn greedy_net_is_separated_and_covering() {
        let c = uniform_cloud(2, 400, 7);
        let r = 0.15;
        let net = greedy_net(&c, r);
        let rsqd = Dyadic::from_f64(r);
        let rsq = Dyadic::mul_exact(&rsqd, &rsqd);
        for (a, &i) in net.iter().enumerate() {
            for &j in &net[a + 1..] {
                assert_eq!(c.dsq(i, j).cmp(&rsq), Ordering::Greater);
            }
        }
        for t in 0..c.len() {
            assert!(net
                .iter()
                .any(|&i| c.dsq(t, i).cmp(&rsq) != Ordering::Greater));
        }
    }

    #[test]
    fn greedy_net_unit_square_bound() {
        let c = uniform_cloud(2, 10_000, 11);
        let alpha = Ratio::new(1i64, 2);
        let r = c.diameter() * 0.5 / 4.0;
        let net = greedy_net(&c, r);
        assert!(net.len() <= 289, "net has {} centers", net.len());
        assert_eq!(packing_cap(2, alpha), BigInt::from(289));
    }

    #[test]
    fn shrink_step_pair_example() {
        let c = PointCloud::new(1, vec![vec![0.0], vec![1.0]]).unwrap();
        let (x, sp) = shrink_step(&c, Ratio::new(1, 2)).unwrap();
        assert_eq!(x, vec![1.0]);
        assert_eq!(sp.len(), 1);
        assert_eq!(sp.point(0), &[0.0]);
        assert_eq!(
            shrink_guarantees(&c, &x, &sp, Ratio::new(1, 2)),
            [true; 3]
        );
        let lone = PointCloud::new(1, vec![vec![0.0]]).unwrap();
        assert!(matches!(
            shrink_step(&lone, Ratio::new(1, 2)),
            Err(CloudError::TooSmall { .. })
        ));
    }

    #[test]
    fn shrink_step_guarantees_on_random_clouds() {
        for seed in 0..20 {
            for dim in [2usize, 3] {
                let c = uniform_cloud(dim, 60, 1000 + seed);
                for alpha in [Ratio::new(1i64, 3), Ratio::new(1, 2)] {
                    let (x, sp) = shrink_step(&c, alpha).unwrap();
                    assert_eq!(shrink_guarantees(&c, &x, &sp, alpha), [true; 3]);
                }
            }
        }
    }

    #[test]
    fn shrink_sequence_two_points_and_decay() {
        let c = PointCloud::new(1, vec![vec![0.0], vec![1.0]]).unwrap();
        let seq = shrink_sequence(&c, Ratio::new(1, 2), 5);
        assert_eq!(seq, vec![vec![1.0], vec![0.0]]);
        assert!(decay_holds(&seq, Ratio::new(1, 2)));
    }

    #[test]
    fn shrink_sequence_large_uniform_decays() {
        let c = uniform_cloud(2, 100_000, 23);
        let alpha = Ratio::new(1i64, 3);
        let seq = shrink_sequence(&c, alpha, c.len());
        assert!(seq.len() >= 3, "sequence too short: {}", seq.len());
        assert!(decay_holds(&seq, alpha));
    }

    #[test]
    fn clustered_cloud_reaches_every_scale() {
        // ratio below alpha/4 = 1/12 keeps each copy inside one net ball
        let levels = 6;
        let c = clustered_cloud(2, levels, Ratio::new(1, 13));
        assert_eq!(c.len(), levels + 1);
        let seq = shrink_sequence(&c, Ratio::new(1, 3), c.len().max(3));
        assert!(
            seq.len() >= levels,
            "sequence length {} < levels {}",
            seq.len(),
            levels
        );
        assert!(decay_holds(&seq, Ratio::new(1, 3)));
    }

    #[test]
    fn collinear_triple_is_found() {
        let c = PointCloud::new(1, vec![vec![0.0], vec![1.0], vec![1.1]]).unwrap();
        let [x, y, z] = find_wide_triangle(&c, PI / 2.0).unwrap();
        assert!(angle_at(&y, &x, &z) > PI / 2.0);
        assert_eq!(y, vec![1.0]);
        assert!((angle_at(&y, &x, &z) - PI).abs() < 1e-12);
    }

    #[test]
    fn wide_triangle_postcondition_on_random_clouds() {
        let mut found = 0;
        for seed in 0..40 {
            for dim in [2usize, 3] {
                let c = uniform_cloud(dim, 50, 500 + seed);
                for eps in [1.0, 2.0, 3.0] {
                    if let Some([x, y, z]) = find_wide_triangle(&c, eps) {
                        assert!(wide_triple_ok(&x, &y, &z, eps));
                        found += 1;
                    }
                }
            }
        }
        assert!(found > 0, "search never succeeded on any test cloud");
    }

    #[test]
    fn near_pi_eps_usually_not_found() {
        let c = uniform_cloud(2, 2000, 99);
        if let Some([x, y, z]) = find_wide_triangle(&c, 3.0) {
            assert!(wide_triple_ok(&x, &y, &z, 3.0));
        }
    }

    #[test]
    fn exact_tie_breaks_are_deterministic() {
        // unit square corners: four diameter-tied side pairs, two diagonal pairs
        let c = PointCloud::new(
            2,
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let (i, j, d) = c.diameter_pair().unwrap();
        assert_eq!((i, j), (0, 3));
        assert_eq!(d.to_f64(), 2.0);
        // bisector tie: the midpoint joins P
        let line = PointCloud::new(1, vec![vec![-1.0], vec![0.0], vec![1.0]]).unwrap();
        let (x, sp) = shrink_step(&line, Ratio::new(1, 2)).unwrap();
        assert_eq!(x, vec![1.0]);
        assert_eq!(sp.len(), 1);
        assert_eq!(sp.point(0), &[-1.0]);
    }
}
