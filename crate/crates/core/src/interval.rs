//! Self-validated interval arithmetic over dyadic rationals. Every
//! operation rounds outward, so any real produced by a chain of these
//! operations is guaranteed to lie inside the reported interval; floors can
//! therefore be certified rather than guessed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// A dyadic rational `mant · 2^exp`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// Exact: every finite f64 is a dyadic rational.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite());
        let r = Ratio::<BigInt>::from_float(v).unwrap();
        let (num, den) = (r.numer().clone(), r.denom().clone());
        let exp = den.bits() as i64 - 1;
        assert_eq!(den, BigInt::one() << exp as usize, "f64 denominator is a power of two");
        Dyadic::new(num, -exp)
    }

    pub fn to_ratio(&self) -> Ratio<BigInt> {
        if self.exp >= 0 {
            Ratio::from_integer(&self.mant << self.exp as usize)
        } else {
            Ratio::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.to_ratio();
        ratio_to_f64(&r)
    }

    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// Keep at most `prec` mantissa bits, rounding toward −∞.
    fn round_down(&self, prec: u64) -> Dyadic {
        let bits = self.mant.magnitude().bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = (bits - prec) as usize;
        // BigInt >> rounds toward negative infinity.
        Dyadic::new(&self.mant >> shift, self.exp + shift as i64)
    }

    /// Keep at most `prec` mantissa bits, rounding toward +∞.
    fn round_up(&self, prec: u64) -> Dyadic {
        let bits = self.mant.magnitude().bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = (bits - prec) as usize;
        Dyadic::new(-((-&self.mant) >> shift), self.exp + shift as i64)
    }

    fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let exp = a.exp.min(b.exp);
        (
            &a.mant << (a.exp - exp) as usize,
            &b.mant << (b.exp - exp) as usize,
            exp,
        )
    }

    pub fn add_exact(a: &Dyadic, b: &Dyadic) -> Dyadic {
        let (ma, mb, exp) = Dyadic::align(a, b);
        Dyadic::new(ma + mb, exp)
    }

    pub fn mul_exact(a: &Dyadic, b: &Dyadic) -> Dyadic {
        Dyadic::new(&a.mant * &b.mant, a.exp + b.exp)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic::new(-&self.mant, self.exp)
    }

    pub fn cmp(&self, other: &Dyadic) -> std::cmp::Ordering {
        let (ma, mb, _) = Dyadic::align(self, other);
        ma.cmp(&mb)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            &self.mant >> (-self.exp) as usize
        }
    }
}

fn ratio_to_f64(r: &Ratio<BigInt>) -> f64 {
    // Scale into f64 range before converting.
    let nbits = r.numer().magnitude().bits() as i64;
    let dbits = r.denom().magnitude().bits() as i64;
    let shift = (nbits - dbits - 60).max(0) as usize;
    let num = r.numer() >> shift;
    let den = r.denom().clone();
    let nf = num.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    let df = den.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    nf / df * 2f64.powi(shift as i32)
}

/// `[lo, hi]` with outward rounding to `prec` mantissa bits per operation.
#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub prec: u64,
}

impl Interval {
    pub fn point(d: Dyadic, prec: u64) -> Self {
        let iv = Interval {
            lo: d.round_down(prec),
            hi: d.round_up(prec),
            prec,
        };
        iv.check();
        iv
    }

    pub fn from_i64(v: i64, prec: u64) -> Self {
        Interval::point(Dyadic::from_i64(v), prec)
    }

    pub fn from_f64(v: f64, prec: u64) -> Self {
        Interval::point(Dyadic::from_f64(v), prec)
    }

    pub fn from_ratio(r: &Ratio<BigInt>, prec: u64) -> Self {
        let num = Dyadic::new(r.numer().clone(), 0);
        let den = Dyadic::new(r.denom().clone(), 0);
        let iv = Interval {
            lo: div_dir(&num, &den, prec, false),
            hi: div_dir(&num, &den, prec, true),
            prec,
        };
        iv.check();
        iv
    }

    fn check(&self) {
        debug_assert!(self.lo.cmp(&self.hi) != std::cmp::Ordering::Greater);
    }

    pub fn add(&self, rhs: &Interval) -> Interval {
        let prec = self.prec.max(rhs.prec);
        Interval {
            lo: Dyadic::add_exact(&self.lo, &rhs.lo).round_down(prec),
            hi: Dyadic::add_exact(&self.hi, &rhs.hi).round_up(prec),
            prec,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, rhs: &Interval) -> Interval {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Interval) -> Interval {
        let prec = self.prec.max(rhs.prec);
        let products = [
            Dyadic::mul_exact(&self.lo, &rhs.lo),
            Dyadic::mul_exact(&self.lo, &rhs.hi),
            Dyadic::mul_exact(&self.hi, &rhs.lo),
            Dyadic::mul_exact(&self.hi, &rhs.hi),
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if p.cmp(&lo) == std::cmp::Ordering::Less {
                lo = p.clone();
            }
            if p.cmp(&hi) == std::cmp::Ordering::Greater {
                hi = p.clone();
            }
        }
        Interval {
            lo: lo.round_down(prec),
            hi: hi.round_up(prec),
            prec,
        }
    }

    /// Division; the divisor interval must be sign-definite (not contain 0).
    pub fn div(&self, rhs: &Interval) -> Interval {
        let prec = self.prec.max(rhs.prec);
        assert!(
            rhs.lo.mant.is_positive() || rhs.hi.mant.is_negative(),
            "division by an interval containing zero"
        );
        let quotients = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let lo = quotients
            .iter()
            .map(|(a, b)| div_dir(a, b, prec, false))
            .min_by(|x, y| x.cmp(y))
            .unwrap();
        let hi = quotients
            .iter()
            .map(|(a, b)| div_dir(a, b, prec, true))
            .max_by(|x, y| x.cmp(y))
            .unwrap();
        let iv = Interval { lo, hi, prec };
        iv.check();
        iv
    }

    /// Exact multiplication by a rational (directed division by the denominator).
    pub fn scale_ratio(&self, r: &Ratio<BigInt>) -> Interval {
        self.mul(&Interval::from_ratio(r, self.prec))
    }

    /// Square root; requires a nonnegative interval.
    pub fn sqrt(&self) -> Interval {
        assert!(!self.lo.mant.is_negative(), "sqrt of a negative interval");
        Interval {
            lo: sqrt_dir(&self.lo, self.prec, false),
            hi: sqrt_dir(&self.hi, self.prec, true),
            prec: self.prec,
        }
    }

    /// Widen by `ulps` units of `2^exp` in both directions.
    fn widen(&self, slack: &Dyadic) -> Interval {
        assert!(!slack.mant.is_negative());
        Interval {
            lo: Dyadic::add_exact(&self.lo, &slack.neg()).round_down(self.prec),
            hi: Dyadic::add_exact(&self.hi, slack).round_up(self.prec),
            prec: self.prec,
        }
    }

    pub fn contains_f64(&self, v: f64) -> bool {
        let d = Dyadic::from_f64(v);
        self.lo.cmp(&d) != std::cmp::Ordering::Greater
            && d.cmp(&self.hi) != std::cmp::Ordering::Greater
    }

    pub fn width(&self) -> f64 {
        Dyadic::add_exact(&self.hi, &self.lo.neg()).to_f64()
    }

    pub fn midpoint_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    pub fn is_positive(&self) -> bool {
        self.lo.mant.is_positive()
    }

    /// The common floor of both endpoints, if they agree.
    pub fn certified_floor(&self) -> Option<BigInt> {
        let (fl, fh) = (self.lo.floor(), self.hi.floor());
        (fl == fh).then_some(fl)
    }

    /// Decimal rendering of the midpoint, for display only.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mid = Dyadic::add_exact(&self.lo, &self.hi);
        let r = mid.to_ratio() / Ratio::from_integer(BigInt::from(2));
        let scale = BigInt::from(10).pow(digits as u32);
        let scaled = (r * Ratio::from_integer(scale)).round().to_integer();
        let neg = scaled.is_negative();
        let s = scaled.magnitude().to_string();
        let s = if s.len() <= digits {
            format!("0.{}{}", "0".repeat(digits - s.len()), s)
        } else {
            format!("{}.{}", &s[..s.len() - digits], &s[s.len() - digits..])
        };
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }
}

fn div_dir(a: &Dyadic, b: &Dyadic, prec: u64, up: bool) -> Dyadic {
    assert!(!b.is_zero());
    // a/b at `prec+guard` fractional bits of the quotient's scale.
    let guard = prec as i64 + 16;
    let shifted = &a.mant << guard as usize;
    let exp = a.exp - b.exp - guard;
    let q = if up {
        shifted.div_ceil(&b.mant)
    } else {
        shifted.div_floor(&b.mant)
    };
    let d = Dyadic::new(q, exp);
    if up {
        d.round_up(prec)
    } else {
        d.round_down(prec)
    }
}

fn sqrt_dir(x: &Dyadic, prec: u64, up: bool) -> Dyadic {
    if x.mant.is_negative() {
        // Only reachable for the lower endpoint of an interval that brushes
        // zero from rounding; clamp.
        return Dyadic::from_i64(0);
    }
    if x.is_zero() {
        return Dyadic::from_i64(0);
    }
    // Scale so the exponent is even and the mantissa has ≥ 2·(prec+8) bits.
    let mut shift = (2 * (prec + 8)).saturating_sub(x.mant.magnitude().bits()) as i64;
    if (x.exp - shift) % 2 != 0 {
        shift += 1;
    }
    let m = &x.mant << shift as usize;
    let exp = (x.exp - shift) / 2;
    let root = m.sqrt();
    let d = if up {
        if &root * &root == m {
            Dyadic::new(root, exp)
        } else {
            Dyadic::new(root + 1, exp)
        }
    } else {
        Dyadic::new(root, exp)
    };
    if up {
        d.round_up(prec)
    } else {
        d.round_down(prec)
    }
}

/// `arctan(1/k)` as (scaled sum, error in ulps) at `2^-bits` resolution,
/// by the alternating Gregory series with floor-truncated terms.
fn atan_inv_scaled(k: u64, bits: u64) -> (BigInt, BigInt) {
    let one = BigInt::one() << bits as usize;
    let kk = BigInt::from(k) * BigInt::from(k);
    let mut term_den = BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut j = 0u64;
    let mut err_ulps = BigInt::zero();
    loop {
        let term = (&one / (&term_den * BigInt::from(2 * j + 1))).clone();
        if term.is_zero() {
            // Alternating series: tail bounded by the first omitted term (< 1 ulp).
            err_ulps += 1;
            break;
        }
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        err_ulps += 1; // each floor truncation costs at most 1 ulp
        term_den *= &kk;
        j += 1;
    }
    (sum, err_ulps)
}

/// π via Machin's formula with a guaranteed enclosure.
pub fn pi(prec: u64) -> Interval {
    let bits = prec + 32;
    let (a5, e5) = atan_inv_scaled(5, bits);
    let (a239, e239) = atan_inv_scaled(239, bits);
    let sum = &a5 * 16 - &a239 * 4;
    let err = e5 * 16 + e239 * 4 + 1;
    let exp = -(bits as i64);
    Interval {
        lo: Dyadic::new(&sum - &err, exp).round_down(prec),
        hi: Dyadic::new(&sum + &err, exp).round_up(prec),
        prec,
    }
}

/// sin and cos by Taylor series with the alternating remainder bound;
/// valid for |x| ≤ 4 (no range reduction needed by callers here).
fn sin_cos_series(x: &Interval, want_sin: bool) -> Interval {
    let prec = x.prec;
    let abs_lo = if x.lo.mant.is_negative() { x.lo.neg() } else { x.lo.clone() };
    let abs_hi = if x.hi.mant.is_negative() { x.hi.neg() } else { x.hi.clone() };
    let xmax = if abs_lo.cmp(&abs_hi) == std::cmp::Ordering::Greater {
        abs_lo
    } else {
        abs_hi
    };
    assert!(xmax.to_f64() <= 4.0, "series domain");
    // Terms: sin: x^(2j+1)/(2j+1)!, cos: x^(2j)/(2j)!. Find N with the
    // first omitted term below 2^-(prec+8+4N) at |x| ≤ 4: each Horner step
    // multiplies the accumulated width by up to x² ≤ 16, so the evaluation
    // must run 4 bits per term above the requested precision. Tracked in
    // log2 to avoid f64 overflow; soundness never depends on this estimate
    // because the omitted tail is enclosed exactly below.
    let mut n_terms = 1usize;
    let mut log_bound = 2f64;
    let mut log_fact = 0f64;
    let mut k = 1u64;
    while log_bound - log_fact > -((prec + 8) as f64) - 4.0 * n_terms as f64 && n_terms < 500 {
        n_terms += 1;
        k += 2;
        log_fact += ((k - 1) as f64).log2() + (k as f64).log2();
        log_bound += 4.0;
    }
    let work = prec + 8 + 4 * n_terms as u64;
    let xw = Interval {
        lo: x.lo.clone(),
        hi: x.hi.clone(),
        prec: work,
    };
    let x2 = xw.mul(&xw);
    // Horner over j: P = c_N; P = P·x² + c_{N-1}; coefficients exact.
    let mut acc = Interval::from_i64(0, work);
    let mut factorial = BigInt::one();
    let mut fact_arg = 0u64;
    let mut coeffs: Vec<Ratio<BigInt>> = Vec::new();
    for j in 0..n_terms as u64 {
        let base = if want_sin { 2 * j + 1 } else { 2 * j };
        while fact_arg < base {
            fact_arg += 1;
            factorial *= BigInt::from(fact_arg);
        }
        let c = Ratio::new(BigInt::one(), factorial.clone());
        coeffs.push(if j % 2 == 0 { c } else { -c });
    }
    for c in coeffs.iter().rev() {
        acc = acc.mul(&x2).add(&Interval::from_ratio(c, work));
    }
    let series = if want_sin { acc.mul(&xw) } else { acc };
    // Remainder (alternating series): first omitted term |x|^p / p!,
    // bounded soundly in dyadic arithmetic from the exact |x| endpoint.
    let pow = 2 * n_terms as u64 + if want_sin { 1 } else { 0 };
    let tail_x = Interval::point(xmax, work);
    let mut rem_num = Interval::from_i64(1, work);
    for _ in 0..pow {
        rem_num = rem_num.mul(&tail_x);
    }
    let mut fact_big = BigInt::one();
    for i in 1..=pow {
        fact_big *= BigInt::from(i);
    }
    let rem = rem_num.div(&Interval::point(Dyadic::new(fact_big, 0), work));
    let slack = rem.hi.round_up(work);
    let slack = if slack.mant.is_negative() {
        Dyadic::from_i64(0)
    } else {
        slack
    };
    let wide = series.widen(&slack);
    // Round outward back to the caller's precision.
    Interval {
        lo: wide.lo.round_down(prec),
        hi: wide.hi.round_up(prec),
        prec,
    }
}

pub fn sin(x: &Interval) -> Interval {
    sin_cos_series(x, true)
}

pub fn cos(x: &Interval) -> Interval {
    sin_cos_series(x, false)
}

/// arcsin on [0, 1]: Maclaurin series for x² ≤ 0.6, else the complementary
/// reduction arcsin(x) = π/2 − arcsin(√(1−x²)).
pub fn asin(x: &Interval) -> Interval {
    let prec = x.prec;
    // Clamp to [0, 1]: upstream rounding may push endpoints a hair outside.
    let one_d = Dyadic::from_i64(1);
    let zero_d = Dyadic::from_i64(0);
    assert!(x.hi.cmp(&zero_d) != std::cmp::Ordering::Less, "asin domain");
    assert!(x.lo.cmp(&one_d) != std::cmp::Ordering::Greater, "asin domain");
    let x = Interval {
        lo: if x.lo.mant.is_negative() { zero_d } else { x.lo.clone() },
        hi: if x.hi.cmp(&one_d) == std::cmp::Ordering::Greater {
            one_d
        } else {
            x.hi.clone()
        },
        prec,
    };
    let x = &x;
    let one = Interval::from_i64(1, prec);
    let x2 = x.mul(x);
    let x2_hi = x2.hi.to_f64();
    if x2_hi > 0.6 {
        let reduced = one.sub(&x2).sqrt();
        let half_pi = pi(prec).scale_ratio(&Ratio::new(BigInt::one(), BigInt::from(2)));
        return half_pi.sub(&asin(&reduced));
    }
    // Σ C(2j,j)/4^j · x^(2j+1)/(2j+1); coefficients ≤ 1, so the tail after N
    // terms is ≤ x^(2N+1)/(1−x²) ≤ 2.5·0.6^N·x for x² ≤ 0.6.
    let target = 2f64.powi(-((prec + 8).min(1000) as i32));
    let mut n_terms = 8usize;
    while 2.5 * 0.6f64.powi(n_terms as i32) > target && n_terms < 4000 {
        n_terms += 8;
    }
    let mut acc = Interval::from_i64(0, prec);
    // Horner with exact rational coefficients c_j = C(2j,j)/(4^j(2j+1)).
    let mut coeffs: Vec<Ratio<BigInt>> = Vec::with_capacity(n_terms);
    let mut central = BigInt::one(); // C(2j, j)
    for j in 0..n_terms as u64 {
        let den = BigInt::one() << (2 * j as usize);
        coeffs.push(Ratio::new(
            central.clone(),
            den * BigInt::from(2 * j + 1),
        ));
        central = central * BigInt::from((2 * j + 1) * (2 * j + 2))
            / (BigInt::from(j + 1) * BigInt::from(j + 1));
    }
    for c in coeffs.iter().rev() {
        acc = acc.mul(&x2).add(&Interval::from_ratio(c, prec));
    }
    let series = acc.mul(x);
    // Tail bound: x^(2N+1)/(1−x²), evaluated in dyadic arithmetic.
    let tail_x = Interval::point(x.hi.clone(), prec);
    let mut pow = Interval::from_i64(1, prec);
    for _ in 0..(2 * n_terms + 1) {
        pow = pow.mul(&tail_x);
    }
    let denom = one.sub(&Interval::point(x2.hi.clone(), prec));
    let slack = if denom.is_positive() {
        pow.div(&denom).hi.round_up(prec)
    } else {
        pow.hi.round_up(prec)
    };
    let slack = if slack.mant.is_negative() {
        Dyadic::from_i64(0)
    } else {
        slack
    };
    series.widen(&slack)
}
