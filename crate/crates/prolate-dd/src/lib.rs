//! Double-double arithmetic: unevaluated sums `hi + lo` of two IEEE doubles,
//! giving roughly 106 bits (~32 decimal digits) of working precision.
//!
//! The error-free transformations (`two_sum`, `two_prod`) follow Dekker and
//! Knuth; the arithmetic on [`Dd`] follows the usual QD-library recipes
//! (Hida, Li, Bailey). Only the operations needed by the spectral code are
//! provided: +, -, *, /, sqrt, and sin/cos with extended-precision argument
//! reduction for |x| up to about 2^40.

/// Sum with rounding error: returns `(s, e)` with `s = fl(a+b)` and `a+b = s+e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// `two_sum` specialization requiring `|a| >= |b|`.
#[inline]
pub fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Product with rounding error via FMA: `a*b = p + e` exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = f64::mul_add(a, b, -p);
    (p, e)
}

/// A double-double value. Invariant: `lo` is a round-off of `hi`
/// (`|lo| <= ulp(hi)/2`), so `hi == fl(hi + lo)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
/// pi to double-double precision.
pub const PI: Dd = Dd {
    hi: 3.141592653589793,
    lo: 1.2246467991473532e-16,
};
/// 2*pi to double-double precision.
pub const TWO_PI: Dd = Dd {
    hi: 6.283185307179586,
    lo: 2.4492935982947064e-16,
};

// pi/2 split into three doubles (~159 significant bits) for argument reduction.
const PIO2_A: f64 = 1.5707963267948966;
const PIO2_B: f64 = 6.123233995736766e-17;
const PIO2_C: f64 = -1.4973849048591698e-33;

impl Dd {
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Multiply by an exact power of two (no rounding).
    #[inline]
    pub fn mul_pow2(self, p: f64) -> Self {
        Dd {
            hi: self.hi * p,
            lo: self.lo * p,
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return ZERO;
        }
        debug_assert!(self.hi > 0.0, "Dd::sqrt of negative value");
        // One Karp-Markstein style correction of the double estimate.
        let a = self.hi.sqrt();
        let a_dd = Dd::from_f64(a);
        let r = self - a_dd * a_dd;
        a_dd + Dd::from_f64(r.hi / (2.0 * a))
    }

    pub fn recip(self) -> Self {
        ONE / self
    }

    /// Simultaneous sin and cos with three-double Cody-Waite reduction.
    ///
    /// Accurate to full double-double precision for |x| up to ~2^40; the
    /// reduced-argument error grows like |x| * 2^-159.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let x = self;
        let kf = (x.hi / PIO2_A).round();
        let k = kf as i64;
        // r = x - k*pi/2, accumulated in double-double.
        let mut r = x;
        let (p, e) = two_prod(kf, PIO2_A);
        r = r - Dd::new(p, e);
        let (p, e) = two_prod(kf, PIO2_B);
        r = r - Dd::new(p, e);
        r = r - Dd::from_f64(kf * PIO2_C);
        let (s, c) = sin_cos_reduced(r);
        match k.rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

/// Taylor sin/cos on the reduced range |r| <= ~0.8.
fn sin_cos_reduced(r: Dd) -> (Dd, Dd) {
    let r2 = r * r;
    // sin
    let mut term = r;
    let mut s = r;
    let mut j = 1.0f64;
    loop {
        term = term * r2 / Dd::from_f64(-((2.0 * j) * (2.0 * j + 1.0)));
        s = s + term;
        j += 1.0;
        if term.hi.abs() < 1e-35 || j > 30.0 {
            break;
        }
    }
    // cos
    let mut term = ONE;
    let mut c = ONE;
    let mut j = 1.0f64;
    loop {
        term = term * r2 / Dd::from_f64(-((2.0 * j - 1.0) * (2.0 * j)));
        c = c + term;
        j += 1.0;
        if term.hi.abs() < 1e-35 || j > 30.0 {
            break;
        }
    }
    (s, c)
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s0, e0) = two_sum(self.hi, b.hi);
        let (s1, e1) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s0, e0 + s1);
        let (hi, lo) = quick_two_sum(s, e + e1);
        Dd { hi, lo }
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e + q3)
    }
}

macro_rules! mixed_ops {
    ($($op:ident, $fn:ident, $sym:tt);*) => {$(
        impl std::ops::$op<f64> for Dd {
            type Output = Dd;
            #[inline]
            fn $fn(self, b: f64) -> Dd {
                self $sym Dd::from_f64(b)
            }
        }
        impl std::ops::$op<Dd> for f64 {
            type Output = Dd;
            #[inline]
            fn $fn(self, b: Dd) -> Dd {
                Dd::from_f64(self) $sym b
            }
        }
    )*};
}
mixed_ops!(Add, add, +; Sub, sub, -; Mul, mul, *; Div, div, /);

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(std::cmp::Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

/// Compensated (Neumaier) accumulator for plain f64 sums.
///
/// The running error term makes the result accurate to ~1 ulp of the true
/// sum of the inputs regardless of cancellation among partial sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    sum: f64,
    err: f64,
}

impl Accumulator {
    #[inline]
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.err += e;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.err
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eft_identities() {
        let (s, e) = two_sum(1e16, 1.0);
        assert_eq!(s + e, 1e16 + 1.0);
        assert_eq!(s, 1e16 + 1.0);
        assert_eq!(e, 1.0 - ((1e16 + 1.0) - 1e16));
        let (p, e) = two_prod(1e8 + 1.0, 1e8 - 1.0);
        // (1e8)^2 - 1 is not representable; p+e must carry the -1 exactly.
        assert_eq!(p, 1e16);
        assert_eq!(e, -1.0);
    }

    #[test]
    fn add_mul_div_roundtrip() {
        let a = Dd::from_f64(1.0) / Dd::from_f64(3.0);
        let b = a * Dd::from_f64(3.0);
        assert!((b - ONE).to_f64().abs() < 1e-31);
        let c = (a + a + a) - ONE;
        assert!(c.to_f64().abs() < 1e-31);
    }

    #[test]
    fn sqrt_squares_back() {
        for &x in &[2.0, 3.0, 1e-8, 12345.678, 0.49] {
            let r = Dd::from_f64(x).sqrt();
            let back = r * r - Dd::from_f64(x);
            assert!(back.to_f64().abs() < 1e-30 * x.max(1.0), "x={x}");
        }
        assert_eq!(ZERO.sqrt(), ZERO);
    }

    #[test]
    fn pi_constant_consistency() {
        // sin(pi) should vanish to double-double accuracy.
        let (s, c) = PI.sin_cos();
        assert!(s.to_f64().abs() < 1e-31);
        assert!((c + ONE).to_f64().abs() < 1e-31);
        let (s, _) = (PI / Dd::from_f64(2.0)).sin_cos();
        assert!((s - ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn sin_cos_matches_f64_midrange() {
        for i in 0..200 {
            let x = -37.0 + 0.37 * i as f64;
            let (s, c) = Dd::from_f64(x).sin_cos();
            assert!((s.to_f64() - x.sin()).abs() < 4e-16, "sin({x})");
            assert!((c.to_f64() - x.cos()).abs() < 4e-16, "cos({x})");
        }
    }

    #[test]
    fn sin_cos_pythagoras_large_args() {
        for &x in &[1.0, 511.0, 8192.0, 1048576.5, 2f64.powi(30) + 0.5, 2f64.powi(40)] {
            let (s, c) = Dd::from_f64(x).sin_cos();
            let p = s * s + c * c - ONE;
            assert!(p.to_f64().abs() < 1e-30, "x={x}, p={}", p.to_f64());
            // cross-check against f64 libm (which does exact reduction)
            assert!((s.to_f64() - x.sin()).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn mixed_scalar_ops() {
        let x = Dd::from_f64(0.1) + 0.2;
        assert!((x.to_f64() - 0.30000000000000004).abs() < 1e-17);
        let y = 2.0 * Dd::from_f64(0.5) - 1.0;
        assert!(y.to_f64().abs() < 1e-32);
        assert!(Dd::from_f64(2.0) > Dd::from_f64(1.0));
        assert!(Dd::new(1.0, -1e-20) < Dd::from_f64(1.0));
    }

    #[test]
    fn neumaier_accumulator_cancellation() {
        let mut acc = Accumulator::new();
        for &x in &[1e100, 1.0, -1e100] {
            acc.add(x);
        }
        assert_eq!(acc.value(), 1.0);
        // 100000 = 14285*7 + 5; each full cycle of (i%7 - 3) sums to 0,
        // the leftover {-3,-2,-1,0,1} sums to -5.
        let mut acc = Accumulator::new();
        for i in 0..100000 {
            acc.add(0.1 * ((i % 7) as f64 - 3.0));
        }
        assert!((acc.value() + 0.5).abs() < 1e-12);
    }
}
