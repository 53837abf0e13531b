//! Outward-rounded interval arithmetic over binary64.
//!
//! Every operation widens its result by one ulp on each side, so computed
//! intervals always enclose the exact real-interval result. Monomial powers
//! use even/odd range rules, which is what keeps enclosures of squared
//! terms from picking up a spurious sign.

/// Closed interval [lo, hi]; invariant lo <= hi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Enclosure of a value known only to nearest-rounding accuracy.
    pub fn around(x: f64) -> Self {
        Self {
            lo: x.next_down(),
            hi: x.next_up(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn widen(self) -> Self {
        Self {
            lo: self.lo.next_down(),
            hi: self.hi.next_up(),
        }
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(self.lo + other.lo, self.hi + other.hi).widen()
    }

    pub fn sub(self, other: Self) -> Self {
        Self::new(self.lo - other.hi, self.hi - other.lo).widen()
    }

    pub fn neg(self) -> Self {
        Self::new(-self.hi, -self.lo)
    }

    pub fn mul(self, other: Self) -> Self {
        let c = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        let mut lo = c[0];
        let mut hi = c[0];
        for &v in &c[1..] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Self::new(lo, hi).widen()
    }

    /// x^e with exact monomial range rules.
    pub fn pow(self, e: u32) -> Self {
        if e == 0 {
            return Self::point(1.0);
        }
        if e == 1 {
            return self;
        }
        let pl = libm::pow(self.lo, e as f64);
        let ph = libm::pow(self.hi, e as f64);
        let iv = if e % 2 == 1 {
            Self::new(pl, ph)
        } else if self.lo >= 0.0 {
            Self::new(pl, ph)
        } else if self.hi <= 0.0 {
            Self::new(ph, pl)
        } else {
            Self::new(0.0, pl.max(ph))
        };
        iv.widen()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_power_straddling_zero() {
        let iv = Interval::new(-1.0, 2.0).pow(2);
        assert!(iv.lo <= 0.0 && iv.lo >= -1e-12);
        assert!(iv.hi >= 4.0 && iv.hi <= 4.0 + 1e-12);
    }

    #[test]
    fn even_power_negative_interval() {
        let iv = Interval::new(-3.0, -2.0).pow(2);
        assert!(iv.contains(4.0) && iv.contains(9.0));
        assert!(!iv.contains(3.9) && !iv.contains(9.1));
    }

    #[test]
    fn mul_signs() {
        let a = Interval::new(-1.0, 2.0);
        let b = Interval::new(-3.0, 0.5);
        let p = a.mul(b);
        for x in [-1.0, 0.0, 1.0, 2.0] {
            for y in [-3.0, -1.0, 0.0, 0.5] {
                assert!(p.contains(x * y));
            }
        }
    }

    #[test]
    fn outward_enclosure_of_sum() {
        let a = Interval::point(0.1);
        let b = Interval::point(0.2);
        let s = a.add(b);
        // 0.1 + 0.2 is not exactly representable; enclosure must cover the
        // true real sum 0.3 up to the rational value of the operands.
        assert!(s.lo < s.hi);
        assert!(s.contains(0.1 + 0.2));
    }
}
