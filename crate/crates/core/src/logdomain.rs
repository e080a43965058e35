//! Signed reals stored as `sign · exp(log_mag)`.
//!
//! Coefficients such as `min(h, 321) · 2^h · c(h, δ)` span roughly
//! `10^-550 ..= 10^300`, far outside `f64`. Products and powers become sums
//! and multiples of `log_mag`; sums use the usual max-plus-`log1p` scheme.
//! Zero is a separate sign so that exact cancellation and empty sums stay exact.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Direction used when quoting a value to a fixed number of significant digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Up,
    Down,
    Nearest,
}

#[derive(Clone, Copy)]
pub struct LogNumber {
    sign: Sign,
    log_mag: f64,
}

impl LogNumber {
    pub const ZERO: LogNumber = LogNumber {
        sign: Sign::Zero,
        log_mag: 0.0,
    };
    pub const ONE: LogNumber = LogNumber {
        sign: Sign::Positive,
        log_mag: 0.0,
    };

    /// Builds a value from its parts. A non-finite `log_mag` of `-inf` is
    /// normalised to zero; `+inf` and NaN are rejected.
    pub fn new(sign: Sign, log_mag: f64) -> Result<Self> {
        if sign == Sign::Zero || log_mag == f64::NEG_INFINITY {
            return Ok(Self::ZERO);
        }
        if !log_mag.is_finite() {
            return Err(Error::Domain(format!("log magnitude {log_mag} is not finite")));
        }
        Ok(LogNumber { sign, log_mag })
    }

    /// The positive number `exp(log_mag)`.
    pub fn from_ln(log_mag: f64) -> Self {
        debug_assert!(!log_mag.is_nan());
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogNumber {
            sign: Sign::Positive,
            log_mag,
        }
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            LogNumber {
                sign: Sign::Positive,
                log_mag: x.ln(),
            }
        } else {
            LogNumber {
                sign: Sign::Negative,
                log_mag: (-x).ln(),
            }
        }
    }

    /// `2^n` with the exponent kept exact in the log.
    pub fn pow2(n: i64) -> Self {
        Self::from_ln(n as f64 * std::f64::consts::LN_2)
    }

    /// Converts back to `f64`; underflows to `0.0` or overflows to `±inf`
    /// outside the double range.
    pub fn to_real(self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            Sign::Positive => self.log_mag.exp(),
            Sign::Negative => -self.log_mag.exp(),
        }
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    /// Natural log of `|self|`; `-inf` for zero.
    pub fn log_mag(self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.log_mag
        }
    }

    /// Base-10 log of `|self|`; `-inf` for zero.
    pub fn log10_mag(self) -> f64 {
        self.log_mag() / std::f64::consts::LN_10
    }

    pub fn is_zero(self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn is_positive(self) -> bool {
        self.sign == Sign::Positive
    }

    pub fn abs(self) -> Self {
        if self.is_zero() {
            self
        } else {
            LogNumber {
                sign: Sign::Positive,
                log_mag: self.log_mag,
            }
        }
    }

    pub fn ln_mul(self, other: Self) -> Self {
        let sign = self.sign.mul(other.sign);
        if sign == Sign::Zero {
            return Self::ZERO;
        }
        LogNumber {
            sign,
            log_mag: self.log_mag + other.log_mag,
        }
    }

    /// `self / other`; dividing by zero is a domain error.
    pub fn ln_div(self, other: Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::Domain("division by a zero LogNumber".into()));
        }
        Ok(self.ln_mul(other.recip_unchecked()))
    }

    fn recip_unchecked(self) -> Self {
        LogNumber {
            sign: self.sign,
            log_mag: -self.log_mag,
        }
    }

    pub fn ln_add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.log_mag >= other.log_mag {
            (self, other)
        } else {
            (other, self)
        };
        let gap = small.log_mag - big.log_mag;
        if big.sign == small.sign {
            LogNumber {
                sign: big.sign,
                log_mag: big.log_mag + gap.exp().ln_1p(),
            }
        } else {
            if gap == 0.0 {
                return Self::ZERO;
            }
            // |big| - |small| = |big| (1 - e^gap), gap < 0
            LogNumber {
                sign: big.sign,
                log_mag: big.log_mag + (-gap.exp_m1()).ln(),
            }
        }
    }

    pub fn ln_sub(self, other: Self) -> Self {
        self.ln_add(-other)
    }

    /// `self^n`. Zero to a non-positive power is a domain error.
    pub fn ln_pow_int(self, n: i64) -> Result<Self> {
        if self.is_zero() {
            return if n > 0 {
                Ok(Self::ZERO)
            } else {
                Err(Error::Domain(format!("0^{n} is undefined")))
            };
        }
        let sign = if self.sign == Sign::Negative && n % 2 != 0 {
            Sign::Negative
        } else {
            Sign::Positive
        };
        Ok(LogNumber {
            sign,
            log_mag: self.log_mag * n as f64,
        })
    }

    /// `k!` through the log-gamma function.
    pub fn ln_factorial(k: u64) -> Self {
        if k < 2 {
            return Self::ONE;
        }
        Self::from_ln(libm::lgamma(k as f64 + 1.0))
    }

    /// `|a - b| / max(|a|, |b|)`, evaluated without leaving the log domain
    /// when the signs agree. Returns 0 for two zeros and 1 for a zero against
    /// a nonzero or for opposite signs beyond that.
    pub fn relative_difference(self, other: Self) -> f64 {
        match (self.sign, other.sign) {
            (Sign::Zero, Sign::Zero) => 0.0,
            (Sign::Zero, _) | (_, Sign::Zero) => 1.0,
            (a, b) if a != b => {
                let diff = self.ln_sub(other).abs();
                let scale = self.log_mag.max(other.log_mag);
                (diff.log_mag - scale).exp()
            }
            _ => {
                let gap = -(self.log_mag - other.log_mag).abs();
                -gap.exp_m1()
            }
        }
    }

    /// Decimal mantissa in `[1, 10)` and exponent such that
    /// `|self| = mantissa · 10^exponent`. `(0, 0)` for zero.
    pub fn decimal_parts(self) -> (f64, i64) {
        if self.is_zero() {
            return (0.0, 0);
        }
        let l10 = self.log10_mag();
        let mut exponent = l10.floor();
        let mut mantissa = 10f64.powf(l10 - exponent);
        if mantissa >= 10.0 {
            mantissa /= 10.0;
            exponent += 1.0;
        }
        (mantissa, exponent as i64)
    }

    /// Scientific notation with `digits` significant digits, rounded in the
    /// given direction on the magnitude's signed value, e.g. `3.7e-8`.
    pub fn to_scientific(self, digits: usize, rounding: Rounding) -> String {
        assert!(digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let (mantissa, mut exponent) = self.decimal_parts();
        let scale = 10f64.powi(digits as i32 - 1);
        let scaled = mantissa * scale;
        // Round the signed value; a negative number rounded up has a smaller magnitude.
        let toward_larger_magnitude = match (rounding, self.sign) {
            (Rounding::Up, Sign::Positive) | (Rounding::Down, Sign::Negative) => Some(true),
            (Rounding::Down, Sign::Positive) | (Rounding::Up, Sign::Negative) => Some(false),
            _ => None,
        };
        // Absorb representation noise so exact quotients are not pushed a digit.
        let snapped = if (scaled - scaled.round()).abs() < 1e-9 * scale {
            scaled.round()
        } else {
            scaled
        };
        let mut digits_value = match toward_larger_magnitude {
            Some(true) => snapped.ceil(),
            Some(false) => snapped.floor(),
            None => snapped.round(),
        };
        if digits_value >= 10.0 * scale {
            digits_value /= 10.0;
            exponent += 1;
        }
        let m = digits_value / scale;
        let sign = if self.sign == Sign::Negative { "-" } else { "" };
        format!("{sign}{m:.prec$}e{exponent}", prec = digits - 1)
    }
}

impl Default for LogNumber {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Debug for LogNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "LogNumber(0)")
        } else {
            write!(f, "LogNumber({:+}, ln={})", self.sign.as_i8(), self.log_mag)
        }
    }
}

impl fmt::Display for LogNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map_or(17, |p| p + 1);
        f.write_str(&self.to_scientific(digits, Rounding::Nearest))
    }
}

impl PartialEq for LogNumber {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for LogNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                Sign::Zero => Some(Ordering::Equal),
                Sign::Positive => self.log_mag.partial_cmp(&other.log_mag),
                Sign::Negative => other.log_mag.partial_cmp(&self.log_mag),
            },
            ord => Some(ord),
        }
    }
}

impl Neg for LogNumber {
    type Output = LogNumber;
    fn neg(self) -> LogNumber {
        LogNumber {
            sign: self.sign.flip(),
            log_mag: self.log_mag,
        }
    }
}

impl Add for LogNumber {
    type Output = LogNumber;
    fn add(self, rhs: LogNumber) -> LogNumber {
        self.ln_add(rhs)
    }
}

impl Sub for LogNumber {
    type Output = LogNumber;
    fn sub(self, rhs: LogNumber) -> LogNumber {
        self.ln_sub(rhs)
    }
}

impl Mul for LogNumber {
    type Output = LogNumber;
    fn mul(self, rhs: LogNumber) -> LogNumber {
        self.ln_mul(rhs)
    }
}

/// Panics on division by zero; use [`LogNumber::ln_div`] to get an error instead.
impl Div for LogNumber {
    type Output = LogNumber;
    fn div(self, rhs: LogNumber) -> LogNumber {
        self.ln_div(rhs).expect("division by a zero LogNumber")
    }
}

/// Left-to-right reduction; callers that need reproducibility pass a fixed order.
impl Sum for LogNumber {
    fn sum<I: Iterator<Item = LogNumber>>(iter: I) -> LogNumber {
        iter.fold(LogNumber::ZERO, LogNumber::ln_add)
    }
}

impl<'a> Sum<&'a LogNumber> for LogNumber {
    fn sum<I: Iterator<Item = &'a LogNumber>>(iter: I) -> LogNumber {
        iter.copied().sum()
    }
}
