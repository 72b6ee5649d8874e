//! Exact rational similarity threshold. Pair admission uses integer
//! cross-multiplication, never floating point, so a score exactly equal to
//! the threshold is unambiguously excluded.

use std::fmt;

use crate::error::{Error, Result};

/// A similarity threshold in the open interval (0, 1/2), kept as a reduced
/// fraction. Construction validates the range, so a `Threshold` value is
/// always usable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    numerator: u32,
    denominator: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Threshold {
    /// Build `numerator/denominator`, requiring `0 < num/den < 1/2`.
    pub fn new(numerator: u32, denominator: u32) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidParameter(
                "threshold denominator is zero".into(),
            ));
        }
        if numerator == 0 || 2 * u64::from(numerator) >= u64::from(denominator) {
            return Err(Error::InvalidParameter(format!(
                "threshold {numerator}/{denominator} outside (0, 0.5)"
            )));
        }
        let g = gcd(numerator, denominator);
        Ok(Threshold {
            numerator: numerator / g,
            denominator: denominator / g,
        })
    }

    /// Parse either a fraction (`1/5`) or a decimal (`0.2`, `.20`). Decimals
    /// become exact fractions over a power of ten.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let numerator: u32 = num
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad threshold numerator {num:?}")))?;
            let denominator: u32 = den.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("bad threshold denominator {den:?}"))
            })?;
            return Threshold::new(numerator, denominator);
        }

        let (whole, frac) = match text.split_once('.') {
            Some((w, f)) => (w, f),
            None => (text, ""),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(Error::InvalidParameter(format!("bad threshold {text:?}")));
        }
        if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::InvalidParameter(format!("bad threshold {text:?}")));
        }
        if frac.len() > 9 {
            return Err(Error::InvalidParameter(
                "threshold has more than 9 decimal places".into(),
            ));
        }
        let whole_value: u32 = if whole.is_empty() {
            0
        } else {
            whole
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad threshold {text:?}")))?
        };
        if whole_value > 0 {
            return Err(Error::InvalidParameter(format!(
                "threshold {text} outside (0, 0.5)"
            )));
        }
        let denominator = 10u32.pow(frac.len() as u32);
        let numerator: u32 = if frac.is_empty() {
            0
        } else {
            frac.parse()
                .map_err(|_| Error::InvalidParameter(format!("bad threshold {text:?}")))?
        };
        Threshold::new(numerator, denominator)
    }

    pub fn numerator(&self) -> u32 {
        self.numerator
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    /// Does `matched/denom` strictly exceed this threshold? `denom == 0`
    /// never exceeds (the degenerate score is zero).
    pub fn exceeded_by(&self, matched: u64, denom: u64) -> bool {
        u128::from(matched) * u128::from(self.denominator)
            > u128::from(self.numerator) * u128::from(denom)
    }

    pub fn value(&self) -> f64 {
        f64::from(self.numerator) / f64::from(self.denominator)
    }

    /// Decimal rendering at 4 places (round half up), display only.
    pub fn display_decimal(&self) -> String {
        crate::similarity::decimal4(u64::from(self.numerator), u64::from(self.denominator))
    }

    /// Filename-safe tag, e.g. `1_5`.
    pub fn tag(&self) -> String {
        format!("{}_{}", self.numerator, self.denominator)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}
