//! The degree parameter `D`, the exponent slack `eps`, the threshold
//! `tau = D^(1/2 - eps)` and the integer palette size `K`.
//!
//! `eps` is an exact rational `p/q`, so every comparison against `tau`
//! reduces to integer arithmetic: `x >= tau` iff `x^(2q) >= D^(q - 2p)`.
//! Floating point is only used for reporting and for the counting
//! certificates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("eps must lie in (0, 1/2], got {0}")]
    EpsOutOfRange(Ratio),
    #[error("D = {d} is below the threshold 4^(1/(2 eps)) = 2^({q}/{p})")]
    BelowThreshold { d: u32, p: u32, q: u32 },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("denominator of eps is limited to {max}, got {den}")]
    DenominatorTooLarge { den: u32, max: u32 },
}

/// A non-negative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u32,
    pub den: u32,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Ratio {
    pub fn new(num: u32, den: u32) -> Result<Self, ParamsError> {
        if den == 0 {
            return Err(ParamsError::Parse(format!("{num}/0")));
        }
        let g = gcd(num.into(), den.into()) as u32;
        let g = g.max(1);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Ratio {
    type Err = ParamsError;

    /// Accepts `p/q`, a plain integer, or a finite decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParamsError::Parse(s.to_string());
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let q: u32 = q.trim().parse().map_err(|_| bad())?;
            return Ratio::new(p, q).map_err(|_| bad());
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || frac.len() > 9
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?;
        let g = gcd(num, den).max(1);
        let (num, den) = (num / g, den / g);
        Ok(Ratio {
            num: u32::try_from(num).map_err(|_| bad())?,
            den: u32::try_from(den).map_err(|_| bad())?,
        })
    }
}

pub const MAX_EPS_DENOMINATOR: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    d: u32,
    eps: Ratio,
    tau: f64,
    tau_floor: u32,
    tau_ceil: u32,
    palette: u32,
}

/// `D^(q - 2p)`, the `2q`-th power of `tau`.
fn tau_power(d: u32, eps: Ratio) -> BigUint {
    BigUint::from(d).pow(eps.den - 2 * eps.num)
}

fn pow_big(x: u64, e: u32) -> BigUint {
    BigUint::from(x).pow(e)
}

impl Params {
    pub fn new(d: u32, eps: Ratio) -> Result<Self, ParamsError> {
        if eps.num == 0 || 2 * u64::from(eps.num) > u64::from(eps.den) {
            return Err(ParamsError::EpsOutOfRange(eps));
        }
        if eps.den > MAX_EPS_DENOMINATOR {
            return Err(ParamsError::DenominatorTooLarge {
                den: eps.den,
                max: MAX_EPS_DENOMINATOR,
            });
        }
        // D >= 4^(1/(2 eps)) = 2^(q/p)  <=>  D^p >= 2^q
        if pow_big(d.into(), eps.num) < pow_big(2, eps.den) {
            return Err(ParamsError::BelowThreshold {
                d,
                p: eps.num,
                q: eps.den,
            });
        }
        let target = tau_power(d, eps);
        let r = 2 * eps.den;
        // tau <= sqrt(D), so the search is short.
        let mut tau_floor = 1u32;
        while pow_big(u64::from(tau_floor) + 1, r) <= target {
            tau_floor += 1;
        }
        let tau_ceil = if pow_big(tau_floor.into(), r) == target {
            tau_floor
        } else {
            tau_floor + 1
        };
        let tau = f64::from(d).powf(0.5 - eps.to_f64());
        // floor(5D - tau + 2) = 5D + 2 - ceil(tau)
        let palette = 5 * d + 2 - tau_ceil;
        Ok(Params {
            d,
            eps,
            tau,
            tau_floor,
            tau_ceil,
            palette,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn eps(&self) -> Ratio {
        self.eps
    }

    /// `D^(1/2 - eps)` as a float, for reports and counting certificates.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn tau_floor(&self) -> u32 {
        self.tau_floor
    }

    pub fn tau_ceil(&self) -> u32 {
        self.tau_ceil
    }

    /// The palette size `K = floor(5D - tau + 2)`.
    pub fn palette(&self) -> u32 {
        self.palette
    }

    /// Exact test `x >= tau`.
    pub fn reaches_tau(&self, x: usize) -> bool {
        pow_big(x as u64, 2 * self.eps.den) >= tau_power(self.d, self.eps)
    }

    /// Largest degree allowed when the capacity is below `tau`: `floor(D + tau)`.
    pub fn low_capacity_degree_cap(&self) -> usize {
        (self.d + self.tau_floor) as usize
    }

    /// Largest degree allowed when the capacity reaches `tau`.
    pub fn high_capacity_degree_cap(&self) -> usize {
        self.d as usize + 2
    }

    /// `D^(1/2 + eps) = D / tau`.
    pub fn d_over_tau(&self) -> f64 {
        f64::from(self.d) / self.tau
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Ratio {
        Ratio::new(1, 2).unwrap()
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!("0.5".parse::<Ratio>().unwrap(), half());
        assert_eq!("1/2".parse::<Ratio>().unwrap(), half());
        assert_eq!("2/4".parse::<Ratio>().unwrap(), half());
        assert_eq!(".25".parse::<Ratio>().unwrap(), Ratio::new(1, 4).unwrap());
        assert_eq!("0.125".parse::<Ratio>().unwrap(), Ratio::new(1, 8).unwrap());
        for bad in ["", ".", "a", "1/0", "-0.5", "0.5.1", "1/x"] {
            assert!(bad.parse::<Ratio>().is_err(), "{bad}");
        }
    }

    #[test]
    fn d4_half() {
        let p = Params::new(4, half()).unwrap();
        assert_eq!(p.tau(), 1.0);
        assert_eq!((p.tau_floor(), p.tau_ceil()), (1, 1));
        assert_eq!(p.palette(), 21);
        assert!(p.reaches_tau(1));
        assert!(!p.reaches_tau(0));
    }

    #[test]
    fn d16_quarter() {
        let p = Params::new(16, Ratio::new(1, 4).unwrap()).unwrap();
        assert!((p.tau() - 2.0).abs() < 1e-12);
        assert_eq!(p.palette(), 80);
        assert!(p.reaches_tau(2));
        assert!(!p.reaches_tau(1));
        assert_eq!(p.low_capacity_degree_cap(), 18);
    }

    #[test]
    fn irrational_tau() {
        // 25^(1/4) = 2.236...
        let p = Params::new(25, Ratio::new(1, 4).unwrap()).unwrap();
        assert_eq!((p.tau_floor(), p.tau_ceil()), (2, 3));
        assert_eq!(p.palette(), 124);
        assert_eq!(p.palette() as f64, (5.0 * 25.0 - p.tau() + 2.0).floor());
        assert!(p.reaches_tau(3));
        assert!(!p.reaches_tau(2));
    }

    #[test]
    fn below_threshold() {
        assert!(matches!(
            Params::new(3, half()),
            Err(ParamsError::BelowThreshold { .. })
        ));
        assert!(Params::new(15, Ratio::new(1, 4).unwrap()).is_err());
        assert!(Params::new(16, Ratio::new(1, 4).unwrap()).is_ok());
    }

    #[test]
    fn eps_range() {
        assert!(Params::new(100, Ratio::new(0, 1).unwrap()).is_err());
        assert!(Params::new(100, Ratio::new(3, 5).unwrap()).is_err());
    }

    #[test]
    fn palette_brackets_formula() {
        for d in 4..200u32 {
            for eps in [half(), Ratio::new(1, 3).unwrap(), Ratio::new(1, 4).unwrap()] {
                let Ok(p) = Params::new(d, eps) else { continue };
                let real = 5.0 * f64::from(d) - p.tau();
                assert!(f64::from(p.palette()) >= real + 1.0 - 1e-9);
                assert!(f64::from(p.palette()) <= real + 2.0 + 1e-9);
            }
        }
    }
}
