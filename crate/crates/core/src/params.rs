//! The parameter functions `same`, `obs`, `grid` and `tw` of the
//! approximation argument, computed exactly.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// `base^exponent`, kept symbolic because it is far too large to expand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicPower {
    pub base: u32,
    #[serde(serialize_with = "decimal")]
    pub exponent: BigUint,
}

impl SymbolicPower {
    pub fn log2(&self) -> f64 {
        self.exponent.to_f64().unwrap_or(f64::INFINITY) * f64::from(self.base).log2()
    }

    pub fn log10(&self) -> f64 {
        self.exponent.to_f64().unwrap_or(f64::INFINITY) * f64::from(self.base).log10()
    }

    /// Whether the power exceeds `m`.
    pub fn exceeds(&self, m: u64) -> bool {
        match self.exponent.to_u32() {
            Some(e) if e <= 64 => BigUint::from(self.base).pow(e) > BigUint::from(m),
            _ => self.base >= 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamBundle {
    pub k: u32,
    #[serde(serialize_with = "decimal")]
    pub same: BigUint,
    #[serde(serialize_with = "decimal")]
    pub obs: BigUint,
    #[serde(serialize_with = "decimal")]
    pub grid: BigUint,
    pub tw: SymbolicPower,
}

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

/// `same = 15·2^(2k+2)`, `obs = 2^k·same + k`, `grid = ⌈4·√(obs+1)⌉`,
/// `tw = 20^(2·grid^5)`.
pub fn params(k: u32) -> Result<ParamBundle> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "parameter functions need k >= 1".into(),
        ));
    }
    let same = BigUint::from(15u32) << (2 * k as usize + 2);
    let obs = (&same << k as usize) + BigUint::from(k);
    // ⌈4·√(obs+1)⌉ = ⌈√(16·(obs+1))⌉
    let radicand = (&obs + BigUint::one()) * BigUint::from(16u32);
    let mut grid = radicand.sqrt();
    if &grid * &grid < radicand {
        grid += BigUint::one();
    }
    let exponent = grid.pow(5u32) * BigUint::from(2u32);
    Ok(ParamBundle {
        k,
        same,
        obs,
        grid,
        tw: SymbolicPower { base: 20, exponent },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_equals_one() {
        let p = params(1).unwrap();
        assert_eq!(p.same, BigUint::from(240u32));
        assert_eq!(p.obs, BigUint::from(481u32));
        assert_eq!(p.grid, BigUint::from(88u32));
        assert_eq!(p.tw.exponent, BigUint::from(10_554_638_336u64));
        assert!(p.tw.exceeds(u64::MAX));
        assert!(p.tw.log10() > 1e10);
    }

    #[test]
    fn closed_forms_hold() {
        for k in 1..=16u32 {
            let p = params(k).unwrap();
            let same = 15u128 << (2 * k + 2);
            let obs = (same << k) + u128::from(k);
            assert_eq!(p.same, BigUint::from(same));
            assert_eq!(p.obs, BigUint::from(obs));
            let g = p.grid.to_f64().unwrap();
            let exact = 4.0 * ((obs + 1) as f64).sqrt();
            assert!(g >= exact && g - exact < 1.0, "k = {k}");
            assert_eq!(p.tw.exponent, p.grid.pow(5u32) * BigUint::from(2u32));
        }
        assert!(params(0).is_err());
    }

    #[test]
    fn small_powers_compare_exactly() {
        let p = SymbolicPower {
            base: 20,
            exponent: BigUint::from(2u32),
        };
        assert!(p.exceeds(399));
        assert!(!p.exceeds(400));
    }
}
