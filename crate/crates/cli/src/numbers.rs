//! Exact integer arguments: digits with optional `_` separators, or an
//! exact power written `base^exp` (e.g. `10^12`). Decimal points and
//! scientific suffixes such as `1e12` are rejected.

use num_bigint::BigInt;
use num_traits::{Pow, ToPrimitive};

fn plain(s: &str) -> Result<BigInt, String> {
    let cleaned: String = s.chars().filter(|&c| c != '_').collect();
    let digits = cleaned.strip_prefix('-').unwrap_or(&cleaned);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("`{s}` is not an exact integer"));
    }
    cleaned
        .parse()
        .map_err(|_| format!("`{s}` is not an exact integer"))
}

pub fn parse_bigint(s: &str) -> Result<BigInt, String> {
    match s.split_once('^') {
        Some((base, exp)) => {
            let base = plain(base)?;
            let exp = plain(exp)?
                .to_u32()
                .ok_or_else(|| format!("exponent in `{s}` is out of range"))?;
            Ok(Pow::pow(&base, exp))
        }
        None => plain(s),
    }
}

pub fn parse_u64(s: &str) -> Result<u64, String> {
    parse_bigint(s)?
        .to_u64()
        .ok_or_else(|| format!("`{s}` does not fit a non-negative 64-bit integer"))
}

pub fn parse_usize(s: &str) -> Result<usize, String> {
    parse_bigint(s)?
        .to_usize()
        .ok_or_else(|| format!("`{s}` is not a valid non-negative size"))
}

pub fn parse_i64(s: &str) -> Result<i64, String> {
    parse_bigint(s)?
        .to_i64()
        .ok_or_else(|| format!("`{s}` does not fit a 64-bit integer"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_u64("100000").unwrap(), 100_000);
        assert_eq!(parse_u64("1_000_000_007").unwrap(), 1_000_000_007);
        assert_eq!(parse_u64("10^12").unwrap(), 1_000_000_000_000);
        assert_eq!(parse_i64("-3").unwrap(), -3);
    }

    #[test]
    fn rejected_forms() {
        for bad in ["1e12", "1.5", "", "abc", "0x10", "-", "1E3"] {
            assert!(parse_bigint(bad).is_err(), "{bad}");
        }
        assert!(parse_u64("-1").is_err());
        assert!(parse_u64("2^64").is_err());
    }
}
