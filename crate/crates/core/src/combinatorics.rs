//! Logarithms of factorials and binomial coefficients.
//!
//! Everything here works in double precision. Small arguments come from a
//! table built with compensated summation; large ones use Stirling's series,
//! arranged so that no two large quantities are subtracted. The result is
//! accurate to about 1e-13 relative error for arguments up to 2^53.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use crate::error::{domain, Result};

const TABLE_SIZE: usize = 1024;

/// Largest `k` (after folding `k` to `min(k, n - k)`) summed term by term.
const DIRECT_TERMS: u64 = 16;

fn ln_factorial_table() -> &'static [f64; TABLE_SIZE] {
    static TABLE: OnceLock<Box<[f64; TABLE_SIZE]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Box::new([0.0; TABLE_SIZE]);
        let (mut sum, mut carry) = (0.0_f64, 0.0_f64);
        for i in 2..TABLE_SIZE {
            // Kahan summation keeps the table within an ulp or two.
            let y = (i as f64).ln() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
            table[i] = sum;
        }
        table
    })
}

/// Remainder of Stirling's series, `ln x! - (x ln x - x + ln(2 pi x) / 2)`.
/// Only used for `x >= DIRECT_TERMS`, where five terms reach full precision.
fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0
        - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))))
}

/// Natural log of `n!`.
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < TABLE_SIZE {
        return ln_factorial_table()[n as usize];
    }
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + stirling_tail(x)
}

/// Base-2 log of `n!`.
pub fn log2_factorial(n: u64) -> f64 {
    ln_factorial(n) / LN_2
}

/// Natural log of the binomial coefficient `C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(domain!("binomial coefficient C({n}, {k}) has k > n"));
    }
    let k = k.min(n - k);
    if k == 0 {
        return Ok(0.0);
    }
    if (n as usize) < TABLE_SIZE {
        let t = ln_factorial_table();
        return Ok(t[n as usize] - t[k as usize] - t[(n - k) as usize]);
    }
    if k <= DIRECT_TERMS {
        let base = (n - k) as f64;
        return Ok((1..=k).map(|i| ((base + i as f64) / i as f64).ln()).sum());
    }
    // All of n, k, n - k are large here.
    let (nf, kf) = (n as f64, k as f64);
    let mf = (n - k) as f64;
    let entropy = kf * (nf / kf).ln() - mf * (-kf / nf).ln_1p();
    let prefactor = 0.5 * (nf / (2.0 * PI * kf * mf)).ln();
    Ok(entropy + prefactor + stirling_tail(nf) - stirling_tail(kf) - stirling_tail(mf))
}

/// Base-2 log of `C(n, k)`, in bits.
pub fn log2_binomial(n: u64, k: u64) -> Result<f64> {
    Ok(ln_binomial(n, k)? / LN_2)
}

/// Bits needed to single out one composition of `total` into `parts`
/// positive integers, `log2 C(total - 1, parts - 1)`.
///
/// Zero parts summing to zero is the empty composition and costs nothing.
pub fn log2_compositions(total: u64, parts: u64) -> Result<f64> {
    match (total, parts) {
        (0, 0) => Ok(0.0),
        (_, 0) | (0, _) => Err(domain!(
            "no composition of {total} into {parts} positive parts"
        )),
        _ if parts > total => Err(domain!(
            "no composition of {total} into {parts} positive parts"
        )),
        _ => log2_binomial(total - 1, parts - 1),
    }
}
