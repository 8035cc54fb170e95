//! Exact integer kernels: binomial coefficients, multifactorials and the
//! rising product `m (m + r) ... (m + (n-1) r)`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::from(0);
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `n!_r = n (n - r)!_r` with `n!_r = 1` for `1 - r <= n <= 0`.
///
/// Values below `1 - r` are undefined and rejected, as is `r < 1`.
pub fn multifactorial(n: i64, r: i64) -> Result<BigInt> {
    if r < 1 {
        return Err(Error::Domain(format!("multifactorial step r = {r} must be >= 1")));
    }
    if (n as i128) < 1 - r as i128 {
        return Err(Error::Domain(format!(
            "multifactorial n!_r undefined for n = {n} < 1 - r = {}",
            1 - r as i128
        )));
    }
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 0 {
        acc *= k;
        k -= r;
    }
    Ok(acc)
}

/// `prod_{j=0}^{n-1} (m + j r)`, the coefficient `(m + (n-1) r)!_r / (m - r)!_r`
/// computed without division. The empty product (`n = 0`) is 1.
pub fn rising_product(m: i64, n: u64, r: i64) -> Result<BigInt> {
    if r < 1 {
        return Err(Error::Domain(format!("rising product step r = {r} must be >= 1")));
    }
    let mut acc = BigInt::one();
    let mut factor = BigInt::from(m);
    let step = BigInt::from(r);
    for _ in 0..n {
        acc *= &factor;
        factor += &step;
    }
    Ok(acc)
}
