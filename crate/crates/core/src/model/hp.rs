//! Fixed-point logarithms and entropies at configurable precision.
//!
//! Values are represented as `mantissa / 2^bits` with a `BigInt` mantissa,
//! which gives honest headroom beyond `f64` for threshold and crossover
//! work. Natural logs come from the `atanh` series
//! `ln t = 2 (z + z^3/3 + z^5/5 + ...)` with `z = (t-1)/(t+1)` after
//! normalizing the argument into `[1, 2)`, so `|z| <= 1/3` and each term
//! gains a bit over 3 bits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

const GUARD_BITS: u32 = 32;

/// A fixed-point number `mantissa / 2^bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fx {
    mantissa: BigInt,
    bits: u32,
}

impl Fx {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn from_ratio(r: &BigRational, bits: u32) -> Self {
        let scaled = r * BigRational::from_integer(BigInt::from(1u8) << bits);
        Fx {
            mantissa: round_ratio(&scaled),
            bits,
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Split the shift so huge mantissas still convert through f64.
        let m = self.mantissa.to_f64().unwrap_or(f64::INFINITY);
        m / 2f64.powi(self.bits as i32)
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::from(1u8) << self.bits)
    }

    fn round_to(&self, bits: u32) -> Fx {
        assert!(bits <= self.bits);
        let shift = self.bits - bits;
        Fx {
            mantissa: shift_round(&self.mantissa, shift),
            bits,
        }
    }
}

fn round_ratio(r: &BigRational) -> BigInt {
    // Round half away from zero; exactness at the half point is immaterial
    // at the working precision.
    let two = BigInt::from(2);
    let adj = if r.numer().is_negative() {
        -r.denom().clone()
    } else {
        r.denom().clone()
    };
    (r.numer() * &two + adj) / (r.denom() * &two)
}

fn shift_round(m: &BigInt, shift: u32) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    let half = BigInt::from(1u8) << (shift - 1);
    if m.is_negative() {
        -((-m + half) >> shift)
    } else {
        (m + half) >> shift
    }
}

fn mul(a: &BigInt, b: &BigInt, bits: u32) -> BigInt {
    shift_round(&(a * b), bits)
}

fn div(a: &BigInt, b: &BigInt, bits: u32) -> BigInt {
    let num: BigInt = a << (bits + 1);
    let q = num / b;
    shift_round(&q, 1)
}

/// `ln 2` at the requested precision, from `ln 2 = 2 atanh(1/3)`.
pub fn ln2(bits: u32) -> Fx {
    let w = bits + GUARD_BITS;
    let z = div(&BigInt::from(1u8), &BigInt::from(3u8), w);
    let sum = atanh_series(&z, w);
    Fx {
        mantissa: sum << 1,
        bits: w,
    }
    .round_to(bits)
}

fn atanh_series(z: &BigInt, bits: u32) -> BigInt {
    let zz = mul(z, z, bits);
    let mut pow = z.clone();
    let mut sum = z.clone();
    let mut j = 1u32;
    while !pow.is_zero() {
        pow = mul(&pow, &zz, bits);
        if pow.is_zero() {
            break;
        }
        sum += &pow / BigInt::from(2 * j + 1);
        j += 1;
    }
    sum
}

/// Natural log of a positive rational.
pub fn ln(x: &BigRational, bits: u32) -> Result<Fx> {
    if x <= &BigRational::zero() {
        return Err(Error::Input(format!("log of non-positive value {x}")));
    }
    let w = bits + GUARD_BITS;
    let v = Fx::from_ratio(x, w);
    // Normalize mantissa into [2^w, 2^(w+1)) so the value lies in [1, 2).
    let e = v.mantissa.bits() as i64 - 1 - w as i64;
    let t = if e >= 0 {
        shift_round(&v.mantissa, e as u32)
    } else {
        &v.mantissa << ((-e) as u32)
    };
    let one = BigInt::from(1u8) << w;
    let z = div(&(&t - &one), &(&t + &one), w);
    let ln_t = atanh_series(&z, w) << 1;
    let ln2w = ln2_raw(w);
    let total = ln_t + BigInt::from(e) * ln2w;
    Ok(Fx {
        mantissa: total,
        bits: w,
    }
    .round_to(bits))
}

fn ln2_raw(bits: u32) -> BigInt {
    let z = div(&BigInt::from(1u8), &BigInt::from(3u8), bits);
    atanh_series(&z, bits) << 1
}

/// Base-2 log of a positive rational.
pub fn log2(x: &BigRational, bits: u32) -> Result<Fx> {
    let w = bits + GUARD_BITS;
    let lnx = ln(x, w)?;
    let l2 = ln2_raw(w);
    Ok(Fx {
        mantissa: div(&lnx.mantissa, &l2, w),
        bits: w,
    }
    .round_to(bits))
}

/// Shannon entropy in bits of an explicit probability vector (parts must be
/// nonnegative and are not checked to sum to one; zero parts contribute 0).
pub fn shannon_entropy(parts: &[BigRational], bits: u32) -> Result<Fx> {
    let w = bits + GUARD_BITS;
    let mut sum = BigInt::zero();
    for p in parts {
        if p.is_negative() {
            return Err(Error::Input(format!("negative probability {p}")));
        }
        if p.is_zero() {
            continue;
        }
        let lg = log2(p, w)?;
        let pf = Fx::from_ratio(p, w);
        sum -= mul(&pf.mantissa, &lg.mantissa, w);
    }
    Ok(Fx {
        mantissa: sum,
        bits: w,
    }
    .round_to(bits))
}

/// Binary entropy `h(x)` at the requested precision.
pub fn binary_entropy(x: &BigRational, bits: u32) -> Result<Fx> {
    if x < &BigRational::zero() || x > &BigRational::from_integer(BigInt::from(1u8)) {
        return Err(Error::Input(format!(
            "binary entropy needs x in [0, 1], got {x}"
        )));
    }
    let one = BigRational::from_integer(BigInt::from(1u8));
    shannon_entropy(&[x.clone(), &one - x], bits)
}

/// Three-outcome entropy `H(lambda, lambda, 1 - 2 lambda)` at the requested
/// precision.
pub fn f_entropy(lambda: &BigRational, bits: u32) -> Result<Fx> {
    crate::model::check_f_domain(lambda)?;
    let one = BigRational::from_integer(BigInt::from(1u8));
    let rest = &one - lambda * BigRational::from_integer(BigInt::from(2u8));
    shannon_entropy(&[lambda.clone(), lambda.clone(), rest], bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Independent oracle: extract the binary digits of log2(x) for x > 0 by
    /// repeated squaring in truncated fixed point.
    fn log2_by_squaring(x: &BigRational, frac_bits: u32) -> BigRational {
        let work = frac_bits + 64;
        let scale = BigUint::from(1u8) << work;
        // Normalize into [1, 2), tracking the integer part.
        let mut int_part: i64 = 0;
        let mut v = x.clone();
        let two = BigRational::from_integer(BigInt::from(2u8));
        let one = BigRational::from_integer(BigInt::from(1u8));
        while v >= two {
            v /= &two;
            int_part += 1;
        }
        while v < one {
            v *= &two;
            int_part -= 1;
        }
        let mut m = (v * BigRational::from_integer(BigInt::from(scale.clone())))
            .floor()
            .to_integer()
            .to_biguint()
            .unwrap();
        let mut frac = BigRational::zero();
        let mut weight = ratio(1, 2);
        for _ in 0..frac_bits {
            m = (&m * &m) >> work;
            if m.bits() as i64 > work as i64 + 1 {
                frac += &weight;
                m >>= 1;
            }
            weight /= &two;
        }
        BigRational::from_integer(BigInt::from(int_part)) + frac
    }

    #[test]
    fn log2_matches_digit_extraction_oracle() {
        for (n, d) in [(3i64, 1i64), (5, 4), (7, 3), (1, 5)] {
            let x = ratio(n, d);
            let got = log2(&x, 128).unwrap().to_ratio();
            let want = log2_by_squaring(&x, 120);
            let err = (got - want).abs();
            let tol = BigRational::new(BigInt::from(1u8), BigInt::from(1u8) << 100);
            assert!(err < tol, "log2({n}/{d}) disagrees with oracle");
        }
    }

    #[test]
    fn agrees_with_f64_at_low_precision() {
        for (n, d) in [(1i64, 4i64), (3, 7), (99, 100), (1, 137)] {
            let x = ratio(n, d);
            let fx = ln(&x, 96).unwrap().to_f64();
            let f = (n as f64 / d as f64).ln();
            assert!((fx - f).abs() < 1e-13, "ln({n}/{d})");
        }
        let h = binary_entropy(&ratio(1, 3), 96).unwrap().to_f64();
        let expect = -(1f64 / 3.0) * (1f64 / 3.0).log2() - (2f64 / 3.0) * (2f64 / 3.0).log2();
        assert!((h - expect).abs() < 1e-13);
    }

    #[test]
    fn ln2_value() {
        let v = ln2(128).to_f64();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn f_entropy_uniform_three_outcomes() {
        let v = f_entropy(&ratio(1, 3), 160).unwrap().to_f64();
        assert!((v - 3f64.log2()).abs() < 1e-14);
    }
}
