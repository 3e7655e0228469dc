//! Explicit sequence builders.
//!
//! The constructions share one idea: keep a certified sum-distinct base in
//! the high bits (powers of two, or a Conway-Guy style set scaled up) and
//! insert one or two extra elements whose binary expansions alternate bits
//! in the low positions, so any would-be collision is forced down into a
//! smaller instance that is already known collision-free.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::model::Sequence;
use crate::verifier::{verify, PairConstraint, VerifyOptions};
use crate::{BigRational, Error, Result};

/// A certified sum-distinct strictly increasing list of positive integers,
/// used as the high-bit block of the extension constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSequence {
    values: Vec<BigUint>,
    certified_sum_distinct: bool,
    name: String,
}

#[derive(Serialize, Deserialize)]
struct BaseSequenceRepr {
    k: usize,
    n: usize,
    elements: Vec<Vec<String>>,
    bound: Option<String>,
    certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl BaseSequence {
    pub fn new(values: Vec<BigUint>, certified: bool, name: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input(
                "a base sequence needs at least one value".into(),
            ));
        }
        if values[0].is_zero() {
            return Err(Error::Input("base sequence values must be positive".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(
                "base sequence values must be strictly increasing".into(),
            ));
        }
        Ok(BaseSequence {
            values,
            certified_sum_distinct: certified,
            name: name.into(),
        })
    }

    /// The powers-of-two base; certified by uniqueness of binary
    /// representation, no search needed.
    pub fn powers_of_two(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Input("base length must be at least 1".into()));
        }
        let values = (0..len).map(|i| BigUint::one() << i).collect();
        BaseSequence::new(values, true, format!("powers2-L{len}"))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn is_certified(&self) -> bool {
        self.certified_sum_distinct
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_value(&self) -> &BigUint {
        self.values.last().expect("nonempty")
    }

    pub fn to_sequence(&self) -> Sequence {
        Sequence::new(
            1,
            self.values.iter().map(|v| vec![v.clone()]).collect(),
            Some(self.max_value().clone()),
        )
        .expect("base values form a valid sequence")
    }

    pub fn to_json(&self) -> String {
        let repr = BaseSequenceRepr {
            k: 1,
            n: self.values.len(),
            elements: self
                .values
                .iter()
                .map(|v| vec![v.to_str_radix(10)])
                .collect(),
            bound: Some(self.max_value().to_str_radix(10)),
            certified: self.certified_sum_distinct,
            name: Some(self.name.clone()),
        };
        serde_json::to_string_pretty(&repr).expect("base serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: BaseSequenceRepr = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("invalid base sequence JSON: {e}")))?;
        if repr.k != 1 {
            return Err(Error::Input("base sequences are one-dimensional".into()));
        }
        let values = repr
            .elements
            .iter()
            .map(|e| {
                if e.len() != 1 {
                    return Err(Error::Input(
                        "base elements must have one coordinate".into(),
                    ));
                }
                crate::model::parse_biguint(&e[0])
            })
            .collect::<Result<Vec<_>>>()?;
        BaseSequence::new(
            values,
            repr.certified,
            repr.name.unwrap_or_else(|| "base".into()),
        )
    }
}

/// `(2^0, ..., 2^(n-1))` with the true maximum as declared bound.
pub fn powers_of_two(n: usize) -> Result<Sequence> {
    if n == 0 {
        return Err(Error::Input("powers-of-two sequence needs n >= 1".into()));
    }
    let elements = (0..n).map(|i| vec![BigUint::one() << i]).collect();
    Sequence::new(1, elements, Some(BigUint::one() << (n - 1)))
}

/// Sum of `count` alternating-bit terms starting at `4^start`:
/// `4^start + 4^(start+1) + ... + 4^(start+count-1)`.
fn alternating_bits(start: usize, count: usize) -> BigUint {
    let mut v = BigUint::zero();
    for j in start..start + count {
        v += BigUint::one() << (2 * j);
    }
    v
}

/// Number of integers `j >= lo` with `j < bound_num / 2`, i.e.
/// `max(0, ceil(bound_num / 2) - lo)` evaluated without rationals.
fn half_open_count(lo: usize, bound_num: i64) -> usize {
    if bound_num <= 0 {
        return 0;
    }
    let end = ((bound_num + 1) / 2) as usize; // ceil(bound_num / 2)
    end.saturating_sub(lo)
}

/// Powers of two with the last power replaced by the alternating-bit sum
/// `sum_{j < n/2 - 1} 4^j`. Distinct over all pairs with
/// `|A1| + |A2| < n/2`; the cap is tight for even `n`.
pub fn tilde_sigma(n: usize) -> Result<Sequence> {
    if n < 6 {
        return Err(Error::Input(format!(
            "the padded powers-of-two sequence is defined for n >= 6, got {n}"
        )));
    }
    let mut elements: Vec<Vec<BigUint>> = (0..n - 1).map(|i| vec![BigUint::one() << i]).collect();
    // j < n/2 - 1 = (n - 2)/2
    let count = half_open_count(0, n as i64 - 2);
    elements.push(vec![alternating_bits(0, count)]);
    Sequence::new(1, elements, Some(BigUint::one() << (n - 2)))
}

const CONWAY_GUY_MAX_LEN: usize = 40;

/// Generate a Conway-Guy style candidate set by the classical recurrence
/// `u_{r+1} = 2 u_r - u_{r - floor(1/2 + sqrt(2r))}` and differencing, then
/// certify it sum-distinct with a full verification pass. The recurrence is
/// a heuristic; certification is the contract, and a candidate that fails
/// it is a construction error.
pub fn conway_guy_base(length: usize) -> Result<BaseSequence> {
    if length == 0 || length > CONWAY_GUY_MAX_LEN {
        return Err(Error::Input(format!(
            "base length must lie in [1, {CONWAY_GUY_MAX_LEN}], got {length}"
        )));
    }
    let mut u: Vec<BigUint> = vec![BigUint::zero(), BigUint::one()];
    for r in 1..=length {
        let back = (1 + isqrt(8 * r as u64) as usize).div_euclid(2);
        let next = (&u[r] << 1) - &u[r - back];
        u.push(next);
    }
    let top = u[length + 1].clone();
    let values: Vec<BigUint> = (1..=length).map(|i| &top - &u[length + 1 - i]).collect();
    let base = BaseSequence::new(values, false, format!("conway-guy-L{length}"))?;
    certify(base)
}

/// Run the full-family verifier over a candidate base and set the
/// certification flag, or fail with a construction error.
pub fn certify(base: BaseSequence) -> Result<BaseSequence> {
    let seq = base.to_sequence();
    let lambda_one = BigRational::from_integer(1.into());
    let report = verify(
        &seq,
        &PairConstraint::family(lambda_one),
        &VerifyOptions::default(),
    )?;
    if !report.is_distinct() {
        let w = report.witness.expect("collision carries witness");
        return Err(Error::Construction(format!(
            "candidate base '{}' is not sum-distinct: S({}) = S({})",
            base.name(),
            w.a1,
            w.a2
        )));
    }
    BaseSequence::new(base.values.clone(), true, base.name.clone())
}

fn isqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    while r * r > v {
        r -= 1;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentMode {
    /// One inserted element; distinct for size caps below n/4.
    Single,
    /// Two inserted elements; distinct for size caps below n/8.
    Double,
}

/// Element `i` (1-based) of the length-`m` extension of a base of length
/// `L`: powers of two up to position `m - L`, then the base scaled by
/// `2^(m-L)`.
fn extended_base_element(base: &BaseSequence, m: usize, i: usize) -> BigUint {
    let prefix = m - base.len();
    if i <= prefix {
        BigUint::one() << (i - 1)
    } else {
        base.values()[i - prefix - 1].clone() << prefix
    }
}

/// Extend a certified base of length `L` to `n` elements by prefixing
/// powers of two and appending one (`Single`) or two (`Double`)
/// alternating-bit tail elements.
///
/// `Single` requires `n >= L + 9` and `Double` requires `n >= 2L + 11`,
/// the structural minimum leaving room for the low-bit patterns.
pub fn augment_base(base: &BaseSequence, n: usize, mode: AugmentMode) -> Result<Sequence> {
    if !base.is_certified() {
        return Err(Error::Contract(format!(
            "base '{}' is not certified sum-distinct",
            base.name()
        )));
    }
    let l = base.len();
    match mode {
        AugmentMode::Single => {
            if n < l + 9 {
                return Err(Error::Input(format!(
                    "single-insertion extension needs n >= L + 9 = {}, got {n}",
                    l + 9
                )));
            }
            let mut elements: Vec<Vec<BigUint>> = (1..=n - 1)
                .map(|i| vec![extended_base_element(base, n - 1, i)])
                .collect();
            // j < (n - L - 1)/2 - 1 = (n - L - 3)/2
            let count = half_open_count(0, n as i64 - l as i64 - 3);
            elements.push(vec![alternating_bits(0, count)]);
            let bound = base.max_value() << (n - 1 - l);
            Sequence::new(1, elements, Some(bound))
        }
        AugmentMode::Double => {
            if n < 2 * l + 11 {
                return Err(Error::Input(format!(
                    "double-insertion extension needs n >= 2L + 11 = {}, got {n}",
                    2 * l + 11
                )));
            }
            let n_prime = (n - l - 2) / 2;
            let mut elements: Vec<Vec<BigUint>> = (1..=n - 2)
                .map(|i| vec![extended_base_element(base, n - 2, i)])
                .collect();
            // Second-to-last element: j < n'/2 - 1.
            let count1 = half_open_count(0, n_prime as i64 - 2);
            elements.push(vec![alternating_bits(0, count1)]);
            // Last element: ceil(n'/2) - 1 <= j < (n - L - 2)/2 - 1.
            let j0 = n_prime.div_ceil(2) - 1;
            let count2 = half_open_count(j0, n as i64 - l as i64 - 4);
            if count2 == 0 {
                return Err(Error::Input(
                    "no room for the second inserted element at these parameters".into(),
                ));
            }
            elements.push(vec![alternating_bits(j0, count2)]);
            let bound = base.max_value() << (n - 2 - l);
            Sequence::new(1, elements, Some(bound))
        }
    }
}

/// Embed a one-dimensional sequence of length `n'` into `Z^k` as `k`
/// coordinate blocks, giving `n = k * n'` elements; the size-cap contract
/// transforms as `lambda = lambda' / k` and the bound is unchanged.
pub fn lift_to_k(base_seq: &Sequence, k: usize) -> Result<Sequence> {
    if k == 0 {
        return Err(Error::Input("lift dimension must be at least 1".into()));
    }
    if base_seq.k() != 1 {
        return Err(Error::Input(format!(
            "lift takes a one-dimensional sequence, got k={}",
            base_seq.k()
        )));
    }
    let mut elements = Vec::with_capacity(k * base_seq.n());
    for coord in 0..k {
        for e in base_seq.elements() {
            let mut v = vec![BigUint::zero(); k];
            v[coord] = e[0].clone();
            elements.push(v);
        }
    }
    Sequence::new(k, elements, base_seq.declared_bound().cloned())
}
