//! Core data model: bounded sequences in `Z^k`, the size-capped subset
//! family, index sets, subset sums, entropy functions, and exact counting.

pub mod hp;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A length-`n` sequence of vectors in `Z^k` with nonnegative
/// arbitrary-precision coordinates, optionally carrying the bound `M`
/// every coordinate is promised to respect.
///
/// Elements are kept in input order; nothing here assumes sortedness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    k: usize,
    elements: Vec<Vec<BigUint>>,
    declared_bound: Option<BigUint>,
}

#[derive(Serialize, Deserialize)]
struct SequenceRepr {
    k: usize,
    n: usize,
    elements: Vec<Vec<String>>,
    bound: Option<String>,
}

impl Sequence {
    pub fn new(
        k: usize,
        elements: Vec<Vec<BigUint>>,
        declared_bound: Option<BigUint>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("dimension k must be at least 1".into()));
        }
        if elements.is_empty() {
            return Err(Error::Input("a sequence needs at least one element".into()));
        }
        for (i, e) in elements.iter().enumerate() {
            if e.len() != k {
                return Err(Error::Input(format!(
                    "element {} has {} coordinates, expected k={}",
                    i + 1,
                    e.len(),
                    k
                )));
            }
            if let Some(bound) = &declared_bound {
                if e.iter().any(|c| c > bound) {
                    return Err(Error::Input(format!(
                        "element {} exceeds the declared bound",
                        i + 1
                    )));
                }
            }
        }
        Ok(Self {
            k,
            elements,
            declared_bound,
        })
    }

    /// One-dimensional sequence from machine integers (test/CLI convenience).
    pub fn from_u64s(values: &[u64]) -> Result<Self> {
        Self::new(
            1,
            values.iter().map(|&v| vec![BigUint::from(v)]).collect(),
            None,
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<BigUint>] {
        &self.elements
    }

    /// Element by 1-based index.
    pub fn element(&self, index: usize) -> &[BigUint] {
        &self.elements[index - 1]
    }

    pub fn declared_bound(&self) -> Option<&BigUint> {
        self.declared_bound.as_ref()
    }

    pub fn max_coordinate(&self) -> BigUint {
        let mut max = BigUint::zero();
        for e in &self.elements {
            for c in e {
                if *c > max {
                    max = c.clone();
                }
            }
        }
        max
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sequence serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid sequence JSON: {e}")))
    }
}

impl Serialize for Sequence {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = SequenceRepr {
            k: self.k,
            n: self.n(),
            elements: self
                .elements
                .iter()
                .map(|e| e.iter().map(|c| c.to_str_radix(10)).collect())
                .collect(),
            bound: self.declared_bound.as_ref().map(|b| b.to_str_radix(10)),
        };
        repr.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Sequence {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = SequenceRepr::deserialize(de)?;
        if repr.n != repr.elements.len() {
            return Err(D::Error::custom(format!(
                "declared n={} but {} elements present",
                repr.n,
                repr.elements.len()
            )));
        }
        let elements = repr
            .elements
            .iter()
            .map(|e| {
                e.iter()
                    .map(|c| parse_biguint(c))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let bound = repr
            .bound
            .as_deref()
            .map(parse_biguint)
            .transpose()
            .map_err(D::Error::custom)?;
        Sequence::new(repr.k, elements, bound).map_err(D::Error::custom)
    }
}

/// The pair `(lambda, n)` defining the family of subsets of `{1, ..., n}`
/// of size at most `floor(lambda * n)`, with `lambda` an exact rational in
/// `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    lambda: BigRational,
    n: usize,
}

impl FamilySpec {
    pub fn new(lambda: BigRational, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("family needs n >= 1".into()));
        }
        if lambda <= BigRational::zero() || lambda > BigRational::one() {
            return Err(Error::Input(format!(
                "lambda must lie in (0, 1], got {lambda}"
            )));
        }
        Ok(Self { lambda, n })
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `floor(lambda * n)` in exact rational arithmetic.
    pub fn max_size(&self) -> usize {
        let prod = &self.lambda * BigRational::from_integer(BigInt::from(self.n));
        prod.floor()
            .to_integer()
            .to_usize()
            .expect("floor(lambda*n) <= n fits usize")
    }

    /// Exact count of subsets of `{1, ..., n}` with size at most
    /// `floor(lambda * n)`.
    pub fn family_size(&self) -> BigUint {
        let cap = self.max_size();
        let mut total = BigUint::zero();
        for i in 0..=cap {
            total += binomial(self.n as u64, i as u64);
        }
        total
    }
}

/// Exact count of subsets of `{1, ..., n}` with size at most
/// `floor(lambda * n)`.
pub fn family_size(spec: &FamilySpec) -> BigUint {
    spec.family_size()
}

/// A sorted, duplicate-free set of 1-based indices.
///
/// Sets order by cardinality first and then lexicographically by their
/// sorted elements; this is the ordering used for canonical collision
/// witnesses throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Coordinate-wise sum of the elements selected by `a`; the empty set sums
/// to the zero vector.
pub fn subset_sum(seq: &Sequence, a: &IndexSet) -> Result<Vec<BigUint>> {
    let mut sum = vec![BigUint::zero(); seq.k()];
    for idx in a.iter() {
        if idx == 0 || idx > seq.n() {
            return Err(Error::Input(format!(
                "index {idx} out of range 1..={}",
                seq.n()
            )));
        }
        for (s, c) in sum.iter_mut().zip(seq.element(idx)) {
            *s += c;
        }
    }
    Ok(sum)
}

/// Binomial coefficient `C(n, k)` as an exact big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

/// Base-2 binary entropy `h(x) = -x log2 x - (1-x) log2 (1-x)` with the
/// `0 log 0 = 0` convention at the endpoints.
pub fn binary_entropy(x: &BigRational) -> Result<f64> {
    if x < &BigRational::zero() || x > &BigRational::one() {
        return Err(Error::Input(format!(
            "binary entropy needs x in [0, 1], got {x}"
        )));
    }
    let xf = ratio_to_f64(x);
    let yf = ratio_to_f64(&(BigRational::one() - x));
    Ok(neg_p_log2_p(xf) + neg_p_log2_p(yf))
}

/// Three-outcome entropy `H(lambda, lambda, 1 - 2 lambda)` in bits, defined
/// on `(0, 1/3]` and strictly increasing there.
pub fn f_entropy(lambda: &BigRational) -> Result<f64> {
    check_f_domain(lambda)?;
    let lf = ratio_to_f64(lambda);
    let rest = BigRational::one() - lambda * BigRational::from_integer(BigInt::from(2));
    Ok(2.0 * neg_p_log2_p(lf) + neg_p_log2_p(ratio_to_f64(&rest)))
}

pub(crate) fn check_f_domain(lambda: &BigRational) -> Result<()> {
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    if lambda <= &BigRational::zero() || lambda > &third {
        return Err(Error::Input(format!(
            "three-outcome entropy needs lambda in (0, 1/3], got {lambda}"
        )));
    }
    Ok(())
}

fn neg_p_log2_p(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64()
        .expect("rational in working range converts to f64")
}

/// Parse an exact rational from `"p/q"`, a decimal like `"0.25"`, or an
/// integer string.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("invalid rational numerator: {num}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("invalid rational denominator: {den}")))?;
        if d.is_zero() {
            return Err(Error::Input("rational denominator is zero".into()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{}{}", if int.is_empty() { "0" } else { int }, frac);
        let n: BigInt = digits
            .parse()
            .map_err(|_| Error::Input(format!("invalid decimal: {s}")))?;
        let d = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Input(format!("invalid rational: {s}")))?;
    Ok(BigRational::from_integer(n))
}

pub fn parse_biguint(s: &str) -> Result<BigUint> {
    let s = s.trim();
    BigUint::parse_bytes(s.as_bytes(), 10)
        .ok_or_else(|| Error::Input(format!("invalid nonnegative integer: {s}")))
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    let s = s.trim();
    s.parse()
        .map_err(|_| Error::Input(format!("invalid integer: {s}")))
}

/// Ceiling of `lambda * n` as an exact integer (several bound formulas use
/// the ceiling even though family membership caps at the floor).
pub fn ceil_lambda_n(lambda: &BigRational, n: u64) -> BigInt {
    (lambda * BigRational::from_integer(BigInt::from(n)))
        .ceil()
        .to_integer()
}
