//! Constructive search: a seeded sample-and-repair constructor (draw a
//! slightly longer random sequence, delete a small hitting set of the
//! colliding pairs) and an exact minimal-bound search by depth-first
//! enumeration with incremental collision pruning.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{pigeonhole_exact_min_m, BoundEvaluator};
use crate::model::{FamilySpec, Sequence};
use crate::verifier::{
    enumerate_collisions, verify, Engine, PairConstraint, VerifyOptions, Witness,
};
use crate::{Error, Result};

/// Counter-based generator: output `i` is a pure function of `(seed, i)`,
/// so streams are reproducible across platforms and retries can derive
/// independent streams cheaply.
#[derive(Debug, Clone)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform-ish value in `[0, m)` by rejection-free modular reduction
    /// over 64 guard bits beyond the width of `m`.
    pub fn next_below(&mut self, m: &BigUint) -> BigUint {
        assert!(!m.is_zero(), "modulus must be positive");
        let words = (m.bits() + 64).div_ceil(64);
        let mut bytes = Vec::with_capacity(words as usize * 8);
        for _ in 0..words {
            bytes.extend_from_slice(&self.next_u64().to_le_bytes());
        }
        BigUint::from_bytes_le(&bytes) % m
    }
}

fn retry_seed(seed: u64, attempt: u64) -> u64 {
    mix(seed ^ attempt.wrapping_mul(GOLDEN).rotate_left(17))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Found,
    Exhausted,
    Failed,
}

/// Result of a randomized or exact search run. `elapsed` is runtime
/// metadata and deliberately excluded from serialization so that outcomes
/// with equal parameters and seed serialize byte-identically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<Sequence>,
    pub attempts: u64,
    pub removed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    /// Smallest admissible bound, exact mode only (decimal string).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_min: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    #[serde(skip, default)]
    pub elapsed: Duration,
}

impl SearchOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serialization cannot fail")
    }
}

#[derive(Debug, Clone)]
pub struct RandomConfig {
    pub max_retries: u64,
    /// Cap on collisions collected per attempt; an attempt whose collision
    /// list is truncated is treated as unrepairable and retried.
    pub collision_limit: usize,
    pub verify: VerifyOptions,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_retries: 32,
            collision_limit: 4096,
            verify: VerifyOptions::default(),
        }
    }
}

/// Sample `n + tau` elements uniformly from `[1, M]^k`, list every
/// colliding disjoint pair under the size cap for `lambda` at the longer
/// length, and delete a greedy hitting set of at most `tau` indices; the
/// survivor prefix of length `n` is re-verified before it is returned.
///
/// Outcomes are a pure function of `(n, k, lambda, m, seed, config)`.
pub fn random_construct(
    n: usize,
    k: usize,
    lambda: &BigRational,
    m: &BigUint,
    seed: u64,
    cfg: &RandomConfig,
) -> Result<SearchOutcome> {
    let started = Instant::now();
    if n == 0 || k == 0 {
        return Err(Error::Input(
            "random construction needs n >= 1 and k >= 1".into(),
        ));
    }
    if m.is_zero() {
        return Err(Error::Input("sampling bound M must be at least 1".into()));
    }
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    if lambda <= &BigRational::zero() || lambda >= &third {
        return Err(Error::Domain(format!(
            "sample-and-repair construction needs lambda in (0, 1/3), got {lambda}"
        )));
    }
    let tau = BoundEvaluator::default().tau_lambda(lambda)? as usize;
    let n_prime = n + tau;
    let warning = {
        let floor_bound = pigeonhole_exact_min_m(n, k, lambda)?;
        if *m < floor_bound {
            Some(format!(
                "M={m} is below the exact pigeonhole bound {floor_bound}; success is impossible \
                 or near-impossible"
            ))
        } else {
            None
        }
    };

    let constraint_prime = PairConstraint::family(lambda.clone());
    let constraint_final = PairConstraint::family(lambda.clone());

    for attempt in 0..cfg.max_retries {
        let mut rng = CounterRng::new(retry_seed(seed, attempt));
        let elements: Vec<Vec<BigUint>> = (0..n_prime)
            .map(|_| (0..k).map(|_| rng.next_below(m) + BigUint::one()).collect())
            .collect();
        let sampled = Sequence::new(k, elements, Some(m.clone()))?;
        let (collisions, complete) = enumerate_collisions(
            &sampled,
            &constraint_prime,
            &cfg.verify,
            cfg.collision_limit,
        )?;
        if !complete {
            continue;
        }
        let hits = greedy_hitting_set(&collisions, n_prime);
        if hits.len() > tau {
            continue;
        }
        // Keep the first n surviving indices in input order.
        let survivors: Vec<Vec<BigUint>> = (1..=n_prime)
            .filter(|i| !hits.contains(i))
            .take(n)
            .map(|i| sampled.element(i).to_vec())
            .collect();
        debug_assert_eq!(survivors.len(), n);
        let candidate = Sequence::new(k, survivors, Some(m.clone()))?;
        let report = verify(&candidate, &constraint_final, &cfg.verify)?;
        if report.is_distinct() {
            return Ok(SearchOutcome {
                status: SearchStatus::Found,
                sequence: Some(candidate),
                attempts: attempt + 1,
                removed: hits.len() as u64,
                rng_seed: Some(seed),
                m_min: None,
                warning,
                elapsed: started.elapsed(),
            });
        }
    }
    Ok(SearchOutcome {
        status: SearchStatus::Failed,
        sequence: None,
        attempts: cfg.max_retries,
        removed: 0,
        rng_seed: Some(seed),
        m_min: None,
        warning,
        elapsed: started.elapsed(),
    })
}

/// Pick the index covering the most uncovered witnesses, repeat; ties go to
/// the smallest index so the repair is deterministic.
fn greedy_hitting_set(witnesses: &[Witness], n: usize) -> Vec<usize> {
    let mut hits: Vec<usize> = Vec::new();
    let mut uncovered: Vec<&Witness> = witnesses.iter().collect();
    while !uncovered.is_empty() {
        let mut counts = vec![0usize; n + 1];
        for w in &uncovered {
            for i in w.a1.iter().chain(w.a2.iter()) {
                counts[i] += 1;
            }
        }
        let best = (1..=n)
            .max_by_key(|&i| (counts[i], std::cmp::Reverse(i)))
            .expect("n >= 1");
        hits.push(best);
        uncovered.retain(|w| !w.a1.contains(best) && !w.a2.contains(best));
    }
    hits.sort_unstable();
    hits
}

#[derive(Debug, Clone)]
pub struct ExactConfig {
    /// Pre-check: `(m_max + 1)^(n k)` must not exceed this.
    pub space_limit: f64,
    /// Runtime cap on visited assignment nodes.
    pub node_limit: u64,
    pub verify: VerifyOptions,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            space_limit: 1e12,
            node_limit: 2_000_000_000,
            verify: VerifyOptions {
                engine: Engine::Exhaustive,
                ..VerifyOptions::default()
            },
        }
    }
}

/// Smallest `M <= m_max` admitting a sum-distinct `M`-bounded sequence
/// under the family cap, by depth-first search over lexicographically
/// nondecreasing element tuples with incremental collision pruning. The
/// witness is the lexicographically least sequence at the minimal `M` and
/// is certified by an independent exhaustive verification pass.
pub fn exact_min_m(
    n: usize,
    k: usize,
    lambda: &BigRational,
    m_max: u64,
    cfg: &ExactConfig,
) -> Result<SearchOutcome> {
    let started = Instant::now();
    if n == 0 || k == 0 {
        return Err(Error::Input("exact search needs n >= 1 and k >= 1".into()));
    }
    let spec = FamilySpec::new(lambda.clone(), n)?;
    let cap = spec.max_size();
    let space = ((m_max + 1) as f64).powi((n * k) as i32);
    if !space.is_finite() || space > cfg.space_limit {
        return Err(Error::Capacity(format!(
            "search space (m_max+1)^(n*k) = {space:.3e} exceeds the limit {:.3e}",
            cfg.space_limit
        )));
    }

    if cap == 0 {
        // Only the empty set must be distinct; the all-zeros sequence works.
        let seq = Sequence::new(k, vec![vec![BigUint::zero(); k]; n], Some(BigUint::zero()))?;
        return Ok(SearchOutcome {
            status: SearchStatus::Found,
            sequence: Some(seq),
            attempts: 1,
            removed: 0,
            rng_seed: None,
            m_min: Some("0".into()),
            warning: None,
            elapsed: started.elapsed(),
        });
    }

    let m_lo = pigeonhole_exact_min_m(n, k, lambda)?
        .to_u64()
        .ok_or_else(|| Error::Capacity("pigeonhole bound exceeds u64 range".into()))?;
    let mut nodes: u64 = 0;
    let mut attempts = 0u64;
    for m in m_lo..=m_max {
        attempts += 1;
        let mut elements: Vec<Vec<u64>> = Vec::with_capacity(n);
        if dfs_assign(&mut elements, n, k, cap, m, &mut nodes, cfg.node_limit)? {
            let seq = Sequence::new(
                k,
                elements
                    .iter()
                    .map(|e| e.iter().map(|&c| BigUint::from(c)).collect())
                    .collect(),
                Some(BigUint::from(m)),
            )?;
            let report = verify(&seq, &PairConstraint::family(lambda.clone()), &cfg.verify)?;
            assert!(
                report.is_distinct(),
                "internal error: search witness failed verification"
            );
            return Ok(SearchOutcome {
                status: SearchStatus::Found,
                sequence: Some(seq),
                attempts,
                removed: 0,
                rng_seed: None,
                m_min: Some(m.to_string()),
                warning: None,
                elapsed: started.elapsed(),
            });
        }
    }
    Ok(SearchOutcome {
        status: SearchStatus::Exhausted,
        sequence: None,
        attempts,
        removed: 0,
        rng_seed: None,
        m_min: None,
        warning: None,
        elapsed: started.elapsed(),
    })
}

/// Lexicographic successor iteration over `[0, m]^k` vectors.
fn first_vec(k: usize) -> Vec<u64> {
    vec![0; k]
}

fn next_vec(v: &mut [u64], m: u64) -> bool {
    for c in v.iter_mut().rev() {
        if *c < m {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

fn dfs_assign(
    elements: &mut Vec<Vec<u64>>,
    n: usize,
    k: usize,
    cap: usize,
    m: u64,
    nodes: &mut u64,
    node_limit: u64,
) -> Result<bool> {
    if elements.len() == n {
        return Ok(true);
    }
    let mut candidate = match elements.last() {
        // Elements are canonicalized to nondecreasing order; duplicates are
        // pruned by the collision check whenever the cap is at least 1.
        Some(prev) => prev.clone(),
        None => first_vec(k),
    };
    loop {
        *nodes += 1;
        if *nodes > node_limit {
            return Err(Error::Capacity(format!(
                "exact search exceeded the node limit of {node_limit}"
            )));
        }
        if !creates_collision(elements, &candidate, cap) {
            elements.push(candidate.clone());
            if dfs_assign(elements, n, k, cap, m, nodes, node_limit)? {
                return Ok(true);
            }
            elements.pop();
        }
        if !next_vec(&mut candidate, m) {
            return Ok(false);
        }
    }
}

/// Does appending `new` to the (collision-free) prefix create a colliding
/// pair involving the new index? Signed enumeration over the prefix with
/// the new element fixed on one side, covering both orientations.
fn creates_collision(prefix: &[Vec<u64>], new: &[u64], cap: usize) -> bool {
    if cap == 0 {
        return false;
    }
    let target: Vec<i128> = new.iter().map(|&c| c as i128).collect();
    // New index on the positive side: prefix must reach -a_new with at
    // least one negative pick (the negative side must be nonempty).
    let neg_target: Vec<i128> = target.iter().map(|c| -c).collect();
    if prefix_reaches(prefix, &neg_target, 0, cap - 1, cap, true) {
        return true;
    }
    // New index on the negative side: its side is already nonempty.
    prefix_reaches(prefix, &target, 0, cap, cap - 1, false)
}

fn prefix_reaches(
    prefix: &[Vec<u64>],
    target: &[i128],
    idx: usize,
    pos_left: usize,
    neg_left: usize,
    need_neg: bool,
) -> bool {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        prefix: &[Vec<u64>],
        acc: &mut [i128],
        target: &[i128],
        idx: usize,
        pos_left: usize,
        neg_left: usize,
        used_neg: bool,
        need_neg: bool,
    ) -> bool {
        if idx == prefix.len() {
            return (!need_neg || used_neg) && *acc == *target;
        }
        if rec(
            prefix,
            acc,
            target,
            idx + 1,
            pos_left,
            neg_left,
            used_neg,
            need_neg,
        ) {
            return true;
        }
        if pos_left > 0 {
            for (a, c) in acc.iter_mut().zip(&prefix[idx]) {
                *a += *c as i128;
            }
            let hit = rec(
                prefix,
                acc,
                target,
                idx + 1,
                pos_left - 1,
                neg_left,
                used_neg,
                need_neg,
            );
            for (a, c) in acc.iter_mut().zip(&prefix[idx]) {
                *a -= *c as i128;
            }
            if hit {
                return true;
            }
        }
        if neg_left > 0 {
            for (a, c) in acc.iter_mut().zip(&prefix[idx]) {
                *a -= *c as i128;
            }
            let hit = rec(
                prefix,
                acc,
                target,
                idx + 1,
                pos_left,
                neg_left - 1,
                true,
                need_neg,
            );
            for (a, c) in acc.iter_mut().zip(&prefix[idx]) {
                *a += *c as i128;
            }
            if hit {
                return true;
            }
        }
        false
    }
    let mut acc = vec![0i128; target.len()];
    rec(
        prefix, &mut acc, target, idx, pos_left, neg_left, false, need_neg,
    )
}
