//! An enquirer that deviates from the honest query.
//!
//! Instead of an indicator vector the attacker encrypts arbitrary
//! coefficients `x̃`. An honest responder's answer then decrypts to
//! `Σ x̃_i v_i z_i mod N`, where `z_i` is the membership bit of index `i`.
//! Choosing `x̃_{w1} = q` and `x̃_{w2} = p` separates the two memberships
//! into the residues of the decryption modulo `p` and `q`; this is as much
//! as a single query can reveal reliably.

pub mod enumerate;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::matchmaking::{self, InterestSet, QueryVector, World};
use crate::network::FleetContribution;
use crate::paillier::{self, bounded_bezout_pairs, KeyPair, Plaintext, PrivateKey, PublicKey};
use crate::{Error, Result};

pub use enumerate::{
    applicable_bound, enumerate_solutions, enumerate_solutions_distributed, free_variable_bound,
    split_bound, Bound, BoundKind, SolutionSet, ENUMERATION_BUDGET, MAX_STORED_TUPLES,
};

/// A query vector encrypting arbitrary coefficients.
#[derive(Clone, Debug)]
pub struct MaliciousQuery {
    pub coefficients: Vec<BigUint>,
    pub randomizers: Vec<BigUint>,
    pub query: QueryVector,
}

/// Encrypts each coefficient under a fresh unit randomizer.
pub fn craft_query<R: Rng + ?Sized>(
    pk: &PublicKey,
    coefficients: &[BigUint],
    rng: &mut R,
) -> Result<MaliciousQuery> {
    if coefficients.iter().any(|c| c >= pk.modulus()) {
        return Err(Error::CoefficientOverflow);
    }
    let mut randomizers = Vec::with_capacity(coefficients.len());
    let mut entries = Vec::with_capacity(coefficients.len());
    for c in coefficients {
        let r = paillier::sample_unit(pk, rng)?;
        entries.push(paillier::encrypt(pk, &Plaintext::new(c.clone()), &r)?);
        randomizers.push(r.into_inner());
    }
    Ok(MaliciousQuery {
        coefficients: coefficients.to_vec(),
        randomizers,
        query: QueryVector::new(entries),
    })
}

/// `Σ x̃_i v_i z_i mod N` for a two-party response.
pub fn predict_decryption(
    n: &BigUint,
    coefficients: &[BigUint],
    multipliers: &[BigUint],
    memberships: &[bool],
) -> Result<BigUint> {
    for len in [multipliers.len(), memberships.len()] {
        if len != coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: coefficients.len(),
                actual: len,
            });
        }
    }
    let mut sum = BigUint::zero();
    for ((c, v), &z) in coefficients.iter().zip(multipliers).zip(memberships) {
        if z {
            sum += c * v;
        }
    }
    Ok(sum % n)
}

/// `Σ_i Σ_j x̃_i ω_i^j mod N` over the multipliers actually drawn along a
/// walk. A fleet that drew nothing for index `i` has `z_i^j = 0`.
pub fn predict_distributed_decryption(
    n: &BigUint,
    coefficients: &[BigUint],
    contributions: &[FleetContribution],
) -> Result<BigUint> {
    let mut sum = BigUint::zero();
    for c in contributions {
        let x = coefficients
            .get(c.index.wrapping_sub(1))
            .ok_or(Error::IndexOutOfRange {
                index: c.index,
                size: coefficients.len(),
            })?;
        sum += x * &c.omega;
    }
    Ok(sum % n)
}

/// Bézout coefficients `ᾱq + β̄p = 1` and the decryption `D` split as
/// `α = Dᾱ mod N`, `β = Dβ̄ mod N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutSplit {
    pub alpha_bar: BigInt,
    pub beta_bar: BigInt,
    pub alpha: BigUint,
    pub beta: BigUint,
}

impl BezoutSplit {
    /// Both coefficient pairs with `|ᾱ| < p` and `|β̄| < q`.
    pub fn candidates(sk: &PrivateKey, decryption: &BigUint) -> Vec<BezoutSplit> {
        let (p, q) = (sk.p(), sk.q());
        let n = BigInt::from(p * q);
        let d = BigInt::from(decryption.clone());
        let reduce = |v: BigInt| v.mod_floor(&n).to_biguint().expect("non-negative");
        bounded_bezout_pairs(q, p)
            .into_iter()
            .map(|(alpha_bar, beta_bar)| BezoutSplit {
                alpha: reduce(&d * &alpha_bar),
                beta: reduce(&d * &beta_bar),
                alpha_bar,
                beta_bar,
            })
            .collect()
    }
}

/// Membership bits for `(w1, w2)` recovered from a decryption of a
/// `x̃_{w1} = q, x̃_{w2} = p` query.
pub fn decode_split(sk: &PrivateKey, decryption: &BigUint) -> (bool, bool) {
    (
        !(decryption % sk.p()).is_zero(),
        !(decryption % sk.q()).is_zero(),
    )
}

#[derive(Clone, Debug)]
pub struct BezoutOutcome {
    pub targets: [usize; 2],
    pub decoded: [bool; 2],
    pub ground_truth: [bool; 2],
    pub decryption: BigUint,
    pub split: Vec<BezoutSplit>,
    /// Upper bound on the chance that a decoded bit is wrong: a bit is lost
    /// only when its multiplier is a multiple of the prime it is read under.
    pub failure_bound: f64,
}

impl BezoutOutcome {
    pub fn is_correct(&self) -> bool {
        self.decoded == self.ground_truth
    }
}

/// Runs one two-party round against an honest responder holding
/// `responder` and decodes both memberships from the single answer.
pub fn bezout_attack<R: Rng + ?Sized>(
    attacker: &KeyPair,
    world: World,
    w1: usize,
    w2: usize,
    responder: &InterestSet,
    rng: &mut R,
) -> Result<BezoutOutcome> {
    if w1 == w2 {
        return Err(Error::SameTargets);
    }
    world.check_index(w1)?;
    world.check_index(w2)?;
    let (pk, sk) = (&attacker.public, &attacker.private);
    let mut coefficients = vec![BigUint::zero(); world.size()];
    coefficients[w1 - 1] = sk.q().clone();
    coefficients[w2 - 1] = sk.p().clone();
    let crafted = craft_query(pk, &coefficients, rng)?;
    let response = matchmaking::return_response(pk, &crafted.query, responder, rng)?;
    let decryption = paillier::decrypt(sk, pk, &response.y)?.into_inner();
    let (z1, z2) = decode_split(sk, &decryption);
    let inverse = |prime: &BigUint| prime.to_f64().map_or(0.0, |v| 1.0 / v);
    Ok(BezoutOutcome {
        targets: [w1, w2],
        decoded: [z1, z2],
        ground_truth: [responder.contains(w1), responder.contains(w2)],
        split: BezoutSplit::candidates(sk, &decryption),
        decryption,
        failure_bound: inverse(sk.p()) + inverse(sk.q()),
    })
}

/// Attack report: `{"mode", "targets", "decoded", "ground_truth", "key_bits"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackReport {
    pub mode: String,
    pub targets: [usize; 2],
    pub decoded: [bool; 2],
    pub ground_truth: [bool; 2],
    pub key_bits: u32,
}

impl AttackReport {
    pub fn from_outcome(outcome: &BezoutOutcome, key_bits: u32) -> Self {
        AttackReport {
            mode: "bezout".into(),
            targets: outcome.targets,
            decoded: outcome.decoded,
            ground_truth: outcome.ground_truth,
            key_bits,
        }
    }
}

/// Result of counting the solutions an attacker cannot tell apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeVarReport {
    pub mode: String,
    pub modulus: u64,
    pub coefficients: Vec<u64>,
    pub target: u64,
    pub fleets: usize,
    pub count: u64,
    pub bound: Option<u128>,
    pub bound_kind: Option<BoundKind>,
    pub bound_holds: Option<bool>,
}

/// Enumerates `Ξ` and compares its size with the applicable bound.
pub fn free_variable_report(
    n: u64,
    coefficients: &[u64],
    target: u64,
    fleets: usize,
) -> Result<FreeVarReport> {
    let set = enumerate_solutions_distributed(n, coefficients, target, fleets)?;
    let bound = applicable_bound(n, coefficients, fleets as u64);
    Ok(FreeVarReport {
        mode: "freevar".into(),
        modulus: n,
        coefficients: set.coefficients,
        target,
        fleets,
        count: set.count,
        bound: bound.map(|b| b.value),
        bound_kind: bound.map(|b| b.kind),
        bound_holds: bound.map(|b| u128::from(set.count) >= b.value),
    })
}

/// Memberships and multipliers laid out per index, as
/// [`predict_decryption`] expects.
pub fn align_multipliers(
    world: World,
    drawn: &[matchmaking::Multiplier],
) -> (Vec<BigUint>, Vec<bool>) {
    let by_index: BTreeMap<usize, &BigUint> = drawn.iter().map(|m| (m.index, &m.value)).collect();
    (1..=world.size())
        .map(|i| match by_index.get(&i) {
            Some(v) => ((*v).clone(), true),
            None => (BigUint::zero(), false),
        })
        .unzip()
}
