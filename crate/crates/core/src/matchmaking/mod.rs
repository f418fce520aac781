//! Two-party encrypted membership query.
//!
//! The enquirer encrypts an indicator vector over all road/time-window pairs
//! ([`submit_query`]). The responder raises the entries at its own interest
//! indices to random nonzero powers and multiplies them together
//! ([`return_response`]). The product decrypts to a nonzero value exactly
//! when the queried index is one of the responder's interests
//! ([`interpret`]).
//!
//! Indices are 1-based everywhere in the public interface.

pub mod scenario;
pub mod wire;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigUint, RandBigInt};
use num_traits::One;
use rand::Rng;

use crate::paillier::{self, Ciphertext, Plaintext, PrivateKey, PublicKey};
use crate::{Error, Result};

pub use scenario::{FleetInterests, Scenario};
pub use wire::{
    decode_query, decode_response, encode_query, encode_response, query_message_bytes,
    response_message_bytes, QUERY_HEADER_BYTES,
};

/// The grid of roads × time windows, flattened row-major:
/// `w = (road − 1)·slots + slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct World {
    num_roads: usize,
    num_slots: usize,
}

impl World {
    pub fn new(num_roads: usize, num_slots: usize) -> Result<Self> {
        if num_roads == 0 || num_slots == 0 {
            return Err(Error::EmptyWorld);
        }
        Ok(World {
            num_roads,
            num_slots,
        })
    }

    pub fn num_roads(&self) -> usize {
        self.num_roads
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn size(&self) -> usize {
        self.num_roads * self.num_slots
    }

    pub fn check_index(&self, w: usize) -> Result<()> {
        if w == 0 || w > self.size() {
            return Err(Error::IndexOutOfRange {
                index: w,
                size: self.size(),
            });
        }
        Ok(())
    }

    pub fn index_of(&self, road: usize, slot: usize) -> Result<usize> {
        if road == 0 || road > self.num_roads {
            return Err(Error::IndexOutOfRange {
                index: road,
                size: self.num_roads,
            });
        }
        if slot == 0 || slot > self.num_slots {
            return Err(Error::IndexOutOfRange {
                index: slot,
                size: self.num_slots,
            });
        }
        Ok((road - 1) * self.num_slots + slot)
    }

    pub fn road_and_slot(&self, w: usize) -> Result<(usize, usize)> {
        self.check_index(w)?;
        Ok(((w - 1) / self.num_slots + 1, (w - 1) % self.num_slots + 1))
    }
}

/// The indices a fleet operates on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterestSet {
    world: World,
    members: BTreeSet<usize>,
}

impl InterestSet {
    pub fn new(world: World, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        for &w in &members {
            world.check_index(w)?;
        }
        Ok(InterestSet { world, members })
    }

    pub fn empty(world: World) -> Self {
        InterestSet {
            world,
            members: BTreeSet::new(),
        }
    }

    pub fn world(&self) -> World {
        self.world
    }

    pub fn contains(&self, w: usize) -> bool {
        self.members.contains(&w)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryVector {
    entries: Vec<Ciphertext>,
}

impl QueryVector {
    pub fn new(entries: Vec<Ciphertext>) -> Self {
        QueryVector { entries }
    }

    pub fn entries(&self) -> &[Ciphertext] {
        &self.entries
    }

    /// Entry for 1-based index `w`.
    pub fn entry(&self, w: usize) -> Option<&Ciphertext> {
        w.checked_sub(1).and_then(|i| self.entries.get(i))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Response {
    pub y: Ciphertext,
}

/// One responder-side random multiplier, recorded for replay and analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplier {
    pub index: usize,
    pub value: BigUint,
}

/// Encrypted indicator vector for index `w`, each entry under a fresh
/// randomizer.
pub fn submit_query<R: Rng + ?Sized>(
    pk: &PublicKey,
    world: World,
    w: usize,
    rng: &mut R,
) -> Result<QueryVector> {
    world.check_index(w)?;
    let entries = (1..=world.size())
        .map(|i| {
            let bit = Plaintext::from(u64::from(i == w));
            paillier::encrypt_fresh(pk, &bit, rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QueryVector { entries })
}

/// `y = ∏_{j ∈ W̄} x_j^{v_j} mod N²` with each `v_j` uniform in `{1, …, N−1}`.
pub fn return_response<R: Rng + ?Sized>(
    pk: &PublicKey,
    x: &QueryVector,
    interests: &InterestSet,
    rng: &mut R,
) -> Result<Response> {
    return_response_traced(pk, x, interests, rng).map(|(response, _)| response)
}

/// Like [`return_response`], also returning the multipliers drawn.
pub fn return_response_traced<R: Rng + ?Sized>(
    pk: &PublicKey,
    x: &QueryVector,
    interests: &InterestSet,
    rng: &mut R,
) -> Result<(Response, Vec<Multiplier>)> {
    let one = BigUint::one();
    let mut drawn = Vec::with_capacity(interests.len());
    let response = respond_with(pk, x, interests, |index| {
        let value = rng.gen_biguint_range(&one, pk.modulus());
        drawn.push(Multiplier {
            index,
            value: value.clone(),
        });
        value
    })?;
    Ok((response, drawn))
}

/// Answers with caller-chosen multipliers instead of random ones. Every
/// interest index must have an entry in `multipliers`, each in `{1, …, N−1}`.
pub fn respond_with_multipliers(
    pk: &PublicKey,
    x: &QueryVector,
    interests: &InterestSet,
    multipliers: &BTreeMap<usize, BigUint>,
) -> Result<Response> {
    for w in interests.iter() {
        match multipliers.get(&w) {
            Some(v) if *v >= BigUint::one() && v < pk.modulus() => {}
            _ => return Err(Error::CoefficientOverflow),
        }
    }
    respond_with(pk, x, interests, |w| multipliers[&w].clone())
}

fn respond_with(
    pk: &PublicKey,
    x: &QueryVector,
    interests: &InterestSet,
    mut draw: impl FnMut(usize) -> BigUint,
) -> Result<Response> {
    let expected = interests.world().size();
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: x.len(),
        });
    }
    let mut y = Ciphertext::one();
    for w in interests.iter() {
        let v = Plaintext::new(draw(w));
        let term = paillier::scalar_mul(pk, &x.entries[w - 1], &v)?;
        y = paillier::add_cipher(pk, &y, &term)?;
    }
    Ok(Response { y })
}

/// True iff the response decrypts to a nonzero value.
pub fn interpret(sk: &PrivateKey, pk: &PublicKey, response: &Response) -> Result<bool> {
    Ok(!paillier::decrypt(sk, pk, &response.y)?.is_zero())
}
