//! Multi-fleet response along a loop walk.
//!
//! A running ciphertext `y` travels with the query. Each distinct interior
//! fleet, at its first visit, multiplies in `x_i^{ω_i}` for every index `i`
//! in its interest set with `ω_i` uniform in `{1, …, ⌊N/(|L|−2)⌋}`. The
//! coefficient accumulated on the queried index is then a sum of at most
//! `|L| − 2` terms each at most `⌊N/(|L|−2)⌋`, so it lies in `{1, …, N}`
//! whenever some fleet holds the index.
//!
//! The sum can only reach `N ≡ 0` when `|L| − 2` divides `N`. In that case
//! the fleet at the first interior position never draws the top value,
//! which keeps the sum strictly below `N`.

use std::collections::BTreeMap;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use super::walk::LoopWalk;
use crate::matchmaking::{InterestSet, QueryVector, Response};
use crate::paillier::{self, Ciphertext, Plaintext, PublicKey};
use crate::{Error, FleetId, Result};

/// Draw range for the per-index multipliers on a given walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaRange {
    /// `⌊N / (|L| − 2)⌋`.
    pub max: BigUint,
    /// Whether the first interior fleet must avoid drawing `max`.
    pub guarded: bool,
}

impl OmegaRange {
    pub fn for_walk(pk: &PublicKey, walk: &LoopWalk) -> Result<Self> {
        let interior = walk.len() - 2;
        let divisor = BigUint::from(interior);
        let (max, rem) = pk.modulus().div_rem(&divisor);
        if max.is_zero() {
            return Err(Error::WalkTooLong { interior });
        }
        let guarded = rem.is_zero();
        if guarded && max.is_one() {
            return Err(Error::BoundaryUnavoidable { interior });
        }
        Ok(OmegaRange { max, guarded })
    }

    fn draw<R: Rng + ?Sized>(&self, first_position: bool, rng: &mut R) -> BigUint {
        let one = BigUint::one();
        let upper = if self.guarded && first_position {
            self.max.clone()
        } else {
            &self.max + 1u32
        };
        rng.gen_biguint_range(&one, &upper)
    }
}

/// One multiplier drawn by a fleet on the walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FleetContribution {
    pub fleet: FleetId,
    pub index: usize,
    pub omega: BigUint,
}

/// The work one fleet does when the query reaches walk position `pos`.
/// Returns `y` unchanged on repeat visits.
#[allow(clippy::too_many_arguments)]
pub fn contribute<R: Rng + ?Sized>(
    pk: &PublicKey,
    x: &QueryVector,
    y: &Ciphertext,
    walk: &LoopWalk,
    pos: usize,
    interests: &InterestSet,
    range: &OmegaRange,
    rng: &mut R,
    trace: &mut Vec<FleetContribution>,
) -> Result<Ciphertext> {
    let expected = interests.world().size();
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: x.len(),
        });
    }
    if !walk.is_first_visit(pos) {
        return Ok(y.clone());
    }
    let fleet = walk.vertices()[pos];
    let mut y = y.clone();
    for i in interests.iter() {
        let omega = range.draw(pos == 1, rng);
        let term = paillier::scalar_mul(pk, &x.entries()[i - 1], &Plaintext::new(omega.clone()))?;
        y = paillier::add_cipher(pk, &y, &term)?;
        trace.push(FleetContribution {
            fleet,
            index: i,
            omega,
        });
    }
    Ok(y)
}

/// Runs the whole walk in-process and returns the final response.
pub fn dist_response<R: Rng + ?Sized>(
    pk: &PublicKey,
    x: &QueryVector,
    walk: &LoopWalk,
    interests_by_fleet: &BTreeMap<FleetId, InterestSet>,
    rng: &mut R,
) -> Result<Response> {
    dist_response_traced(pk, x, walk, interests_by_fleet, rng).map(|(r, _)| r)
}

/// Like [`dist_response`], also returning every multiplier drawn.
pub fn dist_response_traced<R: Rng + ?Sized>(
    pk: &PublicKey,
    x: &QueryVector,
    walk: &LoopWalk,
    interests_by_fleet: &BTreeMap<FleetId, InterestSet>,
    rng: &mut R,
) -> Result<(Response, Vec<FleetContribution>)> {
    let range = OmegaRange::for_walk(pk, walk)?;
    for fleet in walk.distinct_interior() {
        if !interests_by_fleet.contains_key(&fleet) {
            return Err(Error::MissingInterests(fleet));
        }
    }
    let mut y = Ciphertext::one();
    let mut trace = Vec::new();
    for pos in 1..walk.len() - 1 {
        let fleet = walk.vertices()[pos];
        y = contribute(
            pk,
            x,
            &y,
            walk,
            pos,
            &interests_by_fleet[&fleet],
            &range,
            rng,
            &mut trace,
        )?;
    }
    Ok((Response { y }, trace))
}
