//! Fixed-width wire encoding.
//!
//! Query: an 8-byte big-endian entry count followed by one big-endian field
//! of [`PublicKey::ciphertext_width`] bytes per entry. Response: a single
//! field of the same width, no header.

use num_bigint::BigUint;

use super::{QueryVector, Response};
use crate::paillier::{Ciphertext, PublicKey};
use crate::{Error, Result};

pub const QUERY_HEADER_BYTES: usize = 8;

fn put_field(out: &mut Vec<u8>, value: &BigUint, width: usize) {
    let bytes = value.to_bytes_be();
    debug_assert!(bytes.len() <= width);
    out.extend(std::iter::repeat(0u8).take(width - bytes.len()));
    out.extend_from_slice(&bytes);
}

fn read_field(pk: &PublicKey, bytes: &[u8]) -> Result<Ciphertext> {
    let value = BigUint::from_bytes_be(bytes);
    if &value >= pk.modulus_squared() {
        return Err(Error::Wire("ciphertext field is not below N^2".into()));
    }
    Ok(Ciphertext::new(value))
}

pub fn query_message_bytes(pk: &PublicKey, q: &QueryVector) -> usize {
    QUERY_HEADER_BYTES + q.len() * pk.ciphertext_width()
}

pub fn response_message_bytes(pk: &PublicKey) -> usize {
    pk.ciphertext_width()
}

pub fn encode_query(pk: &PublicKey, q: &QueryVector) -> Vec<u8> {
    let width = pk.ciphertext_width();
    let mut out = Vec::with_capacity(query_message_bytes(pk, q));
    out.extend_from_slice(&(q.len() as u64).to_be_bytes());
    for c in q.entries() {
        put_field(&mut out, c.value(), width);
    }
    out
}

pub fn decode_query(pk: &PublicKey, bytes: &[u8]) -> Result<QueryVector> {
    let header: [u8; QUERY_HEADER_BYTES] = bytes
        .get(..QUERY_HEADER_BYTES)
        .and_then(|h| h.try_into().ok())
        .ok_or_else(|| Error::Wire("truncated query header".into()))?;
    let count = usize::try_from(u64::from_be_bytes(header))
        .map_err(|_| Error::Wire("entry count overflows".into()))?;
    let width = pk.ciphertext_width();
    let body = &bytes[QUERY_HEADER_BYTES..];
    if Some(body.len()) != count.checked_mul(width) {
        return Err(Error::Wire(format!(
            "expected {count} fields of {width} bytes, got {} body bytes",
            body.len()
        )));
    }
    let entries = body
        .chunks_exact(width)
        .map(|chunk| read_field(pk, chunk))
        .collect::<Result<Vec<_>>>()?;
    Ok(QueryVector::new(entries))
}

pub fn encode_response(pk: &PublicKey, r: &Response) -> Vec<u8> {
    let mut out = Vec::with_capacity(pk.ciphertext_width());
    put_field(&mut out, r.y.value(), pk.ciphertext_width());
    out
}

pub fn decode_response(pk: &PublicKey, bytes: &[u8]) -> Result<Response> {
    if bytes.len() != pk.ciphertext_width() {
        return Err(Error::Wire(format!(
            "response must be {} bytes, got {}",
            pk.ciphertext_width(),
            bytes.len()
        )));
    }
    Ok(Response {
        y: read_field(pk, bytes)?,
    })
}
