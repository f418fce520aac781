//! JSON key files.
//!
//! `{"n": hex, "p": hex, "q": hex, "lambda": hex, "mu": hex, "key_bits": int}`
//! with lowercase big-endian hex and no leading zeros. The public variant
//! carries only `n` and `key_bits`.

use num_bigint::BigUint;
use num_traits::Num;
use serde::{Deserialize, Serialize};

use super::{KeyPair, PublicKey};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyFile {
    pub n: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    pub key_bits: u32,
}

pub fn to_hex(v: &BigUint) -> String {
    v.to_str_radix(16)
}

pub fn from_hex(field: &str, s: &str) -> Result<BigUint> {
    let value =
        BigUint::from_str_radix(s, 16).map_err(|e| Error::KeyFile(format!("{field}: {e}")))?;
    if to_hex(&value) != s {
        return Err(Error::KeyFile(format!(
            "{field}: expected lowercase hex without leading zeros"
        )));
    }
    Ok(value)
}

impl KeyFile {
    pub fn from_keypair(keys: &KeyPair) -> Self {
        KeyFile {
            n: to_hex(keys.public.modulus()),
            p: Some(to_hex(keys.private.p())),
            q: Some(to_hex(keys.private.q())),
            lambda: Some(to_hex(keys.private.lambda())),
            mu: Some(to_hex(keys.private.mu())),
            key_bits: keys.public.key_bits(),
        }
    }

    pub fn from_public(pk: &PublicKey) -> Self {
        KeyFile {
            n: to_hex(pk.modulus()),
            p: None,
            q: None,
            lambda: None,
            mu: None,
            key_bits: pk.key_bits(),
        }
    }

    pub fn is_public_only(&self) -> bool {
        self.p.is_none() && self.q.is_none() && self.lambda.is_none() && self.mu.is_none()
    }

    pub fn public_key(&self) -> Result<PublicKey> {
        PublicKey::new(from_hex("n", &self.n)?, self.key_bits)
    }

    /// Rebuilds the key pair from the primes and checks every stored field
    /// against the recomputed values.
    pub fn keypair(&self) -> Result<KeyPair> {
        let field = |name: &str, v: &Option<String>| -> Result<BigUint> {
            let s = v
                .as_deref()
                .ok_or_else(|| Error::KeyFile(format!("missing private field `{name}`")))?;
            from_hex(name, s)
        };
        let keys = KeyPair::from_primes(field("p", &self.p)?, field("q", &self.q)?)?;
        let checks = [
            ("n", from_hex("n", &self.n)?, keys.public.modulus().clone()),
            (
                "lambda",
                field("lambda", &self.lambda)?,
                keys.private.lambda().clone(),
            ),
            ("mu", field("mu", &self.mu)?, keys.private.mu().clone()),
        ];
        for (name, stored, derived) in checks {
            if stored != derived {
                return Err(Error::KeyFile(format!("`{name}` does not match p and q")));
            }
        }
        if self.key_bits != keys.public.key_bits() {
            return Err(Error::KeyFile(format!(
                "key_bits {} does not match primes of {} bits",
                self.key_bits,
                keys.public.key_bits()
            )));
        }
        Ok(keys)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("key file serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_key_file_layout() {
        let keys = KeyPair::from_primes(5u32.into(), 7u32.into()).unwrap();
        let json = serde_json::to_string(&KeyFile::from_keypair(&keys)).unwrap();
        assert_eq!(
            json,
            r#"{"n":"23","p":"5","q":"7","lambda":"c","mu":"3","key_bits":3}"#
        );
        let public = serde_json::to_string(&KeyFile::from_public(&keys.public)).unwrap();
        assert_eq!(public, r#"{"n":"23","key_bits":3}"#);
    }

    #[test]
    fn round_trip_and_validation() {
        let keys = KeyPair::from_primes(5u32.into(), 7u32.into()).unwrap();
        let file = KeyFile::from_keypair(&keys);
        let back = KeyFile::from_json(&file.to_json())
            .unwrap()
            .keypair()
            .unwrap();
        assert_eq!(back, keys);

        let mut tampered = file.clone();
        tampered.mu = Some("4".into());
        assert!(matches!(tampered.keypair(), Err(Error::KeyFile(_))));

        let mut padded = file.clone();
        padded.n = "023".into();
        assert!(padded.public_key().is_err());

        let mut upper = file;
        upper.lambda = Some("C".into());
        assert!(upper.keypair().is_err());
    }

    #[test]
    fn public_only_file_has_no_private_key() {
        let keys = KeyPair::from_primes(5u32.into(), 7u32.into()).unwrap();
        let file = KeyFile::from_public(&keys.public);
        assert!(file.is_public_only());
        assert_eq!(file.public_key().unwrap(), keys.public);
        assert!(file.keypair().is_err());
    }
}
