//! Paillier cryptosystem with generator `g = N + 1`.
//!
//! Plaintexts live in `Z_N`, ciphertexts in `Z_{N²}`. Multiplying two
//! ciphertexts adds their plaintexts, raising a ciphertext to `k` scales its
//! plaintext by `k`. Keys are passed explicitly to every operation; neither
//! [`Plaintext`] nor [`Ciphertext`] carries a key reference.
//!
//! This is a research implementation: no constant-time arithmetic, no CCA
//! hardening.

pub mod keyfile;
pub mod metrics;
pub mod numtheory;
pub mod prime;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use crate::{Error, Result};

pub use keyfile::KeyFile;
pub use metrics::{op_counts, reset_op_counts, OpCounts};
pub use numtheory::{bezout, bounded_bezout_pairs, mod_inverse, Bezout};

/// Upper bound on prime-pair draws in [`generate_keys`].
pub const MAX_KEYGEN_ATTEMPTS: usize = 128;

/// Upper bound on rejection-sampling draws in [`sample_unit`].
pub const MAX_UNIT_DRAWS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PublicKey {
    n: BigUint,
    n_squared: BigUint,
    key_bits: u32,
}

impl PublicKey {
    pub fn new(n: BigUint, key_bits: u32) -> Result<Self> {
        if n < BigUint::from(15u32) {
            return Err(Error::InvalidModulus(format!("N = {n} is below 15")));
        }
        if n.is_even() {
            return Err(Error::InvalidModulus(format!("N = {n} is even")));
        }
        if key_bits == 0 {
            return Err(Error::InvalidModulus("key_bits must be positive".into()));
        }
        let n_squared = &n * &n;
        Ok(PublicKey {
            n,
            n_squared,
            key_bits,
        })
    }

    pub fn modulus(&self) -> &BigUint {
        &self.n
    }

    pub fn modulus_squared(&self) -> &BigUint {
        &self.n_squared
    }

    /// Bit length of each prime factor.
    pub fn key_bits(&self) -> u32 {
        self.key_bits
    }

    /// Width in bytes of a fixed-width ciphertext field, `ceil(bits(N²) / 8)`.
    pub fn ciphertext_width(&self) -> usize {
        self.n_squared.bits().div_ceil(8) as usize
    }

    fn check_plaintext(&self, t: &Plaintext) -> Result<()> {
        if t.0 >= self.n {
            return Err(Error::PlaintextOverflow);
        }
        Ok(())
    }

    fn check_ciphertext(&self, c: &Ciphertext) -> Result<()> {
        if c.0 >= self.n_squared {
            return Err(Error::CiphertextOutOfRange);
        }
        Ok(())
    }

    pub fn is_unit(&self, r: &BigUint) -> bool {
        !r.is_zero() && r < &self.n && r.gcd(&self.n).is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivateKey {
    p: BigUint,
    q: BigUint,
    lambda: BigUint,
    mu: BigUint,
}

impl PrivateKey {
    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn lambda(&self) -> &BigUint {
        &self.lambda
    }

    pub fn mu(&self) -> &BigUint {
        &self.mu
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyPair {
    pub public: PublicKey,
    pub private: PrivateKey,
}

impl KeyPair {
    /// Builds the key pair for a given prime pair. Both inputs are checked
    /// for primality (exactly below 2^64).
    pub fn from_primes(p: BigUint, q: BigUint) -> Result<Self> {
        let mut rng = rand::thread_rng();
        for (name, v) in [("p", &p), ("q", &q)] {
            if !prime::is_prime(v, &mut rng) {
                return Err(Error::InvalidPrimes(format!("{name} = {v} is not prime")));
            }
        }
        Self::from_prime_pair(p, q)
    }

    fn from_prime_pair(p: BigUint, q: BigUint) -> Result<Self> {
        if p == q {
            return Err(Error::InvalidPrimes("p and q must differ".into()));
        }
        let one = BigUint::one();
        let n = &p * &q;
        let phi = (&p - &one) * (&q - &one);
        if !n.gcd(&phi).is_one() {
            return Err(Error::InvalidPrimes(format!(
                "gcd(pq, (p-1)(q-1)) != 1 for p = {p}, q = {q}"
            )));
        }
        let lambda = (&p - &one).lcm(&(&q - &one));
        let mu = mod_inverse(&lambda, &n)
            .ok_or_else(|| Error::InvalidPrimes("lambda is not invertible mod N".into()))?;
        let key_bits = p.bits().max(q.bits()) as u32;
        Ok(KeyPair {
            public: PublicKey::new(n, key_bits)?,
            private: PrivateKey { p, q, lambda, mu },
        })
    }
}

/// A value in `Z_N` (messages, randomizers, scalars).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plaintext(BigUint);

impl Plaintext {
    pub fn new(value: BigUint) -> Self {
        Plaintext(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<u64> for Plaintext {
    fn from(v: u64) -> Self {
        Plaintext(BigUint::from(v))
    }
}

impl From<BigUint> for Plaintext {
    fn from(v: BigUint) -> Self {
        Plaintext(v)
    }
}

/// A value in `Z_{N²}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ciphertext(BigUint);

impl Ciphertext {
    pub fn new(value: BigUint) -> Self {
        Ciphertext(value)
    }

    /// The multiplicative identity, an encryption of zero with randomizer 1.
    pub fn one() -> Self {
        Ciphertext(BigUint::one())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }
}

impl From<u64> for Ciphertext {
    fn from(v: u64) -> Self {
        Ciphertext(BigUint::from(v))
    }
}

/// Generates a key pair whose primes both have exactly `key_bits` bits.
///
/// Any `key_bits ≥ 3` is accepted so tests can enumerate over toy moduli;
/// `key_bits = 3` always yields `N = 35`.
pub fn generate_keys<R: Rng + ?Sized>(key_bits: u32, rng: &mut R) -> Result<KeyPair> {
    if key_bits < 3 {
        return Err(Error::KeySizeTooSmall(key_bits));
    }
    for _ in 0..MAX_KEYGEN_ATTEMPTS {
        let p = prime::random_prime(key_bits, rng)?;
        let q = prime::random_prime(key_bits, rng)?;
        if let Ok(keys) = KeyPair::from_prime_pair(p, q) {
            return Ok(keys);
        }
    }
    Err(Error::KeyGenerationExhausted(MAX_KEYGEN_ATTEMPTS))
}

/// Uniform draw from `Z*_N` by rejection sampling.
pub fn sample_unit<R: Rng + ?Sized>(pk: &PublicKey, rng: &mut R) -> Result<Plaintext> {
    for _ in 0..MAX_UNIT_DRAWS {
        let r = rng.gen_biguint_below(&pk.n);
        if pk.is_unit(&r) {
            return Ok(Plaintext(r));
        }
    }
    Err(Error::SamplingExhausted(MAX_UNIT_DRAWS))
}

/// `E(t; r) = (N+1)^t · r^N mod N²`.
pub fn encrypt(pk: &PublicKey, t: &Plaintext, r: &Plaintext) -> Result<Ciphertext> {
    pk.check_plaintext(t)?;
    if !pk.is_unit(&r.0) {
        return Err(Error::InvalidRandomizer);
    }
    metrics::bump(|c| c.encryptions += 1);
    // (N+1)^t ≡ 1 + tN (mod N²) by the binomial theorem.
    let g_t = (BigUint::one() + &t.0 * &pk.n) % &pk.n_squared;
    let r_n = r.0.modpow(&pk.n, &pk.n_squared);
    Ok(Ciphertext(g_t * r_n % &pk.n_squared))
}

/// Encrypts `t` under a freshly sampled randomizer.
pub fn encrypt_fresh<R: Rng + ?Sized>(
    pk: &PublicKey,
    t: &Plaintext,
    rng: &mut R,
) -> Result<Ciphertext> {
    pk.check_plaintext(t)?;
    let r = sample_unit(pk, rng)?;
    encrypt(pk, t, &r)
}

/// `D(c) = L(c^λ mod N²) · μ mod N` with `L(x) = (x − 1) / N`.
///
/// The division in `L` must be exact; a remainder means the input was not an
/// honest ciphertext under this key.
pub fn decrypt(sk: &PrivateKey, pk: &PublicKey, c: &Ciphertext) -> Result<Plaintext> {
    pk.check_ciphertext(c)?;
    metrics::bump(|m| m.decryptions += 1);
    let x = c.0.modpow(&sk.lambda, &pk.n_squared);
    if x.is_zero() {
        return Err(Error::CorruptCiphertext);
    }
    let (l, rem) = (x - 1u32).div_rem(&pk.n);
    if !rem.is_zero() {
        return Err(Error::CorruptCiphertext);
    }
    Ok(Plaintext(l * &sk.mu % &pk.n))
}

/// Ciphertext product; decrypts to `(t + t') mod N`.
pub fn add_cipher(pk: &PublicKey, c1: &Ciphertext, c2: &Ciphertext) -> Result<Ciphertext> {
    pk.check_ciphertext(c1)?;
    pk.check_ciphertext(c2)?;
    metrics::bump(|m| m.additions += 1);
    Ok(Ciphertext(&c1.0 * &c2.0 % &pk.n_squared))
}

/// Ciphertext power; decrypts to `(k · t) mod N`.
pub fn scalar_mul(pk: &PublicKey, c: &Ciphertext, k: &Plaintext) -> Result<Ciphertext> {
    pk.check_ciphertext(c)?;
    pk.check_plaintext(k)?;
    metrics::bump(|m| m.scalar_muls += 1);
    Ok(Ciphertext(c.0.modpow(&k.0, &pk.n_squared)))
}
