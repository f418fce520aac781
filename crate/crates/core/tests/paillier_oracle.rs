use fleetmatch_core::paillier::{
    self, add_cipher, bezout, decrypt, encrypt, scalar_mul, KeyPair, Plaintext,
};
use fleetmatch_core::PublicKey;
use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn units(n: u64) -> Vec<u64> {
    (1..n).filter(|r| r.gcd(&n) == 1).collect()
}

// Textbook encryption without the (N+1)^t shortcut.
fn naive_encrypt(pk: &PublicKey, t: u64, r: u64) -> BigUint {
    let n = pk.modulus();
    let nn = pk.modulus_squared();
    let g = n + 1u32;
    g.modpow(&BigUint::from(t), nn) * BigUint::from(r).modpow(n, nn) % nn
}

fn pt(v: u64) -> Plaintext {
    Plaintext::from(v)
}

#[test]
fn exhaustive_round_trip_at_toy_moduli() {
    for (p, q) in [(3u32, 5u32), (5, 7)] {
        let keys = KeyPair::from_primes(p.into(), q.into()).unwrap();
        let n = u64::from(p * q);
        let units = units(n);
        for t in 0..n {
            for &r in &units {
                let c = encrypt(&keys.public, &pt(t), &pt(r)).unwrap();
                assert_eq!(c.value(), &naive_encrypt(&keys.public, t, r));
                let d = decrypt(&keys.private, &keys.public, &c).unwrap();
                assert_eq!(d.value(), &BigUint::from(t));
            }
        }
    }
}

#[test]
fn exhaustive_homomorphisms_at_fifteen() {
    let keys = KeyPair::from_primes(3u32.into(), 5u32.into()).unwrap();
    let pk = &keys.public;
    let units = units(15);
    for t1 in 0..15 {
        for t2 in 0..15 {
            for &r1 in &units {
                let r2 = units[(t1 * 3 + t2) as usize % units.len()];
                let c1 = encrypt(pk, &pt(t1), &pt(r1)).unwrap();
                let c2 = encrypt(pk, &pt(t2), &pt(r2)).unwrap();
                let sum = add_cipher(pk, &c1, &c2).unwrap();
                // E(t;r)E(t';r') = E(t+t'; rr').
                let expected = naive_encrypt(pk, (t1 + t2) % 15, r1 * r2 % 15);
                assert_eq!(sum.value(), &expected);
                let scaled = scalar_mul(pk, &c1, &pt(t2)).unwrap();
                let d = decrypt(&keys.private, pk, &scaled).unwrap();
                assert_eq!(d.value(), &BigUint::from(t1 * t2 % 15));
            }
        }
    }
}

#[test]
fn zero_encryptions_differ_per_randomizer() {
    let keys = KeyPair::from_primes(5u32.into(), 7u32.into()).unwrap();
    let all: std::collections::BTreeSet<_> = units(35)
        .into_iter()
        .map(|r| encrypt(&keys.public, &pt(0), &pt(r)).unwrap())
        .collect();
    assert_eq!(all.len(), 24);
}

#[test]
fn zero_and_one_ciphertexts_look_alike() {
    // Smoke test: the low bit of a fresh ciphertext is balanced for both
    // plaintexts.
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let keys = paillier::generate_keys(64, &mut rng).unwrap();
    let trials = 2000u32;
    for t in [0u64, 1] {
        let ones = (0..trials)
            .filter(|_| {
                let c = paillier::encrypt_fresh(&keys.public, &pt(t), &mut rng).unwrap();
                c.value().bit(0)
            })
            .count() as f64;
        let mean = f64::from(trials) / 2.0;
        let sigma = (f64::from(trials) / 4.0).sqrt();
        assert!((ones - mean).abs() < 5.0 * sigma, "t = {t}: {ones}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn round_trip_at_128_bits(seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let keys = paillier::generate_keys(128, &mut rng).unwrap();
        let n = keys.public.modulus();
        let t = rng.gen_biguint_below(n);
        let r = paillier::sample_unit(&keys.public, &mut rng).unwrap();
        let c = encrypt(&keys.public, &Plaintext::new(t.clone()), &r).unwrap();
        prop_assert_eq!(decrypt(&keys.private, &keys.public, &c).unwrap().into_inner(), t);
    }

    #[test]
    fn homomorphisms_at_128_bits(seed in any::<u64>()) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let keys = paillier::generate_keys(128, &mut rng).unwrap();
        let (pk, sk) = (&keys.public, &keys.private);
        let n = pk.modulus();
        let a = rng.gen_biguint_below(n);
        let b = rng.gen_biguint_below(n);
        let ca = paillier::encrypt_fresh(pk, &Plaintext::new(a.clone()), &mut rng).unwrap();
        let cb = paillier::encrypt_fresh(pk, &Plaintext::new(b.clone()), &mut rng).unwrap();
        let sum = decrypt(sk, pk, &add_cipher(pk, &ca, &cb).unwrap()).unwrap();
        prop_assert_eq!(sum.into_inner(), (&a + &b) % n);
        let prod = decrypt(sk, pk, &scalar_mul(pk, &ca, &Plaintext::new(b.clone())).unwrap()).unwrap();
        prop_assert_eq!(prod.into_inner(), (&a * &b) % n);
    }

    #[test]
    fn bezout_identity(a in 0u64.., b in 1u64..) {
        let (a, b) = (BigUint::from(a), BigUint::from(b));
        let out = bezout(&a, &b);
        prop_assert_eq!(
            BigInt::from(a.clone()) * &out.x + BigInt::from(b.clone()) * &out.y,
            BigInt::from(out.gcd.clone())
        );
        prop_assert_eq!(out.gcd.clone(), a.gcd(&b));
        prop_assert!(out.gcd >= BigUint::one());
    }
}
