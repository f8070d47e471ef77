use cpnshare_pseudonym::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn toy_setup() -> (Authority<ToyGroup>, Device<ToyGroup>, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut ctr = OpCounter::new();
    let authority = Authority::with_secret(Params::toy(101).unwrap(), 4, &mut ctr).unwrap();
    let mut device = Device::with_secret("device-a", authority.params(), 5, &mut ctr).unwrap();
    device.register(&authority, &mut rng, &mut ctr).unwrap();
    (authority, device, rng)
}

#[test]
fn pseudonym_exchange_vector() {
    let (authority, device, _) = toy_setup();
    let params = authority.params();
    let mut ctr = OpCounter::new();
    params.fix_challenge(Some(2));
    let (offer, pending) = authority.offer_with_nonce(&device.hello(params), 7, &mut ctr).unwrap();
    assert_eq!(offer.x, 7);
    let (response, transcript) = device.respond_with_nonce(params, &offer, 3, &mut ctr).unwrap();
    assert_eq!((response.y, response.k, response.m), (35, 21, 13));
    assert_eq!(transcript, Transcript { k: 21, m: 13 });
    // M·x = 13·7 = 91 and K + ε·y = 21 + 70 = 91.
    assert_eq!(13 * 7, 91);
    let pseudonym = authority.accept(&pending, &response, &mut ctr).unwrap();
    assert_eq!(pseudonym, Pseudonym { x: 7, y: 35 });
}

#[test]
fn certificate_vector() {
    let (authority, device, _) = toy_setup();
    let params = authority.params();
    let mut ctr = OpCounter::new();
    params.fix_challenge(Some(2));
    let (offer, pending) = authority.offer_with_nonce(&device.hello(params), 7, &mut ctr).unwrap();
    let (response, transcript) = device.respond_with_nonce(params, &offer, 3, &mut ctr).unwrap();
    let pseudonym = authority.accept(&pending, &response, &mut ctr).unwrap();

    params.fix_challenge(Some(3));
    let cert = authority.issue_certificate_with_nonce(&pseudonym, 6, &mut ctr).unwrap();
    assert_eq!(cert, Certificate { o: 6, p: 18 });
    // P·g = 18 and O + ζ·h = 6 + 3·4 = 18.
    certificate_check(params, &pseudonym, &cert, authority.public_key(), &mut ctr).unwrap();
    let credential = Credential { pseudonym, transcript, certificate: cert };
    let bytes = credential.encode(&params.group);
    let field = |v: u64| format!("0008{v:016x}");
    let expected: String = [7, 35, 21, 13, 6, 18].into_iter().map(field).collect();
    assert_eq!(hex::encode(&bytes), expected);
    assert_eq!(Credential::decode(&params.group, &bytes).unwrap(), credential);
}

#[test]
fn zero_nonces_rejected() {
    let (authority, device, _) = toy_setup();
    let params = authority.params();
    let mut ctr = OpCounter::new();
    assert_eq!(authority.offer_with_nonce(&device.hello(params), 0, &mut ctr).unwrap_err(), Error::ZeroNonce);
    let (offer, _) = authority.offer_with_nonce(&device.hello(params), 7, &mut ctr).unwrap();
    assert_eq!(device.respond_with_nonce(params, &offer, 0, &mut ctr).unwrap_err(), Error::ZeroNonce);
}

#[test]
fn tampered_response_rejected_in_toy_group() {
    let (authority, device, _) = toy_setup();
    let params = authority.params();
    let mut ctr = OpCounter::new();
    params.fix_challenge(Some(2));
    let (offer, pending) = authority.offer_with_nonce(&device.hello(params), 7, &mut ctr).unwrap();
    let (mut response, _) = device.respond_with_nonce(params, &offer, 3, &mut ctr).unwrap();
    response.m = 14;
    assert_eq!(authority.accept(&pending, &response, &mut ctr).unwrap_err(), Error::PseudonymRejected);
}

/// Over every γ for two devices, the pseudonym x carries no information about the device:
/// pairs (x₁, x₂) from one device and from two devices have identical distributions.
#[test]
fn x_values_unlinkable_exhaustively() {
    let q = 23u64;
    let (d1, d2) = (5u64, 9u64);
    let x_of = |gamma: u64, _d: u64| gamma % q;
    let mut same = std::collections::BTreeMap::new();
    let mut diff = std::collections::BTreeMap::new();
    for g1 in 1..q {
        for g2 in 1..q {
            *same.entry((x_of(g1, d1), x_of(g2, d1))).or_insert(0u32) += 1;
            *diff.entry((x_of(g1, d1), x_of(g2, d2))).or_insert(0u32) += 1;
        }
    }
    assert_eq!(same, diff);

    // The same holds when x comes from the protocol itself rather than the formula.
    let params = Params::toy(q).unwrap();
    let mut ctr = OpCounter::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let authority = Authority::with_secret(params, 3, &mut ctr).unwrap();
    let mut a = Device::with_secret("a", authority.params(), d1, &mut ctr).unwrap();
    let mut b = Device::with_secret("b", authority.params(), d2, &mut ctr).unwrap();
    a.register(&authority, &mut rng, &mut ctr).unwrap();
    b.register(&authority, &mut rng, &mut ctr).unwrap();
    let xs = |dev: &Device<ToyGroup>| {
        (1..q).map(|g| authority.offer_with_nonce(&dev.hello(authority.params()), g, &mut OpCounter::new()).unwrap().0.x).collect::<Vec<_>>()
    };
    assert_eq!(xs(&a), xs(&b));
}

/// With (x, y) both visible, the toy group's trivial discrete log links pseudonyms of one
/// device through y·x⁻¹ = d. Unlinkability of full pairs rests on DDH, which only the
/// elliptic-curve group provides.
#[test]
fn toy_group_links_full_pairs() {
    let q = 23u64;
    let inv = |v: u64| (1..q).find(|i| i * v % q == 1).unwrap();
    let d = 5u64;
    let ratios: std::collections::BTreeSet<u64> = (1..q).map(|g| (g * d % q) * inv(g) % q).collect();
    assert_eq!(ratios.into_iter().collect::<Vec<_>>(), vec![d]);
}
