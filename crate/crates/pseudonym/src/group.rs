use std::fmt::Debug;

use p256::elliptic_curve::bigint::U256;
use p256::elliptic_curve::group::GroupEncoding;
use p256::elliptic_curve::ops::Reduce;
use p256::elliptic_curve::{Field, PrimeField};
use p256::{FieldBytes, ProjectivePoint};
use rand::RngCore;

use crate::{Error, Result};

/// A prime-order group written additively, with fixed-length encodings.
pub trait Group: Copy + Eq + Debug + Send + Sync + 'static {
    type Scalar: Copy + Eq + Debug + Send + Sync;
    type Element: Copy + Eq + Debug + Send + Sync;

    fn name(&self) -> &'static str;
    fn generator(&self) -> Self::Element;
    fn identity(&self) -> Self::Element;
    fn mul(&self, e: &Self::Element, s: &Self::Scalar) -> Self::Element;
    fn add(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn scalar_from_u64(&self, v: u64) -> Self::Scalar;
    fn scalar_add(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn scalar_mul(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn scalar_is_zero(&self, s: &Self::Scalar) -> bool;
    /// Uniform on [1, q).
    fn random_scalar(&self, rng: &mut dyn RngCore) -> Self::Scalar;
    /// Big-endian digest reduced mod q.
    fn reduce_digest(&self, digest: &[u8; 32]) -> Self::Scalar;

    fn element_len(&self) -> usize;
    fn scalar_len(&self) -> usize;
    fn encode_element(&self, e: &Self::Element, out: &mut Vec<u8>);
    /// Rejects malformed encodings and the identity element.
    fn decode_element(&self, bytes: &[u8]) -> Result<Self::Element>;
    fn encode_scalar(&self, s: &Self::Scalar, out: &mut Vec<u8>);
    /// Rejects encodings of values ≥ q.
    fn decode_scalar(&self, bytes: &[u8]) -> Result<Self::Scalar>;

    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Element {
        let s = self.random_scalar(rng);
        self.mul(&self.generator(), &s)
    }
}

/// NIST P-256, about 128-bit security. Elements use 33-byte SEC1 compressed encoding,
/// scalars 32-byte big-endian.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct P256;

impl Group for P256 {
    type Scalar = p256::Scalar;
    type Element = ProjectivePoint;

    fn name(&self) -> &'static str {
        "P-256"
    }

    fn generator(&self) -> ProjectivePoint {
        ProjectivePoint::GENERATOR
    }

    fn identity(&self) -> ProjectivePoint {
        ProjectivePoint::IDENTITY
    }

    fn mul(&self, e: &ProjectivePoint, s: &p256::Scalar) -> ProjectivePoint {
        *e * s
    }

    fn add(&self, a: &ProjectivePoint, b: &ProjectivePoint) -> ProjectivePoint {
        *a + b
    }

    fn scalar_from_u64(&self, v: u64) -> p256::Scalar {
        p256::Scalar::from(v)
    }

    fn scalar_add(&self, a: &p256::Scalar, b: &p256::Scalar) -> p256::Scalar {
        *a + b
    }

    fn scalar_mul(&self, a: &p256::Scalar, b: &p256::Scalar) -> p256::Scalar {
        *a * b
    }

    fn scalar_is_zero(&self, s: &p256::Scalar) -> bool {
        bool::from(s.is_zero())
    }

    fn random_scalar(&self, mut rng: &mut dyn RngCore) -> p256::Scalar {
        loop {
            let s = p256::Scalar::random(&mut rng);
            if !self.scalar_is_zero(&s) {
                return s;
            }
        }
    }

    fn reduce_digest(&self, digest: &[u8; 32]) -> p256::Scalar {
        <p256::Scalar as Reduce<U256>>::reduce_bytes(&FieldBytes::from(*digest))
    }

    fn element_len(&self) -> usize {
        33
    }

    fn scalar_len(&self) -> usize {
        32
    }

    fn encode_element(&self, e: &ProjectivePoint, out: &mut Vec<u8>) {
        out.extend_from_slice(&e.to_bytes());
    }

    fn decode_element(&self, bytes: &[u8]) -> Result<ProjectivePoint> {
        if bytes.len() != 33 {
            return Err(Error::InvalidElement);
        }
        let mut repr = <ProjectivePoint as GroupEncoding>::Repr::default();
        repr.copy_from_slice(bytes);
        let p: Option<ProjectivePoint> = ProjectivePoint::from_bytes(&repr).into();
        match p {
            Some(p) if p != ProjectivePoint::IDENTITY => Ok(p),
            _ => Err(Error::InvalidElement),
        }
    }

    fn encode_scalar(&self, s: &p256::Scalar, out: &mut Vec<u8>) {
        out.extend_from_slice(&s.to_bytes());
    }

    fn decode_scalar(&self, bytes: &[u8]) -> Result<p256::Scalar> {
        if bytes.len() != 32 {
            return Err(Error::InvalidScalar);
        }
        let mut repr = FieldBytes::default();
        repr.copy_from_slice(bytes);
        Option::from(p256::Scalar::from_repr(repr)).ok_or(Error::InvalidScalar)
    }
}

/// Integers mod a small prime q under addition, generator 1.
///
/// Discrete logarithms are trivial here, so this group exists only for hand-checkable test
/// vectors. Elements and scalars both encode as 8-byte big-endian integers.
#[cfg(feature = "test-vectors")]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyGroup {
    q: u64,
}

#[cfg(feature = "test-vectors")]
impl ToyGroup {
    pub fn new(q: u64) -> Result<Self> {
        let prime = q >= 3 && (2..).take_while(|d: &u64| d * d <= q).all(|d| !q.is_multiple_of(d));
        if !prime || q > u32::MAX as u64 {
            return Err(Error::InvalidGroup(format!("toy order must be a prime below 2^32, got {q}")));
        }
        Ok(Self { q })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    fn decode_u64(&self, bytes: &[u8]) -> Option<u64> {
        let v = u64::from_be_bytes(bytes.try_into().ok()?);
        (v < self.q).then_some(v)
    }
}

#[cfg(feature = "test-vectors")]
impl Group for ToyGroup {
    type Scalar = u64;
    type Element = u64;

    fn name(&self) -> &'static str {
        "toy-additive"
    }

    fn generator(&self) -> u64 {
        1
    }

    fn identity(&self) -> u64 {
        0
    }

    fn mul(&self, e: &u64, s: &u64) -> u64 {
        self.mulmod(*e, *s)
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.q
    }

    fn scalar_from_u64(&self, v: u64) -> u64 {
        v % self.q
    }

    fn scalar_add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.q
    }

    fn scalar_mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }

    fn scalar_is_zero(&self, s: &u64) -> bool {
        *s == 0
    }

    fn random_scalar(&self, rng: &mut dyn RngCore) -> u64 {
        use rand::Rng;
        rng.gen_range(1..self.q)
    }

    fn reduce_digest(&self, digest: &[u8; 32]) -> u64 {
        digest.iter().fold(0u64, |acc, &b| ((acc as u128 * 256 + b as u128) % self.q as u128) as u64)
    }

    fn element_len(&self) -> usize {
        8
    }

    fn scalar_len(&self) -> usize {
        8
    }

    fn encode_element(&self, e: &u64, out: &mut Vec<u8>) {
        out.extend_from_slice(&e.to_be_bytes());
    }

    fn decode_element(&self, bytes: &[u8]) -> Result<u64> {
        self.decode_u64(bytes).filter(|&v| v != 0).ok_or(Error::InvalidElement)
    }

    fn encode_scalar(&self, s: &u64, out: &mut Vec<u8>) {
        out.extend_from_slice(&s.to_be_bytes());
    }

    fn decode_scalar(&self, bytes: &[u8]) -> Result<u64> {
        self.decode_u64(bytes).ok_or(Error::InvalidScalar)
    }
}
