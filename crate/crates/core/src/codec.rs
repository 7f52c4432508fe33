//! Fixed-rate `.tqnt` container.
//!
//! | offset | size | field |
//! |--------|------|-------|
//! | 0 | 4 | magic `TQ01` |
//! | 4 | 4 | `m`, u32 little-endian |
//! | 8 | 4 | `n`, u32 little-endian |
//! | 12 | 4 | bias numerator, u32 little-endian |
//! | 16 | 4 | bias denominator, u32 little-endian |
//! | 20 | `⌈R/8⌉` | rank, big-endian, zero-padded |
//!
//! `R = ⌈log2 C(n+m-1, m-1)⌉`. Plain lattices store the bias as `0/1`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::enumeration::{bits_for, count_types, Enumerator, TypeIndex};
use crate::{Bias, Error, LatticeSpec, Result, TypePoint};

pub const MAGIC: [u8; 4] = *b"TQ01";
pub const HEADER_LEN: usize = 20;
pub const FILE_EXTENSION: &str = "tqnt";

/// Serialized quantized distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedBlob(Vec<u8>);

impl EncodedBlob {
    /// Wraps raw bytes; validation happens in [`decode`].
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Payload width in bytes for a lattice: `⌈R/8⌉`.
pub fn payload_width(m: usize, n: u32) -> usize {
    bits_for(&count_types(m, n)).div_ceil(8) as usize
}

fn width_of(e: &Enumerator) -> usize {
    bits_for(e.count()).div_ceil(8) as usize
}

/// Serializes `point` under `spec`.
pub fn encode(point: &TypePoint, spec: &LatticeSpec) -> Result<EncodedBlob> {
    spec.check_point(point)?;
    let e = Enumerator::new(spec.m(), spec.n())?;
    let index = e.rank(point)?;
    Ok(encode_index(&index, spec, width_of(&e)))
}

fn encode_index(index: &TypeIndex, spec: &LatticeSpec, width: usize) -> EncodedBlob {
    let mut out = Vec::with_capacity(HEADER_LEN + width);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&(spec.m() as u32).to_le_bytes());
    out.extend_from_slice(&spec.n().to_le_bytes());
    out.extend_from_slice(&spec.beta().num().to_le_bytes());
    out.extend_from_slice(&spec.beta().den().to_le_bytes());
    let digits = index.value().to_bytes_be();
    // to_bytes_be yields [0] for zero
    let digits = if index.value().is_zero() {
        &[][..]
    } else {
        &digits[..]
    };
    out.resize(HEADER_LEN + width - digits.len(), 0);
    out.extend_from_slice(digits);
    EncodedBlob(out)
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

/// Parses only the header.
pub fn read_header(blob: &EncodedBlob) -> Result<LatticeSpec> {
    let bytes = blob.as_bytes();
    if bytes.len() < MAGIC.len() || bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            actual: bytes.len(),
        });
    }
    let m = read_u32(bytes, 4) as usize;
    let n = read_u32(bytes, 8);
    let beta = Bias::new(read_u32(bytes, 12), read_u32(bytes, 16))?;
    LatticeSpec::new(m, n, beta)
}

/// Inverse of [`encode`].
pub fn decode(blob: &EncodedBlob) -> Result<(TypePoint, LatticeSpec)> {
    let spec = read_header(blob)?;
    let e = Enumerator::new(spec.m(), spec.n())?;
    let expected = HEADER_LEN + width_of(&e);
    let bytes = blob.as_bytes();
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected,
            actual: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Error::TrailingData {
            expected,
            actual: bytes.len(),
        });
    }
    let index = TypeIndex::new(BigUint::from_bytes_be(&bytes[HEADER_LEN..]));
    Ok((e.unrank(&index)?, spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(v: &[u32]) -> TypePoint {
        TypePoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn first_and_last_payloads() {
        let spec = LatticeSpec::plain(3, 2).unwrap();
        let first = encode(&tp(&[0, 0, 2]), &spec).unwrap();
        assert_eq!(first.len(), 21);
        assert_eq!(first.as_bytes()[20], 0x00);
        let last = encode(&tp(&[2, 0, 0]), &spec).unwrap();
        assert_eq!(last.as_bytes()[20], 0x05);
        assert_eq!(&last.as_bytes()[..4], b"TQ01");
    }

    #[test]
    fn two_byte_payload() {
        let spec = LatticeSpec::plain(5, 8).unwrap();
        assert_eq!(payload_width(5, 8), 2);
        assert_eq!(encode(&tp(&[8, 0, 0, 0, 0]), &spec).unwrap().len(), 22);
    }

    #[test]
    fn index_out_of_range() {
        let spec = LatticeSpec::plain(3, 2).unwrap();
        let mut bytes = encode(&tp(&[2, 0, 0]), &spec).unwrap().into_bytes();
        bytes[20] = 6;
        let err = decode(&EncodedBlob::from_bytes(bytes)).unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
    }

    #[test]
    fn bad_magic_and_truncation() {
        let spec = LatticeSpec::plain(3, 2).unwrap();
        let good = encode(&tp(&[1, 1, 0]), &spec).unwrap().into_bytes();
        let mut bad = good.clone();
        bad[0] = b'X';
        assert_eq!(decode(&EncodedBlob::from_bytes(bad)), Err(Error::BadMagic));
        let short = good[..20].to_vec();
        assert!(matches!(
            decode(&EncodedBlob::from_bytes(short)),
            Err(Error::Truncated { .. })
        ));
        let header_only = good[..10].to_vec();
        assert!(matches!(
            decode(&EncodedBlob::from_bytes(header_only)),
            Err(Error::Truncated { .. })
        ));
        let mut long = good;
        long.push(0);
        assert!(matches!(
            decode(&EncodedBlob::from_bytes(long)),
            Err(Error::TrailingData { .. })
        ));
    }

    #[test]
    fn inconsistent_point() {
        let spec = LatticeSpec::plain(3, 2).unwrap();
        assert!(encode(&tp(&[1, 1, 1]), &spec).is_err());
        assert!(encode(&tp(&[1, 1]), &spec).is_err());
    }

    #[test]
    fn bias_survives() {
        let spec = LatticeSpec::new(4, 6, Bias::new(1, 4).unwrap()).unwrap();
        let p = tp(&[3, 0, 2, 1]);
        let (q, s) = decode(&encode(&p, &spec).unwrap()).unwrap();
        assert_eq!((q, s), (p, spec));
    }
}
