//! Chunk certificates, their canonical text form, and stitching.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::hash::Hasher;

use fnv::FnvHasher;

use super::turing::TuringConstants;
use crate::dyadic::Dyadic;
use crate::error::Error;

pub const VERSION_TAG: &str = "RHC1";

/// FNV-1a, 64 bit.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(bytes);
    h.finish()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertStatus {
    Certified,
    Failed,
}

impl CertStatus {
    fn as_str(self) -> &'static str {
        match self {
            CertStatus::Certified => "CERTIFIED",
            CertStatus::Failed => "FAILED",
        }
    }
}

/// Result of one work unit: `zero_count` zeros in `(t_lo, t_hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChunkCertificate {
    pub id: u64,
    pub t_lo: Dyadic,
    pub t_hi: Dyadic,
    pub step: Dyadic,
    pub zero_count: u64,
    pub prec_bits: u32,
    pub constants: TuringConstants,
    pub config_hash: u64,
    pub status: CertStatus,
}

/// Why a record could not be read back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecordError {
    Malformed,
    ChecksumMismatch { id: Option<u64> },
}

fn push_dyadic(out: &mut String, d: Dyadic) {
    out.push_str(&format!("|{}|{}", d.mantissa(), d.exponent()));
}

impl ChunkCertificate {
    /// Fields in declared order joined by `|`, without the checksum.
    pub fn canonical_body(&self) -> String {
        let mut s = String::from(VERSION_TAG);
        s.push_str(&format!("|{}", self.id));
        push_dyadic(&mut s, self.t_lo);
        push_dyadic(&mut s, self.t_hi);
        push_dyadic(&mut s, self.step);
        s.push_str(&format!(
            "|{}|{}|{}|{}|{}|{}",
            self.zero_count,
            self.prec_bits,
            self.constants.a,
            self.constants.b,
            self.config_hash,
            self.status.as_str()
        ));
        s
    }

    pub fn checksum(&self) -> u64 {
        fnv1a64(self.canonical_body().as_bytes())
    }

    /// One newline-terminated journal record.
    pub fn to_line(&self) -> String {
        let body = self.canonical_body();
        let sum = fnv1a64(body.as_bytes());
        format!("{body}|{sum}\n")
    }

    /// Parse a record (with or without its newline) and verify the checksum.
    pub fn parse_line(line: &str) -> Result<ChunkCertificate, RecordError> {
        let line = line.strip_suffix('\n').unwrap_or(line);
        let (body, sum) = line.rsplit_once('|').ok_or(RecordError::Malformed)?;
        let f: Vec<&str> = body.split('|').collect();
        let id = f.get(1).and_then(|x| x.parse::<u64>().ok());
        let sum: u64 = sum.parse().map_err(|_| RecordError::ChecksumMismatch { id })?;
        if fnv1a64(body.as_bytes()) != sum {
            return Err(RecordError::ChecksumMismatch { id });
        }
        if f.len() != 14 || f[0] != VERSION_TAG {
            return Err(RecordError::Malformed);
        }
        fn int<T: core::str::FromStr>(s: &str) -> Result<T, RecordError> {
            s.parse().map_err(|_| RecordError::Malformed)
        }
        let dy = |m: &str, e: &str| -> Result<Dyadic, RecordError> { Ok(Dyadic::new(int(m)?, int(e)?)) };
        let status = match f[13] {
            "CERTIFIED" => CertStatus::Certified,
            "FAILED" => CertStatus::Failed,
            _ => return Err(RecordError::Malformed),
        };
        let cert = ChunkCertificate {
            id: int(f[1])?,
            t_lo: dy(f[2], f[3])?,
            t_hi: dy(f[4], f[5])?,
            step: dy(f[6], f[7])?,
            zero_count: int(f[8])?,
            prec_bits: int(f[9])?,
            constants: TuringConstants { a: int(f[10])?, b: int(f[11])? },
            config_hash: int(f[12])?,
            status,
        };
        // Reject non-canonical spellings so that parse/print round-trips.
        if cert.canonical_body() != body {
            return Err(RecordError::Malformed);
        }
        Ok(cert)
    }
}

/// The stitched result of abutting certified chunks starting at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalCertificate {
    pub height: Dyadic,
    pub zeros: u64,
    pub chunks: usize,
}

/// Check abutment and status, and add up the counts.
pub fn stitch(certs: &[ChunkCertificate]) -> Result<GlobalCertificate, Error> {
    let mut at = Dyadic::ZERO;
    let mut zeros = 0u64;
    for c in certs {
        if c.t_lo != at {
            let (a, b) = if c.t_lo > at { (at, c.t_lo) } else { (c.t_lo, at) };
            return Err(Error::GapDetected(a, b));
        }
        if c.status != CertStatus::Certified {
            return Err(Error::StatusNotCertified(c.id));
        }
        zeros += c.zero_count;
        at = c.t_hi;
    }
    Ok(GlobalCertificate { height: at, zeros, chunks: certs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cert(id: u64, lo: i64, hi: i64, n: u64) -> ChunkCertificate {
        ChunkCertificate {
            id,
            t_lo: Dyadic::from_int(lo),
            t_hi: Dyadic::from_int(hi),
            step: Dyadic::new(1, -4),
            zero_count: n,
            prec_bits: 64,
            constants: TuringConstants::TURING,
            config_hash: 7,
            status: CertStatus::Certified,
        }
    }

    #[test]
    fn empty_checksum_is_offset_basis() {
        assert_eq!(fnv1a64(b""), 14695981039346656037);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
    }

    #[test]
    fn line_round_trip() {
        let c = cert(3, 50, 100, 19);
        let line = c.to_line();
        assert!(line.starts_with("RHC1|3|25|1|25|2|1|-4|19|64|2.3|0.128|7|CERTIFIED|"));
        assert_eq!(ChunkCertificate::parse_line(&line).unwrap(), c);
        let mut bad = line.into_bytes();
        bad[8] ^= 1;
        let bad = String::from_utf8(bad).unwrap();
        assert!(matches!(ChunkCertificate::parse_line(&bad), Err(RecordError::ChecksumMismatch { .. })));
    }

    #[test]
    fn stitching() {
        let g = stitch(&[cert(1, 0, 50, 10), cert(2, 50, 100, 19)]).unwrap();
        assert_eq!((g.height, g.zeros), (Dyadic::from_int(100), 29));
        assert_eq!(
            stitch(&[cert(1, 0, 50, 10), cert(2, 60, 100, 19)]),
            Err(Error::GapDetected(Dyadic::from_int(50), Dyadic::from_int(60)))
        );
        let g = stitch(&[]).unwrap();
        assert_eq!((g.height, g.zeros), (Dyadic::ZERO, 0));
        let mut f = cert(2, 50, 100, 19);
        f.status = CertStatus::Failed;
        assert_eq!(stitch(&[cert(1, 0, 50, 10), f]), Err(Error::StatusNotCertified(2)));
    }
}
