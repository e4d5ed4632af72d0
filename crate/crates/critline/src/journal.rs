//! Append-only certificate journal.
//!
//! The first line describes the campaign, every further line is one
//! [`ChunkCertificate`] record. Each line carries its own FNV-1a checksum.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use critline_core::certify::{fnv1a64, ChunkCertificate, RecordError};
use critline_core::orchestra::RunConfig;
use critline_core::Dyadic;
use thiserror::Error;

const HEADER_TAG: &str = "RHC1-RUN";

#[derive(Debug, Error)]
pub enum JournalError {
    #[error("journal I/O: {0}")]
    Io(#[from] io::Error),
    #[error("journal header is missing or corrupt")]
    BadHeader,
    #[error("checksum mismatch in record {0}")]
    ChecksumMismatch(u64),
    #[error("record {0} is malformed")]
    Malformed(u64),
    #[error("record {0} conflicts with an earlier record for the same unit")]
    Conflict(u64),
}

/// Campaign parameters stored in the header.
#[derive(Clone, Debug, PartialEq)]
pub struct Header {
    pub height: Dyadic,
    pub unit_length: Dyadic,
    pub config: RunConfig,
}

impl Header {
    fn body(&self) -> String {
        format!(
            "{HEADER_TAG}|{}|{}|{}|{}|{}",
            self.height.mantissa(),
            self.height.exponent(),
            self.unit_length.mantissa(),
            self.unit_length.exponent(),
            self.config.canonical().trim_end().replace('\n', ";")
        )
    }

    pub fn to_line(&self) -> String {
        let b = self.body();
        let sum = fnv1a64(b.as_bytes());
        format!("{b}|{sum}\n")
    }

    pub fn parse(line: &str) -> Result<Header, JournalError> {
        let (body, sum) = line.rsplit_once('|').ok_or(JournalError::BadHeader)?;
        if sum.parse::<u64>().ok() != Some(fnv1a64(body.as_bytes())) {
            return Err(JournalError::BadHeader);
        }
        let f: Vec<&str> = body.splitn(6, '|').collect();
        if f.len() != 6 || f[0] != HEADER_TAG {
            return Err(JournalError::BadHeader);
        }
        let int = |s: &str| s.parse::<i64>().map_err(|_| JournalError::BadHeader);
        let dy = |m: &str, e: &str| -> Result<Dyadic, JournalError> {
            Ok(Dyadic::new(i128::from(int(m)?), i32::try_from(int(e)?).map_err(|_| JournalError::BadHeader)?))
        };
        let config = RunConfig::parse(&f[5].replace(';', "\n")).map_err(|_| JournalError::BadHeader)?;
        Ok(Header { height: dy(f[1], f[2])?, unit_length: dy(f[3], f[4])?, config })
    }
}

/// State read back from disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Recovered {
    pub header: Header,
    /// Validated records in file order, duplicates removed.
    pub certificates: Vec<ChunkCertificate>,
    /// True if a damaged trailing record was cut off.
    pub truncated: bool,
}

/// Open journal, positioned for appending.
pub struct Journal {
    path: PathBuf,
    file: File,
}

impl Journal {
    /// Create a new journal; fails if the file exists.
    pub fn create(path: &Path, header: &Header) -> Result<Journal, JournalError> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = File::create(&tmp)?;
            f.write_all(header.to_line().as_bytes())?;
            f.sync_all()?;
        }
        if path.exists() {
            fs::remove_file(&tmp)?;
            return Err(JournalError::Io(io::Error::new(io::ErrorKind::AlreadyExists, "journal exists")));
        }
        fs::rename(&tmp, path)?;
        Journal::open_append(path)
    }

    fn open_append(path: &Path) -> Result<Journal, JournalError> {
        let file = OpenOptions::new().append(true).open(path)?;
        Ok(Journal { path: path.to_path_buf(), file })
    }

    /// Replay and validate a journal, cutting off a damaged final record.
    pub fn recover(path: &Path) -> Result<(Journal, Recovered), JournalError> {
        let bytes = fs::read(path)?;
        let (state, keep) = parse_journal(&bytes)?;
        if keep < bytes.len() {
            log::warn!("{}: dropping damaged trailing record ({} bytes)", path.display(), bytes.len() - keep);
            let f = OpenOptions::new().write(true).open(path)?;
            f.set_len(keep as u64)?;
            f.sync_all()?;
        }
        Ok((Journal::open_append(path)?, state))
    }

    /// Read-only replay; nothing on disk is changed.
    pub fn read(path: &Path) -> Result<Recovered, JournalError> {
        Ok(parse_journal(&fs::read(path)?)?.0)
    }

    pub fn append(&mut self, cert: &ChunkCertificate) -> Result<(), JournalError> {
        self.file.write_all(cert.to_line().as_bytes())?;
        self.file.sync_data()?;
        Ok(())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

// Returns the state and the length of the valid prefix.
fn parse_journal(bytes: &[u8]) -> Result<(Recovered, usize), JournalError> {
    let mut lines: Vec<(usize, &[u8])> = Vec::new();
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'\n' {
            lines.push((start, &bytes[start..i]));
            start = i + 1;
        }
    }
    let partial_tail = start < bytes.len();
    let Some(&(_, head)) = lines.first() else {
        return Err(JournalError::BadHeader);
    };
    let header = std::str::from_utf8(head).map_err(|_| JournalError::BadHeader).and_then(Header::parse)?;
    let mut certs: Vec<ChunkCertificate> = Vec::new();
    let mut keep = lines[0].0 + head.len() + 1;
    let mut truncated = partial_tail;
    let n = lines.len();
    for (k, &(off, raw)) in lines.iter().enumerate().skip(1) {
        let ordinal = k as u64;
        let parsed = std::str::from_utf8(raw)
            .map_err(|_| RecordError::Malformed)
            .and_then(ChunkCertificate::parse_line);
        match parsed {
            Ok(c) => {
                if let Some(prev) = certs.iter().find(|p| p.id == c.id) {
                    if *prev != c {
                        return Err(JournalError::Conflict(ordinal));
                    }
                } else {
                    certs.push(c);
                }
                keep = off + raw.len() + 1;
            }
            // A damaged last line is an interrupted write.
            Err(_) if k == n - 1 && !partial_tail => {
                truncated = true;
                break;
            }
            Err(RecordError::ChecksumMismatch { .. }) => return Err(JournalError::ChecksumMismatch(ordinal)),
            Err(RecordError::Malformed) => return Err(JournalError::Malformed(ordinal)),
        }
    }
    Ok((Recovered { header, certificates: certs, truncated }, keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use critline_core::certify::{CertStatus, TuringConstants};

    fn header() -> Header {
        Header { height: Dyadic::from_int(300), unit_length: Dyadic::from_int(100), config: RunConfig::default() }
    }

    fn cert(id: u64) -> ChunkCertificate {
        ChunkCertificate {
            id,
            t_lo: Dyadic::from_int(100 * (id as i64 - 1)),
            t_hi: Dyadic::from_int(100 * id as i64),
            step: Dyadic::new(1, -4),
            zero_count: 10 + id,
            prec_bits: 64,
            constants: TuringConstants::TURING,
            config_hash: RunConfig::default().hash(),
            status: CertStatus::Certified,
        }
    }

    fn write3(dir: &Path) -> PathBuf {
        let p = dir.join("j.rhc");
        let mut j = Journal::create(&p, &header()).unwrap();
        for id in 1..=3 {
            j.append(&cert(id)).unwrap();
        }
        p
    }

    #[test]
    fn three_records_recover() {
        let d = tempfile::tempdir().unwrap();
        let p = write3(d.path());
        let (_, r) = Journal::recover(&p).unwrap();
        assert_eq!(r.header, header());
        assert_eq!(r.certificates.len(), 3);
        assert!(!r.truncated);
        assert!(Journal::create(&p, &header()).is_err());
    }

    #[test]
    fn flipped_byte_is_fatal() {
        let d = tempfile::tempdir().unwrap();
        let p = write3(d.path());
        let mut b = fs::read(&p).unwrap();
        let h = b.iter().position(|&c| c == b'\n').unwrap() + 1;
        let r2 = h + b[h..].iter().position(|&c| c == b'\n').unwrap() + 1;
        b[r2 + 10] ^= 0x01;
        fs::write(&p, &b).unwrap();
        assert!(matches!(Journal::recover(&p), Err(JournalError::ChecksumMismatch(2))));
    }

    #[test]
    fn torn_tail_is_dropped() {
        let d = tempfile::tempdir().unwrap();
        let p = write3(d.path());
        let b = fs::read(&p).unwrap();
        fs::write(&p, &b[..b.len() - 7]).unwrap();
        let (mut j, r) = Journal::recover(&p).unwrap();
        assert!(r.truncated);
        assert_eq!(r.certificates.len(), 2);
        j.append(&cert(3)).unwrap();
        assert_eq!(fs::read(&p).unwrap(), b);
    }
}
