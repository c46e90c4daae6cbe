//! Byte framing shared by every serialized object.
//!
//! An object starts with a one-byte format version and the suite id
//! (one length byte, then ASCII). Fields follow in a fixed order; variable
//! fields carry a 4-byte big-endian length prefix. Readers are strict: a
//! short buffer, an oversized prefix, or leftover bytes are all errors, so
//! every accepted byte string re-encodes to itself.

use crate::error::{DecodeError, Error, Result};

pub const FORMAT_VERSION: u8 = 1;

#[derive(Debug, Default, Clone)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts an object with the version byte and suite id.
    pub fn with_header(suite_id: &str) -> Self {
        let mut w = Self::new();
        w.u8(FORMAT_VERSION);
        assert!(suite_id.len() <= u8::MAX as usize);
        w.u8(suite_id.len() as u8);
        w.buf.extend_from_slice(suite_id.as_bytes());
        w
    }

    pub fn u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn u32(&mut self, v: u32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_be_bytes());
        self
    }

    /// Length-prefixed byte field.
    pub fn bytes(&mut self, v: &[u8]) -> &mut Self {
        let len = u32::try_from(v.len()).expect("field longer than 4 GiB");
        self.u32(len);
        self.buf.extend_from_slice(v);
        self
    }

    pub fn str(&mut self, v: &str) -> &mut Self {
        self.bytes(v.as_bytes())
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

#[derive(Debug, Clone)]
pub struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf }
    }

    /// Consumes the object header and checks the suite id.
    pub fn header(buf: &'a [u8], suite_id: &str) -> Result<Self> {
        let mut r = Self::new(buf);
        let found = r.read_header()?;
        if found != suite_id {
            return Err(Error::SuiteMismatch { expected: suite_id.to_owned(), found });
        }
        Ok(r)
    }

    fn read_header(&mut self) -> Result<String, DecodeError> {
        let version = self.u8()?;
        if version != FORMAT_VERSION {
            return Err(DecodeError::UnsupportedVersion(version));
        }
        let len = self.u8()? as usize;
        let raw = self.take(len)?;
        if !raw.is_ascii() {
            return Err(DecodeError::InvalidUtf8("suite id"));
        }
        Ok(String::from_utf8(raw.to_vec()).expect("ascii"))
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.buf.len() < n {
            return Err(DecodeError::Truncated);
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    pub fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32, DecodeError> {
        let raw = self.take(4)?;
        Ok(u32::from_be_bytes(raw.try_into().expect("4 bytes")))
    }

    pub fn u64(&mut self) -> Result<u64, DecodeError> {
        let raw = self.take(8)?;
        Ok(u64::from_be_bytes(raw.try_into().expect("8 bytes")))
    }

    pub fn bytes(&mut self) -> Result<&'a [u8], DecodeError> {
        let len = self.u32()? as usize;
        self.take(len)
    }

    pub fn str(&mut self, field: &'static str) -> Result<String, DecodeError> {
        let raw = self.bytes()?;
        std::str::from_utf8(raw).map(str::to_owned).map_err(|_| DecodeError::InvalidUtf8(field))
    }

    pub fn finish(self) -> Result<(), DecodeError> {
        match self.buf.len() {
            0 => Ok(()),
            n => Err(DecodeError::TrailingBytes(n)),
        }
    }
}

/// Reads only the header of a serialized object and returns its suite id.
pub fn peek_suite_id(buf: &[u8]) -> Result<String, DecodeError> {
    Reader::new(buf).read_header()
}

/// Hex armor used for files: lowercase hex and a trailing newline.
pub fn armor(bytes: &[u8]) -> String {
    let mut s = hex::encode(bytes);
    s.push('\n');
    s
}

pub fn dearmor(text: &str) -> Result<Vec<u8>, DecodeError> {
    hex::decode(text.trim()).map_err(|_| DecodeError::InvalidHex)
}
