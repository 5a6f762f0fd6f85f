//! Binary index container.
//!
//! Layout: 8-byte magic, little-endian `u32` format version, then three
//! sections (documents, entity postings, edge document frequencies) and an
//! 8-byte end marker. Integers are LEB128 varints; postings are stored as
//! gaps between consecutive ordinals. Edges are written in key order, so
//! saving the same index twice produces identical bytes.

use chrono::{Datelike, NaiveDate};

use super::{DocEntry, DocOrdinal, IndexError, InvertedIndex};
use crate::graph::EdgeKey;

const MAGIC: &[u8; 8] = b"NPIDX\0\r\n";
const END: &[u8; 8] = b"NPIDXEND";
pub const FORMAT_VERSION: u32 = 1;

pub(super) fn encode(ix: &InvertedIndex) -> Vec<u8> {
    let mut w = Writer(Vec::with_capacity(1 << 16));
    w.0.extend_from_slice(MAGIC);
    w.0.extend_from_slice(&FORMAT_VERSION.to_le_bytes());

    w.varint(ix.docs.len() as u64);
    for d in &ix.docs {
        w.str(&d.source);
        w.str(&d.doc_id);
        match d.publication_date {
            None => w.varint(0),
            Some(date) => w.varint(zigzag(date.num_days_from_ce()) + 1),
        }
        w.varint(d.classes.len() as u64);
        for c in &d.classes {
            w.str(c);
        }
    }

    w.varint(ix.entity_ids.len() as u64);
    for (id, list) in ix.entity_ids.iter().zip(&ix.postings) {
        w.str(id);
        w.varint(list.len() as u64);
        let mut prev = 0u32;
        for (i, &DocOrdinal(o)) in list.iter().enumerate() {
            w.varint(if i == 0 { o } else { o - prev } as u64);
            prev = o;
        }
    }

    let mut edges: Vec<(&EdgeKey, &u32)> = ix.edge_df.iter().collect();
    edges.sort_unstable_by(|a, b| a.0.cmp(b.0));
    w.varint(edges.len() as u64);
    for (key, &df) in edges {
        w.str(&key.subject);
        w.str(&key.predicate);
        w.str(&key.object);
        w.varint(df as u64);
    }

    w.0.extend_from_slice(END);
    w.0
}

pub(super) fn decode(bytes: &[u8]) -> Result<InvertedIndex, IndexError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(8)? != MAGIC {
        return Err(corrupt("bad magic header"));
    }
    let version = u32::from_le_bytes(r.take(4)?.try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(corrupt(format!("unsupported format version {version}")));
    }

    let n_docs = r.count()?;
    let mut docs = Vec::with_capacity(n_docs);
    for _ in 0..n_docs {
        let source = r.str()?;
        let doc_id = r.str()?;
        let publication_date = match r.varint()? {
            0 => None,
            v => Some(
                NaiveDate::from_num_days_from_ce_opt(unzigzag(v - 1)?)
                    .ok_or_else(|| corrupt("date out of range"))?,
            ),
        };
        let n_classes = r.count()?;
        let classes = (0..n_classes).map(|_| r.str()).collect::<Result<_, _>>()?;
        docs.push(DocEntry {
            source,
            doc_id,
            publication_date,
            classes,
        });
    }

    let n_entities = r.count()?;
    let mut entity_ids = Vec::with_capacity(n_entities);
    let mut postings = Vec::with_capacity(n_entities);
    for _ in 0..n_entities {
        entity_ids.push(r.str()?);
        let len = r.count()?;
        let mut list = Vec::with_capacity(len);
        let mut cur = 0u64;
        for i in 0..len {
            let gap = r.varint()?;
            if i > 0 && gap == 0 {
                return Err(corrupt("postings not strictly ascending"));
            }
            cur += gap;
            if cur >= n_docs as u64 {
                return Err(corrupt("posting ordinal out of range"));
            }
            list.push(DocOrdinal(cur as u32));
        }
        postings.push(list);
    }

    let n_edges = r.count()?;
    let mut edge_df = std::collections::HashMap::with_capacity(n_edges);
    for _ in 0..n_edges {
        let key = EdgeKey {
            subject: r.str()?,
            predicate: r.str()?,
            object: r.str()?,
        };
        let df = r.varint()?;
        if df == 0 || df > n_docs as u64 {
            return Err(corrupt("edge document frequency out of range"));
        }
        if edge_df.insert(key, df as u32).is_some() {
            return Err(corrupt("duplicate edge"));
        }
    }

    if r.take(8)? != END {
        return Err(corrupt("missing end marker"));
    }
    if r.pos != bytes.len() {
        return Err(corrupt("trailing bytes after end marker"));
    }
    InvertedIndex::from_parts(docs, entity_ids, postings, edge_df).map_err(corrupt)
}

fn corrupt(reason: impl Into<String>) -> IndexError {
    IndexError::CorruptIndex(reason.into())
}

fn zigzag(v: i32) -> u64 {
    ((v << 1) ^ (v >> 31)) as u32 as u64
}

fn unzigzag(v: u64) -> Result<i32, IndexError> {
    let v = u32::try_from(v).map_err(|_| corrupt("date out of range"))?;
    Ok(((v >> 1) as i32) ^ -((v & 1) as i32))
}

struct Writer(Vec<u8>);

impl Writer {
    fn varint(&mut self, mut v: u64) {
        while v >= 0x80 {
            self.0.push((v as u8) | 0x80);
            v >>= 7;
        }
        self.0.push(v as u8);
    }

    fn str(&mut self, s: &str) {
        self.varint(s.len() as u64);
        self.0.extend_from_slice(s.as_bytes());
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], IndexError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| corrupt("unexpected end of file"))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn varint(&mut self) -> Result<u64, IndexError> {
        let mut v = 0u64;
        for shift in (0..64).step_by(7) {
            let b = self.take(1)?[0];
            v |= ((b & 0x7f) as u64) << shift;
            if b & 0x80 == 0 {
                return Ok(v);
            }
        }
        Err(corrupt("varint overflow"))
    }

    /// A length prefix; bounded by the remaining bytes so corrupt input
    /// cannot trigger huge allocations.
    fn count(&mut self) -> Result<usize, IndexError> {
        let v = self.varint()?;
        if v > (self.buf.len() - self.pos) as u64 {
            return Err(corrupt("length prefix exceeds file size"));
        }
        Ok(v as usize)
    }

    fn str(&mut self) -> Result<String, IndexError> {
        let n = self.count()?;
        let bytes = self.take(n)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| corrupt("invalid UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zigzag_round_trip() {
        for v in [0, 1, -1, 737_000, -5, i32::MAX, i32::MIN] {
            assert_eq!(unzigzag(zigzag(v)).unwrap(), v);
        }
    }

    #[test]
    fn varint_round_trip() {
        let mut w = Writer(Vec::new());
        for v in [0u64, 127, 128, 300, u32::MAX as u64, u64::MAX] {
            w.varint(v);
        }
        let mut r = Reader { buf: &w.0, pos: 0 };
        for v in [0u64, 127, 128, 300, u32::MAX as u64, u64::MAX] {
            assert_eq!(r.varint().unwrap(), v);
        }
    }
}
