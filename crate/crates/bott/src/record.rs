//! Bit-exact text records for digraphs and the JSON report shapes.
//!
//! A record is `D<k>:<HEX>` where `k` is the decimal vertex count and `HEX`
//! is ceil(k^2/4) uppercase hex digits holding the row-major adjacency bits
//! (row 1 columns 1..k, then row 2, ...), MSB-first, zero-padded at the end
//! to a nibble boundary. The parser also accepts the human-readable arc form
//! `k:(u,v),(u,v),...` with 1-based vertex numbers.

use crate::classify::ClassCensus;
use crate::digraph::{Digraph, N_MAX};
use crate::error::{Error, Result};
use crate::invariants::{Fingerprint, OddHeight};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// Formats a digraph as its canonical textual record.
pub fn format_record(d: &Digraph) -> String {
    let n = d.n();
    let nibbles = (n * n).div_ceil(4);
    let mut out = String::with_capacity(nibbles + 6);
    out.push('D');
    out.push_str(&n.to_string());
    out.push(':');
    let mut nibble = 0u8;
    let mut filled = 0;
    for i in 0..n {
        for j in 0..n {
            nibble = (nibble << 1) | u8::from(d.has_arc(i, j));
            filled += 1;
            if filled == 4 {
                out.push(char::from_digit(nibble as u32, 16).unwrap().to_ascii_uppercase());
                nibble = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        nibble <<= 4 - filled;
        out.push(char::from_digit(nibble as u32, 16).unwrap().to_ascii_uppercase());
    }
    out
}

/// Parses either record form back into a digraph. Strict: exact hex length,
/// zero padding bits, no self-loop bits, no trailing garbage.
pub fn parse_record(text: &str) -> Result<Digraph> {
    if let Some(rest) = text.strip_prefix('D') {
        parse_hex_record(rest)
    } else {
        parse_arc_record(text)
    }
}

fn parse_count(digits: &str) -> Result<usize> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Format(format!("bad vertex count {digits:?}")));
    }
    let n: usize = digits
        .parse()
        .map_err(|_| Error::Format(format!("bad vertex count {digits:?}")))?;
    if n == 0 || n > N_MAX {
        return Err(Error::Format(format!("vertex count {n} outside 1..={N_MAX}")));
    }
    Ok(n)
}

fn parse_hex_record(rest: &str) -> Result<Digraph> {
    let (count, hex) = rest
        .split_once(':')
        .ok_or_else(|| Error::Format("missing ':' in record".into()))?;
    let n = parse_count(count)?;
    let nibbles = (n * n).div_ceil(4);
    if hex.len() != nibbles {
        return Err(Error::Format(format!(
            "expected {nibbles} hex digits for n={n}, got {}",
            hex.len()
        )));
    }
    let mut bits = Vec::with_capacity(nibbles * 4);
    for ch in hex.chars() {
        let value = match ch {
            '0'..='9' => ch as u8 - b'0',
            'A'..='F' => ch as u8 - b'A' + 10,
            _ => return Err(Error::Format(format!("bad hex digit {ch:?}"))),
        };
        for shift in (0..4).rev() {
            bits.push((value >> shift) & 1 == 1);
        }
    }
    if bits[n * n..].iter().any(|&b| b) {
        return Err(Error::Format("nonzero padding bits".into()));
    }
    let mut rows = vec![0u16; n];
    for i in 0..n {
        for j in 0..n {
            if bits[i * n + j] {
                if i == j {
                    return Err(Error::Format(format!("self-loop bit at vertex {}", i + 1)));
                }
                rows[i] |= 1 << j;
            }
        }
    }
    Digraph::from_rows(n, &rows)
}

fn parse_arc_record(text: &str) -> Result<Digraph> {
    let (count, arcs_text) = text
        .split_once(':')
        .ok_or_else(|| Error::Format("missing ':' in record".into()))?;
    let n = parse_count(count)?;
    let mut arcs = Vec::new();
    if !arcs_text.is_empty() {
        let mut rest = arcs_text;
        loop {
            let inner = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Format(format!("expected '(' at {rest:?}")))?;
            let (pair, after) = inner
                .split_once(')')
                .ok_or_else(|| Error::Format("unterminated arc pair".into()))?;
            let (u, v) = pair
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("expected 'u,v' in ({pair})")))?;
            let u: usize =
                u.parse().map_err(|_| Error::Format(format!("bad vertex number {u:?}")))?;
            let v: usize =
                v.parse().map_err(|_| Error::Format(format!("bad vertex number {v:?}")))?;
            if u == 0 || v == 0 {
                return Err(Error::Format("vertex numbers are 1-based".into()));
            }
            arcs.push((u - 1, v - 1));
            match after.strip_prefix(',') {
                Some(more) => rest = more,
                None if after.is_empty() => break,
                None => return Err(Error::Format(format!("trailing garbage {after:?}"))),
            }
        }
    }
    Digraph::from_arcs(n, arcs)
}

// ---- JSON report shapes ---------------------------------------------------

fn serialize_odd_height<S: Serializer>(h: &OddHeight, s: S) -> std::result::Result<S::Ok, S::Error> {
    match h {
        OddHeight::Finite(k) => s.serialize_u64(*k as u64),
        OddHeight::Infinite => s.serialize_str("inf"),
    }
}

fn serialize_profile<S: Serializer>(
    p: &crate::invariants::SiblingProfile,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(p.per_level().len()))?;
    for sizes in p.per_level() {
        seq.serialize_element(sizes)?;
    }
    seq.end()
}

/// JSON shape of a fingerprint report.
#[derive(Serialize)]
pub struct FingerprintReport {
    pub n: usize,
    pub level_sequence: Vec<usize>,
    pub rank: usize,
    pub levelset_cut_ranks: Vec<usize>,
    pub consecutive_cut_ranks: Vec<usize>,
    #[serde(serialize_with = "serialize_profile")]
    pub sibling_profile: crate::invariants::SiblingProfile,
    #[serde(serialize_with = "serialize_odd_height")]
    pub odd_height: OddHeight,
}

impl From<Fingerprint> for FingerprintReport {
    fn from(fp: Fingerprint) -> Self {
        FingerprintReport {
            n: fp.n,
            level_sequence: fp.level_sequence,
            rank: fp.rank,
            levelset_cut_ranks: fp.levelset_cut_ranks,
            consecutive_cut_ranks: fp.consecutive_cut_ranks,
            sibling_profile: fp.sibling_profile,
            odd_height: fp.odd_height,
        }
    }
}

/// JSON shape of a census report.
#[derive(Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub dag_count: u64,
    pub classes: u64,
    pub orientable: u64,
    pub symplectic: u64,
    pub elapsed_ms: u64,
}

impl CensusReport {
    pub fn new(census: &ClassCensus, elapsed_ms: u64) -> CensusReport {
        CensusReport {
            n: census.n,
            dag_count: census.dag_count,
            classes: census.total_classes,
            orientable: census.orientable_classes,
            symplectic: census.symplectic_classes,
            elapsed_ms,
        }
    }
}

/// Serializes a fingerprint to its JSON report line.
pub fn fingerprint_json(fp: &Fingerprint) -> String {
    serde_json::to_string(&FingerprintReport::from(fp.clone())).expect("report serializes")
}

/// Serializes a census to its JSON report line.
pub fn census_json(census: &ClassCensus, elapsed_ms: u64) -> String {
    serde_json::to_string(&CensusReport::new(census, elapsed_ms)).expect("report serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::fingerprint;

    fn p3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_record(&Digraph::edgeless(3).unwrap()), "D3:000");
        assert_eq!(format_record(&p3()), "D3:440");
        assert_eq!(format_record(&Digraph::from_arcs(2, [(0, 1)]).unwrap()), "D2:4");
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_record("D3:440").unwrap(), p3());
        assert_eq!(parse_record("3:(1,2),(2,3)").unwrap(), p3());
        assert_eq!(parse_record("3:").unwrap(), Digraph::edgeless(3).unwrap());
    }

    #[test]
    fn parse_rejects_self_loop_bits() {
        assert!(matches!(parse_record("D2:F"), Err(Error::Format(_))));
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(matches!(parse_record("D3:44"), Err(Error::Format(_)))); // short
        assert!(matches!(parse_record("D3:4400"), Err(Error::Format(_)))); // long
        assert!(matches!(parse_record("D2:5"), Err(Error::Format(_)))); // padding
        assert!(matches!(parse_record("D0:"), Err(Error::Format(_))));
        assert!(matches!(parse_record("D17:0000000000000000000000000000000000000000000000000000000000000000000000000"), Err(Error::Format(_))));
        assert!(matches!(parse_record("D3:44G"), Err(Error::Format(_))));
        assert!(matches!(parse_record("D3"), Err(Error::Format(_))));
        assert!(matches!(parse_record("3:(1,2)x"), Err(Error::Format(_))));
        assert!(matches!(parse_record("3:(0,2)"), Err(Error::Format(_)))); // 1-based
        assert!(matches!(parse_record("D2:6"), Err(Error::Cycle)));
        assert!(matches!(parse_record("2:(1,2),(2,1)"), Err(Error::Cycle)));
    }

    #[test]
    fn round_trip_is_identity() {
        for d in [
            p3(),
            Digraph::edgeless(1).unwrap(),
            Digraph::from_arcs(4, [(0, 1), (0, 2), (1, 3)]).unwrap(),
            Digraph::from_arcs(7, [(6, 0), (5, 0), (4, 1), (3, 2)]).unwrap(),
        ] {
            assert_eq!(parse_record(&format_record(&d)).unwrap(), d);
        }
    }

    #[test]
    fn fingerprint_json_shape() {
        let json = fingerprint_json(&fingerprint(&p3()));
        assert_eq!(
            json,
            "{\"n\":3,\"level_sequence\":[1,1,1],\"rank\":2,\
             \"levelset_cut_ranks\":[0,1,1,1,0,1,0,0],\
             \"consecutive_cut_ranks\":[1,1],\
             \"sibling_profile\":[[1],[1],[1]],\"odd_height\":1}"
        );
        let inf = fingerprint_json(&fingerprint(&Digraph::edgeless(2).unwrap()));
        assert!(inf.ends_with("\"odd_height\":\"inf\"}"));
    }

    #[test]
    fn census_json_shape() {
        let census = ClassCensus {
            n: 3,
            dag_count: 6,
            total_classes: 4,
            orientable_classes: 2,
            symplectic_classes: 0,
            representatives: None,
        };
        assert_eq!(
            census_json(&census, 7),
            "{\"n\":3,\"dag_count\":6,\"classes\":4,\"orientable\":2,\
             \"symplectic\":0,\"elapsed_ms\":7}"
        );
    }
}
