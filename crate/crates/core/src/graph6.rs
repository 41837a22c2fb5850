//! graph6 encoding: a size header followed by the upper triangle of the
//! adjacency matrix, column by column, packed six bits per printable byte.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {position} (0x{byte:02x}) is not a graph6 character")]
    NonPrintable { position: usize, byte: u8 },
    #[error("malformed length header")]
    BadHeader,
    #[error("expected {expected} adjacency bytes, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("padding bits in the last byte are not zero")]
    TrailingBits,
    #[error("graph6 cannot describe the null graph")]
    NullGraph,
}

const HEADER: &str = ">>graph6<<";
const MAX_N: usize = 68_719_476_735;

fn push_size(out: &mut Vec<u8>, n: usize) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

pub fn encode_bytes(g: &Graph) -> Vec<u8> {
    let n = g.n();
    let mut out = Vec::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    push_size(&mut out, n);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out
}

pub fn encode(g: &Graph) -> String {
    // graph6 bytes are always printable ASCII.
    String::from_utf8(encode_bytes(g)).expect("graph6 output is ASCII")
}

pub fn decode(input: &[u8]) -> Result<Graph, Graph6Error> {
    let body = input.strip_prefix(HEADER.as_bytes()).unwrap_or(input);
    let offset = input.len() - body.len();
    if body.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some(position) = body.iter().position(|b| !(63..=126).contains(b)) {
        return Err(Graph6Error::NonPrintable {
            position: position + offset,
            byte: body[position],
        });
    }
    let sextet = |b: u8| (b - 63) as usize;
    let (n, rest) = if body[0] != 126 {
        (sextet(body[0]), &body[1..])
    } else if body.len() >= 2 && body[1] == 126 {
        if body.len() < 8 {
            return Err(Graph6Error::BadHeader);
        }
        let n = body[2..8].iter().fold(0, |acc, &b| (acc << 6) | sextet(b));
        if n <= 258_047 || n > MAX_N {
            return Err(Graph6Error::BadHeader);
        }
        (n, &body[8..])
    } else {
        if body.len() < 4 {
            return Err(Graph6Error::BadHeader);
        }
        let n = body[1..4].iter().fold(0, |acc, &b| (acc << 6) | sextet(b));
        if n <= 62 {
            return Err(Graph6Error::BadHeader);
        }
        (n, &body[4..])
    };
    if n == 0 {
        return Err(Graph6Error::NullGraph);
    }
    let bits = n * (n - 1) / 2;
    let expected = bits.div_ceil(6);
    if rest.len() != expected {
        return Err(Graph6Error::WrongLength {
            expected,
            found: rest.len(),
        });
    }
    let pad = expected * 6 - bits;
    if pad > 0 && sextet(rest[expected - 1]) & ((1 << pad) - 1) != 0 {
        return Err(Graph6Error::TrailingBits);
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = sextet(rest[k / 6]);
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::from_edges(n, edges).expect("decoded edges are valid"))
}

pub fn decode_str(s: &str) -> Result<Graph, Graph6Error> {
    decode(s.trim_end_matches(['\n', '\r']).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        assert_eq!(encode(&Graph::complete(3)), "Bw");
        assert_eq!(decode_str("Bw").unwrap(), Graph::complete(3));
    }

    #[test]
    fn single_vertex() {
        assert_eq!(encode(&Graph::empty(1)), "@");
        assert_eq!(decode_str("@").unwrap(), Graph::empty(1));
    }

    #[test]
    fn path_round_trip() {
        let p = Graph::path(3);
        // bits (0,1)=1 (0,2)=0 (1,2)=1 -> 101000
        assert_eq!(encode(&p), "Bg");
        assert_eq!(decode_str(&encode(&p)).unwrap(), p);
    }

    #[test]
    fn known_corpus_strings() {
        // Petersen graph and K4 as they appear in standard graph6 listings.
        let petersen = decode_str("IheA@GUAo").unwrap();
        assert_eq!((petersen.n(), petersen.m()), (10, 15));
        assert!(petersen.degrees().iter().all(|&d| d == 3));
        assert_eq!(encode(&Graph::complete(4)), "C~");
    }

    #[test]
    fn long_form_sizes() {
        let g = Graph::star(100);
        let s = encode(&g);
        assert!(s.starts_with('~'));
        assert_eq!(decode_str(&s).unwrap(), g);
    }

    #[test]
    fn optional_header() {
        assert_eq!(decode_str(">>graph6<<Bw").unwrap(), Graph::complete(3));
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(decode(b""), Err(Graph6Error::Empty));
        assert_eq!(
            decode(b"B\x07"),
            Err(Graph6Error::NonPrintable { position: 1, byte: 7 })
        );
        assert_eq!(decode(b"Bww"), Err(Graph6Error::WrongLength { expected: 1, found: 2 }));
        // 'x' = 57 = 111001: a padding bit is set.
        assert_eq!(decode(b"Bx"), Err(Graph6Error::TrailingBits));
        assert_eq!(decode(b"~??"), Err(Graph6Error::BadHeader));
        assert_eq!(decode(b"?"), Err(Graph6Error::NullGraph));
    }
}
