//! graph6 encoding: a size header followed by the upper triangle of the
//! adjacency matrix, column by column, packed six bits per printable byte.

use thiserror::Error;

use crate::graph::Graph;

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 line")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 range 63..=126")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("truncated size header at offset {offset}")]
    TruncatedHeader { offset: usize },
    #[error("expected {expected} data bytes after the header, found {found} (offset {offset})")]
    WrongLength {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("padding bits set in final byte at offset {offset}")]
    NonzeroPadding { offset: usize },
}

/// Parses one graph6 line. A trailing newline and an optional `>>graph6<<`
/// header are accepted.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let line = line.trim_end_matches(['\n', '\r']);
    let (skip, body) = match line.strip_prefix(HEADER) {
        Some(rest) => (HEADER.len(), rest.as_bytes()),
        None => (0, line.as_bytes()),
    };
    if body.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some((i, &b)) = body.iter().enumerate().find(|(_, &b)| !(63..=126).contains(&b)) {
        return Err(Graph6Error::InvalidByte {
            offset: skip + i,
            byte: b,
        });
    }
    let (n, header_len) = decode_size(body, skip)?;
    let data = &body[header_len..];
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if data.len() != expected {
        return Err(Graph6Error::WrongLength {
            offset: skip + header_len + data.len().min(expected),
            expected,
            found: data.len(),
        });
    }
    if bits % 6 != 0 {
        let last = data[expected - 1] - 63;
        let pad = 6 - bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::NonzeroPadding {
                offset: skip + header_len + expected - 1,
            });
        }
    }

    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    // Edges come straight off a triangle, so they are loop-free and distinct.
    Ok(Graph::from_edges(n, &edges).expect("graph6 bitstream yields a simple graph"))
}

fn decode_size(body: &[u8], skip: usize) -> Result<(usize, usize), Graph6Error> {
    let sextets = |bytes: &[u8]| {
        bytes
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63))
    };
    if body[0] != 126 {
        return Ok((usize::from(body[0] - 63), 1));
    }
    if body.len() >= 2 && body[1] == 126 {
        if body.len() < 8 {
            return Err(Graph6Error::TruncatedHeader { offset: skip + body.len() });
        }
        return Ok((sextets(&body[2..8]), 8));
    }
    if body.len() < 4 {
        return Err(Graph6Error::TruncatedHeader { offset: skip + body.len() });
    }
    Ok((sextets(&body[1..4]), 4))
}

/// Encodes `g` under its current labeling (no newline).
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
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
    let bits = n * n.saturating_sub(1) / 2;
    let mut data = vec![0u8; bits.div_ceil(6)];
    for (u, v) in g.edges() {
        // edges() yields u < v; the bit for (u, v) sits in column v.
        let k = v * (v - 1) / 2 + u;
        data[k / 6] |= 1 << (5 - k % 6);
    }
    out.extend(data.into_iter().map(|b| b + 63));
    String::from_utf8(out).expect("graph6 is ASCII")
}
