//! Finite simple graphs: construction, graph6 interchange, isomorphism
//! canonicalization, and enumeration up to isomorphism.
//!
//! Vertices are 1-indexed and edges are stored as ordered pairs `(i, j)` with
//! `i < j`.  Canonicalization is an exhaustive minimization over all vertex
//! permutations, which is fast and trivially correct at the supported sizes.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest vertex count accepted by `canonical_key` and `enumerate_graphs`.
pub const CANONICAL_CAP: u32 = 8;

/// Largest vertex count representable in short-form graph6.
pub const GRAPH6_CAP: u32 = 62;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("edge ({i}, {j}) is invalid: {reason}")]
    InvalidEdge { i: u32, j: u32, reason: String },
    #[error("vertex {index} out of range 1..={m}")]
    VertexOutOfRange { index: u32, m: u32 },
    #[error("graph6 error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
    #[error("{m} vertices exceeds the supported cap of {cap}")]
    TooLarge { m: u32, cap: u32 },
    #[error("relabeling is not a permutation of 1..={m}")]
    BadPermutation { m: u32 },
}

/// A finite simple graph on vertices `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    m: u32,
    edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    /// Build a graph, normalizing edge endpoints to `(min, max)` and
    /// collapsing duplicates.  Self loops and out-of-range endpoints are
    /// rejected.
    pub fn new<I>(m: u32, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        if m == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(GraphError::InvalidEdge {
                    i,
                    j,
                    reason: "self loop".into(),
                });
            }
            if i < 1 || i > m || j < 1 || j > m {
                return Err(GraphError::InvalidEdge {
                    i,
                    j,
                    reason: format!("endpoint outside 1..={m}"),
                });
            }
            set.insert((i.min(j), i.max(j)));
        }
        Ok(Graph { m, edges: set })
    }

    /// The edgeless graph on `m` vertices.
    pub fn empty(m: u32) -> Result<Graph, GraphError> {
        Graph::new(m, std::iter::empty())
    }

    /// The complete graph on `m` vertices.
    pub fn complete(m: u32) -> Result<Graph, GraphError> {
        let mut edges = Vec::new();
        for i in 1..=m {
            for j in (i + 1)..=m {
                edges.push((i, j));
            }
        }
        Graph::new(m, edges)
    }

    pub fn num_vertices(&self) -> u32 {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        i != j && self.edges.contains(&(i.min(j), i.max(j)))
    }

    /// All edges containing vertex `i`.
    pub fn incident_edges(&self, i: u32) -> Result<BTreeSet<(u32, u32)>, GraphError> {
        if i < 1 || i > self.m {
            return Err(GraphError::VertexOutOfRange { index: i, m: self.m });
        }
        Ok(self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| a == i || b == i)
            .collect())
    }

    pub fn degree(&self, i: u32) -> Result<usize, GraphError> {
        Ok(self.incident_edges(i)?.len())
    }

    /// Vertices with no incident edge, ascending.
    pub fn isolated_vertices(&self) -> BTreeSet<u32> {
        let mut touched = vec![false; self.m as usize + 1];
        for &(i, j) in &self.edges {
            touched[i as usize] = true;
            touched[j as usize] = true;
        }
        (1..=self.m).filter(|&v| !touched[v as usize]).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == (self.m as usize) * (self.m as usize - 1) / 2
    }

    /// Apply a vertex permutation: `perm[i - 1]` is the image of vertex `i`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Graph, GraphError> {
        if perm.len() != self.m as usize {
            return Err(GraphError::BadPermutation { m: self.m });
        }
        let mut seen = vec![false; self.m as usize + 1];
        for &p in perm {
            if p < 1 || p > self.m || seen[p as usize] {
                return Err(GraphError::BadPermutation { m: self.m });
            }
            seen[p as usize] = true;
        }
        Graph::new(
            self.m,
            self.edges
                .iter()
                .map(|&(i, j)| (perm[i as usize - 1], perm[j as usize - 1])),
        )
    }

    /// Minimal row-major adjacency bitstring over all vertex relabelings.
    pub fn canonical_key(&self) -> Result<CanonicalKey, GraphError> {
        canonical_key(self)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    vertices: u32,
    edges: Vec<(u32, u32)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphWire {
            vertices: self.m,
            edges: self.edges().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Graph, D::Error> {
        let wire = GraphWire::deserialize(d)?;
        Graph::new(wire.vertices, wire.edges).map_err(D::Error::custom)
    }
}

/// Isomorphism-invariant key: the upper-triangular adjacency bits in
/// row-major order, packed most significant bit first and minimized over all
/// `m!` vertex permutations.  Two graphs on the same vertex count are
/// isomorphic exactly when their keys are equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    m: u32,
    bits: u64,
}

impl CanonicalKey {
    pub fn num_vertices(&self) -> u32 {
        self.m
    }

    /// Packed bits; bit `len - 1 - k` holds pair number `k` in row-major
    /// order `(1,2), (1,3), ..., (1,m), (2,3), ...`.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Bitstring length, `m(m-1)/2`.
    pub fn len(&self) -> usize {
        (self.m as usize) * (self.m as usize - 1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bit_string(&self) -> String {
        (0..self.len())
            .map(|k| {
                if self.bits >> (self.len() - 1 - k) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit_string())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.bit_string())
    }
}

/// Row-major pair list and position table for `m` vertices.
fn pair_positions(m: u32) -> (Vec<(u32, u32)>, Vec<Vec<usize>>) {
    let mut pairs = Vec::new();
    let mut pos = vec![vec![usize::MAX; m as usize + 1]; m as usize + 1];
    for i in 1..=m {
        for j in (i + 1)..=m {
            pos[i as usize][j as usize] = pairs.len();
            pairs.push((i, j));
        }
    }
    (pairs, pos)
}

fn for_each_permutation(m: u32, mut f: impl FnMut(&[u32])) {
    let mut perm: Vec<u32> = (1..=m).collect();
    permute_rec(&mut perm, 0, &mut f);
}

fn permute_rec(perm: &mut Vec<u32>, k: usize, f: &mut impl FnMut(&[u32])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute_rec(perm, k + 1, f);
        perm.swap(k, i);
    }
}

/// See [`Graph::canonical_key`].  Brute-force minimization, capped at
/// [`CANONICAL_CAP`] vertices.
pub fn canonical_key(g: &Graph) -> Result<CanonicalKey, GraphError> {
    if g.m > CANONICAL_CAP {
        return Err(GraphError::TooLarge {
            m: g.m,
            cap: CANONICAL_CAP,
        });
    }
    let (pairs, pos) = pair_positions(g.m);
    let len = pairs.len();
    let edges: Vec<(u32, u32)> = g.edges().collect();
    let mut best = u64::MAX;
    for_each_permutation(g.m, |perm| {
        let mut mask = 0u64;
        for &(i, j) in &edges {
            let a = perm[i as usize - 1];
            let b = perm[j as usize - 1];
            let p = pos[a.min(b) as usize][a.max(b) as usize];
            mask |= 1 << (len - 1 - p);
        }
        if mask < best {
            best = mask;
        }
    });
    if best == u64::MAX {
        best = 0;
    }
    Ok(CanonicalKey { m: g.m, bits: best })
}

fn graph_from_key_bits(m: u32, bits: u64) -> Graph {
    let (pairs, _) = pair_positions(m);
    let len = pairs.len();
    let edges = pairs
        .iter()
        .enumerate()
        .filter(|(k, _)| bits >> (len - 1 - k) & 1 == 1)
        .map(|(_, &e)| e);
    Graph::new(m, edges).expect("key bits decode to a valid graph")
}

/// One representative per isomorphism class on exactly `m` vertices, in
/// ascending canonical key order.
///
/// Classes are generated by augmentation: every representative on `m - 1`
/// vertices is extended by one new vertex attached to every subset of the
/// old vertices, and the results are deduplicated by canonical key.  Every
/// class on `m` vertices arises this way, because deleting the vertex that
/// an isomorphism sends to position `m` recovers a smaller class.
pub fn enumerate_graphs(m: u32) -> Result<Vec<Graph>, GraphError> {
    if m == 0 {
        return Err(GraphError::NoVertices);
    }
    if m > CANONICAL_CAP {
        return Err(GraphError::TooLarge {
            m,
            cap: CANONICAL_CAP,
        });
    }
    let mut keys: Vec<u64> = vec![0];
    for k in 2..=m {
        let (_, pos) = pair_positions(k);
        let len = (k as usize) * (k as usize - 1) / 2;
        let prev_len = (k as usize - 1) * (k as usize - 2) / 2;
        let (prev_pairs, _) = pair_positions(k - 1);
        let mut seen = BTreeSet::new();
        for &pk in &keys {
            let mut base = 0u64;
            for (idx, &(i, j)) in prev_pairs.iter().enumerate() {
                if pk >> (prev_len - 1 - idx) & 1 == 1 {
                    base |= 1 << (len - 1 - pos[i as usize][j as usize]);
                }
            }
            for nb in 0u32..(1 << (k - 1)) {
                let mut bits = base;
                for v in 1..k {
                    if nb >> (v - 1) & 1 == 1 {
                        bits |= 1 << (len - 1 - pos[v as usize][k as usize]);
                    }
                }
                let g = graph_from_key_bits(k, bits);
                seen.insert(canonical_key(&g)?.bits);
            }
        }
        keys = seen.into_iter().collect();
    }
    Ok(keys
        .into_iter()
        .map(|bits| graph_from_key_bits(m, bits))
        .collect())
}

/// Column-major upper-triangle pair order used by graph6:
/// `(1,2), (1,3), (2,3), (1,4), (2,4), (3,4), ...`.
fn graph6_pairs(m: u32) -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for j in 2..=m {
        for i in 1..j {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Parse a short-form graph6 string (vertex counts 1..=62).
///
/// The first byte encodes `m + 63`; the remaining bytes pack the
/// column-major upper triangle six bits at a time, most significant bit
/// first, offset by 63, with zero padding to a byte boundary.  Errors name
/// the offending byte offset.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let bytes = text.as_bytes();
    let Some(&size) = bytes.first() else {
        return Err(GraphError::Graph6 {
            offset: 0,
            reason: "empty input".into(),
        });
    };
    if size == 126 {
        return Err(GraphError::Graph6 {
            offset: 0,
            reason: "extended size header; only graphs on at most 62 vertices are supported".into(),
        });
    }
    if !(63..=125).contains(&size) {
        return Err(GraphError::Graph6 {
            offset: 0,
            reason: format!("size byte {size} outside 63..=125"),
        });
    }
    let m = (size - 63) as u32;
    if m == 0 {
        return Err(GraphError::Graph6 {
            offset: 0,
            reason: "zero vertices".into(),
        });
    }
    let nbits = (m as usize) * (m as usize - 1) / 2;
    let need = nbits.div_ceil(6);
    if bytes.len() < 1 + need {
        return Err(GraphError::Graph6 {
            offset: bytes.len(),
            reason: format!("truncated: expected {need} data bytes after the size byte"),
        });
    }
    if bytes.len() > 1 + need {
        return Err(GraphError::Graph6 {
            offset: 1 + need,
            reason: "trailing garbage after graph data".into(),
        });
    }
    let pairs = graph6_pairs(m);
    let mut edges = Vec::new();
    for (d, &byte) in bytes[1..].iter().enumerate() {
        if !(63..=126).contains(&byte) {
            return Err(GraphError::Graph6 {
                offset: 1 + d,
                reason: format!("data byte {byte} outside 63..=126"),
            });
        }
        let six = byte - 63;
        for b in 0..6 {
            let bit_index = d * 6 + b;
            let bit = six >> (5 - b) & 1;
            if bit_index < nbits {
                if bit == 1 {
                    edges.push(pairs[bit_index]);
                }
            } else if bit == 1 {
                return Err(GraphError::Graph6 {
                    offset: 1 + d,
                    reason: "nonzero padding bit".into(),
                });
            }
        }
    }
    Graph::new(m, edges)
}

/// Serialize to short-form graph6; inverse of [`parse_graph6`].
pub fn serialize_graph6(g: &Graph) -> Result<String, GraphError> {
    if g.m > GRAPH6_CAP {
        return Err(GraphError::TooLarge {
            m: g.m,
            cap: GRAPH6_CAP,
        });
    }
    let mut out = vec![63 + g.m as u8];
    let pairs = graph6_pairs(g.m);
    let nbits = pairs.len();
    let mut byte = 0u8;
    let mut filled = 0;
    for (k, &(i, j)) in pairs.iter().enumerate() {
        byte <<= 1;
        if g.has_edge(i, j) {
            byte |= 1;
        }
        filled += 1;
        if filled == 6 || k + 1 == nbits {
            byte <<= 6 - filled;
            out.push(63 + byte);
            byte = 0;
            filled = 0;
        }
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_normalizes_and_validates() {
        let g = Graph::new(3, vec![(2, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3)]);
        assert!(Graph::new(2, vec![(1, 1)]).is_err());
        assert!(Graph::new(2, vec![(1, 3)]).is_err());
        assert!(Graph::new(0, vec![]).is_err());
    }

    #[test]
    fn incident_edges_and_degrees() {
        let star = Graph::new(5, vec![(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        assert_eq!(star.incident_edges(1).unwrap().len(), 4);
        assert_eq!(
            star.incident_edges(3).unwrap().into_iter().collect::<Vec<_>>(),
            vec![(1, 3)]
        );
        assert!(Graph::empty(4).unwrap().incident_edges(2).unwrap().is_empty());
        assert!(star.incident_edges(6).is_err());
        let total: usize = (1..=5).map(|v| star.degree(v).unwrap()).sum();
        assert_eq!(total, 2 * star.edge_count());
    }

    #[test]
    fn isolated_vertices_examples() {
        let g = Graph::new(3, vec![(1, 2)]).unwrap();
        assert_eq!(g.isolated_vertices().into_iter().collect::<Vec<_>>(), vec![3]);
        let c4 = Graph::new(4, vec![(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        assert!(c4.isolated_vertices().is_empty());
        assert_eq!(Graph::empty(3).unwrap().isolated_vertices().len(), 3);
    }

    #[test]
    fn completeness_check() {
        assert!(Graph::complete(4).unwrap().is_complete());
        assert!(Graph::complete(1).unwrap().is_complete());
        let c4 = Graph::new(4, vec![(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        assert!(!c4.is_complete());
    }

    #[test]
    fn graph6_hand_decoded_fixtures() {
        let empty2 = parse_graph6("A?").unwrap();
        assert_eq!(empty2.num_vertices(), 2);
        assert_eq!(empty2.edge_count(), 0);
        let k2 = parse_graph6("A_").unwrap();
        assert_eq!(k2.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        let k4 = parse_graph6("C~").unwrap();
        assert!(k4.is_complete());
        assert_eq!(k4.num_vertices(), 4);
        let k1 = parse_graph6("@").unwrap();
        assert_eq!(k1.num_vertices(), 1);

        assert_eq!(serialize_graph6(&empty2).unwrap(), "A?");
        assert_eq!(serialize_graph6(&k2).unwrap(), "A_");
        assert_eq!(serialize_graph6(&k4).unwrap(), "C~");
    }

    #[test]
    fn graph6_errors_name_offsets() {
        match parse_graph6("") {
            Err(GraphError::Graph6 { offset: 0, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match parse_graph6("A") {
            Err(GraphError::Graph6 { offset: 1, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match parse_graph6("A??") {
            Err(GraphError::Graph6 { offset: 2, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        match parse_graph6("A\u{7f}") {
            Err(GraphError::Graph6 { offset: 1, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        // 'A' header, then data byte with a nonzero bit beyond the single pair.
        match parse_graph6("AO") {
            Err(GraphError::Graph6 { offset: 1, reason }) => {
                assert!(reason.contains("padding"))
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn round_trip_on_enumerated_graphs() {
        for m in 1..=5 {
            for g in enumerate_graphs(m).unwrap() {
                let s = serialize_graph6(&g).unwrap();
                assert_eq!(parse_graph6(&s).unwrap(), g);
            }
        }
    }

    #[test]
    fn canonical_key_examples() {
        let p1 = Graph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        let p2 = Graph::new(3, vec![(2, 1), (1, 3)]).unwrap();
        assert_eq!(p1.canonical_key().unwrap(), p2.canonical_key().unwrap());
        let k3 = Graph::complete(3).unwrap();
        assert_ne!(p1.canonical_key().unwrap(), k3.canonical_key().unwrap());
        assert_eq!(
            Graph::complete(4).unwrap().canonical_key().unwrap().bit_string(),
            "111111"
        );
        assert!(Graph::empty(9).unwrap().canonical_key().is_err());
    }

    #[test]
    fn canonical_key_invariant_under_relabeling() {
        let g = Graph::new(5, vec![(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 5)]).unwrap();
        let perm = vec![3, 5, 1, 2, 4];
        let h = g.relabel(&perm).unwrap();
        assert_eq!(g.canonical_key().unwrap(), h.canonical_key().unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let expect = [1usize, 2, 4, 11, 34, 156];
        for (m, &want) in (1..=6).zip(expect.iter()) {
            assert_eq!(enumerate_graphs(m).unwrap().len(), want, "m = {m}");
        }
    }

    #[test]
    fn enumeration_is_sorted_and_canonical() {
        let graphs = enumerate_graphs(4).unwrap();
        let keys: Vec<_> = graphs
            .iter()
            .map(|g| g.canonical_key().unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
        for (g, k) in graphs.iter().zip(&keys) {
            // representatives are stored in canonical form
            assert_eq!(g.canonical_key().unwrap().bits(), k.bits());
        }
    }
}
