//! Shared helpers for the integration tests: independent rank oracles
//! (modular and fraction-free), basis splittings, signed basis transport
//! under graph relabelings, and a from-scratch labeled-graph canonicalizer.

#![allow(dead_code)]

use std::collections::HashSet;

use num::{BigInt, Integer, One, ToPrimitive, Zero};

use g2rig_core::graph::Graph;
use g2rig_core::liealg::{BasisLabel, StructureConstants, Subspace};
use g2rig_core::matrix::{rat, ExactMatrix, Rat};

pub const M61: u64 = (1 << 61) - 1;
pub const P62: u64 = (1 << 62) - 57;

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn residue(x: &BigInt, p: u64, pb: &BigInt) -> u64 {
    let _ = p;
    let r = ((x % pb) + pb) % pb;
    r.to_u64().expect("residue fits")
}

/// Rank over F_p by dense forward elimination.  A lower bound on the
/// rational rank, equal to it unless p divides a pivot minor.
pub fn rank_mod_p(m: &ExactMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(m.n_rows());
    for r in 0..m.n_rows() {
        let mut dense = vec![0u64; m.n_cols()];
        for (c, v) in m.row(r) {
            let num = residue(v.numer(), p, &pb);
            let den = residue(v.denom(), p, &pb);
            assert_ne!(den, 0, "denominator divisible by the modulus");
            dense[*c as usize] = mulmod(num, powmod(den, p - 2, p), p);
        }
        rows.push(dense);
    }
    let cols = m.n_cols();
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = powmod(rows[rank][c], p - 2, p);
        for r in (rank + 1)..rows.len() {
            if rows[r][c] == 0 {
                continue;
            }
            let factor = mulmod(rows[r][c], inv, p);
            for cc in c..cols {
                let sub = mulmod(factor, rows[rank][cc], p);
                rows[r][cc] = (rows[r][cc] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Exact rank by dense fraction-free (Bareiss) elimination over the
/// integers, after clearing denominators row by row.
pub fn rank_bareiss(m: &ExactMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(m.n_rows());
    for r in 0..m.n_rows() {
        let mut scale = BigInt::one();
        for (_, v) in m.row(r) {
            scale = scale.lcm(v.denom());
        }
        let mut dense = vec![BigInt::zero(); m.n_cols()];
        for (c, v) in m.row(r) {
            dense[*c as usize] = v.numer() * (&scale / v.denom());
        }
        a.push(dense);
    }
    let rows = a.len();
    let cols = m.n_cols();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        for r in (rank + 1)..rows {
            if a[r][col].is_zero() {
                // still scale the row so the one-step division law holds
                for c in (col + 1)..cols {
                    if !a[r][c].is_zero() {
                        let val = &pivot * &a[r][c];
                        debug_assert!((&val % &prev).is_zero());
                        a[r][c] = val / &prev;
                    }
                }
                continue;
            }
            for c in (col + 1)..cols {
                let val = &pivot * &a[r][c] - &a[r][col] * &a[rank][c];
                debug_assert!((&val % &prev).is_zero());
                a[r][c] = val / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Standard complement/center split of a graph algebra: non-isolated
/// vertex vectors versus edge and isolated-vertex vectors.
pub fn standard_splitting(g: &Graph, sc: &StructureConstants) -> (Subspace, Subspace) {
    let n = sc.dim();
    let unit = |k: usize| {
        let mut v = vec![Rat::zero(); n];
        v[k] = rat(1);
        v
    };
    let isolated = g.isolated_vertices();
    let mut v_vecs = Vec::new();
    let mut z_vecs = Vec::new();
    for i in 1..=g.num_vertices() {
        if isolated.contains(&i) {
            z_vecs.push(unit(i as usize - 1));
        } else {
            v_vecs.push(unit(i as usize - 1));
        }
    }
    for k in g.num_vertices() as usize..n {
        z_vecs.push(unit(k));
    }
    (
        Subspace::from_vectors(n, v_vecs).expect("vector lengths match"),
        Subspace::from_vectors(n, z_vecs).expect("vector lengths match"),
    )
}

/// The signed basis map induced by a vertex relabeling: vertex vectors
/// permute, an edge vector maps to the relabeled edge vector with sign -1
/// when the relabeling swaps the edge's endpoint order.  Returned as
/// columns over the source basis.
pub fn signed_transport(
    src: &StructureConstants,
    dst: &StructureConstants,
    perm: &[u32],
) -> Vec<Vec<Rat>> {
    let n = src.dim();
    let mut cols = vec![vec![Rat::zero(); n]; n];
    for (k, label) in src.labels().iter().enumerate() {
        match label {
            BasisLabel::Vertex { index } => {
                let image = BasisLabel::Vertex {
                    index: perm[(*index - 1) as usize],
                };
                let pos = dst.label_position(&image).expect("image vertex exists");
                cols[k][pos - 1] = rat(1);
            }
            BasisLabel::Edge { i, j } => {
                let a = perm[(*i - 1) as usize];
                let b = perm[(*j - 1) as usize];
                let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
                let image = BasisLabel::Edge { i: lo, j: hi };
                let pos = dst.label_position(&image).expect("image edge exists");
                cols[k][pos - 1] = rat(sign);
            }
        }
    }
    cols
}

pub fn apply_transport(cols: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    let n = cols.len();
    let mut out = vec![Rat::zero(); n];
    for (k, coeff) in v.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        for (r, entry) in cols[k].iter().enumerate() {
            if !entry.is_zero() {
                out[r] += coeff * entry;
            }
        }
    }
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(current: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let m = used.len();
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        for v in 0..m {
            if !used[v] {
                used[v] = true;
                current.push(v);
                rec(current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Count isomorphism classes of graphs on `m` labeled vertices by brute
/// force: canonicalize all 2^(m choose 2) edge masks as the minimum image
/// over every vertex permutation, using bit tables built from scratch.
pub fn brute_force_class_count(m: u32) -> usize {
    let m = m as usize;
    let mut pair_index = vec![vec![usize::MAX; m]; m];
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            pair_index[i][j] = pairs.len();
            pairs.push((i, j));
        }
    }
    let np = pairs.len();
    assert!(np <= 20, "mask width");
    let tables: Vec<Vec<usize>> = permutations(m)
        .iter()
        .map(|perm| {
            pairs
                .iter()
                .map(|&(i, j)| {
                    let (a, b) = (perm[i], perm[j]);
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    pair_index[lo][hi]
                })
                .collect()
        })
        .collect();
    let mut classes = HashSet::new();
    for mask in 0u32..(1u32 << np) {
        let mut best = u32::MAX;
        for table in &tables {
            let mut image = 0u32;
            for (k, &target) in table.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    image |= 1 << target;
                }
            }
            best = best.min(image);
        }
        classes.insert(best);
    }
    classes.len()
}
