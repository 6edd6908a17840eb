//! The deformation complex of a 2-step algebra, restricted to the variety
//! of at-most-2-step brackets.
//!
//! For a bracket mu on an n-dimensional space the relevant pieces are
//!
//! * `delta1 : C1 -> C2`, `(delta1 f)(x,y) = [f(x),y] + [x,f(y)] - f([x,y])`,
//!   whose image `B2` consists of the directions obtained by moving mu along
//!   a change of basis;
//! * `delta2 : C2 -> C3`, the usual second coboundary with adjoint
//!   coefficients, whose kernel `Z2` consists of cocycles;
//! * the tangency map `T : C2 -> Lambda2 g* tensor g* tensor g`,
//!   `(T phi)(x,y,z) = phi(mu(x,y),z) + mu(phi(x,y),z)`, the first-order
//!   condition for `mu + t phi` to stay 2-step;
//! * a central-pair closure block: along a curve `mu_t = mu + t phi + t^2 psi`
//!   of at-most-2-step brackets, expanding `mu_t(mu_t(v,z),v)` for a
//!   non-central basis vector `v` and central basis vector `z` makes the
//!   t^2 coefficient `phi(phi(v,z),v) + mu(psi(v,z),v)`; the second summand
//!   lies in the derived subalgebra of mu whatever psi is, so any component
//!   of `phi(v,z)` outside the derived subalgebra feeds an uncancellable
//!   obstruction and must vanish on genuine deformation directions.
//!
//! `Z2_2nil` is the intersection of the kernels of the last three blocks and
//! `h2 = dim Z2_2nil - rank delta1`.  Vanishing of h2 certifies 2-rigidity.

use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::liealg::{center, derived_subalgebra, two_step_check, StructureConstants, Subspace};
use crate::matrix::{invert_dense, ColumnSpace, ExactMatrix, Rat};

/// Largest algebra dimension for which full cohomology runs by default.
pub const DEFAULT_COHOMOLOGY_CAP: u32 = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("bracket is not 2-step nilpotent; the complex is only assembled for at-most-2-step brackets")]
    NotTwoStep,
    #[error("algebra dimension {n} exceeds the cohomology cap {cap}")]
    CapExceeded { n: usize, cap: u32 },
    #[error("cochain vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid splitting: {0}")]
    InvalidDecomposition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Flat index maps for the cochain spaces of an n-dimensional algebra.
///
/// All basis indices are 1-based; flat positions are 0-based.
///
/// * level 1, maps `e_a -> e_b`: position `(a-1)*n + (b-1)`;
/// * level 2, `(a ^ b -> c)` with `a < b`: position `pair(a,b)*n + (c-1)`
///   where pairs run row-major `(1,2), (1,3), ..., (2,3), ...`;
/// * level 3, `(a ^ b ^ c -> d)` with `a < b < c`: lexicographic triples,
///   position `triple(a,b,c)*n + (d-1)`;
/// * the tangency target `(a ^ b; c -> d)` with `a < b` and `c` free:
///   position `(pair(a,b)*n + (c-1))*n + (d-1)`.
#[derive(Clone, Debug)]
pub struct CochainBasis {
    n: usize,
    pairs: Vec<(usize, usize)>,
    pair_pos: Vec<Vec<usize>>,
    triples: Vec<(usize, usize, usize)>,
    triple_pos: Vec<usize>,
}

impl CochainBasis {
    pub fn new(n: usize) -> CochainBasis {
        let mut pairs = Vec::new();
        let mut pair_pos = vec![vec![usize::MAX; n + 1]; n + 1];
        for a in 1..=n {
            for b in (a + 1)..=n {
                pair_pos[a][b] = pairs.len();
                pairs.push((a, b));
            }
        }
        let mut triples = Vec::new();
        let mut triple_pos = vec![usize::MAX; (n + 1) * (n + 1) * (n + 1)];
        for a in 1..=n {
            for b in (a + 1)..=n {
                for c in (b + 1)..=n {
                    triple_pos[(a * (n + 1) + b) * (n + 1) + c] = triples.len();
                    triples.push((a, b, c));
                }
            }
        }
        CochainBasis {
            n,
            pairs,
            pair_pos,
            triples,
            triple_pos,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn triples(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }

    pub fn c1_dim(&self) -> usize {
        self.n * self.n
    }

    pub fn c2_dim(&self) -> usize {
        self.pairs.len() * self.n
    }

    pub fn c3_dim(&self) -> usize {
        self.triples.len() * self.n
    }

    pub fn tangency_dim(&self) -> usize {
        self.pairs.len() * self.n * self.n
    }

    pub fn pair_index(&self, a: usize, b: usize) -> usize {
        assert!(a < b && b <= self.n, "pair ({a}, {b}) out of range");
        self.pair_pos[a][b]
    }

    pub fn c1_position(&self, a: usize, b: usize) -> usize {
        assert!((1..=self.n).contains(&a) && (1..=self.n).contains(&b));
        (a - 1) * self.n + (b - 1)
    }

    pub fn c1_label(&self, pos: usize) -> (usize, usize) {
        assert!(pos < self.c1_dim());
        (pos / self.n + 1, pos % self.n + 1)
    }

    pub fn c2_position(&self, a: usize, b: usize, c: usize) -> usize {
        assert!((1..=self.n).contains(&c));
        self.pair_index(a, b) * self.n + (c - 1)
    }

    pub fn c2_label(&self, pos: usize) -> (usize, usize, usize) {
        assert!(pos < self.c2_dim());
        let (a, b) = self.pairs[pos / self.n];
        (a, b, pos % self.n + 1)
    }

    pub fn c3_position(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        assert!(a < b && b < c && c <= self.n && (1..=self.n).contains(&d));
        self.triple_pos[(a * (self.n + 1) + b) * (self.n + 1) + c] * self.n + (d - 1)
    }

    pub fn c3_label(&self, pos: usize) -> (usize, usize, usize, usize) {
        assert!(pos < self.c3_dim());
        let (a, b, c) = self.triples[pos / self.n];
        (a, b, c, pos % self.n + 1)
    }

    pub fn tangency_position(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        assert!((1..=self.n).contains(&c) && (1..=self.n).contains(&d));
        (self.pair_index(a, b) * self.n + (c - 1)) * self.n + (d - 1)
    }

    pub fn tangency_label(&self, pos: usize) -> (usize, usize, usize, usize) {
        assert!(pos < self.tangency_dim());
        let (a, b) = self.pairs[pos / (self.n * self.n)];
        let rem = pos % (self.n * self.n);
        (a, b, rem / self.n + 1, rem % self.n + 1)
    }
}

/// Nonzero structure constants as `table[i][j] = [(k, c[i][j][k])]`, 0-based
/// in i, j and 1-based in k.
fn nonzero_table(sc: &StructureConstants) -> Vec<Vec<Vec<(usize, Rat)>>> {
    let n = sc.dim();
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    (1..=n)
                        .filter_map(|k| {
                            let v = sc.structure_constant(i, j, k);
                            (!v.is_zero()).then(|| (k, v.clone()))
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn require_two_step(sc: &StructureConstants) -> Result<(), CohomologyError> {
    if two_step_check(sc) {
        Ok(())
    } else {
        Err(CohomologyError::NotTwoStep)
    }
}

/// Matrix of `delta1 : C1 -> C2`; its column space is `B2`.
pub fn delta1_matrix(sc: &StructureConstants) -> Result<ExactMatrix, CohomologyError> {
    require_two_step(sc)?;
    let n = sc.dim();
    let cb = CochainBasis::new(n);
    let adj = nonzero_table(sc);
    let mut trip = Vec::new();
    for &(a, b) in cb.pairs() {
        // [f(a), b]: the column f = (a -> q) picks up [e_q, e_b]
        for q in 1..=n {
            for (k, v) in &adj[q - 1][b - 1] {
                trip.push((cb.c2_position(a, b, *k), cb.c1_position(a, q), v.clone()));
            }
        }
        // [a, f(b)]: the column f = (b -> q) picks up [e_a, e_q]
        for q in 1..=n {
            for (k, v) in &adj[a - 1][q - 1] {
                trip.push((cb.c2_position(a, b, *k), cb.c1_position(b, q), v.clone()));
            }
        }
        // -f([a,b]): [e_a,e_b] = sum_j c_j e_j hits the column f = (j -> q)
        for (j, v) in &adj[a - 1][b - 1] {
            for q in 1..=n {
                trip.push((cb.c2_position(a, b, q), cb.c1_position(*j, q), -v.clone()));
            }
        }
    }
    Ok(ExactMatrix::from_triplets(cb.c2_dim(), cb.c1_dim(), trip))
}

/// `phi(e_u, e_v)` read off a level-2 column: the pair is stored sorted, so
/// an out-of-order evaluation flips the sign.  Returns nothing when u = v.
fn sorted_pair(u: usize, v: usize) -> Option<(usize, usize, i32)> {
    match u.cmp(&v) {
        std::cmp::Ordering::Less => Some((u, v, 1)),
        std::cmp::Ordering::Greater => Some((v, u, -1)),
        std::cmp::Ordering::Equal => None,
    }
}

/// Matrix of `delta2 : C2 -> C3`; its kernel is `Z2`.
pub fn delta2_matrix(sc: &StructureConstants) -> Result<ExactMatrix, CohomologyError> {
    require_two_step(sc)?;
    let n = sc.dim();
    let cb = CochainBasis::new(n);
    let adj = nonzero_table(sc);
    let mut trip = Vec::new();
    for &(a, b, c) in cb.triples() {
        // bracket terms [e_a, phi(b,c)] - [e_b, phi(a,c)] + [e_c, phi(a,b)]
        for (x, pair, sign) in [(a, (b, c), 1), (b, (a, c), -1), (c, (a, b), 1)] {
            for r in 1..=n {
                for (k, v) in &adj[x - 1][r - 1] {
                    let val = if sign > 0 { v.clone() } else { -v.clone() };
                    trip.push((
                        cb.c3_position(a, b, c, *k),
                        cb.c2_position(pair.0, pair.1, r),
                        val,
                    ));
                }
            }
        }
        // argument terms -phi([a,b],c) + phi([a,c],b) - phi([b,c],a)
        for (pair, other, sign) in [((a, b), c, -1), ((a, c), b, 1), ((b, c), a, -1)] {
            for (j, v) in &adj[pair.0 - 1][pair.1 - 1] {
                let Some((p, q, flip)) = sorted_pair(*j, other) else {
                    continue;
                };
                for r in 1..=n {
                    let val = if sign * flip > 0 { v.clone() } else { -v.clone() };
                    trip.push((cb.c3_position(a, b, c, r), cb.c2_position(p, q, r), val));
                }
            }
        }
    }
    Ok(ExactMatrix::from_triplets(cb.c3_dim(), cb.c2_dim(), trip))
}

/// Matrix of the first-order 2-step tangency condition
/// `T(phi)(x,y,z) = phi(mu(x,y),z) + mu(phi(x,y),z)`, rows indexed by the
/// tangency basis of [`CochainBasis`].  The target keeps `z` free (no
/// antisymmetrization beyond the first two arguments): the condition has no
/// symmetry in `z`, and symmetrizing would drop constraints.
pub fn tangency_matrix(sc: &StructureConstants) -> Result<ExactMatrix, CohomologyError> {
    require_two_step(sc)?;
    let n = sc.dim();
    let cb = CochainBasis::new(n);
    let adj = nonzero_table(sc);
    let mut trip = Vec::new();
    for &(a, b) in cb.pairs() {
        for c in 1..=n {
            // phi(mu(a,b), c)
            for (j, v) in &adj[a - 1][b - 1] {
                let Some((p, q, flip)) = sorted_pair(*j, c) else {
                    continue;
                };
                for r in 1..=n {
                    let val = if flip > 0 { v.clone() } else { -v.clone() };
                    trip.push((
                        cb.tangency_position(a, b, c, r),
                        cb.c2_position(p, q, r),
                        val,
                    ));
                }
            }
            // mu(phi(a,b), c): the column (a^b -> r) picks up [e_r, e_c]
            for r in 1..=n {
                for (k, v) in &adj[r - 1][c - 1] {
                    trip.push((
                        cb.tangency_position(a, b, c, *k),
                        cb.c2_position(a, b, r),
                        v.clone(),
                    ));
                }
            }
        }
    }
    Ok(ExactMatrix::from_triplets(
        cb.tangency_dim(),
        cb.c2_dim(),
        trip,
    ))
}

/// Second-order closure rows (see the module docs): for every non-central
/// basis vector `e_v` and central basis vector `e_z`, the value
/// `phi(e_v, e_z)` must lie in the derived subalgebra.  One row per such
/// pair and per annihilator functional of the derived subalgebra.
pub fn central_pair_matrix(sc: &StructureConstants) -> Result<ExactMatrix, CohomologyError> {
    require_two_step(sc)?;
    let n = sc.dim();
    let cb = CochainBasis::new(n);
    let z = center(sc);
    let derived = derived_subalgebra(sc);

    let mut unit = vec![Rat::zero(); n];
    let mut central = Vec::new();
    let mut non_central = Vec::new();
    for k in 1..=n {
        unit[k - 1] = Rat::from_integer(1.into());
        if z.contains_vector(&unit) {
            central.push(k);
        } else {
            non_central.push(k);
        }
        unit[k - 1] = Rat::zero();
    }

    // functionals vanishing on the derived subalgebra, via the kernel of the
    // matrix whose rows are its basis vectors
    let span_rows: Vec<(usize, usize, Rat)> = derived
        .basis()
        .iter()
        .enumerate()
        .flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(c, v)| (r, c, v.clone()))
        })
        .collect();
    let annihilator =
        ExactMatrix::from_triplets(derived.dim(), n, span_rows).kernel_basis();

    let mut trip = Vec::new();
    let mut row = 0;
    for &v in &non_central {
        for &zc in &central {
            let (p, q, _) = sorted_pair(v, zc).expect("central and non-central indices differ");
            for u in &annihilator {
                for (d, ud) in u.iter().enumerate() {
                    if !ud.is_zero() {
                        trip.push((row, cb.c2_position(p, q, d + 1), ud.clone()));
                    }
                }
                row += 1;
            }
        }
    }
    Ok(ExactMatrix::from_triplets(row, cb.c2_dim(), trip))
}

/// All dimensions the complex produces for one algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub c1_dim: usize,
    pub c2_dim: usize,
    pub c3_dim: usize,
    pub delta1_rank: usize,
    pub ker_delta2_dim: usize,
    pub ker_tangency_dim: usize,
    pub z2_nil_dim: usize,
    pub h2_nil_dim: usize,
}

/// Assemble the full complex and compute every dimension.
///
/// `z2_nil_dim` is the dimension of the joint kernel of `delta2`, the
/// tangency block, and the central-pair block; `h2_nil_dim` subtracts
/// `rank delta1`.  The containment of the coboundary space in that joint
/// kernel is verified by an exact matrix product on every call.
pub fn cohomology_report(
    sc: &StructureConstants,
    cap: u32,
) -> Result<CohomologyReport, CohomologyError> {
    require_two_step(sc)?;
    let n = sc.dim();
    if n > cap as usize {
        return Err(CohomologyError::CapExceeded { n, cap });
    }
    let cb = CochainBasis::new(n);
    let d1 = delta1_matrix(sc)?;
    let d2 = delta2_matrix(sc)?;
    let tan = tangency_matrix(sc)?;
    let pairs = central_pair_matrix(sc)?;
    let stacked = d2.stack(&tan).stack(&pairs);
    if !stacked.mul(&d1).is_zero() {
        return Err(CohomologyError::Inconsistent(
            "coboundaries are not contained in the joint kernel".into(),
        ));
    }
    let c2 = cb.c2_dim();
    let delta1_rank = d1.rank();
    let z2_nil_dim = c2 - stacked.rank();
    if z2_nil_dim < delta1_rank {
        return Err(CohomologyError::Inconsistent(format!(
            "joint kernel dimension {z2_nil_dim} is smaller than rank delta1 = {delta1_rank}"
        )));
    }
    Ok(CohomologyReport {
        c1_dim: cb.c1_dim(),
        c2_dim: c2,
        c3_dim: cb.c3_dim(),
        delta1_rank,
        ker_delta2_dim: c2 - d2.rank(),
        ker_tangency_dim: c2 - tan.rank(),
        z2_nil_dim,
        h2_nil_dim: z2_nil_dim - delta1_rank,
    })
}

/// `dim Z2_2nil - rank delta1`; zero certifies 2-rigidity.
pub fn h2_nil_dimension(sc: &StructureConstants, cap: u32) -> Result<usize, CohomologyError> {
    Ok(cohomology_report(sc, cap)?.h2_nil_dim)
}

/// Column space of `delta1`, reusable across membership queries.
pub fn coboundary_space(sc: &StructureConstants) -> Result<ColumnSpace, CohomologyError> {
    Ok(delta1_matrix(sc)?.column_space())
}

/// True iff `phi` is outside the coboundary space, i.e. appending its
/// column to `delta1` raises the rank by one.
pub fn cocycle_not_coboundary(
    sc: &StructureConstants,
    phi: &[Rat],
) -> Result<bool, CohomologyError> {
    let space = coboundary_space(sc)?;
    cocycle_not_coboundary_with(&space, phi)
}

/// [`cocycle_not_coboundary`] against a precomputed coboundary space.
pub fn cocycle_not_coboundary_with(
    space: &ColumnSpace,
    phi: &[Rat],
) -> Result<bool, CohomologyError> {
    if phi.len() != space.len() {
        return Err(CohomologyError::LengthMismatch {
            expected: space.len(),
            got: phi.len(),
        });
    }
    Ok(!space.contains(phi))
}

/// Containment `Lambda2 v* tensor z` inside the coboundary space `B2`.
///
/// `v_basis` must be a complement of the center and `z_basis` the center
/// itself.  Every generator `v_a* ^ v_b* tensor z_c` (duals taken with
/// respect to the combined basis) is tested for membership in `B2`; a
/// single failure returns false.  Failure certifies non-rigidity; success
/// alone certifies nothing.
pub fn alvarez_test(
    sc: &StructureConstants,
    v_basis: &Subspace,
    z_basis: &Subspace,
) -> Result<bool, CohomologyError> {
    let space = coboundary_space(sc)?;
    alvarez_test_with(sc, &space, v_basis, z_basis)
}

/// [`alvarez_test`] against a precomputed coboundary space.
pub fn alvarez_test_with(
    sc: &StructureConstants,
    space: &ColumnSpace,
    v_basis: &Subspace,
    z_basis: &Subspace,
) -> Result<bool, CohomologyError> {
    let n = sc.dim();
    if v_basis.ambient_dim() != n || z_basis.ambient_dim() != n {
        return Err(CohomologyError::InvalidDecomposition(format!(
            "basis ambient dimensions must equal the algebra dimension {n}"
        )));
    }
    if z_basis != &center(sc) {
        return Err(CohomologyError::InvalidDecomposition(
            "z_basis is not the center".into(),
        ));
    }
    let p = v_basis.dim();
    let q = z_basis.dim();
    if p + q != n {
        return Err(CohomologyError::InvalidDecomposition(format!(
            "complement dimension {p} plus center dimension {q} must equal {n}"
        )));
    }
    // dual functionals with respect to the combined column basis [v | z]
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n);
    cols.extend(v_basis.basis().iter().cloned());
    cols.extend(z_basis.basis().iter().cloned());
    let mut mat = vec![vec![Rat::zero(); n]; n];
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            mat[r][c] = v.clone();
        }
    }
    let Some(inverse) = invert_dense(&mat) else {
        return Err(CohomologyError::InvalidDecomposition(
            "v_basis and z_basis do not span the ambient space".into(),
        ));
    };
    let duals = &inverse[..p];

    let cb = CochainBasis::new(n);
    for a in 0..p {
        for b in (a + 1)..p {
            for zc in z_basis.basis() {
                let mut phi = vec![Rat::zero(); cb.c2_dim()];
                for (i, dai) in duals[a].iter().enumerate() {
                    for (j, dbj) in duals[b].iter().enumerate() {
                        if i >= j {
                            continue;
                        }
                        let wedge = dai * dbj - &duals[b][i] * &duals[a][j];
                        if wedge.is_zero() {
                            continue;
                        }
                        for (d, zd) in zc.iter().enumerate() {
                            if !zd.is_zero() {
                                phi[cb.c2_position(i + 1, j + 1, d + 1)] += &wedge * zd;
                            }
                        }
                    }
                }
                if !space.contains(&phi) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
