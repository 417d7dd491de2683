//! Closed triangulated 3-dimensional pseudo-manifolds: simplex tables,
//! orientation, coboundary matrices, integral homology, the `d + δ` block
//! matrix and cyclic covers.
//!
//! Simplices are stored as sorted vertex tuples in lexicographic order; the
//! global vertex order fixes every incidence sign and the cup product.

mod cochain;
mod cover;

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::linalg::{abs_det, invariant_factors, DixonSolver, Elimination, IntegerMatrix, Rational};
use crate::presentations::AbelianInvariants;

pub use cochain::{Cochain, CochainError};
pub use cover::{cyclic_cover, pullback_cochain, Cover, CoverError, CoverSpec};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TriangulationError {
    #[error("triangulation has no tetrahedra")]
    Empty,
    #[error("not simplicial: tetrahedron {tetrahedron} uses vertex {vertex}, but there are {vertex_count} vertices")]
    VertexOutOfRange {
        tetrahedron: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("not simplicial: tetrahedron {tetrahedron} repeats a vertex")]
    RepeatedVertex { tetrahedron: usize },
    #[error("not simplicial: tetrahedra {first} and {second} span the same vertices")]
    DuplicateTetrahedron { first: usize, second: usize },
    #[error("triangle {triangle:?} shared by {count} tetrahedra")]
    TriangleDegree { triangle: [usize; 3], count: usize },
    #[error("Euler characteristic is {0}, expected 0")]
    EulerCharacteristic(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("non-orientable: orientations disagree across triangle {triangle:?}")]
pub struct OrientationError {
    pub triangle: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DPlusDeltaError {
    #[error("not a rational homology sphere: {0}")]
    NotQhs(QhsFailure),
    #[error("d+δ degenerate: rank {rank} of {size}")]
    Degenerate { rank: usize, size: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QhsFailure {
    NonOrientable,
    Disconnected,
    Betti { b1: usize, b2: usize },
}

impl fmt::Display for QhsFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QhsFailure::NonOrientable => f.write_str("non-orientable"),
            QhsFailure::Disconnected => f.write_str("disconnected"),
            QhsFailure::Betti { b1, b2 } => write!(f, "b1 = {}, b2 = {}", b1, b2),
        }
    }
}

/// A validated closed 3-dimensional pseudo-manifold with Euler
/// characteristic zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
    tetrahedra: Vec<[usize; 4]>,
    orientation: Result<Vec<i8>, OrientationError>,
}

fn faces<const N: usize, const M: usize>(s: &[usize; N]) -> impl Iterator<Item = (usize, [usize; M])> + '_ {
    debug_assert_eq!(M + 1, N);
    (0..N).map(move |omit| {
        let mut f = [0; M];
        let mut k = 0;
        for (i, &v) in s.iter().enumerate() {
            if i != omit {
                f[k] = v;
                k += 1;
            }
        }
        (omit, f)
    })
}

fn sign(omit: usize) -> i64 {
    if omit.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl Triangulation {
    /// Validate and build the simplex tables.
    pub fn new(vertex_count: usize, tetrahedra: &[[usize; 4]]) -> Result<Self, TriangulationError> {
        if tetrahedra.is_empty() {
            return Err(TriangulationError::Empty);
        }
        let mut tets: Vec<([usize; 4], usize)> = Vec::with_capacity(tetrahedra.len());
        for (i, t) in tetrahedra.iter().enumerate() {
            if let Some(&v) = t.iter().find(|&&v| v >= vertex_count) {
                return Err(TriangulationError::VertexOutOfRange {
                    tetrahedron: i,
                    vertex: v,
                    vertex_count,
                });
            }
            let mut s = *t;
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(TriangulationError::RepeatedVertex { tetrahedron: i });
            }
            tets.push((s, i));
        }
        tets.sort_unstable();
        for w in tets.windows(2) {
            if w[0].0 == w[1].0 {
                let (a, b) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
                return Err(TriangulationError::DuplicateTetrahedron { first: a, second: b });
            }
        }
        let tetrahedra: Vec<[usize; 4]> = tets.into_iter().map(|(s, _)| s).collect();

        let mut tri_inc: Vec<([usize; 3], usize, usize)> = tetrahedra
            .iter()
            .enumerate()
            .flat_map(|(t, s)| faces::<4, 3>(s).map(move |(omit, f)| (f, t, omit)))
            .collect();
        tri_inc.sort_unstable();
        let mut triangles: Vec<[usize; 3]> = Vec::with_capacity(tri_inc.len() / 2);
        let mut i = 0;
        while i < tri_inc.len() {
            let mut j = i;
            while j < tri_inc.len() && tri_inc[j].0 == tri_inc[i].0 {
                j += 1;
            }
            if j - i != 2 {
                return Err(TriangulationError::TriangleDegree {
                    triangle: tri_inc[i].0,
                    count: j - i,
                });
            }
            triangles.push(tri_inc[i].0);
            i = j;
        }
        let mut edges: Vec<[usize; 2]> = triangles.iter().flat_map(|s| faces::<3, 2>(s).map(|(_, f)| f)).collect();
        edges.sort_unstable();
        edges.dedup();
        let chi = vertex_count as i64 - edges.len() as i64 + triangles.len() as i64 - tetrahedra.len() as i64;
        if chi != 0 {
            return Err(TriangulationError::EulerCharacteristic(chi));
        }
        let orientation = propagate_orientation(&tetrahedra, &tri_inc);
        Ok(Triangulation {
            vertex_count,
            edges,
            triangles,
            tetrahedra,
            orientation,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn tetrahedra(&self) -> &[[usize; 4]] {
        &self.tetrahedra
    }

    /// `(c₀, c₁, c₂, c₃)`.
    pub fn counts(&self) -> [usize; 4] {
        [self.vertex_count, self.edges.len(), self.triangles.len(), self.tetrahedra.len()]
    }

    /// Number of `k`-simplices.
    pub fn simplex_count(&self, k: usize) -> usize {
        self.counts()[k]
    }

    pub fn edge_index(&self, e: [usize; 2]) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn triangle_index(&self, t: [usize; 3]) -> Option<usize> {
        self.triangles.binary_search(&t).ok()
    }

    pub fn tetrahedron_index(&self, t: [usize; 4]) -> Option<usize> {
        self.tetrahedra.binary_search(&t).ok()
    }

    /// Sorted vertices of the `i`-th `k`-simplex.
    pub fn simplex(&self, k: usize, i: usize) -> Vec<usize> {
        match k {
            0 => vec![i],
            1 => self.edges[i].to_vec(),
            2 => self.triangles[i].to_vec(),
            3 => self.tetrahedra[i].to_vec(),
            _ => panic!("no simplices of dimension {}", k),
        }
    }

    /// Index of a sorted vertex tuple of length 1..=4.
    pub fn simplex_index(&self, vertices: &[usize]) -> Option<usize> {
        match *vertices {
            [v] => (v < self.vertex_count).then_some(v),
            [a, b] => self.edge_index([a, b]),
            [a, b, c] => self.triangle_index([a, b, c]),
            [a, b, c, d] => self.tetrahedron_index([a, b, c, d]),
            _ => None,
        }
    }

    /// Signs `ε_t` of a coherent orientation, seeded with `+1` on the lowest
    /// tetrahedron of every component.
    pub fn orientation(&self) -> Result<&[i8], &OrientationError> {
        self.orientation.as_deref()
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation.is_ok()
    }

    /// Matrix of `d: Cᵏ → Cᵏ⁺¹`, rows indexed by `(k+1)`-simplices.
    pub fn coboundary_matrix(&self, k: usize) -> IntegerMatrix {
        let (rows, cols) = (self.simplex_count(k + 1), self.simplex_count(k));
        let trip: Vec<(usize, usize, i64)> = match k {
            0 => self
                .edges
                .iter()
                .enumerate()
                .flat_map(|(r, e)| [(r, e[0], -1), (r, e[1], 1)])
                .collect(),
            1 => self
                .triangles
                .iter()
                .enumerate()
                .flat_map(|(r, s)| faces::<3, 2>(s).map(move |(o, f)| (r, f, sign(o))))
                .map(|(r, f, s)| (r, self.edge_index(f).unwrap(), s))
                .collect(),
            2 => self
                .tetrahedra
                .iter()
                .enumerate()
                .flat_map(|(r, s)| faces::<4, 3>(s).map(move |(o, f)| (r, f, sign(o))))
                .map(|(r, f, s)| (r, self.triangle_index(f).unwrap(), s))
                .collect(),
            _ => panic!("coboundary_matrix: degree {} out of range 0..=2", k),
        };
        IntegerMatrix::from_triplets(rows, cols, trip)
    }

    /// Largest number of next-dimension cofaces over all vertices, edges and
    /// triangles.
    pub fn adjacency(&self) -> usize {
        (0..3)
            .map(|k| self.coboundary_matrix(k).col_nnz().into_iter().max().unwrap_or(0))
            .max()
            .unwrap()
    }

    /// `c₁ + c₃ − 1`.
    pub fn dplusdelta_size(&self) -> usize {
        self.edges.len() + self.tetrahedra.len() - 1
    }
}

fn propagate_orientation(
    tets: &[[usize; 4]],
    tri_inc: &[([usize; 3], usize, usize)],
) -> Result<Vec<i8>, OrientationError> {
    // tri_inc is sorted by triangle, two entries each.
    let mut adj: Vec<Vec<(usize, usize, usize, [usize; 3])>> = vec![Vec::with_capacity(4); tets.len()];
    for pair in tri_inc.chunks(2) {
        let (f, t, ot) = pair[0];
        let (_, u, ou) = pair[1];
        adj[t].push((ot, u, ou, f));
        adj[u].push((ou, t, ot, f));
    }
    let mut eps = vec![0i8; tets.len()];
    for seed in 0..tets.len() {
        if eps[seed] != 0 {
            continue;
        }
        eps[seed] = 1;
        let mut queue = VecDeque::from([seed]);
        while let Some(t) = queue.pop_front() {
            for &(ot, u, ou, f) in &adj[t] {
                // Induced coefficients on f must cancel.
                let want = -(eps[t] as i64) * sign(ot) * sign(ou);
                if eps[u] == 0 {
                    eps[u] = want as i8;
                    queue.push_back(u);
                } else if eps[u] as i64 != want {
                    return Err(OrientationError { triangle: f });
                }
            }
        }
    }
    Ok(eps)
}

/// Orientation signs, or the triangle where propagation fails.
pub fn orient(t: &Triangulation) -> Result<Vec<i8>, OrientationError> {
    t.orientation.clone()
}

/// Integral homology `H₀..H₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub groups: [AbelianInvariants; 4],
}

impl Homology {
    pub fn betti(&self, k: usize) -> usize {
        self.groups[k].free_rank
    }

    pub fn is_connected(&self) -> bool {
        self.groups[0].free_rank == 1
    }
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.groups[0], self.groups[1], self.groups[2], self.groups[3]
        )
    }
}

fn torsion_and_rank(m: &IntegerMatrix) -> (Vec<u64>, usize) {
    let f = invariant_factors(m);
    let rank = f.len();
    let torsion = f
        .into_iter()
        .filter(|d| !d.is_one())
        .map(|d| u64::try_from(&d).expect("torsion coefficient exceeds u64"))
        .collect();
    (torsion, rank)
}

/// Integral homology from the Smith normal forms of the coboundaries.
pub fn homology(t: &Triangulation) -> Homology {
    let c = t.counts();
    let (t0, r0) = torsion_and_rank(&t.coboundary_matrix(0));
    let (t1, r1) = torsion_and_rank(&t.coboundary_matrix(1));
    let (t2, r2) = torsion_and_rank(&t.coboundary_matrix(2));
    debug_assert!(t0.is_empty());
    let h = Homology {
        groups: [
            AbelianInvariants {
                free_rank: c[0] - r0,
                torsion: vec![],
            },
            AbelianInvariants {
                free_rank: c[1] - r0 - r1,
                torsion: t1,
            },
            AbelianInvariants {
                free_rank: c[2] - r1 - r2,
                torsion: t2,
            },
            AbelianInvariants {
                free_rank: c[3] - r2,
                torsion: vec![],
            },
        ],
    };
    if t.is_orientable() {
        debug_assert_eq!(h.groups[0].free_rank, h.groups[3].free_rank);
    }
    h
}

/// Why `t` is not a rational homology sphere, if it is not one.
pub fn qhs_failure(t: &Triangulation, h: &Homology) -> Option<QhsFailure> {
    if !t.is_orientable() {
        Some(QhsFailure::NonOrientable)
    } else if !h.is_connected() {
        Some(QhsFailure::Disconnected)
    } else if h.betti(1) != 0 || h.betti(2) != 0 {
        Some(QhsFailure::Betti {
            b1: h.betti(1),
            b2: h.betti(2),
        })
    } else {
        None
    }
}

/// Connected, orientable, and `b₁ = b₂ = 0`.
pub fn qhs_check(t: &Triangulation) -> bool {
    qhs_failure(t, &homology(t)).is_none()
}

/// The square matrix of `d + δ: C¹ ⊕ C̃³ → C̃⁰ ⊕ C²` with an exact solver.
///
/// Rows: vertices except vertex 0, then triangles. Columns: edges, then
/// tetrahedra except tetrahedron 0.
#[derive(Clone, Debug)]
pub struct DPlusDelta {
    pub matrix: IntegerMatrix,
    pub solver: DixonSolver,
    abs_det: OnceCell<BigInt>,
}

impl DPlusDelta {
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// `|det|`, computed on first use.
    pub fn abs_det(&self) -> &BigInt {
        self.abs_det.get_or_init(|| abs_det(&self.matrix))
    }

    /// The unique `x` with `(d + δ) x = b`.
    pub fn solve(&self, b: &[Rational]) -> Vec<Rational> {
        self.solver.solve(b)
    }
}

pub fn build_dplusdelta(t: &Triangulation) -> Result<DPlusDelta, DPlusDeltaError> {
    if let Some(f) = qhs_failure(t, &homology(t)) {
        return Err(DPlusDeltaError::NotQhs(f));
    }
    assemble_dplusdelta(t)
}

/// Assemble and factor without the homology precondition.
pub fn assemble_dplusdelta(t: &Triangulation) -> Result<DPlusDelta, DPlusDeltaError> {
    let [c0, c1, c2, c3] = t.counts();
    let d0 = t.coboundary_matrix(0);
    let d1 = t.coboundary_matrix(1);
    let d2 = t.coboundary_matrix(2);
    let mut trip = Vec::with_capacity(d0.nnz() + d1.nnz() + d2.nnz());
    // δ₀ = d₀ᵀ without the row of vertex 0
    for (e, v, x) in d0.triplets() {
        if v != 0 {
            trip.push((v - 1, e, x));
        }
    }
    for (tri, e, x) in d1.triplets() {
        trip.push((c0 - 1 + tri, e, x));
    }
    // δ₂ = d₂ᵀ without the column of tetrahedron 0
    for (tet, tri, x) in d2.triplets() {
        if tet != 0 {
            trip.push((c0 - 1 + tri, c1 + tet - 1, x));
        }
    }
    let size = c0 - 1 + c2;
    debug_assert_eq!(size, c1 + c3 - 1);
    let matrix = IntegerMatrix::from_triplets(size, size, trip);
    let Some(solver) = DixonSolver::new(&matrix) else {
        return Err(DPlusDeltaError::Degenerate {
            rank: Elimination::new(&matrix).rank(),
            size,
        });
    };
    Ok(DPlusDelta {
        matrix,
        solver,
        abs_det: OnceCell::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary_4simplex() -> Triangulation {
        crate::fixtures::boundary_4simplex()
    }

    #[test]
    fn boundary_4simplex_counts() {
        let t = boundary_4simplex();
        assert_eq!(t.counts(), [5, 10, 10, 5]);
        assert_eq!(t.adjacency(), 4);
    }

    #[test]
    fn single_tetrahedron_is_rejected() {
        let err = Triangulation::new(4, &[[0, 1, 2, 3]]).unwrap_err();
        assert_eq!(err, TriangulationError::TriangleDegree { triangle: [0, 1, 2], count: 1 });
        assert_eq!(
            alloc::format!("{}", err),
            "triangle [0, 1, 2] shared by 1 tetrahedra"
        );
    }

    #[test]
    fn not_simplicial() {
        assert_eq!(
            Triangulation::new(4, &[[0, 1, 1, 3]]).unwrap_err(),
            TriangulationError::RepeatedVertex { tetrahedron: 0 }
        );
        assert!(matches!(
            Triangulation::new(4, &[[0, 1, 2, 3], [3, 2, 1, 0]]).unwrap_err(),
            TriangulationError::DuplicateTetrahedron { first: 0, second: 1 }
        ));
        assert!(matches!(
            Triangulation::new(3, &[[0, 1, 2, 3]]).unwrap_err(),
            TriangulationError::VertexOutOfRange { vertex: 3, .. }
        ));
    }

    #[test]
    fn isolated_vertex_breaks_euler() {
        let tets: Vec<[usize; 4]> = boundary_4simplex().tetrahedra().to_vec();
        assert_eq!(
            Triangulation::new(6, &tets).unwrap_err(),
            TriangulationError::EulerCharacteristic(1)
        );
    }

    #[test]
    fn coboundary_shapes() {
        let t = boundary_4simplex();
        let d0 = t.coboundary_matrix(0);
        assert_eq!((d0.rows(), d0.cols()), (10, 5));
        for r in 0..10 {
            let mut vals: Vec<i64> = d0.row(r).iter().map(|e| e.1).collect();
            vals.sort();
            assert_eq!(vals, vec![-1, 1]);
        }
        let d2 = t.coboundary_matrix(2);
        assert_eq!((d2.rows(), d2.cols()), (5, 10));
        assert!(d2.col_nnz().iter().all(|&n| n == 2));
        assert!(t.coboundary_matrix(1).mul(&d0).is_zero());
        assert!(d2.mul(&t.coboundary_matrix(1)).is_zero());
    }

    #[test]
    fn fundamental_class_is_a_cycle() {
        let t = boundary_4simplex();
        let eps = t.orientation().unwrap();
        assert_eq!(eps.len(), 5);
        // ∂ = d₂ᵀ, so ∂(Σ ε_t t) = d₂ᵀ ε.
        let eps: Vec<i64> = eps.iter().map(|&e| e as i64).collect();
        let boundary = t.coboundary_matrix(2).transpose().apply(&eps, |x| x);
        assert!(boundary.iter().all(|&x| x == 0));
        // alternating signs
        assert_eq!(t.orientation().unwrap(), &[1, -1, 1, -1, 1]);
    }

    #[test]
    fn sphere_homology() {
        let t = boundary_4simplex();
        let h = homology(&t);
        assert_eq!(alloc::format!("{}", h), "(Z, 0, 0, Z)");
        assert!(qhs_check(&t));
    }

    #[test]
    fn disjoint_union() {
        let mut tets: Vec<[usize; 4]> = boundary_4simplex().tetrahedra().to_vec();
        let shifted: Vec<[usize; 4]> = tets.iter().map(|t| t.map(|v| v + 5)).collect();
        tets.extend(shifted);
        let t = Triangulation::new(10, &tets).unwrap();
        let h = homology(&t);
        assert_eq!(h.groups[0].free_rank, 2);
        assert!(!h.is_connected());
        assert!(!qhs_check(&t));
        assert!(matches!(
            build_dplusdelta(&t),
            Err(DPlusDeltaError::NotQhs(QhsFailure::Disconnected))
        ));
    }

    #[test]
    fn dplusdelta_on_sphere() {
        let t = boundary_4simplex();
        let m = build_dplusdelta(&t).unwrap();
        assert_eq!(m.size(), 14);
        assert_eq!(m.matrix.max_abs_entry(), 1);
    }
}
