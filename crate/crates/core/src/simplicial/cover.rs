use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{Cochain, CochainError, Triangulation, TriangulationError};

/// A `ℤ/d`-valued simplicial 1-cochain given on edges `u < v`; the label of
/// the reversed edge is the negative. Unlisted edges carry 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverSpec {
    d: usize,
    labels: BTreeMap<[usize; 2], usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("cover degree must be at least 2, got {0}")]
    Degree(usize),
    #[error("label on loop {0}-{0}")]
    Loop(usize),
    #[error("label on {0}-{1}, which is not an edge")]
    UnknownEdge(usize, usize),
    #[error("labels are not a cocycle on triangle {index} {vertices:?}")]
    Cocycle { index: usize, vertices: [usize; 3] },
    #[error("lifted complex is invalid ({0}); subdivide base first")]
    NonSimplicial(TriangulationError),
}

impl CoverSpec {
    pub fn new(d: usize, labels: impl IntoIterator<Item = ((usize, usize), i64)>) -> Result<Self, CoverError> {
        if d < 2 {
            return Err(CoverError::Degree(d));
        }
        let mut map = BTreeMap::new();
        for ((u, v), k) in labels {
            if u == v {
                return Err(CoverError::Loop(u));
            }
            let (key, k) = if u < v { ([u, v], k) } else { ([v, u], -k) };
            let k = k.rem_euclid(d as i64) as usize;
            if k != 0 {
                map.insert(key, k);
            } else {
                map.remove(&key);
            }
        }
        Ok(CoverSpec { d, labels: map })
    }

    /// Labels reduced modulo a divisor of `d`.
    pub fn reduce(&self, m: usize) -> Result<Self, CoverError> {
        assert!(m != 0 && self.d.is_multiple_of(m), "{} does not divide {}", m, self.d);
        CoverSpec::new(m, self.labels.iter().map(|(e, &k)| ((e[0], e[1]), k as i64)))
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Nonzero labels on edges `u < v`, in lexicographic order.
    pub fn labels(&self) -> &BTreeMap<[usize; 2], usize> {
        &self.labels
    }

    /// Label of the oriented edge `u → v` in `0..d`.
    pub fn label(&self, u: usize, v: usize) -> usize {
        if u < v {
            self.labels.get(&[u, v]).copied().unwrap_or(0)
        } else {
            let k = self.labels.get(&[v, u]).copied().unwrap_or(0);
            (self.d - k) % self.d
        }
    }

    /// First triangle where the cocycle condition fails, or an unknown edge.
    pub fn check(&self, t: &Triangulation) -> Result<(), CoverError> {
        if let Some(e) = self.labels.keys().find(|e| t.edge_index(**e).is_none()) {
            return Err(CoverError::UnknownEdge(e[0], e[1]));
        }
        for (index, &[u, v, w]) in t.triangles().iter().enumerate() {
            if !(self.label(u, v) + self.label(v, w) + self.label(w, u)).is_multiple_of(self.d) {
                return Err(CoverError::Cocycle {
                    index,
                    vertices: [u, v, w],
                });
            }
        }
        Ok(())
    }
}

/// A `d`-sheeted cyclic cover. Vertex `(v, s)` of the cover has id
/// `v·d + s`, so the projection preserves the vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub degree: usize,
    pub triangulation: Triangulation,
    /// `projection[k][i]` is the base `k`-simplex under cover `k`-simplex `i`.
    pub projection: [Vec<usize>; 4],
}

impl Cover {
    pub fn is_connected(&self) -> bool {
        let t = &self.triangulation;
        let n = t.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for e in t.edges() {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }
}

/// Lift every tetrahedron to `d` tetrahedra, following labels out of its
/// lowest vertex.
pub fn cyclic_cover(t: &Triangulation, spec: &CoverSpec) -> Result<Cover, CoverError> {
    spec.check(t)?;
    let d = spec.degree();
    let mut tets = Vec::with_capacity(t.tetrahedra().len() * d);
    for s in 0..d {
        for &[v0, v1, v2, v3] in t.tetrahedra() {
            let lift = |v: usize| v * d + (s + spec.label(v0, v)) % d;
            tets.push([v0 * d + s, lift(v1), lift(v2), lift(v3)]);
        }
    }
    let cover = Triangulation::new(t.vertex_count() * d, &tets).map_err(CoverError::NonSimplicial)?;
    let down = |vs: &[usize]| -> Vec<usize> { vs.iter().map(|v| v / d).collect() };
    let projection = [
        (0..cover.vertex_count()).map(|v| v / d).collect(),
        cover.edges().iter().map(|e| t.simplex_index(&down(e)).unwrap()).collect(),
        cover.triangles().iter().map(|f| t.simplex_index(&down(f)).unwrap()).collect(),
        cover.tetrahedra().iter().map(|x| t.simplex_index(&down(x)).unwrap()).collect(),
    ];
    Ok(Cover {
        degree: d,
        triangulation: cover,
        projection,
    })
}

/// `ε*c`: every lifted simplex takes the value of its projection.
pub fn pullback_cochain(cover: &Cover, c: &Cochain) -> Result<Cochain, CochainError> {
    let k = c.degree();
    if let Some(&index) = c.values().keys().next_back() {
        let count = cover.projection[k].len() / cover.degree;
        if index >= count {
            return Err(CochainError::OutOfRange { degree: k, index, count });
        }
    }
    Ok(Cochain::from_dense(
        k,
        cover.projection[k].iter().map(|&b| c.get(b)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;
    use crate::fixtures;
    use crate::simplicial::homology;

    #[test]
    fn trivial_double_cover_is_two_copies() {
        let t = fixtures::boundary_4simplex();
        let spec = CoverSpec::new(2, []).unwrap();
        let c = cyclic_cover(&t, &spec).unwrap();
        assert_eq!(c.triangulation.counts(), [10, 20, 20, 10]);
        assert!(!c.is_connected());
        assert_eq!(homology(&c.triangulation).groups[0].free_rank, 2);

        let gamma = Cochain::new(2, [(0, Rational::from_integer(3.into())), (7, Rational::new(1.into(), 2.into()))]).unwrap();
        let up = pullback_cochain(&c, &gamma).unwrap();
        assert_eq!(up.values().len(), 4);
        assert_eq!(up.sup_norm(), gamma.sup_norm());
        assert!(pullback_cochain(&c, &Cochain::zero(1)).unwrap().is_zero());
    }

    #[test]
    fn cocycle_violation_is_reported() {
        let t = fixtures::boundary_4simplex();
        let spec = CoverSpec::new(3, [((0, 1), 1)]).unwrap();
        assert!(matches!(cyclic_cover(&t, &spec), Err(CoverError::Cocycle { index: 0, vertices: [0, 1, 2] })));
        let spec = CoverSpec::new(3, [((0, 9), 1)]).unwrap();
        assert_eq!(spec.check(&t), Err(CoverError::UnknownEdge(0, 9)));
        assert_eq!(CoverSpec::new(1, []), Err(CoverError::Degree(1)));
    }

    #[test]
    fn labels_are_antisymmetric() {
        let spec = CoverSpec::new(5, [((3, 1), 2)]).unwrap();
        assert_eq!(spec.label(1, 3), 3);
        assert_eq!(spec.label(3, 1), 2);
        assert_eq!(spec.label(0, 4), 0);
    }
}
