//! Built-in triangulations and presentations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::linalg::Rational;
use crate::simplicial::{Cochain, CoverSpec, Triangulation};

/// `∂Δ⁴`, a 5-tetrahedron triangulation of S³.
pub fn boundary_4simplex() -> Triangulation {
    let tets: Vec<[usize; 4]> = (0..5)
        .map(|omit| {
            let mut t = [0; 4];
            for (slot, v) in t.iter_mut().zip((0..5).filter(|&v| v != omit)) {
                *slot = v;
            }
            t
        })
        .collect();
    Triangulation::new(5, &tets).expect("boundary of the 4-simplex")
}

/// A lens space with its generating `ℤ/p` cocycle.
#[derive(Clone, Debug)]
pub struct LensSpace {
    pub p: usize,
    pub q: usize,
    pub triangulation: Triangulation,
    /// Monodromy of the universal cover, a generator of `H¹(L; ℤ/p)`.
    pub generator: CoverSpec,
}

impl LensSpace {
    /// Integral 2-cocycle `d(ℓ)/p` where `ℓ` lifts the generator labels to
    /// `0..p`; it represents a generator of `H²(L; ℤ) = ℤ/p`.
    pub fn generator_dual(&self) -> Cochain {
        let t = &self.triangulation;
        let p = BigInt::from(self.p);
        Cochain::from_dense(
            2,
            t.triangles()
                .iter()
                .map(|&[u, v, w]| {
                    let g = &self.generator;
                    let s = g.label(u, v) as i64 + g.label(v, w) as i64 - g.label(u, w) as i64;
                    Rational::new(BigInt::from(s), p.clone())
                })
                .collect(),
        )
    }

    /// Labels of the generator divided by `p`: a potential of
    /// [`generator_dual`](Self::generator_dual).
    pub fn generator_potential(&self) -> Cochain {
        let p = BigInt::from(self.p);
        Cochain::from_dense(
            1,
            self.triangulation
                .edges()
                .iter()
                .map(|&[u, v]| Rational::new(BigInt::from(self.generator.label(u, v)), p.clone()))
                .collect(),
        )
    }

    /// The cover of degree `d | p`, which is `L(p/d, q)`.
    pub fn cover_spec(&self, d: usize) -> CoverSpec {
        self.generator.reduce(d).expect("cover degree")
    }
}

type Cell = Vec<usize>;

/// `L(p, q)` as the quotient of the barycentric subdivision of the join of
/// two `2p`-cycles by the free action `aᵢ ↦ aᵢ₊₂`, `bⱼ ↦ bⱼ₊₂q`.
///
/// Has `8 + 16p` vertices and `96p` tetrahedra.
pub fn lens_space(p: usize, q: usize) -> LensSpace {
    assert!(p >= 2, "lens space needs p >= 2");
    assert!(p.gcd(&q) == 1, "q must be coprime to p");
    let m = 2 * p;
    let act = |v: usize, k: usize| {
        if v < m {
            (v + 2 * k) % m
        } else {
            m + (v - m + 2 * q * k) % m
        }
    };
    let translate = |s: &Cell, k: usize| -> Cell {
        let mut t: Cell = s.iter().map(|&v| act(v, k)).collect();
        t.sort_unstable();
        t
    };
    // (orbit representative, sheet) with s = g^sheet(rep)
    let mut orbit_of: BTreeMap<Cell, (Cell, usize)> = BTreeMap::new();
    let mut classify = |s: &Cell| -> (Cell, usize) {
        if let Some(r) = orbit_of.get(s) {
            return r.clone();
        }
        let (k, rep) = (0..p).map(|k| (k, translate(s, k))).min_by(|a, b| a.1.cmp(&b.1)).unwrap();
        let r = (rep, (p - k) % p);
        orbit_of.insert(s.clone(), r.clone());
        r
    };

    let mut chains: Vec<[(Cell, usize); 4]> = Vec::with_capacity(96 * p * p);
    let mut sd_edges: BTreeSet<(Cell, Cell)> = BTreeSet::new();
    for i in 0..m {
        for j in 0..m {
            let verts = [i, (i + 1) % m, m + j, m + (j + 1) % m];
            for perm in permutations4() {
                let cells: [Cell; 4] = core::array::from_fn(|k| {
                    let mut c: Cell = perm[..=k].iter().map(|&x| verts[x]).collect();
                    c.sort_unstable();
                    c
                });
                for a in 0..4 {
                    for b in a + 1..4 {
                        sd_edges.insert((cells[a].clone(), cells[b].clone()));
                    }
                }
                chains.push(cells.map(|c| classify(&c)));
            }
        }
    }
    let reps: BTreeSet<Cell> = chains.iter().flat_map(|c| c.iter().map(|x| x.0.clone())).collect();
    let id: BTreeMap<Cell, usize> = reps.into_iter().enumerate().map(|(i, r)| (r, i)).collect();

    let mut tets: BTreeSet<[usize; 4]> = BTreeSet::new();
    let mut labels: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for chain in &chains {
        let mut lifted: [(usize, usize); 4] = core::array::from_fn(|k| (id[&chain[k].0], chain[k].1));
        lifted.sort_unstable();
        tets.insert(lifted.map(|x| x.0));
        for a in 0..4 {
            for b in a + 1..4 {
                let (u, su) = lifted[a];
                let (v, sv) = lifted[b];
                let k = (sv + p - su) % p;
                let prev = *labels.entry((u, v)).or_insert(k);
                assert_eq!(prev, k, "lens construction identifies distinct edges");
            }
        }
    }
    assert_eq!(tets.len(), 96 * p, "lens construction is not simplicial");
    assert_eq!(labels.len() * p, sd_edges.len(), "lens construction identifies distinct edges");
    let tets: Vec<[usize; 4]> = tets.into_iter().collect();
    let triangulation = Triangulation::new(id.len(), &tets).expect("lens space triangulation");
    let generator = CoverSpec::new(p, labels.into_iter().map(|(e, k)| (e, k as i64))).unwrap();
    LensSpace {
        p,
        q,
        triangulation,
        generator,
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let x = [a, b, c, d];
                    if (0..4).all(|i| x.contains(&i)) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

/// Ordered product of a triangulated surface with an `n`-cycle: each prism
/// is cut into three tetrahedra along the staircase.
fn surface_times_circle(vertex_count: usize, triangles: &[[usize; 3]], n: usize) -> Triangulation {
    let id = |a: usize, b: usize| a * n + b;
    let mut tets = Vec::with_capacity(triangles.len() * n * 3);
    for tri in triangles {
        let mut a = *tri;
        a.sort_unstable();
        for i in 0..n {
            let (b0, b1) = (i.min((i + 1) % n), i.max((i + 1) % n));
            tets.push([id(a[0], b0), id(a[0], b1), id(a[1], b1), id(a[2], b1)]);
            tets.push([id(a[0], b0), id(a[1], b0), id(a[1], b1), id(a[2], b1)]);
            tets.push([id(a[0], b0), id(a[1], b0), id(a[2], b0), id(a[2], b1)]);
        }
    }
    Triangulation::new(vertex_count * n, &tets).expect("product triangulation")
}

/// `S² × S¹`: orientable, not a rational homology sphere.
pub fn sphere_times_circle() -> Triangulation {
    surface_times_circle(4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], 3)
}

/// `RP² × S¹` from the 6-vertex projective plane: non-orientable.
pub fn projective_plane_times_circle() -> Triangulation {
    let rp2 = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ];
    surface_times_circle(6, &rp2, 3)
}

fn gen_names(prefix: char, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{}{}", prefix, i)).collect()
}

/// `⟨x1..xn | ⟩`
pub fn free_group_text(n: usize) -> String {
    format!("gens: {};\nrels:;\n", gen_names('x', n).join(" "))
}

/// `⟨a1, b1, …, ag, bg | [a1, b1]⋯[ag, bg]⟩`
pub fn surface_group_text(genus: usize) -> String {
    let gens: Vec<String> = (1..=genus).flat_map(|i| [format!("a{}", i), format!("b{}", i)]).collect();
    let rel: Vec<String> = (1..=genus)
        .map(|i| format!("a{0} b{0} a{0}^-1 b{0}^-1", i))
        .collect();
    format!("gens: {};\nrels: {};\n", gens.join(" "), rel.join(" "))
}

/// `ℤⁿ` with all commutators.
pub fn free_abelian_text(n: usize) -> String {
    let gens = gen_names('x', n);
    let mut rels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rels.push(format!("{0} {1} {0}^-1 {1}^-1", gens[i], gens[j]));
        }
    }
    format!("gens: {};\nrels: {};\n", gens.join(" "), rels.join(", "))
}

pub const TREFOIL_TEXT: &str = "gens: a b;\nrels: a^2 b^-3;\n";

pub const S3_TEXT: &str = "gens: a b;\nrels: a^2, b^3, a b a b;\n";

/// Named presentation texts.
pub fn presentation_text(name: &str) -> Option<String> {
    let num = |s: &str| s.parse::<usize>().ok();
    Some(match name {
        "trefoil" => TREFOIL_TEXT.into(),
        "s3" => S3_TEXT.into(),
        "z" => free_abelian_text(1),
        _ => {
            if let Some(n) = name.strip_prefix('f').and_then(num) {
                free_group_text(n)
            } else if let Some(n) = name.strip_prefix('z').and_then(num) {
                free_abelian_text(n)
            } else if let Some(g) = name.strip_prefix("surface").and_then(num) {
                surface_group_text(g)
            } else {
                return None;
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{abelianization, parse_presentation};
    use crate::simplicial::{cyclic_cover, homology, qhs_check};
    use alloc::vec;

    #[test]
    fn presentation_texts_parse() {
        for name in ["trefoil", "s3", "z", "f2", "f3", "z2", "z3", "surface2"] {
            let text = presentation_text(name).unwrap();
            parse_presentation(&text).unwrap();
        }
        let z3 = parse_presentation(&free_abelian_text(3)).unwrap();
        assert_eq!(abelianization(&z3).free_rank, 3);
        assert_eq!(parse_presentation(&surface_group_text(2)).unwrap().relator_count(), 1);
        assert!(presentation_text("nonsense").is_none());
    }

    #[test]
    fn lens_space_homology() {
        for (p, q) in [(2, 1), (3, 1), (5, 2)] {
            let l = lens_space(p, q);
            assert_eq!(l.triangulation.counts()[0], 8 + 16 * p);
            assert_eq!(l.triangulation.counts()[3], 96 * p);
            let h = homology(&l.triangulation);
            assert_eq!(h.groups[1].torsion, vec![p as u64]);
            assert_eq!(h.groups[1].free_rank, 0);
            assert!(qhs_check(&l.triangulation));
            l.generator.check(&l.triangulation).unwrap();
        }
    }

    #[test]
    fn generator_potential_solves_generator_dual() {
        let l = lens_space(3, 1);
        let gamma = l.generator_dual();
        assert!(gamma.coboundary(&l.triangulation).is_zero());
        assert_eq!(l.generator_potential().coboundary(&l.triangulation), gamma);
        assert!(gamma.values().values().all(|v| v.is_integer()));
    }

    #[test]
    fn universal_cover_is_a_sphere() {
        let l = lens_space(2, 1);
        let c = cyclic_cover(&l.triangulation, &l.generator).unwrap();
        assert!(c.is_connected());
        assert_eq!(format!("{}", homology(&c.triangulation)), "(Z, 0, 0, Z)");
    }

    #[test]
    fn product_fixtures() {
        let s2s1 = sphere_times_circle();
        assert!(s2s1.is_orientable());
        let h = homology(&s2s1);
        assert_eq!((h.betti(1), h.betti(2)), (1, 1));
        assert!(!qhs_check(&s2s1));

        let rp2s1 = projective_plane_times_circle();
        assert!(!rp2s1.is_orientable());
        let h = homology(&rp2s1);
        assert_eq!(h.groups[1].free_rank, 1);
        assert_eq!(h.groups[1].torsion, vec![2]);
    }
}
