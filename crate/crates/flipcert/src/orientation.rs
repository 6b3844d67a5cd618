//! Orientations of polytope edge graphs and their correspondence with
//! prism triangulations.
//!
//! An orientation assigns a direction to every edge of a graph. It is
//! locally acyclic with respect to a list of faces when the induced
//! subgraph on each face's vertices has no directed cycle; checking the
//! inclusion-maximal faces suffices. Over a simplicial base, a locally
//! acyclic orientation orders each maximal face and thereby picks one
//! staircase triangulation of the prism over that face; the directions can
//! be read back off the staircases as diagonals.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use std::sync::Arc;

use thiserror::Error;

use crate::exactgeom::PointConfiguration;
use crate::triangulation::{staircase_cells, Simplex, Triangulation, TriangulationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrientationError {
    #[error("vertex {vertex} is out of range for {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("self loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("edge {u} {v} is oriented both ways")]
    BothDirections { u: usize, v: usize },
    #[error("no arc between {u} and {v}")]
    MissingArc { u: usize, v: usize },
    #[error("face {face:?} has no arc between {u} and {v}, so it cannot be ordered")]
    FaceNotTournament { face: Vec<usize>, u: usize, v: usize },
    #[error("face {face:?} carries the directed cycle {cycle:?}")]
    CyclicFace { face: Vec<usize>, cycle: Vec<usize> },
    #[error("edge {u} {w} of the base has no matching diagonal in the triangulation")]
    NoDiagonal { u: usize, w: usize },
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {msg}")]
    Io { msg: String },
}

impl From<std::io::Error> for OrientationError {
    fn from(e: std::io::Error) -> Self {
        OrientationError::Io { msg: e.to_string() }
    }
}

/// A set of directed edges over vertices `0..n`, at most one direction per
/// vertex pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SkeletonOrientation {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl SkeletonOrientation {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self, OrientationError> {
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            for x in [u, v] {
                if x >= n {
                    return Err(OrientationError::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(OrientationError::SelfLoop { vertex: u });
            }
            if set.contains(&(v, u)) {
                return Err(OrientationError::BothDirections {
                    u: u.min(v),
                    v: u.max(v),
                });
            }
            set.insert((u, v));
        }
        Ok(SkeletonOrientation { n, arcs: set })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    /// The directed version of the undirected edge `{u, v}`, if present.
    pub fn direction(&self, u: usize, v: usize) -> Option<(usize, usize)> {
        if self.arcs.contains(&(u, v)) {
            Some((u, v))
        } else if self.arcs.contains(&(v, u)) {
            Some((v, u))
        } else {
            None
        }
    }

    /// Underlying undirected edges as ascending pairs.
    pub fn undirected_edges(&self) -> BTreeSet<(usize, usize)> {
        self.arcs
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect()
    }

    /// The orientation with one arc reversed.
    pub fn reversed(&self, u: usize, v: usize) -> Result<Self, OrientationError> {
        if !self.arcs.contains(&(u, v)) {
            return Err(OrientationError::MissingArc { u, v });
        }
        let mut arcs = self.arcs.clone();
        arcs.remove(&(u, v));
        arcs.insert((v, u));
        Ok(SkeletonOrientation { n: self.n, arcs })
    }

    /// A directed cycle inside the induced subgraph on `verts`, or `None`
    /// when that subgraph is acyclic. Kahn peeling; any vertex left keeps an
    /// incoming arc, so walking predecessors finds a cycle.
    pub fn induced_cycle(&self, verts: &[usize]) -> Option<Vec<usize>> {
        let vs: BTreeSet<usize> = verts.iter().copied().collect();
        let mut outs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut indeg: BTreeMap<usize, usize> = vs.iter().map(|&v| (v, 0)).collect();
        for &(u, v) in &self.arcs {
            if vs.contains(&u) && vs.contains(&v) {
                outs.entry(u).or_default().push(v);
                *indeg.get_mut(&v).unwrap() += 1;
            }
        }
        let mut queue: Vec<usize> = indeg
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&v, _)| v)
            .collect();
        let mut remaining = vs.clone();
        while let Some(v) = queue.pop() {
            remaining.remove(&v);
            for &w in outs.get(&v).into_iter().flatten() {
                let d = indeg.get_mut(&w).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push(w);
                }
            }
        }
        if remaining.is_empty() {
            return None;
        }
        // walk predecessors inside the remaining set until a repeat
        let preds: BTreeMap<usize, usize> = self
            .arcs
            .iter()
            .filter(|(u, v)| remaining.contains(u) && remaining.contains(v))
            .map(|&(u, v)| (v, u))
            .collect();
        let mut seen_order: Vec<usize> = Vec::new();
        let mut cur = *remaining.iter().next().unwrap();
        loop {
            if let Some(pos) = seen_order.iter().position(|&x| x == cur) {
                let mut cycle: Vec<usize> = seen_order[pos..].to_vec();
                cycle.reverse();
                return Some(cycle);
            }
            seen_order.push(cur);
            cur = *preds
                .get(&cur)
                .expect("every remaining vertex keeps an incoming arc");
        }
    }

    /// Check acyclicity on every face; maximal faces cover all smaller ones.
    pub fn is_locally_acyclic(&self, faces: &[Vec<usize>]) -> Result<(), OrientationError> {
        for f in faces {
            if let Some(cycle) = self.induced_cycle(f) {
                return Err(OrientationError::CyclicFace {
                    face: f.clone(),
                    cycle,
                });
            }
        }
        Ok(())
    }

    /// Arcs whose single reversal keeps the orientation locally acyclic.
    /// Only faces containing both endpoints can change, so only those are
    /// re-checked. The orientation itself must be locally acyclic first.
    pub fn reversible_arcs(&self, faces: &[Vec<usize>]) -> Vec<(usize, usize)> {
        debug_assert!(self.is_locally_acyclic(faces).is_ok());
        let mut out = Vec::new();
        for &(u, v) in &self.arcs {
            let touched: Vec<Vec<usize>> = faces
                .iter()
                .filter(|f| f.contains(&u) && f.contains(&v))
                .cloned()
                .collect();
            let rev = self.reversed(u, v).expect("arc exists");
            if rev.is_locally_acyclic(&touched).is_ok() {
                out.push((u, v));
            }
        }
        out
    }

    /// A directed cycle anywhere in the graph, or `None` if globally acyclic.
    pub fn global_cycle(&self) -> Option<Vec<usize>> {
        let all: Vec<usize> = (0..self.n).collect();
        self.induced_cycle(&all)
    }

    /// Arcs with both endpoints in `verts`, unchanged labels.
    pub fn restricted_to(&self, verts: &BTreeSet<usize>) -> SkeletonOrientation {
        SkeletonOrientation {
            n: self.n,
            arcs: self
                .arcs
                .iter()
                .filter(|(u, v)| verts.contains(u) && verts.contains(v))
                .copied()
                .collect(),
        }
    }

    /// The vertices of one face in the linear order the orientation induces.
    /// The face must be a tournament (every pair connected) and acyclic.
    pub fn face_order(&self, face: &[usize]) -> Result<Vec<usize>, OrientationError> {
        for (i, &u) in face.iter().enumerate() {
            for &v in &face[i + 1..] {
                if self.direction(u, v).is_none() {
                    return Err(OrientationError::FaceNotTournament {
                        face: face.to_vec(),
                        u: u.min(v),
                        v: u.max(v),
                    });
                }
            }
        }
        if let Some(cycle) = self.induced_cycle(face) {
            return Err(OrientationError::CyclicFace {
                face: face.to_vec(),
                cycle,
            });
        }
        // in an acyclic tournament the order is by descending out-degree
        let mut order: Vec<usize> = face.to_vec();
        let outdeg = |u: usize| {
            face.iter()
                .filter(|&&v| v != u && self.has_arc(u, v))
                .count()
        };
        order.sort_by_key(|&u| face.len() - outdeg(u));
        Ok(order)
    }
}

/// The prism triangulation picked by a locally acyclic orientation of a
/// simplicial base: each maximal base face contributes the staircase cells
/// of its induced vertex order. `product` must hold the base points as
/// `0..nbase` and their lifted copies as `nbase..2 * nbase`.
pub fn orientation_to_triangulation(
    orientation: &SkeletonOrientation,
    base_faces: &[Vec<usize>],
    product: Arc<PointConfiguration>,
    nbase: usize,
) -> Result<Triangulation, OrientationError> {
    let mut cells = Vec::new();
    for f in base_faces {
        let order = orientation.face_order(f)?;
        cells.extend(staircase_cells(&order, nbase));
    }
    Ok(Triangulation::new(product, cells)?)
}

/// Read the orientation back off a prism triangulation: base edge `{u, w}`
/// points from `u` to `w` exactly when some cell contains the diagonal
/// `{bottom u, top w}`. Exactly one of the two diagonals must appear.
pub fn triangulation_to_orientation(
    t: &Triangulation,
    base_edges: &BTreeSet<(usize, usize)>,
    nbase: usize,
) -> Result<SkeletonOrientation, OrientationError> {
    let mut arcs = Vec::new();
    for &(u, w) in base_edges {
        let uw = t
            .cells()
            .iter()
            .any(|c| c.contains(u) && c.contains(w + nbase));
        let wu = t
            .cells()
            .iter()
            .any(|c| c.contains(w) && c.contains(u + nbase));
        match (uw, wu) {
            (true, false) => arcs.push((u, w)),
            (false, true) => arcs.push((w, u)),
            _ => return Err(OrientationError::NoDiagonal { u, w }),
        }
    }
    SkeletonOrientation::new(nbase, arcs)
}

/// Restriction of a prism triangulation to the prism over a base face, as
/// the maximal cells hitting that sub-prism.
pub fn restriction_to_base_face(
    t: &Triangulation,
    base_face: &[usize],
    nbase: usize,
) -> Vec<Simplex> {
    let verts: BTreeSet<usize> = base_face
        .iter()
        .flat_map(|&v| [v, v + nbase])
        .collect();
    t.restriction(&verts)
}

/// One `u v` line per arc, ascending.
pub fn write_orientation(
    o: &SkeletonOrientation,
    w: &mut dyn Write,
) -> Result<(), OrientationError> {
    for (u, v) in o.arcs() {
        writeln!(w, "{} {}", u, v)?;
    }
    Ok(())
}

/// Inverse of [`write_orientation`] over a known vertex count.
pub fn read_orientation(
    n: usize,
    r: &mut dyn BufRead,
) -> Result<SkeletonOrientation, OrientationError> {
    let mut arcs = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(OrientationError::Parse {
                line: lineno,
                msg: format!("expected `u v`, got {:?}", line),
            });
        }
        let parse = |s: &str| -> Result<usize, OrientationError> {
            s.parse().map_err(|e| OrientationError::Parse {
                line: lineno,
                msg: format!("bad vertex {:?}: {}", s, e),
            })
        };
        arcs.push((parse(toks[0])?, parse(toks[1])?));
    }
    SkeletonOrientation::new(n, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::config_from_ints;
    use crate::triangulation::product_with_segment;

    #[test]
    fn constructor_rejects_bad_arcs() {
        assert!(matches!(
            SkeletonOrientation::new(3, vec![(0, 3)]),
            Err(OrientationError::InvalidVertex { vertex: 3, .. })
        ));
        assert!(matches!(
            SkeletonOrientation::new(3, vec![(1, 1)]),
            Err(OrientationError::SelfLoop { vertex: 1 })
        ));
        assert!(matches!(
            SkeletonOrientation::new(3, vec![(0, 1), (1, 0)]),
            Err(OrientationError::BothDirections { u: 0, v: 1 })
        ));
    }

    #[test]
    fn cycle_detection_with_witness() {
        let o = SkeletonOrientation::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let c = o.induced_cycle(&[0, 1, 2, 3]).unwrap();
        assert_eq!(c.len(), 3);
        let mut sorted = c.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
        // the witness really is a directed cycle
        for i in 0..c.len() {
            assert!(o.has_arc(c[i], c[(i + 1) % c.len()]));
        }
        assert!(o.induced_cycle(&[0, 1, 3]).is_none());
        assert!(o.global_cycle().is_some());
    }

    #[test]
    fn local_acyclicity_ignores_cross_face_cycles() {
        // a global 4-cycle whose faces are single edges stays locally acyclic
        let o =
            SkeletonOrientation::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let faces: Vec<Vec<usize>> =
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        o.is_locally_acyclic(&faces).unwrap();
        assert!(o.global_cycle().is_some());
        assert_eq!(o.reversible_arcs(&faces).len(), 4);
    }

    #[test]
    fn transitive_triangle_reversibility() {
        let o = SkeletonOrientation::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let faces = vec![vec![0, 1, 2]];
        o.is_locally_acyclic(&faces).unwrap();
        // reversing the composite arc 0->2 closes a cycle; the other two stay acyclic
        assert_eq!(o.reversible_arcs(&faces), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn face_order_follows_arcs() {
        let o = SkeletonOrientation::new(3, vec![(1, 0), (0, 2), (1, 2)]).unwrap();
        assert_eq!(o.face_order(&[0, 1, 2]).unwrap(), vec![1, 0, 2]);
        let missing = SkeletonOrientation::new(3, vec![(1, 0)]).unwrap();
        assert!(matches!(
            missing.face_order(&[0, 1, 2]),
            Err(OrientationError::FaceNotTournament { .. })
        ));
        let cyc = SkeletonOrientation::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(
            cyc.face_order(&[0, 1, 2]),
            Err(OrientationError::CyclicFace { .. })
        ));
    }

    #[test]
    fn orientation_and_staircases_round_trip() {
        // square split along a diagonal, lifted to its prism
        let base = config_from_ints(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let prod = Arc::new(product_with_segment(&base));
        let faces = vec![vec![0, 1, 2], vec![1, 2, 3]];
        let edges: BTreeSet<(usize, usize)> =
            [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)].into();
        let o = SkeletonOrientation::new(
            4,
            vec![(0, 1), (2, 0), (2, 1), (2, 3), (1, 3)],
        )
        .unwrap();
        o.is_locally_acyclic(&faces).unwrap();
        let t = orientation_to_triangulation(&o, &faces, prod.clone(), 4).unwrap();
        t.validate().unwrap();
        assert_eq!(t.n_cells(), 6);
        let back = triangulation_to_orientation(&t, &edges, 4).unwrap();
        assert_eq!(back, o);
    }

    #[test]
    fn every_local_orientation_of_a_triangle_prism_round_trips() {
        let base = config_from_ints(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let prod = Arc::new(product_with_segment(&base));
        let faces = vec![vec![0, 1, 2]];
        let edges: BTreeSet<(usize, usize)> = [(0, 1), (0, 2), (1, 2)].into();
        let mut count = 0;
        for mask in 0..8u32 {
            let arc = |bit: u32, u: usize, v: usize| {
                if mask & (1 << bit) == 0 {
                    (u, v)
                } else {
                    (v, u)
                }
            };
            let o = SkeletonOrientation::new(
                3,
                vec![arc(0, 0, 1), arc(1, 0, 2), arc(2, 1, 2)],
            )
            .unwrap();
            if o.is_locally_acyclic(&faces).is_err() {
                continue;
            }
            count += 1;
            let t = orientation_to_triangulation(&o, &faces, prod.clone(), 3).unwrap();
            t.validate().unwrap();
            assert_eq!(triangulation_to_orientation(&t, &edges, 3).unwrap(), o);
        }
        // six acyclic tournaments on three vertices, two cyclic ones
        assert_eq!(count, 6);
    }

    #[test]
    fn restriction_to_base_face_is_a_prism_triangulation() {
        let base = config_from_ints(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let prod = Arc::new(product_with_segment(&base));
        let faces = vec![vec![0, 1, 2], vec![1, 2, 3]];
        let o = SkeletonOrientation::new(
            4,
            vec![(0, 1), (2, 0), (2, 1), (2, 3), (1, 3)],
        )
        .unwrap();
        let t = orientation_to_triangulation(&o, &faces, prod.clone(), 4).unwrap();
        let restricted = restriction_to_base_face(&t, &[1, 2], 4);
        // the square face {1,2} x I is cut along one diagonal into two triangles
        assert_eq!(restricted.len(), 2);
        for s in &restricted {
            assert_eq!(s.len(), 3);
        }
    }

    #[test]
    fn orientation_io_round_trip() {
        let o = SkeletonOrientation::new(5, vec![(3, 1), (0, 4), (2, 3)]).unwrap();
        let mut buf = Vec::new();
        write_orientation(&o, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "0 4\n2 3\n3 1\n");
        let mut r = std::io::Cursor::new(buf);
        let o2 = read_orientation(5, &mut r).unwrap();
        assert_eq!(o, o2);
    }

    #[test]
    fn restricted_orientation_keeps_labels() {
        let o = SkeletonOrientation::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let sub: BTreeSet<usize> = [1, 2, 3].into();
        let r = o.restricted_to(&sub);
        assert_eq!(r.n_arcs(), 2);
        assert!(r.has_arc(1, 2) && r.has_arc(2, 3));
    }
}
