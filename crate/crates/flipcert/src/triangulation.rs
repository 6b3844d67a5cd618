//! Triangulations of point configurations as geometric simplicial complexes.
//!
//! A triangulation is a set of full-dimensional simplices on a shared
//! configuration. Validity is checked exactly: every cell must be
//! nondegenerate, the cells must fill the convex hull (scaled-volume
//! identity against a pulling triangulation), and every pair of cells must
//! intersect in a common face. The pairwise test runs fast certificate paths
//! (bounding boxes, separating cell facets, shared-facet side tests) and
//! falls back to exact rational linear programming only for the residue.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use num::bigint::BigInt;
use num::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactgeom::{GeomError, PointConfiguration, Rational};
use crate::lp::{self, LpOutcome};
use crate::zz;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error("a triangulation needs at least one cell")]
    Empty,
    #[error("cell {cell:?} has {got} vertices, expected {expected}")]
    WrongCellSize {
        cell: Vec<usize>,
        got: usize,
        expected: usize,
    },
    #[error("vertex {vertex} repeats inside a cell")]
    RepeatedVertex { vertex: usize },
    #[error("cell {cell:?} appears more than once")]
    DuplicateCell { cell: Vec<usize> },
    #[error("cell {cell:?} is degenerate (zero volume)")]
    DegenerateCell { cell: Vec<usize> },
    #[error("cells cover scaled volume {covered}, but the hull has {hull}")]
    VolumeMismatch { covered: Rational, hull: Rational },
    #[error("cells {a:?} and {b:?} do not intersect in a common face: {detail}")]
    ImproperPair {
        a: Vec<usize>,
        b: Vec<usize>,
        detail: String,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {msg}")]
    Io { msg: String },
}

impl From<std::io::Error> for TriangulationError {
    fn from(e: std::io::Error) -> Self {
        TriangulationError::Io { msg: e.to_string() }
    }
}

/// A simplex as a strictly increasing list of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self, TriangulationError> {
        vertices.sort_unstable();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(TriangulationError::RepeatedVertex { vertex: w[0] });
            }
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn contains_all(&self, vs: &[usize]) -> bool {
        vs.iter().all(|&v| self.contains(v))
    }

    /// The simplex with `v` removed; `None` when `v` is not a vertex.
    pub fn without(&self, v: usize) -> Option<Simplex> {
        if !self.contains(v) {
            return None;
        }
        Some(Simplex(
            self.0.iter().copied().filter(|&x| x != v).collect(),
        ))
    }

    /// Union with a disjoint vertex set.
    pub fn join(&self, other: &[usize]) -> Result<Simplex, TriangulationError> {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Simplex::new(v)
    }

    /// All sub-simplices with exactly `k` vertices, in lexicographic order.
    pub fn faces_of_size(&self, k: usize) -> Vec<Simplex> {
        let n = self.0.len();
        if k > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut pick: Vec<usize> = (0..k).collect();
        loop {
            out.push(Simplex(pick.iter().map(|&i| self.0[i]).collect()));
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if pick[i] != i + n - k {
                    pick[i] += 1;
                    for j in i + 1..k {
                        pick[j] = pick[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "}}")
    }
}

/// A simplicial complex represented by its inclusion-maximal faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceComplex {
    top: Vec<Simplex>,
}

impl FaceComplex {
    /// Build from arbitrary generators, pruning non-maximal ones.
    pub fn from_faces(faces: Vec<Simplex>) -> FaceComplex {
        let mut top: Vec<Simplex> = Vec::new();
        let mut sorted = faces;
        // longer faces first so maximality filtering is a single pass
        sorted.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        for f in sorted {
            if !top.iter().any(|t| t.contains_all(f.vertices())) {
                top.push(f);
            }
        }
        top.sort();
        FaceComplex { top }
    }

    pub fn top_faces(&self) -> &[Simplex] {
        &self.top
    }

    /// True iff `face` is contained in some maximal face.
    pub fn contains(&self, face: &[usize]) -> bool {
        self.top.iter().any(|t| t.contains_all(face))
    }

    pub fn is_subcomplex_of(&self, other: &FaceComplex) -> bool {
        self.top.iter().all(|t| other.contains(t.vertices()))
    }

    /// All faces with exactly `k` vertices, deduplicated, in order.
    pub fn faces_of_size(&self, k: usize) -> Vec<Simplex> {
        let mut set = BTreeSet::new();
        for t in &self.top {
            for f in t.faces_of_size(k) {
                set.insert(f);
            }
        }
        set.into_iter().collect()
    }

    /// Union of all vertices.
    pub fn support(&self) -> BTreeSet<usize> {
        self.top
            .iter()
            .flat_map(|t| t.vertices().iter().copied())
            .collect()
    }
}

/// A set of full-dimensional cells over a shared configuration, kept in
/// canonical sorted order. Construction checks shape only; `validate` proves
/// that the cells really form a triangulation.
#[derive(Debug, Clone)]
pub struct Triangulation {
    config: Arc<PointConfiguration>,
    cells: Vec<Simplex>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells && *self.config == *other.config
    }
}
impl Eq for Triangulation {}

impl std::hash::Hash for Triangulation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.cells.hash(state);
    }
}

impl Triangulation {
    pub fn new(
        config: Arc<PointConfiguration>,
        mut cells: Vec<Simplex>,
    ) -> Result<Self, TriangulationError> {
        if cells.is_empty() {
            return Err(TriangulationError::Empty);
        }
        let expected = config.dim() + 1;
        for c in &cells {
            if c.len() != expected {
                return Err(TriangulationError::WrongCellSize {
                    cell: c.vertices().to_vec(),
                    got: c.len(),
                    expected,
                });
            }
            for &v in c.vertices() {
                if v >= config.len() {
                    return Err(GeomError::InvalidIndex {
                        index: v,
                        len: config.len(),
                    }
                    .into());
                }
            }
        }
        cells.sort();
        for w in cells.windows(2) {
            if w[0] == w[1] {
                return Err(TriangulationError::DuplicateCell {
                    cell: w[0].vertices().to_vec(),
                });
            }
        }
        Ok(Triangulation { config, cells })
    }

    pub fn from_index_cells(
        config: Arc<PointConfiguration>,
        cells: Vec<Vec<usize>>,
    ) -> Result<Self, TriangulationError> {
        let cells = cells
            .into_iter()
            .map(Simplex::new)
            .collect::<Result<Vec<_>, _>>()?;
        Triangulation::new(config, cells)
    }

    pub fn config(&self) -> &Arc<PointConfiguration> {
        &self.config
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn dim(&self) -> usize {
        self.config.dim()
    }

    pub fn contains_cell(&self, cell: &Simplex) -> bool {
        self.cells.binary_search(cell).is_ok()
    }

    /// Union of all cell vertices (a triangulation need not use every
    /// configuration point).
    pub fn support(&self) -> BTreeSet<usize> {
        self.cells
            .iter()
            .flat_map(|c| c.vertices().iter().copied())
            .collect()
    }

    pub fn face_complex(&self) -> FaceComplex {
        FaceComplex {
            top: self.cells.clone(),
        }
    }

    /// Sum of absolute edge-matrix determinants over all cells: the scaled
    /// volume covered, exact and additive for properly intersecting cells.
    pub fn detsum(&self) -> Result<Rational, TriangulationError> {
        let mut total = Rational::zero();
        for c in &self.cells {
            let d = self.config.simplex_determinant(c.vertices())?;
            if d.is_zero() {
                return Err(TriangulationError::DegenerateCell {
                    cell: c.vertices().to_vec(),
                });
            }
            total += d.abs();
        }
        Ok(total)
    }

    /// Full exact validity check with witnesses:
    /// every cell nondegenerate, total scaled volume equal to the hull's, and
    /// every pair of cells meeting in a common face.
    pub fn validate(&self) -> Result<(), TriangulationError> {
        let covered = self.detsum()?;
        let hull = hull_volume_detsum(&self.config)?;
        if covered != hull {
            return Err(TriangulationError::VolumeMismatch { covered, hull });
        }
        match first_improper_pair(&self.config, &self.cells) {
            None => Ok(()),
            Some((i, j, detail)) => Err(TriangulationError::ImproperPair {
                a: self.cells[i].vertices().to_vec(),
                b: self.cells[j].vertices().to_vec(),
                detail,
            }),
        }
    }

    /// Cells containing `face`, with the face removed: the link. Empty when
    /// no cell contains the face.
    pub fn link(&self, face: &[usize]) -> Vec<Simplex> {
        let mut out: Vec<Simplex> = self
            .cells
            .iter()
            .filter(|c| c.contains_all(face))
            .map(|c| {
                Simplex(
                    c.vertices()
                        .iter()
                        .copied()
                        .filter(|v| !face.contains(v))
                        .collect(),
                )
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Maximal intersections of cells with a vertex subset. When the subset
    /// spans a face of the hull, this is the induced triangulation of that
    /// face.
    pub fn restriction(&self, subset: &BTreeSet<usize>) -> Vec<Simplex> {
        let mut inters: Vec<Simplex> = self
            .cells
            .iter()
            .map(|c| {
                Simplex(
                    c.vertices()
                        .iter()
                        .copied()
                        .filter(|v| subset.contains(v))
                        .collect(),
                )
            })
            .filter(|s| !s.is_empty())
            .collect();
        inters.sort();
        inters.dedup();
        let maximal: Vec<Simplex> = inters
            .iter()
            .filter(|s| {
                !inters
                    .iter()
                    .any(|t| t.len() > s.len() && t.contains_all(s.vertices()))
            })
            .cloned()
            .collect();
        maximal
    }
}

/// `(p, 0)` for every point, then `(p, 1)`: the prism over a configuration.
/// Bottom copy of point `i` is index `i`, top copy is `i + n`. Labels carry
/// over with `|0` and `|1` suffixes.
pub fn product_with_segment(config: &PointConfiguration) -> PointConfiguration {
    let n = config.len();
    let mut points = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(2 * n);
    for level in 0..2u32 {
        for i in 0..n {
            let mut p = config.point(i).to_vec();
            p.push(Rational::from(BigInt::from(level)));
            points.push(p);
            labels.push(config.label(i).map(|l| format!("{}|{}", l, level)));
        }
    }
    PointConfiguration::with_labels(config.dim() + 1, points, labels)
        .expect("prism over a valid configuration is valid")
}

/// The staircase cells of the prism over one simplex, for a given vertex
/// order: cell `k` takes the first `k + 1` vertices on the bottom level and
/// the last `m - k` on the top level (`m` = number of base vertices, top copy
/// of `v` is `v + nbase`).
pub fn staircase_cells(order: &[usize], nbase: usize) -> Vec<Simplex> {
    let m = order.len();
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let mut verts: Vec<usize> = order[..=k].to_vec();
        verts.extend(order[k..].iter().map(|&v| v + nbase));
        out.push(Simplex::new(verts).expect("distinct order entries"));
    }
    out
}

/// Staircase triangulation of the prism over the full base, induced by a
/// permutation of the base vertices.
pub fn staircase_triangulation(
    product: Arc<PointConfiguration>,
    order: &[usize],
    nbase: usize,
) -> Result<Triangulation, TriangulationError> {
    Triangulation::new(product, staircase_cells(order, nbase))
}

/// The pulling triangulation: recursively cone the lowest-index point of each
/// face over the face's facets that avoid it. Canonical for a fixed point
/// order; used as the independent volume reference.
pub fn pulling_triangulation(
    config: &Arc<PointConfiguration>,
) -> Result<Triangulation, TriangulationError> {
    let all: Vec<usize> = (0..config.len()).collect();
    let mut memo: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
    let cells = pull_rec(config, &all, &mut memo)?;
    Triangulation::from_index_cells(config.clone(), cells)
}

fn pull_rec(
    config: &Arc<PointConfiguration>,
    idxs: &[usize],
    memo: &mut HashMap<Vec<usize>, Vec<Vec<usize>>>,
) -> Result<Vec<Vec<usize>>, GeomError> {
    if let Some(hit) = memo.get(idxs) {
        return Ok(hit.clone());
    }
    let rank = config.affine_rank(idxs)?;
    if idxs.len() == rank + 1 {
        // affinely independent: the face is a simplex already
        return Ok(vec![idxs.to_vec()]);
    }
    let p = idxs[0];
    let local = config.hull_coords_config(idxs);
    let p_local = 0usize;
    let mut cells = Vec::new();
    for facet in local.facets()? {
        if facet.incident.contains(&p_local) {
            continue;
        }
        let sub: Vec<usize> = facet.incident.iter().map(|&li| idxs[li]).collect();
        for c in pull_rec(config, &sub, memo)? {
            let mut cell = c;
            cell.push(p);
            cell.sort_unstable();
            cells.push(cell);
        }
    }
    cells.sort();
    memo.insert(idxs.to_vec(), cells.clone());
    Ok(cells)
}

/// Scaled volume of the convex hull: the detsum of the pulling triangulation.
pub fn hull_volume_detsum(config: &Arc<PointConfiguration>) -> Result<Rational, TriangulationError> {
    let pulled = pulling_triangulation(config)?;
    pulled.detsum()
}

/// Exact single-pair properness test: do the two nondegenerate cells
/// intersect in a (possibly empty) common face?
pub fn cells_properly_intersect(
    config: &PointConfiguration,
    a: &Simplex,
    b: &Simplex,
) -> Result<bool, TriangulationError> {
    for c in [a, b] {
        if config.simplex_determinant(c.vertices())?.is_zero() {
            return Err(TriangulationError::DegenerateCell {
                cell: c.vertices().to_vec(),
            });
        }
    }
    if a == b {
        return Ok(true);
    }
    let pair = [a.clone(), b.clone()];
    Ok(first_improper_pair(config, &pair).is_none())
}

/// Geometry of one cell against one integer backing store: vertex list,
/// facet planes as homogeneous cofactor vectors with the opposite vertex's
/// side, and the bounding box in scaled coordinates.
struct CellGeom<Z> {
    verts: Vec<usize>,
    /// `planes[k]` omits `verts[k]`; sign is the opposite vertex's side.
    planes: Vec<(Vec<Z>, i8)>,
    bbox: Vec<(Z, Z)>,
}

fn cell_geom<Z: zz::Zi>(hom: &[Vec<Z>], dim: usize, cell: &Simplex) -> Option<CellGeom<Z>> {
    let verts = cell.vertices().to_vec();
    let mut bbox = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut lo = hom[verts[0]][k].clone();
        let mut hi = lo.clone();
        for &v in &verts[1..] {
            let x = &hom[v][k];
            if *x < lo {
                lo = x.clone();
            }
            if *x > hi {
                hi = x.clone();
            }
        }
        bbox.push((lo, hi));
    }
    let mut planes = Vec::with_capacity(verts.len());
    let mut minor = vec![vec![Z::zero(); dim]; dim];
    for (skip_v, _) in verts.iter().enumerate() {
        let rows: Vec<usize> = verts
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip_v)
            .map(|(_, &v)| v)
            .collect();
        let mut plane = vec![Z::zero(); dim + 1];
        for (skip_c, slot) in plane.iter_mut().enumerate() {
            for (r, &pv) in rows.iter().enumerate() {
                let mut c = 0;
                for (j, x) in hom[pv].iter().enumerate() {
                    if j == skip_c {
                        continue;
                    }
                    minor[r][c] = x.clone();
                    c += 1;
                }
            }
            let det = zz::det(minor.clone())?;
            *slot = if skip_c % 2 == 0 { det } else { det.neg() };
        }
        let mut e = Z::zero();
        for (pj, xj) in plane.iter().zip(&hom[verts[skip_v]]) {
            e = e.ck_add(&pj.ck_mul(xj)?)?;
        }
        assert!(
            !e.is_zero(),
            "nondegenerate cell has its vertex off each facet plane"
        );
        let side = if e.is_negative() { -1 } else { 1 };
        planes.push((plane, side));
    }
    Some(CellGeom {
        verts,
        planes,
        bbox,
    })
}

enum PairVerdict {
    Proper,
    Improper(String),
    NeedsLp,
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Certificate pass for one ordered direction: some facet plane of `a` has
/// all of `b` weakly on the outward side and touching exactly in the shared
/// vertices. Such a plane proves the intersection is the shared face.
fn separating_facet_certifies<Z: zz::Zi>(
    hom: &[Vec<Z>],
    a: &CellGeom<Z>,
    b: &CellGeom<Z>,
    shared: &[usize],
) -> Option<bool> {
    'plane: for (plane, side) in &a.planes {
        let mut zero_hits = 0usize;
        for &bv in &b.verts {
            let mut e = Z::zero();
            for (pj, xj) in plane.iter().zip(&hom[bv]) {
                e = e.ck_add(&pj.ck_mul(xj)?)?;
            }
            if e.is_zero() {
                if shared.binary_search(&bv).is_err() {
                    continue 'plane;
                }
                zero_hits += 1;
            } else {
                let outward = if e.is_negative() { -1 } else { 1 } != *side;
                if !outward {
                    continue 'plane;
                }
            }
        }
        if zero_hits == shared.len() {
            return Some(true);
        }
    }
    Some(false)
}

fn check_pair<Z: zz::Zi>(
    hom: &[Vec<Z>],
    a: &CellGeom<Z>,
    b: &CellGeom<Z>,
    dim: usize,
) -> Option<PairVerdict> {
    for k in 0..dim {
        if a.bbox[k].0 > b.bbox[k].1 || b.bbox[k].0 > a.bbox[k].1 {
            return Some(PairVerdict::Proper);
        }
    }
    let shared = sorted_intersection(&a.verts, &b.verts);
    if separating_facet_certifies(hom, a, b, &shared)?
        || separating_facet_certifies(hom, b, a, &shared)?
    {
        return Some(PairVerdict::Proper);
    }
    if shared.len() == dim {
        // the plane of the shared facet is a facet plane of both cells; the
        // certificate above already failed on it, so the two opposite
        // vertices lie strictly on the same side and the interiors overlap
        return Some(PairVerdict::Improper(format!(
            "both remaining vertices lie on the same side of the shared facet {:?}",
            shared
        )));
    }
    Some(PairVerdict::NeedsLp)
}

/// Exact fallback: maximize total barycentric weight outside the shared
/// vertices over all common points. Infeasible (disjoint hulls) or optimum
/// zero (intersection inside the shared face) both mean proper; a positive
/// optimum exhibits a common point outside the shared face.
fn lp_pair_is_proper(
    config: &PointConfiguration,
    a: &[usize],
    b: &[usize],
    shared: &[usize],
) -> (bool, String) {
    let d = config.dim();
    let na = a.len();
    let nb = b.len();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(d + 2);
    for k in 0..d {
        let mut row = Vec::with_capacity(na + nb);
        for &v in a {
            row.push(config.point(v)[k].clone());
        }
        for &v in b {
            row.push(-config.point(v)[k].clone());
        }
        rows.push(row);
    }
    let mut sum_a = vec![Rational::zero(); na + nb];
    for s in sum_a.iter_mut().take(na) {
        *s = Rational::from(BigInt::from(1));
    }
    let mut sum_b = vec![Rational::zero(); na + nb];
    for s in sum_b.iter_mut().skip(na) {
        *s = Rational::from(BigInt::from(1));
    }
    rows.push(sum_a);
    rows.push(sum_b);
    let mut rhs = vec![Rational::zero(); d];
    rhs.push(Rational::from(BigInt::from(1)));
    rhs.push(Rational::from(BigInt::from(1)));
    let mut cost = vec![Rational::zero(); na + nb];
    for (j, &v) in a.iter().enumerate() {
        if shared.binary_search(&v).is_err() {
            cost[j] = Rational::from(BigInt::from(1));
        }
    }
    for (j, &v) in b.iter().enumerate() {
        if shared.binary_search(&v).is_err() {
            cost[na + j] = Rational::from(BigInt::from(1));
        }
    }
    match lp::maximize(&rows, &rhs, &cost) {
        LpOutcome::Infeasible => (true, String::new()),
        LpOutcome::Optimal(v) if v.is_zero() => (true, String::new()),
        LpOutcome::Optimal(v) => (
            false,
            format!(
                "a common point carries barycentric weight {} outside the shared vertices {:?}",
                v, shared
            ),
        ),
        LpOutcome::Unbounded => unreachable!("weights are bounded by the two unit-sum rows"),
    }
}

/// First improperly intersecting pair in deterministic order, with detail.
/// Tries the `i128` backing store first and redoes the scan over `BigInt` on
/// overflow.
fn first_improper_pair(
    config: &PointConfiguration,
    cells: &[Simplex],
) -> Option<(usize, usize, String)> {
    let (big, small) = config.scaled_hom();
    if let Some(hs) = small {
        if let Some(r) = improper_scan(config, cells, hs) {
            return r.into_iter().next();
        }
    }
    improper_scan(config, cells, big)
        .expect("BigInt arithmetic is total")
        .into_iter()
        .next()
}

fn improper_scan<Z: zz::Zi + Send + Sync>(
    config: &PointConfiguration,
    cells: &[Simplex],
    hom: &[Vec<Z>],
) -> Option<Vec<(usize, usize, String)>> {
    let dim = config.dim();
    let geoms: Vec<CellGeom<Z>> = cells
        .iter()
        .map(|c| cell_geom(hom, dim, c))
        .collect::<Option<Vec<_>>>()?;
    let per_i: Vec<Option<Vec<(usize, usize, String)>>> = (0..cells.len())
        .into_par_iter()
        .map(|i| {
            let mut bad = Vec::new();
            for j in i + 1..cells.len() {
                match check_pair(hom, &geoms[i], &geoms[j], dim)? {
                    PairVerdict::Proper => {}
                    PairVerdict::Improper(msg) => bad.push((i, j, msg)),
                    PairVerdict::NeedsLp => {
                        let shared = sorted_intersection(&geoms[i].verts, &geoms[j].verts);
                        let (ok, msg) =
                            lp_pair_is_proper(config, &geoms[i].verts, &geoms[j].verts, &shared);
                        if !ok {
                            bad.push((i, j, msg));
                        }
                    }
                }
            }
            Some(bad)
        })
        .collect();
    let mut all = Vec::new();
    for v in per_i {
        all.extend(v?);
    }
    all.sort();
    Some(all)
}

/// A growing cell set with exact budget accounting, for exhaustive search:
/// cells are admitted only if nondegenerate, properly intersecting everything
/// chosen so far, and within the hull's volume budget.
pub struct PartialTriangulation {
    config: Arc<PointConfiguration>,
    cells: Vec<Simplex>,
    covered: Rational,
    target: Rational,
}

impl PartialTriangulation {
    pub fn new(config: Arc<PointConfiguration>) -> Result<Self, TriangulationError> {
        let target = hull_volume_detsum(&config)?;
        Ok(PartialTriangulation {
            config,
            cells: Vec::new(),
            covered: Rational::zero(),
            target,
        })
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn covered(&self) -> &Rational {
        &self.covered
    }

    pub fn target(&self) -> &Rational {
        &self.target
    }

    pub fn is_complete(&self) -> bool {
        self.covered == self.target
    }

    /// Admit a cell if it keeps the partial triangulation consistent.
    /// `Ok(false)` means the cell conflicts (overlap or budget); the state is
    /// unchanged. Errors are reserved for cells invalid on their own.
    pub fn try_add(&mut self, cell: Simplex) -> Result<bool, TriangulationError> {
        let det = self.config.simplex_determinant(cell.vertices())?;
        if det.is_zero() {
            return Err(TriangulationError::DegenerateCell {
                cell: cell.vertices().to_vec(),
            });
        }
        let vol = det.abs();
        if self.covered.clone() + &vol > self.target {
            return Ok(false);
        }
        for c in &self.cells {
            if !cells_properly_intersect(&self.config, c, &cell)? {
                return Ok(false);
            }
        }
        self.covered += vol;
        self.cells.push(cell);
        Ok(true)
    }

    /// Remove the most recently added cell.
    pub fn pop(&mut self) {
        if let Some(c) = self.cells.pop() {
            let det = self
                .config
                .simplex_determinant(c.vertices())
                .expect("previously admitted cell");
            self.covered -= det.abs();
        }
    }

    pub fn into_triangulation(self) -> Result<Triangulation, TriangulationError> {
        if !self.is_complete() {
            return Err(TriangulationError::VolumeMismatch {
                covered: self.covered,
                hull: self.target,
            });
        }
        Triangulation::new(self.config, self.cells)
    }
}

/// Write the `<n_cells> <verts_per_cell>` header, then one line of ascending
/// vertex indices per cell, cells in canonical order.
pub fn write_triangulation(t: &Triangulation, w: &mut dyn Write) -> Result<(), TriangulationError> {
    writeln!(w, "{} {}", t.n_cells(), t.dim() + 1)?;
    for c in t.cells() {
        let line = c
            .vertices()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(w, "{}", line)?;
    }
    Ok(())
}

/// Inverse of [`write_triangulation`] over a known configuration.
pub fn read_triangulation(
    config: Arc<PointConfiguration>,
    r: &mut dyn BufRead,
) -> Result<Triangulation, TriangulationError> {
    let mut lines = Vec::new();
    for l in r.lines() {
        lines.push(l?);
    }
    let header = lines.first().ok_or(TriangulationError::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(TriangulationError::Parse {
            line: 1,
            msg: format!("expected `<n_cells> <verts_per_cell>`, got {:?}", header),
        });
    }
    let parse = |s: &str, line: usize| {
        s.parse::<usize>().map_err(|e| TriangulationError::Parse {
            line,
            msg: format!("bad count {:?}: {}", s, e),
        })
    };
    let n = parse(toks[0], 1)?;
    let k = parse(toks[1], 1)?;
    let mut cells = Vec::with_capacity(n);
    for row in 0..n {
        let lineno = row + 2;
        let line = lines.get(row + 1).ok_or(TriangulationError::Parse {
            line: lines.len(),
            msg: format!("expected {} cells, file ended early", n),
        })?;
        let verts = line
            .split_whitespace()
            .map(|t| parse(t, lineno))
            .collect::<Result<Vec<_>, _>>()?;
        if verts.len() != k {
            return Err(TriangulationError::Parse {
                line: lineno,
                msg: format!("expected {} vertices, got {}", k, verts.len()),
            });
        }
        cells.push(verts);
    }
    Triangulation::from_index_cells(config, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::config_from_ints;

    fn unit_square() -> Arc<PointConfiguration> {
        Arc::new(config_from_ints(
            2,
            &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]],
        ))
    }

    fn tri_config() -> Arc<PointConfiguration> {
        Arc::new(config_from_ints(2, &[&[0, 0], &[1, 0], &[0, 1]]))
    }

    fn t(config: &Arc<PointConfiguration>, cells: &[&[usize]]) -> Triangulation {
        Triangulation::from_index_cells(config.clone(), cells.iter().map(|c| c.to_vec()).collect())
            .unwrap()
    }

    #[test]
    fn square_diagonals_validate() {
        let sq = unit_square();
        t(&sq, &[&[0, 1, 2], &[1, 2, 3]]).validate().unwrap();
        t(&sq, &[&[0, 1, 3], &[0, 2, 3]]).validate().unwrap();
    }

    #[test]
    fn overlapping_cells_are_improper() {
        let sq = unit_square();
        let bad = t(&sq, &[&[0, 1, 2], &[0, 1, 3]]);
        match bad.validate() {
            Err(TriangulationError::ImproperPair { a, b, .. }) => {
                assert_eq!(a, vec![0, 1, 2]);
                assert_eq!(b, vec![0, 1, 3]);
            }
            other => panic!("expected improper pair, got {:?}", other),
        }
    }

    #[test]
    fn undercoverage_is_a_volume_mismatch() {
        let sq = unit_square();
        let half = t(&sq, &[&[0, 1, 2]]);
        match half.validate() {
            Err(TriangulationError::VolumeMismatch { covered, hull }) => {
                assert_eq!(covered * Rational::from(BigInt::from(2)), hull);
            }
            other => panic!("expected volume mismatch, got {:?}", other),
        }
    }

    #[test]
    fn degenerate_cell_is_rejected() {
        let c = Arc::new(config_from_ints(2, &[&[0, 0], &[1, 0], &[2, 0], &[0, 1]]));
        let bad = t(&c, &[&[0, 1, 2], &[0, 2, 3]]);
        assert!(matches!(
            bad.validate(),
            Err(TriangulationError::DegenerateCell { cell }) if cell == vec![0, 1, 2]
        ));
    }

    #[test]
    fn shared_vertex_cells_validate() {
        // two triangles meeting in one vertex plus a filler: keep it simple
        // with a fan around the origin
        let c = Arc::new(config_from_ints(
            2,
            &[&[0, 0], &[1, 0], &[1, 1], &[-1, 1], &[-1, 0]],
        ));
        let fan = t(&c, &[&[0, 1, 2], &[0, 2, 3], &[0, 3, 4]]);
        fan.validate().unwrap();
    }

    #[test]
    fn link_of_edge_and_vertex() {
        let sq = unit_square();
        let tr = t(&sq, &[&[0, 1, 2], &[1, 2, 3]]);
        let l = tr.link(&[1, 2]);
        assert_eq!(l, vec![Simplex::new(vec![0]).unwrap(), Simplex::new(vec![3]).unwrap()]);
        let l = tr.link(&[0]);
        assert_eq!(l, vec![Simplex::new(vec![1, 2]).unwrap()]);
        assert!(tr.link(&[0, 3]).is_empty());
    }

    #[test]
    fn restriction_to_prism_bottom() {
        let base = tri_config();
        let prod = Arc::new(product_with_segment(&base));
        assert_eq!(prod.dim(), 3);
        assert_eq!(prod.len(), 6);
        let tr = staircase_triangulation(prod.clone(), &[0, 1, 2], 3).unwrap();
        tr.validate().unwrap();
        let bottom: BTreeSet<usize> = [0, 1, 2].into();
        assert_eq!(
            tr.restriction(&bottom),
            vec![Simplex::new(vec![0, 1, 2]).unwrap()]
        );
        let top: BTreeSet<usize> = [3, 4, 5].into();
        assert_eq!(
            tr.restriction(&top),
            vec![Simplex::new(vec![3, 4, 5]).unwrap()]
        );
    }

    #[test]
    fn all_triangle_prism_staircases_validate() {
        let base = tri_config();
        let prod = Arc::new(product_with_segment(&base));
        let orders = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for o in orders {
            staircase_triangulation(prod.clone(), &o, 3)
                .unwrap()
                .validate()
                .unwrap();
        }
    }

    #[test]
    fn pulling_square_cones_lowest_vertex() {
        let sq = unit_square();
        let p = pulling_triangulation(&sq).unwrap();
        p.validate().unwrap();
        assert_eq!(
            p.cells(),
            &[
                Simplex::new(vec![0, 1, 3]).unwrap(),
                Simplex::new(vec![0, 2, 3]).unwrap()
            ]
        );
    }

    #[test]
    fn pulling_skips_interior_points() {
        let c = Arc::new(config_from_ints(
            2,
            &[&[0, 0], &[3, 0], &[0, 3], &[1, 1]],
        ));
        let p = pulling_triangulation(&c).unwrap();
        p.validate().unwrap();
        // index 3 is interior and the apex 0 is a hull vertex: one cell
        assert_eq!(p.cells(), &[Simplex::new(vec![0, 1, 2]).unwrap()]);
    }

    #[test]
    fn pulling_hexagon_volume_matches() {
        let hex = Arc::new(config_from_ints(
            2,
            &[&[2, 0], &[1, 2], &[-1, 2], &[-2, 0], &[-1, -2], &[1, -2]],
        ));
        let p = pulling_triangulation(&hex).unwrap();
        p.validate().unwrap();
        assert_eq!(p.detsum().unwrap(), hull_volume_detsum(&hex).unwrap());
        assert_eq!(hex.facets().unwrap().len(), 6);
    }

    #[test]
    fn partial_triangulation_backtracking() {
        let sq = unit_square();
        let mut pt = PartialTriangulation::new(sq.clone()).unwrap();
        assert!(pt.try_add(Simplex::new(vec![0, 1, 2]).unwrap()).unwrap());
        // overlapping cell is refused without error
        assert!(!pt.try_add(Simplex::new(vec![0, 1, 3]).unwrap()).unwrap());
        assert!(pt.try_add(Simplex::new(vec![1, 2, 3]).unwrap()).unwrap());
        assert!(pt.is_complete());
        let t = pt.into_triangulation().unwrap();
        t.validate().unwrap();
    }

    #[test]
    fn triangulation_io_round_trip() {
        let sq = unit_square();
        let tr = t(&sq, &[&[1, 2, 3], &[0, 1, 2]]);
        let mut buf = Vec::new();
        write_triangulation(&tr, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("2 3\n"));
        // canonical order puts 0 1 2 first regardless of input order
        assert!(text.contains("0 1 2\n1 2 3\n"));
        let mut r = std::io::Cursor::new(buf.clone());
        let tr2 = read_triangulation(sq.clone(), &mut r).unwrap();
        assert_eq!(tr, tr2);
        let mut buf2 = Vec::new();
        write_triangulation(&tr2, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn face_complex_subcomplex_and_faces() {
        let fc = FaceComplex::from_faces(vec![
            Simplex::new(vec![0, 1, 2]).unwrap(),
            Simplex::new(vec![1, 2]).unwrap(),
            Simplex::new(vec![2, 3]).unwrap(),
        ]);
        assert_eq!(fc.top_faces().len(), 2);
        assert!(fc.contains(&[0, 2]));
        assert!(!fc.contains(&[0, 3]));
        let edges = fc.faces_of_size(2);
        assert_eq!(edges.len(), 4);
        let sub = FaceComplex::from_faces(vec![Simplex::new(vec![0, 1]).unwrap()]);
        assert!(sub.is_subcomplex_of(&fc));
        assert!(!fc.is_subcomplex_of(&sub));
    }

    #[test]
    fn duplicate_cell_rejected() {
        let sq = unit_square();
        let r = Triangulation::from_index_cells(
            sq.clone(),
            vec![vec![0, 1, 2], vec![2, 1, 0]],
        );
        assert!(matches!(r, Err(TriangulationError::DuplicateCell { .. })));
    }

    #[test]
    fn simplex_faces_enumeration() {
        let s = Simplex::new(vec![3, 1, 5]).unwrap();
        assert_eq!(s.vertices(), &[1, 3, 5]);
        let fs = s.faces_of_size(2);
        assert_eq!(
            fs,
            vec![
                Simplex::new(vec![1, 3]).unwrap(),
                Simplex::new(vec![1, 5]).unwrap(),
                Simplex::new(vec![3, 5]).unwrap()
            ]
        );
    }
}
