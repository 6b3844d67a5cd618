//! Named constructions: the oriented 24-cell and cross-polytope skeletons,
//! the five-dimensional point families built over them, their reference
//! triangulations, vertical perturbations, and the integer lifts.
//!
//! Everything here is data plus assembly; the checking lives in `certify`.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;
use std::sync::Arc;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::exactgeom::{
    rat, rat_frac, GeomError, PointConfiguration, Rational, VectorConfiguration,
};
use crate::orientation::{orientation_to_triangulation, OrientationError, SkeletonOrientation};
use crate::triangulation::{product_with_segment, Simplex, Triangulation, TriangulationError};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("unknown construction id `{0}`")]
    UnknownId(String),
    #[error("bad parameter for `{id}`: {msg}")]
    BadParameter { id: String, msg: String },
    #[error("construction inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

// ---------------------------------------------------------------- matrices

/// Square rational matrix, row major.
pub type Mat = Vec<Vec<Rational>>;

fn mat(rows: [[i64; 4]; 4]) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&x| rat(x)).collect())
        .collect()
}

fn mat_scaled(rows: [[i64; 4]; 4], den: i64) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&x| rat_frac(x, den)).collect())
        .collect()
}

fn mat_identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| rat((i == j) as i64)).collect())
        .collect()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = Rational::zero();
                    for k in 0..n {
                        s += &a[i][k] * &b[k][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Apply a k x k matrix to the first k coordinates; trailing coordinates pass
/// through unchanged (used for the 4 x 4 symmetries acting on lifted points).
pub fn mat_apply(m: &Mat, p: &[Rational]) -> Vec<Rational> {
    let k = m.len();
    assert!(p.len() >= k);
    let mut out: Vec<Rational> = (0..k)
        .map(|i| {
            let mut s = Rational::zero();
            for j in 0..k {
                s += &m[i][j] * &p[j];
            }
            s
        })
        .collect();
    out.extend_from_slice(&p[k..]);
    out
}

/// Multiplicative closure of the generators (always contains the identity).
/// Deterministic: the result is sorted.
pub fn matrix_group_closure(gens: &[Mat]) -> Vec<Mat> {
    assert!(!gens.is_empty());
    let n = gens[0].len();
    let mut seen: BTreeSet<Mat> = BTreeSet::new();
    seen.insert(mat_identity(n));
    let mut frontier: Vec<Mat> = seen.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in gens {
                let p = mat_mul(g, m);
                if seen.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

/// The index permutation a matrix induces on the configuration's points, or
/// `None` if some image is not a configuration point.
pub fn permutation_of(config: &PointConfiguration, m: &Mat) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(config.len());
    for i in 0..config.len() {
        let img = mat_apply(m, config.point(i));
        out.push(config.index_of(&img)?);
    }
    Some(out)
}

/// Permutations for a whole list of matrices; errors if any matrix fails to
/// preserve the configuration.
pub fn permutations_of(
    config: &PointConfiguration,
    mats: &[Mat],
) -> Result<Vec<Vec<usize>>, ConstructionError> {
    mats.iter()
        .map(|m| {
            permutation_of(config, m).ok_or_else(|| {
                ConstructionError::Inconsistent(
                    "matrix does not permute the configuration points".into(),
                )
            })
        })
        .collect()
}

/// Relabel every arc by the permutation. A bijective relabeling of a
/// consistent orientation stays consistent.
pub fn orientation_image(o: &SkeletonOrientation, perm: &[usize]) -> SkeletonOrientation {
    let arcs: Vec<(usize, usize)> = o.arcs().map(|(u, v)| (perm[u], perm[v])).collect();
    SkeletonOrientation::new(o.n_vertices(), arcs).expect("bijective relabeling stays consistent")
}

/// Distinct arc sets in the orbit of the orientation under the permutations.
pub fn orientation_orbit(
    o: &SkeletonOrientation,
    perms: &[Vec<usize>],
) -> Vec<BTreeSet<(usize, usize)>> {
    let mut images: BTreeSet<BTreeSet<(usize, usize)>> = BTreeSet::new();
    for g in perms {
        images.insert(o.arcs().map(|(u, v)| (g[u], g[v])).collect());
    }
    images.into_iter().collect()
}

/// How many of the permutations fix the orientation's arc set.
pub fn orientation_stabilizer_order(o: &SkeletonOrientation, perms: &[Vec<usize>]) -> usize {
    let base: BTreeSet<(usize, usize)> = o.arcs().collect();
    perms
        .iter()
        .filter(|g| {
            o.arcs()
                .map(|(u, v)| (g[u], g[v]))
                .collect::<BTreeSet<_>>()
                == base
        })
        .count()
}

/// Quarter turn in the first two coordinates: (x1, x2) -> (-x2, x1).
pub fn rot_01() -> Mat {
    mat([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
}

/// Swap the two coordinate pairs: x -> (x3, x4, x1, x2).
pub fn swap_pairs() -> Mat {
    mat([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
}

/// Order-six rotation mixing all coordinates; entries are halves.
pub fn half_mix() -> Mat {
    mat_scaled(
        [[1, -1, 1, 1], [1, 1, -1, 1], [1, 1, 1, -1], [-1, 1, 1, 1]],
        2,
    )
}

/// Transposition of the first two coordinates.
pub fn swap_01() -> Mat {
    mat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
}

/// Cyclic coordinate shift x -> (x4, x1, x2, x3).
pub fn cycle_coords() -> Mat {
    mat([[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
}

/// Negate the first coordinate.
pub fn negate_0() -> Mat {
    mat([[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
}

/// Central inversion.
pub fn neg_identity() -> Mat {
    mat([[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])
}

/// Three-cycle on the first three coordinates: x -> (x2, x3, x1, x4).
pub fn cycle_3() -> Mat {
    mat([[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1]])
}

/// Simultaneous quarter turns in both coordinate pairs:
/// x -> (-x2, x1, -x4, x3).
pub fn double_rotation() -> Mat {
    mat([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
}

/// The rotation subgroup generated by the pair swap and the quarter turn;
/// order 32.
pub fn rotation_subgroup() -> Vec<Mat> {
    matrix_group_closure(&[swap_pairs(), rot_01()])
}

/// All signed coordinate permutations; order 384.
pub fn signed_permutation_group() -> Vec<Mat> {
    matrix_group_closure(&[swap_01(), cycle_coords(), negate_0()])
}

/// Full linear symmetry group of the 24-cell; order 1152.
pub fn cell24_symmetry_group() -> Vec<Mat> {
    matrix_group_closure(&[swap_01(), cycle_coords(), negate_0(), half_mix()])
}

/// The order-24 group generated by central inversion, the coordinate
/// three-cycle, and the double rotation; it preserves the cross-polytope
/// orientation built below.
pub fn cross_orientation_group() -> Vec<Mat> {
    matrix_group_closure(&[neg_identity(), cycle_3(), double_rotation()])
}

/// Order-six subgroup whose orbits organize the cross-polytope edge and
/// triangle tables.
pub fn triangle_orbit_group() -> Vec<Mat> {
    matrix_group_closure(&[neg_identity(), cycle_3()])
}

// ---------------------------------------------------------------- 24-cell

/// The 24-cell: eight axis points `+-2 e_i` followed by the sixteen sign
/// vectors `(+-1, +-1, +-1, +-1)` (last coordinate varying fastest, `+1`
/// listed before `-1`).
pub fn cell24_config() -> PointConfiguration {
    let mut points = Vec::with_capacity(24);
    let mut labels = Vec::with_capacity(24);
    for i in 0..4 {
        let mut p = vec![rat(0); 4];
        p[i] = rat(2);
        points.push(p);
        labels.push(Some(format!("2e{}", i + 1)));
    }
    for i in 0..4 {
        let mut p = vec![rat(0); 4];
        p[i] = rat(-2);
        points.push(p);
        labels.push(Some(format!("-2e{}", i + 1)));
    }
    for bits in 0..16u32 {
        let signs: Vec<i64> = (0..4).map(|k| if bits >> (3 - k) & 1 == 0 { 1 } else { -1 }).collect();
        points.push(signs.iter().map(|&s| rat(s)).collect());
        labels.push(Some(
            signs
                .iter()
                .map(|&s| if s > 0 { '+' } else { '-' })
                .collect::<String>(),
        ));
    }
    PointConfiguration::with_labels(4, points, labels).expect("24-cell data is consistent")
}

/// Undirected skeleton edges: vertex pairs whose smallest containing face is
/// the pair itself.
pub fn skeleton_edges(config: &PointConfiguration) -> Result<Vec<(usize, usize)>, GeomError> {
    let n = config.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let ft = config.is_face(&[i, j])?;
            if ft.is_face && ft.minimal_face.len() == 2 {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// Triangles of the skeleton: triples of pairwise adjacent vertices whose
/// smallest containing face is the triple itself.
pub fn skeleton_triangles(
    config: &PointConfiguration,
    edges: &[(usize, usize)],
) -> Result<Vec<Vec<usize>>, GeomError> {
    let eset: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let n = config.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !eset.contains(&(i, j)) {
                continue;
            }
            for k in j + 1..n {
                if !eset.contains(&(i, k)) || !eset.contains(&(j, k)) {
                    continue;
                }
                let ft = config.is_face(&[i, j, k])?;
                if ft.is_face && ft.minimal_face.len() == 3 {
                    out.push(vec![i, j, k]);
                }
            }
        }
    }
    Ok(out)
}

/// One octahedral facet of the oriented 24-cell, read off the orientation:
/// its unique source, unique sink, and the equatorial 4-cycle starting at the
/// smallest equator vertex.
#[derive(Debug, Clone)]
pub struct OctFrame {
    pub octahedron: Vec<usize>,
    pub source: usize,
    pub sink: usize,
    pub equator: [usize; 4],
}

impl OctFrame {
    /// The two opposite equator pairs, each summing (as points) to the same
    /// total as the source-sink axis.
    pub fn axis(&self) -> (usize, usize) {
        (self.source, self.sink)
    }
}

/// The 24-cell with its facet octahedra, skeleton, the orientation of the
/// 2-skeleton, and per-octahedron frames.
#[derive(Debug, Clone)]
pub struct OrientedCell24 {
    pub config: Arc<PointConfiguration>,
    /// 24 octahedra as sorted 6-element vertex sets.
    pub octahedra: Vec<Vec<usize>>,
    /// 96 undirected edges, `u < v`.
    pub edges: Vec<(usize, usize)>,
    /// 96 triangles as sorted triples.
    pub triangles: Vec<Vec<usize>>,
    /// 96 arcs, one per edge.
    pub orientation: SkeletonOrientation,
    /// One frame per octahedron, parallel to `octahedra`.
    pub frames: Vec<OctFrame>,
}

fn point_index(
    config: &PointConfiguration,
    coords: &[i64],
) -> Result<usize, ConstructionError> {
    let p: Vec<Rational> = coords.iter().map(|&x| rat(x)).collect();
    config.index_of(&p).ok_or_else(|| {
        ConstructionError::Inconsistent(format!("expected configuration point {:?}", coords))
    })
}

/// Seed arcs on the octahedron cut out by the functional `x1 + x2`: source
/// `2 e1`, sink `2 e2`, and the equatorial cycle through the four sign
/// vectors with `x1 = x2 = 1`.
fn seed_arcs(config: &PointConfiguration) -> Result<Vec<(usize, usize)>, ConstructionError> {
    let src = point_index(config, &[2, 0, 0, 0])?;
    let snk = point_index(config, &[0, 2, 0, 0])?;
    let mut cyc = Vec::with_capacity(4);
    for coords in [[1, 1, 1, 1], [1, 1, -1, 1], [1, 1, -1, -1], [1, 1, 1, -1]] {
        cyc.push(point_index(config, &coords)?);
    }
    let mut arcs = Vec::with_capacity(12);
    for i in 0..4 {
        arcs.push((src, cyc[i]));
        arcs.push((cyc[i], snk));
        arcs.push((cyc[i], cyc[(i + 1) % 4]));
    }
    Ok(arcs)
}

/// Close a directed edge set under index permutations. Errors if the closure
/// ever contains an arc in both directions.
fn orbit_orientation(
    n: usize,
    seed: &[(usize, usize)],
    perms: &[Vec<usize>],
) -> Result<SkeletonOrientation, ConstructionError> {
    let mut arcs: BTreeSet<(usize, usize)> = seed.iter().copied().collect();
    loop {
        let mut grew = false;
        let snapshot: Vec<(usize, usize)> = arcs.iter().copied().collect();
        for g in perms {
            for &(u, v) in &snapshot {
                if arcs.insert((g[u], g[v])) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    for &(u, v) in &arcs {
        if arcs.contains(&(v, u)) {
            return Err(ConstructionError::Inconsistent(format!(
                "orientation orbit contains both directions of edge {} {}",
                u, v
            )));
        }
    }
    Ok(SkeletonOrientation::new(n, arcs.into_iter().collect())?)
}

fn frame_of(
    orientation: &SkeletonOrientation,
    oct: &[usize],
) -> Result<OctFrame, ConstructionError> {
    let verts: BTreeSet<usize> = oct.iter().copied().collect();
    let mut indeg: BTreeMap<usize, usize> = verts.iter().map(|&v| (v, 0)).collect();
    let mut outdeg = indeg.clone();
    let mut inner: Vec<(usize, usize)> = Vec::new();
    for (u, v) in orientation.arcs() {
        if verts.contains(&u) && verts.contains(&v) {
            *outdeg.get_mut(&u).unwrap() += 1;
            *indeg.get_mut(&v).unwrap() += 1;
            inner.push((u, v));
        }
    }
    let sources: Vec<usize> = verts.iter().copied().filter(|v| indeg[v] == 0).collect();
    let sinks: Vec<usize> = verts.iter().copied().filter(|v| outdeg[v] == 0).collect();
    if sources.len() != 1 || sinks.len() != 1 {
        return Err(ConstructionError::Inconsistent(format!(
            "octahedron {:?} does not have a unique source and sink",
            oct
        )));
    }
    let (source, sink) = (sources[0], sinks[0]);
    let equator: Vec<usize> = verts
        .iter()
        .copied()
        .filter(|&v| v != source && v != sink)
        .collect();
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    for &(u, v) in &inner {
        if equator.contains(&u) && equator.contains(&v) {
            if next.insert(u, v).is_some() {
                return Err(ConstructionError::Inconsistent(format!(
                    "equator of {:?} is not a single cycle",
                    oct
                )));
            }
        }
    }
    let start = *equator.iter().min().unwrap();
    let mut cycle = [start; 4];
    for i in 1..4 {
        cycle[i] = *next.get(&cycle[i - 1]).ok_or_else(|| {
            ConstructionError::Inconsistent(format!("equator walk of {:?} breaks off", oct))
        })?;
    }
    if next.get(&cycle[3]) != Some(&start) || cycle.iter().collect::<BTreeSet<_>>().len() != 4 {
        return Err(ConstructionError::Inconsistent(format!(
            "equator of {:?} is not a 4-cycle",
            oct
        )));
    }
    Ok(OctFrame {
        octahedron: oct.to_vec(),
        source,
        sink,
        equator: cycle,
    })
}

/// Build the oriented 24-cell: facets, skeleton, the orbit orientation of its
/// 2-skeleton, and the per-octahedron frames.
pub fn oriented_cell24() -> Result<OrientedCell24, ConstructionError> {
    let config = Arc::new(cell24_config());
    let octahedra: Vec<Vec<usize>> = {
        let mut octs: Vec<Vec<usize>> = config
            .facets()?
            .iter()
            .map(|f| f.incident.iter().copied().collect())
            .collect();
        octs.sort();
        octs
    };
    let edges = skeleton_edges(&config)?;
    let triangles = skeleton_triangles(&config, &edges)?;
    debug_assert_eq!(octahedra.len(), 24);
    debug_assert_eq!(edges.len(), 96);
    debug_assert_eq!(triangles.len(), 96);

    let perms = permutations_of(&config, &rotation_subgroup())?;
    let seed = seed_arcs(&config)?;
    let orientation = orbit_orientation(config.len(), &seed, &perms)?;
    debug_assert_eq!(orientation.n_arcs(), 96);

    let frames = octahedra
        .iter()
        .map(|o| frame_of(&orientation, o))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OrientedCell24 {
        config,
        octahedra,
        edges,
        triangles,
        orientation,
        frames,
    })
}

// ------------------------------------------------------------- T0 and A50

/// Index of the added center point in the 25-point base configuration.
pub const CENTER_25: usize = 24;

/// Base index count of the 50-point prism family.
pub const NBASE_50: usize = 25;

/// The 24-cell with the origin appended (label `o`, index 24).
pub fn cell24_with_center() -> PointConfiguration {
    let c = cell24_config();
    let mut points: Vec<Vec<Rational>> = (0..c.len()).map(|i| c.point(i).to_vec()).collect();
    let mut labels: Vec<Option<String>> = (0..c.len()).map(|i| c.label(i).map(String::from)).collect();
    points.push(vec![rat(0); 4]);
    labels.push(Some("o".into()));
    PointConfiguration::with_labels(4, points, labels).expect("center extension is consistent")
}

/// The 96 cells of the central triangulation: for each octahedron frame, the
/// four simplices spanned by the center, the axis, and one equator edge.
pub fn central_cells(frames: &[OctFrame]) -> Vec<Simplex> {
    let mut cells: BTreeSet<Simplex> = BTreeSet::new();
    for f in frames {
        for i in 0..4 {
            let verts = vec![
                CENTER_25,
                f.source,
                f.equator[i],
                f.equator[(i + 1) % 4],
                f.sink,
            ];
            cells.insert(Simplex::new(verts).expect("frame vertices are distinct"));
        }
    }
    cells.into_iter().collect()
}

/// Orientation of the full 1-skeleton of the central triangulation: the
/// 24-cell arcs, one source-to-sink arc per octahedron, and an arc from the
/// center to every boundary vertex.
pub fn central_orientation(oc: &OrientedCell24) -> Result<SkeletonOrientation, ConstructionError> {
    let mut arcs: Vec<(usize, usize)> = oc.orientation.arcs().collect();
    for f in &oc.frames {
        arcs.push((f.source, f.sink));
    }
    for v in 0..oc.config.len() {
        arcs.push((CENTER_25, v));
    }
    Ok(SkeletonOrientation::new(CENTER_25 + 1, arcs)?)
}

/// Everything the certificates need about the 50-point family.
#[derive(Debug, Clone)]
pub struct A50Bundle {
    pub cell24: OrientedCell24,
    /// 25-point unperturbed base (24-cell plus center).
    pub base: Arc<PointConfiguration>,
    /// 96 base cells of the central triangulation.
    pub base_cells: Vec<Simplex>,
    /// 144 arcs on the 25 base vertices.
    pub base_orientation: SkeletonOrientation,
    /// The 50-point prism configuration.
    pub config: Arc<PointConfiguration>,
    /// The 480-cell reference triangulation (staircases of the orientation).
    pub reference: Triangulation,
}

fn assemble_a50(points_override: Option<(Rational, Rational)>) -> Result<A50Bundle, ConstructionError> {
    let cell24 = oriented_cell24()?;
    let base = Arc::new(cell24_with_center());
    let base_cells = central_cells(&cell24.frames);
    debug_assert_eq!(base_cells.len(), 96);
    let base_orientation = central_orientation(&cell24)?;

    let mut product = product_with_segment(&base);
    if let Some((alpha, beta)) = points_override {
        let mut points: Vec<Vec<Rational>> =
            (0..product.len()).map(|i| product.point(i).to_vec()).collect();
        let labels: Vec<Option<String>> =
            (0..product.len()).map(|i| product.label(i).map(String::from)).collect();
        points[CENTER_25] = vec![rat(0), rat(0), rat(0), rat(0), alpha];
        points[CENTER_25 + NBASE_50] = vec![rat(0), rat(0), rat(0), rat(0), beta];
        product = PointConfiguration::with_labels(5, points, labels)?;
    }
    let config = Arc::new(product);

    let faces: Vec<Vec<usize>> = base_cells.iter().map(|s| s.vertices().to_vec()).collect();
    let reference =
        orientation_to_triangulation(&base_orientation, &faces, config.clone(), NBASE_50)?;
    Ok(A50Bundle {
        cell24,
        base,
        base_cells,
        base_orientation,
        config,
        reference,
    })
}

/// The 50-point prism over the centered 24-cell with its reference
/// triangulation.
pub fn a50_bundle() -> Result<A50Bundle, ConstructionError> {
    assemble_a50(None)
}

/// Default vertical displacement of the two center copies: `(-1, 2)`.
pub fn a50_default_perturbation() -> (Rational, Rational) {
    (rat(-1), rat(2))
}

/// The 50-point family with the two center copies moved vertically to heights
/// `alpha < 0` and `beta > 1`, which puts all 50 points in convex position.
pub fn a50_perturbed_bundle(
    alpha: &Rational,
    beta: &Rational,
) -> Result<A50Bundle, ConstructionError> {
    if !alpha.is_negative() {
        return Err(ConstructionError::BadParameter {
            id: "A50_PERTURBED".into(),
            msg: format!("alpha must be negative, got {}", alpha),
        });
    }
    if *beta <= Rational::one() {
        return Err(ConstructionError::BadParameter {
            id: "A50_PERTURBED".into(),
            msg: format!("beta must exceed 1, got {}", beta),
        });
    }
    assemble_a50(Some((alpha.clone(), beta.clone())))
}

/// One predicted elementary move of the reference triangulation: inside one
/// octahedron copy (bottom or top level), exchange the source-sink diagonal
/// for one of the two equator diagonals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisFlip {
    /// Index into the octahedron list.
    pub oct: usize,
    /// 0 for the bottom copy, 1 for the top copy.
    pub level: usize,
    /// Equator diagonal (base indices).
    pub equator_pair: (usize, usize),
    /// Source-sink diagonal (base indices).
    pub axis: (usize, usize),
}

impl AxisFlip {
    /// The two sides of the supporting circuit, as index sets of the 50-point
    /// configuration.
    pub fn circuit_supports(&self) -> BTreeSet<BTreeSet<usize>> {
        let off = self.level * NBASE_50;
        let mut out = BTreeSet::new();
        out.insert(BTreeSet::from([self.equator_pair.0 + off, self.equator_pair.1 + off]));
        out.insert(BTreeSet::from([self.axis.0 + off, self.axis.1 + off]));
        out
    }

    /// Copy key: which prism-level octahedron the move lives in.
    pub fn copy(&self) -> (usize, usize) {
        (self.oct, self.level)
    }
}

/// The 96 predicted moves: per octahedron the two equator diagonals (the
/// pairs summing to the same point as the axis), each at both prism levels.
pub fn predicted_axis_flips(oc: &OrientedCell24) -> Result<Vec<AxisFlip>, ConstructionError> {
    let mut out = Vec::with_capacity(96);
    for (oi, f) in oc.frames.iter().enumerate() {
        let axis_sum: Vec<Rational> = (0..4)
            .map(|k| &oc.config.point(f.source)[k] + &oc.config.point(f.sink)[k])
            .collect();
        let mut eq = f.equator.to_vec();
        eq.sort_unstable();
        let mut pairs = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                let sum: Vec<Rational> = (0..4)
                    .map(|k| &oc.config.point(eq[a])[k] + &oc.config.point(eq[b])[k])
                    .collect();
                if sum == axis_sum {
                    pairs.push((eq[a], eq[b]));
                }
            }
        }
        if pairs.len() != 2 {
            return Err(ConstructionError::Inconsistent(format!(
                "octahedron {:?} does not have exactly two equator diagonals",
                f.octahedron
            )));
        }
        for level in 0..2 {
            for &(x, y) in &pairs {
                out.push(AxisFlip {
                    oct: oi,
                    level,
                    equator_pair: (x, y),
                    axis: (f.source, f.sink),
                });
            }
        }
    }
    Ok(out)
}

// ------------------------------------------------------------ cross-polytope

/// Index of the signed basis vector `sign(i) * e_|i|` (1-based signed `i`).
pub fn ei_index(i: i64) -> usize {
    assert!(i != 0 && i.abs() <= 4);
    if i > 0 {
        (i - 1) as usize
    } else {
        (-i - 1 + 4) as usize
    }
}

/// The 4-dimensional cross-polytope: `+e1..+e4` then `-e1..-e4`.
pub fn cross_config() -> PointConfiguration {
    let mut points = Vec::with_capacity(8);
    let mut labels = Vec::with_capacity(8);
    for s in [1i64, -1] {
        for i in 0..4 {
            let mut p = vec![rat(0); 4];
            p[i] = rat(s);
            points.push(p);
            labels.push(Some(format!("{}e{}", if s > 0 { "+" } else { "-" }, i + 1)));
        }
    }
    PointConfiguration::with_labels(4, points, labels).expect("cross-polytope data is consistent")
}

/// Directed skeleton edges, grouped in four orbits of six (signed 1-based
/// vertex names, oriented first to second).
fn edge_table() -> [[(i64, i64); 6]; 4] {
    [
        [(1, 2), (2, 3), (3, 1), (-1, -2), (-2, -3), (-3, -1)],
        [(-2, 1), (-3, 2), (-1, 3), (2, -1), (3, -2), (1, -3)],
        [(4, 1), (4, 2), (4, 3), (-4, -1), (-4, -2), (-4, -3)],
        [(-1, 4), (-2, 4), (-3, 4), (1, -4), (2, -4), (3, -4)],
    ]
}

/// Triangle orbits; the first two rows are the eight excluded triangles
/// (cyclic under the orientation), the last four rows are the 24 retained
/// triangles (listed in their acyclic vertex order).
fn triangle_table() -> Vec<Vec<(i64, i64, i64)>> {
    vec![
        vec![(1, 2, 3), (-1, -2, -3)],
        vec![(1, -4, -2), (2, -4, -3), (3, -4, -1), (-1, 4, 2), (-2, 4, 3), (-3, 4, 1)],
        vec![(1, -3, 2), (2, -1, 3), (3, -2, 1), (-1, 3, -2), (-2, 1, -3), (-3, 2, -1)],
        vec![(-3, 4, 2), (-1, 4, 3), (-2, 4, 1), (3, -4, -2), (1, -4, -3), (2, -4, -1)],
        vec![(4, 1, 2), (4, 2, 3), (4, 3, 1), (-4, -1, -2), (-4, -2, -3), (-4, -3, -1)],
        vec![(1, 2, -4), (2, 3, -4), (3, 1, -4), (-1, -2, 4), (-2, -3, 4), (-3, -1, 4)],
    ]
}

/// Sign patterns of the eight extra points of the 26-point family, matching
/// the eight excluded triangles one to one.
pub fn c_patterns() -> [[i64; 4]; 8] {
    [
        [1, 1, 1, 0],
        [-1, -1, -1, 0],
        [1, -1, 0, -1],
        [-1, 1, 0, 1],
        [-1, 0, 1, -1],
        [1, 0, -1, 1],
        [0, 1, -1, -1],
        [0, -1, 1, 1],
    ]
}

/// The cross-polytope with the tabulated orientation of its 2-skeleton and
/// the split of its 32 triangles into 24 retained and 8 excluded ones.
#[derive(Debug, Clone)]
pub struct OrientedCross {
    pub config: Arc<PointConfiguration>,
    /// 24 undirected edges, `u < v`.
    pub edges: Vec<(usize, usize)>,
    /// All 32 triangles as sorted triples.
    pub triangles: Vec<Vec<usize>>,
    /// 24 arcs, one per edge.
    pub orientation: SkeletonOrientation,
    /// 24 retained triangles, each listed in its acyclic vertex order.
    pub k_triangles: Vec<[usize; 3]>,
    /// 8 excluded triangles, each cyclic under the orientation.
    pub missing_triangles: Vec<[usize; 3]>,
}

/// Build the oriented cross-polytope skeleton.
pub fn oriented_cross() -> Result<OrientedCross, ConstructionError> {
    let config = Arc::new(cross_config());
    let edges = skeleton_edges(&config)?;
    let triangles = skeleton_triangles(&config, &edges)?;
    debug_assert_eq!(edges.len(), 24);
    debug_assert_eq!(triangles.len(), 32);

    let mut arcs = Vec::with_capacity(24);
    for orbit in edge_table() {
        for (a, b) in orbit {
            arcs.push((ei_index(a), ei_index(b)));
        }
    }
    let orientation = SkeletonOrientation::new(config.len(), arcs)?;
    debug_assert_eq!(orientation.n_arcs(), 24);

    let table = triangle_table();
    let mut k_triangles = Vec::with_capacity(24);
    let mut missing_triangles = Vec::with_capacity(8);
    for (row, tris) in table.iter().enumerate() {
        for &(a, b, c) in tris {
            let t = [ei_index(a), ei_index(b), ei_index(c)];
            if row >= 2 {
                k_triangles.push(t);
            } else {
                missing_triangles.push(t);
            }
        }
    }
    Ok(OrientedCross {
        config,
        edges,
        triangles,
        orientation,
        k_triangles,
        missing_triangles,
    })
}

// ------------------------------------------------------------------ A26

/// Base index count of the 26-point family (cross-polytope plus center).
pub const NBASE_26: usize = 9;

/// Index of the bottom center in the 26-point family.
pub const CENTER_26_BOTTOM: usize = 8;

/// Index of the top center in the 26-point family.
pub const CENTER_26_TOP: usize = 17;

/// Index of the first of the eight extra midlevel points.
pub const C_FIRST: usize = 18;

fn pattern_label(pat: &[i64; 4]) -> String {
    let mut s = String::from("c");
    for &x in pat {
        s.push(match x {
            1 => '+',
            -1 => '-',
            _ => '0',
        });
    }
    s
}

/// The 26-point family: the prism over the centered cross-polytope (indices
/// 0..18) plus eight midlevel points, one per sign pattern, at height 1/2.
pub fn a26_config() -> PointConfiguration {
    let cross = cross_config();
    let mut points: Vec<Vec<Rational>> = Vec::with_capacity(26);
    let mut labels: Vec<Option<String>> = Vec::with_capacity(26);
    for level in 0..2i64 {
        for i in 0..cross.len() {
            let mut p = cross.point(i).to_vec();
            p.push(rat(level));
            points.push(p);
            labels.push(cross.label(i).map(|l| format!("{}|{}", l, level)));
        }
        let mut center = vec![rat(0); 4];
        center.push(rat(level));
        points.push(center);
        labels.push(Some(format!("o|{}", level)));
    }
    for pat in c_patterns() {
        let mut p: Vec<Rational> = pat.iter().map(|&s| rat_frac(s, 2)).collect();
        p.push(rat_frac(1, 2));
        points.push(p);
        labels.push(Some(pattern_label(&pat)));
    }
    PointConfiguration::with_labels(5, points, labels).expect("26-point data is consistent")
}

/// For each midlevel point, the six-vertex edge prism it lies beyond: the
/// bottom and top copies of the triangle named by its sign pattern.
pub fn c_pattern_prisms() -> Vec<Vec<usize>> {
    c_patterns()
        .iter()
        .map(|pat| {
            let mut bottom: Vec<usize> = pat
                .iter()
                .enumerate()
                .filter(|(_, &s)| s != 0)
                .map(|(i, &s)| ei_index(if s > 0 { i as i64 + 1 } else { -(i as i64 + 1) }))
                .collect();
            bottom.sort_unstable();
            let mut all = bottom.clone();
            all.extend(bottom.iter().map(|&v| v + NBASE_26));
            all
        })
        .collect()
}

/// The 28 generator cells of the reference triangulation, before the
/// distinguished midlevel point is appended and before symmetrization.
/// Signed names: `a` = bottom cross vertex, `b` = top, `a0`/`b0` = centers.
fn generator_rows() -> Vec<[usize; 5]> {
    let a = ei_index;
    let b = |i: i64| ei_index(i) + NBASE_26;
    let a0 = CENTER_26_BOTTOM;
    let b0 = CENTER_26_TOP;
    vec![
        [a0, a(4), a(1), a(2), b(2)],
        [a0, a(4), a(2), a(3), b(3)],
        [a0, a(4), a(3), a(1), b(1)],
        [a0, a(4), a(1), b(1), b(2)],
        [a0, a(4), a(2), b(2), b(3)],
        [a0, a(4), a(3), b(3), b(1)],
        [a0, a(4), b(4), b(1), b(2)],
        [a0, a(4), b(4), b(2), b(3)],
        [a0, a(4), b(4), b(3), b(1)],
        [a0, b0, b(4), b(1), b(2)],
        [a0, b0, b(4), b(2), b(3)],
        [a0, b0, b(4), b(3), b(1)],
        [a0, a(1), a(2), a(-4), b(-4)],
        [a0, a(2), a(3), a(-4), b(-4)],
        [a0, a(3), a(1), a(-4), b(-4)],
        [a0, a(1), a(2), b(2), b(-4)],
        [a0, a(2), a(3), b(3), b(-4)],
        [a0, a(3), a(1), b(1), b(-4)],
        [a0, a(1), b(1), b(2), b(-4)],
        [a0, a(2), b(2), b(3), b(-4)],
        [a0, a(3), b(3), b(1), b(-4)],
        [a0, b0, b(1), b(2), b(-4)],
        [a0, b0, b(2), b(3), b(-4)],
        [a0, b0, b(3), b(1), b(-4)],
        [a0, a(1), a(2), a(3), a(4)],
        [a0, a(1), a(2), a(3), a(-4)],
        [b0, b(1), b(2), b(3), b(4)],
        [b0, b(1), b(2), b(3), b(-4)],
    ]
}

/// The last four generator rows read without the distinguished midlevel
/// point; used to document that this alternative reading is degenerate.
pub fn degenerate_generator_rows() -> Vec<[usize; 5]> {
    let rows = generator_rows();
    rows[rows.len() - 4..].to_vec()
}

/// Everything the certificates need about the 26-point family.
#[derive(Debug, Clone)]
pub struct A26Bundle {
    pub cross: OrientedCross,
    /// The 26-point configuration.
    pub config: Arc<PointConfiguration>,
    /// The cross-polytope orientation on the 9 base vertices (center
    /// isolated).
    pub base_orientation: SkeletonOrientation,
    /// The 224-cell reference triangulation.
    pub reference: Triangulation,
    /// The order-24 symmetry group as permutations of the 26 points.
    pub perms: Vec<Vec<usize>>,
}

fn assemble_a26(points_override: Option<(Rational, Rational)>) -> Result<A26Bundle, ConstructionError> {
    let cross = oriented_cross()?;
    let mut config26 = a26_config();
    // symmetrize over the unperturbed family: the group permutes its points
    let perms = permutations_of(&config26, &cross_orientation_group())?;
    if let Some((alpha, beta)) = points_override {
        let mut points: Vec<Vec<Rational>> =
            (0..config26.len()).map(|i| config26.point(i).to_vec()).collect();
        let labels: Vec<Option<String>> =
            (0..config26.len()).map(|i| config26.label(i).map(String::from)).collect();
        points[CENTER_26_BOTTOM] = vec![rat(0), rat(0), rat(0), rat(0), alpha];
        points[CENTER_26_TOP] = vec![rat(0), rat(0), rat(0), rat(0), beta];
        config26 = PointConfiguration::with_labels(5, points, labels)?;
    }
    let config = Arc::new(config26);

    let mut cells: BTreeSet<Simplex> = BTreeSet::new();
    for row in generator_rows() {
        let mut base: Vec<usize> = row.to_vec();
        base.push(C_FIRST);
        for g in &perms {
            let verts: Vec<usize> = base.iter().map(|&i| g[i]).collect();
            cells.insert(Simplex::new(verts).expect("group images stay distinct"));
        }
    }
    let reference = Triangulation::new(config.clone(), cells.into_iter().collect())?;

    let base_orientation =
        SkeletonOrientation::new(NBASE_26, cross.orientation.arcs().collect())?;
    Ok(A26Bundle {
        cross,
        config,
        base_orientation,
        reference,
        perms,
    })
}

/// The 26-point family with its reference triangulation.
pub fn a26_bundle() -> Result<A26Bundle, ConstructionError> {
    assemble_a26(None)
}

/// The open interval of admissible vertical displacements, computed from the
/// facet inequalities of the unperturbed hull: the bottom center may move to
/// any height in `(alpha_min, 0)`, the top center to any height in
/// `(1, beta_max)`.
pub fn a26_vertical_interval() -> Result<(Rational, Rational), ConstructionError> {
    let config = a26_config();
    let facets = config.facets()?;
    let bottom: BTreeSet<usize> = (0..NBASE_26).collect();
    let top: BTreeSet<usize> = (NBASE_26..2 * NBASE_26).collect();
    let mut alpha_min: Option<Rational> = None;
    let mut beta_max: Option<Rational> = None;
    for f in facets {
        // outward form: n . x <= c for all configuration points
        let sign = rat(f.outward as i64);
        let n5 = Rational::from(f.plane.normal[4].clone()) * &sign;
        let c = &f.plane.offset * &sign;
        if f.incident != bottom && n5.is_negative() {
            let bound = &c / &n5;
            if alpha_min.as_ref().map_or(true, |b| bound > *b) {
                alpha_min = Some(bound);
            }
        }
        if f.incident != top && n5.is_positive() {
            let bound = &c / &n5;
            if beta_max.as_ref().map_or(true, |b| bound < *b) {
                beta_max = Some(bound);
            }
        }
    }
    match (alpha_min, beta_max) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(ConstructionError::Inconsistent(
            "hull facets do not bound the vertical displacements".into(),
        )),
    }
}

/// Midpoints of the admissible interval: `(alpha_min / 2, (1 + beta_max) / 2)`.
pub fn a26_default_perturbation() -> Result<(Rational, Rational), ConstructionError> {
    let (alpha_min, beta_max) = a26_vertical_interval()?;
    let two = rat(2);
    Ok((alpha_min / &two, (Rational::one() + beta_max) / &two))
}

/// The 26-point family with the two centers moved vertically; the heights
/// must lie strictly inside the computed admissible interval.
pub fn a26_perturbed_bundle(
    alpha: &Rational,
    beta: &Rational,
) -> Result<A26Bundle, ConstructionError> {
    let (alpha_min, beta_max) = a26_vertical_interval()?;
    if !(alpha > &alpha_min && alpha.is_negative()) {
        return Err(ConstructionError::BadParameter {
            id: "A26_PERTURBED".into(),
            msg: format!("alpha must lie in ({}, 0), got {}", alpha_min, alpha),
        });
    }
    if !(*beta > Rational::one() && beta < &beta_max) {
        return Err(ConstructionError::BadParameter {
            id: "A26_PERTURBED".into(),
            msg: format!("beta must lie in (1, {}), got {}", beta_max, beta),
        });
    }
    assemble_a26(Some((alpha.clone(), beta.clone())))
}

// ------------------------------------------------------------------ lifts

/// The homogeneous integer lift: each point becomes `(den * p, den)` with
/// `den` the least common denominator of its coordinates.
pub fn lifted_vectors(config: &PointConfiguration) -> Result<VectorConfiguration, ConstructionError> {
    let mut rows = Vec::with_capacity(config.len());
    for i in 0..config.len() {
        let mut den = BigInt::one();
        for x in config.point(i) {
            den = num::integer::lcm(den, x.denom().clone());
        }
        let mut row: Vec<BigInt> = config
            .point(i)
            .iter()
            .map(|x| x.numer() * (&den / x.denom()))
            .collect();
        row.push(den);
        rows.push(row);
    }
    Ok(VectorConfiguration::new(config.dim() + 1, rows)?)
}

/// Integer lift of the 50-point family (all rows end in 1).
pub fn m50_vectors() -> Result<VectorConfiguration, ConstructionError> {
    lifted_vectors(&Arc::try_unwrap(a50_bundle()?.config).unwrap_or_else(|a| (*a).clone()))
}

/// Integer lift of the 26-point family (midlevel rows are doubled).
pub fn m26_vectors() -> Result<VectorConfiguration, ConstructionError> {
    lifted_vectors(&a26_config())
}

/// Column indices of the displayed lattice basis check: six lifted points of
/// the 26-point family whose matrix has determinant -1.
pub fn displayed_basis_columns() -> [usize; 6] {
    [CENTER_26_BOTTOM, 3, 0, 1, 10, C_FIRST]
}

/// The expected column matrix of the displayed lattice basis check.
pub fn displayed_basis_matrix() -> [[i64; 6]; 6] {
    [
        [0, 0, 1, 0, 0, 1],
        [0, 0, 0, 1, 1, 1],
        [0, 0, 0, 0, 0, 1],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1],
        [1, 1, 1, 1, 1, 2],
    ]
}

// --------------------------------------------------------------- registry

/// A built construction: whichever of the pieces exist for the requested id.
#[derive(Debug, Clone)]
pub struct NamedConstruction {
    pub id: String,
    pub config: Option<Arc<PointConfiguration>>,
    pub vectors: Option<VectorConfiguration>,
    /// Top faces of the associated simplicial complex (triangles of a
    /// skeleton, or base cells of a triangulated base).
    pub complex: Option<Vec<Vec<usize>>>,
    pub orientation: Option<SkeletonOrientation>,
    pub reference: Option<Triangulation>,
    pub notes: Vec<String>,
}

/// The buildable construction ids.
pub fn catalog() -> Vec<&'static str> {
    vec![
        "CELL24",
        "CROSS4",
        "A50",
        "A26",
        "A50_PERTURBED(alpha,beta)",
        "A26_PERTURBED(alpha,beta)",
        "M50",
        "M26",
    ]
}

/// Split an id like `A50_PERTURBED(-1,2)` into its name and parameters.
pub fn parse_id(id: &str) -> Result<(String, Vec<Rational>), ConstructionError> {
    let id = id.trim();
    let Some(open) = id.find('(') else {
        return Ok((id.to_uppercase(), Vec::new()));
    };
    if !id.ends_with(')') {
        return Err(ConstructionError::UnknownId(id.into()));
    }
    let name = id[..open].trim().to_uppercase();
    let inner = &id[open + 1..id.len() - 1];
    let mut params = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        let v = Rational::from_str(part).map_err(|e| ConstructionError::BadParameter {
            id: name.clone(),
            msg: format!("cannot parse `{}` as a rational: {}", part, e),
        })?;
        params.push(v);
    }
    Ok((name, params))
}

/// Resolve an optional `(alpha, beta)` parameter list: absent means the
/// default, anything but exactly two parameters is rejected.
pub fn two_params(
    name: &str,
    params: Vec<Rational>,
    default: (Rational, Rational),
) -> Result<(Rational, Rational), ConstructionError> {
    match params.len() {
        0 => Ok(default),
        2 => Ok((params[0].clone(), params[1].clone())),
        n => Err(ConstructionError::BadParameter {
            id: name.into(),
            msg: format!("expected 2 parameters (alpha, beta), got {}", n),
        }),
    }
}

/// Build a construction by id, e.g. `A50` or `A26_PERTURBED(-1/2,3/2)`.
/// Parameterized ids may omit the parameters to use the defaults.
pub fn build(id: &str) -> Result<NamedConstruction, ConstructionError> {
    let (name, params) = parse_id(id)?;
    let no_params = |params: &[Rational]| -> Result<(), ConstructionError> {
        if params.is_empty() {
            Ok(())
        } else {
            Err(ConstructionError::BadParameter {
                id: name.clone(),
                msg: "this construction takes no parameters".into(),
            })
        }
    };
    match name.as_str() {
        "CELL24" => {
            no_params(&params)?;
            let oc = oriented_cell24()?;
            Ok(NamedConstruction {
                id: name,
                config: Some(oc.config.clone()),
                vectors: None,
                complex: Some(oc.triangles.clone()),
                orientation: Some(oc.orientation.clone()),
                reference: None,
                notes: vec![format!("{} octahedral facets", oc.octahedra.len())],
            })
        }
        "CROSS4" => {
            no_params(&params)?;
            let cx = oriented_cross()?;
            Ok(NamedConstruction {
                id: name,
                config: Some(cx.config.clone()),
                vectors: None,
                complex: Some(cx.k_triangles.iter().map(|t| t.to_vec()).collect()),
                orientation: Some(cx.orientation.clone()),
                reference: None,
                notes: vec![format!(
                    "{} retained triangles, {} excluded",
                    cx.k_triangles.len(),
                    cx.missing_triangles.len()
                )],
            })
        }
        "A50" => {
            no_params(&params)?;
            let b = a50_bundle()?;
            Ok(NamedConstruction {
                id: name,
                config: Some(b.config.clone()),
                vectors: None,
                complex: Some(b.base_cells.iter().map(|s| s.vertices().to_vec()).collect()),
                orientation: Some(b.base_orientation.clone()),
                reference: Some(b.reference.clone()),
                notes: Vec::new(),
            })
        }
        "A26" => {
            no_params(&params)?;
            let b = a26_bundle()?;
            Ok(NamedConstruction {
                id: name,
                config: Some(b.config.clone()),
                vectors: None,
                complex: Some(b.cross.k_triangles.iter().map(|t| t.to_vec()).collect()),
                orientation: Some(b.base_orientation.clone()),
                reference: Some(b.reference.clone()),
                notes: Vec::new(),
            })
        }
        "A50_PERTURBED" => {
            let (alpha, beta) = two_params(&name, params, a50_default_perturbation())?;
            let b = a50_perturbed_bundle(&alpha, &beta)?;
            Ok(NamedConstruction {
                id: format!("A50_PERTURBED({},{})", alpha, beta),
                config: Some(b.config.clone()),
                vectors: None,
                complex: Some(b.base_cells.iter().map(|s| s.vertices().to_vec()).collect()),
                orientation: Some(b.base_orientation.clone()),
                reference: Some(b.reference.clone()),
                notes: vec![format!("alpha = {}", alpha), format!("beta = {}", beta)],
            })
        }
        "A26_PERTURBED" => {
            let (alpha, beta) = two_params(&name, params, a26_default_perturbation()?)?;
            let b = a26_perturbed_bundle(&alpha, &beta)?;
            Ok(NamedConstruction {
                id: format!("A26_PERTURBED({},{})", alpha, beta),
                config: Some(b.config.clone()),
                vectors: None,
                complex: Some(b.cross.k_triangles.iter().map(|t| t.to_vec()).collect()),
                orientation: Some(b.base_orientation.clone()),
                reference: Some(b.reference.clone()),
                notes: vec![format!("alpha = {}", alpha), format!("beta = {}", beta)],
            })
        }
        "M50" => {
            no_params(&params)?;
            Ok(NamedConstruction {
                id: name,
                config: None,
                vectors: Some(m50_vectors()?),
                complex: None,
                orientation: None,
                reference: None,
                notes: Vec::new(),
            })
        }
        "M26" => {
            no_params(&params)?;
            Ok(NamedConstruction {
                id: name,
                config: None,
                vectors: Some(m26_vectors()?),
                complex: None,
                orientation: None,
                reference: None,
                notes: Vec::new(),
            })
        }
        _ => Err(ConstructionError::UnknownId(name)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::hull_volume_detsum;

    fn orbit_sizes<T: Clone + Ord>(
        items: &BTreeSet<T>,
        perms: &[Vec<usize>],
        act: impl Fn(&[usize], &T) -> T,
    ) -> Vec<usize> {
        let mut pool = items.clone();
        let mut sizes = Vec::new();
        while let Some(x) = pool.iter().next().cloned() {
            let mut orbit = BTreeSet::new();
            orbit.insert(x.clone());
            let mut frontier = vec![x];
            while let Some(y) = frontier.pop() {
                for g in perms {
                    let z = act(g, &y);
                    if orbit.insert(z.clone()) {
                        frontier.push(z);
                    }
                }
            }
            sizes.push(orbit.len());
            pool = pool.difference(&orbit).cloned().collect();
        }
        sizes.sort_unstable();
        sizes
    }

    fn act_pair(g: &[usize], e: &(usize, usize)) -> (usize, usize) {
        let (a, b) = (g[e.0], g[e.1]);
        (a.min(b), a.max(b))
    }

    fn act_sorted(g: &[usize], t: &Vec<usize>) -> Vec<usize> {
        let mut out: Vec<usize> = t.iter().map(|&v| g[v]).collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn cell24_skeleton_counts() {
        let oc = oriented_cell24().unwrap();
        assert_eq!(oc.config.len(), 24);
        assert_eq!(oc.octahedra.len(), 24);
        assert!(oc.octahedra.iter().all(|o| o.len() == 6));
        assert_eq!(oc.edges.len(), 96);
        assert_eq!(oc.triangles.len(), 96);
        // each edge lies in 3 triangles and 3 octahedra; each triangle in 2
        for &(u, v) in &oc.edges {
            let nt = oc
                .triangles
                .iter()
                .filter(|t| t.contains(&u) && t.contains(&v))
                .count();
            assert_eq!(nt, 3);
            let no = oc
                .octahedra
                .iter()
                .filter(|o| o.contains(&u) && o.contains(&v))
                .count();
            assert_eq!(no, 3);
        }
        for t in &oc.triangles {
            let no = oc
                .octahedra
                .iter()
                .filter(|o| t.iter().all(|v| o.contains(v)))
                .count();
            assert_eq!(no, 2);
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(rotation_subgroup().len(), 32);
        assert_eq!(signed_permutation_group().len(), 384);
        assert_eq!(cross_orientation_group().len(), 24);
        assert_eq!(triangle_orbit_group().len(), 6);
    }

    #[test]
    fn full_symmetry_group_order() {
        assert_eq!(cell24_symmetry_group().len(), 1152);
    }

    #[test]
    fn rotation_subgroup_orbits() {
        let oc = oriented_cell24().unwrap();
        let perms = permutations_of(&oc.config, &rotation_subgroup()).unwrap();
        let verts: BTreeSet<usize> = (0..24).collect();
        assert_eq!(
            orbit_sizes(&verts, &perms, |g, &v| g[v]),
            vec![8, 16]
        );
        let edges: BTreeSet<(usize, usize)> = oc.edges.iter().copied().collect();
        assert_eq!(orbit_sizes(&edges, &perms, act_pair), vec![32, 32, 32]);
        let tris: BTreeSet<Vec<usize>> = oc.triangles.iter().cloned().collect();
        assert_eq!(orbit_sizes(&tris, &perms, act_sorted), vec![32, 32, 32]);
        let octs: BTreeSet<Vec<usize>> = oc.octahedra.iter().cloned().collect();
        assert_eq!(orbit_sizes(&octs, &perms, act_sorted), vec![8, 16]);
    }

    #[test]
    fn orientation24_is_rigid() {
        let oc = oriented_cell24().unwrap();
        assert_eq!(oc.orientation.n_arcs(), 96);
        let covered: BTreeSet<(usize, usize)> = oc.orientation.undirected_edges();
        let edges: BTreeSet<(usize, usize)> = oc.edges.iter().copied().collect();
        assert_eq!(covered, edges);
        assert!(oc.orientation.is_locally_acyclic(&oc.triangles).is_ok());
        assert_eq!(oc.orientation.reversible_arcs(&oc.triangles), vec![]);
    }

    #[test]
    fn orientation24_representatives() {
        let oc = oriented_cell24().unwrap();
        let p = |coords: &[i64]| point_index(&oc.config, coords).unwrap();
        let tri_reps = [
            (p(&[2, 0, 0, 0]), p(&[1, 1, 1, -1]), p(&[1, 1, 1, 1])),
            (p(&[1, 1, 1, -1]), p(&[1, 1, 1, 1]), p(&[0, 2, 0, 0])),
            (p(&[1, 1, 1, -1]), p(&[0, 0, 2, 0]), p(&[1, 1, 1, 1])),
        ];
        for (a, b, c) in tri_reps {
            assert!(oc.orientation.has_arc(a, b));
            assert!(oc.orientation.has_arc(b, c));
            assert!(oc.orientation.has_arc(a, c));
        }
        let edge_reps = [
            (p(&[2, 0, 0, 0]), p(&[1, 1, 1, 1])),
            (p(&[1, 1, 1, -1]), p(&[0, 2, 0, 0])),
            (p(&[1, 1, 1, -1]), p(&[1, 1, 1, 1])),
        ];
        for (a, b) in edge_reps {
            assert!(oc.orientation.has_arc(a, b));
        }
        // the three triangle orbits under the rotation subgroup are distinct
        // and cover all 96 triangles
        let perms = permutations_of(&oc.config, &rotation_subgroup()).unwrap();
        let mut orbits: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for (a, b, c) in tri_reps {
            let mut t = vec![a, b, c];
            t.sort_unstable();
            let mut orbit = BTreeSet::new();
            orbit.insert(t.clone());
            let mut frontier = vec![t];
            while let Some(y) = frontier.pop() {
                for g in &perms {
                    let z = act_sorted(g, &y);
                    if orbit.insert(z.clone()) {
                        frontier.push(z);
                    }
                }
            }
            orbits.push(orbit);
        }
        assert_eq!(orbits.iter().map(|o| o.len()).sum::<usize>(), 96);
        assert!(orbits[0] != orbits[1] && orbits[1] != orbits[2] && orbits[0] != orbits[2]);
    }

    #[test]
    fn single_octahedron_reversibles_are_equator() {
        let oc = oriented_cell24().unwrap();
        // the seed octahedron is cut out by x1 + x2 = 2
        let seed: Vec<usize> = (0..24)
            .filter(|&i| {
                let p = oc.config.point(i);
                &p[0] + &p[1] == rat(2)
            })
            .collect();
        assert_eq!(seed.len(), 6);
        let fi = oc.octahedra.iter().position(|o| *o == seed).unwrap();
        let frame = &oc.frames[fi];
        let tris: Vec<Vec<usize>> = oc
            .triangles
            .iter()
            .filter(|t| t.iter().all(|v| seed.contains(v)))
            .cloned()
            .collect();
        assert_eq!(tris.len(), 8);
        let edges_in: Vec<(usize, usize)> = oc
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| seed.contains(&u) && seed.contains(&v))
            .collect();
        assert_eq!(edges_in.len(), 12);
        let sub = oc
            .orientation
            .restricted_to(&seed.iter().copied().collect());
        let rev = sub.reversible_arcs(&tris);
        assert_eq!(rev.len(), 4);
        let eq_edges: BTreeSet<(usize, usize)> = (0..4)
            .map(|i| {
                let (a, b) = (frame.equator[i], frame.equator[(i + 1) % 4]);
                (a.min(b), a.max(b))
            })
            .collect();
        let rev_undirected: BTreeSet<(usize, usize)> =
            rev.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        assert_eq!(rev_undirected, eq_edges);
    }

    #[test]
    fn frames_and_axes() {
        let oc = oriented_cell24().unwrap();
        assert_eq!(oc.frames.len(), 24);
        let axes: BTreeSet<(usize, usize)> = oc
            .frames
            .iter()
            .map(|f| {
                let (s, t) = f.axis();
                (s.min(t), s.max(t))
            })
            .collect();
        assert_eq!(axes.len(), 24);
        let eset: BTreeSet<(usize, usize)> = oc.edges.iter().copied().collect();
        for f in &oc.frames {
            let (s, t) = f.axis();
            let key = (s.min(t), s.max(t));
            assert!(!eset.contains(&key), "axis must not be a skeleton edge");
            let n_oct = oc
                .octahedra
                .iter()
                .filter(|o| o.contains(&s) && o.contains(&t))
                .count();
            assert_eq!(n_oct, 1);
        }
        // the seed octahedron's axis is the seeded source and sink
        let src = point_index(&oc.config, &[2, 0, 0, 0]).unwrap();
        let snk = point_index(&oc.config, &[0, 2, 0, 0]).unwrap();
        let seed_frame = oc
            .frames
            .iter()
            .find(|f| f.octahedron.contains(&src) && f.octahedron.contains(&snk))
            .unwrap();
        assert_eq!((seed_frame.source, seed_frame.sink), (src, snk));
        // every vertex is the sink of some octahedron
        let sinks: BTreeSet<usize> = oc.frames.iter().map(|f| f.sink).collect();
        assert_eq!(sinks.len(), 24);
    }

    #[test]
    fn central_triangulation_is_valid() {
        let oc = oriented_cell24().unwrap();
        let base = Arc::new(cell24_with_center());
        let cells = central_cells(&oc.frames);
        assert_eq!(cells.len(), 96);
        let t = Triangulation::new(base.clone(), cells).unwrap();
        let mags: BTreeSet<Rational> = t
            .cells()
            .iter()
            .map(|c| {
                let mut d = base.simplex_determinant(c.vertices()).unwrap();
                if d.is_negative() {
                    d = -d;
                }
                d
            })
            .collect();
        assert_eq!(mags, BTreeSet::from([rat(8)]));
        assert_eq!(t.detsum().unwrap(), rat(768));
        t.validate().unwrap();
    }

    #[test]
    fn central_displayed_determinant() {
        let base = cell24_with_center();
        let rows = [
            vec![0, 0, 0, 0],
            vec![2, 0, 0, 0],
            vec![0, 2, 0, 0],
            vec![1, 1, 1, 1],
            vec![1, 1, 1, -1],
        ];
        let idxs: Vec<usize> = rows
            .iter()
            .map(|r| point_index(&base, r).unwrap())
            .collect();
        let d = base.simplex_determinant(&idxs).unwrap();
        assert_eq!(d, rat(-8));
    }

    #[test]
    fn central_orientation_is_rigid() {
        let oc = oriented_cell24().unwrap();
        let orient = central_orientation(&oc).unwrap();
        assert_eq!(orient.n_arcs(), 144);
        let faces: Vec<Vec<usize>> = central_cells(&oc.frames)
            .iter()
            .map(|s| s.vertices().to_vec())
            .collect();
        assert!(orient.is_locally_acyclic(&faces).is_ok());
        assert_eq!(orient.reversible_arcs(&faces), vec![]);
    }

    #[test]
    fn base_lattice_index_is_8() {
        let base = cell24_with_center();
        let all: Vec<usize> = (0..base.len()).collect();
        let gens = base.lattice_spanned_by(&all).unwrap();
        let idx = crate::zz::lattice_index(&gens, 4).unwrap();
        assert_eq!(idx, BigInt::from(8));
    }

    #[test]
    fn reference_50_cells_and_volume() {
        let b = a50_bundle().unwrap();
        assert_eq!(b.config.len(), 50);
        assert_eq!(b.reference.n_cells(), 480);
        let mags: BTreeSet<Rational> = b
            .reference
            .cells()
            .iter()
            .map(|c| {
                let mut d = b.config.simplex_determinant(c.vertices()).unwrap();
                if d.is_negative() {
                    d = -d;
                }
                d
            })
            .collect();
        assert_eq!(mags, BTreeSet::from([rat(8)]));
        assert_eq!(b.reference.detsum().unwrap(), rat(3840));
        // lattice of differences has index 8; the homogeneous lift matches
        let all: Vec<usize> = (0..50).collect();
        let gens = b.config.lattice_spanned_by(&all).unwrap();
        assert_eq!(crate::zz::lattice_index(&gens, 5).unwrap(), BigInt::from(8));
        let m50 = m50_vectors().unwrap();
        assert_eq!(m50.lattice_index(), BigInt::from(8));
    }

    #[test]
    fn a50_facet_structure() {
        let b = a50_bundle().unwrap();
        let facets = b.config.facets().unwrap();
        assert_eq!(facets.len(), 26);
        let incs: BTreeSet<BTreeSet<usize>> =
            facets.iter().map(|f| f.incident.clone()).collect();
        assert!(incs.contains(&(0..25).collect()));
        assert!(incs.contains(&(25..50).collect()));
        for o in &b.cell24.octahedra {
            let prism: BTreeSet<usize> =
                o.iter().flat_map(|&v| [v, v + NBASE_50]).collect();
            assert!(incs.contains(&prism), "octahedron prism must be a facet");
        }
        // every ridge is shared by exactly two facets, 144 in total
        let mut ridge_count: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        for f in facets {
            let idxs: Vec<usize> = f.incident.iter().copied().collect();
            let local = b.config.hull_coords_config(&idxs);
            for rf in local.facets().unwrap() {
                let ridge: BTreeSet<usize> =
                    rf.incident.iter().map(|&li| idxs[li]).collect();
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        assert_eq!(ridge_count.len(), 144);
        assert!(ridge_count.values().all(|&c| c == 2));
    }

    #[test]
    fn a50_triangle_prisms_are_clean_faces() {
        let b = a50_bundle().unwrap();
        for t in &b.cell24.triangles {
            let prism: Vec<usize> = t
                .iter()
                .flat_map(|&v| [v, v + NBASE_50])
                .collect();
            let ft = b.config.is_face(&prism).unwrap();
            assert!(ft.is_face, "triangle prism {:?} must be a face", t);
            assert_eq!(
                ft.minimal_face,
                prism.iter().copied().collect::<BTreeSet<usize>>(),
                "triangle prism {:?} must contain no extra points",
                t
            );
        }
    }

    #[test]
    fn a50_volume_matches_hull() {
        let b = a50_bundle().unwrap();
        let hull = hull_volume_detsum(&b.config).unwrap();
        assert_eq!(hull, rat(3840));
        assert_eq!(b.reference.detsum().unwrap(), hull);
    }

    #[test]
    fn predicted_axis_flips_are_circuits() {
        let b = a50_bundle().unwrap();
        let flips = predicted_axis_flips(&b.cell24).unwrap();
        assert_eq!(flips.len(), 96);
        let copies: BTreeSet<(usize, usize)> = flips.iter().map(|f| f.copy()).collect();
        assert_eq!(copies.len(), 48);
        for f in &flips {
            let mut support: Vec<usize> = f
                .circuit_supports()
                .into_iter()
                .flatten()
                .collect();
            support.sort_unstable();
            let z = crate::flips::circuit_of(&b.config, &support).unwrap();
            let got: BTreeSet<BTreeSet<usize>> = BTreeSet::from([
                z.positive().iter().copied().collect(),
                z.negative().iter().copied().collect(),
            ]);
            assert_eq!(got, f.circuit_supports());
        }
    }

    #[test]
    fn a50_perturbation_parameters() {
        assert!(a50_perturbed_bundle(&rat(0), &rat(2)).is_err());
        assert!(a50_perturbed_bundle(&rat(-1), &rat(1)).is_err());
        let (alpha, beta) = a50_default_perturbation();
        assert_eq!((alpha.clone(), beta.clone()), (rat(-1), rat(2)));
        let b = a50_perturbed_bundle(&alpha, &beta).unwrap();
        // volume grows by the two pyramids over the bottom and top facets
        assert_eq!(b.reference.detsum().unwrap(), rat(5376));
        let mags: BTreeSet<Rational> = b
            .reference
            .cells()
            .iter()
            .map(|c| {
                let mut d = b.config.simplex_determinant(c.vertices()).unwrap();
                if d.is_negative() {
                    d = -d;
                }
                d
            })
            .collect();
        assert_eq!(mags, BTreeSet::from([rat(8), rat(24)]));
    }

    #[test]
    fn cross_skeleton_and_orientation() {
        let cx = oriented_cross().unwrap();
        assert_eq!(cx.config.len(), 8);
        assert_eq!(cx.config.facets().unwrap().len(), 16);
        assert_eq!(cx.edges.len(), 24);
        assert_eq!(cx.triangles.len(), 32);
        assert_eq!(cx.orientation.n_arcs(), 24);
        let covered = cx.orientation.undirected_edges();
        let edges: BTreeSet<(usize, usize)> = cx.edges.iter().copied().collect();
        assert_eq!(covered, edges);
        assert_eq!(cx.k_triangles.len(), 24);
        assert_eq!(cx.missing_triangles.len(), 8);
        // the two lists partition all 32 triangles
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for t in cx.k_triangles.iter().chain(cx.missing_triangles.iter()) {
            let mut s = t.to_vec();
            s.sort_unstable();
            all.insert(s);
        }
        assert_eq!(all, cx.triangles.iter().cloned().collect());
        // retained triangles are transitively ordered as listed
        for &[a, b, c] in &cx.k_triangles {
            assert!(cx.orientation.has_arc(a, b));
            assert!(cx.orientation.has_arc(b, c));
            assert!(cx.orientation.has_arc(a, c));
        }
        // excluded triangles are directed cycles
        for t in &cx.missing_triangles {
            assert!(cx.orientation.induced_cycle(t).is_some());
        }
        let k_faces: Vec<Vec<usize>> = cx.k_triangles.iter().map(|t| t.to_vec()).collect();
        assert!(cx.orientation.is_locally_acyclic(&k_faces).is_ok());
        assert_eq!(cx.orientation.reversible_arcs(&k_faces), vec![]);
    }

    #[test]
    fn cross_transitive_edges() {
        // each K triangle's long edge (first to last) determines its table
        // row, and every edge is the long edge of exactly one K triangle
        let table = edge_table();
        let mut orbit_of_edge: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (col, orbit) in table.iter().enumerate() {
            for &(a, b) in orbit {
                orbit_of_edge.insert((ei_index(a), ei_index(b)), col);
            }
        }
        let rows = triangle_table();
        let mut long_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut row_idx = 0usize;
        for (row, tris) in rows.iter().enumerate().skip(2) {
            for &(a, _, c) in tris {
                let key = (ei_index(a), ei_index(c));
                assert_eq!(orbit_of_edge[&key], row - 2);
                *long_count.entry(key).or_insert(0) += 1;
            }
            row_idx = row;
        }
        assert_eq!(row_idx, 5);
        assert_eq!(long_count.len(), 24);
        assert!(long_count.values().all(|&c| c == 1));
    }

    #[test]
    fn cross_star_figure() {
        let cx = oriented_cross().unwrap();
        // triangles meeting +e4 plus triangles avoiding the fourth axis
        let p4 = ei_index(4);
        let m4 = ei_index(-4);
        let fig: Vec<Vec<usize>> = cx
            .triangles
            .iter()
            .filter(|t| t.contains(&p4))
            .chain(
                cx.triangles
                    .iter()
                    .filter(|t| !t.contains(&p4) && !t.contains(&m4)),
            )
            .cloned()
            .collect();
        assert_eq!(fig.len(), 20);
        let cyclic = fig
            .iter()
            .filter(|t| cx.orientation.induced_cycle(t).is_some())
            .count();
        assert_eq!(cyclic, 5);
    }

    #[test]
    fn cross_table_orbits() {
        let cx = oriented_cross().unwrap();
        let perms6 = permutations_of(&cx.config, &triangle_orbit_group()).unwrap();
        let table = edge_table();
        for orbit in &table {
            let rep = {
                let (a, b) = orbit[0];
                let (u, v) = (ei_index(a), ei_index(b));
                (u.min(v), u.max(v))
            };
            let want: BTreeSet<(usize, usize)> = orbit
                .iter()
                .map(|&(a, b)| {
                    let (u, v) = (ei_index(a), ei_index(b));
                    (u.min(v), u.max(v))
                })
                .collect();
            let mut got = BTreeSet::new();
            for g in &perms6 {
                got.insert(act_pair(g, &rep));
            }
            assert_eq!(got, want);
        }
        for row in &triangle_table() {
            let rep: Vec<usize> = {
                let (a, b, c) = row[0];
                let mut t = vec![ei_index(a), ei_index(b), ei_index(c)];
                t.sort_unstable();
                t
            };
            let want: BTreeSet<Vec<usize>> = row
                .iter()
                .map(|&(a, b, c)| {
                    let mut t = vec![ei_index(a), ei_index(b), ei_index(c)];
                    t.sort_unstable();
                    t
                })
                .collect();
            let mut got = BTreeSet::new();
            for g in &perms6 {
                got.insert(act_sorted(g, &rep));
            }
            assert_eq!(got, want);
        }
    }

    #[test]
    fn cross_symmetry_orbit() {
        let cx = oriented_cross().unwrap();
        let perms24 = permutations_of(&cx.config, &cross_orientation_group()).unwrap();
        assert_eq!(perms24.len(), 24);
        assert_eq!(orientation_stabilizer_order(&cx.orientation, &perms24), 24);
        let edges: BTreeSet<(usize, usize)> = cx.edges.iter().copied().collect();
        assert_eq!(orbit_sizes(&edges, &perms24, act_pair), vec![24]);
        let ktris: BTreeSet<Vec<usize>> = cx
            .k_triangles
            .iter()
            .map(|t| {
                let mut s = t.to_vec();
                s.sort_unstable();
                s
            })
            .collect();
        assert_eq!(orbit_sizes(&ktris, &perms24, act_sorted), vec![24]);
        let missing: BTreeSet<Vec<usize>> = cx
            .missing_triangles
            .iter()
            .map(|t| {
                let mut s = t.to_vec();
                s.sort_unstable();
                s
            })
            .collect();
        assert_eq!(orbit_sizes(&missing, &perms24, act_sorted), vec![8]);
        // the double rotation maps the all-negative triangle as expected
        let rho = permutation_of(&cx.config, &double_rotation()).unwrap();
        let img: BTreeSet<usize> = [ei_index(-1), ei_index(-2), ei_index(-3)]
            .iter()
            .map(|&v| rho[v])
            .collect();
        assert_eq!(
            img,
            BTreeSet::from([ei_index(1), ei_index(-2), ei_index(-4)])
        );
        // full signed-permutation group: stabilizer 24, orbit 16
        let perms384 = permutations_of(&cx.config, &signed_permutation_group()).unwrap();
        assert_eq!(
            orientation_stabilizer_order(&cx.orientation, &perms384),
            24
        );
        assert_eq!(orientation_orbit(&cx.orientation, &perms384).len(), 16);
    }

    #[test]
    fn c_patterns_match_missing_triangles() {
        let cx = oriented_cross().unwrap();
        let derived: BTreeSet<Vec<usize>> = c_patterns()
            .iter()
            .map(|pat| {
                let mut t: Vec<usize> = pat
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s != 0)
                    .map(|(i, &s)| ei_index(if s > 0 { i as i64 + 1 } else { -(i as i64 + 1) }))
                    .collect();
                t.sort_unstable();
                t
            })
            .collect();
        let missing: BTreeSet<Vec<usize>> = cx
            .missing_triangles
            .iter()
            .map(|t| {
                let mut s = t.to_vec();
                s.sort_unstable();
                s
            })
            .collect();
        assert_eq!(derived, missing);
    }

    #[test]
    fn a26_beyond_tests() {
        let a26 = a26_config();
        assert_eq!(a26.len(), 26);
        let prism18 =
            PointConfiguration::new(5, (0..18).map(|i| a26.point(i).to_vec()).collect()).unwrap();
        assert_eq!(prism18.facets().unwrap().len(), 18);
        let prisms = c_pattern_prisms();
        assert_eq!(prisms.len(), 8);
        for (ci, prism) in prisms.iter().enumerate() {
            let beyond = prism18
                .lies_beyond(a26.point(C_FIRST + ci), prism)
                .unwrap();
            assert!(beyond, "midlevel point {} must lie beyond its prism", ci);
        }
    }

    #[test]
    fn a26_facet_structure_and_witness() {
        let a26 = a26_config();
        let facets = a26.facets().unwrap();
        assert_eq!(facets.len(), 58);
        let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
        for f in facets {
            *histogram.entry(f.incident.len()).or_insert(0) += 1;
        }
        assert_eq!(
            histogram.into_iter().collect::<Vec<_>>(),
            vec![(5, 32), (8, 24), (9, 2)]
        );
        let incs: BTreeSet<BTreeSet<usize>> =
            facets.iter().map(|f| f.incident.clone()).collect();
        assert!(incs.contains(&(0..9).collect()), "bottom facet");
        assert!(incs.contains(&(9..18).collect()), "top facet");
        assert!(
            incs.contains(&BTreeSet::from([0, 1, 3, 9, 10, 12, 18, 23])),
            "merged 8-point facet"
        );
        // none of the 24 triangle prisms is a face, but every edge prism is
        let cx = oriented_cross().unwrap();
        let mut passing = 0;
        for t in &cx.k_triangles {
            let mut prism: Vec<usize> = t.to_vec();
            prism.extend(t.iter().map(|&v| v + NBASE_26));
            prism.sort_unstable();
            let ft = a26.is_face(&prism).unwrap();
            if ft.is_face && ft.minimal_face.len() == 6 {
                passing += 1;
            }
        }
        assert_eq!(passing, 0);
        for &(u, v) in &cx.edges {
            let prism = vec![u, v, u + NBASE_26, v + NBASE_26];
            let ft = a26.is_face(&prism).unwrap();
            assert!(ft.is_face && ft.minimal_face.len() == 4);
        }
        // the explicit functional shows where the first prism test fails
        let wit = vec![rat(1), rat(1), rat_frac(-1, 2), rat(1), rat(0)];
        let (max, argmax) = a26.maximizers(&wit);
        assert_eq!(max, rat_frac(5, 4));
        assert_eq!(argmax, BTreeSet::from([23]));
        for i in [0usize, 1, 3, 9, 10, 12] {
            let v: Rational = wit
                .iter()
                .zip(a26.point(i))
                .map(|(w, x)| w * x)
                .sum();
            assert_eq!(v, rat(1));
        }
        let c_values: Vec<Rational> = (0..8)
            .map(|ci| {
                wit.iter()
                    .zip(a26.point(C_FIRST + ci))
                    .map(|(w, x)| w * x)
                    .sum()
            })
            .collect();
        let want: Vec<Rational> = [
            (3, 4),
            (-3, 4),
            (-1, 2),
            (1, 2),
            (-5, 4),
            (5, 4),
            (1, 4),
            (-1, 4),
        ]
        .iter()
        .map(|&(n, d)| rat_frac(n, d))
        .collect();
        assert_eq!(c_values, want);
    }

    #[test]
    fn a26_vertical_interval_and_defaults() {
        let (alpha_min, beta_max) = a26_vertical_interval().unwrap();
        assert_eq!(alpha_min, rat(-1));
        assert_eq!(beta_max, rat(2));
        let (alpha, beta) = a26_default_perturbation().unwrap();
        assert_eq!(alpha, rat_frac(-1, 2));
        assert_eq!(beta, rat_frac(3, 2));
    }

    #[test]
    fn reference_26_cells() {
        let b = a26_bundle().unwrap();
        assert_eq!(b.perms.len(), 24);
        assert_eq!(b.reference.n_cells(), 224);
        // every cell contains exactly one midlevel point
        for c in b.reference.cells() {
            let n_mid = c.vertices().iter().filter(|&&v| v >= C_FIRST).count();
            assert_eq!(n_mid, 1);
        }
        let stab_c1 = b.perms.iter().filter(|g| g[C_FIRST] == C_FIRST).count();
        assert_eq!(stab_c1, 3);
        assert_eq!(b.reference.detsum().unwrap(), rat(112));
    }

    #[test]
    fn reference_26_is_unimodular_in_lift() {
        let b = a26_bundle().unwrap();
        let m26 = m26_vectors().unwrap();
        assert_eq!(m26.lattice_index(), BigInt::one());
        let mut mags: BTreeSet<BigInt> = BTreeSet::new();
        for c in b.reference.cells() {
            let mut d = m26.det(c.vertices());
            if d.is_negative() {
                d = -d;
            }
            mags.insert(d);
        }
        assert_eq!(mags, BTreeSet::from([BigInt::one()]));
        // the displayed basis matrix and its determinant
        let cols = displayed_basis_columns();
        let want = displayed_basis_matrix();
        for (j, &col) in cols.iter().enumerate() {
            let v = m26.vector(col);
            for i in 0..6 {
                assert_eq!(v[i], BigInt::from(want[i][j]));
            }
        }
        let rows: Vec<Vec<BigInt>> = (0..6)
            .map(|i| (0..6).map(|j| BigInt::from(want[i][j])).collect())
            .collect();
        let det = crate::zz::det(rows).unwrap();
        assert_eq!(det, BigInt::from(-1));
    }

    #[test]
    fn reference_26_volume_matches_hull() {
        let b = a26_bundle().unwrap();
        let hull = hull_volume_detsum(&b.config).unwrap();
        assert_eq!(hull, rat(112));
        assert_eq!(b.reference.detsum().unwrap(), hull);
    }

    #[test]
    fn reference_26_validates() {
        let b = a26_bundle().unwrap();
        b.reference.validate().unwrap();
    }

    #[test]
    fn degenerate_alternative_rows() {
        let a26 = a26_config();
        for row in degenerate_generator_rows() {
            let rank = a26.affine_rank(&row).unwrap();
            assert_eq!(rank, 4, "row {:?} must be degenerate in dimension 5", row);
        }
    }

    #[test]
    fn a26_perturbation_parameters() {
        assert!(a26_perturbed_bundle(&rat(-2), &rat_frac(3, 2)).is_err());
        assert!(a26_perturbed_bundle(&rat_frac(-1, 2), &rat_frac(5, 2)).is_err());
        assert!(a26_perturbed_bundle(&rat(0), &rat_frac(3, 2)).is_err());
        assert!(a26_perturbed_bundle(&rat_frac(-1, 2), &rat(1)).is_err());
        let b = a26_perturbed_bundle(&rat_frac(-1, 2), &rat_frac(3, 2)).unwrap();
        assert_eq!(b.reference.detsum().unwrap(), rat(128));
        let b2 = a26_perturbed_bundle(&rat_frac(-1, 100), &rat_frac(101, 100)).unwrap();
        assert_eq!(b2.reference.detsum().unwrap(), rat_frac(2808, 25));
    }

    #[test]
    fn registry_builds() {
        let ids = catalog();
        assert_eq!(ids.len(), 8);
        let c24 = build("CELL24").unwrap();
        assert_eq!(c24.config.as_ref().unwrap().len(), 24);
        assert_eq!(c24.complex.as_ref().unwrap().len(), 96);
        assert_eq!(c24.orientation.as_ref().unwrap().n_arcs(), 96);
        assert!(c24.reference.is_none());
        let cx = build("CROSS4").unwrap();
        assert_eq!(cx.config.as_ref().unwrap().len(), 8);
        assert_eq!(cx.complex.as_ref().unwrap().len(), 24);
        let m50 = build("M50").unwrap();
        assert_eq!(m50.vectors.as_ref().unwrap().len(), 50);
        let m26 = build("M26").unwrap();
        assert_eq!(m26.vectors.as_ref().unwrap().len(), 26);
        assert!(build("NOPE").is_err());
        assert!(build("A50_PERTURBED(0,2)").is_err());
        assert!(build("A50_PERTURBED(-1)").is_err());
        let p = build("A50_PERTURBED(-1/2,3/2)").unwrap();
        assert_eq!(p.id, "A50_PERTURBED(-1/2,3/2)");
        assert_eq!(p.config.as_ref().unwrap().len(), 50);
    }
}
