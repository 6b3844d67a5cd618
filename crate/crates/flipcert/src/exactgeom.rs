//! Exact rational linear algebra and polytope primitives for low dimensions.
//!
//! Coordinates are arbitrary-precision rationals. Internally every
//! configuration is scaled once by the least common denominator to an integer
//! matrix; predicates run on a checked `i128` kernel first and fall back to
//! `BigInt` on overflow, so all answers are exact regardless of magnitudes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::str::FromStr;
use std::sync::OnceLock;

use num::bigint::BigInt;
use num::ToPrimitive;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::zz;

pub type Rational = num::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("point index {index} out of range for configuration of {len} points")]
    InvalidIndex { index: usize, len: usize },
    #[error("duplicate index {index} in subset")]
    DuplicateIndex { index: usize },
    #[error("empty subset where at least one point is required")]
    EmptySubset,
    #[error("point {index} has {got} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("points {a} and {b} have identical coordinates")]
    DuplicatePoint { a: usize, b: usize },
    #[error("label {label:?} appears more than once")]
    DuplicateLabel { label: String },
    #[error("configuration spans affine rank {rank}, not full-dimensional in dimension {dim}")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("simplex {simplex:?} is degenerate (affine rank {rank}, expected {expected})")]
    DegenerateSimplex {
        simplex: Vec<usize>,
        rank: usize,
        expected: usize,
    },
    #[error("subset {subset:?} is not a face; smallest face containing it has point set {minimal_face:?}")]
    NotAFace {
        subset: Vec<usize>,
        minimal_face: Vec<usize>,
    },
    #[error("query point lies on the hyperplane of the facet with incident set {facet:?}")]
    PointOnFacetHyperplane { facet: Vec<usize> },
    #[error("difference of points {a} and {b} is not an integer vector; lattice generation needs integer differences")]
    NonIntegerLattice { a: usize, b: usize },
    #[error("lattice generators span rank {rank}, expected {expected}")]
    RankDeficientLattice { rank: usize, expected: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {msg}")]
    Io { msg: String },
}

impl From<std::io::Error> for GeomError {
    fn from(e: std::io::Error) -> Self {
        GeomError::Io { msg: e.to_string() }
    }
}

/// Affine hyperplane `normal . x = offset` with a primitive integer normal
/// whose first nonzero entry is positive. The canonical scaling makes equal
/// hyperplanes compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Vec<BigInt>,
    pub offset: Rational,
}

impl Hyperplane {
    /// Canonicalize an arbitrary rational normal/offset pair; `None` for the
    /// zero normal.
    pub fn new(normal: &[Rational], offset: &Rational) -> Option<Self> {
        if normal.iter().all(|x| x.is_zero()) {
            return None;
        }
        let mut den = BigInt::one();
        for x in normal {
            den = num::integer::lcm(den, x.denom().clone());
        }
        let mut n: Vec<BigInt> = normal
            .iter()
            .map(|x| x.numer() * (&den / x.denom()))
            .collect();
        let mut g = BigInt::ZERO;
        for x in &n {
            g = num::integer::gcd(g, x.clone());
        }
        if n.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
            g = -g;
        }
        for x in n.iter_mut() {
            *x = &*x / &g;
        }
        let off = offset * Rational::new(den, g);
        Some(Hyperplane {
            normal: n,
            offset: off,
        })
    }

    /// `normal . p - offset`.
    pub fn eval(&self, p: &[Rational]) -> Rational {
        let mut s = -self.offset.clone();
        for (n, x) in self.normal.iter().zip(p) {
            s += Rational::from(n.clone()) * x;
        }
        s
    }
}

/// A facet of a convex hull: its hyperplane, which side of the canonical
/// normal faces away from the hull, and the configuration points lying on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub plane: Hyperplane,
    /// `+1`: every configuration point has `normal . x <= offset`;
    /// `-1`: every point has `normal . x >= offset`.
    pub outward: i8,
    pub incident: BTreeSet<usize>,
}

impl Facet {
    /// Positive iff `p` lies strictly beyond the facet, zero on its
    /// hyperplane, negative strictly on the hull side.
    pub fn eval_outward(&self, p: &[Rational]) -> Rational {
        let v = self.plane.eval(p);
        if self.outward >= 0 {
            v
        } else {
            -v
        }
    }
}

/// Result of a face test: the smallest face of the hull containing the
/// queried subset, and a witness functional when the subset is itself a face.
#[derive(Debug, Clone)]
pub struct FaceTest {
    pub is_face: bool,
    /// Linear functional maximized over the configuration exactly on the
    /// subset; present iff `is_face`.
    pub functional: Option<Vec<Rational>>,
    /// Point set of the smallest face containing the subset.
    pub minimal_face: BTreeSet<usize>,
}

struct Scaled {
    /// Least common denominator of all coordinates.
    den: BigInt,
    /// Homogeneous integer rows `(den * p_i, den)`, one per point.
    hom_big: Vec<Vec<BigInt>>,
    /// Same rows in `i128` when every entry fits.
    hom_small: Option<Vec<Vec<i128>>>,
}

/// A labeled, ordered list of rational points in a fixed dimension.
/// Duplicate coordinates are rejected; labels, when present, are unique.
pub struct PointConfiguration {
    dim: usize,
    points: Vec<Vec<Rational>>,
    labels: Vec<Option<String>>,
    scaled: OnceLock<Scaled>,
    facet_cache: OnceLock<Result<Vec<Facet>, GeomError>>,
}

impl Clone for PointConfiguration {
    fn clone(&self) -> Self {
        PointConfiguration {
            dim: self.dim,
            points: self.points.clone(),
            labels: self.labels.clone(),
            scaled: OnceLock::new(),
            facet_cache: OnceLock::new(),
        }
    }
}

impl PartialEq for PointConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points && self.labels == other.labels
    }
}
impl Eq for PointConfiguration {}

impl std::fmt::Debug for PointConfiguration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PointConfiguration(dim={}, n={})",
            self.dim,
            self.points.len()
        )
    }
}

impl PointConfiguration {
    pub fn new(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self, GeomError> {
        let labels = vec![None; points.len()];
        Self::with_labels(dim, points, labels)
    }

    pub fn with_labels(
        dim: usize,
        points: Vec<Vec<Rational>>,
        labels: Vec<Option<String>>,
    ) -> Result<Self, GeomError> {
        assert_eq!(points.len(), labels.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(GeomError::DimensionMismatch {
                    index: i,
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        let mut seen: BTreeMap<&[Rational], usize> = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            if let Some(&j) = seen.get(p.as_slice()) {
                return Err(GeomError::DuplicatePoint { a: j, b: i });
            }
            seen.insert(p.as_slice(), i);
        }
        let mut lab_seen = BTreeSet::new();
        for l in labels.iter().flatten() {
            if !lab_seen.insert(l.clone()) {
                return Err(GeomError::DuplicateLabel { label: l.clone() });
            }
        }
        Ok(PointConfiguration {
            dim,
            points,
            labels,
            scaled: OnceLock::new(),
            facet_cache: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[Rational] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels[i].as_deref()
    }

    /// Index of the point with the given coordinates, if present.
    pub fn index_of(&self, coords: &[Rational]) -> Option<usize> {
        self.points.iter().position(|p| p.as_slice() == coords)
    }

    fn scaled(&self) -> &Scaled {
        self.scaled.get_or_init(|| {
            let mut den = BigInt::one();
            for p in &self.points {
                for c in p {
                    den = num::integer::lcm(den, c.denom().clone());
                }
            }
            let hom_big: Vec<Vec<BigInt>> = self
                .points
                .iter()
                .map(|p| {
                    let mut row: Vec<BigInt> =
                        p.iter().map(|c| c.numer() * (&den / c.denom())).collect();
                    row.push(den.clone());
                    row
                })
                .collect();
            let hom_small = hom_big
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| x.to_i128())
                        .collect::<Option<Vec<i128>>>()
                })
                .collect::<Option<Vec<Vec<i128>>>>();
            Scaled {
                den,
                hom_big,
                hom_small,
            }
        })
    }

    fn check_subset(&self, subset: &[usize]) -> Result<(), GeomError> {
        if subset.is_empty() {
            return Err(GeomError::EmptySubset);
        }
        let mut seen = BTreeSet::new();
        for &i in subset {
            if i >= self.points.len() {
                return Err(GeomError::InvalidIndex {
                    index: i,
                    len: self.points.len(),
                });
            }
            if !seen.insert(i) {
                return Err(GeomError::DuplicateIndex { index: i });
            }
        }
        Ok(())
    }

    fn rows_small(&self, subset: &[usize]) -> Option<Vec<Vec<i128>>> {
        let s = self.scaled();
        let hs = s.hom_small.as_ref()?;
        Some(subset.iter().map(|&i| hs[i].clone()).collect())
    }

    fn rows_big(&self, subset: &[usize]) -> Vec<Vec<BigInt>> {
        let s = self.scaled();
        subset.iter().map(|&i| s.hom_big[i].clone()).collect()
    }

    /// Dimension of the affine hull of the subset.
    pub fn affine_rank(&self, subset: &[usize]) -> Result<usize, GeomError> {
        self.check_subset(subset)?;
        if let Some(rows) = self.rows_small(subset) {
            if let Some(r) = zz::rank(&rows) {
                return Ok(r - 1);
            }
        }
        let r = zz::rank(&self.rows_big(subset)).expect("BigInt arithmetic is total");
        Ok(r - 1)
    }

    /// Primitive integer kernel vectors of the affine dependence system of
    /// `subset`: each vector `v` satisfies `sum v_i = 0` and
    /// `sum v_i p_{subset_i} = 0`, with coprime entries. Signs are not
    /// normalized here.
    pub(crate) fn dependence_kernel(&self, subset: &[usize]) -> Vec<Vec<BigInt>> {
        // columns of the homogeneous system are the subset's points
        if let Some(rows) = self.rows_small(subset) {
            let cols = rows[0].len();
            let mat: Vec<Vec<i128>> = (0..cols)
                .map(|j| rows.iter().map(|r| r[j]).collect())
                .collect();
            if let Some(k) = zz::kernel_basis(&mat) {
                return k
                    .into_iter()
                    .map(|v| v.into_iter().map(BigInt::from).collect())
                    .collect();
            }
        }
        let rows = self.rows_big(subset);
        let cols = rows[0].len();
        let mat: Vec<Vec<BigInt>> = (0..cols)
            .map(|j| rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        zz::kernel_basis(&mat).expect("BigInt arithmetic is total")
    }

    /// Basis of affine dependences of the subset: rational coefficient
    /// vectors summing to zero whose combination of the points vanishes.
    /// Empty iff the subset is affinely independent. Each vector is primitive
    /// integer with positive first nonzero entry. The defining identities are
    /// re-verified by substitution before returning.
    pub fn affine_kernel(&self, subset: &[usize]) -> Result<Vec<Vec<Rational>>, GeomError> {
        self.check_subset(subset)?;
        let mut basis = self.dependence_kernel(subset);
        for v in basis.iter_mut() {
            if v.iter()
                .find(|x| !x.is_zero())
                .map_or(false, |x| x.is_negative())
            {
                for x in v.iter_mut() {
                    *x = -&*x;
                }
            }
        }
        // self-check: coefficients sum to zero and annihilate the points
        for v in &basis {
            let mut coeff_sum = BigInt::ZERO;
            for x in v {
                coeff_sum += x;
            }
            assert!(
                coeff_sum.is_zero(),
                "dependence coefficients must sum to zero"
            );
            for k in 0..self.dim {
                let mut s = Rational::zero();
                for (j, &i) in subset.iter().enumerate() {
                    s += Rational::from(v[j].clone()) * &self.points[i][k];
                }
                assert!(s.is_zero(), "dependence must annihilate the points");
            }
        }
        Ok(basis
            .into_iter()
            .map(|v| v.into_iter().map(Rational::from).collect())
            .collect())
    }

    /// Signed determinant of the edge-vector matrix of a full-dimensional
    /// simplex (`dim + 1` points), in the listed vertex order.
    pub fn simplex_determinant(&self, simplex: &[usize]) -> Result<Rational, GeomError> {
        self.check_subset(simplex)?;
        if simplex.len() != self.dim + 1 {
            return Err(GeomError::DegenerateSimplex {
                simplex: simplex.to_vec(),
                rank: simplex.len().saturating_sub(1),
                expected: self.dim,
            });
        }
        let s = self.scaled();
        let d = self.dim;
        let small = s.hom_small.as_ref().and_then(|hs| {
            let rows: Vec<Vec<i128>> = (1..=d)
                .map(|j| {
                    (0..d)
                        .map(|k| hs[simplex[j]][k].checked_sub(hs[simplex[0]][k]))
                        .collect::<Option<Vec<i128>>>()
                })
                .collect::<Option<Vec<Vec<i128>>>>()?;
            zz::det(rows)
        });
        let det_big = match small {
            Some(v) => BigInt::from(v),
            None => {
                let rows: Vec<Vec<BigInt>> = (1..=d)
                    .map(|j| {
                        (0..d)
                            .map(|k| &s.hom_big[simplex[j]][k] - &s.hom_big[simplex[0]][k])
                            .collect()
                    })
                    .collect();
                zz::det(rows).expect("BigInt arithmetic is total")
            }
        };
        let mut den_pow = BigInt::one();
        for _ in 0..d {
            den_pow *= &s.den;
        }
        Ok(Rational::new(det_big, den_pow))
    }

    /// All facet hyperplanes of the convex hull, each with its incident point
    /// set, in a deterministic order. Cached after the first call.
    pub fn facets(&self) -> Result<&[Facet], GeomError> {
        let r = self.facet_cache.get_or_init(|| self.compute_facets());
        match r {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    fn compute_facets(&self) -> Result<Vec<Facet>, GeomError> {
        let all: Vec<usize> = (0..self.points.len()).collect();
        let rank = self.affine_rank(&all)?;
        if rank != self.dim {
            return Err(GeomError::NotFullDimensional {
                rank,
                dim: self.dim,
            });
        }
        let s = self.scaled();
        let found = match &s.hom_small {
            Some(hs) => facet_scan(hs, self.dim),
            None => None,
        };
        let raw = match found {
            Some(v) => v,
            None => facet_scan(&s.hom_big, self.dim).expect("BigInt arithmetic is total"),
        };
        let mut out: Vec<Facet> = raw
            .into_iter()
            .map(|(hom, outward, incident)| {
                // hom = (n_0..n_{d-1}, h) against the scaled rows:
                // sum n_k (den x_k) + h den = 0, so in original coordinates
                // the plane is n . x = -h. hom is joint-primitive with
                // positive leading entry, which lands in the normal part, so
                // Hyperplane::new keeps the orientation.
                let n_rat: Vec<Rational> = hom[..self.dim]
                    .iter()
                    .map(|x| Rational::from(x.clone()))
                    .collect();
                let off = Rational::from(-hom[self.dim].clone());
                let plane = Hyperplane::new(&n_rat, &off).expect("facet normal nonzero");
                debug_assert!(plane.normal.iter().find(|x| !x.is_zero()).unwrap() > &BigInt::ZERO);
                Facet {
                    plane,
                    outward,
                    incident,
                }
            })
            .collect();
        out.sort_by(|a, b| {
            (&a.plane.normal, &a.plane.offset).cmp(&(&b.plane.normal, &b.plane.offset))
        });
        Ok(out)
    }

    /// Face test by facet intersection: the smallest face containing the
    /// subset is the intersection of all facets containing it (the whole
    /// polytope when no facet does). The subset is a face iff it equals the
    /// point set of that smallest face. The witness functional is the sum of
    /// the outward facet normals, maximized over the configuration exactly on
    /// the face.
    pub fn is_face(&self, subset: &[usize]) -> Result<FaceTest, GeomError> {
        self.check_subset(subset)?;
        let facets = self.facets()?;
        let sub: BTreeSet<usize> = subset.iter().copied().collect();
        let containing: Vec<&Facet> = facets
            .iter()
            .filter(|f| sub.is_subset(&f.incident))
            .collect();
        if containing.is_empty() {
            let minimal: BTreeSet<usize> = (0..self.points.len()).collect();
            let is_face = sub == minimal;
            return Ok(FaceTest {
                is_face,
                functional: is_face.then(|| vec![Rational::zero(); self.dim]),
                minimal_face: minimal,
            });
        }
        let mut minimal = containing[0].incident.clone();
        for f in &containing[1..] {
            minimal = minimal.intersection(&f.incident).copied().collect();
        }
        let is_face = minimal == sub;
        let functional = is_face.then(|| {
            let mut func = vec![Rational::zero(); self.dim];
            for f in &containing {
                let sign = Rational::from(BigInt::from(f.outward as i64));
                for (k, n) in f.plane.normal.iter().enumerate() {
                    func[k] += &sign * Rational::from(n.clone());
                }
            }
            func
        });
        Ok(FaceTest {
            is_face,
            functional,
            minimal_face: minimal,
        })
    }

    /// Maximum of a linear functional over the configuration and the set of
    /// points attaining it.
    pub fn maximizers(&self, functional: &[Rational]) -> (Rational, BTreeSet<usize>) {
        assert_eq!(functional.len(), self.dim);
        let mut best: Option<Rational> = None;
        let mut arg = BTreeSet::new();
        for (i, p) in self.points.iter().enumerate() {
            let mut v = Rational::zero();
            for (c, x) in functional.iter().zip(p) {
                v += c * x;
            }
            let cmp = best.as_ref().map(|b| v.cmp(b));
            match cmp {
                Some(std::cmp::Ordering::Less) => {}
                Some(std::cmp::Ordering::Equal) => {
                    arg.insert(i);
                }
                _ => {
                    best = Some(v);
                    arg = BTreeSet::from([i]);
                }
            }
        }
        (best.expect("nonempty configuration"), arg)
    }

    /// True iff the facets of the hull visible from `point` are exactly the
    /// facets containing `face`. The query point must avoid every facet
    /// hyperplane; `face` must be a face of the hull.
    pub fn lies_beyond(&self, point: &[Rational], face: &[usize]) -> Result<bool, GeomError> {
        assert_eq!(point.len(), self.dim);
        let ft = self.is_face(face)?;
        if !ft.is_face {
            return Err(GeomError::NotAFace {
                subset: face.to_vec(),
                minimal_face: ft.minimal_face.iter().copied().collect(),
            });
        }
        let sub: BTreeSet<usize> = face.iter().copied().collect();
        let facets = self.facets()?;
        for f in facets {
            let v = f.eval_outward(point);
            if v.is_zero() {
                return Err(GeomError::PointOnFacetHyperplane {
                    facet: f.incident.iter().copied().collect(),
                });
            }
            let visible = v > Rational::zero();
            let contains = sub.is_subset(&f.incident);
            if visible != contains {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Scaled homogeneous rows `(den * p_i, den)` for all points: the exact
    /// integer backing store, with the `i128` mirror when it fits.
    pub(crate) fn scaled_hom(&self) -> (&[Vec<BigInt>], Option<&[Vec<i128>]>) {
        let s = self.scaled();
        (&s.hom_big, s.hom_small.as_deref())
    }

    /// Re-coordinatize the subset inside its own affine hull: pick a maximal
    /// affinely independent sub-basis and express every subset point in the
    /// basis's edge coordinates. The result is a full-dimensional
    /// configuration of the subset's points (in subset order) whose face
    /// lattice equals that of the original face, since affine maps preserve
    /// convex structure.
    pub(crate) fn hull_coords_config(&self, subset: &[usize]) -> PointConfiguration {
        self.check_subset(subset).expect("valid subset");
        let r = self.affine_rank(subset).expect("valid subset");
        // greedy affinely independent basis of size r + 1
        let mut basis: Vec<usize> = vec![subset[0]];
        for &i in &subset[1..] {
            if basis.len() == r + 1 {
                break;
            }
            let mut trial = basis.clone();
            trial.push(i);
            if self.affine_rank(&trial).expect("valid subset") == trial.len() - 1 {
                basis = trial;
            }
        }
        assert_eq!(basis.len(), r + 1, "rank-many independent points exist");
        // solve E t = q - b0 for each subset point, where E's columns are the
        // basis edge vectors; the system is consistent because the subset
        // lies in the affine hull of the basis
        let b0 = &self.points[basis[0]];
        let edges: Vec<Vec<Rational>> = basis[1..]
            .iter()
            .map(|&bi| {
                (0..self.dim)
                    .map(|k| &self.points[bi][k] - &b0[k])
                    .collect()
            })
            .collect();
        let coords: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&qi| {
                let rhs: Vec<Rational> = (0..self.dim)
                    .map(|k| &self.points[qi][k] - &b0[k])
                    .collect();
                solve_consistent(&edges, &rhs)
            })
            .collect();
        PointConfiguration::new(r, coords).expect("projection preserves distinctness")
    }

    /// Hermite-normal-form basis of the lattice generated by the pairwise
    /// differences of the subset's points. Differences must be integer.
    pub fn lattice_spanned_by(&self, subset: &[usize]) -> Result<Vec<Vec<BigInt>>, GeomError> {
        self.check_subset(subset)?;
        let base = subset[0];
        let mut gens = Vec::new();
        for &i in &subset[1..] {
            let mut g = Vec::with_capacity(self.dim);
            for k in 0..self.dim {
                let d = &self.points[i][k] - &self.points[base][k];
                if !d.denom().is_one() {
                    return Err(GeomError::NonIntegerLattice { a: base, b: i });
                }
                g.push(d.numer().clone());
            }
            gens.push(g);
        }
        Ok(zz::hnf(&gens, self.dim).expect("BigInt arithmetic is total"))
    }

    /// Absolute determinant of the simplex divided by the determinant of the
    /// lattice basis: equals one exactly when the simplex's edge vectors span
    /// the given lattice.
    pub fn det_lattice_index(
        &self,
        simplex: &[usize],
        lattice_basis: &[Vec<BigInt>],
    ) -> Result<Rational, GeomError> {
        let det = self.simplex_determinant(simplex)?;
        if det.is_zero() {
            return Err(GeomError::DegenerateSimplex {
                simplex: simplex.to_vec(),
                rank: self.affine_rank(simplex)?,
                expected: self.dim,
            });
        }
        if lattice_basis.len() != self.dim {
            return Err(GeomError::RankDeficientLattice {
                rank: lattice_basis.len(),
                expected: self.dim,
            });
        }
        let lat = zz::det(lattice_basis.to_vec()).expect("BigInt arithmetic is total");
        assert!(!lat.is_zero(), "lattice basis must be nonsingular");
        Ok((det / Rational::from(lat)).abs())
    }
}

/// Solve `sum_j t_j edges[j] = rhs` by rational Gaussian elimination. The
/// edges must be linearly independent and the system consistent; both hold
/// for hull-coordinate computations by construction.
fn solve_consistent(edges: &[Vec<Rational>], rhs: &[Rational]) -> Vec<Rational> {
    let r = edges.len();
    let d = rhs.len();
    let mut aug: Vec<Vec<Rational>> = (0..d)
        .map(|k| {
            let mut row: Vec<Rational> = edges.iter().map(|e| e[k].clone()).collect();
            row.push(rhs[k].clone());
            row
        })
        .collect();
    let mut piv_row = 0;
    let mut pivots = Vec::new();
    for col in 0..r {
        let pr = (piv_row..d)
            .find(|&i| !aug[i][col].is_zero())
            .expect("basis edges are linearly independent");
        aug.swap(piv_row, pr);
        let p = aug[piv_row][col].clone();
        for x in aug[piv_row].iter_mut() {
            *x /= &p;
        }
        for i in 0..d {
            if i != piv_row && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                for j in 0..=r {
                    let s = f.clone() * &aug[piv_row][j];
                    aug[i][j] -= s;
                }
            }
        }
        pivots.push((piv_row, col));
        piv_row += 1;
    }
    for row in aug.iter().skip(piv_row) {
        assert!(
            row[r].is_zero(),
            "right-hand side must lie in the span of the edges"
        );
    }
    let mut t = vec![Rational::zero(); r];
    for (row, col) in pivots {
        t[col] = aug[row][r].clone();
    }
    t
}

/// Scan all `dim`-subsets for supporting hyperplanes. Returns, per facet, the
/// joint-primitive homogeneous normal (length `dim + 1`, positive leading
/// entry), the outward sign relative to it, and the incident point set.
/// `None` signals `i128` overflow; the caller retries with `BigInt`.
///
/// Every facet contains `dim` affinely independent configuration points, so
/// scanning all `dim`-subsets visits each facet at least once.
fn facet_scan<Z: zz::Zi>(
    hom: &[Vec<Z>],
    dim: usize,
) -> Option<Vec<(Vec<BigInt>, i8, BTreeSet<usize>)>> {
    let n = hom.len();
    if n < dim {
        return Some(Vec::new());
    }
    let mut found: BTreeMap<Vec<BigInt>, (i8, BTreeSet<usize>)> = BTreeMap::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    let mut minor = vec![vec![Z::zero(); dim]; dim];
    loop {
        // homogeneous normal via signed cofactors of the dim x (dim+1) matrix
        let mut normal = vec![Z::zero(); dim + 1];
        let mut nonzero = false;
        for (skip, slot) in normal.iter_mut().enumerate() {
            for (r, &pi) in subset.iter().enumerate() {
                let row = &hom[pi];
                let mut c = 0;
                for (j, x) in row.iter().enumerate() {
                    if j == skip {
                        continue;
                    }
                    minor[r][c] = x.clone();
                    c += 1;
                }
            }
            let d = zz::det(minor.clone())?;
            nonzero |= !d.is_zero();
            *slot = if skip % 2 == 0 { d } else { d.neg() };
        }
        if nonzero {
            // early-exit side scan: most candidate planes have points on both
            // sides and are discarded after a few evaluations
            let mut pos = false;
            let mut neg = false;
            let mut supporting = true;
            for row in hom {
                let mut e = Z::zero();
                for (nj, xj) in normal.iter().zip(row) {
                    e = e.ck_add(&nj.ck_mul(xj)?)?;
                }
                if !e.is_zero() {
                    if e.is_negative() {
                        neg = true;
                    } else {
                        pos = true;
                    }
                    if pos && neg {
                        supporting = false;
                        break;
                    }
                }
            }
            if supporting {
                let mut g = Z::zero();
                for x in &normal {
                    g = g.gcd(x);
                }
                if normal.iter().find(|x| !x.is_zero()).unwrap().is_negative() {
                    g = g.neg();
                }
                let canon: Vec<Z> = normal.iter().map(|x| x.exact_div(&g)).collect();
                let key: Vec<BigInt> = canon.iter().map(|x| x.to_big()).collect();
                // dividing by g only shrinks every partial sum of the side
                // scan, so the recheck below cannot overflow where the scan
                // above did not
                let flipped = g.is_negative();
                found.entry(key).or_insert_with(|| {
                    let mut incident = BTreeSet::new();
                    for (i, row) in hom.iter().enumerate() {
                        let mut e = Z::zero();
                        for (nj, xj) in canon.iter().zip(row) {
                            e = e
                                .ck_add(&nj.ck_mul(xj).expect("shrunken rescan"))
                                .expect("shrunken rescan");
                        }
                        if e.is_zero() {
                            incident.insert(i);
                        }
                    }
                    let points_positive = if flipped { neg } else { pos };
                    let outward = if points_positive { -1 } else { 1 };
                    (outward, incident)
                });
            }
        }
        // advance to the next dim-subset in lexicographic order
        let mut k = dim;
        loop {
            if k == 0 {
                return Some(
                    found
                        .into_iter()
                        .map(|(key, (outward, incident))| (key, outward, incident))
                        .collect(),
                );
            }
            k -= 1;
            if subset[k] != k + n - dim {
                subset[k] += 1;
                for j in k + 1..dim {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Ordered list of integer vectors, typically the homogenized companions of a
/// point configuration (each point scaled to clear denominators, with the
/// scaling factor appended).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorConfiguration {
    dim: usize,
    vectors: Vec<Vec<BigInt>>,
}

impl VectorConfiguration {
    pub fn new(dim: usize, vectors: Vec<Vec<BigInt>>) -> Result<Self, GeomError> {
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(GeomError::DimensionMismatch {
                    index: i,
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        Ok(VectorConfiguration { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[BigInt] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    /// Signed determinant of `dim` vectors in the listed order.
    pub fn det(&self, subset: &[usize]) -> BigInt {
        assert_eq!(subset.len(), self.dim);
        let rows: Vec<Vec<BigInt>> = subset.iter().map(|&i| self.vectors[i].clone()).collect();
        zz::det(rows).expect("BigInt arithmetic is total")
    }

    /// Index in `Z^dim` of the lattice generated by all vectors
    /// (zero when they do not span full rank).
    pub fn lattice_index(&self) -> BigInt {
        zz::lattice_index(&self.vectors, self.dim).expect("BigInt arithmetic is total")
    }

    /// True iff some coordinate functional is strictly positive (or strictly
    /// negative) on every vector. Homogenized configurations qualify via
    /// their appended scaling coordinate.
    pub fn is_acyclic_by_coordinate(&self) -> bool {
        for k in 0..self.dim {
            if self.vectors.iter().all(|v| v[k] > BigInt::ZERO) {
                return true;
            }
            if self.vectors.iter().all(|v| v[k] < BigInt::ZERO) {
                return true;
            }
        }
        false
    }
}

/// Write the `dim <d> <n>` header plus one line per point: space-separated
/// rationals, then ` # label` when the point is labeled. Reduced rationals
/// print as `p/q`, integers as bare `p`, so writing is bit-stable.
pub fn write_points(config: &PointConfiguration, w: &mut dyn Write) -> Result<(), GeomError> {
    writeln!(w, "dim {} {}", config.dim(), config.len())?;
    for i in 0..config.len() {
        let mut line = String::new();
        for (k, c) in config.point(i).iter().enumerate() {
            if k > 0 {
                line.push(' ');
            }
            write!(line, "{}", c).expect("string write");
        }
        if let Some(l) = config.label(i) {
            write!(line, " # {}", l).expect("string write");
        }
        writeln!(w, "{}", line)?;
    }
    Ok(())
}

/// Inverse of [`write_points`]; round-trips bit-exactly.
pub fn read_points(r: &mut dyn BufRead) -> Result<PointConfiguration, GeomError> {
    let mut lines = Vec::new();
    for l in r.lines() {
        lines.push(l?);
    }
    let mut it = lines.iter().enumerate();
    let (_, header) = it.next().ok_or(GeomError::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "dim" {
        return Err(GeomError::Parse {
            line: 1,
            msg: format!("expected header `dim <d> <n>`, got {:?}", header),
        });
    }
    let parse_usize = |s: &str, line: usize| {
        s.parse::<usize>().map_err(|e| GeomError::Parse {
            line,
            msg: format!("bad count {:?}: {}", s, e),
        })
    };
    let dim = parse_usize(toks[1], 1)?;
    let n = parse_usize(toks[2], 1)?;
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let (idx, line) = it.next().ok_or(GeomError::Parse {
            line: lines.len(),
            msg: format!("expected {} points, file ended early", n),
        })?;
        let lineno = idx + 1;
        let (coords_part, label) = match line.split_once('#') {
            Some((c, l)) => (c, Some(l.trim().to_string())),
            None => (line.as_str(), None),
        };
        let mut coords = Vec::with_capacity(dim);
        for tok in coords_part.split_whitespace() {
            let v = Rational::from_str(tok).map_err(|e| GeomError::Parse {
                line: lineno,
                msg: format!("bad rational {:?}: {}", tok, e),
            })?;
            coords.push(v);
        }
        if coords.len() != dim {
            return Err(GeomError::Parse {
                line: lineno,
                msg: format!("expected {} coordinates, got {}", dim, coords.len()),
            });
        }
        points.push(coords);
        labels.push(label.filter(|l| !l.is_empty()));
    }
    PointConfiguration::with_labels(dim, points, labels)
}

/// Convenience constructor from integer coordinates.
pub fn config_from_ints(dim: usize, pts: &[&[i64]]) -> PointConfiguration {
    let points = pts
        .iter()
        .map(|p| p.iter().map(|&x| Rational::from(BigInt::from(x))).collect())
        .collect();
    PointConfiguration::new(dim, points).expect("valid integer configuration")
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

pub(crate) fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
