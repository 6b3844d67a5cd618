//! Geometric bistellar flips between triangulations.
//!
//! A circuit is a minimal affinely dependent subset, recorded as the ordered
//! pair of its two Radon sides. A circuit supports a flip in a triangulation
//! when one of its two canonical triangulations sits inside the current one
//! as a subcomplex whose maximal simplices all share one link; the flip
//! swaps that side for the other across the link.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};

use num::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::exactgeom::{GeomError, PointConfiguration, Rational};
use crate::triangulation::{Simplex, Triangulation, TriangulationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlipError {
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error("subset {subset:?} is affinely independent, so it contains no circuit")]
    NotDependent { subset: Vec<usize> },
    #[error("subset {subset:?} is dependent but not minimally so; {witness:?} already carries a dependence")]
    NotMinimal {
        subset: Vec<usize>,
        witness: Vec<usize>,
    },
    #[error("each side of a circuit must be nonempty")]
    EmptySide,
    #[error("vertex {vertex} appears on both sides of the circuit")]
    OverlappingSides { vertex: usize },
    #[error("link simplex touches the circuit at vertex {vertex}")]
    LinkMeetsCircuit { vertex: usize },
    #[error("flip expects cell {cell:?}, which the triangulation lacks")]
    MissingCell { cell: Vec<usize> },
    #[error("circuit is not flippable here: {detail}")]
    Unsupported { detail: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {msg}")]
    Io { msg: String },
}

impl From<std::io::Error> for FlipError {
    fn from(e: std::io::Error) -> Self {
        FlipError::Io { msg: e.to_string() }
    }
}

/// An ordered Radon pair: the two sides of a minimal affine dependence.
/// The same geometric circuit has two orientations, `Z` and its swap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Circuit {
    positive: Vec<usize>,
    negative: Vec<usize>,
}

impl Circuit {
    pub fn new(mut positive: Vec<usize>, mut negative: Vec<usize>) -> Result<Self, FlipError> {
        positive.sort_unstable();
        positive.dedup();
        negative.sort_unstable();
        negative.dedup();
        if positive.is_empty() || negative.is_empty() {
            return Err(FlipError::EmptySide);
        }
        if let Some(&v) = positive.iter().find(|v| negative.binary_search(v).is_ok()) {
            return Err(FlipError::OverlappingSides { vertex: v });
        }
        Ok(Circuit { positive, negative })
    }

    pub fn positive(&self) -> &[usize] {
        &self.positive
    }

    pub fn negative(&self) -> &[usize] {
        &self.negative
    }

    /// Sorted union of both sides.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .positive
            .iter()
            .chain(self.negative.iter())
            .copied()
            .collect();
        s.sort_unstable();
        s
    }

    /// The oppositely oriented circuit.
    pub fn swapped(&self) -> Circuit {
        Circuit {
            positive: self.negative.clone(),
            negative: self.positive.clone(),
        }
    }

    /// True iff the lowest support index sits on the positive side.
    pub fn is_normalized(&self) -> bool {
        match (self.positive.first(), self.negative.first()) {
            (Some(p), Some(n)) => p < n,
            _ => unreachable!("sides are nonempty"),
        }
    }

    /// The orientation with the lowest support index positive.
    pub fn normalized(&self) -> Circuit {
        if self.is_normalized() {
            self.clone()
        } else {
            self.swapped()
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &[usize]| {
            s.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{} | {}", side(&self.positive), side(&self.negative))
    }
}

fn circuit_from_kernel(subset: &[usize], v: &[Rational]) -> Circuit {
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (i, x) in v.iter().enumerate() {
        if x.is_positive() {
            positive.push(subset[i]);
        } else if x.is_negative() {
            negative.push(subset[i]);
        }
    }
    Circuit::new(positive, negative).expect("a dependence has both signs")
}

/// The circuit carried by a subset that is itself minimally dependent.
/// The result is normalized: its lowest support index is positive.
pub fn circuit_of(config: &PointConfiguration, subset: &[usize]) -> Result<Circuit, FlipError> {
    let basis = config.affine_kernel(subset)?;
    match basis.len() {
        0 => Err(FlipError::NotDependent {
            subset: subset.to_vec(),
        }),
        1 => {
            let v = &basis[0];
            let support: Vec<usize> = subset
                .iter()
                .zip(v)
                .filter(|(_, x)| !num::Zero::is_zero(*x))
                .map(|(&s, _)| s)
                .collect();
            if support.len() < subset.len() {
                return Err(FlipError::NotMinimal {
                    subset: subset.to_vec(),
                    witness: support,
                });
            }
            Ok(circuit_from_kernel(subset, v))
        }
        _ => {
            let witness: Vec<usize> = subset
                .iter()
                .zip(&basis[0])
                .filter(|(_, x)| !num::Zero::is_zero(*x))
                .map(|(&s, _)| s)
                .collect();
            Err(FlipError::NotMinimal {
                subset: subset.to_vec(),
                witness,
            })
        }
    }
}

/// The unique circuit inside a subset with a one-dimensional dependence
/// space, dropping zero-weight points. `None` when the dependence space has
/// any other dimension.
fn unique_circuit_in(config: &PointConfiguration, subset: &[usize]) -> Option<Circuit> {
    let basis = config.affine_kernel(subset).ok()?;
    if basis.len() != 1 {
        return None;
    }
    Some(circuit_from_kernel(subset, &basis[0]))
}

/// The two canonical triangulations of a circuit's support: dropping one
/// positive vertex at a time, and dropping one negative vertex at a time.
pub fn triangulations_of_circuit(c: &Circuit) -> (Vec<Simplex>, Vec<Simplex>) {
    let support = c.support();
    let side = |omit_from: &[usize]| {
        let mut cells: Vec<Simplex> = omit_from
            .iter()
            .map(|&z| {
                Simplex::new(support.iter().copied().filter(|&v| v != z).collect())
                    .expect("support is sorted and distinct")
            })
            .collect();
        cells.sort();
        cells
    };
    (side(&c.positive), side(&c.negative))
}

/// A flip ready to apply: the triangulation currently contains the join of
/// the circuit's positive-side triangulation with `link`, and the flip
/// replaces it by the negative side joined with the same link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipDescriptor {
    circuit: Circuit,
    link: Vec<Simplex>,
}

impl FlipDescriptor {
    pub fn new(circuit: Circuit, mut link: Vec<Simplex>) -> Result<Self, FlipError> {
        let support = circuit.support();
        for l in &link {
            if let Some(&v) = l.vertices().iter().find(|v| support.binary_search(v).is_ok()) {
                return Err(FlipError::LinkMeetsCircuit { vertex: v });
            }
        }
        link.sort();
        link.dedup();
        if link.is_empty() {
            return Err(FlipError::Unsupported {
                detail: "a flip needs at least one link simplex".into(),
            });
        }
        Ok(FlipDescriptor { circuit, link })
    }

    /// The directed circuit; its positive side is the one being removed.
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn link(&self) -> &[Simplex] {
        &self.link
    }
}

/// The shared link of the circuit's positive-side cells in `t`, when that
/// side is present and flippable: every maximal simplex of the positive-side
/// triangulation must have the same nonempty link, and the link must avoid
/// the circuit. `None` otherwise.
pub fn flip_link(t: &Triangulation, circuit: &Circuit) -> Option<Vec<Simplex>> {
    let support = circuit.support();
    let (plus, _) = triangulations_of_circuit(circuit);
    let mut link: Option<Vec<Simplex>> = None;
    for m in &plus {
        let l = t.link(m.vertices());
        if l.is_empty() {
            return None;
        }
        match &link {
            None => link = Some(l),
            Some(prev) => {
                if *prev != l {
                    return None;
                }
            }
        }
    }
    let l = link?;
    if l.iter()
        .any(|s| s.vertices().iter().any(|v| support.binary_search(v).is_ok()))
    {
        return None;
    }
    Some(l)
}

/// All flips supported by the triangulation, in canonical order.
///
/// Candidate circuits are exactly the unique dependences of `cell + one
/// outside point`. This misses nothing: when a flip on circuit `Z` is
/// supported, any positive-side cell `(Z minus z) join L` lies in the
/// triangulation, and adding `z` back yields a subset whose unique
/// dependence is supported exactly on `Z`.
pub fn find_flips(t: &Triangulation) -> Vec<FlipDescriptor> {
    let config = t.config();
    let n = config.len();
    let per_cell: Vec<Vec<Circuit>> = t
        .cells()
        .par_iter()
        .map(|cell| {
            let mut found = Vec::new();
            for p in 0..n {
                if cell.contains(p) {
                    continue;
                }
                let mut subset = cell.vertices().to_vec();
                subset.push(p);
                subset.sort_unstable();
                if let Some(c) = unique_circuit_in(config, &subset) {
                    found.push(c.normalized());
                }
            }
            found
        })
        .collect();
    let mut seen: BTreeSet<Circuit> = BTreeSet::new();
    for v in per_cell {
        seen.extend(v);
    }
    let mut out = Vec::new();
    for c in seen {
        for directed in [c.clone(), c.swapped()] {
            if let Some(link) = flip_link(t, &directed) {
                out.push(FlipDescriptor {
                    circuit: directed,
                    link,
                });
            }
        }
    }
    out.sort_by(|a, b| a.circuit.cmp(&b.circuit));
    out
}

/// Replace the positive side of the flip's circuit by the negative side
/// across the link.
pub fn apply_flip(t: &Triangulation, flip: &FlipDescriptor) -> Result<Triangulation, FlipError> {
    let (plus, minus) = triangulations_of_circuit(&flip.circuit);
    let mut cells: Vec<Simplex> = t.cells().to_vec();
    for m in &plus {
        for l in &flip.link {
            let cell = m.join(l.vertices())?;
            match cells.binary_search(&cell) {
                Ok(i) => {
                    cells.remove(i);
                }
                Err(_) => {
                    return Err(FlipError::MissingCell {
                        cell: cell.vertices().to_vec(),
                    })
                }
            }
        }
    }
    for m in &minus {
        for l in &flip.link {
            cells.push(m.join(l.vertices())?);
        }
    }
    Ok(Triangulation::new(t.config().clone(), cells)?)
}

/// Apply the flip determined by a directed circuit, resolving the link from
/// the current triangulation.
pub fn apply_circuit(t: &Triangulation, directed: &Circuit) -> Result<Triangulation, FlipError> {
    match flip_link(t, directed) {
        Some(link) => apply_flip(
            t,
            &FlipDescriptor {
                circuit: directed.clone(),
                link,
            },
        ),
        None => Err(FlipError::Unsupported {
            detail: format!(
                "the positive side of {} is not present with a shared link",
                directed
            ),
        }),
    }
}

/// One flip per line: `positive | negative | direction`, vertices ascending,
/// circuit normalized, direction `+` when the positive side of the
/// normalized circuit is the removed one, `-` otherwise.
pub fn write_flip_log(flips: &[FlipDescriptor], w: &mut dyn Write) -> Result<(), FlipError> {
    for f in flips {
        let norm = f.circuit.normalized();
        let dir = if f.circuit == norm { '+' } else { '-' };
        writeln!(w, "{} | {}", norm, dir)?;
    }
    Ok(())
}

/// Inverse of [`write_flip_log`]: directed circuits whose positive side is
/// the removed one.
pub fn read_flip_log(r: &mut dyn BufRead) -> Result<Vec<Circuit>, FlipError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split('|').collect();
        if parts.len() != 3 {
            return Err(FlipError::Parse {
                line: lineno,
                msg: format!("expected `positive | negative | direction`, got {:?}", line),
            });
        }
        let side = |s: &str| -> Result<Vec<usize>, FlipError> {
            s.split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|e| FlipError::Parse {
                        line: lineno,
                        msg: format!("bad vertex {:?}: {}", t, e),
                    })
                })
                .collect()
        };
        let c = Circuit::new(side(parts[0])?, side(parts[1])?)?;
        let directed = match parts[2].trim() {
            "+" => c,
            "-" => c.swapped(),
            other => {
                return Err(FlipError::Parse {
                    line: lineno,
                    msg: format!("direction must be `+` or `-`, got {:?}", other),
                })
            }
        };
        out.push(directed);
    }
    Ok(out)
}
