//! Path families between selected sources and sinks, their classification,
//! and the tail-swap involution that cancels intersecting families.

use std::collections::HashMap;

use itertools::Itertools;

use crate::minors::{IndexSet, MatrixError};
use crate::network::{Path, PlanarNetwork, VertexId};
use crate::polynomial::Polynomial;
use crate::Error;

/// Paths `pi_1..pi_k` where `pi_i` runs from source `rows[i]` to sink
/// `cols[perm[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathFamily {
    pub rows: IndexSet,
    pub cols: IndexSet,
    pub paths: Vec<Path>,
    /// 0-based one-line notation of the slot permutation.
    pub perm: Vec<usize>,
    pub sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyClass {
    /// Vertex-disjoint.
    P0,
    /// Intersecting with an even permutation.
    Pplus,
    /// Intersecting with an odd permutation.
    Pminus,
}

/// Sign of a permutation in one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn check_sets(net: &PlanarNetwork, rows: &IndexSet, cols: &IndexSet) -> Result<(), MatrixError> {
    if rows.len() != cols.len() {
        return Err(MatrixError::Cardinality {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    let n = net.order();
    for &i in rows.as_slice().iter().chain(cols.as_slice()) {
        if i == 0 || i > n {
            return Err(MatrixError::Bounds { index: i, limit: n });
        }
    }
    Ok(())
}

impl PathFamily {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// True iff no vertex lies on two distinct paths.
    pub fn is_vertex_disjoint(&self) -> bool {
        self.intersections().is_empty()
    }

    /// Vertices shared by at least two paths, each with the sorted indices
    /// of the paths through it.
    pub fn intersections(&self) -> Vec<(VertexId, Vec<usize>)> {
        let mut through: HashMap<VertexId, Vec<usize>> = HashMap::new();
        for (i, p) in self.paths.iter().enumerate() {
            for &v in &p.vertices {
                through.entry(v).or_default().push(i);
            }
        }
        let mut out: Vec<_> = through.into_iter().filter(|(_, ps)| ps.len() > 1).collect();
        out.sort();
        out
    }

    pub fn weight(&self, net: &PlanarNetwork) -> Polynomial {
        self.paths.iter().map(|p| net.path_weight(p)).product()
    }

    pub fn class(&self) -> FamilyClass {
        if self.is_vertex_disjoint() {
            FamilyClass::P0
        } else if self.sign > 0 {
            FamilyClass::Pplus
        } else {
            FamilyClass::Pminus
        }
    }

    /// `sign * weight`.
    pub fn signed_weight(&self, net: &PlanarNetwork) -> Polynomial {
        let w = self.weight(net);
        if self.sign < 0 {
            -w
        } else {
            w
        }
    }
}

pub fn is_vertex_disjoint(f: &PathFamily) -> bool {
    f.is_vertex_disjoint()
}

pub fn family_weight(net: &PlanarNetwork, f: &PathFamily) -> Polynomial {
    f.weight(net)
}

/// Every family of paths from the sources `I` to the sinks `J`, ordered by
/// the permutation (lexicographic one-line order) and then by the
/// enumeration index of each path.
pub fn enumerate_families(
    net: &PlanarNetwork,
    rows: &IndexSet,
    cols: &IndexSet,
) -> Result<Vec<PathFamily>, Error> {
    check_sets(net, rows, cols)?;
    let k = rows.len();
    let paths: Vec<Vec<Vec<Path>>> = rows
        .as_slice()
        .iter()
        .map(|&i| cols.as_slice().iter().map(|&j| net.enumerate_paths(i, j)).collect())
        .collect();
    let mut out = Vec::new();
    for perm in (0..k).permutations(k) {
        let sign = permutation_sign(&perm);
        let choices: Vec<&Vec<Path>> = (0..k).map(|i| &paths[i][perm[i]]).collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        if k == 0 {
            out.push(PathFamily {
                rows: rows.clone(),
                cols: cols.clone(),
                paths: Vec::new(),
                perm: Vec::new(),
                sign,
            });
            continue;
        }
        for combo in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
            out.push(PathFamily {
                rows: rows.clone(),
                cols: cols.clone(),
                paths: combo.into_iter().cloned().collect(),
                perm: perm.clone(),
                sign,
            });
        }
    }
    Ok(out)
}

pub fn disjoint_families(
    net: &PlanarNetwork,
    rows: &IndexSet,
    cols: &IndexSet,
) -> Result<Vec<PathFamily>, Error> {
    let mut all = enumerate_families(net, rows, cols)?;
    all.retain(PathFamily::is_vertex_disjoint);
    Ok(all)
}

/// Sum of the weights of all vertex-disjoint families from `I` to `J`.
pub fn disjoint_sum(net: &PlanarNetwork, rows: &IndexSet, cols: &IndexSet) -> Result<Polynomial, Error> {
    Ok(disjoint_families(net, rows, cols)?
        .iter()
        .map(|f| f.weight(net))
        .sum())
}

/// `sum sgn(f) w(f)` over every family.
pub fn signed_sum(net: &PlanarNetwork, rows: &IndexSet, cols: &IndexSet) -> Result<Polynomial, Error> {
    Ok(enumerate_families(net, rows, cols)?
        .iter()
        .map(|f| f.signed_weight(net))
        .sum())
}

/// Exchanges the portions after the rightmost intersection vertex between
/// the two lowest-indexed paths through it.
pub fn tail_swap(net: &PlanarNetwork, f: &PathFamily) -> Result<PathFamily, Error> {
    let (v, through) = f
        .intersections()
        .into_iter()
        .max_by(|(u, _), (w, _)| {
            let (pu, pw) = (&net.vertex(*u).pos, &net.vertex(*w).pos);
            pu.x.cmp(&pw.x).then_with(|| pu.y.cmp(&pw.y))
        })
        .ok_or_else(|| Error::Precondition("tail swap of a vertex-disjoint family".into()))?;
    let (i, j) = (through[0], through[1]);
    let (pi, pj) = (&f.paths[i], &f.paths[j]);
    let (ki, kj) = (pi.position(v).unwrap(), pj.position(v).unwrap());
    let splice = |head: &Path, kh: usize, tail: &Path, kt: usize| Path {
        source: head.source,
        sink: tail.sink,
        edges: head.edges[..kh].iter().chain(&tail.edges[kt..]).copied().collect(),
        vertices: head.vertices[..kh].iter().chain(&tail.vertices[kt..]).copied().collect(),
    };
    let mut out = f.clone();
    out.paths[i] = splice(pi, ki, pj, kj);
    out.paths[j] = splice(pj, kj, pi, ki);
    out.perm.swap(i, j);
    out.sign = -f.sign;
    Ok(out)
}

/// `det W[I, J]` equals the disjoint-family sum.
pub fn verify_lindstrom(net: &PlanarNetwork, rows: &IndexSet, cols: &IndexSet) -> Result<bool, Error> {
    let w = net.weight_matrix()?;
    Ok(w.minor(rows, cols)? == disjoint_sum(net, rows, cols)?)
}
