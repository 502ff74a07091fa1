//! Polynomial matrices, division-free minors, (A,B)-minor matrices and
//! nonnegativity sweeps.
//!
//! Row and column index sets are 1-based; offset sets are 0-based.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::polynomial::{Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("index {index} out of range 1..={limit}")]
    Bounds { index: usize, limit: usize },
    #[error("row set has {rows} elements but column set has {cols}")]
    Cardinality { rows: usize, cols: usize },
    #[error("set {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("offset sets must be nonempty")]
    EmptyOffsets,
    #[error("offset window {offsets:?} does not fit in {size} {axis}")]
    Window {
        offsets: Vec<usize>,
        size: usize,
        axis: &'static str,
    },
    #[error("matrix is {rows}x{cols}, operation needs {needed}")]
    Dimension {
        rows: usize,
        cols: usize,
        needed: &'static str,
    },
    #[error("entry ({row}, {col}) = {value} is not a constant")]
    NonConstant { row: usize, col: usize, value: String },
}

/// A strictly increasing set of 1-based row or column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(elements: Vec<usize>) -> Result<Self, MatrixError> {
        if let Some(&0) = elements.first() {
            return Err(MatrixError::Bounds { index: 0, limit: 0 });
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MatrixError::NotIncreasing(elements));
        }
        Ok(IndexSet(elements))
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        IndexSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `base + offsets`, e.g. `2 + {0, 3} = {2, 5}`.
    pub fn shifted(base: usize, offsets: &OffsetSet) -> Self {
        IndexSet(offsets.0.iter().map(|a| base + a).collect())
    }

    fn check_bounds(&self, limit: usize) -> Result<(), MatrixError> {
        match self.0.last() {
            Some(&i) if i > limit => Err(MatrixError::Bounds { index: i, limit }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// A strictly increasing set of 0-based offsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OffsetSet(Vec<usize>);

impl OffsetSet {
    pub fn new(elements: Vec<usize>) -> Result<Self, MatrixError> {
        if elements.is_empty() {
            return Err(MatrixError::EmptyOffsets);
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MatrixError::NotIncreasing(elements));
        }
        Ok(OffsetSet(elements))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn largest(&self) -> usize {
        *self.0.last().expect("offset sets are nonempty")
    }

    /// All nonempty offset sets within `{0, ..., limit-1}` of size at most
    /// `max_len`, ordered by size and then lexicographically.
    pub fn all_up_to(limit: usize, max_len: usize) -> Vec<OffsetSet> {
        (1..=max_len.min(limit))
            .flat_map(|k| (0..limit).combinations(k).map(OffsetSet))
            .collect()
    }
}

impl fmt::Display for OffsetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Dense row-major matrix of polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Polynomial>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        PolyMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        PolyMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| Polynomial::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Polynomial::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Polynomial::one();
        }
        PolyMatrix::new(n, n, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based position `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    /// Entry `w_{i,j}` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        self.get(i - 1, j - 1)
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Polynomial] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix::new(self.rows, self.cols, self.entries.iter().map(f).collect())
    }

    /// Converts a matrix of constants to rationals.
    pub fn as_constants(&self) -> Result<Vec<Rational>, MatrixError> {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, p)| {
                p.as_constant().ok_or_else(|| MatrixError::NonConstant {
                    row: k / self.cols + 1,
                    col: k % self.cols + 1,
                    value: p.to_string(),
                })
            })
            .collect()
    }

    fn check_pair(&self, rows: &IndexSet, cols: &IndexSet) -> Result<(), MatrixError> {
        if rows.len() != cols.len() {
            return Err(MatrixError::Cardinality {
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        rows.check_bounds(self.rows)?;
        cols.check_bounds(self.cols)
    }

    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<PolyMatrix, MatrixError> {
        self.check_pair(rows, cols)?;
        let entries = rows
            .0
            .iter()
            .flat_map(|&i| cols.0.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.entry(i, j).clone())
            .collect();
        Ok(PolyMatrix::new(rows.len(), cols.len(), entries))
    }

    /// `det W[I, J]`.
    pub fn minor(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Polynomial, MatrixError> {
        self.check_pair(rows, cols)?;
        let r: Vec<usize> = rows.0.iter().map(|i| i - 1).collect();
        let c: Vec<usize> = cols.0.iter().map(|j| j - 1).collect();
        Ok(determinant_of(self, &r, &c))
    }

    pub fn determinant(&self) -> Result<Polynomial, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::Dimension {
                rows: self.rows,
                cols: self.cols,
                needed: "a square matrix",
            });
        }
        let all: Vec<usize> = (0..self.rows).collect();
        Ok(determinant_of(self, &all, &all))
    }

    /// Every nonzero minor `det W[rows, J]` over all `J` with `|J| = |rows|`,
    /// keyed by the 0-based column set. One subset DP shared by all column sets.
    pub fn minors_of_rows(&self, rows: &[usize]) -> Vec<(Vec<usize>, Polynomial)> {
        let layer = subset_dp(self, rows, &(0..self.cols).collect::<Vec<_>>());
        let mut out: Vec<(Vec<usize>, Polynomial)> = layer
            .into_iter()
            .map(|(mask, p)| ((0..self.cols).filter(|c| mask >> c & 1 == 1).collect(), p))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// The (A,B)-minor matrix `t_{i,j} = det W[i + A, j + B]`.
    pub fn minor_matrix(&self, a: &OffsetSet, b: &OffsetSet) -> Result<PolyMatrix, MatrixError> {
        if a.len() != b.len() {
            return Err(MatrixError::Cardinality {
                rows: a.len(),
                cols: b.len(),
            });
        }
        if a.largest() >= self.rows {
            return Err(MatrixError::Window {
                offsets: a.0.clone(),
                size: self.rows,
                axis: "rows",
            });
        }
        if b.largest() >= self.cols {
            return Err(MatrixError::Window {
                offsets: b.0.clone(),
                size: self.cols,
                axis: "columns",
            });
        }
        let (m, n) = (self.rows - a.largest(), self.cols - b.largest());
        let entries = (0..m * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let r: Vec<usize> = a.0.iter().map(|x| i + x).collect();
                let c: Vec<usize> = b.0.iter().map(|y| j + y).collect();
                determinant_of(self, &r, &c)
            })
            .collect();
        Ok(PolyMatrix::new(m, n, entries))
    }

    /// The matrix of consecutive 2x2 minors.
    pub fn l_operator(&self) -> Result<PolyMatrix, MatrixError> {
        if self.rows < 2 || self.cols < 2 {
            return Err(MatrixError::Dimension {
                rows: self.rows,
                cols: self.cols,
                needed: "at least 2 rows and 2 columns",
            });
        }
        let window = OffsetSet(vec![0, 1]);
        self.minor_matrix(&window, &window)
    }

    /// Sweeps every minor of order at most `max_order` for a negative
    /// coefficient.
    pub fn all_minors_subtraction_free(&self, max_order: usize) -> SweepReport {
        sweep(self, max_order, true)
    }

    /// Every minor up to `max_order` that is not subtraction-free, in
    /// `(|I|, I, J)` order.
    pub fn minor_violations(&self, max_order: usize) -> SweepReport {
        sweep(self, max_order, false)
    }

    pub fn is_totally_nonnegative(&self, max_order: usize) -> Result<SweepReport, MatrixError> {
        self.as_constants()?;
        // For constant entries a minor is subtraction-free iff it is >= 0.
        Ok(sweep(self, max_order, true))
    }
}

impl fmt::Display for PolyMatrix {
    /// One row per line, entries separated by ` | `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{}", self.row(r).iter().join(" | "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix {}x{}\n{self}", self.rows, self.cols)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Laplace expansion over column subsets: layer `r` maps each `r`-subset `S`
/// of `cols` (as a bitmask over positions in `cols`) to the determinant of
/// the first `r` selected rows against `S`. No division is performed.
fn subset_dp(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> HashMap<u64, Polynomial> {
    assert!(cols.len() <= 64, "at most 64 columns");
    let mut layer: HashMap<u64, Polynomial> = HashMap::from([(0u64, Polynomial::one())]);
    for &r in rows {
        let mut next: HashMap<u64, Polynomial> = HashMap::new();
        for (&mask, value) in &layer {
            if value.is_zero() {
                continue;
            }
            for (pos, &c) in cols.iter().enumerate() {
                if mask >> pos & 1 == 1 {
                    continue;
                }
                let a = m.get(r, c);
                if a.is_zero() {
                    continue;
                }
                let above = (mask >> pos >> 1).count_ones();
                let slot = next.entry(mask | 1 << pos).or_default();
                if above % 2 == 0 {
                    slot.add_product(value, a);
                } else {
                    slot.sub_product(value, a);
                }
            }
        }
        layer = next;
    }
    layer
}

fn determinant_of(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Polynomial {
    debug_assert_eq!(rows.len(), cols.len());
    let full = if cols.is_empty() { 0 } else { u64::MAX >> (64 - cols.len()) };
    subset_dp(m, rows, cols).remove(&full).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorWitness {
    pub rows: IndexSet,
    pub cols: IndexSet,
    pub value: Polynomial,
}

impl fmt::Display for MinorWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I={} J={}: {}", self.rows, self.cols, self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub max_order: usize,
    pub checked: usize,
    /// Failing minors in `(|I|, I, J)` order; at most one when the sweep
    /// stops at the first failure.
    pub failures: Vec<MinorWitness>,
}

impl SweepReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&MinorWitness> {
        self.failures.first()
    }
}

fn sweep(m: &PolyMatrix, max_order: usize, first_only: bool) -> SweepReport {
    let top = max_order.min(m.rows).min(m.cols);
    let row_sets: Vec<Vec<usize>> = (1..=top).flat_map(|k| (0..m.rows).combinations(k)).collect();
    let per_rows: Vec<(usize, Vec<MinorWitness>)> = row_sets
        .par_iter()
        .map(|rows| {
            let minors = m.minors_of_rows(rows);
            // Zero minors are omitted by the DP but still count as checked.
            let checked = binomial(m.cols, rows.len());
            let mut bad = Vec::new();
            for (cols, value) in minors {
                if !value.is_subtraction_free() {
                    bad.push(MinorWitness {
                        rows: IndexSet(rows.iter().map(|i| i + 1).collect()),
                        cols: IndexSet(cols.iter().map(|j| j + 1).collect()),
                        value,
                    });
                    if first_only {
                        break;
                    }
                }
            }
            (checked, bad)
        })
        .collect();
    let mut report = SweepReport {
        max_order,
        checked: 0,
        failures: Vec::new(),
    };
    for (checked, bad) in per_rows {
        report.checked += checked;
        report.failures.extend(bad);
    }
    if first_only {
        report.failures.truncate(1);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    fn off(v: &[usize]) -> OffsetSet {
        OffsetSet::new(v.to_vec()).unwrap()
    }

    fn example_matrix() -> PolyMatrix {
        PolyMatrix::from_rows(vec![
            vec![p("a*d"), p("a*e*f"), p("a*e*g")],
            vec![p("b*d"), p("b*e*f"), p("b*e*g")],
            vec![p("0"), p("c*f"), p("c*g + h")],
        ])
    }

    fn order6() -> PolyMatrix {
        PolyMatrix::from_ints(&[
            &[1, 1, 1, 0, 0, 0],
            &[1, 1, 1, 0, 0, 0],
            &[0, 1, 1, 0, 0, 0],
            &[0, 0, 0, 1, 1, 0],
            &[0, 0, 0, 1, 1, 1],
            &[0, 0, 0, 1, 1, 1],
        ])
    }

    #[test]
    fn submatrix_examples() {
        let w = example_matrix();
        assert_eq!(w.submatrix(&set(&[1]), &set(&[2])).unwrap().entries(), &[p("a*e*f")]);
        assert_eq!(w.submatrix(&IndexSet::full(3), &IndexSet::full(3)).unwrap(), w);
        let s = order6().submatrix(&set(&[1, 4]), &set(&[1, 4])).unwrap();
        assert_eq!(s, PolyMatrix::identity(2));
    }

    #[test]
    fn submatrix_errors() {
        let w = example_matrix();
        assert!(matches!(
            w.submatrix(&set(&[1, 2]), &set(&[1])),
            Err(MatrixError::Cardinality { .. })
        ));
        assert!(matches!(
            w.submatrix(&set(&[4]), &set(&[1])),
            Err(MatrixError::Bounds { index: 4, limit: 3 })
        ));
        assert!(IndexSet::new(vec![2, 1]).is_err());
        assert!(IndexSet::new(vec![0, 1]).is_err());
    }

    #[test]
    fn minor_examples() {
        let w = example_matrix();
        assert_eq!(w.minor(&set(&[2, 3]), &set(&[2, 3])).unwrap(), p("b*e*f*h"));
        assert_eq!(w.minor(&set(&[3]), &set(&[3])).unwrap(), p("c*g + h"));
        assert!(order6().determinant().unwrap().is_zero());
    }

    #[test]
    fn minor_matrix_examples() {
        let t = order6().minor_matrix(&off(&[0, 3]), &off(&[0, 3])).unwrap();
        assert_eq!(t, PolyMatrix::from_ints(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 1]]));
        assert_eq!(t.determinant().unwrap(), Polynomial::from_int(-1));
        let w = example_matrix();
        assert_eq!(w.minor_matrix(&off(&[0]), &off(&[0])).unwrap(), w);
        assert!(matches!(
            w.minor_matrix(&off(&[0, 3]), &off(&[0, 1])),
            Err(MatrixError::Window { .. })
        ));
    }

    #[test]
    fn l_operator_examples() {
        assert_eq!(PolyMatrix::identity(2).l_operator().unwrap(), PolyMatrix::from_ints(&[&[1]]));
        let l = example_matrix().l_operator().unwrap();
        assert_eq!((l.rows(), l.cols()), (2, 2));
        assert!(l.get(0, 0).is_zero());
        let toeplitz = PolyMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(toeplitz.l_operator().unwrap(), PolyMatrix::from_ints(&[&[1]]));
        assert!(PolyMatrix::from_ints(&[&[1, 2]]).l_operator().is_err());
    }

    #[test]
    fn sweeps() {
        assert!(example_matrix().all_minors_subtraction_free(3).holds());
        let swap = PolyMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        let report = swap.all_minors_subtraction_free(2);
        let bad = report.first_failure().unwrap();
        assert_eq!((bad.rows.as_slice(), bad.cols.as_slice()), (&[1, 2][..], &[1, 2][..]));
        assert_eq!(report.checked, 5);
    }

    #[test]
    fn total_nonnegativity() {
        assert!(order6().is_totally_nonnegative(6).unwrap().holds());
        let t = order6().minor_matrix(&off(&[0, 3]), &off(&[0, 3])).unwrap();
        let report = t.is_totally_nonnegative(3).unwrap();
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].value, Polynomial::from_int(-1));
        assert!(PolyMatrix::identity(4).is_totally_nonnegative(4).unwrap().holds());
        assert!(matches!(
            example_matrix().is_totally_nonnegative(2),
            Err(MatrixError::NonConstant { row: 1, col: 1, .. })
        ));
    }

    #[test]
    fn matrix_text_format() {
        assert_eq!(
            example_matrix().to_string(),
            "a*d | a*e*f | a*e*g\nb*d | b*e*f | b*e*g\n0 | c*f | c*g + h\n"
        );
    }

    #[test]
    fn minors_of_rows_matches_minor() {
        let w = example_matrix();
        for (cols, value) in w.minors_of_rows(&[0, 2]) {
            let j = IndexSet::new(cols.iter().map(|c| c + 1).collect()).unwrap();
            assert_eq!(w.minor(&set(&[1, 3]), &j).unwrap(), value);
        }
    }
}
