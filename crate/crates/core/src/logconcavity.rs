//! Log-concavity iteration, Toeplitz matrices of sequences, columnar
//! sequence networks and the iterated minor-matrix harness.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::minors::{OffsetSet, PolyMatrix, SweepReport};
use crate::network::{NetworkBuilder, PlanarNetwork};
use crate::polynomial::{format_rational, Polynomial, Rational};
use crate::Error;

/// A finite sequence `a_0..a_m`, zero outside that range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequence(pub Vec<Rational>);

impl Sequence {
    pub fn from_ints(values: &[i64]) -> Self {
        Sequence(values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    /// `a_k`, with the zero-extension convention for out-of-range `k`.
    pub fn get(&self, k: isize) -> Rational {
        if k < 0 {
            return Rational::zero();
        }
        self.0.get(k as usize).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }

    pub fn first_negative(&self) -> Option<usize> {
        self.0.iter().position(|v| v.is_negative())
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(format_rational).join(", "))
    }
}

/// Positive reals `r_1..r_m`; `prod (x + r_i)` then has only negative roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSet(Vec<Rational>);

impl RootSet {
    pub fn new(roots: Vec<Rational>) -> Result<Self, Error> {
        if let Some(r) = roots.iter().find(|r| !r.is_positive()) {
            return Err(Error::Input(format!(
                "roots must be positive, got {}",
                format_rational(r)
            )));
        }
        Ok(RootSet(roots))
    }

    pub fn roots(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `b_n = a_n^2 - a_{n-1} a_{n+1}` for `n = 0..m`.
pub fn logconcave_step(s: &Sequence) -> Sequence {
    Sequence(
        (0..s.len() as isize)
            .map(|n| s.get(n) * s.get(n) - s.get(n - 1) * s.get(n + 1))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationReport {
    /// The input followed by each iterate actually computed.
    pub sequences: Vec<Sequence>,
    /// `(iteration, index)` of the first negative entry; iteration 0 is the
    /// input itself.
    pub failure: Option<(usize, usize)>,
}

impl IterationReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Iterates [`logconcave_step`] `iterations` times, stopping at the first
/// sequence with a negative entry.
pub fn is_infinitely_logconcave_upto(s: &Sequence, iterations: usize) -> IterationReport {
    let mut sequences = vec![s.clone()];
    if let Some(idx) = s.first_negative() {
        return IterationReport {
            sequences,
            failure: Some((0, idx)),
        };
    }
    let mut current = s.clone();
    for it in 1..=iterations {
        current = logconcave_step(&current);
        sequences.push(current.clone());
        if let Some(idx) = current.first_negative() {
            return IterationReport {
                sequences,
                failure: Some((it, idx)),
            };
        }
    }
    IterationReport {
        sequences,
        failure: None,
    }
}

/// Coefficients of `prod (x + r_i)` in increasing degree, so
/// `a_k = e_{m-k}(r)`.
pub fn coeffs_from_roots(roots: &RootSet) -> Sequence {
    let mut coeffs = vec![Rational::one()];
    for r in roots.roots() {
        let mut next = vec![Rational::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += c * r;
            next[k + 1] += c;
        }
        coeffs = next;
    }
    Sequence(coeffs)
}

/// The `n x n` upper-triangular Toeplitz matrix `w_{i,j} = a_{j-i}`.
pub fn toeplitz_matrix(s: &Sequence, n: usize) -> PolyMatrix {
    let polys: Vec<Polynomial> = s.0.iter().cloned().map(Polynomial::constant).collect();
    toeplitz_poly(&polys, n)
}

pub fn toeplitz_poly(a: &[Polynomial], n: usize) -> PolyMatrix {
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let entry = j
                .checked_sub(i)
                .and_then(|k| a.get(k))
                .cloned()
                .unwrap_or_default();
            entries.push(entry);
        }
    }
    PolyMatrix::new(n, n, entries)
}

/// Elementary symmetric polynomials `e_0..e_m` of the given polynomials.
pub fn elementary_symmetric(vars: &[Polynomial]) -> Vec<Polynomial> {
    let mut e = vec![Polynomial::one()];
    for x in vars {
        let mut next = e.clone();
        next.push(Polynomial::zero());
        for k in 0..e.len() {
            next[k + 1].add_product(&e[k], x);
        }
        e = next;
    }
    e
}

/// Column symbols `x1..xm` of the symbolic sequence network.
pub fn column_symbols(m: usize) -> Vec<Polynomial> {
    (1..=m).map(|c| Polynomial::var(&format!("x{c}"))).collect()
}

/// Columnar network of order `n`. Column `c` joins vertex column `c-1` to
/// `c` with a horizontal edge on every level and a descending diagonal from
/// level `l` to `l+1`. Vertices are sheared (`x = c(n+2) + l`) so no two
/// interior vertices share an x-coordinate.
fn columnar_network(
    n: usize,
    horizontal: &[Polynomial],
    diagonal: &[Polynomial],
) -> PlanarNetwork {
    debug_assert_eq!(horizontal.len(), diagonal.len());
    // A zero-column network is the identity; emit one plain column instead.
    let (horizontal, diagonal): (Vec<Polynomial>, Vec<Option<Polynomial>>) = if horizontal.is_empty() {
        (vec![Polynomial::one()], vec![None])
    } else {
        (horizontal.to_vec(), diagonal.iter().cloned().map(Some).collect())
    };
    let m = horizontal.len();
    let id = |c: usize, l: usize| {
        if c == 0 {
            format!("s{l}")
        } else if c == m {
            format!("t{l}")
        } else {
            format!("u{c}_{l}")
        }
    };
    let mut b = NetworkBuilder::new(n);
    for c in 0..=m {
        for l in 1..=n {
            let x = (c * (n + 2) + l) as i64;
            b.vertex_at(&id(c, l), x, -(l as i64)).expect("fresh vertex ids");
        }
    }
    for l in 1..=n {
        b.source(l, &id(0, l)).unwrap();
        b.sink(l, &id(m, l)).unwrap();
    }
    for c in 1..=m {
        for l in 1..=n {
            b.edge(&id(c - 1, l), &id(c, l), horizontal[c - 1].clone()).unwrap();
            if let Some(d) = &diagonal[c - 1] {
                if l < n {
                    b.edge(&id(c - 1, l), &id(c, l + 1), d.clone()).unwrap();
                }
            }
        }
    }
    b.build().expect("all terminals declared")
}

/// Network whose weight matrix is `toeplitz_matrix(coeffs_from_roots(r), n)`:
/// column `c` carries `r_c` on its horizontal edges and 1 on its diagonals.
pub fn sequence_network(roots: &RootSet, n: usize) -> Result<PlanarNetwork, Error> {
    if n == 0 {
        return Err(Error::Input("order must be at least 1".into()));
    }
    let horizontal: Vec<Polynomial> = roots.roots().iter().cloned().map(Polynomial::constant).collect();
    let diagonal = vec![Polynomial::one(); roots.len()];
    Ok(columnar_network(n, &horizontal, &diagonal))
}

/// Column `c` carries the symbol `x_c` on its diagonals and 1 on its
/// horizontals; the weight matrix is the Toeplitz matrix of
/// `e_k(x_1..x_m)`.
pub fn symbolic_sequence_network(m: usize, n: usize) -> PlanarNetwork {
    let diagonal = column_symbols(m);
    let horizontal = vec![Polynomial::one(); m];
    columnar_network(n.max(1), &horizontal, &diagonal)
}

#[derive(Debug, Clone)]
pub struct ConjectureReport {
    /// The matrix after all minor-matrix steps.
    pub matrix: PolyMatrix,
    pub sweep: SweepReport,
}

impl ConjectureReport {
    pub fn holds(&self) -> bool {
        self.sweep.holds()
    }
}

/// `L`: the consecutive 2x2 minor step.
pub fn l_step() -> (OffsetSet, OffsetSet) {
    let w = OffsetSet::new(vec![0, 1]).unwrap();
    (w.clone(), w)
}

/// Applies the minor-matrix steps to the weight matrix of `net` in order,
/// then sweeps every minor of the result up to `max_order`.
pub fn conjecture_check(
    net: &PlanarNetwork,
    steps: &[(OffsetSet, OffsetSet)],
    max_order: usize,
) -> Result<ConjectureReport, Error> {
    let mut matrix = net.weight_matrix()?;
    for (a, b) in steps {
        matrix = matrix.minor_matrix(a, b)?;
    }
    let sweep = matrix.all_minors_subtraction_free(max_order);
    Ok(ConjectureReport { matrix, sweep })
}
