mod common;

use common::*;
use itertools::Itertools;
use proptest::prelude::*;
use tnn_core::corpus;
use tnn_core::logconcavity::{toeplitz_matrix, Sequence};
use tnn_core::minors::{IndexSet, MatrixError, OffsetSet, PolyMatrix};
use tnn_core::polynomial::Polynomial;

fn swap_rows(m: &PolyMatrix, a: usize, b: usize) -> PolyMatrix {
    let mut rows: Vec<Vec<Polynomial>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    rows.swap(a, b);
    PolyMatrix::from_rows(rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinant_matches_leibniz(n in 0usize..=5, seed in any::<u64>()) {
        let m = deterministic_matrix(n, seed);
        prop_assert_eq!(m.determinant().unwrap(), perm_det(&m));
    }

    #[test]
    fn alternating(m in arb_matrix(3), a in 0usize..3, b in 0usize..3) {
        prop_assume!(a != b);
        let d = m.determinant().unwrap();
        prop_assert_eq!(swap_rows(&m, a, b).determinant().unwrap(), -d);
        let mut rows: Vec<Vec<Polynomial>> = (0..3).map(|r| m.row(r).to_vec()).collect();
        rows[b] = rows[a].clone();
        prop_assert!(PolyMatrix::from_rows(rows).determinant().unwrap().is_zero());
    }

    #[test]
    fn multilinear_in_first_row(m in arb_matrix(3), x in arb_poly(), s in arb_poly()) {
        let mut rows: Vec<Vec<Polynomial>> = (0..3).map(|r| m.row(r).to_vec()).collect();
        let extra: Vec<Polynomial> = vec![x.clone(), s.clone(), &x * &s];
        let mut summed = rows.clone();
        summed[0] = rows[0].iter().zip(&extra).map(|(u, v)| u + v).collect();
        let lhs = PolyMatrix::from_rows(summed).determinant().unwrap();
        let base = m.determinant().unwrap();
        rows[0] = extra;
        let other = PolyMatrix::from_rows(rows).determinant().unwrap();
        prop_assert_eq!(lhs, base + other);
    }
}

fn deterministic_matrix(n: usize, seed: u64) -> PolyMatrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let names = ["a", "b", "c", "d"];
    let entries = (0..n * n)
        .map(|_| {
            (0..rng.gen_range(0..3))
                .map(|_| {
                    let c = Polynomial::from_int(rng.gen_range(-3..=3));
                    let v = Polynomial::var(names[rng.gen_range(0..names.len())]);
                    c * v.pow(rng.gen_range(0..3))
                })
                .sum()
        })
        .collect();
    PolyMatrix::new(n, n, entries)
}

fn figure3_w() -> PolyMatrix {
    corpus::figure3().weight_matrix().unwrap()
}

#[test]
fn submatrix_examples() {
    let w = figure3_w();
    assert_eq!(w.submatrix(&set(&[1]), &set(&[2])).unwrap(), PolyMatrix::from_rows(vec![vec![p("a*e*f")]]));
    assert_eq!(w.submatrix(&IndexSet::full(3), &IndexSet::full(3)).unwrap(), w);
    let w6 = corpus::order6_unit().weight_matrix().unwrap();
    assert_eq!(
        w6.submatrix(&set(&[1, 4]), &set(&[1, 4])).unwrap(),
        PolyMatrix::from_ints(&[&[1, 0], &[0, 1]])
    );
    assert!(matches!(w.submatrix(&set(&[1, 4]), &set(&[1, 2])), Err(MatrixError::Bounds { .. })));
    assert!(matches!(w.submatrix(&set(&[1]), &set(&[1, 2])), Err(MatrixError::Cardinality { .. })));
}

#[test]
fn minor_examples() {
    let w = figure3_w();
    let oracle = perm_minor(&w, &set(&[2, 3]), &set(&[2, 3]));
    assert_eq!(oracle, p("b*e*f*h"));
    assert_eq!(w.minor(&set(&[2, 3]), &set(&[2, 3])).unwrap(), oracle);
    for (i, j) in (1..=3).cartesian_product(1..=3) {
        assert_eq!(&w.minor(&set(&[i]), &set(&[j])).unwrap(), w.entry(i, j));
    }
    let w6 = corpus::order6_unit().weight_matrix().unwrap();
    assert!(w6.minor(&IndexSet::full(6), &IndexSet::full(6)).unwrap().is_zero());
    assert!(perm_det(&w6).is_zero());
}

#[test]
fn minor_matrix_examples() {
    let w6 = corpus::order6_unit().weight_matrix().unwrap();
    let a = OffsetSet::new(vec![0, 3]).unwrap();
    let t = w6.minor_matrix(&a, &a).unwrap();
    assert_eq!(t, PolyMatrix::from_ints(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 1]]));
    assert_eq!(perm_det(&t), Polynomial::from_int(-1));
    let zero = OffsetSet::new(vec![0]).unwrap();
    assert_eq!(w6.minor_matrix(&zero, &zero).unwrap(), w6);
    let bad = OffsetSet::new(vec![0, 6]).unwrap();
    assert!(w6.minor_matrix(&bad, &bad).is_err());

    let seq = Sequence::from_ints(&[1, 4, 6, 4, 1]);
    let t = toeplitz_matrix(&seq, 5).l_operator().unwrap();
    assert_eq!((t.rows(), t.cols()), (4, 4));
    for i in 1..=4 {
        for j in 1..=4 {
            let a = |k: isize| Polynomial::constant(seq.get(k));
            let d = j as isize - i as isize;
            // 2x2 window [[a_d, a_{d+1}], [a_{d-1}, a_d]] expanded by Leibniz.
            let window = PolyMatrix::from_rows(vec![vec![a(d), a(d + 1)], vec![a(d - 1), a(d)]]);
            assert_eq!(t.entry(i, j), &perm_det(&window), "entry ({i},{j})");
        }
    }
    assert_eq!(t.row(0).iter().map(|x| x.to_string()).join(" "), "1 10 20 10");
}

#[test]
fn l_operator_examples() {
    assert_eq!(PolyMatrix::identity(2).l_operator().unwrap(), PolyMatrix::from_ints(&[&[1]]));
    let t = figure3_w().l_operator().unwrap();
    assert!(t.entry(1, 1).is_zero());
    let w = figure3_w();
    assert_eq!(t.entry(2, 2), &perm_minor(&w, &set(&[2, 3]), &set(&[2, 3])));
    let lt = toeplitz_matrix(&Sequence::from_ints(&[1, 1]), 2).l_operator().unwrap();
    assert_eq!(lt, PolyMatrix::from_ints(&[&[1]]));
    assert!(PolyMatrix::identity(1).l_operator().is_err());
}

#[test]
fn sweeps() {
    assert!(figure3_w().all_minors_subtraction_free(3).holds());
    let swap = PolyMatrix::from_ints(&[&[0, 1], &[1, 0]]);
    let r = swap.all_minors_subtraction_free(2);
    let f = r.first_failure().unwrap();
    assert_eq!((f.rows.clone(), f.cols.clone()), (set(&[1, 2]), set(&[1, 2])));
    assert!(corpus::order6_symbolic().weight_matrix().unwrap().all_minors_subtraction_free(6).holds());
}

#[test]
fn total_nonnegativity() {
    let w6 = corpus::order6_unit().weight_matrix().unwrap();
    assert!(w6.is_totally_nonnegative(6).unwrap().holds());
    let a = OffsetSet::new(vec![0, 3]).unwrap();
    let t = w6.minor_matrix(&a, &a).unwrap();
    let r = t.is_totally_nonnegative(3).unwrap();
    assert_eq!(r.first_failure().unwrap().value, Polynomial::from_int(-1));
    assert!(PolyMatrix::identity(4).is_totally_nonnegative(4).unwrap().holds());
    assert!(figure3_w().is_totally_nonnegative(2).is_err());
}

#[test]
fn lindstrom_property_on_corpus() {
    for net in corpus_networks() {
        let w = net.weight_matrix().unwrap();
        let r = w.all_minors_subtraction_free(net.order());
        assert!(r.holds(), "{}\n{:?}", net.to_text(), r.first_failure());
    }
}

#[test]
fn two_by_two_minors_of_minor_matrices() {
    for net in corpus_networks() {
        let w = net.weight_matrix().unwrap();
        let n = net.order();
        for a in OffsetSet::all_up_to(n, 3) {
            for b in OffsetSet::all_up_to(n, 3).into_iter().filter(|b| b.len() == a.len()) {
                let Ok(t) = w.minor_matrix(&a, &b) else { continue };
                let r = t.minor_violations(2);
                assert!(r.holds(), "A={a} B={b}: {:?}\n{}", r.first_failure(), net.to_text());
            }
        }
    }
}
