//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use proptest::prelude::*;
use tnn_core::corpus::{self, RandomNetworkSpec};
use tnn_core::minors::{IndexSet, PolyMatrix};
use tnn_core::network::PlanarNetwork;
use tnn_core::polynomial::{Polynomial, Rational, Symbol};

pub const CORPUS_SEED: u64 = 20_100_101;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn p(s: &str) -> Polynomial {
    s.parse().unwrap()
}

pub fn set(v: &[usize]) -> IndexSet {
    IndexSet::new(v.to_vec()).unwrap()
}

/// Figure-3 network and 100 random networks of order at most 4 with at most
/// 12 edges.
pub fn corpus_networks() -> Vec<PlanarNetwork> {
    let spec = RandomNetworkSpec {
        min_order: 1,
        max_order: 4,
        max_interior: 6,
        max_edges: 12,
    };
    let mut nets = vec![corpus::figure3()];
    nets.extend(corpus::random_corpus(CORPUS_SEED, 100, spec));
    nets
}

/// All `(I, J)` with `|I| = |J| <= k` over `{1..n}`, including the empty pair.
pub fn index_pairs(n: usize, k: usize) -> Vec<(IndexSet, IndexSet)> {
    let mut out = Vec::new();
    for size in 0..=k.min(n) {
        for r in (1..=n).combinations(size) {
            for c in (1..=n).combinations(size) {
                out.push((IndexSet::new(r.clone()).unwrap(), IndexSet::new(c).unwrap()));
            }
        }
    }
    out
}

fn inversions(perm: &[usize]) -> usize {
    (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count()
}

/// Leibniz expansion over all permutations.
pub fn perm_det(m: &PolyMatrix) -> Polynomial {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut total = Polynomial::zero();
    for perm in (0..n).permutations(n) {
        let term: Polynomial = (0..n).map(|i| m.get(i, perm[i]).clone()).product();
        if inversions(&perm).is_multiple_of(2) {
            total = total + term;
        } else {
            total = total - term;
        }
    }
    total
}

pub fn perm_minor(m: &PolyMatrix, rows: &IndexSet, cols: &IndexSet) -> Polynomial {
    perm_det(&m.submatrix(rows, cols).unwrap())
}

/// A polynomial as a map from sorted exponent vectors `(name, exp)` to
/// coefficient strings, built only from the public term view.
pub fn term_map(p: &Polynomial) -> BTreeMap<Vec<(String, u32)>, Rational> {
    p.terms()
        .map(|(m, c)| {
            let key = m.factors().iter().map(|(s, e)| (s.name().to_string(), *e)).collect();
            (key, c.clone())
        })
        .collect()
}

/// Schoolbook product on exponent maps.
pub fn naive_product(a: &Polynomial, b: &Polynomial) -> BTreeMap<Vec<(String, u32)>, Rational> {
    let mut out: BTreeMap<Vec<(String, u32)>, Rational> = BTreeMap::new();
    for (ma, ca) in term_map(a) {
        for (mb, cb) in term_map(b) {
            let mut exps: BTreeMap<String, u32> = BTreeMap::new();
            for (s, e) in ma.iter().chain(&mb) {
                *exps.entry(s.clone()).or_default() += e;
            }
            *out.entry(exps.into_iter().collect()).or_insert_with(|| q(0)) += &ca * &cb;
        }
    }
    out.retain(|_, c| *c != q(0));
    out
}

pub const SYMBOLS: [&str; 4] = ["a", "b", "c", "x1"];

/// Small random polynomials over [`SYMBOLS`] with integer and half-integer
/// coefficients.
pub fn arb_poly() -> impl Strategy<Value = Polynomial> {
    let term = (-6i64..=6, 1i64..=2, proptest::collection::vec(0u32..=2, SYMBOLS.len()));
    proptest::collection::vec(term, 0..=4).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, d, exps)| {
                let mut t = Polynomial::constant(Rational::new(BigInt::from(c), BigInt::from(d)));
                for (s, e) in SYMBOLS.iter().zip(exps) {
                    t = t * Polynomial::var(s).pow(e);
                }
                t
            })
            .sum()
    })
}

pub fn arb_subtraction_free() -> impl Strategy<Value = Polynomial> {
    arb_poly().prop_map(|p| {
        p.terms()
            .map(|(m, c)| Polynomial::term(m.clone(), if *c < q(0) { -c.clone() } else { c.clone() }))
            .sum()
    })
}

pub fn arb_assignment() -> impl Strategy<Value = HashMap<Symbol, Rational>> {
    proptest::collection::vec((-5i64..=5, 1i64..=3), SYMBOLS.len()).prop_map(|vals| {
        SYMBOLS
            .iter()
            .zip(vals)
            .map(|(s, (n, d))| (Symbol::new(s).unwrap(), Rational::new(BigInt::from(n), BigInt::from(d))))
            .collect()
    })
}

pub fn arb_matrix(n: usize) -> impl Strategy<Value = PolyMatrix> {
    proptest::collection::vec(arb_poly(), n * n).prop_map(move |e| PolyMatrix::new(n, n, e))
}

pub mod families {
    use std::collections::HashSet;

    use itertools::Itertools;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use tnn_core::chains::{self, Color, ColoredNetwork, Terminal};
    use tnn_core::lindstrom::{self, PathFamily};
    use tnn_core::minors::{IndexSet, OffsetSet};
    use tnn_core::network::PlanarNetwork;

    pub struct Instance {
        pub net: PlanarNetwork,
        pub blue: PathFamily,
        pub red: PathFamily,
    }

    fn random_set<R: Rng>(rng: &mut R, n: usize, k: usize) -> IndexSet {
        let mut v: Vec<usize> = (1..=n).collect::<Vec<_>>().choose_multiple(rng, k).copied().collect();
        v.sort_unstable();
        IndexSet::new(v).unwrap()
    }

    fn random_disjoint<R: Rng>(rng: &mut R, net: &PlanarNetwork) -> Option<PathFamily> {
        let n = net.order();
        let k = rng.gen_range(1..=n);
        let fams = lindstrom::disjoint_families(net, &random_set(rng, n, k), &random_set(rng, n, k)).ok()?;
        fams.choose(rng).cloned()
    }

    /// Blue and red vertex-disjoint families with independent random
    /// sources and sinks.
    pub fn general(nets: &[PlanarNetwork], seed: u64, count: usize) -> Vec<Instance> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        while out.len() < count {
            let net = nets.choose(&mut rng).unwrap();
            if let (Some(blue), Some(red)) = (random_disjoint(&mut rng, net), random_disjoint(&mut rng, net)) {
                out.push(Instance {
                    net: net.clone(),
                    blue,
                    red,
                });
            }
        }
        out
    }

    /// Pairs behind the negative term of a 2x2 minor of a minor matrix:
    /// blue from `c1+A` to `d2+B`, red from `c2+A` to `d1+B`.
    pub fn crossing(nets: &[PlanarNetwork], seed: u64, count: usize) -> Vec<Instance> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        let mut attempts = 0;
        while out.len() < count {
            attempts += 1;
            assert!(attempts < 100_000, "corpus has too few crossing pairs");
            let net = nets.choose(&mut rng).unwrap();
            let n = net.order();
            if n < 2 {
                continue;
            }
            let k = rng.gen_range(1..n);
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut v: Vec<usize> = (0..n - 1).collect::<Vec<_>>().choose_multiple(rng, k).copied().collect();
                v.sort_unstable();
                OffsetSet::new(v).unwrap()
            };
            let (a, b) = (pick(&mut rng), pick(&mut rng));
            let (rows, cols) = (n - a.largest(), n - b.largest());
            let c: Vec<usize> = (1..=rows).collect::<Vec<_>>().choose_multiple(&mut rng, 2).copied().sorted().collect();
            let d: Vec<usize> = (1..=cols).collect::<Vec<_>>().choose_multiple(&mut rng, 2).copied().sorted().collect();
            let blues = lindstrom::disjoint_families(net, &IndexSet::shifted(c[0], &a), &IndexSet::shifted(d[1], &b)).unwrap();
            let reds = lindstrom::disjoint_families(net, &IndexSet::shifted(c[1], &a), &IndexSet::shifted(d[0], &b)).unwrap();
            if let (Some(blue), Some(red)) = (blues.choose(&mut rng), reds.choose(&mut rng)) {
                out.push(Instance {
                    net: net.clone(),
                    blue: blue.clone(),
                    red: red.clone(),
                });
            }
        }
        out
    }

    /// Chains recomputed by breadth-first search over the pairwise
    /// strongly-connected relation.
    pub fn oracle_partition(cn: &ColoredNetwork) -> Vec<Vec<usize>> {
        let n = cn.instances().len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut class = vec![start];
            let mut i = 0;
            while i < class.len() {
                let x = class[i];
                for y in 0..n {
                    if !seen[y] && chains::strongly_connected(cn, x, y) {
                        seen[y] = true;
                        class.push(y);
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            out.push(class);
        }
        out.sort();
        out
    }

    /// Whether the instances can be cyclically ordered so that neighbours are
    /// strongly connected, by walking alternate sides from the first one.
    pub fn oracle_closed_tour(cn: &ColoredNetwork, members: &[usize]) -> bool {
        if members.len() == 1 {
            return false;
        }
        let run = |i: usize| &cn.runs()[cn.instances()[i].run];
        let partner = |i: usize, origin: bool| -> Option<usize> {
            members.iter().copied().find(|&j| {
                j != i && if origin { run(j).from == run(i).from } else { run(j).to == run(i).to }
            })
        };
        let first = members[0];
        let (mut here, mut origin) = (first, true);
        let mut visited = HashSet::from([first]);
        loop {
            let Some(next) = partner(here, origin) else { return false };
            if next == first {
                return visited.len() == members.len();
            }
            if !visited.insert(next) {
                return false;
            }
            here = next;
            origin = !origin;
        }
    }

    fn counts(cn: &ColoredNetwork) -> (usize, usize) {
        (cn.blue().len(), cn.red().len())
    }

    /// Structural facts that hold for every colored network.
    pub fn check_general(inst: &Instance) -> Result<(), String> {
        let net = &inst.net;
        let cn = chains::build_colored(net, &inst.blue, &inst.red).map_err(|e| e.to_string())?;
        let mut ours: Vec<Vec<usize>> = cn.chains().iter().map(|c| c.instances.clone()).collect();
        ours.sort();
        if ours != oracle_partition(&cn) {
            return Err("chain partition differs from the oracle".into());
        }
        for chain in cn.chains() {
            let tag = format!("chain {}", chain.id);
            if chain.closed_tour != oracle_closed_tour(&cn, &chain.instances) {
                return Err(format!("{tag}: closed-tour flag differs from the oracle"));
            }
            if chain.closed_tour && !chain.is_even() {
                return Err(format!("{tag}: odd closed tour"));
            }
            if !chain.closed_tour && chain.endpoints.len() != 2 {
                return Err(format!("{tag}: {} endpoints", chain.endpoints.len()));
            }
            let (src, snk) = (cn.source_points(chain), cn.sink_points(chain));
            let by = |pts: &[(usize, Color)], c: Color| pts.iter().filter(|p| p.1 == c).count();
            if chain.is_even() {
                if by(&src, Color::Blue) != by(&src, Color::Red) || by(&snk, Color::Blue) != by(&snk, Color::Red) {
                    return Err(format!("{tag}: even chain with unbalanced terminal points"));
                }
                if !chain.closed_tour {
                    let (e0, e1) = (chain.endpoints[0], chain.endpoints[1]);
                    if e0.color == e1.color || e0.kind != e1.kind {
                        return Err(format!("{tag}: even chain endpoints {e0:?} {e1:?}"));
                    }
                }
            } else {
                if src.len() % 2 == 0 {
                    return Err(format!("{tag}: odd chain with an even number of source points"));
                }
                if snk.len() % 2 == 0 {
                    return Err(format!("{tag}: odd chain with an even number of sink points"));
                }
                let (e0, e1) = (chain.endpoints[0], chain.endpoints[1]);
                let kinds = [e0.kind, e1.kind];
                if e0.color != e1.color || !kinds.contains(&Terminal::Source) || !kinds.contains(&Terminal::Sink) {
                    return Err(format!("{tag}: odd chain endpoints {e0:?} {e1:?}"));
                }
            }
            let recolored = chains::recolor_chain(net, &cn, chain.id).map_err(|e| format!("{tag}: {e}"))?;
            if !recolored.blue().is_vertex_disjoint() || !recolored.red().is_vertex_disjoint() {
                return Err(format!("{tag}: recoloring breaks disjointness"));
            }
            if recolored.edge_multiset() != cn.edge_multiset() {
                return Err(format!("{tag}: recoloring changes the edge multiset"));
            }
            if (counts(&recolored) != counts(&cn)) != chain.has_source_and_sink_endpoint() {
                return Err(format!("{tag}: path counts change iff source-sink chain fails"));
            }
            if cn.is_evenly_chained() && !recolored.is_evenly_chained() {
                return Err(format!("{tag}: recoloring an evenly chained network is not evenly chained"));
            }
        }
        for (i, _) in cn.instances().iter().enumerate() {
            let chain = &cn.chains()[cn.chain_of(i)];
            let d = chains::depth(net, &cn, i);
            if chain.instances.iter().any(|&j| chains::depth(net, &cn, j) != d) {
                return Err(format!("chain {}: depth is not constant", chain.id));
            }
        }
        Ok(())
    }

    /// Crossing instances: evenly chained, and the sink swap is an
    /// involution exchanging sinks while fixing sources and weight.
    pub fn check_crossing(inst: &Instance) -> Result<(), String> {
        let net = &inst.net;
        let (b, r) = (&inst.blue, &inst.red);
        let hypothesis = b.len() == r.len()
            && b.paths.iter().zip(&r.paths).all(|(x, y)| x.source < y.source && x.sink > y.sink);
        if !hypothesis {
            return Err("instance does not satisfy the crossing hypothesis".into());
        }
        let cn = chains::build_colored(net, b, r).map_err(|e| e.to_string())?;
        if !cn.is_evenly_chained() {
            return Err("crossing families are not evenly chained".into());
        }
        let swapped = chains::sink_swap(net, &cn).map_err(|e| e.to_string())?;
        let sinks = |f: &PathFamily| f.paths.iter().map(|p| p.sink).collect::<Vec<_>>();
        let sources = |f: &PathFamily| f.paths.iter().map(|p| p.source).collect::<Vec<_>>();
        if sources(swapped.blue()) != sources(b) || sources(swapped.red()) != sources(r) {
            return Err("sink swap moves a source".into());
        }
        if sinks(swapped.blue()) != sinks(r) || sinks(swapped.red()) != sinks(b) {
            return Err("sink swap does not exchange the sinks".into());
        }
        if !swapped.is_evenly_chained() || swapped.edge_multiset() != cn.edge_multiset() {
            return Err("sink swap breaks even chaining or the edge multiset".into());
        }
        if swapped.weight(net) != cn.weight(net) {
            return Err("sink swap changes the weight".into());
        }
        let back = chains::sink_swap(net, &swapped).map_err(|e| e.to_string())?;
        if back.blue() != b || back.red() != r {
            return Err("sink swap is not an involution".into());
        }
        Ok(())
    }
}

pub mod tail_swap {
    use std::collections::{HashMap, HashSet};

    use tnn_core::lindstrom::{self, FamilyClass, PathFamily};
    use tnn_core::minors::IndexSet;
    use tnn_core::network::PlanarNetwork;
    use tnn_core::polynomial::Polynomial;

    use super::perm_minor;

    /// Checks every tail-swap fact for one `(I, J)` against the Leibniz minor.
    pub fn check_pair(net: &PlanarNetwork, rows: &IndexSet, cols: &IndexSet) -> Result<(), String> {
        let w = net.weight_matrix().map_err(|e| e.to_string())?;
        let fams = lindstrom::enumerate_families(net, rows, cols).map_err(|e| e.to_string())?;
        let index: HashMap<&PathFamily, usize> = fams.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut hit_plus = HashSet::new();
        let mut minus = 0;
        for f in &fams {
            if f.class() == FamilyClass::P0 {
                if f.perm.iter().enumerate().any(|(i, &p)| i != p) {
                    return Err(format!("I={rows} J={cols}: disjoint family with non-identity permutation"));
                }
                continue;
            }
            let g = lindstrom::tail_swap(net, f).map_err(|e| e.to_string())?;
            if g.sign != -f.sign || g.weight(net) != f.weight(net) {
                return Err(format!("I={rows} J={cols}: swap does not flip sign and keep weight"));
            }
            if &lindstrom::tail_swap(net, &g).map_err(|e| e.to_string())? != f {
                return Err(format!("I={rows} J={cols}: swap is not an involution"));
            }
            if !index.contains_key(&g) {
                return Err(format!("I={rows} J={cols}: swap leaves the enumerated families"));
            }
            if f.class() == FamilyClass::Pminus {
                minus += 1;
                if g.class() != FamilyClass::Pplus || !hit_plus.insert(index[&g]) {
                    return Err(format!("I={rows} J={cols}: swap is not a bijection onto P+"));
                }
            }
        }
        let plus = fams.iter().filter(|f| f.class() == FamilyClass::Pplus).count();
        if plus != minus {
            return Err(format!("I={rows} J={cols}: |P+| = {plus} but |P-| = {minus}"));
        }
        let oracle = perm_minor(&w, rows, cols);
        let signed: Polynomial = fams.iter().map(|f| f.signed_weight(net)).sum();
        if signed != oracle {
            return Err(format!("I={rows} J={cols}: signed family sum differs from the minor"));
        }
        if lindstrom::disjoint_sum(net, rows, cols).map_err(|e| e.to_string())? != oracle {
            return Err(format!("I={rows} J={cols}: disjoint sum differs from the minor"));
        }
        Ok(())
    }
}
