//! Built-in networks and seeded random generators for test corpora.

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::geometry::{self, Point};
use crate::logconcavity;
use crate::network::{NetworkBuilder, PlanarNetwork};
use crate::polynomial::{Polynomial, Rational};

const FIGURE3: &str = include_str!("../networks/figure3.net");
const ORDER6_UNIT: &str = include_str!("../networks/order6-unit.net");
const ORDER6_SYMBOLIC: &str = include_str!("../networks/order6-symbolic.net");
const PARALLEL_EDGES: &str = include_str!("../networks/parallel-edges.net");
const SINGLE_EDGE: &str = include_str!("../networks/single-edge.net");
const CROSSING_PAIR: &str = include_str!("../networks/crossing-pair.net");
const FIGURE2_INVALID: &str = include_str!("../networks/figure2-invalid.net");

/// Names accepted by [`builtin`], besides `sequence-m<M>-n<N>`.
pub const BUILTIN_NAMES: &[&str] = &[
    "figure3",
    "order6-unit",
    "order6-symbolic",
    "parallel-edges",
    "single-edge",
    "crossing-pair",
    "figure2-invalid",
];

/// Source text of a file-backed built-in network.
pub fn builtin_text(name: &str) -> Option<&'static str> {
    Some(match name.strip_suffix(".net").unwrap_or(name) {
        "figure3" => FIGURE3,
        "order6-unit" => ORDER6_UNIT,
        "order6-symbolic" => ORDER6_SYMBOLIC,
        "parallel-edges" => PARALLEL_EDGES,
        "single-edge" => SINGLE_EDGE,
        "crossing-pair" => CROSSING_PAIR,
        "figure2-invalid" => FIGURE2_INVALID,
        _ => return None,
    })
}

/// A built-in network by name. `sequence-m3-n5` is the symbolic sequence
/// network with 3 columns and order 5.
pub fn builtin(name: &str) -> Option<PlanarNetwork> {
    if let Some(text) = builtin_text(name) {
        return Some(PlanarNetwork::parse(text).expect("built-in networks parse"));
    }
    let rest = name.strip_prefix("sequence-m")?;
    let (m, n) = rest.split_once("-n")?;
    let (m, n): (usize, usize) = (m.parse().ok()?, n.parse().ok()?);
    (n >= 1).then(|| logconcavity::symbolic_sequence_network(m, n))
}

pub fn figure3() -> PlanarNetwork {
    builtin("figure3").unwrap()
}

pub fn order6_unit() -> PlanarNetwork {
    builtin("order6-unit").unwrap()
}

pub fn order6_symbolic() -> PlanarNetwork {
    builtin("order6-symbolic").unwrap()
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Parameters for [`random_network`].
#[derive(Debug, Clone, Copy)]
pub struct RandomNetworkSpec {
    pub min_order: usize,
    pub max_order: usize,
    pub max_interior: usize,
    pub max_edges: usize,
}

impl Default for RandomNetworkSpec {
    fn default() -> Self {
        RandomNetworkSpec {
            min_order: 1,
            max_order: 4,
            max_interior: 6,
            max_edges: 12,
        }
    }
}

/// A random valid network with one fresh symbol `w<k>` per edge.
///
/// Interior vertices get distinct integer x-coordinates and random half-integer
/// heights; candidate edges are inserted shortest-first (with jitter) whenever
/// they keep the drawing planar, and interior vertices left without an
/// incoming or outgoing edge are pruned.
pub fn random_network<R: Rng>(rng: &mut R, spec: RandomNetworkSpec) -> PlanarNetwork {
    loop {
        if let Some(net) = try_random_network(rng, spec) {
            return net;
        }
    }
}

fn try_random_network<R: Rng>(rng: &mut R, spec: RandomNetworkSpec) -> Option<PlanarNetwork> {
    let n = rng.gen_range(spec.min_order..=spec.max_order);
    let interior = rng.gen_range(1..=spec.max_interior.max(1));
    let height = 2 * (n as i64 - 1).max(1);

    // (id, position, kind) with kind 0 = source, 1 = interior, 2 = sink.
    let mut verts: Vec<(String, Point, u8)> = Vec::new();
    for i in 1..=n {
        let y = int(2 * (n - i) as i64);
        verts.push((format!("s{i}"), Point::new(int(0), y), 0));
    }
    for k in 1..=interior {
        let y = Rational::new(rng.gen_range(0..=2 * height).into(), 2.into());
        verts.push((format!("v{k}"), Point::new(int(k as i64), y), 1));
    }
    for j in 1..=n {
        let y = int(2 * (n - j) as i64);
        verts.push((format!("t{j}"), Point::new(int(interior as i64 + 1), y), 2));
    }

    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (a, (_, pa, ka)) in verts.iter().enumerate() {
        for (b, (_, pb, kb)) in verts.iter().enumerate() {
            if pa.x < pb.x && *ka != 2 && *kb != 0 {
                let span = (&pb.x - &pa.x).to_f64().unwrap_or(1.0);
                candidates.push((span * rng.gen_range(0.5..1.5), a, b));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));
    // Shuffle within near-equal keys a little more.
    candidates.chunks_mut(3).for_each(|c| c.shuffle(rng));

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &(_, a, b) in &candidates {
        if edges.len() >= spec.max_edges {
            break;
        }
        if !rng.gen_bool(0.7) {
            continue;
        }
        let (pa, pb) = (&verts[a].1, &verts[b].1);
        let through = verts
            .iter()
            .enumerate()
            .any(|(v, (_, pv, _))| v != a && v != b && geometry::on_segment(pa, pb, pv));
        if through {
            continue;
        }
        let blocked = edges.iter().any(|&(c, d)| {
            let shared = a == c || a == d || b == c || b == d;
            !shared && geometry::segments_cross(pa, pb, &verts[c].1, &verts[d].1)
        });
        if !blocked {
            edges.push((a, b));
        }
    }

    // Prune interior vertices that are dead ends until none remain.
    let mut alive = vec![true; verts.len()];
    loop {
        let mut changed = false;
        for v in 0..verts.len() {
            if !alive[v] || verts[v].2 != 1 {
                continue;
            }
            let has_in = edges.iter().any(|&(a, b)| b == v && alive[a]);
            let has_out = edges.iter().any(|&(a, b)| a == v && alive[b]);
            if !has_in || !has_out {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    edges.retain(|&(a, b)| alive[a] && alive[b]);
    if edges.is_empty() {
        return None;
    }

    let mut builder = NetworkBuilder::new(n);
    for (v, (id, p, _)) in verts.iter().enumerate() {
        if alive[v] {
            builder.vertex(id, p.x.clone(), p.y.clone()).ok()?;
        }
    }
    for i in 1..=n {
        builder.source(i, &format!("s{i}")).ok()?;
        builder.sink(i, &format!("t{i}")).ok()?;
    }
    for (k, &(a, b)) in edges.iter().enumerate() {
        builder
            .edge(&verts[a].0, &verts[b].0, Polynomial::var(&format!("w{}", k + 1)))
            .ok()?;
    }
    let net = builder.build().ok()?;
    net.validate().is_ok().then_some(net)
}

/// A seeded corpus of `count` random networks.
pub fn random_corpus(seed: u64, count: usize, spec: RandomNetworkSpec) -> Vec<PlanarNetwork> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_network(&mut rng, spec)).collect()
}
