//! Two-colored subnetworks built from a blue and a red vertex-disjoint path
//! family, their decomposition into chains, recoloring, depth, and the sink
//! swap that cancels the negative terms of a 2x2 minor of a minor matrix.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::geometry;
use crate::lindstrom::{self, permutation_sign, PathFamily};
use crate::minors::{IndexSet, MatrixError, OffsetSet};
use crate::network::{EdgeId, Path, PlanarNetwork, VertexId};
use crate::polynomial::{Polynomial, Rational};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn flipped(self) -> Color {
        match self {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Blue => "blue",
            Color::Red => "red",
        })
    }
}

/// A maximal run of network edges whose inner vertices are pass-through
/// vertices of the colored subnetwork.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    pub from: VertexId,
    pub to: VertexId,
    pub edges: Vec<EdgeId>,
}

/// One colored instance of a run. A run used by both families carries two
/// instances, one of each color, both flagged `dual`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColorEdge {
    pub run: usize,
    pub color: Color,
    /// 0-based index of the path in its color family.
    pub path: usize,
    pub dual: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Terminal {
    Source,
    Sink,
}

/// A free end of a chain: the vertex, which side of the network it is on,
/// and the color of the instance ending there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub vertex: VertexId,
    pub kind: Terminal,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub id: usize,
    /// Instance indices, increasing.
    pub instances: Vec<usize>,
    pub parity: Parity,
    pub closed_tour: bool,
    /// Empty for closed tours, otherwise exactly two.
    pub endpoints: Vec<Endpoint>,
}

impl Chain {
    pub fn is_even(&self) -> bool {
        self.parity == Parity::Even
    }

    pub fn has_source_and_sink_endpoint(&self) -> bool {
        let kinds: HashSet<Terminal> = self.endpoints.iter().map(|e| e.kind).collect();
        kinds.len() == 2
    }
}

#[derive(Debug, Clone)]
pub struct ColoredNetwork {
    blue: PathFamily,
    red: PathFamily,
    runs: Vec<Run>,
    instances: Vec<ColorEdge>,
    chain_of: Vec<usize>,
    chains: Vec<Chain>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut x = x;
        while self.0[x] != root {
            let next = self.0[x];
            self.0[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The union of `blue` and `red` with dual edges doubled and pass-through
/// vertices merged away.
pub fn build_colored(
    net: &PlanarNetwork,
    blue: &PathFamily,
    red: &PathFamily,
) -> Result<ColoredNetwork, Error> {
    if !blue.is_vertex_disjoint() {
        return Err(Error::Precondition("blue family is not vertex-disjoint".into()));
    }
    if !red.is_vertex_disjoint() {
        return Err(Error::Precondition("red family is not vertex-disjoint".into()));
    }
    // Per original edge: the blue and red path using it.
    let mut usage: Vec<[Option<usize>; 2]> = vec![[None, None]; net.edges().len()];
    for (slot, fam) in [blue, red].into_iter().enumerate() {
        for (pi, p) in fam.paths.iter().enumerate() {
            for &e in &p.edges {
                usage[e][slot] = Some(pi);
            }
        }
    }
    let used = |e: EdgeId| usage[e][0].is_some() || usage[e][1].is_some();
    let nv = net.vertices().len();
    let mut ins = vec![Vec::new(); nv];
    let mut outs = vec![Vec::new(); nv];
    for e in (0..net.edges().len()).filter(|&e| used(e)) {
        outs[net.edge(e).from].push(e);
        ins[net.edge(e).to].push(e);
    }
    let pass_through =
        |v: VertexId| !net.is_terminal(v) && ins[v].len() == 1 && outs[v].len() == 1;

    let mut runs = Vec::new();
    let mut instances = Vec::new();
    for e in 0..net.edges().len() {
        if !used(e) || pass_through(net.edge(e).from) {
            continue;
        }
        let mut edges = vec![e];
        let mut to = net.edge(e).to;
        while pass_through(to) {
            let next = outs[to][0];
            edges.push(next);
            to = net.edge(next).to;
        }
        let run = runs.len();
        let dual = usage[e][0].is_some() && usage[e][1].is_some();
        for (slot, color) in [(0, Color::Blue), (1, Color::Red)] {
            if let Some(path) = usage[e][slot] {
                instances.push(ColorEdge {
                    run,
                    color,
                    path,
                    dual,
                });
            }
        }
        runs.push(Run {
            from: net.edge(e).from,
            to,
            edges,
        });
    }
    let (chain_of, chains) = decompose(net, &runs, &instances);
    Ok(ColoredNetwork {
        blue: blue.clone(),
        red: red.clone(),
        runs,
        instances,
        chain_of,
        chains,
    })
}

/// Groups instances by (vertex, side), where side 0 collects instances
/// leaving the vertex and side 1 those entering it.
fn sides(runs: &[Run], instances: &[ColorEdge]) -> BTreeMap<(VertexId, u8), Vec<usize>> {
    let mut map: BTreeMap<(VertexId, u8), Vec<usize>> = BTreeMap::new();
    for (i, inst) in instances.iter().enumerate() {
        let run = &runs[inst.run];
        map.entry((run.from, 0)).or_default().push(i);
        map.entry((run.to, 1)).or_default().push(i);
    }
    map
}

fn decompose(net: &PlanarNetwork, runs: &[Run], instances: &[ColorEdge]) -> (Vec<usize>, Vec<Chain>) {
    let sides = sides(runs, instances);
    let mut dsu = Dsu::new(instances.len());
    for members in sides.values() {
        for w in members.windows(2) {
            dsu.union(w[0], w[1]);
        }
    }
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut chain_of = vec![0; instances.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, slot) in chain_of.iter_mut().enumerate() {
        let root = dsu.find(i);
        let id = *ids.entry(root).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[id].push(i);
        *slot = id;
    }
    let chains = members
        .into_iter()
        .enumerate()
        .map(|(id, instances_in)| {
            let mut endpoints = Vec::new();
            for &i in &instances_in {
                let run = &runs[instances[i].run];
                for (v, side, kind) in [(run.from, 0u8, Terminal::Source), (run.to, 1, Terminal::Sink)] {
                    if sides[&(v, side)].len() == 1 {
                        debug_assert!(if side == 0 {
                            net.source_index(v).is_some()
                        } else {
                            net.sink_index(v).is_some()
                        });
                        endpoints.push(Endpoint {
                            vertex: v,
                            kind,
                            color: instances[i].color,
                        });
                    }
                }
            }
            endpoints.sort();
            Chain {
                id,
                parity: if instances_in.len() % 2 == 0 {
                    Parity::Even
                } else {
                    Parity::Odd
                },
                closed_tour: endpoints.is_empty(),
                instances: instances_in,
                endpoints,
            }
        })
        .collect();
    (chain_of, chains)
}

/// Two distinct instances are strongly connected iff they leave a common
/// vertex or enter a common vertex; the two halves of a dual edge always are.
pub fn strongly_connected(cn: &ColoredNetwork, a: usize, b: usize) -> bool {
    if a == b {
        return false;
    }
    let (ra, rb) = (&cn.runs[cn.instances[a].run], &cn.runs[cn.instances[b].run]);
    ra.from == rb.from || ra.to == rb.to
}

impl ColoredNetwork {
    pub fn blue(&self) -> &PathFamily {
        &self.blue
    }

    pub fn red(&self) -> &PathFamily {
        &self.red
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn instances(&self) -> &[ColorEdge] {
        &self.instances
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn chain_of(&self, instance: usize) -> usize {
        self.chain_of[instance]
    }

    pub fn family(&self, color: Color) -> &PathFamily {
        match color {
            Color::Blue => &self.blue,
            Color::Red => &self.red,
        }
    }

    pub fn is_evenly_chained(&self) -> bool {
        self.chains.iter().all(Chain::is_even)
    }

    /// Multiset of underlying network edges, one entry per instance.
    pub fn edge_multiset(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .instances
            .iter()
            .flat_map(|i| self.runs[i.run].edges.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Product of the weights of both families.
    pub fn weight(&self, net: &PlanarNetwork) -> Polynomial {
        self.blue.weight(net) * self.red.weight(net)
    }

    /// Instances leaving a source vertex, as `(vertex, color)`.
    pub fn source_points(&self, chain: &Chain) -> Vec<(VertexId, Color)> {
        self.points(chain, Terminal::Source)
    }

    /// Instances entering a sink vertex, as `(vertex, color)`.
    pub fn sink_points(&self, chain: &Chain) -> Vec<(VertexId, Color)> {
        self.points(chain, Terminal::Sink)
    }

    fn points(&self, chain: &Chain, kind: Terminal) -> Vec<(VertexId, Color)> {
        chain
            .instances
            .iter()
            .filter_map(|&i| {
                let inst = self.instances[i];
                let run = &self.runs[inst.run];
                let v = if kind == Terminal::Source { run.from } else { run.to };
                let is_terminal = if kind == Terminal::Source {
                    self.blue.paths.iter().chain(&self.red.paths).any(|p| p.vertices[0] == v)
                } else {
                    self.blue
                        .paths
                        .iter()
                        .chain(&self.red.paths)
                        .any(|p| p.vertices.last() == Some(&v))
                };
                is_terminal.then_some((v, inst.color))
            })
            .collect()
    }

    /// One line per instance:
    /// `chain=<id> color=<blue|red> from=<v> to=<v> dual=<0|1>`.
    pub fn dump(&self, net: &PlanarNetwork) -> String {
        let mut rows: Vec<(usize, &str, &str, Color, bool)> = self
            .instances
            .iter()
            .enumerate()
            .map(|(i, inst)| {
                let run = &self.runs[inst.run];
                (
                    self.chain_of[i],
                    net.vertex(run.from).id.as_str(),
                    net.vertex(run.to).id.as_str(),
                    inst.color,
                    inst.dual,
                )
            })
            .collect();
        rows.sort();
        rows.iter()
            .map(|(c, from, to, color, dual)| {
                format!("chain={c} color={color} from={from} to={to} dual={}\n", u8::from(*dual))
            })
            .collect()
    }

    fn with_colors(&self, net: &PlanarNetwork, colors: &[Color]) -> Result<ColoredNetwork, Error> {
        let mut edges: [Vec<EdgeId>; 2] = [Vec::new(), Vec::new()];
        for (inst, &c) in self.instances.iter().zip(colors) {
            edges[(c == Color::Red) as usize].extend(&self.runs[inst.run].edges);
        }
        let blue = extract_family(net, &edges[0])?;
        let red = extract_family(net, &edges[1])?;
        build_colored(net, &blue, &red)
    }

    fn recolor_chains(&self, net: &PlanarNetwork, chains: &HashSet<usize>) -> Result<ColoredNetwork, Error> {
        let colors: Vec<Color> = self
            .instances
            .iter()
            .enumerate()
            .map(|(i, inst)| {
                if chains.contains(&self.chain_of[i]) {
                    inst.color.flipped()
                } else {
                    inst.color
                }
            })
            .collect();
        self.with_colors(net, &colors)
    }
}

/// Reassembles a vertex-disjoint path family from a set of edges: one path
/// from every source with an outgoing edge in the set.
fn extract_family(net: &PlanarNetwork, edges: &[EdgeId]) -> Result<PathFamily, Error> {
    let mut next: HashMap<VertexId, EdgeId> = HashMap::new();
    let mut entered: HashSet<VertexId> = HashSet::new();
    for &e in edges {
        let edge = net.edge(e);
        if next.insert(edge.from, e).is_some() || !entered.insert(edge.to) {
            return Err(Error::Precondition(format!(
                "edge set branches at {}",
                net.edge_label(e)
            )));
        }
    }
    let mut starts: Vec<(usize, VertexId)> = next
        .keys()
        .filter_map(|&v| net.source_index(v).map(|k| (k, v)))
        .collect();
    starts.sort();
    let mut paths = Vec::new();
    for &(k, s) in &starts {
        let mut path_edges = Vec::new();
        let mut vertices = vec![s];
        let mut here = s;
        while let Some(&e) = next.get(&here) {
            path_edges.push(e);
            here = net.edge(e).to;
            vertices.push(here);
        }
        let sink = net
            .sink_index(here)
            .ok_or_else(|| Error::Precondition(format!("path from s{k} stops before a sink")))?;
        paths.push(Path {
            source: k,
            sink,
            edges: path_edges,
            vertices,
        });
    }
    if paths.iter().map(|p| p.edges.len()).sum::<usize>() != edges.len() {
        return Err(Error::Precondition("edge set contains edges off every path".into()));
    }
    let rows = IndexSet::new(paths.iter().map(|p| p.source).collect())?;
    let mut sinks: Vec<usize> = paths.iter().map(|p| p.sink).collect();
    sinks.sort_unstable();
    let cols = IndexSet::new(sinks.clone())?;
    let perm: Vec<usize> = paths
        .iter()
        .map(|p| sinks.binary_search(&p.sink).unwrap())
        .collect();
    let sign = permutation_sign(&perm);
    Ok(PathFamily {
        rows,
        cols,
        paths,
        perm,
        sign,
    })
}

/// Flips the color of every instance in chain `chain`.
pub fn recolor_chain(net: &PlanarNetwork, cn: &ColoredNetwork, chain: usize) -> Result<ColoredNetwork, Error> {
    if chain >= cn.chains.len() {
        return Err(Error::Input(format!("no chain with id {chain}")));
    }
    cn.recolor_chains(net, &HashSet::from([chain]))
}

/// The height of `path` at abscissa `x`, extended horizontally past its
/// first and last vertex.
fn height_of(net: &PlanarNetwork, path: &Path, x: &Rational) -> Rational {
    let pos = |v: VertexId| &net.vertex(v).pos;
    let first = pos(path.vertices[0]);
    if x <= &first.x {
        return first.y.clone();
    }
    for w in path.vertices.windows(2) {
        let (p, q) = (pos(w[0]), pos(w[1]));
        if x <= &q.x {
            return geometry::y_at(p, q, x);
        }
    }
    pos(*path.vertices.last().unwrap()).y.clone()
}

/// `i-k-1` for an instance on the i-th blue path with `k` red paths strictly
/// above it, `-i+k` for the i-th red path with `k` blue paths on or above it.
/// Heights are compared on the vertical line through the midpoint of the
/// first segment of the instance's run.
pub fn depth(net: &PlanarNetwork, cn: &ColoredNetwork, instance: usize) -> i64 {
    let inst = cn.instances[instance];
    let e = net.edge(cn.runs[inst.run].edges[0]);
    let (p, q) = (&net.vertex(e.from).pos, &net.vertex(e.to).pos);
    let x = (&p.x + &q.x) / Rational::from_integer(2.into());
    let y = geometry::y_at(p, q, &x);
    let i = inst.path as i64 + 1;
    let other = cn.family(inst.color.flipped());
    let k = other
        .paths
        .iter()
        .filter(|path| {
            let h = height_of(net, path, &x);
            match inst.color {
                Color::Blue => h > y,
                Color::Red => h >= y,
            }
        })
        .count() as i64;
    match inst.color {
        Color::Blue => i - k - 1,
        Color::Red => -i + k,
    }
}

/// Recolors exactly the chains through a sink touched by a single instance,
/// exchanging the sink sets of the two families.
pub fn sink_swap(net: &PlanarNetwork, cn: &ColoredNetwork) -> Result<ColoredNetwork, Error> {
    if let Some(c) = cn.chains.iter().find(|c| !c.is_even()) {
        return Err(Error::Precondition(format!("chain {} is odd", c.id)));
    }
    if cn.blue.len() != cn.red.len() {
        return Err(Error::Precondition(format!(
            "families have {} blue and {} red paths",
            cn.blue.len(),
            cn.red.len()
        )));
    }
    let sides = sides(&cn.runs, &cn.instances);
    let forced: HashSet<usize> = sides
        .iter()
        .filter(|((v, side), members)| *side == 1 && members.len() == 1 && net.sink_index(*v).is_some())
        .map(|(_, members)| cn.chain_of[members[0]])
        .collect();
    cn.recolor_chains(net, &forced)
}

/// Outcome of the sink-swap cancellation for one 2x2 window of a minor
/// matrix.
#[derive(Debug, Clone)]
pub struct CancellationReport {
    /// Number of (blue, red) pairs behind the negative term.
    pub negative_pairs: usize,
    /// Number of pairs behind the positive term.
    pub positive_pairs: usize,
    pub failures: Vec<String>,
    pub injective: bool,
    /// `det T[C, D]` expanded from the minor matrix.
    pub determinant: Polynomial,
    /// Weight of the positive pairs not hit by the swap.
    pub residual: Polynomial,
}

impl CancellationReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
            && self.injective
            && self.residual == self.determinant
            && self.determinant.is_subtraction_free()
    }
}

type PairKey = (Vec<Path>, Vec<Path>);

/// Checks that the sink swap maps every pair behind `t_{c1,d2} t_{c2,d1}`
/// injectively and weight-preservingly into the pairs behind
/// `t_{c1,d1} t_{c2,d2}`, and that the unmatched remainder equals
/// `det T[C, D]`. `C` and `D` are 1-based rows and columns of `T`.
pub fn verify_2x2_cancellation(
    net: &PlanarNetwork,
    a: &OffsetSet,
    b: &OffsetSet,
    c: (usize, usize),
    d: (usize, usize),
) -> Result<CancellationReport, Error> {
    let w = net.weight_matrix()?;
    let t = w.minor_matrix(a, b)?;
    for (lo, hi, limit, axis) in [(c.0, c.1, t.rows(), "rows"), (d.0, d.1, t.cols(), "columns")] {
        if lo == 0 || lo >= hi || hi > limit {
            return Err(MatrixError::Window {
                offsets: vec![lo, hi],
                size: limit,
                axis,
            }
            .into());
        }
    }
    let rows = |i: usize| IndexSet::shifted(i, a);
    let cols = |j: usize| IndexSet::shifted(j, b);
    let blue_neg = lindstrom::disjoint_families(net, &rows(c.0), &cols(d.1))?;
    let red_neg = lindstrom::disjoint_families(net, &rows(c.1), &cols(d.0))?;
    let blue_pos = lindstrom::disjoint_families(net, &rows(c.0), &cols(d.0))?;
    let red_pos = lindstrom::disjoint_families(net, &rows(c.1), &cols(d.1))?;

    let pairs: Vec<(&PathFamily, &PathFamily)> = blue_neg
        .iter()
        .flat_map(|bf| red_neg.iter().map(move |rf| (bf, rf)))
        .collect();
    let outcomes: Vec<Result<PairKey, String>> = pairs
        .par_iter()
        .map(|&(bf, rf)| {
            let describe = |msg: &str| format!("pair {:?}/{:?}: {msg}", path_edges(bf), path_edges(rf));
            let cn = build_colored(net, bf, rf).map_err(|e| describe(&e.to_string()))?;
            if !cn.is_evenly_chained() {
                return Err(describe("not evenly chained"));
            }
            let swapped = sink_swap(net, &cn).map_err(|e| describe(&e.to_string()))?;
            let (nb, nr) = (swapped.blue(), swapped.red());
            let lands = nb.rows == rows(c.0)
                && nb.cols == cols(d.0)
                && nr.rows == rows(c.1)
                && nr.cols == cols(d.1)
                && nb.class() == lindstrom::FamilyClass::P0
                && nr.class() == lindstrom::FamilyClass::P0
                && nb.perm.iter().enumerate().all(|(i, &p)| i == p)
                && nr.perm.iter().enumerate().all(|(i, &p)| i == p);
            if !lands {
                return Err(describe("swap does not land on a positive pair"));
            }
            if swapped.weight(net) != cn.weight(net) {
                return Err(describe("swap changes the weight"));
            }
            Ok((nb.paths.clone(), nr.paths.clone()))
        })
        .collect();

    let mut failures = Vec::new();
    let mut images: HashSet<PairKey> = HashSet::new();
    let mut injective = true;
    for outcome in outcomes {
        match outcome {
            Ok(key) => injective &= images.insert(key),
            Err(msg) => failures.push(msg),
        }
    }
    let mut residual = Polynomial::zero();
    let mut positive_pairs = 0;
    for bf in &blue_pos {
        for rf in &red_pos {
            positive_pairs += 1;
            if !images.contains(&(bf.paths.clone(), rf.paths.clone())) {
                residual += &(bf.weight(net) * rf.weight(net));
            }
        }
    }
    let determinant = t.get(c.0 - 1, d.0 - 1) * t.get(c.1 - 1, d.1 - 1)
        - t.get(c.0 - 1, d.1 - 1) * t.get(c.1 - 1, d.0 - 1);
    Ok(CancellationReport {
        negative_pairs: pairs.len(),
        positive_pairs,
        failures,
        injective,
        determinant,
        residual,
    })
}

fn path_edges(f: &PathFamily) -> Vec<Vec<EdgeId>> {
    f.paths.iter().map(|p| p.edges.clone()).collect()
}
