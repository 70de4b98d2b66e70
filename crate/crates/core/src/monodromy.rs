//! Permutation monodromy of regular dessins of `G_n`.
//!
//! Convention: a dessin is a pair `(white, black)` of permutations of its
//! edges and the face permutation is `face = (white ∘ black)^{-1}`, so that
//! `white ∘ black ∘ face = 1`. A triangular action `(c1, c2, c3)` becomes the
//! dessin with white = left multiplication by `c1` and black = left
//! multiplication by `c2`. For the explicit permutations `η`, `σ` on `4n`
//! points, `σ` is white and `τ` is black.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::covering::{ActionCase, TriangularAction};
use crate::error::{Error, Result};
use crate::perm::{generated_group, is_transitive, Permutation};

/// `η = (1, ..., 2n)(2n+1, ..., 4n)` and
/// `σ = Π_{k=1}^{n} (k, 4n+1-k, n+k, 3n+1-k)` in `S_{4n}`.
pub fn explicit_permutations(n: usize) -> Result<(Permutation, Permutation)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    let eta = Permutation::from_cycles(
        4 * n,
        &[(1..=2 * n).collect(), (2 * n + 1..=4 * n).collect()],
    )?;
    let sigma_cycles: Vec<Vec<usize>> = (1..=n)
        .map(|k| vec![k, 4 * n + 1 - k, n + k, 3 * n + 1 - k])
        .collect();
    let sigma = Permutation::from_cycles(4 * n, &sigma_cycles)?;
    Ok((eta, sigma))
}

/// The black permutation `τ` paired with `σ`: `σ^3 η` for the `(0; 4, 4, 2n)`
/// dessin and `η^{n-2} σ` for the `(0; 4, 4, n)` one.
pub fn explicit_tau(n: usize, case: ActionCase) -> Result<Permutation> {
    let (eta, sigma) = explicit_permutations(n)?;
    match case {
        ActionCase::I => Ok(&sigma.pow(3) * &eta),
        ActionCase::II => {
            if n.is_multiple_of(2) {
                return Err(Error::Domain(format!("case II needs n odd, got {n}")));
            }
            Ok(&eta.pow(n as i64 - 2) * &sigma)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub n: usize,
    pub convention: String,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.relation.as_str())
            .collect()
    }
}

pub const CONVENTION: &str =
    "white = sigma, black = tau, face = (white o black)^-1; products compose right to left";

/// Checks every identity claimed for `η`, `σ`, `τ` by direct permutation
/// arithmetic.
pub fn verify_explicit_relations(n: usize) -> Result<RelationReport> {
    let (eta, sigma) = explicit_permutations(n)?;
    let deg = 4 * n;
    let id = Permutation::identity(deg);
    let ni = n as i64;
    let mut checks = Vec::new();
    let mut check = |relation: &str, holds: bool| {
        checks.push(RelationCheck {
            relation: relation.to_string(),
            holds,
        })
    };

    check("eta^(2n) = 1", eta.pow(2 * ni) == id);
    check(
        "sigma^-1 eta sigma = eta^-1",
        &(&sigma.inverse() * &eta) * &sigma == eta.inverse(),
    );
    let explicit: Vec<Vec<usize>> = (1..=n)
        .flat_map(|k| [vec![k, n + k], vec![2 * n + k, 3 * n + k]])
        .collect();
    let explicit = Permutation::from_cycles(deg, &explicit)?;
    check("eta^n = prod (k, n+k)(2n+k, 3n+k)", eta.pow(ni) == explicit);
    check("eta^n = sigma^2", eta.pow(ni) == sigma.pow(2));

    let group = generated_group(deg, &[eta.clone(), sigma.clone()]);
    check("|<eta, sigma>| = 4n", group.len() == 4 * n);
    // With |<η, σ>| = 4n, the defining relations make x -> η, y -> σ an
    // isomorphism from G_n.
    let relations = eta.pow(2 * ni) == id
        && sigma.pow(2) == eta.pow(ni)
        && &(&sigma * &eta) * &sigma.inverse() == eta.inverse();
    check(
        "x -> eta, y -> sigma is an isomorphism G_n -> <eta, sigma>",
        relations && group.len() == 4 * n,
    );

    let tau = explicit_tau(n, ActionCase::I)?;
    check(
        "tau = sigma^3 eta: tau sigma eta = 1",
        (&(&tau * &sigma) * &eta).is_identity(),
    );

    if n % 2 == 1 && n >= 3 {
        let eta2: Vec<Vec<usize>> = vec![
            (1..2 * n).step_by(2).collect(),
            (2..=2 * n).step_by(2).collect(),
            (2 * n + 1..4 * n).step_by(2).collect(),
            (2 * n + 2..=4 * n).step_by(2).collect(),
        ];
        let eta2 = Permutation::from_cycles(deg, &eta2)?;
        check(
            "eta^2 = (1,3,...,2n-1)(2,4,...,2n)(2n+1,...,4n-1)(2n+2,...,4n)",
            eta.pow(2) == eta2,
        );
        let tau2 = explicit_tau(n, ActionCase::II)?;
        check(
            "tau = eta^(n-2) sigma: tau sigma eta^2 = 1",
            (&(&tau2 * &sigma) * &eta.pow(2)).is_identity(),
        );
    }

    Ok(RelationReport {
        n,
        convention: CONVENTION.to_string(),
        checks,
    })
}

/// A connected dessin given by its white and black monodromy permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DessinMonodromy {
    white: Permutation,
    black: Permutation,
    face: Permutation,
}

impl DessinMonodromy {
    pub fn new(white: Permutation, black: Permutation) -> Result<Self> {
        if white.degree() != black.degree() {
            return Err(Error::InvalidParameter(
                "white and black permutations act on different edge sets".into(),
            ));
        }
        if !is_transitive(white.degree(), &[white.clone(), black.clone()]) {
            return Err(Error::InvalidParameter(
                "monodromy is not transitive".into(),
            ));
        }
        let face = white.compose(&black).inverse();
        Ok(DessinMonodromy { white, black, face })
    }

    pub fn edge_count(&self) -> usize {
        self.white.degree()
    }

    pub fn white(&self) -> &Permutation {
        &self.white
    }

    pub fn black(&self) -> &Permutation {
        &self.black
    }

    pub fn face(&self) -> &Permutation {
        &self.face
    }

    /// `#white + #black - #edges + #faces`.
    pub fn euler_characteristic(&self) -> i64 {
        self.white.cycle_count() as i64 + self.black.cycle_count() as i64 - self.edge_count() as i64
            + self.face.cycle_count() as i64
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    /// Cycle types of `(white, black, face)`.
    pub fn passport(&self) -> [Vec<usize>; 3] {
        [
            self.white.cycle_type(),
            self.black.cycle_type(),
            self.face.cycle_type(),
        ]
    }

    pub fn monodromy_group_order(&self) -> usize {
        generated_group(self.edge_count(), &[self.white.clone(), self.black.clone()]).len()
    }

    /// Number of permutations commuting with both white and black.
    ///
    /// By transitivity such a permutation is fixed by the image of one edge,
    /// so each candidate image is propagated along the monodromy and checked.
    pub fn automorphism_count(&self) -> usize {
        let deg = self.edge_count();
        let gens = [&self.white, &self.black];
        let mut count = 0;
        'target: for target in 0..deg {
            let mut map = vec![usize::MAX; deg];
            map[0] = target;
            let mut stack = vec![0usize];
            while let Some(p) = stack.pop() {
                for g in gens {
                    let (q, fq) = (g.image0(p), g.image0(map[p]));
                    if map[q] == usize::MAX {
                        map[q] = fq;
                        stack.push(q);
                    } else if map[q] != fq {
                        continue 'target;
                    }
                }
            }
            let mut hit = vec![false; deg];
            for &m in &map {
                if hit[m] {
                    continue 'target;
                }
                hit[m] = true;
            }
            count += 1;
        }
        count
    }
}

/// The regular dessin of a triangular action: edges are the group elements,
/// white and black are left multiplication by `c1` and `c2`.
pub fn regular_dessin(action: &TriangularAction) -> DessinMonodromy {
    let group = action.group();
    let [c1, c2, _] = action.cones();
    let left = |c: crate::group::GroupElement| {
        let images = group.elements().map(|g| (c * g).index() as u32).collect();
        Permutation::from_zero_based(images).expect("left multiplication is a bijection")
    };
    DessinMonodromy::new(left(c1), left(c2)).expect("a generating pair gives a transitive dessin")
}

/// The dessin `(σ, τ)` built from the explicit permutations on `4n` points.
pub fn explicit_dessin(n: usize, case: ActionCase) -> Result<DessinMonodromy> {
    let (_, sigma) = explicit_permutations(n)?;
    let tau = explicit_tau(n, case)?;
    DessinMonodromy::new(sigma, tau)
}

/// The embedded bipartite graph of a dessin: white vertices are the cycles of
/// white, black vertices the cycles of black, and edge `e` joins the white and
/// black cycles through `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteMapGraph {
    pub white_vertices: usize,
    pub black_vertices: usize,
    /// `(white vertex, black vertex)` for every edge, in edge order.
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteMapGraph {
    pub fn empty() -> Self {
        BipartiteMapGraph {
            white_vertices: 0,
            black_vertices: 0,
            edges: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.white_vertices + self.black_vertices
    }

    pub fn white_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.white_vertices];
        for &(w, _) in &self.edges {
            d[w] += 1;
        }
        d
    }

    pub fn black_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.black_vertices];
        for &(_, b) in &self.edges {
            d[b] += 1;
        }
        d
    }

    /// Uncoloured multigraph with white vertices first.
    pub fn to_multigraph(&self) -> MultiGraph {
        let mut g = MultiGraph::new(self.vertex_count());
        for &(w, b) in &self.edges {
            g.add_edge(w, self.white_vertices + b);
        }
        g
    }
}

pub fn graph_of(dessin: &DessinMonodromy) -> BipartiteMapGraph {
    let vertex_of = |p: &Permutation| {
        let mut v = vec![0usize; p.degree()];
        for (i, c) in p.cycles().iter().enumerate() {
            for &pt in c {
                v[pt - 1] = i;
            }
        }
        v
    };
    let (wv, bv) = (vertex_of(&dessin.white), vertex_of(&dessin.black));
    BipartiteMapGraph {
        white_vertices: dessin.white.cycle_count(),
        black_vertices: dessin.black.cycle_count(),
        edges: (0..dessin.edge_count()).map(|e| (wv[e], bv[e])).collect(),
    }
}

/// Undirected multigraph as a symmetric multiplicity matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    adjacency: Vec<Vec<u32>>,
}

impl MultiGraph {
    pub fn new(vertices: usize) -> Self {
        MultiGraph {
            adjacency: vec![vec![0; vertices]; vertices],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adjacency[u][v] += 1;
        if u != v {
            self.adjacency[v][u] += 1;
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        let mut total = 0;
        for u in 0..self.vertex_count() {
            for v in u..self.vertex_count() {
                total += self.adjacency[u][v] as usize;
            }
        }
        total
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.adjacency[v].iter().sum::<u32>() + self.adjacency[v][v]
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.adjacency[u][v]
    }

    /// The cycle on `m` vertices with every edge doubled (for `m = 2`, two
    /// vertices joined by four edges; for `m = 1`, a vertex with two loops).
    pub fn doubled_cycle(m: usize) -> Self {
        let mut g = MultiGraph::new(m);
        for i in 0..m {
            for _ in 0..2 {
                g.add_edge(i, (i + 1) % m);
            }
        }
        g
    }

    pub fn path(m: usize) -> Self {
        let mut g = MultiGraph::new(m);
        for i in 1..m {
            g.add_edge(i - 1, i);
        }
        g
    }

    /// Backtracking isomorphism test with degree pruning. Vertices of `self`
    /// are matched in breadth-first order so each new vertex is constrained by
    /// an already matched neighbour.
    pub fn is_isomorphic(&self, other: &MultiGraph) -> bool {
        let n = self.vertex_count();
        if n != other.vertex_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut d1: Vec<u32> = (0..n).map(|v| self.degree(v)).collect();
        let mut d2: Vec<u32> = (0..n).map(|v| other.degree(v)).collect();
        let (deg1, deg2) = (d1.clone(), d2.clone());
        d1.sort_unstable();
        d2.sort_unstable();
        if d1 != d2 {
            return false;
        }
        let order = self.bfs_order();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend(other, &order, 0, &deg1, &deg2, &mut map, &mut used)
    }

    fn bfs_order(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for (v, &mult) in self.adjacency[u].iter().enumerate() {
                    if mult > 0 && !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        order
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        other: &MultiGraph,
        order: &[usize],
        depth: usize,
        deg1: &[u32],
        deg2: &[u32],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let u = order[depth];
        for cand in 0..other.vertex_count() {
            if used[cand] || deg1[u] != deg2[cand] {
                continue;
            }
            if self.adjacency[u][u] != other.adjacency[cand][cand] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&w| self.adjacency[u][w] == other.adjacency[cand][map[w]]);
            if !consistent {
                continue;
            }
            map[u] = cand;
            used[cand] = true;
            if self.extend(other, order, depth + 1, deg1, deg2, map, used) {
                return true;
            }
            used[cand] = false;
            map[u] = usize::MAX;
        }
        false
    }
}

/// Whether the underlying multigraph is the doubled `m`-cycle.
pub fn is_doubled_cycle(graph: &BipartiteMapGraph, m: usize) -> bool {
    if m == 0 {
        return graph.vertex_count() == 0;
    }
    graph
        .to_multigraph()
        .is_isomorphic(&MultiGraph::doubled_cycle(m))
}

/// Graphviz DOT text for the bipartite graph. Output depends only on the
/// graph, so equal graphs give byte-identical text.
pub fn export_dot(graph: &BipartiteMapGraph) -> String {
    let mut out = String::from("graph dessin {\n");
    for w in 0..graph.white_vertices {
        writeln!(
            out,
            "  w{} [shape=circle, style=filled, fillcolor=white];",
            w + 1
        )
        .unwrap();
    }
    for b in 0..graph.black_vertices {
        writeln!(
            out,
            "  b{} [shape=circle, style=filled, fillcolor=black];",
            b + 1
        )
        .unwrap();
    }
    for &(w, b) in &graph.edges {
        writeln!(out, "  w{} -- b{};", w + 1, b + 1).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Multiplicities of adjacent vertex pairs, used in reports.
pub fn edge_multiplicities(graph: &BipartiteMapGraph) -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for &e in &graph.edges {
        *m.entry(e).or_insert(0) += 1;
    }
    m
}
