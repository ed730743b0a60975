//! Bipartite graph codes: the incidence matrix of a bipartite graph is
//! `N`-injective exactly when the girth is at least `2N + 2`.

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use mwmatching::Matching;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::bits::{BitMatrix, BitVector};
use crate::decode::Decoder;
use crate::error::{parse_err, Error, Result};

/// Simple bipartite graph with 1-based vertices and an ordered edge list.
/// Edge `e` is stored as `(left endpoint, right endpoint)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    right: Vec<bool>,
    edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    /// Graph with explicit sides (`true` = right). Edges may be given in
    /// either orientation.
    pub fn new(right: Vec<bool>, edges: &[(usize, usize)]) -> Result<Self> {
        let q = right.len();
        let mut out = Vec::with_capacity(edges.len());
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > q {
                    return Err(Error::IndexOutOfRange { index: w, len: q });
                }
            }
            let (l, r) = match (right[u - 1], right[v - 1]) {
                (false, true) => (u, v),
                (true, false) => (v, u),
                _ => {
                    return Err(Error::InvalidGraph(format!(
                        "edge ({u},{v}) joins vertices on the same side"
                    )))
                }
            };
            if !seen.insert((l, r)) {
                return Err(Error::InvalidGraph(format!("parallel edge ({u},{v})")));
            }
            out.push((l, r));
        }
        Ok(BipartiteGraph { right, edges: out })
    }

    /// Left vertices `1..=left`, right vertices `left+1..=left+right`.
    pub fn left_first(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let sides = (0..left + right).map(|v| v >= left).collect();
        Self::new(sides, edges)
    }

    /// Two-colors the graph by breadth-first search; the smallest vertex of
    /// every component goes left.
    pub fn from_edges(q: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); q];
        for &(u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > q {
                    return Err(Error::IndexOutOfRange { index: w, len: q });
                }
            }
            adj[u - 1].push(v - 1);
            adj[v - 1].push(u - 1);
        }
        let mut color: Vec<Option<bool>> = vec![None; q];
        for root in 0..q {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(false);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].expect("colored on push");
                for &w in &adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => {
                            return Err(Error::InvalidGraph(format!(
                                "odd cycle through vertices {} and {}",
                                u + 1,
                                w + 1
                            )))
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Self::new(
            color.into_iter().map(|c| c.expect("all colored")).collect(),
            edges,
        )
    }

    /// Graph whose incidence matrix is `a`; every column must have weight two.
    pub fn from_incidence(a: &BitMatrix) -> Result<Self> {
        let mut edges = Vec::with_capacity(a.ncols());
        for j in 1..=a.ncols() {
            let ends: Vec<usize> = a.column(j).ones().collect();
            if ends.len() != 2 {
                return Err(Error::InvalidGraph(format!(
                    "column {j} has weight {}",
                    ends.len()
                )));
            }
            edges.push((ends[0], ends[1]));
        }
        Self::from_edges(a.nrows(), &edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.right.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_right(&self, v: usize) -> bool {
        self.right[v - 1]
    }

    pub fn left_vertices(&self) -> Vec<usize> {
        (1..=self.num_vertices())
            .filter(|&v| !self.is_right(v))
            .collect()
    }

    pub fn right_vertices(&self) -> Vec<usize> {
        (1..=self.num_vertices())
            .filter(|&v| self.is_right(v))
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(l, r)| l == v || r == v)
            .count()
    }

    /// `Q x M` incidence matrix; column `e` marks both endpoints of edge `e`.
    pub fn incidence_matrix(&self) -> BitMatrix {
        let q = self.num_vertices();
        let columns: Vec<BitVector> = self
            .edges
            .iter()
            .map(|&(l, r)| BitVector::from_positions(q, [l, r]))
            .collect();
        BitMatrix::from_columns(&columns, q).expect("columns have length Q")
    }

    /// 0-based adjacency lists of `(neighbor, edge index)`.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for (e, &(l, r)) in self.edges.iter().enumerate() {
            adj[l - 1].push((r - 1, e));
            adj[r - 1].push((l - 1, e));
        }
        adj
    }

    /// Length of the shortest cycle, `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        girth(self)
    }

    /// Same graph with left vertices relabeled `1..=left` and right vertices
    /// after them, both in their original order.
    pub fn relabel_left_first(&self) -> BipartiteGraph {
        let mut map = vec![0; self.num_vertices()];
        for (next, v) in (1..).zip(
            self.left_vertices()
                .into_iter()
                .chain(self.right_vertices()),
        ) {
            map[v - 1] = next;
        }
        let left = self.left_vertices().len();
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(l, r)| (map[l - 1], map[r - 1]))
            .collect();
        BipartiteGraph::left_first(left, self.num_vertices() - left, &edges)
            .expect("relabeling preserves validity")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        crate::error::read_file(path)?
            .parse()
            .map_err(|e: crate::Error| e.in_file(path))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::error::write_file(path.as_ref(), self.to_string())
    }
}

/// Header `Q_left Q_right M`, then one line `u v` per edge with `u` indexing
/// the left side and `v` the right side, each counted from 1.
impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let left = self.left_vertices();
        let right = self.right_vertices();
        let local = |side: &[usize], v: usize| {
            side.iter().position(|&w| w == v).expect("vertex on side") + 1
        };
        writeln!(f, "{} {} {}", left.len(), right.len(), self.edges.len())?;
        for &(l, r) in &self.edges {
            writeln!(f, "{} {}", local(&left, l), local(&right, r))?;
        }
        Ok(())
    }
}

impl FromStr for BipartiteGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let nums = parse_usizes(hl, header)?;
        if nums.len() != 3 {
            return Err(parse_err(hl, "header must be `Q_left Q_right M`"));
        }
        let (left, right, m) = (nums[0], nums[1], nums[2]);
        let mut edges = Vec::with_capacity(m);
        for (line, text) in lines {
            let uv = parse_usizes(line, text)?;
            if uv.len() != 2 {
                return Err(parse_err(line, "edge lines must be `u v`"));
            }
            if uv[0] == 0 || uv[0] > left || uv[1] == 0 || uv[1] > right {
                return Err(parse_err(line, "edge endpoint out of range"));
            }
            edges.push((uv[0], left + uv[1]));
        }
        if edges.len() != m {
            return Err(parse_err(
                0,
                format!("header declares {m} edges, found {}", edges.len()),
            ));
        }
        BipartiteGraph::left_first(left, right, &edges)
    }
}

fn parse_usizes(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| parse_err(line, format!("{t:?}: {e}")))
        })
        .collect()
}

/// Exact girth from a breadth-first search rooted at every vertex.
pub fn girth(g: &BipartiteGraph) -> Option<usize> {
    let adj = g.adjacency();
    let q = g.num_vertices();
    (0..q)
        .into_par_iter()
        .filter_map(|root| {
            let mut dist = vec![usize::MAX; q];
            let mut via = vec![usize::MAX; q];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            let mut best: Option<usize> = None;
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] >= b {
                        break;
                    }
                }
                for &(w, e) in &adj[u] {
                    if e == via[u] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = e;
                        queue.push_back(w);
                    } else {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
            best
        })
        .min()
}

/// Whether the girth certifies `N`-injectivity of the incidence matrix.
pub fn injectivity_from_girth(g: &BipartiteGraph, n: usize) -> bool {
    g.girth().is_none_or(|len| len >= 2 * n + 2)
}

/// Even cycle of length `L` whose antipodal vertices `j`, `j + L/2` are
/// joined by chords of `N` edges each.
///
/// The result has `L + N L / 2` edges, `L + (N - 1) L / 2` vertices and
/// girth `2N + 2`. It is bipartite only when `N` and `L/2` have the same
/// parity; other inputs are rejected.
pub fn cycle_chord_graph(l: usize, n: usize) -> Result<BipartiteGraph> {
    if n == 0 {
        return Err(Error::InvalidGraph("chords need at least one edge".into()));
    }
    if !l.is_multiple_of(2) || l < 2 * n + 2 {
        return Err(Error::InvalidGraph(format!(
            "cycle length {l} must be even and at least {}",
            2 * n + 2
        )));
    }
    if (l / 2) % 2 != n % 2 {
        return Err(Error::InvalidGraph(format!(
            "cycle length {l} with {n}-edge chords closes an odd cycle of length {}",
            l / 2 + n
        )));
    }
    let mut edges = Vec::with_capacity(l + n * l / 2);
    for j in 1..=l {
        edges.push((j, j % l + 1));
    }
    let mut next = l + 1;
    for j in 1..=l / 2 {
        let mut prev = j;
        for _ in 0..n - 1 {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, j + l / 2));
    }
    BipartiteGraph::from_edges(next - 1, &edges)
}

const FAR: u32 = u32::MAX / 4;

fn greedy_trial<R: Rng>(left: usize, right: usize, n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let q = left + right;
    let mut dist = vec![FAR; q * q];
    for v in 0..q {
        dist[v * q + v] = 0;
    }
    let threshold = (2 * n + 1) as u32;
    let mut edges = Vec::new();
    let mut candidates = Vec::with_capacity(left * right);
    loop {
        candidates.clear();
        for u in 0..left {
            for v in left..q {
                let d = dist[u * q + v];
                if d >= threshold && d != 1 {
                    candidates.push((u, v));
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        let (u, v) = candidates[rng.random_range(0..candidates.len())];
        edges.push((u + 1, v + 1));
        let du: Vec<u32> = (0..q).map(|a| dist[a * q + u]).collect();
        let dv: Vec<u32> = (0..q).map(|a| dist[a * q + v]).collect();
        for a in 0..q {
            for b in 0..q {
                let through = (du[a] + 1 + dv[b]).min(dv[a] + 1 + du[b]);
                if through < dist[a * q + b] {
                    dist[a * q + b] = through;
                }
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// Best of `trials` randomized greedy constructions on `Q` vertices split
/// `ceil(Q/2)` left and `floor(Q/2)` right. Each trial adds uniformly random
/// edges that keep the girth at least `2N + 2` until none remain, so every
/// output is maximal. Trial `i` draws from stream `i` of a generator seeded
/// with `seed`; ties go to the lowest trial index.
pub fn greedy_high_girth(q: usize, n: usize, trials: usize, seed: u64) -> Result<BipartiteGraph> {
    if q < 2 {
        return Err(Error::InvalidGraph(format!(
            "need at least 2 vertices, got {q}"
        )));
    }
    let left = q.div_ceil(2);
    let right = q / 2;
    let best = (0..trials.max(1))
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            (trial, greedy_trial(left, right, n, &mut rng))
        })
        .reduce_with(|a, b| {
            if b.1.len() > a.1.len() || (b.1.len() == a.1.len() && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .expect("at least one trial");
    BipartiteGraph::left_first(left, right, &best.1)
}

/// Whether no left-right pair can be joined without creating a cycle
/// shorter than `2N + 2`.
pub fn is_maximal(g: &BipartiteGraph, n: usize) -> bool {
    let dist = all_pairs_distances(g);
    let q = g.num_vertices();
    for u in g.left_vertices() {
        for v in g.right_vertices() {
            let d = dist[(u - 1) * q + (v - 1)];
            if d != 1 && d as usize > 2 * n {
                return false;
            }
        }
    }
    true
}

fn all_pairs_distances(g: &BipartiteGraph) -> Vec<u32> {
    let (dist, _) = shortest_path_trees(g);
    dist
}

/// Row-major `Q x Q` distances and, per root, the edge through which each
/// vertex is first reached (`usize::MAX` for the root and unreachable ones).
fn shortest_path_trees(g: &BipartiteGraph) -> (Vec<u32>, Vec<usize>) {
    let q = g.num_vertices();
    let adj = g.adjacency();
    let mut dist = vec![FAR; q * q];
    let mut via = vec![usize::MAX; q * q];
    for root in 0..q {
        let d = &mut dist[root * q..(root + 1) * q];
        let p = &mut via[root * q..(root + 1) * q];
        d[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u] {
                if d[w] == FAR {
                    d[w] = d[u] + 1;
                    p[w] = e;
                    queue.push_back(w);
                }
            }
        }
    }
    (dist, via)
}

/// Decoder for graph codes: the unique weight-`N` preimage of a vertex set
/// `s` is its minimum-weight preimage, a union of shortest paths pairing
/// up the vertices of `s`. Pairs are chosen by minimum-weight perfect
/// matching under the breadth-first distance.
#[derive(Clone, Debug)]
pub struct GraphDecoder {
    graph: BipartiteGraph,
    n: usize,
    dist: Vec<u32>,
    via: Vec<usize>,
}

impl GraphDecoder {
    /// Requires girth at least `2N + 2`.
    pub fn new(graph: BipartiteGraph, n: usize) -> Result<Self> {
        if !injectivity_from_girth(&graph, n) {
            return Err(Error::Precondition(format!(
                "girth {:?} is below {} needed for {n} particles",
                graph.girth(),
                2 * n + 2
            )));
        }
        let (dist, via) = shortest_path_trees(&graph);
        Ok(GraphDecoder {
            graph,
            n,
            dist,
            via,
        })
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let q = self.graph.num_vertices();
        let mut edges = Vec::new();
        let mut v = to;
        while v != from {
            let e = self.via[from * q + v];
            edges.push(e);
            let (l, r) = self.graph.edges[e];
            v = if l - 1 == v { r - 1 } else { l - 1 };
        }
        edges
    }

    /// Minimum-weight preimage of `s`, or `None` when `s` has none.
    pub fn min_weight_preimage(&self, s: &BitVector) -> Option<BitVector> {
        let q = self.graph.num_vertices();
        let m = self.graph.num_edges();
        if s.len() != q {
            return None;
        }
        let verts: Vec<usize> = s.ones().map(|v| v - 1).collect();
        if !verts.len().is_multiple_of(2) {
            return None;
        }
        if verts.is_empty() {
            return Some(BitVector::zeros(m));
        }
        let scale = q as i32 + 1;
        let mut pairs = Vec::new();
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let d = self.dist[verts[i] * q + verts[j]];
                if d != FAR {
                    pairs.push((i, j, scale - d as i32));
                }
            }
        }
        if pairs.is_empty() {
            return None;
        }
        let mates = Matching::new(pairs).max_cardinality().solve();
        let mut x = BitVector::zeros(m);
        for (i, &v) in verts.iter().enumerate() {
            let mate = *mates.get(i)?;
            if mate == mwmatching::SENTINEL {
                return None;
            }
            if i < mate {
                for e in self.path(v, verts[mate]) {
                    x.flip(e + 1);
                }
            }
        }
        Some(x)
    }
}

impl Decoder for GraphDecoder {
    fn decode(&self, s: &BitVector) -> Option<BitVector> {
        let q = self.graph.num_vertices();
        // each pair of syndrome vertices needs at least one edge
        if s.len() != q || s.weight() > 2 * self.n {
            return None;
        }
        self.min_weight_preimage(s).filter(|x| x.weight() == self.n)
    }

    fn particles(&self) -> usize {
        self.n
    }
}

/// One-shot graph decode; builds the shortest-path tables each call.
pub fn graph_decode(g: &BipartiteGraph, s: &BitVector, n: usize) -> Result<Option<BitVector>> {
    Ok(GraphDecoder::new(g.clone(), n)?.decode(s))
}

/// Parity-check matrix text: header `Q M`, then `Q` rows of `0`/`1`
/// (whitespace between digits is ignored).
pub fn format_pcm(a: &BitMatrix) -> String {
    let mut out = format!("{} {}\n", a.nrows(), a.ncols());
    for row in a.rows() {
        out.push_str(&row.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_pcm(text: &str) -> Result<BitMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let dims = parse_usizes(hl, header)?;
    if dims.len() != 2 {
        return Err(parse_err(hl, "header must be `Q M`"));
    }
    let (q, m) = (dims[0], dims[1]);
    let mut rows = Vec::with_capacity(q);
    for (line, text) in lines {
        let digits: String = text.split_whitespace().collect();
        let row: BitVector = digits
            .parse()
            .map_err(|_| parse_err(line, "rows must contain only 0 and 1"))?;
        if row.len() != m {
            return Err(parse_err(
                line,
                format!("row has {} entries, expected {m}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != q {
        return Err(parse_err(
            0,
            format!("header declares {q} rows, found {}", rows.len()),
        ));
    }
    BitMatrix::from_rows(rows, m)
}

pub fn read_pcm(path: impl AsRef<Path>) -> Result<BitMatrix> {
    let path = path.as_ref();
    parse_pcm(&crate::error::read_file(path)?).map_err(|e| e.in_file(path))
}

pub fn write_pcm(a: &BitMatrix, path: impl AsRef<Path>) -> Result<()> {
    crate::error::write_file(path.as_ref(), format_pcm(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::combinations;
    use crate::decode::{brute_force_decode, is_n_injective};

    /// Minimum weight of a nonzero kernel vector of the incidence matrix,
    /// which is the girth.
    fn girth_by_kernel(g: &BipartiteGraph) -> Option<usize> {
        let a = g.incidence_matrix();
        let cols = a.columns();
        (1..=g.num_edges()).find(|&k| {
            combinations(g.num_edges(), k).any(|c| {
                let mut s = BitVector::zeros(a.nrows());
                for j in c {
                    s ^= &cols[j - 1];
                }
                s.is_zero()
            })
        })
    }

    fn four_cycle() -> BipartiteGraph {
        BipartiteGraph::left_first(2, 2, &[(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap()
    }

    #[test]
    fn small_girths() {
        assert_eq!(four_cycle().girth(), Some(4));
        let tree = BipartiteGraph::left_first(2, 3, &[(1, 3), (1, 4), (2, 4), (2, 5)]).unwrap();
        assert_eq!(tree.girth(), None);
        assert!(injectivity_from_girth(&tree, 2));
        let empty = BipartiteGraph::left_first(1, 1, &[]).unwrap();
        assert_eq!(empty.girth(), None);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(BipartiteGraph::left_first(2, 2, &[(1, 2)]).is_err());
        assert!(BipartiteGraph::left_first(2, 2, &[(1, 3), (3, 1)]).is_err());
        assert!(BipartiteGraph::from_edges(3, &[(1, 2), (2, 3), (3, 1)]).is_err());
    }

    #[test]
    fn example_graph() {
        let g = cycle_chord_graph(8, 2).unwrap();
        assert_eq!((g.num_edges(), g.num_vertices()), (16, 12));
        assert_eq!(g.girth(), Some(6));
        assert_eq!(girth_by_kernel(&g), Some(6));
        assert!(injectivity_from_girth(&g, 2));
        assert!(!injectivity_from_girth(&g, 3));
        let a = g.incidence_matrix();
        assert!(is_n_injective(&a, 2).unwrap());
        assert!(!is_n_injective(&a, 3).unwrap());
        assert!((1..=16).all(|j| a.column_weight(j) == 2));
    }

    #[test]
    fn cycle_chord_family() {
        let g = cycle_chord_graph(10, 3).unwrap();
        assert_eq!(
            (g.num_edges(), g.num_vertices(), g.girth()),
            (25, 20, Some(8))
        );
        for n in 1..=4 {
            for l in (2 * n + 2..=24).step_by(2) {
                match cycle_chord_graph(l, n) {
                    Ok(g) => {
                        assert_eq!(g.num_edges(), l + n * l / 2);
                        assert_eq!(g.num_vertices(), l + (n - 1) * l / 2);
                        assert_eq!(g.girth(), Some(2 * n + 2));
                        let m = g.num_edges();
                        assert!((1 + n) * (2 + n) <= m);
                        assert_eq!(g.num_vertices() * (2 + n), m * (1 + n));
                    }
                    Err(_) => assert_ne!((l / 2) % 2, n % 2),
                }
            }
        }
        assert!(cycle_chord_graph(8, 3).is_err());
        assert!(cycle_chord_graph(9, 3).is_err());
    }

    #[test]
    fn girth_matches_kernel_oracle() {
        for seed in 0..6 {
            let g = greedy_high_girth(8, 1 + seed as usize % 2, 3, seed).unwrap();
            assert_eq!(g.girth(), girth_by_kernel(&g));
        }
        assert_eq!(girth_by_kernel(&four_cycle()), Some(4));
    }

    #[test]
    fn greedy_is_maximal_and_reproducible() {
        for n in 1..=3 {
            let g = greedy_high_girth(10, n, 20, 5).unwrap();
            assert!(injectivity_from_girth(&g, n));
            assert!(is_maximal(&g, n));
            if g.num_edges() <= 24 {
                assert!(is_n_injective(&g.incidence_matrix(), n).unwrap());
            }
            assert_eq!(g, greedy_high_girth(10, n, 20, 5).unwrap());
        }
        let full = greedy_high_girth(6, 0, 1, 0).unwrap();
        assert_eq!(full.num_edges(), 9);
    }

    #[test]
    fn decoder_matches_brute_force() {
        let g = cycle_chord_graph(8, 2).unwrap();
        let a = g.incidence_matrix();
        let dec = GraphDecoder::new(g.clone(), 2).unwrap();
        for idx in 0..1u64 << 12 {
            let s = BitVector::from_index(12, idx);
            assert_eq!(
                dec.decode(&s),
                brute_force_decode(&a, 2, &s).unwrap(),
                "syndrome {s}"
            );
        }
    }

    #[test]
    fn decoder_edge_cases() {
        let g = cycle_chord_graph(8, 2).unwrap();
        let one = GraphDecoder::new(g.clone(), 1).unwrap();
        let (l, r) = g.edges()[4];
        let s = BitVector::from_positions(12, [l, r]);
        assert_eq!(one.decode(&s), Some(BitVector::unit(16, 5)));
        assert_eq!(one.decode(&BitVector::zeros(12)), None);
        assert!(GraphDecoder::new(g, 3).is_err());
    }

    #[test]
    fn text_round_trips() {
        let g = cycle_chord_graph(8, 2).unwrap();
        let h: BipartiteGraph = g.to_string().parse().unwrap();
        assert_eq!(h, g.relabel_left_first());
        assert_eq!(h.girth(), Some(6));
        let a = g.incidence_matrix();
        assert_eq!(parse_pcm(&format_pcm(&a)).unwrap(), a);
        assert!(parse_pcm("2 2\n01\n").is_err());
        assert!("1 1 1\n1 2\n".parse::<BipartiteGraph>().is_err());
    }
}
