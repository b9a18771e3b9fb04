//! Undirected conflict graphs, seeded family generators, and the plain-text
//! edge-list format.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored as `(u, v)` pairs with `u < v`, sorted lexicographically
/// and deduplicated; self-loops are rejected. The position of an edge in
/// that order is its *edge index*. Indices are assigned once at
/// construction, so the index of an edge never changes when the engines
/// restrict attention to a subset of still-live vertices.
///
/// Isolated vertices are legal; a vertex of degree zero is a sink under
/// every orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    incidence: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph, normalizing edge endpoint order and validating that
    /// endpoints are in range and that there are no self-loops or duplicates.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Graph> {
        let mut normalized: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {a}")));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let mut incidence = vec![Vec::new(); n];
        for (i, &(u, v)) in normalized.iter().enumerate() {
            incidence[u as usize].push(i as u32);
            incidence[v as usize].push(i as u32);
        }
        Ok(Graph {
            n,
            edges: normalized,
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical (lexicographic) order; the slice index is the
    /// edge index used by coin schedules and edge-backed resource classes.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (u32, u32) {
        self.edges[index]
    }

    /// Canonical index of edge `{u, v}`, if present.
    pub fn edge_index(&self, u: u32, v: u32) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.incidence[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.incidence[v].len()).max().unwrap_or(0)
    }

    /// Indices of the edges incident to `v`.
    pub fn incident_edges(&self, v: u32) -> &[u32] {
        &self.incidence[v as usize]
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.incidence[v as usize].iter().map(move |&e| {
            let (a, b) = self.edges[e as usize];
            if a == v {
                b
            } else {
                a
            }
        })
    }

    /// Serializes to the plain-text edge list: a `n m` header line followed
    /// by one `u v` line per edge with `u < v`, in canonical order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the edge-list format produced by [`Graph::to_edge_list`].
    /// Rejects out-of-range endpoints, self-loops, duplicates, `u >= v`
    /// lines, and edge counts that disagree with the header.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::EdgeList("empty input".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = parse_field(it.next(), "vertex count", 1)?;
        let m: usize = parse_field(it.next(), "edge count", 1)?;
        if it.next().is_some() {
            return Err(Error::EdgeList("trailing tokens on header line".into()));
        }
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| Error::EdgeList(format!("expected {m} edge lines")))?;
            let mut it = line.split_whitespace();
            let u: u32 = parse_field(it.next(), "edge endpoint", lineno + 1)?;
            let v: u32 = parse_field(it.next(), "edge endpoint", lineno + 1)?;
            if it.next().is_some() {
                return Err(Error::EdgeList(format!("trailing tokens on line {}", lineno + 1)));
            }
            if u >= v {
                return Err(Error::EdgeList(format!(
                    "line {}: endpoints must satisfy u < v, got {u} {v}",
                    lineno + 1
                )));
            }
            edges.push((u, v));
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(Error::EdgeList(format!(
                "unexpected content on line {}",
                lineno + 1
            )));
        }
        Graph::new(n, edges).map_err(|e| Error::EdgeList(e.to_string()))
    }
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, what: &str, line: usize) -> Result<T> {
    tok.ok_or_else(|| Error::EdgeList(format!("line {line}: missing {what}")))?
        .parse()
        .map_err(|_| Error::EdgeList(format!("line {line}: bad {what}")))
}

/// Graph family tag plus its family-specific parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GraphClass {
    /// Path `0-1-...-(n-1)`.
    Path,
    /// Star with center 0 and leaves `1..n`.
    Star,
    /// Uniform random labeled tree.
    Tree,
    /// Cycle `0-1-...-(n-1)-0`; requires `n >= 3`.
    Cycle,
    /// Complete graph.
    Complete,
    /// Random graph with maximum degree at most `k`.
    BoundedDegree { k: u32 },
    /// Each pair is an edge independently with probability `p`.
    Gnp { p: f64 },
    /// Degrees drawn from the normalized power law `d^-a`, wired by a
    /// configuration model with self-loops and duplicate pairs discarded.
    PowerLaw { a: f64 },
}

impl GraphClass {
    pub fn name(&self) -> &'static str {
        match self {
            GraphClass::Path => "path",
            GraphClass::Star => "star",
            GraphClass::Tree => "tree",
            GraphClass::Cycle => "cycle",
            GraphClass::Complete => "complete",
            GraphClass::BoundedDegree { .. } => "bounded_degree",
            GraphClass::Gnp { .. } => "gnp",
            GraphClass::PowerLaw { .. } => "power_law",
        }
    }

    /// Family parameters as a compact `key=value` string, empty for the
    /// parameterless families.
    pub fn params_string(&self) -> String {
        match self {
            GraphClass::BoundedDegree { k } => format!("k={k}"),
            GraphClass::Gnp { p } => format!("p={p}"),
            GraphClass::PowerLaw { a } => format!("a={a}"),
            _ => String::new(),
        }
    }
}

/// A generator request: family, vertex count, and seed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphClassSpec {
    #[serde(flatten)]
    pub class: GraphClass,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl GraphClassSpec {
    pub fn new(class: GraphClass, n: usize, seed: u64) -> GraphClassSpec {
        GraphClassSpec { class, n, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        match &self.class {
            GraphClass::Cycle if self.n < 3 => {
                Err(Error::InvalidParameter("cycle requires n >= 3".into()))
            }
            GraphClass::BoundedDegree { k } if *k < 1 => {
                Err(Error::InvalidParameter("bounded_degree requires k >= 1".into()))
            }
            GraphClass::Gnp { p } if !(0.0..=1.0).contains(p) => {
                Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")))
            }
            GraphClass::PowerLaw { a } if !a.is_finite() || *a < 2.0 => {
                Err(Error::InvalidParameter(format!("a must be at least 2, got {a}")))
            }
            _ => Ok(()),
        }
    }
}

/// Generates the requested graph. Pure in the spec: the same spec always
/// yields the same graph, and distinct seeds draw from independent streams.
pub fn generate(spec: &GraphClassSpec) -> Result<Graph> {
    spec.validate()?;
    let n = spec.n;
    match spec.class {
        GraphClass::Path => Graph::new(n, path_edges(n)),
        GraphClass::Star => Graph::new(n, (1..n as u32).map(|v| (0, v))),
        GraphClass::Cycle => {
            let mut edges = path_edges(n);
            edges.push((0, n as u32 - 1));
            Graph::new(n, edges)
        }
        GraphClass::Complete => {
            let mut edges = Vec::with_capacity(n * (n - 1) / 2);
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    edges.push((u, v));
                }
            }
            Graph::new(n, edges)
        }
        GraphClass::Tree => generate_tree(n, spec.seed),
        GraphClass::BoundedDegree { k } => generate_bounded_degree(n, k as usize, spec.seed),
        GraphClass::Gnp { p } => generate_gnp(n, p, spec.seed),
        GraphClass::PowerLaw { a } => generate_power_law(n, a, spec.seed),
    }
}

fn path_edges(n: usize) -> Vec<(u32, u32)> {
    (0..n.saturating_sub(1) as u32).map(|i| (i, i + 1)).collect()
}

fn gen_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Uniform random labeled tree via a random Pruefer sequence.
fn generate_tree(n: usize, seed: u64) -> Result<Graph> {
    if n <= 2 {
        return Graph::new(n, path_edges(n));
    }
    let mut rng = gen_rng(seed);
    let seq: Vec<u32> = (0..n - 2).map(|_| rng.gen_range(0..n as u32)).collect();
    let mut degree = vec![1u32; n];
    for &s in &seq {
        degree[s as usize] += 1;
    }
    // Standard decoding: repeatedly attach the smallest current leaf to the
    // next sequence element.
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<u32>> = (0..n as u32)
        .filter(|&v| degree[v as usize] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in &seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf, s));
        degree[s as usize] -= 1;
        if degree[s as usize] == 1 {
            leaves.push(std::cmp::Reverse(s));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    Graph::new(n, edges)
}

/// Proposes uniform random pairs and keeps those that leave every endpoint
/// with degree below `k`, until `floor(n*k/2)` edges are placed or the
/// proposal budget runs out. The output always satisfies max degree <= k.
fn generate_bounded_degree(n: usize, k: usize, seed: u64) -> Result<Graph> {
    let mut rng = gen_rng(seed);
    let target = (n * k / 2).min(n * (n - 1) / 2);
    let budget = 40 * n * k;
    let mut degree = vec![0usize; n];
    let mut present = HashSet::new();
    let mut edges = Vec::new();
    let mut proposals = 0usize;
    while edges.len() < target && proposals < budget {
        proposals += 1;
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u == v {
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if degree[pair.0 as usize] >= k || degree[pair.1 as usize] >= k {
            continue;
        }
        if !present.insert(pair) {
            continue;
        }
        degree[pair.0 as usize] += 1;
        degree[pair.1 as usize] += 1;
        edges.push(pair);
    }
    Graph::new(n, edges)
}

fn generate_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = gen_rng(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Configuration-model power law: i.i.d. degrees from `d^-a / delta(a)` over
/// `1..=n-1`, one degree bumped if the stub count is odd, stubs shuffled and
/// paired, self-loops and duplicate pairs discarded.
fn generate_power_law(n: usize, a: f64, seed: u64) -> Result<Graph> {
    if n == 1 {
        return Graph::new(1, []);
    }
    let mut rng = gen_rng(seed);
    // Cumulative weights of the truncated law, sampled by binary search.
    let mut cumulative = Vec::with_capacity(n - 1);
    let mut total = 0.0;
    for d in 1..n {
        total += (d as f64).powf(-a);
        cumulative.push(total);
    }
    let mut degree: Vec<usize> = (0..n)
        .map(|_| {
            let x = rng.gen::<f64>() * total;
            let idx = cumulative.partition_point(|&c| c < x);
            idx.min(n - 2) + 1
        })
        .collect();
    if degree.iter().sum::<usize>() % 2 == 1 {
        let v = (0..n)
            .find(|&v| degree[v] < n - 1)
            .expect("an odd stub total implies some degree below n-1");
        degree[v] += 1;
    }
    let mut stubs = Vec::with_capacity(degree.iter().sum());
    for (v, &d) in degree.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v as u32, d));
    }
    stubs.shuffle(&mut rng);
    let mut present = HashSet::new();
    let mut edges = Vec::new();
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if present.insert(key) {
            edges.push(key);
        }
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(class: GraphClass, n: usize, seed: u64) -> GraphClassSpec {
        GraphClassSpec::new(class, n, seed)
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn canonical_edge_order_is_lexicographic() {
        let g = Graph::new(4, [(2, 3), (1, 0), (3, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 3), (2, 3)]);
        assert_eq!(g.edge_index(3, 1), Some(1));
        assert_eq!(g.degree(3), 2);
    }

    #[test]
    fn star_center_has_full_degree() {
        let g = generate(&spec(GraphClass::Star, 5, 0)).unwrap();
        assert_eq!(g.degree(0), 4);
        assert!((1..5).all(|v| g.degree(v) == 1));
    }

    #[test]
    fn path_edge_list_bytes() {
        let g = generate(&spec(GraphClass::Path, 3, 0)).unwrap();
        assert_eq!(g.to_edge_list(), "3 2\n0 1\n1 2\n");
    }

    #[test]
    fn edge_list_round_trip() {
        let g = generate(&spec(GraphClass::Gnp { p: 0.4 }, 9, 11)).unwrap();
        let parsed = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(g, parsed);
    }

    #[test]
    fn edge_list_rejects_malformed_input() {
        assert!(Graph::from_edge_list("").is_err());
        assert!(Graph::from_edge_list("2 1\n1 0\n").is_err()); // u >= v
        assert!(Graph::from_edge_list("2 2\n0 1\n0 1\n").is_err()); // duplicate
        assert!(Graph::from_edge_list("2 1\n0 2\n").is_err()); // out of range
        assert!(Graph::from_edge_list("3 1\n0 1\n2 1\n").is_err()); // extra line
        assert!(Graph::from_edge_list("3 2\n0 1\n").is_err()); // missing line
    }

    #[test]
    fn generation_is_replay_deterministic() {
        for class in [
            GraphClass::Tree,
            GraphClass::BoundedDegree { k: 3 },
            GraphClass::Gnp { p: 0.3 },
            GraphClass::PowerLaw { a: 2.0 },
        ] {
            let a = generate(&spec(class, 40, 7)).unwrap();
            let b = generate(&spec(class, 40, 7)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn trees_are_spanning_and_acyclic() {
        for seed in 0..40 {
            let g = generate(&spec(GraphClass::Tree, 17, seed)).unwrap();
            assert_eq!(g.edge_count(), 16);
            // Connectivity check: BFS from 0 reaches everything.
            let mut seen = [false; 17];
            let mut queue = vec![0u32];
            seen[0] = true;
            while let Some(v) = queue.pop() {
                for w in g.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push(w);
                    }
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn bounded_degree_respects_cap() {
        for seed in 0..60 {
            let k = 2 + (seed % 3) as usize;
            let g = generate(&spec(GraphClass::BoundedDegree { k: k as u32 }, 30, seed)).unwrap();
            assert!(g.max_degree() <= k, "seed {seed}: degree {} > {k}", g.max_degree());
        }
    }

    #[test]
    fn gnp_extremes() {
        let empty = generate(&spec(GraphClass::Gnp { p: 0.0 }, 12, 1)).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = generate(&spec(GraphClass::Gnp { p: 1.0 }, 12, 1)).unwrap();
        assert_eq!(full.edge_count(), 66);
    }

    #[test]
    fn gnp_edge_frequency_matches_p() {
        // Pooled over seeds, the empirical edge frequency must sit within
        // four standard errors of p.
        let (n, p, seeds) = (30usize, 0.3f64, 200u64);
        let pairs = (n * (n - 1) / 2) as f64 * seeds as f64;
        let mut total = 0usize;
        for seed in 0..seeds {
            total += generate(&spec(GraphClass::Gnp { p }, n, seed)).unwrap().edge_count();
        }
        let freq = total as f64 / pairs;
        let se = (p * (1.0 - p) / pairs).sqrt();
        assert!(
            (freq - p).abs() <= 4.0 * se,
            "freq {freq} vs p {p} (se {se})"
        );
    }

    #[test]
    fn power_law_degree_one_fraction() {
        // Degree-1 vertices keep their degree through the pairing (a single
        // stub cannot form a self-loop or a duplicate), so the realized
        // fraction must match the law's 1/delta(a) mass at d=1.
        let n = 10_000;
        let g = generate(&spec(GraphClass::PowerLaw { a: 2.0 }, n, 5)).unwrap();
        let ones = (0..n as u32).filter(|&v| g.degree(v) == 1).count() as f64 / n as f64;
        let delta: f64 = (1..n).map(|k| (k as f64).powf(-2.0)).sum();
        let expect = 1.0 / delta;
        let se = (expect * (1.0 - expect) / n as f64).sqrt();
        assert!(
            (ones - expect).abs() <= 5.0 * se + 1.0 / n as f64,
            "fraction {ones} vs {expect}"
        );
    }

    #[test]
    fn power_law_sampled_degrees_follow_the_law() {
        // Chi-square on the low-degree bins of the sampled sequence (read
        // off the realized graph; erasure only perturbs the far tail).
        let n = 10_000usize;
        let a = 2.0f64;
        let g = generate(&spec(GraphClass::PowerLaw { a }, n, 9)).unwrap();
        let delta: f64 = (1..n).map(|k| (k as f64).powf(-a)).sum();
        let mut observed = [0f64; 5]; // degrees 1..=4 and everything else
        for v in 0..n as u32 {
            let d = g.degree(v);
            if (1..=4).contains(&d) {
                observed[d - 1] += 1.0;
            } else {
                observed[4] += 1.0;
            }
        }
        let mut expected = [0f64; 5];
        for d in 1..=4 {
            expected[d - 1] = n as f64 * (d as f64).powf(-a) / delta;
        }
        expected[4] = n as f64 - expected[..4].iter().sum::<f64>();
        let chi2: f64 = observed
            .iter()
            .zip(&expected)
            .map(|(o, e)| (o - e) * (o - e) / e)
            .sum();
        // 4 degrees of freedom; 0.999 quantile is 18.47.
        assert!(chi2 < 18.47, "chi-square {chi2} too large");
    }

    #[test]
    fn spec_validation() {
        assert!(spec(GraphClass::Cycle, 2, 0).validate().is_err());
        assert!(spec(GraphClass::Gnp { p: 1.5 }, 5, 0).validate().is_err());
        assert!(spec(GraphClass::PowerLaw { a: 1.5 }, 5, 0).validate().is_err());
        assert!(spec(GraphClass::BoundedDegree { k: 0 }, 5, 0).validate().is_err());
        assert!(spec(GraphClass::Path, 0, 0).validate().is_err());
        assert!(spec(GraphClass::Path, 1, 0).validate().is_ok());
    }

    #[test]
    fn spec_serialization_shape() {
        let s = spec(GraphClass::BoundedDegree { k: 3 }, 50, 9);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"class":"bounded_degree","k":3,"n":50,"seed":9}"#);
        let back: GraphClassSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
