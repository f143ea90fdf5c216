//! The weighted undirected user-user reply graph and its symmetrically
//! normalized adjacency with self-loops, the propagation operator of the
//! GCN layer.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::gcn::matrix::Mat;
use crate::ingest::IncidentCorpus;
use crate::weaklabel::UserProfile;

/// Reply graph over the canonical node ordering (user ids sorted
/// lexicographically, shared with the feature matrix rows). Edges are
/// stored once per unordered pair; self-replies never create edges.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplyGraph {
    node_ids: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeMap<(usize, usize), f64>,
}

impl ReplyGraph {
    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn n(&self) -> usize {
        self.node_ids.len()
    }

    pub fn node_index(&self, user_id: &str) -> Option<usize> {
        self.index.get(user_id).copied()
    }

    /// Edges as (i, j, weight) with i < j.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(i, j), &w)| (i, j, w))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Builds a graph from explicit nodes and weighted pairs; the main
    /// entry point for constructed test instances.
    pub fn from_edges<S: AsRef<str>>(node_ids: &[S], edges: &[(usize, usize, f64)]) -> ReplyGraph {
        let mut ids: Vec<String> = node_ids.iter().map(|s| s.as_ref().to_string()).collect();
        ids.sort();
        ids.dedup();
        let index: HashMap<String, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let mut map = BTreeMap::new();
        for &(a, b, w) in edges {
            assert!(a < ids.len() && b < ids.len(), "edge endpoint out of range");
            assert!(w > 0.0, "edge weights must be positive");
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            *map.entry(key).or_insert(0.0) += w;
        }
        ReplyGraph {
            node_ids: ids,
            index,
            edges: map,
        }
    }
}

/// Builds the reply graph: one node per user seen anywhere in the corpus,
/// and the (initiator, replier) edge weight incremented once per reply.
/// Users who never interact remain as isolated degree-0 nodes. The result
/// is independent of record iteration order.
pub fn build_graph(corpus: &IncidentCorpus) -> ReplyGraph {
    let mut ids: Vec<String> = Vec::new();
    for record in &corpus.records {
        ids.push(record.initiator_user_id.clone());
        for reply in &record.replies {
            ids.push(reply.reply_user_id.clone());
        }
    }
    ids.sort();
    ids.dedup();
    let index: HashMap<String, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i))
        .collect();

    let mut edges: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for record in &corpus.records {
        let initiator = index[record.initiator_user_id.as_str()];
        for reply in &record.replies {
            let replier = index[reply.reply_user_id.as_str()];
            if replier == initiator {
                continue;
            }
            let key = (initiator.min(replier), initiator.max(replier));
            *edges.entry(key).or_insert(0.0) += 1.0;
        }
    }
    ReplyGraph {
        node_ids: ids,
        index,
        edges,
    }
}

/// The symmetrically normalized adjacency with unit self-loops, stored in
/// compressed sparse row form. Immutable and shareable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedAdjacency {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl NormalizedAdjacency {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The identity operator: the adjacency of a graph with no edges,
    /// used by the structure-ablation MLP.
    pub fn identity(n: usize) -> NormalizedAdjacency {
        NormalizedAdjacency {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.col_idx[k], self.values[k]))
        })
    }

    /// Rebuilds an operator from explicit (row, col, value) triplets.
    pub fn from_entries(n: usize, entries: &[(usize, usize, f64)]) -> crate::Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in entries {
            if i >= n || j >= n {
                return Err(crate::Error::Shape(format!(
                    "entry ({i},{j}) outside {n}x{n}"
                )));
            }
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
            for &(j, v) in row.iter() {
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(NormalizedAdjacency {
            n,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Sparse-dense product `self * x`, row-parallel with a fixed per-row
    /// reduction order so results are bit-identical across schedules.
    pub fn matmul_dense(&self, x: &Mat) -> crate::Result<Mat> {
        if x.rows() != self.n {
            return Err(crate::Error::Shape(format!(
                "adjacency is {n}x{n} but right operand is {r}x{c}",
                n = self.n,
                r = x.rows(),
                c = x.cols()
            )));
        }
        let cols = x.cols();
        let mut out = Mat::zeros(self.n, cols);
        {
            use rayon::prelude::*;
            let row_ptr = &self.row_ptr;
            let col_idx = &self.col_idx;
            let values = &self.values;
            out.rows_mut_par().enumerate().for_each(|(i, out_row)| {
                for k in row_ptr[i]..row_ptr[i + 1] {
                    let j = col_idx[k];
                    let v = values[k];
                    let x_row = x.row(j);
                    for (o, xv) in out_row.iter_mut().zip(x_row) {
                        *o += v * xv;
                    }
                }
            });
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.n, self.n);
        for (i, j, v) in self.entries() {
            m.set(i, j, v);
        }
        m
    }
}

/// Computes D̃^{-1/2} (A + I) D̃^{-1/2} where A carries the reply-count
/// weights (or their binarized form) and the self-loops have unit weight.
/// An isolated node normalizes to a bare 1.0 on the diagonal.
pub fn normalize(graph: &ReplyGraph, use_weights: bool) -> NormalizedAdjacency {
    let n = graph.n();
    let mut neighbors: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut degree = vec![1.0f64; n]; // the self-loop
    for (i, j, w) in graph.edges() {
        let a = if use_weights { w } else { 1.0 };
        neighbors[i].push((j, a));
        neighbors[j].push((i, a));
        degree[i] += a;
        degree[j] += a;
    }
    let inv_sqrt: Vec<f64> = degree.iter().map(|d| 1.0 / d.sqrt()).collect();

    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    row_ptr.push(0);
    for i in 0..n {
        let mut row: Vec<(usize, f64)> = neighbors[i]
            .iter()
            .map(|&(j, a)| (j, a * inv_sqrt[i] * inv_sqrt[j]))
            .collect();
        row.push((i, inv_sqrt[i] * inv_sqrt[i]));
        row.sort_by_key(|&(j, _)| j);
        for (j, v) in row {
            col_idx.push(j);
            values.push(v);
        }
        row_ptr.push(col_idx.len());
    }
    NormalizedAdjacency {
        n,
        row_ptr,
        col_idx,
        values,
    }
}

/// Unweighted neighbor counts per user.
pub fn degree_vector(graph: &ReplyGraph) -> BTreeMap<String, usize> {
    let mut degrees = vec![0usize; graph.n()];
    for (i, j, _) in graph.edges() {
        degrees[i] += 1;
        degrees[j] += 1;
    }
    graph
        .node_ids()
        .iter()
        .cloned()
        .zip(degrees)
        .collect()
}

/// Spearman rank correlation between node degree and intensity score,
/// plus the highest-degree users for manual inspection.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeScoreReport {
    pub spearman: f64,
    /// (user id, degree, intensity score), highest degree first.
    pub top: Vec<(String, usize, f64)>,
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx).powi(2);
        vy += (y - my).powi(2);
    }
    if vx == 0.0 || vy == 0.0 {
        return 0.0; // tie convention: constant input correlates with nothing
    }
    cov / (vx.sqrt() * vy.sqrt())
}

/// Rank correlation between degree and intensity score. Profiles must
/// cover every node. Constant degree or score vectors yield 0.
pub fn degree_vs_score_report(
    graph: &ReplyGraph,
    profiles: &[UserProfile],
) -> crate::Result<DegreeScoreReport> {
    let by_user: HashMap<&str, &UserProfile> =
        profiles.iter().map(|p| (p.user_id.as_str(), p)).collect();
    let degrees = degree_vector(graph);
    let mut deg = Vec::with_capacity(graph.n());
    let mut score = Vec::with_capacity(graph.n());
    let mut rows: Vec<(String, usize, f64)> = Vec::with_capacity(graph.n());
    for id in graph.node_ids() {
        let profile = by_user.get(id.as_str()).ok_or_else(|| {
            crate::Error::InvalidInput(format!("node {id} has no user profile"))
        })?;
        let d = degrees[id];
        deg.push(d as f64);
        score.push(profile.intensity_score);
        rows.push((id.clone(), d, profile.intensity_score));
    }
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows.truncate(10);
    let spearman = pearson(&average_ranks(&deg), &average_ranks(&score));
    Ok(DegreeScoreReport {
        spearman,
        top: rows,
    })
}
