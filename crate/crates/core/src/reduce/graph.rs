//! Undirected graphs and the encoding of 3-colorability as satisfiability
//! of a poor man's formula on the fixed three-successor frame: colors are
//! the three leaves, and one variable per edge keeps its endpoints apart.

use super::{ReduceError, AUX_PREFIX};
use crate::formula::Formula;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// An undirected graph on vertices `1..=n`. Edges may arrive in either
/// orientation; they are normalized before use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n: u32,
    pub edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Graph {
        Graph {
            n,
            edges: edges.into_iter().collect(),
        }
    }

    pub fn validate(&self) -> Result<(), ReduceError> {
        if self.n == 0 {
            return Err(ReduceError::InvalidGraph(
                "vertex count must be positive".to_string(),
            ));
        }
        for &(u, v) in &self.edges {
            if u == v {
                return Err(ReduceError::InvalidGraph(format!("self-loop at {u}")));
            }
            if u == 0 || v == 0 || u > self.n || v > self.n {
                return Err(ReduceError::InvalidGraph(format!(
                    "edge ({u},{v}) leaves 1..={}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Edges with the smaller endpoint first, duplicates collapsed.
    fn normalized_edges(&self) -> BTreeSet<(u32, u32)> {
        self.edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect()
    }
}

/// Brute-force 3-colorability, the ground truth for the reduction tests.
pub fn is_three_colorable(g: &Graph) -> bool {
    let edges: Vec<(u32, u32)> = g.normalized_edges().into_iter().collect();
    let mut colors: Vec<u8> = vec![0; g.n as usize + 1];
    fn assign(v: u32, n: u32, edges: &[(u32, u32)], colors: &mut Vec<u8>) -> bool {
        if v > n {
            return true;
        }
        'next_color: for c in 1..=3u8 {
            for &(a, b) in edges {
                let other = if a == v { b } else if b == v { a } else { continue };
                if other < v && colors[other as usize] == c {
                    continue 'next_color;
                }
            }
            colors[v as usize] = c;
            if assign(v + 1, n, edges, colors) {
                return true;
            }
        }
        colors[v as usize] = 0;
        false
    }
    assign(1, g.n, &edges, &mut colors)
}

fn edge_var(a: u32, b: u32) -> Formula {
    Formula::var(format!("p_{a}_{b}"))
}

/// Encode 3-colorability of `g` on the fixed frame with one hub and three
/// leaves: each vertex contributes a diamond whose body names, positively
/// or negatively, every edge at that vertex — two adjacent vertices can
/// never share a leaf, because the shared edge variable appears positively
/// in one body and negatively in the other.
///
/// `g` is 3-colorable iff the output is satisfiable on that frame.
/// Isolated vertices are dropped (they take any color); a graph with no
/// edges at all maps to a trivially satisfiable diamond.
pub fn reduce_3col(g: &Graph) -> Result<Formula, ReduceError> {
    g.validate()?;
    let edges = g.normalized_edges();
    if edges.is_empty() {
        return Ok(Formula::dia(Formula::var(format!("{AUX_PREFIX}any"))));
    }
    let mut demands = Vec::new();
    for i in 1..=g.n {
        let mut lits = Vec::new();
        for &(a, b) in &edges {
            if i == a {
                lits.push(edge_var(a, b));
            } else if i == b {
                lits.push(match edge_var(a, b) {
                    Formula::Var(name) => Formula::neg_var(name),
                    _ => unreachable!(),
                });
            }
        }
        if !lits.is_empty() {
            demands.push(Formula::dia(Formula::and(lits)));
        }
    }
    Ok(Formula::and(demands))
}
