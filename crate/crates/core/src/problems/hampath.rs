use std::collections::BTreeSet;

use super::exactly_k;
use crate::error::{Error, Result};
use crate::formula::{CnfFormula, Var};

/// Undirected simple graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    pub n: usize,
    /// Normalized pairs `(u, v)` with `u < v`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl GraphSpec {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop on node {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(GraphSpec { n, edges: set })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        GraphSpec::new(n, edges).expect("valid")
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }
}

/// Edge list with one `u v` pair per line (0-based). A `n <count>` line
/// fixes the node count, which otherwise is one past the largest index.
/// Lines starting with `#` are comments.
pub fn parse_edge_list(text: &str) -> Result<GraphSpec> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(i + 1, format!("bad number `{s}`")))
        };
        match toks.as_slice() {
            ["n", c] => n = Some(num(c)?),
            [u, v] => edges.push((num(u)?, num(v)?)),
            _ => return Err(Error::parse(i + 1, format!("expected `u v`, got `{line}`"))),
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    GraphSpec::new(n, edges)
}

fn var(n: usize, pos: usize, city: usize) -> Var {
    Var::new((pos * n + city) as u32)
}

/// `x_{i,j}` (variable `i·n + j`) places city `j` at position `i`. Models
/// are exactly the directed Hamiltonian paths.
pub fn encode_hamiltonian_path(g: &GraphSpec) -> Result<CnfFormula> {
    let n = g.n;
    if n == 0 {
        return Err(Error::InvalidArgument("graph has no nodes".into()));
    }
    let mut f = CnfFormula::new((n * n) as u32);
    for i in 0..n {
        let row: Vec<Var> = (0..n).map(|j| var(n, i, j)).collect();
        f.extend(exactly_k(&row, 1)?)?;
        let col: Vec<Var> = (0..n).map(|p| var(n, p, i)).collect();
        f.extend(exactly_k(&col, 1)?)?;
    }
    for i in 0..n.saturating_sub(1) {
        for u in 0..n {
            for v in 0..n {
                if u != v && !g.adjacent(u, v) {
                    f.add_clause([var(n, i, u).neg(), var(n, i + 1, v).neg()])?;
                }
            }
        }
    }
    Ok(f)
}

/// City sequence of a model of [`encode_hamiltonian_path`].
pub fn decode_path(model: &[bool], n: usize) -> Option<Vec<usize>> {
    (0..n)
        .map(|i| {
            let mut cities = (0..n).filter(|&j| model[i * n + j]);
            let c = cities.next()?;
            cities.next().is_none().then_some(c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn models(f: &CnfFormula) -> Vec<Vec<bool>> {
        let n = f.num_vars() as usize;
        (0u32..1 << n)
            .map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|m| f.eval_full(m))
            .collect()
    }

    #[test]
    fn path_and_triangle() {
        let p3 = GraphSpec::new(3, [(0, 1), (1, 2)]).unwrap();
        let ms = models(&encode_hamiltonian_path(&p3).unwrap());
        assert_eq!(ms.len(), 2);
        let paths: BTreeSet<Vec<usize>> = ms.iter().map(|m| decode_path(m, 3).unwrap()).collect();
        assert_eq!(paths, BTreeSet::from([vec![0, 1, 2], vec![2, 1, 0]]));
        assert_eq!(
            models(&encode_hamiltonian_path(&GraphSpec::complete(3)).unwrap()).len(),
            6
        );
    }

    #[test]
    fn isolated_vertex_is_unsat() {
        let g = GraphSpec::new(3, [(0, 1)]).unwrap();
        assert!(models(&encode_hamiltonian_path(&g).unwrap()).is_empty());
    }

    #[test]
    fn edge_list_parsing() {
        let g = parse_edge_list("# p3\n0 1\n1 2\n").unwrap();
        assert_eq!(g, GraphSpec::new(3, [(0, 1), (1, 2)]).unwrap());
        assert_eq!(parse_edge_list("n 4\n0 1\n").unwrap().n, 4);
        assert!(parse_edge_list("0 0\n").is_err());
        assert!(parse_edge_list("0 1 2\n").is_err());
        assert!(GraphSpec::new(2, [(0, 2)]).is_err());
    }
}
