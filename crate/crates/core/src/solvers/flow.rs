//! Integral maximum flow (Dinic).

use std::collections::VecDeque;

use super::SolveError;

/// A directed network with integer capacities. Parallel edges are rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    pub nodes: usize,
    pub source: usize,
    pub sink: usize,
    /// `(from, to, capacity)`.
    pub edges: Vec<(usize, usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u64,
    /// Flow on each edge, aligned with [`FlowNetwork::edges`].
    pub edge_flow: Vec<u64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        FlowNetwork {
            nodes,
            source,
            sink,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, capacity: u64) -> usize {
        self.edges.push((from, to, capacity));
        self.edges.len() - 1
    }

    fn validate(&self) -> Result<(), SolveError> {
        if self.source >= self.nodes || self.sink >= self.nodes || self.source == self.sink {
            return Err(SolveError::Invalid("bad source or sink".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, v, _) in &self.edges {
            if u >= self.nodes || v >= self.nodes || u == v {
                return Err(SolveError::Invalid(format!("bad edge {u} -> {v}")));
            }
            if !seen.insert((u, v)) {
                return Err(SolveError::Invalid(format!("parallel edge {u} -> {v}")));
            }
        }
        Ok(())
    }
}

struct Residual {
    // arc 2i is edge i forward, arc 2i+1 its reverse
    to: Vec<usize>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn levels(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (level[t] != usize::MAX).then_some(level)
    }

    fn augment(&mut self, u: usize, t: usize, limit: u64, level: &[usize], next: &mut [usize]) -> u64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let a = self.adj[u][next[u]];
            let v = self.to[a];
            if self.cap[a] > 0 && level[v] == level[u] + 1 {
                let pushed = self.augment(v, t, limit.min(self.cap[a]), level, next);
                if pushed > 0 {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }
}

pub fn max_flow(network: &FlowNetwork) -> Result<FlowResult, SolveError> {
    network.validate()?;
    let mut r = Residual {
        to: Vec::with_capacity(2 * network.edges.len()),
        cap: Vec::with_capacity(2 * network.edges.len()),
        adj: vec![Vec::new(); network.nodes],
    };
    for &(u, v, c) in &network.edges {
        r.adj[u].push(r.to.len());
        r.to.push(v);
        r.cap.push(c);
        r.adj[v].push(r.to.len());
        r.to.push(u);
        r.cap.push(0);
    }
    let (s, t) = (network.source, network.sink);
    let mut value = 0u64;
    while let Some(level) = r.levels(s, t) {
        let mut next = vec![0; network.nodes];
        loop {
            let pushed = r.augment(s, t, u64::MAX, &level, &mut next);
            if pushed == 0 {
                break;
            }
            value += pushed;
        }
    }
    let edge_flow = (0..network.edges.len()).map(|i| r.cap[2 * i + 1]).collect();
    Ok(FlowResult { value, edge_flow })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_network() {
        let mut n = FlowNetwork::new(6, 0, 5);
        for (u, v, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (1, 2, 10),
            (2, 1, 4),
            (1, 3, 12),
            (3, 2, 9),
            (2, 4, 14),
            (4, 3, 7),
            (3, 5, 20),
            (4, 5, 4),
        ] {
            n.add_edge(u, v, c);
        }
        let f = max_flow(&n).unwrap();
        assert_eq!(f.value, 23);
        for (i, &(_, _, c)) in n.edges.iter().enumerate() {
            assert!(f.edge_flow[i] <= c);
        }
    }

    #[test]
    fn parallel_edges_rejected() {
        let mut n = FlowNetwork::new(2, 0, 1);
        n.add_edge(0, 1, 1);
        n.add_edge(0, 1, 2);
        assert!(max_flow(&n).is_err());
    }
}
