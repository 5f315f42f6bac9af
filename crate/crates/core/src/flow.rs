//! Integral maximum flow.
//!
//! `max_flow` is Dinic's blocking-flow algorithm; `reference_max_flow` is a
//! plain augmenting-path search kept for differential testing. Both visit arcs
//! in insertion order, so results are reproducible for a fixed network.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("node {node} out of range (network has {node_count} nodes)")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("source and sink must differ")]
    SourceIsSink,
    #[error("flow has {found} arc entries, network has {expected} arcs")]
    ArcCountMismatch { expected: usize, found: usize },
    #[error("arc {arc} carries {flow} > capacity {capacity}")]
    OverCapacity {
        arc: usize,
        flow: u64,
        capacity: u64,
    },
    #[error("flow not conserved at node {node}")]
    NotConserved { node: usize },
    #[error("reported value {reported} differs from net source outflow {actual}")]
    WrongValue { reported: u64, actual: i128 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiNetwork {
    node_count: usize,
    arcs: Vec<Arc>,
    source: usize,
    sink: usize,
}

impl DiNetwork {
    pub fn new(node_count: usize, source: usize, sink: usize) -> Result<Self, FlowError> {
        for node in [source, sink] {
            if node >= node_count {
                return Err(FlowError::NodeOutOfRange { node, node_count });
            }
        }
        if source == sink {
            return Err(FlowError::SourceIsSink);
        }
        Ok(Self {
            node_count,
            arcs: Vec::new(),
            source,
            sink,
        })
    }

    /// Appends an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: u64) -> Result<usize, FlowError> {
        for node in [from, to] {
            if node >= self.node_count {
                return Err(FlowError::NodeOutOfRange {
                    node,
                    node_count: self.node_count,
                });
            }
        }
        self.arcs.push(Arc { from, to, capacity });
        Ok(self.arcs.len() - 1)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Plain-text arc list: a `# nodes N source S sink T` header, then one
    /// `from to capacity` line per arc in insertion order.
    pub fn to_arc_list(&self) -> String {
        let mut out = format!(
            "# nodes {} source {} sink {}\n",
            self.node_count, self.source, self.sink
        );
        for a in &self.arcs {
            out.push_str(&format!("{} {} {}\n", a.from, a.to, a.capacity));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    /// Flow on each arc, indexed like `DiNetwork::arcs`.
    pub flow: Vec<u64>,
    pub value: u64,
}

impl FlowResult {
    /// Verifies capacity and conservation constraints and the reported value.
    pub fn check(&self, network: &DiNetwork) -> Result<(), FlowError> {
        if self.flow.len() != network.arcs.len() {
            return Err(FlowError::ArcCountMismatch {
                expected: network.arcs.len(),
                found: self.flow.len(),
            });
        }
        let mut excess = vec![0i128; network.node_count];
        for (arc, (a, &f)) in network.arcs.iter().zip(&self.flow).enumerate() {
            if f > a.capacity {
                return Err(FlowError::OverCapacity {
                    arc,
                    flow: f,
                    capacity: a.capacity,
                });
            }
            excess[a.from] -= f as i128;
            excess[a.to] += f as i128;
        }
        for (node, &e) in excess.iter().enumerate() {
            if node != network.source && node != network.sink && e != 0 {
                return Err(FlowError::NotConserved { node });
            }
        }
        let actual = -excess[network.source];
        if actual != self.value as i128 {
            return Err(FlowError::WrongValue {
                reported: self.value,
                actual,
            });
        }
        Ok(())
    }
}

/// Residual graph with paired forward/backward edges: edge `2a` is arc `a`,
/// edge `2a + 1` its reverse.
struct Residual {
    head: Vec<usize>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(network: &DiNetwork) -> Self {
        let m = network.arcs.len();
        let mut head = Vec::with_capacity(2 * m);
        let mut cap = Vec::with_capacity(2 * m);
        let mut adj = vec![Vec::new(); network.node_count];
        for (i, a) in network.arcs.iter().enumerate() {
            head.push(a.to);
            cap.push(a.capacity);
            head.push(a.from);
            cap.push(0);
            adj[a.from].push(2 * i);
            adj[a.to].push(2 * i + 1);
        }
        Self { head, cap, adj }
    }

    fn push(&mut self, edge: usize, amount: u64) {
        self.cap[edge] -= amount;
        self.cap[edge ^ 1] += amount;
    }

    fn into_result(self, network: &DiNetwork) -> FlowResult {
        let flow: Vec<u64> = (0..network.arcs.len())
            .map(|a| self.cap[2 * a + 1])
            .collect();
        let mut value: i128 = 0;
        for (a, &f) in network.arcs.iter().zip(&flow) {
            if a.from == network.source {
                value += f as i128;
            }
            if a.to == network.source {
                value -= f as i128;
            }
        }
        FlowResult {
            flow,
            value: value.max(0) as u64,
        }
    }
}

/// Dinic's algorithm.
pub fn max_flow(network: &DiNetwork) -> FlowResult {
    let mut res = Residual::new(network);
    let n = network.node_count;
    let (s, t) = (network.source, network.sink);
    let mut level = vec![usize::MAX; n];
    let mut next = vec![0usize; n];

    loop {
        level.fill(usize::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &res.adj[u] {
                let v = res.head[e];
                if res.cap[e] > 0 && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if level[t] == usize::MAX {
            break;
        }
        next.fill(0);
        while augment(&mut res, &level, &mut next, s, t, u64::MAX) > 0 {}
    }
    res.into_result(network)
}

fn augment(
    res: &mut Residual,
    level: &[usize],
    next: &mut [usize],
    u: usize,
    t: usize,
    limit: u64,
) -> u64 {
    if u == t {
        return limit;
    }
    while next[u] < res.adj[u].len() {
        let e = res.adj[u][next[u]];
        let v = res.head[e];
        if res.cap[e] > 0 && level[v] == level[u] + 1 {
            let pushed = augment(res, level, next, v, t, limit.min(res.cap[e]));
            if pushed > 0 {
                res.push(e, pushed);
                return pushed;
            }
        }
        next[u] += 1;
    }
    0
}

/// Depth-first augmenting paths, one at a time. Test oracle only.
pub fn reference_max_flow(network: &DiNetwork) -> FlowResult {
    let mut res = Residual::new(network);
    let n = network.node_count;
    let (s, t) = (network.source, network.sink);
    loop {
        let mut via = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            if u == t {
                break;
            }
            for &e in &res.adj[u] {
                let v = res.head[e];
                if res.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    via[v] = e;
                    stack.push(v);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut bottleneck = u64::MAX;
        let mut v = t;
        while v != s {
            let e = via[v];
            bottleneck = bottleneck.min(res.cap[e]);
            v = res.head[e ^ 1];
        }
        let mut v = t;
        while v != s {
            let e = via[v];
            res.push(e, bottleneck);
            v = res.head[e ^ 1];
        }
    }
    res.into_result(network)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(n: usize, s: usize, t: usize, arcs: &[(usize, usize, u64)]) -> DiNetwork {
        let mut g = DiNetwork::new(n, s, t).unwrap();
        for &(a, b, c) in arcs {
            g.add_arc(a, b, c).unwrap();
        }
        g
    }

    fn both(g: &DiNetwork) -> (u64, u64) {
        let a = max_flow(g);
        let b = reference_max_flow(g);
        a.check(g).unwrap();
        b.check(g).unwrap();
        (a.value, b.value)
    }

    #[test]
    fn single_arc() {
        assert_eq!(both(&net(2, 0, 1, &[(0, 1, 5)])), (5, 5));
    }

    #[test]
    fn two_paths_limited_by_sink_arcs() {
        // s=0, a=1, b=2, t=3
        let g = net(4, 0, 3, &[(0, 1, 3), (0, 2, 2), (1, 3, 2), (2, 3, 2)]);
        assert_eq!(both(&g), (4, 4));
    }

    #[test]
    fn classic_six_node_network() {
        let g = net(
            6,
            0,
            5,
            &[
                (0, 1, 10),
                (0, 2, 10),
                (1, 3, 4),
                (1, 4, 8),
                (2, 4, 9),
                (3, 5, 10),
                (4, 3, 6),
                (4, 5, 10),
            ],
        );
        assert_eq!(both(&g), (19, 19));
    }

    #[test]
    fn zero_capacity_and_disconnected() {
        assert_eq!(both(&net(2, 0, 1, &[(0, 1, 0)])), (0, 0));
        assert_eq!(both(&net(4, 0, 3, &[(0, 1, 7), (2, 3, 7)])), (0, 0));
        assert_eq!(both(&net(3, 0, 2, &[])), (0, 0));
    }

    #[test]
    fn parallel_arcs_and_arcs_into_source() {
        let g = net(
            3,
            0,
            2,
            &[(0, 1, 2), (0, 1, 3), (1, 0, 4), (1, 2, 4), (2, 0, 1)],
        );
        assert_eq!(both(&g), (4, 4));
    }

    #[test]
    fn construction_rejects_bad_nodes() {
        assert_eq!(
            DiNetwork::new(2, 0, 2),
            Err(FlowError::NodeOutOfRange {
                node: 2,
                node_count: 2
            })
        );
        assert_eq!(DiNetwork::new(2, 1, 1), Err(FlowError::SourceIsSink));
        let mut g = DiNetwork::new(2, 0, 1).unwrap();
        assert!(g.add_arc(0, 5, 1).is_err());
    }

    #[test]
    fn check_detects_violations() {
        let g = net(3, 0, 2, &[(0, 1, 2), (1, 2, 2)]);
        let bad_cap = FlowResult {
            flow: vec![3, 3],
            value: 3,
        };
        assert!(matches!(
            bad_cap.check(&g),
            Err(FlowError::OverCapacity { arc: 0, .. })
        ));
        let leak = FlowResult {
            flow: vec![2, 1],
            value: 2,
        };
        assert_eq!(leak.check(&g), Err(FlowError::NotConserved { node: 1 }));
    }

    #[test]
    fn arc_list_export() {
        let g = net(2, 0, 1, &[(0, 1, 5)]);
        assert_eq!(g.to_arc_list(), "# nodes 2 source 0 sink 1\n0 1 5\n");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_network() -> impl Strategy<Value = DiNetwork> {
            (2usize..12).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n, 0u64..10), 0..40)
                    .prop_map(move |arcs| net(n, 0, n - 1, &arcs))
            })
        }

        proptest! {
            #[test]
            fn dinic_matches_reference(g in arb_network()) {
                let a = max_flow(&g);
                let b = reference_max_flow(&g);
                prop_assert!(a.check(&g).is_ok());
                prop_assert!(b.check(&g).is_ok());
                prop_assert_eq!(a.value, b.value);
            }
        }
    }
}
