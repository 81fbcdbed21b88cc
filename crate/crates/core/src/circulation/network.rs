use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write;

use crate::error::{Error, Result};

/// Arc with demand (lower bound), capacity and cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub demand: i64,
    pub capacity: i64,
    pub cost: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlowNetwork {
    nodes: usize,
    arcs: Vec<Arc>,
}

/// Integer circulation: one flow value per arc, in arc order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circulation {
    pub flow: Vec<i64>,
    pub cost: i64,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { nodes, arcs: Vec::new() }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(&mut self, from: usize, to: usize, demand: i64, capacity: i64, cost: i64) -> Result<usize> {
        if from >= self.nodes || to >= self.nodes {
            return Err(Error::InvalidNetwork(format!("arc {from}->{to} out of range")));
        }
        if demand < 0 || demand > capacity {
            return Err(Error::InvalidNetwork(format!(
                "arc {from}->{to} has demand {demand} and capacity {capacity}"
            )));
        }
        if cost < 0 {
            return Err(Error::InvalidNetwork(format!("arc {from}->{to} has negative cost")));
        }
        self.arcs.push(Arc {
            from,
            to,
            demand,
            capacity,
            cost,
        });
        Ok(self.arcs.len() - 1)
    }

    /// Conservation and bounds check; returns the cost when `flow` is a
    /// feasible circulation.
    pub fn check(&self, flow: &[i64]) -> Result<i64> {
        if flow.len() != self.arcs.len() {
            return Err(Error::InvalidNetwork("flow vector has the wrong length".into()));
        }
        let mut balance = vec![0i64; self.nodes];
        let mut cost = 0i64;
        for (a, &f) in self.arcs.iter().zip(flow) {
            if f < a.demand || f > a.capacity {
                return Err(Error::InvalidNetwork(format!(
                    "flow {f} on {}->{} outside [{}, {}]",
                    a.from, a.to, a.demand, a.capacity
                )));
            }
            balance[a.from] -= f;
            balance[a.to] += f;
            cost += f * a.cost;
        }
        if let Some(v) = balance.iter().position(|&b| b != 0) {
            return Err(Error::InvalidNetwork(format!("flow is not conserved at node {v}")));
        }
        Ok(cost)
    }

    /// DIMACS-like text: `p <nodes> <arcs>` then `a <u> <v> <d> <c> <w>`.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p {} {}\n", self.nodes, self.arcs.len());
        for a in &self.arcs {
            let _ = writeln!(s, "a {} {} {} {} {}", a.from, a.to, a.demand, a.capacity, a.cost);
        }
        s
    }
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual {
            head: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let e = self.head.len();
        self.head.extend([v, u]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[u].push(e);
        self.adj[v].push(e + 1);
        e
    }
}

/// Minimum-cost integer circulation, or `None` when the demands cannot be
/// met. Lower bounds are moved into node supplies, and the supplies are
/// routed from a super source to a super sink by successive shortest paths
/// (Dijkstra with potentials; all costs are nonnegative).
pub fn min_cost_circulation(net: &FlowNetwork) -> Result<Option<Circulation>> {
    let n = net.nodes;
    let (src, snk) = (n, n + 1);
    let mut res = Residual::new(n + 2);
    let mut excess = vec![0i64; n];
    let mut edge_of = Vec::with_capacity(net.arcs.len());
    for a in &net.arcs {
        if a.demand > a.capacity || a.demand < 0 || a.cost < 0 {
            return Err(Error::InvalidNetwork(format!("bad arc {}->{}", a.from, a.to)));
        }
        edge_of.push(res.add(a.from, a.to, a.capacity - a.demand, a.cost));
        excess[a.to] += a.demand;
        excess[a.from] -= a.demand;
    }
    let mut need = 0i64;
    for (v, &e) in excess.iter().enumerate() {
        if e > 0 {
            res.add(src, v, e, 0);
            need += e;
        } else if e < 0 {
            res.add(v, snk, -e, 0);
        }
    }

    let total = n + 2;
    let mut potential = vec![0i64; total];
    let mut sent = 0i64;
    while sent < need {
        let mut dist = vec![i64::MAX; total];
        let mut prev = vec![usize::MAX; total];
        dist[src] = 0;
        let mut heap = BinaryHeap::from([Reverse((0i64, src))]);
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &e in &res.adj[u] {
                if res.cap[e] <= 0 {
                    continue;
                }
                let v = res.head[e];
                let nd = d + res.cost[e] + potential[u] - potential[v];
                if nd < dist[v] {
                    dist[v] = nd;
                    prev[v] = e;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        if dist[snk] == i64::MAX {
            return Ok(None);
        }
        for v in 0..total {
            if dist[v] != i64::MAX {
                potential[v] += dist[v];
            }
        }
        let mut push = need - sent;
        let mut v = snk;
        while v != src {
            let e = prev[v];
            push = push.min(res.cap[e]);
            v = res.head[e ^ 1];
        }
        let mut v = snk;
        while v != src {
            let e = prev[v];
            res.cap[e] -= push;
            res.cap[e ^ 1] += push;
            v = res.head[e ^ 1];
        }
        sent += push;
    }

    let flow: Vec<i64> = net
        .arcs
        .iter()
        .zip(&edge_of)
        .map(|(a, &e)| a.demand + res.cap[e ^ 1])
        .collect();
    let cost = net.check(&flow)?;
    Ok(Some(Circulation { flow, cost }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_flow() {
        let mut net = FlowNetwork::new(2);
        net.add_arc(0, 1, 3, 3, 2).unwrap();
        net.add_arc(1, 0, 3, 3, 0).unwrap();
        let c = min_cost_circulation(&net).unwrap().unwrap();
        assert_eq!((c.flow, c.cost), (vec![3, 3], 6));
    }

    #[test]
    fn picks_cheaper_route() {
        // 0 -> 1 -> 3 costs 2, 0 -> 2 -> 3 costs 3, and 3 -> 0 forces one unit.
        let mut net = FlowNetwork::new(4);
        net.add_arc(0, 1, 0, 1, 1).unwrap();
        net.add_arc(1, 3, 0, 1, 1).unwrap();
        net.add_arc(0, 2, 0, 1, 1).unwrap();
        net.add_arc(2, 3, 0, 1, 2).unwrap();
        net.add_arc(3, 0, 1, 1, 0).unwrap();
        let c = min_cost_circulation(&net).unwrap().unwrap();
        assert_eq!(c.cost, 2);
        assert_eq!(c.flow, vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn infeasible_demand() {
        let mut net = FlowNetwork::new(2);
        net.add_arc(0, 1, 1, 2, 0).unwrap();
        assert_eq!(min_cost_circulation(&net).unwrap(), None);
        assert!(net.add_arc(0, 1, 3, 2, 0).is_err());
        assert!(net.add_arc(0, 1, 0, 2, -1).is_err());
    }

    #[test]
    fn dimacs_dump() {
        let mut net = FlowNetwork::new(2);
        net.add_arc(0, 1, 1, 4, 1).unwrap();
        assert_eq!(net.to_dimacs(), "p 2 1\na 0 1 1 4 1\n");
    }
}
