use super::network::FlowNetwork;
use crate::error::{Error, Result};
use crate::ndsolver::{Entry, Shape, ShapeSpace};

/// The layered network of a shape path `σ_0, …, σ_L`: layers `L_0..L_{L−1}`
/// of one node per type, bidirectional unit-cost cliques inside layers,
/// matchings between consecutive layers bounded by the intermediate shapes,
/// source arcs fixed to `S`, sink arcs fixed to `S'`, and `(s', s)` fixed
/// to `k`.
#[derive(Clone, Debug)]
pub struct LayeredNetwork {
    pub network: FlowNetwork,
    pub types: usize,
    pub layers: usize,
    /// `clique[j][a][b]`: arc index of `v_a^j → v_b^j` (`usize::MAX` on the
    /// diagonal).
    pub clique: Vec<Vec<Vec<usize>>>,
    /// `matching[j][i]`: arc index of `v_i^j → v_i^{j+1}`.
    pub matching: Vec<Vec<usize>>,
    pub source_arcs: Vec<usize>,
    pub sink_arcs: Vec<usize>,
    pub return_arc: usize,
}

pub const SOURCE: usize = 0;
pub const SINK: usize = 1;

impl LayeredNetwork {
    pub fn node(&self, layer: usize, i: usize) -> usize {
        2 + layer * self.types + i
    }

    /// Flow on the clique of layer `j` as a `t × t` matrix.
    pub fn layer_flows(&self, flow: &[i64], j: usize) -> Vec<Vec<i64>> {
        (0..self.types)
            .map(|a| {
                (0..self.types)
                    .map(|b| if a == b { 0 } else { flow[self.clique[j][a][b]] })
                    .collect()
            })
            .collect()
    }
}

/// Builds the network for `shapes` (from the shape of `S` to the shape of
/// `S'`, consecutive shapes adjacent for size `k`). Clique capacities are
/// `k`, which no optimal circulation exceeds.
pub fn build_network(shapes: &[Shape], space: &ShapeSpace, k: usize) -> Result<LayeredNetwork> {
    if shapes.len() < 2 {
        return Err(Error::InvalidNetwork("a shape path needs at least two shapes".into()));
    }
    let t = space.types();
    for w in shapes.windows(2) {
        if !space.adjacent(&w[0], &w[1], k) {
            return Err(Error::InvalidNetwork(format!("shapes [{}] and [{}] are not adjacent", w[0], w[1])));
        }
    }
    let exact = |s: &Shape, what: &str| -> Result<Vec<i64>> {
        s.0.iter()
            .map(|e| match e {
                Entry::Count(c) => Ok(*c as i64),
                Entry::Free => Err(Error::InvalidNetwork(format!("{what} shape has a free entry"))),
            })
            .collect()
    };
    let first = exact(&shapes[0], "source")?;
    let last = exact(shapes.last().expect("nonempty"), "target")?;
    let layers = shapes.len() - 1;
    let mut net = FlowNetwork::new(2 + layers * t);
    let node = |j: usize, i: usize| 2 + j * t + i;
    let k = k as i64;

    let mut clique = Vec::with_capacity(layers);
    for j in 0..layers {
        let mut m = vec![vec![usize::MAX; t]; t];
        for a in 0..t {
            for b in 0..t {
                if a != b {
                    m[a][b] = net.add_arc(node(j, a), node(j, b), 0, k, 1)?;
                }
            }
        }
        clique.push(m);
    }
    let mut matching = Vec::with_capacity(layers.saturating_sub(1));
    for j in 1..layers {
        let mut row = Vec::with_capacity(t);
        for i in 0..t {
            let (d, c) = match shapes[j].0[i] {
                Entry::Free => (space.q() as i64, (space.sizes()[i] - space.q()) as i64),
                Entry::Count(x) => (x as i64, x as i64),
            };
            row.push(net.add_arc(node(j - 1, i), node(j, i), d, c, 0)?);
        }
        matching.push(row);
    }
    let source_arcs = (0..t)
        .map(|i| net.add_arc(SOURCE, node(0, i), first[i], first[i], 0))
        .collect::<Result<Vec<_>>>()?;
    let sink_arcs = (0..t)
        .map(|i| net.add_arc(node(layers - 1, i), SINK, last[i], last[i], 0))
        .collect::<Result<Vec<_>>>()?;
    let return_arc = net.add_arc(SINK, SOURCE, k, k, 0)?;
    Ok(LayeredNetwork {
        network: net,
        types: t,
        layers,
        clique,
        matching,
        source_arcs,
        sink_arcs,
        return_arc,
    })
}
