use super::layered::LayeredNetwork;
use super::network::Circulation;
use crate::error::{Error, Result};
use crate::graph::{TypePartition, VertexSet};
use crate::ndsolver::{signature, Shape, ShapeSpace};
use crate::oracle::Move;

/// Removes every node that has both positive in- and out-flow inside one
/// clique layer by rerouting `h → i → i'` as `h → i'`. Returns how much the
/// cost dropped.
pub fn remove_transit(g: &mut [Vec<i64>]) -> i64 {
    let t = g.len();
    let mut saved = 0;
    loop {
        let mut changed = false;
        for i in 0..t {
            let Some(out) = (0..t).find(|&b| b != i && g[i][b] > 0) else {
                continue;
            };
            let Some(inn) = (0..t).find(|&a| a != i && g[a][i] > 0) else {
                continue;
            };
            let m = g[i][out].min(g[inn][i]);
            g[i][out] -= m;
            g[inn][i] -= m;
            if inn != out {
                g[inn][out] += m;
                saved += m;
            } else {
                saved += 2 * m;
            }
            changed = true;
        }
        if !changed {
            return saved;
        }
    }
}

struct Layer<'a> {
    space: &'a ShapeSpace,
    partition: &'a TypePartition,
    cur: VertexSet,
    counts: Vec<usize>,
    moves: Vec<Move>,
}

impl Layer<'_> {
    fn shape_after(&self, a: usize, b: usize) -> Shape {
        let mut c = self.counts.clone();
        c[a] -= 1;
        c[b] += 1;
        self.space.shape_of_counts(&c)
    }

    fn step(&mut self, a: usize, b: usize) -> Result<()> {
        let class_a = self.partition.class(a);
        let class_b = self.partition.class(b);
        let u = class_a.iter().copied().find(|v| self.cur.contains(v));
        let v = class_b.iter().copied().find(|v| !self.cur.contains(v));
        let (Some(u), Some(v)) = (u, v) else {
            return Err(Error::Internal(format!("no token to move from type {a} to type {b}")));
        };
        self.cur.remove(&u);
        self.cur.insert(v);
        self.counts[a] -= 1;
        self.counts[b] += 1;
        self.moves.push(Move { from: u, to: v });
        Ok(())
    }

    fn first_arc(&self, g: &[Vec<i64>], want: &Shape) -> Option<(usize, usize)> {
        let t = g.len();
        (0..t)
            .flat_map(|a| (0..t).map(move |b| (a, b)))
            .find(|&(a, b)| g[a][b] > 0 && self.shape_after(a, b) == *want)
    }
}

/// Turns a minimum-cost circulation on the layered network of `shapes` into
/// an explicit move sequence from `source` to `target`. Within a layer,
/// shape-preserving moves run first, then the move that switches to the
/// next shape (rerouting two pending moves through a promised one when the
/// switching arc carries no flow), then the remaining moves.
pub fn realize_moves(
    net: &LayeredNetwork,
    circulation: &Circulation,
    shapes: &[Shape],
    space: &ShapeSpace,
    partition: &TypePartition,
    source: &VertexSet,
    target: &VertexSet,
    k: usize,
) -> Result<Vec<Move>> {
    if shapes.len() != net.layers + 1 {
        return Err(Error::Precondition("shape path does not match the network".into()));
    }
    let mut layer = Layer {
        space,
        partition,
        cur: source.clone(),
        counts: signature(partition, source),
        moves: Vec::new(),
    };
    for j in 0..net.layers {
        let (here, next) = (&shapes[j], &shapes[j + 1]);
        if space.shape_of_counts(&layer.counts) != *here {
            return Err(Error::Internal(format!("layer {j} starts outside shape [{here}]")));
        }
        let mut g = net.layer_flows(&circulation.flow, j);
        remove_transit(&mut g);
        let mut switched = false;
        loop {
            let pending = g.iter().flatten().any(|&x| x > 0);
            if switched && !pending {
                break;
            }
            if !switched {
                if let Some((a, b)) = layer.first_arc(&g, here) {
                    g[a][b] -= 1;
                    layer.step(a, b)?;
                    continue;
                }
                if let Some((a, b)) = layer.first_arc(&g, next) {
                    g[a][b] -= 1;
                    layer.step(a, b)?;
                    switched = true;
                    continue;
                }
                let dir = space
                    .adjacency(here, next, k)
                    .ok_or_else(|| Error::Internal(format!("layer {j}: shapes are not adjacent")))?;
                let (Some(i_out), Some(i_in)) = (dir.out, dir.into) else {
                    return Err(Error::Internal(format!("layer {j}: no move reaches the next shape")));
                };
                let t = g.len();
                let h_in = (0..t).find(|&b| g[i_out][b] > 0);
                let h_out = (0..t).find(|&a| g[a][i_in] > 0);
                let (Some(h_in), Some(h_out)) = (h_in, h_out) else {
                    return Err(Error::Internal(format!("layer {j}: nothing to reroute")));
                };
                g[i_out][h_in] -= 1;
                g[h_out][i_in] -= 1;
                if h_out != h_in {
                    g[h_out][h_in] += 1;
                }
                if layer.shape_after(i_out, i_in) != *next {
                    return Err(Error::Internal(format!("layer {j}: switching move misses the next shape")));
                }
                layer.step(i_out, i_in)?;
                switched = true;
                continue;
            }
            match layer.first_arc(&g, next) {
                Some((a, b)) => {
                    g[a][b] -= 1;
                    layer.step(a, b)?;
                }
                None => return Err(Error::Internal(format!("layer {j}: leftover moves change the shape"))),
            }
        }
    }
    if layer.cur != *target {
        return Err(Error::Internal("realized sequence does not end at the target".into()));
    }
    Ok(layer.moves)
}
