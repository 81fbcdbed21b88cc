use super::shape::{shape_of_set, signature};
use crate::error::{Error, Result};
use crate::graph::{TypePartition, VertexSet};
use crate::oracle::Move;

/// Moves from `r` to `r2` through sets of their common shape, one per
/// element of `r \ r2`. Exchanges inside a type come first; otherwise a
/// token goes from a type with surplus to a type with deficit.
pub fn same_shape_walk(partition: &TypePartition, q: usize, r: &VertexSet, r2: &VertexSet) -> Result<Vec<Move>> {
    if r.len() != r2.len() {
        return Err(Error::Precondition("sets differ in size".into()));
    }
    if shape_of_set(partition, q, r) != shape_of_set(partition, q, r2) {
        return Err(Error::Precondition("sets differ in shape".into()));
    }
    let goal = signature(partition, r2);
    let mut cur = r.clone();
    let mut moves = Vec::new();
    while cur != *r2 {
        let sig = signature(partition, &cur);
        let leaving = |i: usize| partition.class(i).iter().copied().find(|v| cur.contains(v) && !r2.contains(v));
        let entering = |i: usize| partition.class(i).iter().copied().find(|v| !cur.contains(v) && r2.contains(v));
        let within = (0..partition.len()).find_map(|i| match (leaving(i), entering(i)) {
            (Some(u), Some(v)) if sig[i] == goal[i] => Some(Move { from: u, to: v }),
            _ => None,
        });
        let m = match within {
            Some(m) => m,
            None => {
                let i = (0..partition.len()).find(|&i| sig[i] > goal[i]);
                let j = (0..partition.len()).find(|&j| sig[j] < goal[j]);
                match (i.and_then(leaving), j.and_then(entering)) {
                    (Some(u), Some(v)) => Move { from: u, to: v },
                    _ => return Err(Error::Internal("no exchange reduces the difference".into())),
                }
            }
        };
        cur.remove(&m.from);
        cur.insert(m.to);
        moves.push(m);
    }
    Ok(moves)
}
