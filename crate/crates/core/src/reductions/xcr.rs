use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Exact Cover Reconfiguration: a universe, a family of subsets, and two
/// exact covers drawn from the family (given as family indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XcrInstance {
    pub universe: Vec<u32>,
    pub family: Vec<Vec<u32>>,
    pub start: Vec<usize>,
    pub goal: Vec<usize>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidXcr(msg.into())
}

impl XcrInstance {
    /// Sorts every set and checks the instance: elements are at least 3,
    /// family members are distinct nonempty subsets of the universe, and
    /// both endpoint covers are exact covers.
    pub fn new(universe: Vec<u32>, family: Vec<Vec<u32>>, start: Vec<usize>, goal: Vec<usize>) -> Result<Self> {
        let mut inst = XcrInstance { universe, family, start, goal };
        inst.universe.sort_unstable();
        for set in &mut inst.family {
            set.sort_unstable();
        }
        inst.start.sort_unstable();
        inst.goal.sort_unstable();
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<()> {
        if self.universe.is_empty() {
            return Err(bad("empty universe"));
        }
        if self.universe.len() > 64 || self.family.len() > 64 {
            return Err(bad("at most 64 elements and 64 sets are supported"));
        }
        if self.universe.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("repeated universe element"));
        }
        if let Some(u) = self.universe.iter().find(|&&u| u < 3) {
            return Err(bad(format!("element {u} is below 3")));
        }
        for (i, set) in self.family.iter().enumerate() {
            if set.is_empty() {
                return Err(bad(format!("set {i} is empty")));
            }
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad(format!("set {i} repeats an element")));
            }
            if let Some(x) = set.iter().find(|x| self.universe.binary_search(x).is_err()) {
                return Err(bad(format!("set {i} contains {x}, which is not in the universe")));
            }
            if self.family[..i].contains(set) {
                return Err(bad(format!("set {i} repeats an earlier set")));
            }
        }
        for (name, cover) in [("start", &self.start), ("goal", &self.goal)] {
            if cover.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad(format!("{name} repeats a set")));
            }
            if let Some(i) = cover.iter().find(|&&i| i >= self.family.len()) {
                return Err(bad(format!("{name} refers to set {i}, which does not exist")));
            }
            if !self.is_exact_cover(self.cover_mask(cover)) {
                return Err(bad(format!("{name} is not an exact cover")));
            }
        }
        Ok(())
    }

    /// Bit mask over universe positions.
    pub fn element_mask(&self, set: &[u32]) -> u64 {
        set.iter()
            .map(|x| 1u64 << self.universe.binary_search(x).expect("element of the universe"))
            .fold(0, |a, b| a | b)
    }

    /// Bit mask over family indices.
    pub fn cover_mask(&self, cover: &[usize]) -> u64 {
        cover.iter().fold(0, |a, &i| a | (1u64 << i))
    }

    pub fn is_exact_cover(&self, cover: u64) -> bool {
        let mut seen = 0u64;
        for i in (0..self.family.len()).filter(|i| cover >> i & 1 == 1) {
            let m = self.element_mask(&self.family[i]);
            if seen & m != 0 {
                return false;
            }
            seen |= m;
        }
        seen == full_mask(self.universe.len())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (mut universe, mut family, mut start, mut goal) = (None, Vec::new(), None, None);
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let key = words.next().unwrap();
            let nums = |words: std::str::SplitWhitespace<'_>| -> Result<Vec<u64>> {
                words
                    .map(|w| w.parse::<u64>().map_err(|_| bad(format!("line {}: `{w}` is not a number", no + 1))))
                    .collect()
            };
            let values = nums(words)?;
            let as_u32 = |v: Vec<u64>| -> Result<Vec<u32>> {
                v.into_iter()
                    .map(|x| u32::try_from(x).map_err(|_| bad(format!("line {}: {x} is too large", no + 1))))
                    .collect()
            };
            match key {
                "u" if universe.is_none() => universe = Some(as_u32(values)?),
                "d" => family.push(as_u32(values)?),
                "start" if start.is_none() => start = Some(values.into_iter().map(|x| x as usize).collect()),
                "goal" if goal.is_none() => goal = Some(values.into_iter().map(|x| x as usize).collect()),
                "u" | "start" | "goal" => return Err(bad(format!("line {}: repeated `{key}` line", no + 1))),
                other => return Err(bad(format!("line {}: unknown key `{other}`", no + 1))),
            }
        }
        let universe = universe.ok_or_else(|| bad("missing `u` line"))?;
        let start = start.ok_or_else(|| bad("missing `start` line"))?;
        let goal = goal.ok_or_else(|| bad("missing `goal` line"))?;
        XcrInstance::new(universe, family, start, goal)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        let _ = writeln!(out, "u {}", join(&mut self.universe.iter().map(u32::to_string)));
        for set in &self.family {
            let _ = writeln!(out, "d {}", join(&mut set.iter().map(u32::to_string)));
        }
        let _ = writeln!(out, "start {}", join(&mut self.start.iter().map(usize::to_string)));
        let _ = writeln!(out, "goal {}", join(&mut self.goal.iter().map(usize::to_string)));
        out
    }
}

fn full_mask(bits: usize) -> u64 {
    if bits == 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Answer of [`xcr_brute`]: the least number of splits and merges, or
/// `None` when the goal cover is unreachable.
pub type XcrDistance = Option<usize>;

/// Breadth-first search over exact covers under splits and merges.
pub fn xcr_brute(xcr: &XcrInstance, budget: usize) -> Result<XcrDistance> {
    let masks: Vec<u64> = xcr.family.iter().map(|s| xcr.element_mask(s)).collect();
    let by_mask: HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    // splits[i]: pairs of family indices partitioning set i
    let mut splits = vec![Vec::new(); masks.len()];
    for a in 0..masks.len() {
        for b in a + 1..masks.len() {
            if masks[a] & masks[b] == 0 {
                if let Some(&i) = by_mask.get(&(masks[a] | masks[b])) {
                    splits[i].push((a, b));
                }
            }
        }
    }
    let start = xcr.cover_mask(&xcr.start);
    let goal = xcr.cover_mask(&xcr.goal);
    let mut dist: HashMap<u64, usize> = HashMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(cover) = queue.pop_front() {
        let d = dist[&cover];
        if cover == goal {
            return Ok(Some(d));
        }
        if dist.len() > budget {
            return Err(Error::BudgetExceeded(format!("more than {budget} covers")));
        }
        let members: Vec<usize> = (0..masks.len()).filter(|&i| cover >> i & 1 == 1).collect();
        let mut next = Vec::new();
        for &i in &members {
            for &(a, b) in &splits[i] {
                next.push(cover & !(1 << i) | 1 << a | 1 << b);
            }
        }
        for (x, &a) in members.iter().enumerate() {
            for &b in &members[x + 1..] {
                if let Some(&i) = by_mask.get(&(masks[a] | masks[b])) {
                    next.push(cover & !(1 << a) & !(1 << b) | 1 << i);
                }
            }
        }
        for c in next {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(c) {
                e.insert(d + 1);
                queue.push_back(c);
            }
        }
    }
    Ok(None)
}

/// Random partition of `elements` into nonempty blocks.
fn random_partition(rng: &mut impl Rng, elements: &[u32]) -> Vec<Vec<u32>> {
    let blocks = rng.gen_range(1..=elements.len());
    let mut parts = vec![Vec::new(); blocks];
    let mut order = elements.to_vec();
    order.shuffle(rng);
    for (i, &x) in order.iter().enumerate() {
        let b = if i < blocks { i } else { rng.gen_range(0..blocks) };
        parts[b].push(x);
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    parts
}

/// Random instance with `1..=max_universe` elements `3, 4, ...` and at most
/// `max_family` sets. The family holds both endpoint covers plus random
/// unions and splits of its members.
pub fn random_xcr(rng: &mut impl Rng, max_universe: usize, max_family: usize) -> XcrInstance {
    assert!(max_universe >= 1 && max_family >= 2);
    loop {
        let m = rng.gen_range(1..=max_universe);
        let universe: Vec<u32> = (3..3 + m as u32).collect();
        let c1 = random_partition(rng, &universe);
        let c2 = random_partition(rng, &universe);
        let mut family: Vec<Vec<u32>> = Vec::new();
        for set in c1.iter().chain(&c2) {
            if !family.contains(set) {
                family.push(set.clone());
            }
        }
        if family.len() > max_family {
            continue;
        }
        let extra = rng.gen_range(0..=max_family - family.len());
        for _ in 0..extra * 4 {
            if family.len() >= max_family {
                break;
            }
            let a = family.choose(rng).unwrap().clone();
            let b = family.choose(rng).unwrap().clone();
            let candidate: Vec<u32> = if rng.gen_bool(0.5) && a.iter().all(|x| !b.contains(x)) {
                let mut u: Vec<u32> = a.iter().chain(&b).copied().collect();
                u.sort_unstable();
                u
            } else if a.len() > 1 {
                let cut = rng.gen_range(1..a.len());
                let mut shuffled = a.clone();
                shuffled.shuffle(rng);
                let mut part = shuffled[..cut].to_vec();
                part.sort_unstable();
                part
            } else {
                continue;
            };
            if !family.contains(&candidate) {
                family.push(candidate);
            }
        }
        family.shuffle(rng);
        let index = |s: &Vec<u32>| family.iter().position(|f| f == s).unwrap();
        let start = c1.iter().map(index).collect();
        let goal = c2.iter().map(index).collect();
        return XcrInstance::new(universe, family, start, goal).expect("generated instance is valid");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> XcrInstance {
        XcrInstance::parse("u 3 4\nd 3\nd 4\nd 3 4\nstart 2\ngoal 0 1\n").unwrap()
    }

    #[test]
    fn one_split() {
        assert_eq!(xcr_brute(&small(), 1000).unwrap(), Some(1));
    }

    #[test]
    fn same_cover() {
        let x = XcrInstance::parse("u 3 4\nd 3 4\nstart 0\ngoal 0\n").unwrap();
        assert_eq!(xcr_brute(&x, 1000).unwrap(), Some(0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(XcrInstance::parse("u 3 4\nd 3 4\nstart 0\ngoal 1\n").is_err());
        assert!(XcrInstance::parse("u 2 4\nd 2 4\nstart 0\ngoal 0\n").is_err());
        assert!(XcrInstance::parse("u 3 4\nd 3\nstart 0\ngoal 0\n").is_err());
        assert!(XcrInstance::parse("u 3\nd 3\nd 3\nstart 0\ngoal 1\n").is_err());
        assert!(XcrInstance::parse("u 3\nd 3\nstart 0\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let x = small();
        assert_eq!(XcrInstance::parse(&x.to_text()).unwrap(), x);
    }

    #[test]
    fn unreachable_without_intermediate_sets() {
        // {3,4},{5} to {3},{4,5}: no merge or split connects them
        let x = XcrInstance::parse("u 3 4 5\nd 3 4\nd 5\nd 3\nd 4 5\nstart 0 1\ngoal 2 3\n").unwrap();
        assert_eq!(xcr_brute(&x, 1000).unwrap(), None);
    }
}
