//! Label-setting search over the expanded state space.
//!
//! Labels are compared by (primary cost, duration, leg count); all three
//! are non-negative integer sums, so the lexicographic order is preserved
//! under extension and plain Dijkstra stays exact. Every optimal path is
//! kept implicitly as a DAG of tight arcs, and the lexicographically
//! smallest node-id sequence is read off that DAG afterwards.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::graph::NodeIdx;
use crate::profile::MultiplierProfile;
use crate::units::PerceivedCost;

use super::model::{Carrier, Model, State, Step};

#[derive(Debug, Clone, Copy)]
pub(crate) enum Primary<'p> {
    Perceived(&'p MultiplierProfile),
    Distance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    primary: u64,
    duration: u64,
    legs: u32,
}

const UNREACHED: Key = Key {
    primary: u64::MAX,
    duration: u64::MAX,
    legs: u32::MAX,
};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Entry {
    key: Key,
    index: u32,
    state: State,
    walking: bool,
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed for a min-heap; index breaks ties deterministically.
        other.key.cmp(&self.key).then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dense numbering of (node, carrier slot, used set) plus a walking flag for
/// on-foot states. Slots per node: fresh on foot, walking, one per vehicle,
/// one per transit line serving the node.
struct StateSpace {
    offsets: Vec<u32>,
    vehicles: u32,
    masks: u32,
}

impl StateSpace {
    fn new(model: &Model<'_>) -> Self {
        let graph = model.graph;
        let vehicles = model.vehicle_count() as u32;
        let mut offsets = Vec::with_capacity(graph.node_count() + 1);
        let mut acc = 0u32;
        offsets.push(0);
        for n in 0..graph.node_count() {
            acc += 2 + vehicles + graph.lines_at(NodeIdx(n as u32)).len() as u32;
            offsets.push(acc);
        }
        StateSpace {
            offsets,
            vehicles,
            masks: 1 << vehicles,
        }
    }

    /// Index of the terminal sink.
    fn len(&self) -> usize {
        (*self.offsets.last().unwrap() * self.masks) as usize
    }

    fn index(&self, model: &Model<'_>, s: &State, walking: bool) -> u32 {
        let slot = match s.carrier {
            Carrier::OnFoot => walking as u32,
            Carrier::Riding(v) => 2 + v as u32,
            Carrier::OnTransit(line) => {
                let lines = model.graph.lines_at(s.node);
                2 + self.vehicles + lines.binary_search(&line).expect("line serves node") as u32
            }
        };
        (self.offsets[s.node.index()] + slot) * self.masks + s.used as u32
    }

    fn decode(&self, model: &Model<'_>, index: u32) -> (State, bool) {
        let used = (index % self.masks) as u8;
        let flat = index / self.masks;
        let node = self.offsets.partition_point(|&o| o <= flat) - 1;
        let slot = flat - self.offsets[node];
        let node = NodeIdx(node as u32);
        let (carrier, walking) = match slot {
            0 | 1 => (Carrier::OnFoot, slot == 1),
            s if s < 2 + self.vehicles => (Carrier::Riding((s - 2) as u8), false),
            s => (
                Carrier::OnTransit(model.graph.lines_at(node)[(s - 2 - self.vehicles) as usize]),
                false,
            ),
        };
        (State { node, carrier, used }, walking)
    }
}

/// Walking flag of the successor and the number of legs the step opens.
fn successor_flags(step: &Step, next: &State, walking: bool) -> (bool, u32) {
    match step {
        Step::Edge { .. } if next.carrier == Carrier::OnFoot => (true, u32::from(!walking)),
        Step::Board(_) | Step::Pickup(_) => (false, 1),
        _ => (false, 0),
    }
}

pub(crate) struct Found {
    pub steps: Vec<Step>,
}

struct Search<'m, 'a, 'p> {
    model: &'m Model<'a>,
    primary: Primary<'p>,
    space: StateSpace,
    sink: u32,
}

impl Search<'_, '_, '_> {
    fn step_key(&self, step: &Step) -> (u64, u64) {
        let c = self.model.cost(step);
        let primary = match self.primary {
            Primary::Perceived(profile) => PerceivedCost::weigh(c.time, profile.milli(c.mode)).0,
            Primary::Distance => c.distance_mm,
        };
        (primary, c.time.0)
    }

    fn extend(&self, key: Key, step: &Step, legs: u32) -> Key {
        let (p, d) = self.step_key(step);
        Key {
            primary: key.primary + p,
            duration: key.duration + d,
            legs: key.legs + legs,
        }
    }

    /// Calls `f(step, next, next_walking, next_index, next_key)` for every
    /// way out of `state`, including finishing into the sink.
    fn for_each_arc(&self, state: &State, walking: bool, key: Key, mut f: impl FnMut(Step, State, bool, u32, Key)) {
        self.model.for_each_transition(state, |step, next| {
            let (next_walking, legs) = successor_flags(&step, &next, walking);
            let next_index = self.space.index(self.model, &next, next_walking);
            f(step, next, next_walking, next_index, self.extend(key, &step, legs));
        });
        if let Some(step) = self.model.finish(state) {
            f(step, *state, false, self.sink, self.extend(key, &step, 0));
        }
    }
}

pub(crate) fn search(model: &Model<'_>, primary: Primary<'_>) -> Option<Found> {
    let space = StateSpace::new(model);
    let sink = space.len() as u32;
    let n = space.len() + 1;
    let s = Search {
        model,
        primary,
        space,
        sink,
    };
    let mut best = vec![UNREACHED; n];
    let mut settled = vec![false; n];
    // Tight incoming arcs per state as linked lists: head[to] -> (from, next).
    let mut head = vec![NONE; n];
    let mut arcs: Vec<(u32, u32)> = Vec::new();
    let mut heap = BinaryHeap::new();

    let (start, start_step) = model.start();
    let start_index = s.space.index(model, &start, false);
    let start_key = match &start_step {
        Some(step) => s.extend(Key::ZERO, step, 1),
        None => Key::ZERO,
    };
    best[start_index as usize] = start_key;
    heap.push(Entry {
        key: start_key,
        index: start_index,
        state: start,
        walking: false,
    });

    while let Some(Entry {
        key,
        index,
        state,
        walking,
    }) = heap.pop()
    {
        // Keep going through labels tied with the best finish so that every
        // optimal path is recorded.
        if key > best[sink as usize] {
            break;
        }
        if settled[index as usize] || key > best[index as usize] {
            continue;
        }
        settled[index as usize] = true;
        if index == sink {
            continue;
        }
        s.for_each_arc(&state, walking, key, |_, next, next_walking, next_index, candidate| {
            let slot = next_index as usize;
            match candidate.cmp(&best[slot]) {
                Ordering::Greater => {}
                Ordering::Equal => {
                    arcs.push((index, head[slot]));
                    head[slot] = (arcs.len() - 1) as u32;
                }
                Ordering::Less => {
                    debug_assert!(!settled[slot], "negative transition cost");
                    arcs.push((index, NONE));
                    head[slot] = (arcs.len() - 1) as u32;
                    best[slot] = candidate;
                    heap.push(Entry {
                        key: candidate,
                        index: next_index,
                        state: next,
                        walking: next_walking,
                    });
                }
            }
        });
    }
    if best[sink as usize] == UNREACHED {
        return None;
    }

    // States on some optimal path.
    let mut useful = vec![false; n];
    let mut stack = vec![sink];
    useful[sink as usize] = true;
    while let Some(to) = stack.pop() {
        let mut a = head[to as usize];
        while a != NONE {
            let (from, next) = arcs[a as usize];
            if !useful[from as usize] {
                useful[from as usize] = true;
                stack.push(from);
            }
            a = next;
        }
    }

    let mut steps = smallest_sequence(&s, &best, &useful, start_index);
    if let Some(step) = start_step {
        steps.insert(0, step);
    }
    Some(Found { steps })
}

impl Key {
    const ZERO: Key = Key {
        primary: 0,
        duration: 0,
        legs: 0,
    };
}

/// Walks the DAG of tight arcs between useful states, always taking the
/// edge to the smallest node id; stopping as soon as the trip can end is
/// smaller still, since a prefix sorts first.
fn smallest_sequence(s: &Search<'_, '_, '_>, best: &[Key], useful: &[bool], start: u32) -> Vec<Step> {
    let model = s.model;
    let mut parent: HashMap<u32, (u32, Step)> = HashMap::new();
    let mut frontier = vec![start];
    loop {
        // Close over steps that do not move.
        let mut closure = frontier.clone();
        let mut i = 0;
        let mut moves: Vec<(u32, Step, u32)> = Vec::new();
        while i < closure.len() {
            let from = closure[i];
            i += 1;
            let (state, walking) = s.space.decode(model, from);
            let key = best[from as usize];
            let mut finished = None;
            s.for_each_arc(&state, walking, key, |step, _, _, to, candidate| {
                if !useful[to as usize] || candidate != best[to as usize] {
                    return;
                }
                if to == s.sink {
                    finished.get_or_insert(step);
                } else if matches!(step, Step::Edge { .. }) {
                    moves.push((from, step, to));
                } else if !parent.contains_key(&to) && to != start {
                    parent.insert(to, (from, step));
                    closure.push(to);
                }
            });
            if let Some(step) = finished {
                parent.insert(s.sink, (from, step));
                return unwind(&parent, s.sink, start);
            }
        }
        let rank = |step: &Step| match step {
            Step::Edge { edge, .. } => model.graph.node_rank(model.graph.edge(*edge).to),
            _ => unreachable!(),
        };
        let min = moves
            .iter()
            .map(|(_, step, _)| rank(step))
            .min()
            .expect("useful states reach the sink");
        frontier.clear();
        for (from, step, to) in moves {
            if rank(&step) == min && !parent.contains_key(&to) {
                parent.insert(to, (from, step));
                frontier.push(to);
            }
        }
    }
}

fn unwind(parent: &HashMap<u32, (u32, Step)>, mut at: u32, start: u32) -> Vec<Step> {
    let mut steps = Vec::new();
    while at != start {
        let (from, step) = parent[&at];
        steps.push(step);
        at = from;
    }
    steps.reverse();
    steps
}
