//! Exhaustive enumeration of simple state paths, used to check the search.

use std::collections::{HashMap, HashSet, VecDeque};

use super::model::{Model, State, Step};

/// Number of distinct states reachable from the start, or `Err(count)`
/// once more than `budget` have been seen.
pub(crate) fn reachable_states(model: &Model<'_>, budget: usize) -> Result<usize, usize> {
    let (start, _) = model.start();
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let mut overflow = false;
        model.for_each_transition(&s, |_, next| {
            if seen.insert(next) {
                if seen.len() > budget {
                    overflow = true;
                }
                queue.push_back(next);
            }
        });
        if overflow {
            return Err(seen.len());
        }
    }
    Ok(seen.len())
}

/// Every simple path from the start state to a terminal step.
pub(crate) fn simple_paths(model: &Model<'_>) -> Vec<Vec<Step>> {
    let (start, start_step) = model.start();
    let mut adjacency: HashMap<State, Vec<(Step, State)>> = HashMap::new();
    let mut out = Vec::new();
    let mut on_path = HashSet::from([start]);
    let mut steps: Vec<Step> = start_step.into_iter().collect();
    walk(model, start, &mut adjacency, &mut on_path, &mut steps, &mut out);
    out
}

fn walk(
    model: &Model<'_>,
    state: State,
    adjacency: &mut HashMap<State, Vec<(Step, State)>>,
    on_path: &mut HashSet<State>,
    steps: &mut Vec<Step>,
    out: &mut Vec<Vec<Step>>,
) {
    if let Some(finish) = model.finish(&state) {
        let mut path = steps.clone();
        path.push(finish);
        out.push(path);
    }
    let next = adjacency
        .entry(state)
        .or_insert_with(|| {
            let mut v = Vec::new();
            model.for_each_transition(&state, |step, s| v.push((step, s)));
            v
        })
        .clone();
    for (step, s) in next {
        if on_path.insert(s) {
            steps.push(step);
            walk(model, s, adjacency, on_path, steps, out);
            steps.pop();
            on_path.remove(&s);
        }
    }
}
