//! Strongly connected components (Tarjan, iterative).

use std::collections::{BTreeMap, BTreeSet};

/// Components of the graph over nodes `0..succ.len()`. Each component is
/// sorted ascending; components are ordered by their smallest member.
pub fn tarjan(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut out = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            if *i < succ[v].len() {
                let w = succ[v][*i];
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out.sort();
    out
}

/// Components of a named adjacency map, as sorted name lists.
pub fn components<'a>(adj: &BTreeMap<&'a str, BTreeSet<&'a str>>) -> Vec<Vec<&'a str>> {
    let mut names: BTreeSet<&str> = adj.keys().copied().collect();
    names.extend(adj.values().flatten().copied());
    let names: Vec<&str> = names.into_iter().collect();
    let pos: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut succ = vec![Vec::new(); names.len()];
    for (from, tos) in adj {
        succ[pos[from]] = tos.iter().map(|t| pos[t]).collect();
    }
    tarjan(&succ).into_iter().map(|c| c.into_iter().map(|i| names[i]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycle_and_tail() {
        let succ = vec![vec![1], vec![0, 2], vec![]];
        assert_eq!(tarjan(&succ), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn chain_is_all_singletons() {
        let succ = vec![vec![1], vec![2], vec![]];
        assert_eq!(tarjan(&succ), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn named_components() {
        let mut adj: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        adj.entry("B").or_default().insert("A");
        adj.entry("A").or_default().insert("B");
        adj.entry("A").or_default().insert("C");
        assert_eq!(components(&adj), vec![vec!["A", "B"], vec!["C"]]);
    }

    #[test]
    fn deep_path_does_not_overflow() {
        let n = 100_000;
        let succ: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n]).collect();
        assert_eq!(tarjan(&succ).len(), 1);
    }
}
