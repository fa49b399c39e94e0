//! Iterative Tarjan SCC over adjacency lists.
//!
//! State graphs can hold hundreds of thousands of vertices, so the search
//! keeps its own stack instead of recursing.

/// Component id per vertex. Ids are assigned in reverse topological order of
/// the condensation: every edge `u -> v` between different components has
/// `comp[u] > comp[v]`.
pub fn tarjan(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next = 0usize;
    let mut ncomp = 0usize;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    (comp, ncomp)
}

/// Marks components with no edge leaving them.
pub fn terminal_components(adj: &[Vec<usize>], comp: &[usize], ncomp: usize) -> Vec<bool> {
    let mut terminal = vec![true; ncomp];
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            if comp[u] != comp[v] {
                terminal[comp[u]] = false;
            }
        }
    }
    terminal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn same(comp: &[usize], a: usize, b: usize) -> bool {
        comp[a] == comp[b]
    }

    #[test]
    fn two_cycles_and_a_bridge() {
        // 0 <-> 1 -> 2 <-> 3, 4 isolated
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![]];
        let (comp, n) = tarjan(&adj);
        assert_eq!(n, 3);
        assert!(same(&comp, 0, 1));
        assert!(same(&comp, 2, 3));
        assert!(!same(&comp, 1, 2));
        assert!(comp[1] > comp[2]);
        let term = terminal_components(&adj, &comp, n);
        assert!(term[comp[2]]);
        assert!(term[comp[4]]);
        assert!(!term[comp[0]]);
    }

    #[test]
    fn long_chain_does_not_overflow_stack() {
        let n = 200_000;
        let adj: Vec<Vec<usize>> = (0..n).map(|i| if i + 1 < n { vec![i + 1] } else { vec![0] }).collect();
        let (_, ncomp) = tarjan(&adj);
        assert_eq!(ncomp, 1);
    }
}
