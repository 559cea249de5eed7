use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Maximum bipartite matching. `adj[l]` lists right vertices `0..right`
/// adjacent to left vertex `l`. Returns `mate[l]` (or `None`) for every left
/// vertex.
pub fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut mate_l = vec![FREE; left];
    let mut mate_r = vec![FREE; right];
    let mut dist = vec![0usize; left];

    loop {
        // BFS layers from free left vertices.
        let mut queue = VecDeque::new();
        for l in 0..left {
            if mate_l[l] == FREE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match mate_r[r] {
                    FREE => found = true,
                    l2 if dist[l2] == usize::MAX => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        for l in 0..left {
            if mate_l[l] == FREE {
                augment(l, adj, &mut mate_l, &mut mate_r, &mut dist);
            }
        }
    }
    mate_l.into_iter().map(|r| (r != FREE).then_some(r)).collect()
}

fn augment(l: usize, adj: &[Vec<usize>], mate_l: &mut [usize], mate_r: &mut [usize], dist: &mut [usize]) -> bool {
    for &r in &adj[l] {
        let next = mate_r[r];
        let ok = next == FREE || (dist[next] == dist[l] + 1 && augment(next, adj, mate_l, mate_r, dist));
        if ok {
            mate_l[l] = r;
            mate_r[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

/// Minimum chain cover of a transitively closed strict order given as
/// `below[i][j] = i < j`. Each chain is listed from least to greatest;
/// chains are ordered by their least element's index.
pub fn min_chain_cover(below: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let k = below.len();
    let adj: Vec<Vec<usize>> = (0..k).map(|i| (0..k).filter(|&j| below[i][j]).collect()).collect();
    let next = hopcroft_karp(&adj, k);
    let mut has_pred = vec![false; k];
    for &j in next.iter().flatten() {
        has_pred[j] = true;
    }
    (0..k)
        .filter(|&i| !has_pred[i])
        .map(|start| {
            let mut chain = vec![start];
            let mut x = start;
            while let Some(y) = next[x] {
                chain.push(y);
                x = y;
            }
            chain
        })
        .collect()
}
