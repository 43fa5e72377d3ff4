//! Maximum bipartite matching (Hopcroft–Karp), the feasibility oracle
//! behind the exact bottleneck distance.
//!
//! Graphs here are tiny (bars of two barcodes plus diagonal slots), so the
//! point of Hopcroft–Karp is not asymptotics but having one well-understood,
//! deterministic augmenting-path routine.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

const UNMATCHED: usize = usize::MAX;

/// Size of a maximum matching in the bipartite graph with `n_left` and
/// `n_right` vertices and the given `(left, right)` edges. Edges out of
/// range are ignored rather than panicking (callers build them from
/// filtered cost predicates).
pub fn max_matching(n_left: usize, n_right: usize, edges: &[(usize, usize)]) -> usize {
    let mut adjacency = vec![Vec::new(); n_left];
    for &(l, r) in edges {
        if l < n_left && r < n_right {
            adjacency[l].push(r);
        }
    }

    let mut match_left = vec![UNMATCHED; n_left];
    let mut match_right = vec![UNMATCHED; n_right];
    let mut size = 0;

    loop {
        // BFS phase: layer left vertices by shortest alternating distance
        // from any free vertex.
        let mut dist = vec![usize::MAX; n_left];
        let mut queue = VecDeque::new();
        for l in 0..n_left {
            if match_left[l] == UNMATCHED {
                dist[l] = 0;
                queue.push_back(l);
            }
        }
        let mut found_augmenting = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adjacency[l] {
                match match_right[r] {
                    UNMATCHED => found_augmenting = true,
                    l2 => {
                        if dist[l2] == usize::MAX {
                            dist[l2] = dist[l] + 1;
                            queue.push_back(l2);
                        }
                    }
                }
            }
        }
        if !found_augmenting {
            return size;
        }

        // DFS phase: augment along layered paths.
        fn try_augment(
            l: usize,
            adjacency: &[Vec<usize>],
            dist: &mut [usize],
            match_left: &mut [usize],
            match_right: &mut [usize],
        ) -> bool {
            for i in 0..adjacency[l].len() {
                let r = adjacency[l][i];
                let next = match_right[r];
                let reachable = next == UNMATCHED
                    || (dist[next] == dist[l].wrapping_add(1)
                        && try_augment(next, adjacency, dist, match_left, match_right));
                if reachable {
                    match_left[l] = r;
                    match_right[r] = l;
                    return true;
                }
            }
            // Dead end: prune this vertex for the rest of the phase.
            dist[l] = usize::MAX;
            false
        }

        for l in 0..n_left {
            if match_left[l] == UNMATCHED
                && try_augment(l, &adjacency, &mut dist, &mut match_left, &mut match_right)
            {
                size += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exponential-time reference: maximum matching by trying, for each left
    /// vertex in turn, every compatible right vertex or skipping it.
    fn brute_force(n_left: usize, n_right: usize, edges: &[(usize, usize)]) -> usize {
        fn go(l: usize, n_left: usize, used: &mut [bool], edges: &[(usize, usize)]) -> usize {
            if l == n_left {
                return 0;
            }
            let mut best = go(l + 1, n_left, used, edges);
            for &(el, er) in edges {
                if el == l && !used[er] {
                    used[er] = true;
                    best = best.max(1 + go(l + 1, n_left, used, edges));
                    used[er] = false;
                }
            }
            best
        }
        go(0, n_left, &mut vec![false; n_right], edges)
    }

    #[test]
    fn empty_graph_has_no_matching() {
        assert_eq!(max_matching(3, 3, &[]), 0);
        assert_eq!(max_matching(0, 0, &[]), 0);
    }

    #[test]
    fn identity_edges_match_perfectly() {
        let edges: Vec<_> = (0..4).map(|i| (i, i)).collect();
        assert_eq!(max_matching(4, 4, &edges), 4);
    }

    #[test]
    fn augmenting_path_beats_greedy() {
        // Greedy may match 0-0 and strand vertex 1; the augmenting path
        // 1-0-0-1 recovers the perfect matching.
        assert_eq!(max_matching(2, 2, &[(0, 0), (0, 1), (1, 0)]), 2);
    }

    #[test]
    fn matches_brute_force_on_all_three_by_three_graphs() {
        // All 2^9 bipartite graphs on 3+3 vertices.
        let all_edges: Vec<(usize, usize)> = (0..3)
            .flat_map(|l| (0..3).map(move |r| (l, r)))
            .collect();
        for mask in 0u32..(1 << 9) {
            let edges: Vec<_> = all_edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            assert_eq!(
                max_matching(3, 3, &edges),
                brute_force(3, 3, &edges),
                "graph mask {mask:#b}"
            );
        }
    }

    #[test]
    fn asymmetric_sides() {
        // 1 left vertex connected to everything: matching size 1.
        assert_eq!(max_matching(1, 5, &[(0, 0), (0, 1), (0, 4)]), 1);
        // 5 left vertices all competing for one right vertex.
        let edges: Vec<_> = (0..5).map(|l| (l, 0)).collect();
        assert_eq!(max_matching(5, 1, &edges), 1);
    }

    #[test]
    fn out_of_range_edges_are_ignored() {
        assert_eq!(max_matching(2, 2, &[(0, 0), (7, 1), (1, 9)]), 1);
    }
}
