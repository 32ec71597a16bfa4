//! Exhaustive enumeration of small (multi)graphs up to isomorphism, for test
//! corpora. A graph is kept when its multiplicity code is minimal over all
//! vertex permutations.

use super::Multigraph;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            if k % 2 == 0 {
                p.swap(i, k - 1);
            } else {
                p.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut p, &mut out);
    out
}

/// All multigraphs on exactly `n` vertices with every pair multiplicity in
/// 0..=max_mult, one per isomorphism class. Edges are listed pair by pair.
pub fn multigraphs(n: usize, max_mult: usize) -> Vec<Multigraph> {
    let ps = pairs(n);
    let base = max_mult as u64 + 1;
    let m = ps.len();
    let mut index = vec![vec![0usize; n]; n];
    for (i, &(u, v)) in ps.iter().enumerate() {
        index[u][v] = i;
        index[v][u] = i;
    }
    // Position i of a permuted code reads pair perm⁻¹-image of pair i.
    let perm_maps: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|p| ps.iter().map(|&(u, v)| index[p[u]][p[v]]).collect())
        .collect();
    let total = base.pow(m as u32);
    let mut out = Vec::new();
    let mut digits = vec![0u64; m];
    for code in 0..total {
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = c % base;
            c /= base;
        }
        let canonical = perm_maps.iter().all(|map| {
            for i in 0..m {
                let (orig, perm) = (digits[i], digits[map[i]]);
                if perm != orig {
                    return perm > orig;
                }
            }
            true
        });
        if canonical {
            let edges = ps.iter().zip(&digits).flat_map(|(&e, &k)| std::iter::repeat(e).take(k as usize)).collect();
            out.push(Multigraph::with_vertices(n, edges).expect("pairs are valid edges"));
        }
    }
    out
}

/// Simple graphs on exactly `n` vertices up to isomorphism.
pub fn simple_graphs(n: usize) -> Vec<Multigraph> {
    multigraphs(n, 1)
}

/// Simple graphs on 1..=max_n vertices up to isomorphism.
pub fn simple_graphs_up_to(max_n: usize) -> Vec<Multigraph> {
    (1..=max_n).flat_map(simple_graphs).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts() {
        // OEIS A000088: 1, 2, 4, 11, 34, 156
        let counts: Vec<usize> = (1..=6).map(|n| simple_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
        let connected: Vec<usize> = (1..=6).map(|n| simple_graphs(n).iter().filter(|g| g.is_connected()).count()).collect();
        // OEIS A001349: 1, 1, 2, 6, 21, 112
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn multigraph_counts_small() {
        // Three vertices, multiplicities 0..=2: multisets of 3 values from {0,1,2} = 10.
        assert_eq!(multigraphs(3, 2).len(), 10);
        assert_eq!(multigraphs(2, 3).len(), 4);
    }
}
