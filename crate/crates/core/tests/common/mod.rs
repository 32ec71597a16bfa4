#![allow(dead_code)]

use sheafrig::graphs::Multigraph;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One simple graph per isomorphism class on exactly `n` vertices: a mask is
/// kept when no relabelling gives a smaller mask.
pub fn simple_graphs(n: usize) -> Vec<Multigraph> {
    let pairs = pairs(n);
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let tables: Vec<Vec<usize>> = permutations(n)
        .iter()
        .map(|p| pairs.iter().map(|&(a, b)| index(p[a], p[b])).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let canonical = tables.iter().all(|t| {
            let mut image = 0u32;
            for (bit, &to) in t.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    image |= 1 << to;
                }
            }
            image >= mask
        });
        if canonical {
            let edges = pairs.iter().enumerate().filter(|(bit, _)| mask & (1 << bit) != 0).map(|(_, &e)| e).collect();
            out.push(Multigraph::with_vertices(n, edges).unwrap());
        }
    }
    out
}

pub fn all_graphs_up_to(max_n: usize) -> Vec<Multigraph> {
    (1..=max_n).flat_map(simple_graphs).collect()
}

pub fn connected_graphs_up_to(max_n: usize) -> Vec<Multigraph> {
    all_graphs_up_to(max_n).into_iter().filter(Multigraph::is_connected).collect()
}

/// Every labelled multigraph on `n` vertices with edge multiplicities at most `max_mult`.
pub fn for_each_multigraph(n: usize, max_mult: usize, mut f: impl FnMut(&Multigraph)) {
    let pairs = pairs(n);
    let base = max_mult + 1;
    let total = base.pow(pairs.len() as u32);
    for code in 0..total {
        let mut edges = Vec::new();
        let mut c = code;
        for &p in &pairs {
            for _ in 0..c % base {
                edges.push(p);
            }
            c /= base;
        }
        f(&Multigraph::with_vertices(n, edges).unwrap());
    }
}
