//! Reflexive tournaments up to isomorphism, by exhaustive canonical labeling.

use std::collections::BTreeSet;

use super::{Digraph, GraphError, Tournament};

/// Largest graph `canonical_code` accepts (the code is `n * n` bits).
pub const MAX_CANONICAL_N: usize = 8;

/// Largest size `enumerate_tournaments` accepts.
pub const MAX_ENUMERATE_N: usize = 7;

fn code_under(g: &Digraph, order: &[usize]) -> u64 {
    // order[new] = old; row-major adjacency bits, first pair most significant.
    let mut code = 0u64;
    for &u in order {
        for &v in order {
            code = (code << 1) | u64::from(g.has_edge(u, v));
        }
    }
    code
}

/// Canonical form of a digraph with at most eight vertices: the least
/// row-major adjacency code over all relabelings that list vertices by
/// decreasing out-degree (then increasing in-degree, then loops last).
///
/// Returns the code together with the relabeling `order`, where `order[i]`
/// is the original vertex that receives new id `i`.
pub fn canonical_code(g: &Digraph) -> Result<(u64, Vec<usize>), GraphError> {
    let n = g.n();
    if n > MAX_CANONICAL_N {
        return Err(GraphError::TooLarge {
            what: "canonical form size",
            max: MAX_CANONICAL_N,
            got: n,
        });
    }
    let key = |v: usize| {
        let outs = g.out_neighbors(v).iter().filter(|&&w| w != v).count();
        let ins = g.in_neighbors(v).iter().filter(|&&w| w != v).count();
        (std::cmp::Reverse(outs), ins, g.has_edge(v, v))
    };
    let mut vertices: Vec<usize> = (0..n).collect();
    vertices.sort_by_key(|&v| key(v));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for v in vertices {
        match blocks.last_mut() {
            Some(block) if key(block[0]) == key(v) => block.push(v),
            _ => blocks.push(vec![v]),
        }
    }

    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut order = Vec::with_capacity(n);
    search(g, &mut blocks, 0, 0, &mut order, &mut best);
    Ok(best.expect("at least one ordering"))
}

fn search(
    g: &Digraph,
    blocks: &mut [Vec<usize>],
    block: usize,
    start: usize,
    order: &mut Vec<usize>,
    best: &mut Option<(u64, Vec<usize>)>,
) {
    if block == blocks.len() {
        let code = code_under(g, order);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, order.clone()));
        }
        return;
    }
    if start == blocks[block].len() {
        search(g, blocks, block + 1, 0, order, best);
        return;
    }
    // Heap-free permutation by swapping each remaining element into place.
    for i in start..blocks[block].len() {
        blocks[block].swap(start, i);
        order.push(blocks[block][start]);
        search(g, blocks, block, start + 1, order, best);
        order.pop();
        blocks[block].swap(start, i);
    }
}

fn decode(n: usize, code: u64) -> Digraph {
    let mut out = vec![Vec::new(); n];
    for (u, row) in out.iter_mut().enumerate() {
        for v in 0..n {
            let bit = n * n - 1 - (u * n + v);
            if (code >> bit) & 1 == 1 {
                row.push(v);
            }
        }
    }
    Digraph::from_out_lists(out)
}

/// One representative per isomorphism class of reflexive tournaments on `n`
/// vertices, each in canonical labeling, ordered by canonical code.
pub fn enumerate_tournaments(n: usize) -> Result<Vec<Tournament>, GraphError> {
    if n == 0 {
        return Err(GraphError::TooSmall {
            what: "tournament size",
            min: 1,
            got: 0,
        });
    }
    if n > MAX_ENUMERATE_N {
        return Err(GraphError::TooLarge {
            what: "tournament size",
            max: MAX_ENUMERATE_N,
            got: n,
        });
    }
    let mut level: BTreeSet<u64> = BTreeSet::from([1]);
    for size in 2..=n {
        let mut next = BTreeSet::new();
        for &code in &level {
            let base = decode(size - 1, code);
            for mask in 0u32..(1 << (size - 1)) {
                let mut out: Vec<Vec<usize>> = (0..size - 1)
                    .map(|u| base.out_neighbors(u).to_vec())
                    .collect();
                out.push(vec![size - 1]);
                for (u, row) in out.iter_mut().enumerate().take(size - 1) {
                    if mask >> u & 1 == 1 {
                        row.push(size - 1);
                    }
                }
                for u in 0..size - 1 {
                    if mask >> u & 1 == 0 {
                        out[size - 1].push(u);
                    }
                }
                let g = Digraph::from_out_lists(out);
                next.insert(canonical_code(&g)?.0);
            }
        }
        level = next;
    }
    Ok(level
        .into_iter()
        .map(|code| Tournament::from_valid(decode(n, code)))
        .collect())
}
