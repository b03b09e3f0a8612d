use super::{GraphError, Tournament};

/// A directed Hamilton cycle of a strongly connected reflexive tournament,
/// built by insertion: start from a 3-cycle, then absorb outside vertices one
/// or two at a time. Loops are ignored.
///
/// The returned order `v_0 .. v_{m-1}` starts at vertex 0 and has every
/// `(v_i, v_{i+1 mod m})` as an edge.
pub fn hamilton_cycle(t: &Tournament) -> Result<Vec<usize>, GraphError> {
    let n = t.n();
    if n == 0 || !t.is_strongly_connected() {
        return Err(GraphError::NotStronglyConnected);
    }
    if n == 1 {
        return Ok(vec![0]);
    }
    let arc = |u: usize, v: usize| u != v && t.has_edge(u, v);

    // Vertex 0 lies on a 3-cycle: some out-neighbour beats some in-neighbour.
    let outs: Vec<usize> = (1..n).filter(|&v| arc(0, v)).collect();
    let ins: Vec<usize> = (1..n).filter(|&v| arc(v, 0)).collect();
    let (b, c) = outs
        .iter()
        .flat_map(|&b| ins.iter().map(move |&c| (b, c)))
        .find(|&(b, c)| arc(b, c))
        .ok_or(GraphError::NotStronglyConnected)?;
    let mut cycle = vec![0, b, c];
    let mut on_cycle = vec![false; n];
    for &v in &cycle {
        on_cycle[v] = true;
    }

    while cycle.len() < n {
        let len = cycle.len();
        let mut dominated = Vec::new();
        let mut dominating = Vec::new();
        let mut inserted = false;
        for w in (0..n).filter(|&w| !on_cycle[w]) {
            let into = cycle.iter().any(|&c| arc(c, w));
            let from = cycle.iter().any(|&c| arc(w, c));
            if into && from {
                let i = (0..len)
                    .find(|&i| arc(cycle[i], w) && arc(w, cycle[(i + 1) % len]))
                    .ok_or_else(|| GraphError::Internal("no insertion slot".into()))?;
                cycle.insert(i + 1, w);
                on_cycle[w] = true;
                inserted = true;
                break;
            } else if into {
                dominated.push(w);
            } else {
                dominating.push(w);
            }
        }
        if inserted {
            continue;
        }
        let (lo, hi) = dominated
            .iter()
            .flat_map(|&lo| dominating.iter().map(move |&hi| (lo, hi)))
            .find(|&(lo, hi)| arc(lo, hi))
            .ok_or(GraphError::NotStronglyConnected)?;
        // c_0 -> lo -> hi -> c_1.
        cycle.insert(1, hi);
        cycle.insert(1, lo);
        on_cycle[lo] = true;
        on_cycle[hi] = true;
    }

    for i in 0..n {
        if !arc(cycle[i], cycle[(i + 1) % n]) {
            return Err(GraphError::Internal(format!(
                "hamilton cycle broken at {} -> {}",
                cycle[i],
                cycle[(i + 1) % n]
            )));
        }
    }
    Ok(cycle)
}
