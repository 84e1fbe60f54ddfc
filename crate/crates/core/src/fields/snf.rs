//! Diagonalisation of relation matrices over Z/L, used to turn a subgroup
//! H ≤ ⊕ Z/d_k into generators of the characters trivial on H.

use super::frac::Frac;

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return (a, 1, 0);
    }
    let (g, x, y) = egcd(b, a % b);
    (g, y, x - (a / b) * y)
}

fn gcd(a: i128, b: i128) -> i128 {
    egcd(a.abs(), b.abs()).0
}

/// Characters of G = (⊕_k Z/d_k) / ⟨relations⟩. Each returned vector gives
/// a character's values on the standard generators e_k; together they
/// generate the full character group of G. Trivial generators are dropped.
pub fn dual_of_quotient(orders: &[u64], relations: &[Vec<u64>]) -> Vec<Vec<Frac>> {
    let r = orders.len();
    if r == 0 {
        return Vec::new();
    }
    let l: i128 = orders.iter().fold(1i128, |acc, &d| acc / gcd(acc, d as i128) * d as i128);
    assert!(l < 1i128 << 63, "exponent of the unit group too large");
    let red = |x: i128| x.rem_euclid(l);

    let mut a: Vec<Vec<i128>> = Vec::new();
    for (k, &d) in orders.iter().enumerate() {
        let mut row = vec![0i128; r];
        row[k] = red(d as i128);
        a.push(row);
    }
    for rel in relations {
        a.push(rel.iter().map(|&x| red(x as i128)).collect());
    }
    let s = a.len();
    let mut q: Vec<Vec<i128>> = (0..r).map(|i| (0..r).map(|j| i128::from(i == j)).collect()).collect();

    let mut diag = Vec::with_capacity(r);
    for t in 0..r {
        loop {
            // pivot: smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..s {
                for j in t..r {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j] < a[bi][bj]) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in q.iter_mut() {
                row.swap(t, pj);
            }
            let piv = a[t][t];
            let mut clean = true;
            for i in t + 1..s {
                if a[i][t] != 0 {
                    let f = a[i][t] / piv;
                    for j in t..r {
                        a[i][j] = red(a[i][j] - f * a[t][j]);
                    }
                    if a[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in t + 1..r {
                if a[t][j] != 0 {
                    let f = a[t][j] / piv;
                    for row in a.iter_mut() {
                        row[j] = red(row[j] - f * row[t]);
                    }
                    for row in q.iter_mut() {
                        row[j] = red(row[j] - f * row[t]);
                    }
                    if a[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        // an all-zero trailing column means δ ≡ 0 mod L
        diag.push(if a[t][t] == 0 { l } else { gcd(a[t][t], l) });
    }

    let mut out = Vec::new();
    for (t, &delta) in diag.iter().enumerate() {
        if delta == 1 {
            continue;
        }
        let col: Vec<Frac> = (0..r).map(|k| Frac::new(q[k][t].rem_euclid(delta) as u64, delta as u64)).collect();
        if col.iter().any(|x| !x.is_zero()) {
            out.push(col);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_quotients() {
        // Z/6 modulo ⟨3⟩ is Z/3: one character of order 3.
        let g = dual_of_quotient(&[6], &[vec![3]]);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0][0].den(), 3);
        // trivial quotient
        assert!(dual_of_quotient(&[6], &[vec![1]]).is_empty());
        // Z/2 × Z/2 modulo the diagonal
        let g = dual_of_quotient(&[2, 2], &[vec![1, 1]]);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0], vec![Frac::new(1, 2), Frac::new(1, 2)]);
    }
}
