/// Advances `v` to the next lexicographically greater permutation.
/// Returns `false` (leaving `v` sorted ascending) when `v` was the last one.
/// Repeated elements are handled, so iterating from a sorted multiset visits
/// each distinct arrangement exactly once.
pub(crate) fn next_permutation<E: Ord>(v: &mut [E]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// N! / prod(n_k!), saturating at `u128::MAX`.
pub(crate) fn multinomial(counts: &[usize]) -> u128 {
    let mut total: u128 = 0;
    let mut acc: u128 = 1;
    for &n in counts {
        for j in 1..=n as u128 {
            total += 1;
            // acc * total / j is the multinomial with one more ply, hence integral.
            acc = match acc.checked_mul(total) {
                Some(v) => v / j,
                None => return u128::MAX,
            };
        }
    }
    acc
}
