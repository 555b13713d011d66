//! Exhaustive enumeration of maps between finite sets.

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn saturating_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Number of maps `dom -> cod` with `fixed` entries pinned.
pub(crate) fn map_count(dom: usize, cod: usize, fixed: usize) -> u128 {
    saturating_pow(cod, dom.saturating_sub(fixed))
}

/// Calls `visit` on every map `dom -> cod` (as an image array) whose entries at
/// the `fixed` positions equal the given values. Maps are visited in
/// lexicographic order of the free positions, last position fastest.
/// Stops early when `visit` returns `false`.
pub(crate) fn for_each_map<F>(dom: usize, cod: usize, fixed: &[(usize, usize)], mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    if cod == 0 {
        if dom == 0 {
            visit(&[]);
        }
        return;
    }
    let mut image = vec![0usize; dom];
    let mut is_fixed = vec![false; dom];
    for &(p, v) in fixed {
        image[p] = v;
        is_fixed[p] = true;
    }
    let free: Vec<usize> = (0..dom).filter(|&p| !is_fixed[p]).collect();
    loop {
        if !visit(&image) {
            return;
        }
        // odometer increment over the free positions
        let mut k = free.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            let p = free[k];
            image[p] += 1;
            if image[p] < cod {
                break;
            }
            image[p] = 0;
        }
    }
}
