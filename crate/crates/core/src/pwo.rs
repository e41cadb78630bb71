//! Pair-wise ordering (PWO) factors.
//!
//! For a pair `(j, k)` with `j < k`, `z_jk = +1` when `j` is added before
//! `k`, `-1` when `k` is added before `j`, and `0` when either component is
//! absent from the blend.

use crate::design::{pair_count, pair_index, pairs, support_of, Permutation, Pwo};
use crate::error::{Error, Result};

fn positions(perm: &Permutation, m: usize) -> Result<Vec<Option<usize>>> {
    let mut pos = vec![None; m];
    for (p, &c) in perm.0.iter().enumerate() {
        if c >= m {
            return Err(Error::InvalidPermutation(format!(
                "component {} out of range for m = {m}",
                c + 1
            )));
        }
        if pos[c].replace(p).is_some() {
            return Err(Error::InvalidPermutation(format!(
                "component {} appears twice in {perm}",
                c + 1
            )));
        }
    }
    Ok(pos)
}

/// PWO vector of a full permutation of `0..m`; every entry is `±1`.
pub fn pwo_from_permutation(perm: &Permutation, m: usize) -> Result<Pwo> {
    if perm.len() != m {
        return Err(Error::InvalidPermutation(format!(
            "{perm} is not a permutation of {m} components"
        )));
    }
    let pos = positions(perm, m)?;
    Ok(Pwo(pairs(m)
        .map(|(j, k)| if pos[j] < pos[k] { 1 } else { -1 })
        .collect()))
}

/// Mixture-modified PWO vector: `perm` orders exactly the nonzero
/// components of `values`; pairs touching a zero component get `0`.
pub fn pwo_from_run(values: &[f64], perm: &Permutation) -> Result<Pwo> {
    let m = values.len();
    let pos = positions(perm, m)?;
    for (i, &v) in values.iter().enumerate() {
        match (v != 0.0, pos[i].is_some()) {
            (true, false) => {
                return Err(Error::SupportMismatch(format!(
                    "nonzero component {} missing from {perm}",
                    i + 1
                )))
            }
            (false, true) => {
                return Err(Error::SupportMismatch(format!(
                    "zero component {} appears in {perm}",
                    i + 1
                )))
            }
            _ => {}
        }
    }
    Ok(Pwo(pairs(m)
        .map(|(j, k)| match (pos[j], pos[k]) {
            (Some(pj), Some(pk)) if pj < pk => 1,
            (Some(_), Some(_)) => -1,
            _ => 0,
        })
        .collect()))
}

/// Recover the order of addition over `support` (0-based indices) encoded
/// by `pwo` for `m` components.
///
/// A precedence relation on `s` elements is a total order exactly when the
/// out-degrees are `{s-1, ..., 1, 0}`; anything else is intransitive.
pub fn permutation_from_pwo(pwo: &Pwo, support: &[usize], m: usize) -> Result<Permutation> {
    if pwo.len() != pair_count(m) {
        return Err(Error::Dimension(format!(
            "pwo has {} entries, expected {} for m = {m}",
            pwo.len(),
            pair_count(m)
        )));
    }
    let mut in_support = vec![false; m];
    for &s in support {
        if s >= m || std::mem::replace(&mut in_support[s], true) {
            return Err(Error::SupportMismatch(format!(
                "bad support index {}",
                s + 1
            )));
        }
    }
    for (j, k) in pairs(m) {
        let z = pwo.get(j, k, m);
        let on_support = in_support[j] && in_support[k];
        if on_support && z == 0 {
            return Err(Error::SupportMismatch(format!(
                "z{}{} is 0 but both components are present",
                j + 1,
                k + 1
            )));
        }
        if !on_support && z != 0 {
            return Err(Error::SupportMismatch(format!(
                "z{}{} = {z} touches an absent component",
                j + 1,
                k + 1
            )));
        }
        if !(-1..=1).contains(&z) {
            return Err(Error::InconsistentPwo(format!("z{}{} = {z}", j + 1, k + 1)));
        }
    }

    let s = support.len();
    // slot[d] holds the element with out-degree d
    let mut slot: Vec<Option<usize>> = vec![None; s];
    for &a in support {
        let out = support
            .iter()
            .filter(|&&b| b != a)
            .filter(|&&b| {
                let z = if a < b {
                    pwo.0[pair_index(a, b, m)]
                } else {
                    -pwo.0[pair_index(b, a, m)]
                };
                z > 0
            })
            .count();
        if slot[out].replace(a).is_some() {
            return Err(Error::InconsistentPwo(format!(
                "{:?} contains a cycle among components {:?}",
                pwo.0,
                support.iter().map(|i| i + 1).collect::<Vec<_>>()
            )));
        }
    }
    Ok(Permutation(slot.into_iter().rev().map(|a| a.unwrap()).collect()))
}

/// Every ordering of the nonzero components of `values`, as PWO vectors.
///
/// Results are sorted in descending lexicographic order of the PWO vector,
/// so the identity order comes first and the full reversal last.
pub fn enumerate_orderings(values: &[f64]) -> Result<Vec<Pwo>> {
    let support = support_of(values);
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut out: Vec<Pwo> = permutations(&support)
        .into_iter()
        .map(|p| pwo_from_run(values, &Permutation(p)))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(out)
}

/// All permutations of `items` in lexicographic order of positions.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(labels: &[usize]) -> Permutation {
        Permutation::from_labels(labels).unwrap()
    }

    #[test]
    fn worked_example_213() {
        assert_eq!(pwo_from_permutation(&perm(&[2, 1, 3]), 3).unwrap().0, vec![-1, 1, 1]);
        assert_eq!(pwo_from_permutation(&perm(&[1, 2, 3]), 3).unwrap().0, vec![1, 1, 1]);
        assert_eq!(pwo_from_permutation(&perm(&[3, 2, 1]), 3).unwrap().0, vec![-1, -1, -1]);
    }

    #[test]
    fn bad_permutations() {
        assert!(matches!(
            pwo_from_permutation(&perm(&[1, 1, 3]), 3),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(matches!(
            pwo_from_permutation(&perm(&[1, 2]), 3),
            Err(Error::InvalidPermutation(_))
        ));
    }

    #[test]
    fn run_with_zero_component() {
        let z = pwo_from_run(&[0.168, 0.832, 0.0], &perm(&[2, 1])).unwrap();
        assert_eq!(z.0, vec![-1, 0, 0]);
        let z = pwo_from_run(&[0.333, 0.333, 0.334], &perm(&[1, 2, 3])).unwrap();
        assert_eq!(z.0, vec![1, 1, 1]);
        let z = pwo_from_run(&[1.0, 0.0, 0.0], &perm(&[1])).unwrap();
        assert_eq!(z.0, vec![0, 0, 0]);
    }

    #[test]
    fn run_support_mismatch() {
        assert!(matches!(
            pwo_from_run(&[0.5, 0.5, 0.0], &perm(&[1, 3])),
            Err(Error::SupportMismatch(_))
        ));
        assert!(matches!(
            pwo_from_run(&[0.5, 0.5, 0.0], &perm(&[1])),
            Err(Error::SupportMismatch(_))
        ));
    }

    #[test]
    fn decode() {
        let all = [0, 1, 2];
        assert_eq!(
            permutation_from_pwo(&Pwo(vec![1, 1, 1]), &all, 3).unwrap(),
            perm(&[1, 2, 3])
        );
        assert_eq!(
            permutation_from_pwo(&Pwo(vec![-1, 1, 1]), &all, 3).unwrap(),
            perm(&[2, 1, 3])
        );
        assert!(matches!(
            permutation_from_pwo(&Pwo(vec![1, -1, 1]), &all, 3),
            Err(Error::InconsistentPwo(_))
        ));
        assert!(matches!(
            permutation_from_pwo(&Pwo(vec![1, 0, 1]), &all, 3),
            Err(Error::SupportMismatch(_))
        ));
    }

    #[test]
    fn intransitive_by_brute_force() {
        // (+1, -1, +1) on {1,2,3}: no permutation produces it.
        let target = vec![1, -1, 1];
        let found = permutations(&[0, 1, 2])
            .into_iter()
            .any(|p| pwo_from_permutation(&Permutation(p), 3).unwrap().0 == target);
        assert!(!found);
    }

    #[test]
    fn centroid_orderings_match_catalog_order() {
        let got: Vec<Vec<i8>> = enumerate_orderings(&[1.0 / 3.0; 3])
            .unwrap()
            .into_iter()
            .map(|p| p.0)
            .collect();
        assert_eq!(
            got,
            vec![
                vec![1, 1, 1],
                vec![1, 1, -1],
                vec![1, -1, -1],
                vec![-1, 1, 1],
                vec![-1, -1, 1],
                vec![-1, -1, -1],
            ]
        );
    }

    #[test]
    fn edge_and_vertex_orderings() {
        let got = enumerate_orderings(&[0.168, 0.832, 0.0]).unwrap();
        assert_eq!(got, vec![Pwo(vec![1, 0, 0]), Pwo(vec![-1, 0, 0])]);
        let got = enumerate_orderings(&[0.0, 0.0, 0.24]).unwrap();
        assert_eq!(got, vec![Pwo(vec![0, 0, 0])]);
        assert!(matches!(enumerate_orderings(&[0.0; 3]), Err(Error::EmptySupport)));
    }
}
