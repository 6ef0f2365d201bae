//! Reference computations for tests. Nothing here touches the solver, the
//! graph builder or the formula code.
#![allow(dead_code)]

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn proper_divisors(n: u64) -> Vec<u64> {
    (1..n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn least_prime(n: u64) -> u64 {
    (2..=n).find(|p| n.is_multiple_of(*p)).unwrap()
}

/// Adjacency matrix straight from the gcd rule.
pub fn adjacency(n: u64, divisors: &[u64]) -> Vec<Vec<bool>> {
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| a != b && divisors.contains(&gcd((a + n - b) % n, n)))
                .collect()
        })
        .collect()
}

type Set = [u64; 4];

fn set_iter(s: Set) -> impl Iterator<Item = usize> {
    (0..256).filter(move |&i| s[i / 64] >> (i % 64) & 1 == 1)
}

fn and(a: Set, b: Set) -> Set {
    [a[0] & b[0], a[1] & b[1], a[2] & b[2], a[3] & b[3]]
}

fn count(s: Set) -> u32 {
    s.iter().map(|w| w.count_ones()).sum()
}

/// Bron–Kerbosch with Tomita pivoting, no bounding: the size of the largest
/// maximal clique. Supports `n <= 256`.
pub fn oracle_omega(n: u64, divisors: &[u64]) -> usize {
    assert!(n <= 256);
    let adj = adjacency(n, divisors);
    let rows: Vec<Set> = adj
        .iter()
        .map(|row| {
            let mut s = [0u64; 4];
            for (j, &e) in row.iter().enumerate() {
                if e {
                    s[j / 64] |= 1 << (j % 64);
                }
            }
            s
        })
        .collect();
    let mut all = [0u64; 4];
    for v in 0..n as usize {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut best = 0;
    bron_kerbosch(&rows, 0, all, [0; 4], &mut best);
    best
}

fn bron_kerbosch(rows: &[Set], size: usize, mut p: Set, mut x: Set, best: &mut usize) {
    if count(p) == 0 {
        if count(x) == 0 {
            *best = (*best).max(size);
        }
        return;
    }
    let pivot = set_iter(p)
        .chain(set_iter(x))
        .max_by_key(|&u| count(and(p, rows[u])))
        .unwrap();
    let r = rows[pivot];
    let branch = [p[0] & !r[0], p[1] & !r[1], p[2] & !r[2], p[3] & !r[3]];
    for v in set_iter(branch) {
        bron_kerbosch(rows, size + 1, and(p, rows[v]), and(x, rows[v]), best);
        p[v / 64] &= !(1 << (v % 64));
        x[v / 64] |= 1 << (v % 64);
    }
}

/// Largest clique through vertex 0 (every clique of a circulant graph has a
/// translate through 0). Depth-first search pruned by a greedy coloring that
/// takes candidates in plain label order. Supports `n <= 256`.
pub fn rooted_oracle_omega(n: u64, divisors: &[u64]) -> usize {
    assert!(n <= 256);
    let rows: Vec<Set> = (0..n)
        .map(|a| {
            let mut s = [0u64; 4];
            for b in 0..n {
                if a != b && divisors.contains(&gcd((a + n - b) % n, n)) {
                    s[b as usize / 64] |= 1 << (b % 64);
                }
            }
            s
        })
        .collect();
    let mut best = 1;
    extend(&rows, 1, rows[0], &mut best);
    best
}

fn extend(rows: &[Set], size: usize, mut p: Set, best: &mut usize) {
    // color classes built greedily; vertices listed with their class number
    let mut classes: Vec<Set> = Vec::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    for v in set_iter(p) {
        let c = match classes.iter().position(|k| count(and(*k, rows[v])) == 0) {
            Some(c) => c,
            None => {
                classes.push([0; 4]);
                classes.len() - 1
            }
        };
        classes[c][v / 64] |= 1 << (v % 64);
        order.push((v, c + 1));
    }
    order.sort_by_key(|&(_, c)| c);
    for &(v, c) in order.iter().rev() {
        if size + c <= *best {
            return;
        }
        *best = (*best).max(size + 1);
        extend(rows, size + 1, and(p, rows[v]), best);
        p[v / 64] &= !(1 << (v % 64));
    }
}

/// All subsets of the proper divisors of `n` with `1..=k_max` elements.
pub fn subsets(n: u64, k_max: usize) -> Vec<Vec<u64>> {
    let pool = proper_divisors(n);
    let mut out = Vec::new();
    for mask in 1u64..(1 << pool.len()) {
        if (mask.count_ones() as usize) <= k_max {
            out.push(
                pool.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &d)| d)
                    .collect(),
            );
        }
    }
    out
}

pub fn gcd_all(v: &[u64]) -> u64 {
    v.iter().fold(0, |g, &d| gcd(g, d))
}

pub fn is_clique(n: u64, divisors: &[u64], vertices: &[u64]) -> bool {
    vertices.iter().enumerate().all(|(i, &a)| {
        vertices[i + 1..]
            .iter()
            .all(|&b| divisors.contains(&gcd((a + n - b) % n, n)))
    })
}

#[test]
fn oracle_sanity() {
    // X_6(1) is the 6-cycle
    assert_eq!(oracle_omega(6, &[1]), 2);
    // X_20(1,4,10) contains {0,1,4,8,11,12}
    assert!(is_clique(20, &[1, 4, 10], &[0, 1, 4, 8, 11, 12]));
    assert_eq!(oracle_omega(20, &[1, 4, 10]), 6);
    assert_eq!(oracle_omega(15, &[1]), 3);
    assert_eq!(oracle_omega(12, &[2]), 2);
    assert_eq!(oracle_omega(12, &[1, 2]), 3);
    assert_eq!(oracle_omega(45, &[1, 3]), 5);
    assert_eq!(oracle_omega(9, &[3]), 3);
    assert_eq!(oracle_omega(14, &[1]), 2);
    assert_eq!(oracle_omega(2, &[1]), 2);
    assert_eq!(oracle_omega(12, &[2, 4]), 3);
    assert_eq!(oracle_omega(24, &[2, 4]), 3);
    assert_eq!(oracle_omega(30, &[2, 3]), 3);
    for n in 2..=24 {
        for d in subsets(n, 3) {
            assert_eq!(
                rooted_oracle_omega(n, &d),
                oracle_omega(n, &d),
                "X_{n}({d:?})"
            );
        }
    }
}
