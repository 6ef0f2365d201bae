//! Integer number theory on `u64`: factorization by trial division, smallest
//! prime factor, Euler's totient, divisor enumeration, modular inverses and a
//! Chinese-remainder solver for pairwise coprime moduli.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd of every element; 0 for an empty slice.
pub fn gcd_all(values: &[u64]) -> u64 {
    values.iter().fold(0, |g, &v| gcd(g, v))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    smallest_prime_factor(n) == Ok(n)
}

/// Prime-power decomposition `n = p1^a1 · … · pk^ak` with `p1 < … < pk`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Smallest prime divisor, `None` for `n = 1`.
    pub fn smallest_prime(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    /// Exponent of `p` in `n` (0 when `p` does not divide `n`).
    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::TooSmall {
            what: "n",
            value: 0,
            min: 1,
        });
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

pub fn smallest_prime_factor(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::TooSmall {
            what: "n",
            value: n,
            min: 2,
        });
    }
    if n.is_multiple_of(2) {
        return Ok(2);
    }
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            return Ok(p);
        }
        p += 2;
    }
    Ok(n)
}

/// Euler's phi. Panics on `n = 0`.
pub fn totient(n: u64) -> u64 {
    let f = factorize(n).expect("totient of zero");
    f.factors().iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    let f = factorize(n)?;
    let mut out = vec![1u64];
    for &(p, e) in f.factors() {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Divisors `d` of `n` with `1 <= d < n`, ascending.
pub fn divisors_proper(n: u64) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::TooSmall {
            what: "n",
            value: n,
            min: 2,
        });
    }
    let mut all = divisors(n)?;
    all.pop();
    Ok(all)
}

/// Extended Euclid on signed values: returns `(g, x, y)` with `a·x + b·y = g`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd((a % m) as i128, m as i128);
    (g == 1).then(|| x.rem_euclid(m as i128) as u64)
}

/// `x ≡ residue (mod modulus)` with `residue < modulus` and `modulus >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Congruence {
    residue: u64,
    modulus: u64,
}

impl Congruence {
    /// Builds the class of `value` modulo `modulus`.
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::TooSmall {
                what: "modulus",
                value: modulus,
                min: 2,
            });
        }
        Ok(Congruence {
            residue: value % modulus,
            modulus,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_satisfied_by(&self, x: u64) -> bool {
        x % self.modulus == self.residue
    }
}

/// Solves a system of congruences with pairwise coprime moduli.
///
/// The result is the unique class modulo the product of the moduli. Every
/// solution is substituted back into the system before it is returned.
pub fn crt_solve(system: &[Congruence]) -> Result<Congruence> {
    let (first, rest) = system.split_first().ok_or(Error::EmptySystem)?;
    for (i, a) in system.iter().enumerate() {
        for b in &system[i + 1..] {
            if gcd(a.modulus, b.modulus) != 1 {
                return Err(Error::NonCoprimeModuli(a.modulus, b.modulus));
            }
        }
    }

    let mut residue = first.residue as u128;
    let mut modulus = first.modulus as u128;
    for c in rest {
        let m2 = c.modulus as u128;
        let inv = mod_inverse((modulus % m2) as u64, c.modulus)
            .ok_or(Error::NonCoprimeModuli(modulus as u64, c.modulus))? as u128;
        let diff = (c.residue as u128 + m2 - residue % m2) % m2;
        let t = diff * inv % m2;
        residue += modulus * t;
        modulus *= m2;
        if modulus > u64::MAX as u128 {
            return Err(Error::Internal(format!(
                "CRT modulus overflow at {modulus}"
            )));
        }
    }

    let solution = Congruence {
        residue: residue as u64,
        modulus: modulus as u64,
    };
    if let Some(bad) = system.iter().find(|c| !c.is_satisfied_by(solution.residue)) {
        return Err(Error::Internal(format!(
            "CRT solution {} violates x ≡ {} (mod {})",
            solution.residue, bad.residue, bad.modulus
        )));
    }
    Ok(solution)
}

/// Solves `a·x ≡ b (mod m)`.
///
/// With `g = gcd(a, m)` dividing `b` the solutions form one class modulo
/// `m / g`. When `m / g = 1` every integer is a solution and
/// [`Error::Unconstrained`] is returned instead of a degenerate class.
pub fn linear_congruence_solve(a: u64, b: u64, m: u64) -> Result<Congruence> {
    if m < 2 {
        return Err(Error::TooSmall {
            what: "modulus",
            value: m,
            min: 2,
        });
    }
    let a_red = a % m;
    let b_red = b % m;
    let g = gcd(a_red, m);
    if !b_red.is_multiple_of(g) {
        return Err(Error::Unsolvable { a, b, m });
    }
    let m_red = m / g;
    if m_red == 1 {
        return Err(Error::Unconstrained { a, b, m });
    }
    let inv = mod_inverse(a_red / g, m_red).expect("reduced coefficient is a unit");
    let x = ((b_red / g) as u128 * inv as u128 % m_red as u128) as u64;
    Congruence::new(x, m_red)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cong(r: u64, m: u64) -> Congruence {
        Congruence::new(r, m).unwrap()
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(20).unwrap().factors(), &[(2, 2), (5, 1)]);
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(30).unwrap().factors(), &[(2, 1), (3, 1), (5, 1)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorizations_reconstruct() {
        for n in 1..=1_000_000u64 {
            let f = factorize(n).unwrap();
            assert_eq!(f.product(), n);
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn smallest_prime_factor_examples() {
        assert_eq!(smallest_prime_factor(20), Ok(2));
        assert_eq!(smallest_prime_factor(15), Ok(3));
        assert_eq!(smallest_prime_factor(7), Ok(7));
        assert!(smallest_prime_factor(1).is_err());
        assert!(smallest_prime_factor(0).is_err());
    }

    #[test]
    fn smallest_prime_factor_is_least_divisor() {
        for n in 2..=100_000u64 {
            let p = smallest_prime_factor(n).unwrap();
            assert_eq!(n % p, 0);
            assert!((2..p).all(|c| n % c != 0), "n = {n}");
        }
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(10), 4);
        let direct = (1..=20u64).filter(|&k| gcd(k, 20) == 1).count() as u64;
        assert_eq!(direct, 8);
        assert_eq!(totient(20), direct);
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_solve(&[cong(1, 3), cong(2, 5)]).unwrap(), cong(7, 15));
        assert_eq!(crt_solve(&[cong(0, 2)]).unwrap(), cong(0, 2));
        let brute = (0..30u64)
            .find(|x| x % 2 == 1 && x % 3 == 2 && x % 5 == 3)
            .unwrap();
        assert_eq!(brute, 23);
        assert_eq!(
            crt_solve(&[cong(1, 2), cong(2, 3), cong(3, 5)]).unwrap(),
            cong(23, 30)
        );
    }

    #[test]
    fn crt_rejects_bad_systems() {
        assert_eq!(crt_solve(&[]), Err(Error::EmptySystem));
        assert_eq!(
            crt_solve(&[cong(1, 4), cong(1, 6)]),
            Err(Error::NonCoprimeModuli(4, 6))
        );
    }

    #[test]
    fn linear_congruence_examples() {
        assert_eq!(linear_congruence_solve(10, 2, 3).unwrap(), cong(2, 3));
        assert_eq!(linear_congruence_solve(1, 0, 7).unwrap(), cong(0, 7));
        assert!(matches!(
            linear_congruence_solve(4, 1, 2),
            Err(Error::Unsolvable { .. })
        ));
        assert!(matches!(
            linear_congruence_solve(4, 2, 2),
            Err(Error::Unconstrained { .. })
        ));
        // 6x ≡ 4 (mod 10) reduces to 3x ≡ 2 (mod 5)
        assert_eq!(linear_congruence_solve(6, 4, 10).unwrap(), cong(4, 5));
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors_proper(20).unwrap(), vec![1, 2, 4, 5, 10]);
        assert_eq!(divisors_proper(7).unwrap(), vec![1]);
        assert_eq!(divisors_proper(12).unwrap(), vec![1, 2, 3, 4, 6]);
        assert!(divisors_proper(1).is_err());
    }

    #[test]
    fn mod_inverse_small() {
        assert_eq!(mod_inverse(4, 5), Some(4));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(3, 1), Some(0));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn totient_is_multiplicative(a in 1u64..=10_000, b in 1u64..=10_000) {
            prop_assume!(gcd(a, b) == 1);
            prop_assert_eq!(totient(a * b), totient(a) * totient(b));
        }

        #[test]
        fn totient_matches_count(n in 1u64..=2_000) {
            let direct = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            prop_assert_eq!(totient(n), direct);
        }

        #[test]
        fn crt_satisfies_inputs(values in proptest::collection::vec(0u64..1_000_000, 1..6)) {
            let primes = [2u64, 3, 5, 7, 11, 13, 17];
            let system: Vec<_> = values
                .iter()
                .zip(primes)
                .map(|(&v, p)| Congruence::new(v, p).unwrap())
                .collect();
            let sol = crt_solve(&system).unwrap();
            prop_assert_eq!(sol.modulus(), primes[..system.len()].iter().product::<u64>());
            for c in &system {
                prop_assert!(c.is_satisfied_by(sol.residue()));
            }
        }

        #[test]
        fn linear_congruence_solutions_check(a in 0u64..500, b in 0u64..500, m in 2u64..200) {
            match linear_congruence_solve(a, b, m) {
                Ok(c) => {
                    let mut x = c.residue();
                    while x < m {
                        prop_assert_eq!(a * x % m, b % m);
                        x += c.modulus();
                    }
                    let count = (0..m).filter(|&x| a * x % m == b % m).count() as u64;
                    prop_assert_eq!(count, m / c.modulus());
                }
                Err(Error::Unsolvable { .. }) => {
                    prop_assert!((0..m).all(|x| a * x % m != b % m));
                }
                Err(Error::Unconstrained { .. }) => {
                    prop_assert!((0..m).all(|x| a * x % m == b % m));
                }
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
