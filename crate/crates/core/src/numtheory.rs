//! Divisors, Euler's totient, the subgroup `⟨−1,−2⟩_d` of units, and the
//! divisor sums `g`, `f`, `ψ`, `ψ*` that control the parallel-class bound
//! for the modified Wilson–Schreiber systems.
//!
//! For `n ≡ 1, 5 (mod 6)` write `D_n` for the divisors of `n` greater than 1
//! and `X_d = ⟨−1,−2⟩_d`. Then
//!
//! * `g(d) = 0` if `|X_d| ≡ 0 (mod 4)`, else `φ(d) / |X_d|`;
//! * `f(n) = Σ_{d∈D_n} g(d)`;
//! * `ψ(n) = φ(n) − 18 g(n)` and `ψ*(n) = Σ_{d∈D_n} ψ(d) = n − 1 − 18 f(n)`.
//!
//! Everything here is exact integer arithmetic.

use serde::{Deserialize, Serialize};

use crate::{Error, Exec, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = u128::from(m);
    let mut acc = 1 % m128;
    let mut b = u128::from(base % m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of the unit `a` modulo `m`, via the factorisation of `φ(m)`.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    let mut ord = euler_phi(m);
    for (p, _) in factorize(ord) {
        while ord.is_multiple_of(p) && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

fn check_odd_modulus(d: u64) -> Result<()> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::InvalidOrder { value: d, reason: "modulus must be odd and at least 3" });
    }
    Ok(())
}

/// Order of the subgroup of `Z*_d` generated by `generators` (taken mod `d`,
/// negatives allowed), by breadth-first closure under multiplication.
pub fn subgroup_order(d: u64, generators: &[i64]) -> Result<u64> {
    Ok(subgroup_elements(d, generators)?.len() as u64)
}

/// Elements of the generated subgroup in discovery order, starting at 1.
pub fn subgroup_elements(d: u64, generators: &[i64]) -> Result<Vec<u64>> {
    check_odd_modulus(d)?;
    let gens = generators
        .iter()
        .map(|&g| {
            let r = g.rem_euclid(d as i64) as u64;
            if gcd(r, d) == 1 {
                Ok(r)
            } else {
                Err(Error::NotAUnit { generator: g, modulus: d })
            }
        })
        .collect::<Result<Vec<u64>>>()?;
    let mut seen = vec![false; d as usize];
    let mut elems = vec![1u64];
    seen[1] = true;
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head];
        head += 1;
        for &g in &gens {
            let y = (u128::from(x) * u128::from(g) % u128::from(d)) as u64;
            if !seen[y as usize] {
                seen[y as usize] = true;
                elems.push(y);
            }
        }
    }
    Ok(elems)
}

/// `|⟨−1,−2⟩_d|` from the order of `−2`: the subgroup is `⟨−2⟩` when it
/// already contains `−1`, and `⟨−2⟩ × {±1}` otherwise.
pub fn neg_one_neg_two_order(d: u64) -> Result<u64> {
    check_odd_modulus(d)?;
    let minus_two = d - 2 % d;
    if gcd(minus_two, d) != 1 {
        return Err(Error::NotAUnit { generator: -2, modulus: d });
    }
    let ord = multiplicative_order(minus_two, d);
    let contains_minus_one = ord.is_multiple_of(2) && pow_mod(minus_two, ord / 2, d) == d - 1;
    Ok(if contains_minus_one { ord } else { 2 * ord })
}

fn check_coprime_to_six(n: u64) -> Result<()> {
    if n <= 1 || n.is_multiple_of(2) || n.is_multiple_of(3) {
        return Err(Error::InvalidOrder { value: n, reason: "must be 1 or 5 mod 6 and greater than 1" });
    }
    Ok(())
}

fn g_from(phi: u64, sub_order: u64) -> u64 {
    if sub_order.is_multiple_of(4) {
        0
    } else {
        debug_assert_eq!(phi % sub_order, 0);
        phi / sub_order
    }
}

pub fn g_of(d: u64) -> Result<u64> {
    check_coprime_to_six(d)?;
    Ok(g_from(euler_phi(d), neg_one_neg_two_order(d)?))
}

pub fn f_of(n: u64) -> Result<u64> {
    Ok(profile(n)?.f)
}

pub fn psi_of(n: u64) -> Result<i64> {
    Ok(profile(n)?.psi)
}

pub fn psi_star_of(n: u64) -> Result<i64> {
    Ok(profile(n)?.psi_star)
}

/// Arithmetic data for one `n ≡ 1, 5 (mod 6)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberProfile {
    pub n: u64,
    pub divisors_gt1: Vec<u64>,
    pub phi: u64,
    pub sub_order: u64,
    pub g: u64,
    pub f: u64,
    pub psi: i64,
    pub psi_star: i64,
}

impl NumberProfile {
    /// `key=value` lines, one field per line.
    pub fn to_key_values(&self) -> String {
        let divs: Vec<String> = self.divisors_gt1.iter().map(u64::to_string).collect();
        format!(
            "n={}\ndivisors={}\nphi={}\nsub_order={}\ng={}\nf={}\npsi={}\npsi_star={}\n",
            self.n,
            divs.join(","),
            self.phi,
            self.sub_order,
            self.g,
            self.f,
            self.psi,
            self.psi_star
        )
    }
}

pub fn profile(n: u64) -> Result<NumberProfile> {
    check_coprime_to_six(n)?;
    let divisors_gt1: Vec<u64> = divisors(n).into_iter().skip(1).collect();
    let phi = euler_phi(n);
    let sub_order = neg_one_neg_two_order(n)?;
    let g = g_from(phi, sub_order);
    let mut f = 0;
    let mut psi_star = 0i64;
    for &d in &divisors_gt1 {
        let gd = g_of(d)?;
        f += gd;
        psi_star += euler_phi(d) as i64 - 18 * gd as i64;
    }
    assert_eq!(psi_star, n as i64 - 1 - 18 * f as i64, "ψ* identity failed at n={n}");
    Ok(NumberProfile { n, divisors_gt1, phi, sub_order, g, f, psi: phi as i64 - 18 * g as i64, psi_star })
}

/// Per-`n` values for every `n ≤ limit`, filled by divisor sieving.
/// Entries for `n` divisible by 2 or 3 are meaningless and never read.
struct SieveTable {
    phi: Vec<u64>,
    g: Vec<u64>,
    f: Vec<u64>,
    psi_star: Vec<i64>,
}

impl SieveTable {
    fn build(limit: u64, exec: Exec) -> Self {
        let len = limit as usize + 1;
        let mut phi: Vec<u64> = (0..len as u64).collect();
        for p in 2..len {
            if phi[p] == p as u64 {
                for m in (p..len).step_by(p) {
                    phi[m] -= phi[m] / p as u64;
                }
            }
        }
        let ds: Vec<u64> = (5..=limit).filter(|d| d % 2 != 0 && d % 3 != 0).collect();
        let gs =
            exec.map(ds.clone(), |d| g_from(phi[d as usize], neg_one_neg_two_order(d).expect("d is a unit modulus")));
        let mut g = vec![0u64; len];
        let mut f = vec![0u64; len];
        let mut psi_star = vec![0i64; len];
        for (&d, &gd) in ds.iter().zip(&gs) {
            g[d as usize] = gd;
            let psi = phi[d as usize] as i64 - 18 * gd as i64;
            for m in (d as usize..len).step_by(d as usize) {
                f[m] += gd;
                psi_star[m] += psi;
            }
        }
        SieveTable { phi, g, f, psi_star }
    }

    fn psi(&self, n: u64) -> i64 {
        self.phi[n as usize] as i64 - 18 * self.g[n as usize] as i64
    }
}

fn admissible(limit: u64) -> impl Iterator<Item = u64> {
    (5..=limit).filter(|n| n % 2 != 0 && n % 3 != 0)
}

/// One row of a scan: `n, φ(n), f(n), ψ(n), ψ*(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: u64,
    pub phi: u64,
    pub f: u64,
    pub psi: i64,
    pub psi_star: i64,
}

/// Rows for every `n ≡ 1, 5 (mod 6)` with `1 < n ≤ limit`.
pub fn scan_table(limit: u64, exec: Exec) -> Vec<ScanRow> {
    let table = SieveTable::build(limit, exec);
    admissible(limit)
        .map(|n| {
            let row = ScanRow {
                n,
                phi: table.phi[n as usize],
                f: table.f[n as usize],
                psi: table.psi(n),
                psi_star: table.psi_star[n as usize],
            };
            assert_eq!(row.psi_star, n as i64 - 1 - 18 * row.f as i64, "ψ* identity failed at n={n}");
            row
        })
        .collect()
}

/// All `n ≡ 1, 5 (mod 6)`, `1 < n ≤ limit`, with `ψ*(n) ≤ 0`.
pub fn scan_exceptions(limit: u64) -> Vec<u64> {
    scan_exceptions_with(limit, Exec::default())
}

pub fn scan_exceptions_with(limit: u64, exec: Exec) -> Vec<u64> {
    scan_table(limit, exec).into_iter().filter(|r| r.psi_star <= 0).map(|r| r.n).collect()
}

/// All `(n, ψ(n))` with `ψ(n) < 0`, `n ≤ limit`.
pub fn negative_psi_scan(limit: u64) -> Vec<(u64, i64)> {
    negative_psi_scan_with(limit, Exec::default())
}

pub fn negative_psi_scan_with(limit: u64, exec: Exec) -> Vec<(u64, i64)> {
    scan_table(limit, exec).into_iter().filter(|r| r.psi < 0).map(|r| (r.n, r.psi)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: u64,
    pub f: u64,
    pub ratio: f64,
}

/// Every `step`-th admissible `n ≤ limit`, starting at 5, with `f(n)/n`.
pub fn f_growth_table(limit: u64, step: usize) -> Vec<GrowthRow> {
    let table = SieveTable::build(limit, Exec::default());
    admissible(limit)
        .step_by(step.max(1))
        .map(|n| {
            let f = table.f[n as usize];
            GrowthRow { n, f, ratio: f as f64 / n as f64 }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_examples() {
        assert_eq!(subgroup_order(7, &[-1, -2]).unwrap(), 6);
        assert_eq!(subgroup_order(127, &[-1, -2]).unwrap(), 14);
        assert_eq!(subgroup_order(13, &[-1, -2]).unwrap(), 12);
        assert_eq!(subgroup_order(5, &[3, 4]).unwrap(), 4);
        assert!(subgroup_order(8, &[-1]).is_err());
        assert!(matches!(subgroup_order(15, &[3]), Err(Error::NotAUnit { .. })));
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_of(7).unwrap(), 1);
        assert_eq!(g_of(13).unwrap(), 0);
        assert_eq!(g_of(127).unwrap(), 9);
        assert!(g_of(9).is_err());
        assert!(g_of(14).is_err());
    }

    #[test]
    fn profile_examples() {
        let p7 = profile(7).unwrap();
        assert_eq!((p7.f, p7.psi_star, p7.psi), (1, -12, -12));
        let p13 = profile(13).unwrap();
        assert_eq!((p13.f, p13.psi_star), (0, 12));
        let p49 = profile(49).unwrap();
        assert_eq!(p49.divisors_gt1, vec![7, 49]);
        assert_eq!((p49.f, p49.psi_star), (2, 12));
        assert!(profile(1).is_err());
        assert!(profile(15).is_err());
    }

    #[test]
    fn fast_order_matches_closure() {
        for d in (3..10_000u64).step_by(2) {
            let closure = subgroup_order(d, &[-1, -2]).unwrap();
            assert_eq!(neg_one_neg_two_order(d).unwrap(), closure, "d={d}");
            assert_eq!(closure % 2, 0);
            assert_eq!(euler_phi(d) % closure, 0);
        }
    }

    #[test]
    fn subgroup_exceeds_log2() {
        for d in (5..5000u64).filter(|d| d % 2 != 0 && d % 3 != 0) {
            let ord2 = multiplicative_order(2, d);
            assert!(neg_one_neg_two_order(d).unwrap() >= ord2);
            assert!(ord2 as f64 >= (d as f64).log2(), "d={d}");
        }
    }

    #[test]
    fn totient_divisor_sum() {
        for n in (5..3000u64).filter(|n| n % 2 != 0 && n % 3 != 0) {
            let s: u64 = divisors(n).into_iter().skip(1).map(euler_phi).sum();
            assert_eq!(s, n - 1);
        }
    }

    #[test]
    fn sieve_matches_profiles() {
        let rows = scan_table(2000, Exec::Sequential);
        for r in rows {
            let p = profile(r.n).unwrap();
            assert_eq!((r.phi, r.f, r.psi, r.psi_star), (p.phi, p.f, p.psi, p.psi_star));
        }
    }

    #[test]
    fn scans() {
        assert_eq!(negative_psi_scan(200), vec![(7, -12), (11, -8), (31, -24), (43, -12), (127, -36)]);
        assert_eq!(negative_psi_scan(30), vec![(7, -12), (11, -8)]);
        assert!(negative_psi_scan(5).is_empty());
        assert_eq!(scan_exceptions(600), vec![7, 11, 19, 31, 43, 73, 127, 511]);
        assert!(scan_exceptions(6).is_empty());
    }

    #[test]
    fn growth_rows() {
        let t = f_growth_table(600, 1);
        let row = |n| *t.iter().find(|r| r.n == n).unwrap();
        assert_eq!(row(13).f, 0);
        assert_eq!(row(13).ratio, 0.0);
        assert_eq!(row(7).f, 1);
        assert_eq!(row(511).f, g_of(7).unwrap() + g_of(73).unwrap() + g_of(511).unwrap());
        let sparse = f_growth_table(100, 5);
        assert_eq!(sparse[0].n, 5);
        assert_eq!(sparse[1].n, 19);
    }
}
