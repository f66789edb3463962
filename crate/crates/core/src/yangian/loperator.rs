//! Principal-series L-operators `L(u) = u·1 + E` built from `E = −z(D+σ)z⁻¹`,
//! and the recursive assembly from the embedded `gl_{n−1}` operator.

use crate::schemes::Sector;
use crate::weyl::{sigma, CoeffPoly, Indet, WeylElement};

/// `n × n` matrix of Weyl elements; `entries[i−1][k−1] = L(u)^i_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub n: usize,
    pub sector: Sector,
    entries: Vec<Vec<WeylElement>>,
}

impl OperatorMatrix {
    pub fn from_entries(n: usize, sector: Sector, entries: Vec<Vec<WeylElement>>) -> Self {
        assert_eq!(entries.len(), n);
        OperatorMatrix { n, sector, entries }
    }

    /// `L(u)^i_k` (1-based).
    pub fn get(&self, i: usize, k: usize) -> &WeylElement {
        &self.entries[i - 1][k - 1]
    }

    pub fn set(&mut self, i: usize, k: usize, w: WeylElement) {
        self.entries[i - 1][k - 1] = w;
    }

    /// `T(u − c)^i_k`.
    pub fn shifted_entry(&self, i: usize, k: usize, c: i64) -> WeylElement {
        let e = self.get(i, k);
        if i == k && c != 0 {
            e - &WeylElement::int(c)
        } else {
            e.clone()
        }
    }

    /// The same operator with the spectral parameter renamed `u → v`.
    pub fn at_v(&self) -> OperatorMatrix {
        let v = CoeffPoly::var(Indet::V);
        self.map(|w| w.substitute(Indet::U, &v))
    }

    pub fn map(&self, f: impl Fn(&WeylElement) -> WeylElement) -> OperatorMatrix {
        OperatorMatrix {
            n: self.n,
            sector: self.sector,
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    /// Entries agree as normal forms.
    pub fn equals(&self, o: &OperatorMatrix) -> bool {
        self.n == o.n && self.entries == o.entries
    }
}

/// Coordinate `z_{ij}` of the rank-`n` operator embedded with `offset`.
fn zv(i: usize, j: usize, off: usize, anti: bool) -> WeylElement {
    if i == j {
        WeylElement::one()
    } else {
        WeylElement::z(i + off, j + off, anti)
    }
}

/// L-operator of rank `n` acting on `z_{i+off, j+off}` with parameters
/// `σ_{1+off}, …, σ_{n+off}`.
pub fn build_l_embedded(n: usize, off: usize, sector: Sector) -> OperatorMatrix {
    let anti = sector.is_anti();
    let zero = WeylElement::zero();
    let zmat: Vec<Vec<WeylElement>> =
        (1..=n).map(|i| (1..=n).map(|j| if i >= j { zv(i, j, off, anti) } else { zero.clone() }).collect()).collect();
    // Unitriangular inverse by forward substitution.
    let mut zinv = vec![vec![WeylElement::zero(); n]; n];
    for i in 0..n {
        zinv[i][i] = WeylElement::one();
        for j in (0..i).rev() {
            let mut acc = WeylElement::zero();
            for k in j..i {
                acc = &acc + &(&zmat[i][k] * &zinv[k][j]);
            }
            zinv[i][j] = -&acc;
        }
    }
    // (D + σ)[c][d]: D_{dc} = Σ_{k≥d} z_{kd} ∂_{kc} above the diagonal, σ_c on it.
    let mut dsig = vec![vec![WeylElement::zero(); n]; n];
    for c in 1..=n {
        dsig[c - 1][c - 1] = WeylElement::scalar(sigma(c + off, anti));
        for d in c + 1..=n {
            let mut acc = WeylElement::zero();
            for k in d..=n {
                acc = &acc + &(&zv(k, d, off, anti) * &WeylElement::d(k + off, c + off, anti));
            }
            dsig[c - 1][d - 1] = acc;
        }
    }
    let prod = matmul(&matmul(&zmat, &dsig), &zinv);
    let u = WeylElement::indet(Indet::U);
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    let e = -&prod[i][k];
                    if i == k {
                        &u + &e
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    OperatorMatrix { n, sector, entries }
}

fn matmul(a: &[Vec<WeylElement>], b: &[Vec<WeylElement>]) -> Vec<Vec<WeylElement>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = WeylElement::zero();
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(&a[i][k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Principal-series L-operator of rank `n` in one sector.
pub fn build_l_operator(n: usize, sector: Sector) -> OperatorMatrix {
    assert!(n >= 2, "rank must be at least 2");
    build_l_embedded(n, 0, sector)
}

/// Rank-`n` operator assembled from the embedded rank-`(n−1)` one:
/// `L^1_1 = u−σ_1+n−1+Σ_k z_{k1}∂_{k1}`, `L^1_j = −∂_{j1}`,
/// `L^i_1 = z_{i1}(u−σ_1+n−1) − Σ_k z_{k1}(𝓛^{i−1}_{k−1} − z_{i1}∂_{k1})`,
/// `L^i_j = 𝓛^{i−1}_{j−1} − z_{i1}∂_{j1}`.
pub fn build_l_recursive_embedded(n: usize, off: usize, sector: Sector) -> OperatorMatrix {
    let anti = sector.is_anti();
    if n == 1 {
        let e = &WeylElement::indet(Indet::U) - &WeylElement::scalar(sigma(1 + off, anti));
        return OperatorMatrix { n: 1, sector, entries: vec![vec![e]] };
    }
    let inner = build_l_recursive_embedded(n - 1, off + 1, sector);
    let z1 = |i: usize| WeylElement::z(i + off, 1 + off, anti);
    let d1 = |i: usize| WeylElement::d(i + off, 1 + off, anti);
    let u = WeylElement::indet(Indet::U);
    let head = &(&u - &WeylElement::scalar(sigma(1 + off, anti))) + &WeylElement::int(n as i64 - 1);
    let mut entries = vec![vec![WeylElement::zero(); n]; n];
    let mut l11 = head.clone();
    for k in 2..=n {
        l11 = &l11 + &(&z1(k) * &d1(k));
    }
    entries[0][0] = l11;
    for j in 2..=n {
        entries[0][j - 1] = -&d1(j);
    }
    for i in 2..=n {
        let mut li1 = &z1(i) * &head;
        for k in 2..=n {
            let t = inner.get(i - 1, k - 1) - &(&z1(i) * &d1(k));
            li1 = &li1 - &(&z1(k) * &t);
        }
        entries[i - 1][0] = li1;
        for j in 2..=n {
            entries[i - 1][j - 1] = inner.get(i - 1, j - 1) - &(&z1(i) * &d1(j));
        }
    }
    OperatorMatrix { n, sector, entries }
}

pub fn build_l_recursive(n: usize, sector: Sector) -> OperatorMatrix {
    assert!(n >= 2, "rank must be at least 2");
    build_l_recursive_embedded(n, 0, sector)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> WeylElement {
        WeylElement::indet(Indet::U)
    }
    fn s(j: usize) -> WeylElement {
        WeylElement::scalar(sigma(j, false))
    }

    #[test]
    fn gl2_matches_display() {
        let l = build_l_operator(2, Sector::Hol);
        let z = WeylElement::z(2, 1, false);
        let d = WeylElement::d(2, 1, false);
        let zd = &z * &d;
        let l11 = &(&(&u() - &s(1)) + &WeylElement::one()) + &zd;
        assert_eq!(l.get(1, 1), &l11);
        assert_eq!(l.get(1, 2), &-&d);
        let inner = &(&(&zd + &s(2)) + &WeylElement::one()) - &s(1);
        assert_eq!(l.get(2, 1), &(&z * &inner));
        assert_eq!(l.get(2, 2), &(&(&u() - &s(2)) - &zd));
    }

    #[test]
    fn gl3_first_entry() {
        let l = build_l_operator(3, Sector::Hol);
        let x = &WeylElement::z(2, 1, false) * &WeylElement::d(2, 1, false);
        let y = &WeylElement::z(3, 1, false) * &WeylElement::d(3, 1, false);
        let expect = &(&(&(&u() - &s(1)) + &WeylElement::int(2)) + &x) + &y;
        assert_eq!(l.get(1, 1), &expect);
        assert_eq!(l.get(1, 2), &-&WeylElement::d(2, 1, false));
    }

    #[test]
    fn anti_sector_uses_barred_symbols() {
        let l = build_l_operator(2, Sector::Anti);
        let zb = WeylElement::z(2, 1, true);
        let db = WeylElement::d(2, 1, true);
        let expect = &(&(&u() - &WeylElement::scalar(sigma(1, true))) + &WeylElement::one()) + &(&zb * &db);
        assert_eq!(l.get(1, 1), &expect);
    }

    #[test]
    fn recursive_matches_direct() {
        for n in 2..=4 {
            for sec in Sector::BOTH {
                assert!(build_l_recursive(n, sec).equals(&build_l_operator(n, sec)), "n = {n}");
            }
        }
    }

    #[test]
    fn entries_are_linear_in_u() {
        let l = build_l_operator(4, Sector::Hol);
        for i in 1..=4 {
            for k in 1..=4 {
                let e = l.get(i, k);
                assert!(e.degree_in(Indet::U) <= 1);
                let lead = e.coefficient_of(Indet::U, 1);
                assert_eq!(lead, if i == k { WeylElement::one() } else { WeylElement::zero() });
            }
        }
    }
}
