//! Exact Weyl-algebra arithmetic: polynomial differential operators in the
//! lower-triangular coordinates, both sectors, with polynomial coefficients in
//! the spectral and representation parameters.

pub mod coeff;
pub mod element;
pub mod rational;

pub use coeff::{rat, sigma, CoeffPoly, Indet, MAX_RANK, NCOEF};
pub use element::{set_term_cap, term_cap, var_index, var_pair, WeylElement, WeylError, NVAR};
pub use rational::{GaussRat, Q};

pub fn weyl_add(a: &WeylElement, b: &WeylElement) -> WeylElement {
    a + b
}

pub fn weyl_mul(a: &WeylElement, b: &WeylElement) -> Result<WeylElement, WeylError> {
    a.try_mul(b)
}

pub fn weyl_commutator(a: &WeylElement, b: &WeylElement) -> Result<WeylElement, WeylError> {
    Ok(&a.try_mul(b)? - &b.try_mul(a)?)
}

pub fn substitute_spectral(a: &WeylElement, which: Indet, value: &CoeffPoly) -> WeylElement {
    a.substitute(which, value)
}

pub fn weyl_apply(a: &WeylElement, p: &WeylElement) -> Result<WeylElement, WeylError> {
    a.try_apply(p)
}

/// Exact equality of normal forms.
pub fn weyl_equal(a: &WeylElement, b: &WeylElement) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> WeylElement {
        WeylElement::z(2, 1, false)
    }
    fn d() -> WeylElement {
        WeylElement::d(2, 1, false)
    }

    #[test]
    fn canonical_commutator() {
        assert_eq!(&d() * &z(), &(&z() * &d()) + &WeylElement::one());
        assert_eq!(weyl_commutator(&d(), &z()).unwrap(), WeylElement::one());
        assert!(weyl_commutator(&z(), &WeylElement::z(2, 1, true)).unwrap().is_zero());
    }

    #[test]
    fn euler_operator_square() {
        let e = &z() * &d();
        let expect = &(&(&z() * &z()) * &(&d() * &d())) + &e;
        assert_eq!(&e * &e, expect);
    }

    #[test]
    fn sectors_commute() {
        let zb = WeylElement::z(2, 1, true);
        assert_eq!(&d() * &zb, &zb * &d());
    }

    #[test]
    fn addition_cancels() {
        let x = &z() * &d();
        assert!((&x + &-&x).is_zero());
        assert_eq!(&x + &x, x.scale_int(2));
        assert_eq!(&x + &WeylElement::zero(), x);
    }

    #[test]
    fn apply_on_powers() {
        let z3 = &(&z() * &z()) * &z();
        assert_eq!(weyl_apply(&(&z() * &d()), &z3).unwrap(), z3.scale_int(3));
        assert!(weyl_apply(&WeylElement::d(2, 1, true), &z3).unwrap().is_zero());
        let op = &WeylElement::indet(Indet::U) + &(&z() * &d());
        let z2 = &z() * &z();
        let got = weyl_apply(&op, &z2).unwrap();
        assert_eq!(got, z2.scale(&CoeffPoly::var_plus(Indet::U, 2)));
    }

    #[test]
    fn equality_is_on_normal_forms() {
        let dz = &d() * &z();
        assert!(weyl_equal(&dz, &(&(&z() * &d()) + &WeylElement::one())));
        assert!(!weyl_equal(&(&z() * &d()), &dz));
    }

    #[test]
    fn spectral_substitution() {
        let op = &WeylElement::indet(Indet::U) + &(&z() * &d());
        let shifted = substitute_spectral(&op, Indet::U, &CoeffPoly::var_plus(Indet::U, -1));
        let expect = &(&WeylElement::indet(Indet::U) - &WeylElement::one()) + &(&z() * &d());
        assert_eq!(shifted, expect);
        let s1 = substitute_spectral(&op, Indet::U, &CoeffPoly::var(Indet::Sigma(1)));
        assert_eq!(s1.degree_in(Indet::Sigma(1)), 1);
        assert_eq!(s1.degree_in(Indet::U), 0);
    }

    #[test]
    fn dump_grammar() {
        let op = &WeylElement::indet(Indet::U) + &(&z() * &d()).scale(&rat(-3, 2));
        assert_eq!(op.to_string(), "(1+0i)/1*u + (-3+0i)/2*z21*d21");
    }

    #[test]
    fn var_index_roundtrip() {
        for i in 2..=MAX_RANK {
            for j in 1..i {
                assert_eq!(var_pair(var_index(i, j)), (i, j));
            }
        }
        assert_eq!(var_index(2, 1), 0);
        assert_eq!(var_index(3, 2), 2);
        assert_eq!(var_index(4, 1), 3);
    }

    #[test]
    fn term_cap_is_enforced() {
        let x = &(&z() + &d()) + &WeylElement::z(3, 1, false);
        let mut p = x.clone();
        for _ in 0..3 {
            p = &p * &x;
        }
        let old = term_cap();
        set_term_cap(5);
        let r = p.try_mul(&x);
        set_term_cap(old);
        assert!(matches!(r, Err(WeylError::TermCap { .. })));
    }
}
