use num_bigint::BigInt;
use pmotion::qseries::{pochhammer_finite, qbinomial, PochSign};
use pmotion::TruncatedSeries;
use proptest::prelude::*;

const ORDER: usize = 16;

fn series() -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(-1000i64..=1000, ORDER + 1).prop_map(|c| TruncatedSeries::from_coeffs(ORDER, c))
}

fn unit() -> impl Strategy<Value = TruncatedSeries> {
    (prop::bool::ANY, series()).prop_map(|(neg, s)| {
        let head = s.coefficient(0).unwrap();
        let target = if neg { -1 } else { 1 };
        s.add(&TruncatedSeries::monomial(BigInt::from(target) - head, 0, ORDER))
            .unwrap()
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn unit_inverse(u in unit()) {
        let inv = u.inverse_unit().unwrap();
        prop_assert_eq!(u.mul(&inv).unwrap(), TruncatedSeries::one(ORDER));
    }

    #[test]
    fn truncation_commutes_with_product(a in series(), b in series(), n in 0usize..=ORDER) {
        let whole = a.mul(&b).unwrap().truncate(n).unwrap();
        let parts = a.truncate(n).unwrap().mul(&b.truncate(n).unwrap()).unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn pascal_rule(n in 1i64..10, j in 1i64..10) {
        // [n, j] = [n-1, j-1] + q^j [n-1, j]
        let lhs = qbinomial(n, j, 1, ORDER);
        let rhs = qbinomial(n - 1, j - 1, 1, ORDER)
            .add(&qbinomial(n - 1, j, 1, ORDER).monomial_shift(&BigInt::from(1), j))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn finite_pochhammer_splits(m in 1u32..4, n1 in 0u32..6, n2 in 0u32..6) {
        // (x;q)_{n1+n2} = (x;q)_{n1} (x q^{n1};q)_{n2}
        let whole = pochhammer_finite(PochSign::Pos, m, 1, n1 + n2, ORDER);
        let left = pochhammer_finite(PochSign::Pos, m, 1, n1, ORDER);
        let right = pochhammer_finite(PochSign::Pos, m + n1, 1, n2, ORDER);
        prop_assert_eq!(whole, left.mul(&right).unwrap());
    }
}
