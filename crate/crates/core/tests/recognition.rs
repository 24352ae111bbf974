use catseries_core::closed_form::{ClosedForm, Monomial};
use catseries_core::combinatorics::int;
use catseries_core::pslq::{parse_basis, recognize};
use proptest::prelude::*;

fn basis() -> Vec<Monomial> {
    parse_basis("1, pi^-1, G^4*pi^-3").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn integer_combinations_round_trip(a in -50i64..=50, b in -50i64..=50, c in -50i64..=50) {
        prop_assume!(a != 0 || b != 0 || c != 0);
        let basis = basis();
        let mut want = ClosedForm::zero();
        for (m, q) in basis.iter().zip([a, b, c]) {
            want = want.add(&ClosedForm::term(*m, int(q)));
        }
        let v = want.eval(256).unwrap();
        prop_assert_eq!(recognize(&v, &basis, 100, 1).unwrap(), Some(want));
    }
}

#[test]
fn rejects_a_value_outside_the_basis() {
    let basis = parse_basis("1, pi^-1").unwrap();
    let v = "1*ln2".parse::<ClosedForm>().unwrap().eval(256).unwrap();
    assert_eq!(recognize(&v, &basis, 1000, 1000).unwrap(), None);
}
