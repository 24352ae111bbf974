use catseries_core::closed_form::{ClosedForm, Monomial};
use catseries_core::combinatorics::{int, odd_harmonic, quarter_harmonic_diff, rat};
use catseries_core::constants::{constant, Constant};
use catseries_core::family::{partial_sum, FamilyDescriptor, FamilyId};
use catseries_core::series::{alternating_partial, sum_series};
use catseries_core::TrackedReal;

#[test]
fn half_integer_harmonic_numbers() {
    let prec = 192;
    let ln2 = constant(Constant::Ln2, prec).unwrap();
    // H_{1/2} = 2 - 2 ln 2, then H_r = H_{r-1} + 1/r
    let mut h = TrackedReal::from_int(2, prec).sub(&ln2.mul_int(2));
    for n in 1..=10 {
        if n > 1 {
            h = h.add_rational(&rat(2, 2 * n - 1));
        }
        let cf = ClosedForm::rational(int(2) * odd_harmonic(n))
            .add(&ClosedForm::term(Monomial::new(0, 0, 1, 0), int(-2)));
        assert!(cf.eval(prec).unwrap().overlaps(&h), "n={n}");
    }
}

#[test]
fn quarter_harmonic_pi_parts_cancel_pairwise() {
    for m in 1..=10 {
        let s = quarter_harmonic_diff(m).add(&quarter_harmonic_diff(m - 1));
        assert!(s.is_rational(), "m={m}: {s}");
        assert!(!quarter_harmonic_diff(m).is_rational());
    }
}

#[test]
fn acceleration_agrees_with_long_partial_sums() {
    let n = 100_000;
    for f in [FamilyId::F2, FamilyId::F5, FamilyId::F8, FamilyId::F9] {
        for m in 0..=1 {
            let eps = 1e-20;
            let acc = sum_series(f, m, eps).unwrap();
            let (partial, next) = alternating_partial(f, m, n, 128).unwrap();
            let gap = acc.value.sub(&partial).abs_upper().to_f64();
            assert!(gap <= eps + next.to_f64(), "{f} m={m}: {gap:e} vs {:e}", next.to_f64());
        }
    }
}

#[test]
fn exact_partial_sums_do_not_depend_on_threads() {
    let want = partial_sum(FamilyId::F7, 2, 60).unwrap();
    let handles: Vec<_> =
        (0..4).map(|_| std::thread::spawn(|| partial_sum(FamilyId::F7, 2, 60).unwrap())).collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), want);
    }
}

#[test]
fn shifted_families_start_with_a_zero_term() {
    for m in 0..6 {
        let d = FamilyDescriptor::new(FamilyId::F4, m).unwrap();
        assert_eq!(d.term_unchecked(d.start), int(0));
    }
}
