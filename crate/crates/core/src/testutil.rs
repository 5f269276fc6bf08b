use crate::rigor::{Enclosure, ExactRational};

/// `digits` is a truncated decimal expansion of the true value: the
/// enclosure must meet the cell between it and the next value at that
/// digit count.
pub(crate) fn assert_digits(e: &Enclosure, digits: &str) {
    let frac_len = digits.split_once('.').map_or(0, |(_, f)| f.len());
    let ulp: ExactRational = format!("1e-{frac_len}").parse().unwrap();
    let v: ExactRational = digits.parse().unwrap();
    let (a, b) = if v.is_negative() {
        (&v - &ulp, v.clone())
    } else {
        (v.clone(), &v + &ulp)
    };
    assert!(
        e.lo().to_rational() <= b && a <= e.hi().to_rational(),
        "{e:?} misses {digits}"
    );
}
