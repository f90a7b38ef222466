//! Coarse classification of a finite sequence by the maxima of its quarters.

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    MonotoneIncreasing,
    Bounded,
    Oscillating,
}

/// Splits `values` into four consecutive runs and compares their maxima:
/// strictly increasing maxima read as growth, a last maximum no larger than
/// the one before it as bounded, anything else as oscillating. Fewer than
/// four values are bounded.
pub fn classify(values: &[Rational]) -> Trend {
    if values.len() < 4 {
        return Trend::Bounded;
    }
    let n = values.len();
    let maxima: Vec<&Rational> = (0..4)
        .map(|k| values[k * n / 4..(k + 1) * n / 4].iter().max().expect("nonempty run"))
        .collect();
    if maxima.windows(2).all(|w| w[0] < w[1]) {
        Trend::MonotoneIncreasing
    } else if maxima[3] <= maxima[2] {
        Trend::Bounded
    } else {
        Trend::Oscillating
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn shapes() {
        let up: Vec<Rational> = (1..=12).map(int).collect();
        assert_eq!(classify(&up), Trend::MonotoneIncreasing);
        let flat = vec![int(3); 12];
        assert_eq!(classify(&flat), Trend::Bounded);
        let wobble: Vec<Rational> = [1, 5, 1, 2, 1, 2, 1, 9].into_iter().map(int).collect();
        assert_eq!(classify(&wobble), Trend::Oscillating);
    }
}
