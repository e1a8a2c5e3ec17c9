use crate::functions::StepFunction;

/// Level function: derivative of the least concave majorant of `∫_0^t f`.
///
/// The majorant is the upper hull of the primitive sampled at the
/// breakpoints, built with a monotone chain.
pub fn level_function(f: &StepFunction) -> StepFunction {
    if f.is_nonincreasing() {
        return f.clone();
    }
    let n = f.num_pieces();
    let cum = f.cumulative();
    let xs: Vec<f64> = (0..=n).map(|i| if i == n { 1.0 } else { f.start(i) }).collect();
    let mut hull: Vec<usize> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (xs[a] - xs[o]) * (cum[k] - cum[o]) - (cum[a] - cum[o]) * (xs[k] - xs[o]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut breaks = Vec::with_capacity(hull.len());
    let mut values = Vec::with_capacity(hull.len());
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        // A hull edge over a single piece keeps that piece's value exactly.
        let slope = if j == i + 1 { f.values()[i] } else { (cum[j] - cum[i]) / (xs[j] - xs[i]) };
        values.push(slope.max(0.0));
        if j < n {
            breaks.push(xs[j]);
        }
    }
    // Rounding can leave a vanishing uptick between nearly collinear hull edges.
    for k in 1..values.len() {
        if values[k] > values[k - 1] {
            values[k] = values[k - 1];
        }
    }
    StepFunction::new(breaks, values).expect("hull vertices are original breakpoints")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonincreasing_input_is_fixed() {
        let f = StepFunction::new(vec![0.2, 0.5], vec![3.0, 2.0, 1.0]).unwrap();
        assert_eq!(level_function(&f), f);
    }

    #[test]
    fn averages_an_increasing_pair() {
        let f = StepFunction::new(vec![0.5], vec![1.0, 3.0]).unwrap();
        let g = level_function(&f);
        assert_eq!(g.values(), &[2.0]);
    }

    #[test]
    fn hull_skips_a_dip() {
        let f = StepFunction::new(vec![0.25, 0.5], vec![4.0, 0.0, 2.0]).unwrap();
        let g = level_function(&f);
        assert_eq!(g.breakpoints(), &[0.25]);
        assert!((g.values()[1] - 4.0 / 3.0).abs() < 1e-15);
    }
}
