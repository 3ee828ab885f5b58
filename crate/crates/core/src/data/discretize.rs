use super::{Column, DataError};

/// Bin continuous values into left-open, right-closed intervals.
///
/// With `include_lowest` the first interval also holds its left endpoint and
/// is labelled `[a,b]`; every other interval is labelled `(a,b]`. Endpoints
/// are printed with `label_digits` significant digits, widened as needed so
/// that neighbouring breakpoints never print identically.
pub fn discretize(
    name: &str,
    values: &[f64],
    breakpoints: &[f64],
    include_lowest: bool,
    label_digits: usize,
) -> Result<Column, DataError> {
    if breakpoints.len() < 2
        || breakpoints.iter().any(|b| !b.is_finite())
        || breakpoints.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(DataError::BadBreakpoints);
    }
    let low = breakpoints[0];
    let high = breakpoints[breakpoints.len() - 1];

    let mut codes = Vec::with_capacity(values.len());
    for &v in values {
        let in_first = include_lowest && v == low;
        if !(in_first || (v > low && v <= high)) {
            return Err(DataError::OutOfRange {
                value: v,
                low,
                high,
            });
        }
        // Smallest i with v <= breakpoints[i + 1].
        let code = breakpoints[1..].partition_point(|&b| b < v);
        codes.push(code);
    }

    let printed = endpoint_labels(breakpoints, label_digits.max(1));
    let labels = (0..breakpoints.len() - 1)
        .map(|i| {
            let open = if i == 0 && include_lowest { '[' } else { '(' };
            format!("{open}{},{}]", printed[i], printed[i + 1])
        })
        .collect();
    Column::categorical(name, codes, labels)
}

fn endpoint_labels(breakpoints: &[f64], digits: usize) -> Vec<String> {
    let mut digits = digits;
    loop {
        let printed: Vec<String> = breakpoints
            .iter()
            .map(|&b| format_significant(b, digits))
            .collect();
        if digits >= 17 || printed.windows(2).all(|w| w[0] != w[1]) {
            return printed;
        }
        digits += 1;
    }
}

/// Format like C's `%.{digits}g`: fixed notation unless the decimal
/// exponent is below -4 or at least `digits`, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
