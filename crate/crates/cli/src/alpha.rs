//! Parsing of unimodular constants given on the command line.

use std::f64::consts::PI;

use clarkrif::Complex64;

/// Relative deviation from the unit circle above which a warning is printed.
pub const NORMALIZE_WARN: f64 = 1e-6;

/// Parse `alpha` and project it onto the unit circle.
///
/// Accepted forms: `1`, `-1`, `i`, `-i`, Cartesian `a+bi` / `a-bi` / `bi`,
/// and polar `exp(i*x)`, `e^{i*x}`, `e^(ix)` where `x` is a real number,
/// optionally multiplied by `pi` (or `π`) and divided by a number, as in
/// `3pi/4` or `-π/2`. Returns the normalized value and, if the input was
/// off the circle by more than [`NORMALIZE_WARN`], a warning.
pub fn parse_alpha(text: &str) -> Result<(Complex64, Option<String>), String> {
    let raw = parse_complex(text)?;
    let m = raw.norm();
    if !m.is_finite() || m == 0.0 {
        return Err(format!("alpha {text:?} cannot be normalized to the unit circle"));
    }
    let warning = ((m - 1.0).abs() > NORMALIZE_WARN)
        .then(|| format!("alpha {text:?} has modulus {m}; normalized to the unit circle"));
    Ok((raw / m, warning))
}

/// Split a comma-separated list and parse every item.
pub fn parse_alpha_list(text: &str) -> Result<Vec<(String, Complex64, Option<String>)>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_alpha(s).map(|(a, w)| (s.to_string(), a, w)))
        .collect()
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty alpha".into());
    }
    if let Some(arg) = polar_argument(&s) {
        let theta = parse_angle(arg).ok_or_else(|| format!("cannot parse angle {arg:?} in {text:?}"))?;
        return Ok(Complex64::from_polar(1.0, theta));
    }
    parse_cartesian(&s).ok_or_else(|| format!("cannot parse alpha {text:?}"))
}

/// The `x` in `exp(i*x)`, `e^{ix}`, `e^(i x)`.
fn polar_argument(s: &str) -> Option<&str> {
    let body = s
        .strip_prefix("exp(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| s.strip_prefix("e^{").and_then(|r| r.strip_suffix('}')))
        .or_else(|| s.strip_prefix("e^(").and_then(|r| r.strip_suffix(')')))?;
    let body = body.strip_prefix('i')?;
    Some(body.strip_prefix('*').unwrap_or(body))
}

/// `[sign] [number] [*] [pi] [/ number]`, at least one of number and pi.
fn parse_angle(s: &str) -> Option<f64> {
    let (head, denom) = match s.split_once('/') {
        Some((h, d)) => (h, d.parse::<f64>().ok()?),
        None => (s, 1.0),
    };
    let (sign, head) = match head.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, head.strip_prefix('+').unwrap_or(head)),
    };
    let (coef, has_pi) = if let Some(c) = head.strip_suffix("pi").or_else(|| head.strip_suffix('π')) {
        let c = c.strip_suffix('*').unwrap_or(c);
        (if c.is_empty() { 1.0 } else { c.parse::<f64>().ok()? }, true)
    } else {
        (head.parse::<f64>().ok()?, false)
    };
    let x = sign * coef * if has_pi { PI } else { 1.0 } / denom;
    x.is_finite().then_some(x)
}

fn parse_cartesian(s: &str) -> Option<Complex64> {
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() { 0.0 } else { re_part.parse::<f64>().ok()? };
    let im_part = im_part.strip_suffix('*').unwrap_or(im_part);
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(text: &str, re: f64, im: f64) {
        let (a, _) = parse_alpha(text).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert!((a - Complex64::new(re, im)).norm() < 1e-12, "{text} -> {a}");
    }

    #[test]
    fn literals() {
        close("1", 1.0, 0.0);
        close("-1", -1.0, 0.0);
        close("i", 0.0, 1.0);
        close("-i", 0.0, -1.0);
    }

    #[test]
    fn cartesian() {
        let h = 0.5f64.sqrt();
        close("0.7071067811865476+0.7071067811865476i", h, h);
        close("0.6-0.8i", 0.6, -0.8);
        close("-0.8i", 0.0, -1.0);
        close("1e-1+0.99498743710662i", 0.1, 0.99498743710662);
    }

    #[test]
    fn polar() {
        close("exp(i*pi/2)", 0.0, 1.0);
        close("e^{iπ/2}", 0.0, 1.0);
        close("e^{i*3pi/4}", -0.5f64.sqrt(), 0.5f64.sqrt());
        close("exp(i*-pi/2)", 0.0, -1.0);
        close("e^(i 1.5)", 1.5f64.cos(), 1.5f64.sin());
        close("exp(i*pi)", -1.0, 0.0);
    }

    #[test]
    fn normalization_warning() {
        let (a, w) = parse_alpha("2").unwrap();
        assert_eq!(a, Complex64::new(1.0, 0.0));
        assert!(w.is_some());
        assert!(parse_alpha("0.6+0.8i").unwrap().1.is_none());
        assert!(parse_alpha("0").is_err());
        assert!(parse_alpha("banana").is_err());
        assert!(parse_alpha("exp(x)").is_err());
    }

    #[test]
    fn lists() {
        let v = parse_alpha_list("1, i,-1").unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[1].0, "i");
    }
}
