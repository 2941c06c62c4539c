//! Named inputs: scalar fields and histories.

use nonlocal_core::field::presets as fields;
use nonlocal_core::fraccalc::{presets as hist, CausalFunction};
use nonlocal_core::ScalarField;

pub fn numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| match t.trim() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            v => v.parse::<f64>().map_err(|_| format!("bad number `{v}`")),
        })
        .collect()
}

/// Field descriptors: `gaussian`, `sech`, `skew-bump`, `positive-power[:e]`,
/// `ball-bump[:e]`, `constant:<c>`, `indicator:<a>,<b>[;<a>,<b>...]`,
/// `linear`. Missing exponents default to the order s.
pub fn field(desc: &str, n: usize, s: f64) -> Result<ScalarField, String> {
    let (head, arg) = match desc.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (desc, None),
    };
    let exponent = |default: f64| -> Result<f64, String> {
        match arg {
            None => Ok(default),
            Some(a) => a.trim().parse().map_err(|_| format!("bad exponent in `{desc}`")),
        }
    };
    let one_d = |f: ScalarField| {
        if n == 1 {
            Ok(f)
        } else {
            Err(format!("field `{head}` is one-dimensional"))
        }
    };
    match head {
        "gaussian" => Ok(fields::gaussian(n)),
        "sech" => one_d(fields::sech()),
        "skew-bump" => one_d(fields::skew_bump()),
        "positive-power" => one_d(fields::positive_power(exponent(s)?)),
        "ball-bump" => Ok(fields::ball_bump(n, exponent(s)?)),
        "linear" => one_d(ScalarField::new(1, |x| x[0])),
        "constant" => {
            let c = exponent(f64::NAN)?;
            if c.is_nan() {
                return Err("constant field needs a value, as constant:<c>".into());
            }
            Ok(fields::constant(n, c))
        }
        "indicator" => {
            let a = arg.ok_or("indicator needs intervals, as indicator:<a>,<b>")?;
            let mut parts = Vec::new();
            for p in a.split(';') {
                let v = numbers(p)?;
                if v.len() != 2 || !(v[0] < v[1]) {
                    return Err(format!("bad interval `{p}`"));
                }
                parts.push((v[0], v[1]));
            }
            one_d(fields::indicator(&parts))
        }
        _ => Err(format!("unknown field `{desc}`")),
    }
}

/// Functions on the line for the Caputo and Marchaud commands. `a` is the
/// initial point that cos, sin and exp are frozen before; pass -inf for
/// the whole line.
pub fn history(name: &str, a: f64, lambda: f64) -> Result<CausalFunction, String> {
    let base = match name {
        "ramp" | "ex221" => return Ok(hist::ramp()),
        "well" | "ex222" => return Ok(hist::quadratic_well()),
        "cos" => hist::cosine(),
        "sin" => hist::sine(),
        "exp" => hist::exponential(lambda),
        _ => return Err(format!("unknown preset `{name}`")),
    };
    if a == f64::NEG_INFINITY {
        return Ok(base);
    }
    let (f, d) = (base.clone(), base);
    Ok(CausalFunction::new(a, move |t| f.evaluate(t))
        .with_derivative(move |t| d.derivative(t).unwrap_or(f64::NAN)))
}

/// History presets of the extension problem: (function, a, b).
pub fn extension_history(name: &str) -> Result<(CausalFunction, f64, f64), String> {
    match name {
        "ex221" | "ramp" => Ok((hist::ramp(), 0.0, 1.0)),
        "ex222" | "well" => Ok((hist::quadratic_well(), 0.0, 1.0)),
        _ => Err(format!("unknown history preset `{name}` (ex221, ex222)")),
    }
}
