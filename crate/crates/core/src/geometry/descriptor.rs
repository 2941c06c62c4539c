//! Text descriptors for sets.
//!
//! ```text
//! halfspace:nu=0,1;a=0      ball:c=0,0;R=1      cone2d:arcs=0,1.5;3,4
//! graph:cubic               intervals:-inf,0;1,2
//! diff(A,B)   union(A,B)   compl(A)   preset:candy   preset:dimple
//! ```
//! Numbers accept `inf`, `-inf`, `pi` and `-pi`.

use alloc::vec::Vec;

use super::set::{presets, GeomSet};
use crate::{Error, Result};

const HEADS: [&str; 9] = [
    "halfspace:",
    "ball:",
    "cone2d:",
    "graph:",
    "intervals:",
    "preset:",
    "diff(",
    "union(",
    "compl(",
];

fn number(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "pi" => Ok(core::f64::consts::PI),
        "-pi" => Ok(-core::f64::consts::PI),
        t => t.parse::<f64>().map_err(|_| Error::Domain("bad number in set descriptor")),
    }
}

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(number).collect()
}

fn pair(s: &str) -> Result<(f64, f64)> {
    let v = numbers(s)?;
    if v.len() != 2 {
        return Err(Error::Domain("expected a pair a,b in set descriptor"));
    }
    Ok((v[0], v[1]))
}

/// Value of `key=` among `;`-separated fields.
fn field<'a>(body: &'a str, key: &str) -> Result<&'a str> {
    body.split(';')
        .find_map(|f| f.trim().strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or(Error::Domain("missing field in set descriptor"))
}

/// Splits "A,B" at the top-level comma that starts a new descriptor.
fn split_args(s: &str) -> Result<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                let rest = s[i + 1..].trim_start();
                if HEADS.iter().any(|h| rest.starts_with(h)) {
                    return Ok((&s[..i], &s[i + 1..]));
                }
            }
            _ => {}
        }
    }
    Err(Error::Domain("combinator needs two set arguments"))
}

fn call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
}

/// Parses a set descriptor.
pub fn parse_set(desc: &str) -> Result<GeomSet> {
    let s = desc.trim();
    if let Some(inner) = call(s, "diff") {
        let (a, b) = split_args(inner)?;
        return GeomSet::difference(parse_set(a)?, parse_set(b)?);
    }
    if let Some(inner) = call(s, "union") {
        let (a, b) = split_args(inner)?;
        return GeomSet::union(parse_set(a)?, parse_set(b)?);
    }
    if let Some(inner) = call(s, "compl") {
        return Ok(parse_set(inner)?.complement());
    }
    let (kind, body) = s.split_once(':').ok_or(Error::Domain("unknown set descriptor"))?;
    match kind {
        "halfspace" => GeomSet::half_space(numbers(field(body, "nu")?)?, number(field(body, "a")?)?),
        "ball" => GeomSet::ball(numbers(field(body, "c")?)?, number(field(body, "R")?)?),
        "cone2d" => {
            // arcs=t1,t2;t3,t4: only the first field carries the key
            let list = body
                .split(';')
                .map(|f| f.trim().strip_prefix("arcs=").unwrap_or(f.trim()))
                .filter(|f| !f.is_empty())
                .map(pair)
                .collect::<Result<Vec<_>>>()?;
            GeomSet::cone2d(list)
        }
        "graph" => presets::graph(body.trim())
            .map(GeomSet::supergraph)
            .ok_or(Error::Domain("unknown graph preset")),
        "intervals" => {
            let list = body.split(';').map(pair).collect::<Result<Vec<_>>>()?;
            GeomSet::intervals(&list)
        }
        "preset" => match body.trim() {
            "candy" => Ok(presets::candy()),
            "dimple" => Ok(presets::dimple()),
            other => presets::graph(other)
                .map(GeomSet::supergraph)
                .ok_or(Error::Domain("unknown set preset")),
        },
        _ => Err(Error::Domain("unknown set descriptor")),
    }
}
