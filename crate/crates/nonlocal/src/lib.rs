//! Command-line front end for `nonlocal-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod par;
pub mod presets;

use std::io::Write;

use clap::Parser;

use cli::{Cli, Format};
use commands::{Ctx, Failure};
use output::{Meta, Outcome, Versions, CSV_HEADER};

/// A parsed `--scan` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub values: Vec<f64>,
}

/// Parses `s=<a>:<b>:<step>`. The endpoint is included when the grid lands
/// on it up to rounding; points are a + k step, so they do not drift.
pub fn parse_grid(spec: &str) -> Result<Grid, String> {
    let body = spec
        .strip_prefix("s=")
        .ok_or_else(|| format!("scan `{spec}`: only the order s can be scanned, as s=<a>:<b>:<step>"))?;
    let parts: Vec<&str> = body.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("scan `{spec}`: expected s=<a>:<b>:<step>"));
    }
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("scan `{spec}`: bad number `{t}`"));
    let (a, b, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    if !(h > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(format!("scan `{spec}`: step must be positive and bounds finite"));
    }
    if b < a {
        return Err(format!("scan `{spec}`: empty grid"));
    }
    let count = ((b - a) / h + 1e-9).floor() as u64 + 1;
    // rounded to 12 decimals so printed grid points stay clean
    let values: Vec<f64> = (0..count).map(|k| ((a + k as f64 * h) * 1e12).round() / 1e12).collect();
    if let Some(v) = values.iter().find(|&&v| !(v > 0.0 && v < 1.0)) {
        return Err(format!("scan `{spec}`: grid point {v} is outside (0, 1)"));
    }
    Ok(Grid { values })
}

/// Runs the program on `argv` (including the program name), writing the
/// payload to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<W: Write, E: Write>(argv: &[String], out: &mut W, err: &mut E) -> i32 {
    let argv = match config::load_and_merge(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let threads = match par::threads_from_env() {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return 2;
        }
    };
    let (code, o, e) = pool.install(|| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = execute(cli, &mut o, &mut e);
        (code, o, e)
    });
    let _ = err.write_all(&e);
    if out.write_all(&o).and_then(|_| out.flush()).is_err() {
        return 3;
    }
    code
}

fn execute(mut cli: Cli, out: &mut Vec<u8>, err: &mut Vec<u8>) -> i32 {
    let usage = |err: &mut Vec<u8>, msg: &str| {
        let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
        2
    };
    let grid = match &cli.common.scan {
        Some(g) => match parse_grid(g) {
            Ok(g) => Some(g),
            Err(e) => return usage(err, &e),
        },
        None => None,
    };
    let given_s = *cli.command.order_mut();
    let default_s = cli.command.default_order();
    if grid.is_some() && given_s.is_some() {
        return usage(err, "--s and --scan cannot be combined");
    }
    let grid = match (grid, given_s) {
        (Some(g), _) => g.values,
        (None, Some(s)) => vec![s],
        (None, None) if default_s.is_some() => vec![default_s.unwrap()],
        (None, None) => return usage(err, "the order --s is required unless --scan is given"),
    };
    let scanning = cli.common.scan.is_some();
    let name = commands::name(&cli.command);
    let mut rows: Vec<(f64, Outcome)> = Vec::with_capacity(grid.len());
    for (k, &s) in grid.iter().enumerate() {
        let ctx = Ctx {
            seed: cli.common.seed,
            stream_id: k as u64,
            rel_tol: cli.common.rel_tol,
            abs_tol: cli.common.abs_tol,
        };
        match commands::run(&cli.command, s, &ctx) {
            Ok(o) => {
                if !o.converged {
                    let _ = writeln!(err, "warning: {name} did not converge at s = {s}");
                }
                rows.push((s, o));
            }
            Err(Failure::Usage(m)) => return usage(err, &m),
            Err(Failure::Compute(e)) => {
                let _ = writeln!(err, "error: {}: {e}", e.name());
                return 3;
            }
        }
    }
    let text = if scanning || cli.common.format == Format::Csv {
        let mut t = String::from(CSV_HEADER);
        t.push('\n');
        for (s, o) in &rows {
            t.push_str(&output::csv_row(*s, o));
            t.push('\n');
        }
        t
    } else {
        let (s, o) = &rows[0];
        *cli.command.order_mut() = Some(*s);
        let inputs = serde_json::json!({
            "command": &cli.command,
            "format": cli.common.format,
            "rel_tol": cli.common.rel_tol,
            "abs_tol": cli.common.abs_tol,
        });
        let meta = Meta {
            command: name.to_string(),
            inputs: &inputs,
            versions: Versions::current(),
            seed: cli.common.seed,
        };
        output::json(o, meta) + "\n"
    };
    out.extend_from_slice(text.as_bytes());
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = parse_grid("s=0.05:0.95:0.05").unwrap();
        assert_eq!(g.values.len(), 19);
        assert_eq!(g.values[2], 0.15);
        assert_eq!(g.values[18], 0.95);
        assert_eq!(parse_grid("s=0.5:0.5:0.1").unwrap().values, vec![0.5]);
        assert!(parse_grid("s=0.6:0.5:0.1").is_err());
        assert!(parse_grid("s=0:0.5:0.1").is_err());
        assert!(parse_grid("s=0.1:0.5:0").is_err());
        assert!(parse_grid("t=0.1:0.5:0.1").is_err());
    }
}
