//! Line-oriented text serialization of maps at full precision.
//!
//! ```text
//! alpha <decimal>
//! c <decimal>
//! v0 <decimal>
//! v1 <decimal>
//! phi0 <N>
//! <x> <y>        (N lines)
//! phi1 <M>
//! <x> <y>        (M lines)
//! ```

use std::fmt::Write;

use crate::combinatorics::Branch;
use crate::error::{Error, Result};
use crate::numeric::{Mp, Real};

use super::map::LorenzRep;
use super::pl::PlHomeo;

pub fn write_map(f: &LorenzRep<Mp>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "alpha {}", f.alpha().to_decimal());
    let _ = writeln!(out, "c {}", f.c().to_decimal());
    let _ = writeln!(out, "v0 {}", f.v0().to_decimal());
    let _ = writeln!(out, "v1 {}", f.v1().to_decimal());
    for (name, phi) in [("phi0", f.phi0()), ("phi1", f.phi1())] {
        let _ = writeln!(out, "{name} {}", phi.len());
        for (x, y) in phi.xs().iter().zip(phi.ys()) {
            let _ = writeln!(out, "{} {}", x.to_decimal(), y.to_decimal());
        }
    }
    out
}

/// Plot data for `f`: header `x f(x)`, then `samples` points on the left
/// branch over `[0, c]`, a blank line, and `samples` points on the right
/// branch over `[c, 1]`.
pub fn write_graph(f: &LorenzRep<Mp>, samples: usize) -> Result<String> {
    if samples < 2 {
        return Err(Error::InvalidArgument(
            "a graph needs at least 2 samples per branch".into(),
        ));
    }
    let c = f.c();
    let one = c.one_like();
    let last = c.lift((samples - 1) as f64);
    let mut out = String::from("x f(x)\n");
    for (side, lo, hi) in [
        (Branch::Left, c.zero_like(), c.clone()),
        (Branch::Right, c.clone(), one),
    ] {
        if side == Branch::Right {
            out.push('\n');
        }
        for i in 0..samples {
            let x = lo.clone() + &((hi.clone() - &lo) * &c.lift(i as f64) / &last);
            let y = f.eval(&x, side)?;
            let _ = writeln!(out, "{:.17e} {:.17e}", x.to_f64(), y.to_f64());
        }
    }
    Ok(out)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line with its 1-based number.
    fn next(&mut self) -> Result<(usize, &'a str)> {
        for (i, line) in self.inner.by_ref() {
            if !line.trim().is_empty() {
                return Ok((i + 1, line.trim()));
            }
        }
        Err(Error::Parse {
            line: 0,
            message: "unexpected end of input".into(),
        })
    }
}

fn parse_number(line: usize, text: &str, precision: u32) -> Result<Mp> {
    Mp::parse(precision, text).map_err(|e| Error::Parse {
        line,
        message: e.to_string(),
    })
}

fn keyed<'a>(lines: &mut Lines<'a>, key: &str) -> Result<(usize, &'a str)> {
    let (n, line) = lines.next()?;
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => Ok((n, v)),
        _ => Err(Error::Parse {
            line: n,
            message: format!("expected `{key} <value>`, found `{line}`"),
        }),
    }
}

fn parse_homeo(lines: &mut Lines<'_>, key: &str, precision: u32) -> Result<PlHomeo<Mp>> {
    let (n, count) = keyed(lines, key)?;
    let count: usize = count.parse().map_err(|_| Error::Parse {
        line: n,
        message: format!("bad node count `{count}`"),
    })?;
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);
    for _ in 0..count {
        let (ln, line) = lines.next()?;
        let mut parts = line.split_whitespace();
        let (Some(x), Some(y), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected `<x> <y>`, found `{line}`"),
            });
        };
        xs.push(parse_number(ln, x, precision)?);
        ys.push(parse_number(ln, y, precision)?);
    }
    PlHomeo::new(xs, ys).map_err(|e| Error::Parse {
        line: n,
        message: e.to_string(),
    })
}

/// Reads a map written by [`write_map`], at the given precision.
pub fn parse_map(text: &str, precision: u32) -> Result<LorenzRep<Mp>> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let mut scalar = |key: &str| -> Result<(usize, Mp)> {
        let (n, v) = keyed(&mut lines, key)?;
        Ok((n, parse_number(n, v, precision)?))
    };
    let (_, alpha) = scalar("alpha")?;
    let (_, c) = scalar("c")?;
    let (_, v0) = scalar("v0")?;
    let (n, v1) = scalar("v1")?;
    let phi0 = parse_homeo(&mut lines, "phi0", precision)?;
    let phi1 = parse_homeo(&mut lines, "phi1", precision)?;
    if let Ok((extra, line)) = lines.next() {
        return Err(Error::Parse {
            line: extra,
            message: format!("trailing content `{line}`"),
        });
    }
    LorenzRep::new(c, v0, v1, phi0, phi1, alpha).map_err(|e| Error::Parse {
        line: n,
        message: e.to_string(),
    })
}
