//! Bridge to an external exact Thue solver.
//!
//! The equation goes to the process input as one line `e4 e3 e2 e1 e0 rhs`;
//! the process prints one `m n` pair per line and exits with status 0.

use std::io::Write;
use std::process::{Command, Stdio};

use num_integer::Integer as _;
use num_traits::One;

use super::{Provenance, SolutionSet, ThueEquation};
use crate::arith::Integer;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub program: String,
    pub args: Vec<String>,
    /// Whether concurrent invocations are allowed.
    pub reentrant: bool,
}

impl ExternalSolver {
    /// Splits a command line on whitespace: program first, then arguments.
    pub fn parse(command: &str) -> Result<Self> {
        let mut parts = command.split_whitespace().map(String::from);
        let program = parts
            .next()
            .ok_or_else(|| Error::Domain("empty external solver command".into()))?;
        Ok(ExternalSolver {
            program,
            args: parts.collect(),
            reentrant: false,
        })
    }

    pub fn command_line(&self) -> String {
        std::iter::once(self.program.as_str())
            .chain(self.args.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn parse_solver_output(text: &str) -> std::result::Result<Vec<(Integer, Integer)>, String> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [m, n] = toks.as_slice() else {
            return Err(format!("expected `m n`, got `{line}`"));
        };
        let m: Integer = m.parse().map_err(|_| format!("bad integer in `{line}`"))?;
        let n: Integer = n.parse().map_err(|_| format!("bad integer in `{line}`"))?;
        out.push((m, n));
    }
    Ok(out)
}

/// Runs the external solver and verifies every returned pair.
pub fn solve_external(eq: &ThueEquation, solver: &ExternalSolver) -> Result<SolutionSet> {
    let fail = |reason: String| Error::ExternalSolver {
        equation: eq.wire_line(),
        reason,
    };
    let mut child = Command::new(&solver.program)
        .args(&solver.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| fail(format!("cannot start `{}`: {e}", solver.program)))?;
    {
        let mut stdin = child.stdin.take().ok_or_else(|| fail("no stdin".into()))?;
        writeln!(stdin, "{}", eq.wire_line()).map_err(|e| fail(format!("write failed: {e}")))?;
    }
    let output = child
        .wait_with_output()
        .map_err(|e| fail(format!("wait failed: {e}")))?;
    if !output.status.success() {
        return Err(fail(format!(
            "exit status {}: {}",
            output.status,
            String::from_utf8_lossy(&output.stderr).trim()
        )));
    }
    let text = String::from_utf8(output.stdout).map_err(|_| fail("output is not UTF-8".into()))?;
    let pairs = parse_solver_output(&text).map_err(fail)?;
    for (m, n) in &pairs {
        if !m.gcd(n).is_one() || !eq.holds(m, n) {
            return Err(fail(format!("returned ({m}, {n}) does not satisfy the equation")));
        }
    }
    SolutionSet::verified(eq, pairs, Provenance::Exact)
}
