//! Line-oriented circuit text:
//!
//! ```text
//! REGISTER 0 1 2
//! # preparation
//! WH 0
//! RX 1 0.08
//! ZZ 0,2 0.32
//! CU 0=1 1,2 [re im re im ...]
//! U 1,2 [re im ...]
//! ```
//!
//! Angles carry 12 significant digits; matrix entries are written in
//! shortest round-trip form, row-major.

use num_complex::Complex64 as C64;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::DenseOperator;
use crate::numfmt::format_sig12;

pub fn write_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    let reg: Vec<String> = c.labels().iter().map(|l| l.to_string()).collect();
    out.push_str(&format!("REGISTER {}\n", reg.join(" ")));
    let mut sections = c.sections().iter().peekable();
    for (i, gate) in c.gates().iter().enumerate() {
        while let Some((name, r)) = sections.peek() {
            if r.start > i {
                break;
            }
            if r.start == i {
                out.push_str(&format!("# {name}\n"));
            }
            sections.next();
        }
        out.push_str(&gate_line(gate));
        out.push('\n');
    }
    out
}

fn join(labels: &[usize]) -> String {
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

fn matrix_text(u: &DenseOperator) -> String {
    let parts: Vec<String> = u.data().iter().map(|z| format!("{} {}", z.re, z.im)).collect();
    format!("[{}]", parts.join(" "))
}

fn gate_line(g: &Gate) -> String {
    match g {
        Gate::WalshHadamard { target } => format!("WH {target}"),
        Gate::RotX { target, angle } => format!("RX {target} {}", format_sig12(*angle)),
        Gate::RotY { target, angle } => format!("RY {target} {}", format_sig12(*angle)),
        Gate::RotZ { target, angle } => format!("RZ {target} {}", format_sig12(*angle)),
        Gate::ZZ { a, b, angle } => format!("ZZ {a},{b} {}", format_sig12(*angle)),
        Gate::ControlledUnitary { control, value, targets, unitary } => {
            format!("CU {control}={value} {} {}", join(targets), matrix_text(unitary))
        }
        Gate::Unitary { targets, unitary } => format!("U {} {}", join(targets), matrix_text(unitary)),
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| perr(line, format!("bad qubit label {s:?}")))
}

fn parse_labels(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split(',').map(|t| parse_usize(t, line)).collect()
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse().map_err(|_| perr(line, format!("bad number {s:?}")))
}

fn parse_matrix(s: &str, targets: &[usize], line: usize) -> Result<DenseOperator> {
    let body = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| perr(line, "matrix must be enclosed in [ ]"))?;
    let nums: Vec<f64> = body.split_whitespace().map(|t| parse_f64(t, line)).collect::<Result<_>>()?;
    if !nums.len().is_multiple_of(2) {
        return Err(perr(line, "matrix entries must come in re/im pairs"));
    }
    let data = nums.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    DenseOperator::new(targets.to_vec(), data).map_err(|e| perr(line, e.to_string()))
}

/// Inverse of [`write_circuit`]. `#` lines open named sections.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        if let Some(rest) = raw.strip_prefix("REGISTER") {
            if circuit.is_some() {
                return Err(perr(line, "duplicate REGISTER line"));
            }
            let labels = rest.split_whitespace().map(|t| parse_usize(t, line)).collect::<Result<_>>()?;
            circuit = Some(Circuit::new(labels).map_err(|e| perr(line, e.to_string()))?);
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| perr(line, "REGISTER line must come first"))?;
        if let Some(name) = raw.strip_prefix('#') {
            c.begin_section(name.trim());
            continue;
        }
        let (kind, rest) = raw.split_once(' ').ok_or_else(|| perr(line, "missing gate operands"))?;
        let rest = rest.trim();
        let gate = match kind {
            "WH" => Gate::WalshHadamard { target: parse_usize(rest, line)? },
            "RX" | "RY" | "RZ" => {
                let (t, a) = rest.split_once(' ').ok_or_else(|| perr(line, "missing angle"))?;
                let (target, angle) = (parse_usize(t, line)?, parse_f64(a.trim(), line)?);
                match kind {
                    "RX" => Gate::RotX { target, angle },
                    "RY" => Gate::RotY { target, angle },
                    _ => Gate::RotZ { target, angle },
                }
            }
            "ZZ" => {
                let (t, a) = rest.split_once(' ').ok_or_else(|| perr(line, "missing angle"))?;
                let q = parse_labels(t, line)?;
                if q.len() != 2 {
                    return Err(perr(line, "ZZ takes two qubits"));
                }
                Gate::ZZ { a: q[0], b: q[1], angle: parse_f64(a.trim(), line)? }
            }
            "CU" => {
                let mut it = rest.splitn(3, ' ');
                let ctl = it.next().unwrap_or_default();
                let (control, value) = ctl.split_once('=').ok_or_else(|| perr(line, "control must be label=value"))?;
                let targets = parse_labels(it.next().ok_or_else(|| perr(line, "missing targets"))?, line)?;
                let unitary = parse_matrix(it.next().ok_or_else(|| perr(line, "missing matrix"))?.trim(), &targets, line)?;
                Gate::ControlledUnitary {
                    control: parse_usize(control, line)?,
                    value: parse_usize(value, line)?,
                    targets,
                    unitary,
                }
            }
            "U" => {
                let (t, m) = rest.split_once(' ').ok_or_else(|| perr(line, "missing matrix"))?;
                let targets = parse_labels(t, line)?;
                let unitary = parse_matrix(m.trim(), &targets, line)?;
                Gate::Unitary { targets, unitary }
            }
            other => return Err(perr(line, format!("unknown gate kind {other:?}"))),
        };
        c.push(gate).map_err(|e| perr(line, e.to_string()))?;
    }
    circuit.ok_or_else(|| perr(0, "empty circuit text"))
}
