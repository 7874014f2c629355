//! Tseitin encoding of an inversion instance and the DIMACS format.
//!
//! Variable numbering: input bit `x_i` is variable `i+1`, gate `g` is
//! variable `m+1+g`. Each AND/OR contributes three clauses, each XOR
//! four. The observed window bits and the forced top bit of `x` become
//! unit clauses; an observation that contradicts a constant-zero output
//! becomes the empty clause.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Num;

use super::circuit::{GateKind, MultiplierCircuit, Wire};
use super::InversionInstance;
use crate::error::{Error, Result};

/// A Tseitin-encoded instance together with its source circuit.
#[derive(Debug, Clone)]
pub struct CnfInstance {
    pub instance: InversionInstance,
    pub circuit: MultiplierCircuit,
    pub num_vars: u32,
    /// Signed DIMACS literals; gate clauses first, then the unit
    /// clauses fixing the top bit of `x` and the observed window bits.
    pub clauses: Vec<Vec<i32>>,
    /// Index of the first fixing clause within `clauses`.
    pub first_unit: usize,
}

/// Aggregate size measures of one CNF instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceStats {
    pub vars: u32,
    pub clauses: usize,
    /// Clause-to-variable ratio (constrainedness).
    pub ratio: f64,
    /// Number of XOR gates, i.e. four-clause groups.
    pub xor_chain_count: u32,
}

fn literal(m: u32, wire: Wire) -> i32 {
    match wire {
        Wire::Input(i) => (i + 1) as i32,
        Wire::Gate(g) => (m + 1 + g) as i32,
        Wire::Zero => unreachable!("constant wires are folded before encoding"),
    }
}

/// Encodes the multiplier circuit for `inst` and fixes the observation.
pub fn export_cnf(inst: &InversionInstance) -> Result<CnfInstance> {
    let circuit = MultiplierCircuit::build(&inst.a, inst.m)?;
    let m = inst.m;
    let mut clauses = Vec::new();
    for (g, gate) in circuit.gates().iter().enumerate() {
        let v = (m + 1 + g as u32) as i32;
        let a = literal(m, gate.a);
        let b = literal(m, gate.b);
        match gate.kind {
            GateKind::And => {
                clauses.push(vec![-v, a]);
                clauses.push(vec![-v, b]);
                clauses.push(vec![-a, -b, v]);
            }
            GateKind::Or => {
                clauses.push(vec![v, -a]);
                clauses.push(vec![v, -b]);
                clauses.push(vec![a, b, -v]);
            }
            GateKind::Xor => {
                clauses.push(vec![-v, a, b]);
                clauses.push(vec![-v, -a, -b]);
                clauses.push(vec![v, -a, b]);
                clauses.push(vec![v, a, -b]);
            }
        }
    }
    let first_unit = clauses.len();
    // The unknown is an exact m-bit integer: top bit set.
    clauses.push(vec![m as i32]);
    for j in inst.q..inst.p {
        let bit = inst.u.bit(u64::from(j - inst.q));
        match circuit.outputs()[j as usize] {
            Wire::Zero => {
                if bit {
                    // Observation demands a 1 from a constant-zero
                    // output: unsatisfiable by construction.
                    clauses.push(Vec::new());
                }
            }
            wire => {
                let lit = literal(m, wire);
                clauses.push(vec![if bit { lit } else { -lit }]);
            }
        }
    }
    Ok(CnfInstance {
        instance: inst.clone(),
        num_vars: m + circuit.gates().len() as u32,
        circuit,
        clauses,
        first_unit,
    })
}

impl CnfInstance {
    /// Extends `x` over all Tseitin wires by circuit evaluation and
    /// checks every clause. Returns the index of the first violated
    /// clause, or `None` when the assignment satisfies the formula.
    pub fn check_assignment(&self, x: &BigUint) -> Option<usize> {
        let gate_values = self.circuit.gate_values(x);
        let m = self.instance.m;
        let value = |lit: i32| -> bool {
            let var = lit.unsigned_abs();
            let v = if var <= m {
                x.bit(u64::from(var - 1))
            } else {
                gate_values[(var - m - 1) as usize]
            };
            if lit > 0 {
                v
            } else {
                !v
            }
        };
        for (idx, clause) in self.clauses.iter().enumerate() {
            if !clause.iter().any(|&lit| value(lit)) {
                return Some(idx);
            }
        }
        None
    }

    pub fn stats(&self) -> InstanceStats {
        InstanceStats {
            vars: self.num_vars,
            clauses: self.clauses.len(),
            ratio: self.clauses.len() as f64 / f64::from(self.num_vars),
            xor_chain_count: self.circuit.xor_gate_count(),
        }
    }

    /// Standard DIMACS text with a comment header naming the instance.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        out.push_str("c moddiv inversion instance\n");
        out.push_str(&format!(
            "c n {} m {} p {} q {} u {}\n",
            self.instance.n, self.instance.m, self.instance.p, self.instance.q, self.instance.u
        ));
        out.push_str(&format!("c a {}\n", self.instance.a));
        out.push_str(&format!("p cnf {} {}\n", self.num_vars, self.clauses.len()));
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&format!("{lit} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

/// A re-parsed DIMACS file: header fields plus the raw clause list.
#[derive(Debug, Clone, PartialEq)]
pub struct DimacsFile {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    /// Instance fields recovered from the comment header, when present.
    pub header: BTreeMap<String, String>,
}

impl DimacsFile {
    /// Rebuilds the inversion instance from the comment header.
    pub fn instance(&self) -> Result<InversionInstance> {
        let get = |k: &str| -> Result<&String> {
            self.header.get(k).ok_or(Error::MissingField("dimacs header field"))
        };
        let dec_u32 = |k: &str| -> Result<u32> {
            get(k)?.parse::<u32>().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bad decimal header field {k}"),
            })
        };
        let dec_big = |k: &str| -> Result<BigUint> {
            BigUint::from_str_radix(get(k)?, 10).map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bad decimal header field {k}"),
            })
        };
        InversionInstance::new(dec_big("a")?, dec_u32("m")?, dec_u32("p")?, dec_u32("q")?, dec_big("u")?)
    }
}

/// Parses DIMACS text produced by [`CnfInstance::to_dimacs`] (or any
/// plain CNF with the same conventions).
pub fn parse_dimacs(text: &str) -> Result<DimacsFile> {
    let mut header = BTreeMap::new();
    let mut sizes: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(comment) = t.strip_prefix('c') {
            let tokens: Vec<&str> = comment.split_whitespace().collect();
            // Key-value pairs: "n 2 m 2 ..." or "a 3".
            if tokens.len() >= 2 && tokens.len().is_multiple_of(2) {
                for pair in tokens.chunks(2) {
                    if pair[0].len() == 1 && pair[1].chars().all(|c| c.is_ascii_digit()) {
                        header.insert(pair[0].to_string(), pair[1].to_string());
                    }
                }
            }
            continue;
        }
        if let Some(rest) = t.strip_prefix("p ") {
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            if tokens.len() != 3 || tokens[0] != "cnf" {
                return Err(Error::Parse {
                    line,
                    msg: format!("malformed problem line `{t}`"),
                });
            }
            let vars = tokens[1].parse().map_err(|_| Error::Parse {
                line,
                msg: "bad variable count".into(),
            })?;
            let count = tokens[2].parse().map_err(|_| Error::Parse {
                line,
                msg: "bad clause count".into(),
            })?;
            sizes = Some((vars, count));
            continue;
        }
        let mut clause = Vec::new();
        let mut terminated = false;
        for tok in t.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad literal `{tok}`"),
            })?;
            if lit == 0 {
                terminated = true;
                break;
            }
            clause.push(lit);
        }
        if !terminated {
            return Err(Error::Parse {
                line,
                msg: "clause not terminated by 0".into(),
            });
        }
        clauses.push(clause);
    }
    let (num_vars, expected) = sizes.ok_or(Error::MissingField("p cnf line"))?;
    if clauses.len() != expected {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {expected} clauses, found {}", clauses.len()),
        });
    }
    Ok(DimacsFile {
        num_vars,
        clauses,
        header,
    })
}
