//! Multivariate polynomial systems over F(2) for inversion instances.
//!
//! The multiplier circuit is evaluated symbolically: each wire becomes
//! a polynomial in the unknown bits `x_0 .. x_(m-1)` in algebraic
//! normal form. For every observed window bit the system gains one
//! polynomial `y_j(x) + bit_j(u)`, so a concrete `x` solves the
//! instance exactly when every polynomial vanishes.
//!
//! Monomials are bitmasks over the variable indices, which caps the
//! variable count; the default export guard stops well before the
//! symbolic expansion becomes expensive.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::circuit::{GateKind, MultiplierCircuit, Wire};
use super::InversionInstance;
use crate::error::{Error, Result};

/// Default upper bound on the unknown width for symbolic expansion.
pub const ANF_VAR_LIMIT: u32 = 16;

/// Hard cap imposed by the bitmask monomial representation.
const MASK_LIMIT: u32 = 32;

/// A polynomial over F(2) in algebraic normal form: a set of monomials,
/// each a bitmask of variable indices. The empty mask is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    monomials: BTreeSet<u32>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly {
            monomials: BTreeSet::from([0]),
        }
    }

    pub fn var(i: u32) -> Poly {
        Poly {
            monomials: BTreeSet::from([1 << i]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    fn toggle(&mut self, mask: u32) {
        if !self.monomials.remove(&mask) {
            self.monomials.insert(mask);
        }
    }

    /// XOR (addition over F(2)).
    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for &mono in &other.monomials {
            out.toggle(mono);
        }
        out
    }

    /// AND (multiplication over F(2)); `x_i^2 = x_i` folds squares.
    pub fn mul(&self, other: &Poly) -> Poly {
        // Collect all pairwise unions, then keep those with odd
        // multiplicity; much cheaper than per-pair set toggles.
        let mut products = Vec::with_capacity(self.monomials.len() * other.monomials.len());
        for &ma in &self.monomials {
            for &mb in &other.monomials {
                products.push(ma | mb);
            }
        }
        products.sort_unstable();
        let mut monomials = BTreeSet::new();
        let mut i = 0;
        while i < products.len() {
            let mut j = i + 1;
            while j < products.len() && products[j] == products[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                monomials.insert(products[i]);
            }
            i = j;
        }
        Poly { monomials }
    }

    /// Largest number of variables in any monomial.
    pub fn degree(&self) -> u32 {
        self.monomials
            .iter()
            .map(|m| m.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// Evaluates at the point whose bit `i` gives `x_i`.
    pub fn evaluate(&self, x_mask: u32) -> bool {
        self.monomials
            .iter()
            .filter(|&&m| m & x_mask == m)
            .count()
            % 2
            == 1
    }

    pub fn monomials(&self) -> impl Iterator<Item = u32> + '_ {
        self.monomials.iter().copied()
    }

    fn to_line(&self) -> String {
        if self.monomials.is_empty() {
            return "0".to_string();
        }
        self.monomials
            .iter()
            .map(|&mono| {
                if mono == 0 {
                    "1".to_string()
                } else {
                    (0..MASK_LIMIT)
                        .filter(|i| mono & (1 << i) != 0)
                        .map(|i| format!("x{i}"))
                        .collect::<Vec<_>>()
                        .join("*")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn parse_line(line: &str, num_vars: u32, line_no: usize) -> Result<Poly> {
        let trimmed = line.trim();
        if trimmed == "0" {
            return Ok(Poly::zero());
        }
        let mut poly = Poly::zero();
        for term in trimmed.split('+') {
            let term = term.trim();
            if term == "1" {
                poly.toggle(0);
                continue;
            }
            let mut mask = 0u32;
            for factor in term.split('*') {
                let factor = factor.trim();
                let idx: u32 = factor
                    .strip_prefix('x')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::Parse {
                        line: line_no,
                        msg: format!("bad monomial factor `{factor}`"),
                    })?;
                if idx >= num_vars {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("variable x{idx} out of range (vars {num_vars})"),
                    });
                }
                mask |= 1 << idx;
            }
            poly.toggle(mask);
        }
        Ok(poly)
    }
}

/// One polynomial per observed window bit, each implicitly `= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnfSystem {
    pub num_vars: u32,
    pub polys: Vec<Poly>,
}

impl AnfSystem {
    /// True when every polynomial vanishes at `x`.
    pub fn is_zero_at(&self, x: &BigUint) -> bool {
        let mut mask = 0u32;
        for i in 0..self.num_vars {
            if x.bit(u64::from(i)) {
                mask |= 1 << i;
            }
        }
        self.polys.iter().all(|p| !p.evaluate(mask))
    }

    pub fn max_degree(&self) -> u32 {
        self.polys.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vars {}\n", self.num_vars);
        for poly in &self.polys {
            out.push_str(&poly.to_line());
            out.push('\n');
        }
        out
    }
}

/// Symbolically evaluates the instance circuit with the default guard.
pub fn export_anf(inst: &InversionInstance) -> Result<AnfSystem> {
    export_anf_with_limit(inst, ANF_VAR_LIMIT)
}

/// Symbolic export with an explicit variable-count guard (capped at 32
/// by the monomial representation).
pub fn export_anf_with_limit(inst: &InversionInstance, limit: u32) -> Result<AnfSystem> {
    let limit = limit.min(MASK_LIMIT);
    if inst.m > limit {
        return Err(Error::AnfGuard {
            m: inst.m,
            limit,
        });
    }
    let circuit = MultiplierCircuit::build(&inst.a, inst.m)?;
    let mut gate_polys: Vec<Poly> = Vec::with_capacity(circuit.gates().len());
    let wire_poly = |w: Wire, gate_polys: &[Poly]| -> Poly {
        match w {
            Wire::Zero => Poly::zero(),
            Wire::Input(i) => Poly::var(i),
            Wire::Gate(g) => gate_polys[g as usize].clone(),
        }
    };
    for gate in circuit.gates() {
        let a = wire_poly(gate.a, &gate_polys);
        let b = wire_poly(gate.b, &gate_polys);
        let poly = match gate.kind {
            GateKind::And => a.mul(&b),
            GateKind::Xor => a.add(&b),
            GateKind::Or => a.add(&b).add(&a.mul(&b)),
        };
        gate_polys.push(poly);
    }
    let mut polys = Vec::with_capacity((inst.p - inst.q) as usize);
    for j in inst.q..inst.p {
        let mut poly = wire_poly(circuit.outputs()[j as usize], &gate_polys);
        if inst.u.bit(u64::from(j - inst.q)) {
            poly = poly.add(&Poly::one());
        }
        polys.push(poly);
    }
    Ok(AnfSystem {
        num_vars: inst.m,
        polys,
    })
}

/// Parses the text produced by [`AnfSystem::to_text`].
pub fn parse_anf(text: &str) -> Result<AnfSystem> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or(Error::MissingField("vars line"))?;
    let num_vars: u32 = first
        .trim()
        .strip_prefix("vars ")
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: format!("expected `vars <count>`, got `{first}`"),
        })?;
    if num_vars == 0 || num_vars > MASK_LIMIT {
        return Err(Error::Parse {
            line: 1,
            msg: format!("variable count {num_vars} out of range"),
        });
    }
    let mut polys = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        polys.push(Poly::parse_line(line, num_vars, idx + 1)?);
    }
    Ok(AnfSystem { num_vars, polys })
}
