//! Boolean multiplier circuit for a known constant times an unknown.
//!
//! The circuit computes `a * x` for a fixed public `a` and an m-bit
//! unknown `x` as a schoolbook sum of shifted rows: one row per set bit
//! of `a`, combined with ripple-carry adders built from AND/XOR/OR
//! gates. Constants fold away at build time, so every emitted gate
//! connects live wires.

use num_bigint::BigUint;

use crate::arith::bit_length;
use crate::error::{Error, Result};

/// A wire: constant zero, an unknown input bit, or a gate output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wire {
    Zero,
    Input(u32),
    Gate(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    And,
    Xor,
    Or,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub a: Wire,
    pub b: Wire,
}

/// The multiplier for one fixed `a` and an m-bit unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierCircuit {
    a: BigUint,
    n: u32,
    m: u32,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
}

impl MultiplierCircuit {
    /// Builds the circuit for `a * x`, outputs `y_0 .. y_(n+m-1)`.
    pub fn build(a: &BigUint, m: u32) -> Result<MultiplierCircuit> {
        if *a == BigUint::from(0u8) {
            return Err(Error::InvalidInstance("multiplier a must be nonzero"));
        }
        if m == 0 {
            return Err(Error::InvalidInstance("unknown width m must be positive"));
        }
        let n = bit_length(a) as u32;
        let width = (n + m) as usize;
        let mut circuit = MultiplierCircuit {
            a: a.clone(),
            n,
            m,
            gates: Vec::new(),
            outputs: vec![Wire::Zero; width],
        };
        let mut acc = vec![Wire::Zero; width];
        for j in 0..n {
            if !a.bit(u64::from(j)) {
                continue;
            }
            // Add the row (x << j) into the accumulator.
            let mut carry = Wire::Zero;
            for i in 0..m {
                let pos = (j + i) as usize;
                let want_carry = pos + 1 < width;
                let (sum, c) = circuit.full_add(acc[pos], Wire::Input(i), carry, want_carry);
                acc[pos] = sum;
                carry = c;
            }
            let mut pos = (j + m) as usize;
            while carry != Wire::Zero && pos < width {
                let want_carry = pos + 1 < width;
                let (sum, c) = circuit.full_add(acc[pos], carry, Wire::Zero, want_carry);
                acc[pos] = sum;
                carry = c;
                pos += 1;
            }
        }
        circuit.outputs = acc;
        Ok(circuit)
    }

    fn push(&mut self, kind: GateKind, a: Wire, b: Wire) -> Wire {
        self.gates.push(Gate { kind, a, b });
        Wire::Gate(self.gates.len() as u32 - 1)
    }

    fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        match (a, b) {
            (Wire::Zero, w) | (w, Wire::Zero) => w,
            _ => self.push(GateKind::Xor, a, b),
        }
    }

    fn and(&mut self, a: Wire, b: Wire) -> Wire {
        match (a, b) {
            (Wire::Zero, _) | (_, Wire::Zero) => Wire::Zero,
            _ => self.push(GateKind::And, a, b),
        }
    }

    fn or(&mut self, a: Wire, b: Wire) -> Wire {
        match (a, b) {
            (Wire::Zero, w) | (w, Wire::Zero) => w,
            _ => self.push(GateKind::Or, a, b),
        }
    }

    /// Sum and optional carry of three wires.
    fn full_add(&mut self, a: Wire, b: Wire, cin: Wire, want_carry: bool) -> (Wire, Wire) {
        let s1 = self.xor(a, b);
        let sum = self.xor(s1, cin);
        if !want_carry {
            return (sum, Wire::Zero);
        }
        let c1 = self.and(a, b);
        let c2 = self.and(s1, cin);
        (sum, self.or(c1, c2))
    }

    pub fn multiplier(&self) -> &BigUint {
        &self.a
    }

    /// Bit length of the fixed multiplier.
    pub fn multiplier_width(&self) -> u32 {
        self.n
    }

    /// Number of unknown input bits.
    pub fn input_count(&self) -> u32 {
        self.m
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Output wires `y_0 .. y_(n+m-1)`, least significant first.
    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    pub fn xor_gate_count(&self) -> u32 {
        self.gates
            .iter()
            .filter(|g| g.kind == GateKind::Xor)
            .count() as u32
    }

    /// Values of all gate outputs under a concrete input.
    pub fn gate_values(&self, x: &BigUint) -> Vec<bool> {
        let mut values = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let a = self.wire_value_with(gate.a, x, &values);
            let b = self.wire_value_with(gate.b, x, &values);
            values.push(match gate.kind {
                GateKind::And => a & b,
                GateKind::Xor => a ^ b,
                GateKind::Or => a | b,
            });
        }
        values
    }

    fn wire_value_with(&self, wire: Wire, x: &BigUint, gate_values: &[bool]) -> bool {
        match wire {
            Wire::Zero => false,
            Wire::Input(i) => x.bit(u64::from(i)),
            Wire::Gate(g) => gate_values[g as usize],
        }
    }

    /// Evaluates the whole circuit on a concrete input.
    pub fn evaluate(&self, x: &BigUint) -> BigUint {
        let gate_values = self.gate_values(x);
        let mut out = BigUint::from(0u8);
        for (j, wire) in self.outputs.iter().enumerate() {
            if self.wire_value_with(*wire, x, &gate_values) {
                out |= BigUint::from(1u8) << j;
            }
        }
        out
    }
}
