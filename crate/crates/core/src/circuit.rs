//! Flat circuit description: an input core state followed by elementary
//! gates and ladder events in application order.

use alloc::vec::Vec;

use crate::corestate::CoreState;
use crate::error::{Error, Result};
use crate::gaussian::ElementaryGate;
use crate::ipag::{self, Compiled, InterleavedCircuit, LadderEvent, Op};

#[derive(Clone, Debug, PartialEq)]
pub enum CircuitOp {
    Gate(ElementaryGate),
    Ladder(LadderEvent),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    modes: usize,
    input: CoreState,
    ops: Vec<CircuitOp>,
}

impl Circuit {
    pub fn new(input: CoreState, ops: Vec<CircuitOp>) -> Result<Self> {
        let m = input.modes();
        for op in &ops {
            match op {
                CircuitOp::Gate(g) => g.validate(m)?,
                CircuitOp::Ladder(e) if e.mode >= m => return Err(Error::ModeOutOfRange { mode: e.mode, modes: m }),
                CircuitOp::Ladder(_) => {}
            }
        }
        Ok(Circuit { modes: m, input, ops })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn input(&self) -> &CoreState {
        &self.input
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn ladder_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, CircuitOp::Ladder(_))).count()
    }

    pub fn to_interleaved(&self) -> Result<InterleavedCircuit> {
        InterleavedCircuit::from_ops(
            self.modes,
            self.ops.iter().map(|op| match op {
                CircuitOp::Gate(g) => Op::Gate(g),
                CircuitOp::Ladder(e) => Op::Ladder(e),
            }),
        )
    }

    /// The canonical form `Ĝ|C⟩` of the circuit.
    pub fn compile(&self) -> Result<Compiled> {
        ipag::compile_from(&self.to_interleaved()?, &self.input)
    }
}
