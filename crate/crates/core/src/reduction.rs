//! The dovetailed reduction from halting to cavity detection.
//!
//! Each round runs the machine for one step quantum and then builds one net
//! layer: a plain grid layer while the machine is still running, a punctured
//! one from the round in which it has halted onwards. After the last round a
//! closing layer is built with the method then in force (no further machine
//! steps), so the final net has level `M`, and the oracle is asked about it.
//! A cavity (`Nontrivial`) means "Yes, the input is in the machine's domain".
//!
//! Any fixed budget can be beaten by a machine that halts one step later;
//! [`fooling_program`] builds exactly that machine.

use serde::Serialize;
use thiserror::Error;

use crate::homology::{q_hat, VerdictJson, VerdictKind};
use crate::machines::{ground_truth, halt_after, HaltStatus, Program};
use crate::netbuilder::{Dyadic, EpsNet, Method, NetError, NetStream, SquaredDistance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("status sequence is not monotone: round {round} runs again after a halt")]
    NonMonotone { round: usize },
    #[error("quantum and level budget must both be at least 1")]
    EmptyBudget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Answer {
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundLog {
    pub round: u32,
    pub machine_status: HaltStatus,
    pub method: Method,
    pub level: u32,
    pub layer_size: usize,
    pub epsilon_bound: Dyadic,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_squared: Option<SquaredDistance>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub program: String,
    pub input: u64,
    pub quantum: u64,
    pub level_budget: u32,
    pub dimension: usize,
    /// Machine steps actually executed across all rounds.
    pub executed_steps: u64,
    pub rounds: Vec<RoundLog>,
    /// The level-`M` layer built after the final round.
    pub closing_layer: RoundLog,
    pub switch_level: Option<u32>,
    pub retains_center: bool,
    pub final_verdict: VerdictJson,
    pub answer: Answer,
    pub ground_truth: Option<HaltStatus>,
    pub misclassified: bool,
}

impl ReductionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Step budget the dovetailer was allowed, `quantum · M`.
    pub fn budget(&self) -> u64 {
        self.quantum * self.level_budget as u64
    }
}

fn method_for(status: HaltStatus) -> Method {
    if status.is_halted() {
        Method::Two
    } else {
        Method::One
    }
}

fn log_layer(stream: &NetStream, round: u32, status: HaltStatus) -> RoundLog {
    let layer = stream.layers().last().expect("a layer was just built");
    RoundLog {
        round,
        machine_status: status,
        method: layer.method,
        level: layer.level,
        layer_size: layer.points.len(),
        epsilon_bound: layer.epsilon_bound,
        d_squared: match layer.method {
            Method::One => None,
            Method::Two => stream.d_squared(),
        },
    }
}

/// The net builder driven by a per-round halting status: layer `i` uses
/// `statuses[i]` (or the last status once the sequence runs out).
pub fn run_r(
    statuses: &[HaltStatus],
    levels: u32,
    dim: usize,
) -> Result<NetStream, ReductionError> {
    if let Some(round) = statuses
        .windows(2)
        .position(|w| w[0].is_halted() && !w[1].is_halted())
    {
        return Err(ReductionError::NonMonotone { round: round + 2 });
    }
    let mut stream = NetStream::new(dim)?;
    for i in 0..levels as usize {
        let status = statuses
            .get(i)
            .or(statuses.last())
            .copied()
            .unwrap_or(HaltStatus::Running);
        stream.push(method_for(status))?;
    }
    Ok(stream)
}

/// Parameters of the truncated decision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dovetailer {
    pub quantum: u64,
    pub level_budget: u32,
    pub dim: usize,
    /// Step limit for the independent ground-truth simulation; `None` skips it.
    pub truth_steps: Option<u64>,
}

impl Dovetailer {
    pub fn new(quantum: u64, level_budget: u32, dim: usize) -> Self {
        Dovetailer {
            quantum,
            level_budget,
            dim,
            truth_steps: Some(default_truth_steps(quantum, level_budget)),
        }
    }

    pub fn with_truth_steps(mut self, steps: Option<u64>) -> Self {
        self.truth_steps = steps;
        self
    }

    pub fn run(
        &self,
        name: &str,
        program: &Program,
        input: u64,
    ) -> Result<(ReductionReport, EpsNet), ReductionError> {
        if self.quantum == 0 || self.level_budget == 0 {
            return Err(ReductionError::EmptyBudget);
        }
        let mut stream = NetStream::new(self.dim)?;
        let mut machine = program.init(input);
        let mut status = program.status(&machine);
        let mut rounds = Vec::with_capacity(self.level_budget as usize);

        for round in 1..=self.level_budget {
            if !status.is_halted() {
                let (next, st) = program.run_quantum(machine, self.quantum);
                machine = next;
                status = st;
            }
            stream.push(method_for(status))?;
            rounds.push(log_layer(&stream, round, status));
        }
        stream.push(method_for(status))?;
        let closing_layer = log_layer(&stream, self.level_budget + 1, status);

        let net = stream.accumulated()?;
        let verdict = q_hat(&net, self.level_budget)?;
        let answer = match verdict.kind {
            VerdictKind::Nontrivial => Answer::Yes,
            VerdictKind::Trivial => Answer::No,
        };
        let budget = self.quantum * self.level_budget as u64;
        let truth = self
            .truth_steps
            .map(|steps| ground_truth(program, input, steps));
        let misclassified = matches!(truth, Some(HaltStatus::HaltedAt(s)) if s > budget)
            && verdict.kind == VerdictKind::Trivial;

        let report = ReductionReport {
            program: name.to_string(),
            input,
            quantum: self.quantum,
            level_budget: self.level_budget,
            dimension: self.dim,
            executed_steps: machine.steps_executed,
            rounds,
            closing_layer,
            switch_level: stream.switch_level(),
            retains_center: stream.retains_center(),
            final_verdict: verdict.to_json(false),
            answer,
            ground_truth: truth,
            misclassified,
        };
        Ok((report, net))
    }
}

/// Ground-truth horizon used unless the caller picks one: ten times the
/// dovetailer's own budget, and never less than 10⁴ steps.
pub fn default_truth_steps(quantum: u64, level_budget: u32) -> u64 {
    quantum
        .saturating_mul(level_budget as u64)
        .saturating_mul(10)
        .max(10_000)
}

/// Runs the truncated decision procedure with the default ground-truth horizon.
pub fn run_f(
    name: &str,
    program: &Program,
    input: u64,
    quantum: u64,
    level_budget: u32,
    dim: usize,
) -> Result<ReductionReport, ReductionError> {
    Dovetailer::new(quantum, level_budget, dim)
        .run(name, program, input)
        .map(|(report, _)| report)
}

/// A machine that halts one step after a `quantum · M` budget runs out.
pub fn fooling_program(quantum: u64, level_budget: u32) -> Program {
    let budget = quantum * level_budget as u64;
    assert!(budget >= 1, "fooling needs a positive budget");
    halt_after(budget + 1)
}
