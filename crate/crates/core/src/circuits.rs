//! Four-qubit circuit model of the games with depolarizing and readout noise.
//!
//! Qubits `q0` and `q3` hold the resource for A and B, `q1` and `q2` are the
//! probe modes. Basis index `q0·8 + q1·4 + q2·2 + q3`, so `q0` is the most
//! significant bit of every outcome bitstring.
//!
//! The resource preparation `H(q1)`, `CX(q1,q2)` followed by the two swaps
//! leaves `|Φ⁺⟩` on `q0 q3`. A and B answer from the parity `q0 ⊕ q3`
//! relative to the parity of the prepared resource (even for both `|Φ⁺⟩`
//! and the separable `|00⟩`): a flipped parity means the particle (PNP) or
//! `|Ψ⁺⟩` (BD) was sent.

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::games::{GameKind, GameSpec};
use crate::qcore::{identity, pauli_x, pauli_y, pauli_z, real, ComplexMatrix, C64};
use crate::random::rng_for;

pub const N_QUBITS: usize = 4;
pub const DIM: usize = 1 << N_QUBITS;
/// Parity `q0 ⊕ q3` of the prepared resource, entangled or separable.
pub const RESOURCE_PARITY: usize = 0;
/// Win probability reported for the entangled BD run on hardware.
pub const HARDWARE_BD_TOTAL: f64 = 0.71;
/// Usable concurrence reported alongside it.
pub const HARDWARE_BD_CONCURRENCE: f64 = 0.42;
/// Win probability reported for the entangled PNP run at `P_p = ⅔`.
pub const HARDWARE_PNP_TOTAL: f64 = 0.72;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    X(usize),
    Cx(usize, usize),
    Swap(usize, usize),
    MeasureAll,
}

impl Gate {
    pub fn support(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) => vec![q],
            Gate::Cx(a, b) | Gate::Swap(a, b) => vec![a, b],
            Gate::MeasureAll => (0..N_QUBITS).collect(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "H(q{q})"),
            Gate::X(q) => write!(f, "X(q{q})"),
            Gate::Cx(a, b) => write!(f, "CX(q{a},q{b})"),
            Gate::Swap(a, b) => write!(f, "SWAP(q{a},q{b})"),
            Gate::MeasureAll => f.write_str("MEASURE"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    AbPrep,
    CPrep,
    Interaction,
    Measurement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resource {
    Entangled,
    Separable,
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Resource::Entangled => "entangled",
            Resource::Separable => "separable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Question {
    #[serde(rename = "phi+")]
    PhiPlus,
    #[serde(rename = "psi+")]
    PsiPlus,
    #[serde(rename = "00")]
    Zero,
}

impl Question {
    pub fn label(self) -> &'static str {
        match self {
            Question::PhiPlus => "phi+",
            Question::PsiPlus => "psi+",
            Question::Zero => "00",
        }
    }

    /// Questions of a game in the engine's order.
    pub fn for_game(game: GameKind) -> [Question; 2] {
        match game {
            GameKind::Pnp => [Question::PsiPlus, Question::Zero],
            GameKind::Bd => [Question::PsiPlus, Question::PhiPlus],
        }
    }

    /// `q1 q2` after C's decoding when the probe returns undisturbed.
    pub fn decoded(self) -> usize {
        match self {
            Question::PhiPlus | Question::Zero => 0b00,
            Question::PsiPlus => 0b01,
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Question {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phi+" => Ok(Question::PhiPlus),
            "psi+" | "p" => Ok(Question::PsiPlus),
            "00" | "np" => Ok(Question::Zero),
            other => Err(Error::validation("question", format!("unknown question `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub game: GameKind,
    pub question: Question,
    pub resource: Resource,
    pub gates: Vec<(Stage, Gate)>,
}

impl Circuit {
    /// Number of gates, not counting the final measurement.
    pub fn gate_count(&self) -> usize {
        self.gates.iter().filter(|(_, g)| *g != Gate::MeasureAll).count()
    }

    pub fn stage(&self, stage: Stage) -> Vec<Gate> {
        self.gates.iter().filter(|(s, _)| *s == stage).map(|(_, g)| *g).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let mut measured = false;
        for (_, g) in &self.gates {
            if measured {
                return Err(Error::validation("circuit", "gates after the measurement"));
            }
            if g.support().iter().any(|&q| q >= N_QUBITS) {
                return Err(Error::validation("circuit", format!("{g} touches a missing qubit")));
            }
            if let Gate::Cx(a, b) | Gate::Swap(a, b) = g {
                if a == b {
                    return Err(Error::validation("circuit", format!("{g} repeats a qubit")));
                }
            }
            measured = *g == Gate::MeasureAll;
        }
        if !measured {
            return Err(Error::validation("circuit", "missing final measurement"));
        }
        Ok(())
    }
}

/// Gate sequence for one (game, question, resource) run.
pub fn build_circuit(game: GameKind, question: Question, resource: Resource) -> Result<Circuit> {
    if !Question::for_game(game).contains(&question) {
        return Err(Error::validation(
            "question",
            format!("{question} is not a question of the {game} game"),
        ));
    }
    let mut gates = Vec::new();
    if resource == Resource::Entangled {
        for g in [Gate::H(1), Gate::Cx(1, 2), Gate::Swap(1, 0), Gate::Swap(2, 3)] {
            gates.push((Stage::AbPrep, g));
        }
    }
    let prep: &[Gate] = match question {
        Question::PhiPlus => &[Gate::H(1), Gate::Cx(1, 2)],
        Question::PsiPlus => &[Gate::H(1), Gate::Cx(1, 2), Gate::X(1)],
        Question::Zero => &[],
    };
    gates.extend(prep.iter().map(|&g| (Stage::CPrep, g)));
    gates.push((Stage::Interaction, Gate::Cx(1, 0)));
    gates.push((Stage::Interaction, Gate::Cx(2, 3)));
    if question != Question::Zero {
        gates.push((Stage::Measurement, Gate::Cx(1, 2)));
        gates.push((Stage::Measurement, Gate::H(1)));
    }
    gates.push((Stage::Measurement, Gate::MeasureAll));
    Ok(Circuit {
        game,
        question,
        resource,
        gates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub pm: f64,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel { p1: 0.0, p2: 0.0, pm: 0.0 }
    }

    /// Illustrative profile, not calibrated to any device.
    pub fn reference() -> Self {
        NoiseModel {
            p1: 0.015,
            p2: 0.03,
            pm: 0.025,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p1", self.p1), ("p2", self.p2), ("pm", self.pm)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::validation(name, format!("{v} is outside [0, 1]")));
            }
        }
        Ok(())
    }
}

fn bit(index: usize, q: usize) -> usize {
    (index >> (N_QUBITS - 1 - q)) & 1
}

fn mask(q: usize) -> usize {
    1 << (N_QUBITS - 1 - q)
}

/// Operator `op` (on `support`, first listed qubit most significant) embedded in 4 qubits.
fn embed(op: &ComplexMatrix, support: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(DIM, DIM, |r, col| {
        let rest = support.iter().fold(0, |m, &q| m | mask(q));
        if r & !rest != col & !rest {
            return C64::new(0.0, 0.0);
        }
        let local = |i: usize| support.iter().fold(0, |acc, &q| (acc << 1) | bit(i, q));
        op[(local(r), local(col))]
    })
}

fn gate_unitary(g: Gate) -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match g {
        Gate::H(q) => embed(&ComplexMatrix::from_row_slice(2, 2, &[real(h), real(h), real(h), real(-h)]), &[q]),
        Gate::X(q) => embed(&pauli_x(), &[q]),
        Gate::Cx(a, b) => {
            let mut m = ComplexMatrix::zeros(4, 4);
            for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
                m[(r, col)] = real(1.0);
            }
            embed(&m, &[a, b])
        }
        Gate::Swap(a, b) => {
            let mut m = ComplexMatrix::zeros(4, 4);
            for (r, col) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                m[(r, col)] = real(1.0);
            }
            embed(&m, &[a, b])
        }
        Gate::MeasureAll => identity(DIM),
    }
}

/// `(1−p)ρ + p·Tr_S(ρ) ⊗ 𝟙_S/2^|S|`, written as a uniform Pauli twirl on `S`.
pub fn depolarize(rho: &ComplexMatrix, support: &[usize], p: f64) -> ComplexMatrix {
    if p == 0.0 {
        return rho.clone();
    }
    let paulis = [identity(2), pauli_x(), pauli_y(), pauli_z()];
    let n = support.len();
    let count = 4usize.pow(n as u32);
    let mut twirled = ComplexMatrix::zeros(DIM, DIM);
    for idx in 0..count {
        let mut op = identity(DIM);
        let mut code = idx;
        for &q in support {
            op = embed(&paulis[code % 4], &[q]) * op;
            code /= 4;
        }
        twirled += &op * rho * op.adjoint();
    }
    rho * real(1.0 - p) + twirled * real(p / count as f64)
}

/// Outcome distribution over the 16 bitstrings.
pub fn simulate(c: &Circuit, noise: &NoiseModel) -> Result<Vec<f64>> {
    c.validate()?;
    noise.validate()?;
    let mut rho = ComplexMatrix::zeros(DIM, DIM);
    rho[(0, 0)] = real(1.0);
    for (_, g) in &c.gates {
        if *g == Gate::MeasureAll {
            break;
        }
        let u = gate_unitary(*g);
        rho = &u * rho * u.adjoint();
        let p = if g.support().len() == 1 { noise.p1 } else { noise.p2 };
        rho = depolarize(&rho, &g.support(), p);
    }
    let mut dist: Vec<f64> = (0..DIM).map(|i| rho[(i, i)].re.max(0.0)).collect();
    for q in 0..N_QUBITS {
        let m = mask(q);
        dist = (0..DIM)
            .map(|i| (1.0 - noise.pm) * dist[i] + noise.pm * dist[i ^ m])
            .collect();
    }
    let total: f64 = dist.iter().sum();
    Ok(dist.into_iter().map(|p| p / total).collect())
}

/// Multinomial sample of `shots` outcomes.
pub fn sample_counts(dist: &[f64], shots: u64, seed: u64, stream: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::validation("shots", "must be positive"));
    }
    let w = WeightedIndex::new(dist).map_err(|e| Error::validation("distribution", e.to_string()))?;
    let mut rng = rng_for(seed, stream);
    let mut counts = vec![0u64; dist.len()];
    for _ in 0..shots {
        counts[w.sample(&mut rng)] += 1;
    }
    Ok(counts)
}

pub fn bitstring(index: usize) -> String {
    (0..N_QUBITS).map(|q| if bit(index, q) == 1 { '1' } else { '0' }).collect()
}

/// How A and B turn the relative parity `q0 ⊕ q3 ⊕ RESOURCE_PARITY` into an
/// answer (an index into [`Question::for_game`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerRule {
    /// Flipped parity → first question (particle / `Ψ⁺`).
    Parity,
    InvertedParity,
    AlwaysFirst,
    AlwaysSecond,
}

impl AnswerRule {
    pub const ALL: [AnswerRule; 4] = [
        AnswerRule::Parity,
        AnswerRule::InvertedParity,
        AnswerRule::AlwaysFirst,
        AnswerRule::AlwaysSecond,
    ];

    pub fn answer(self, flipped: bool) -> usize {
        match self {
            AnswerRule::Parity => usize::from(!flipped),
            AnswerRule::InvertedParity => usize::from(flipped),
            AnswerRule::AlwaysFirst => 0,
            AnswerRule::AlwaysSecond => 1,
        }
    }
}

fn check_weights(weights: &[f64]) -> Result<f64> {
    if weights.len() != DIM {
        return Err(Error::validation("counts", format!("expected {DIM} outcomes, got {}", weights.len())));
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::validation("counts", "weights must be finite and non-negative"));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::validation("counts", "no outcomes recorded"));
    }
    Ok(total)
}

/// Fraction of outcomes where C's check passes and the answer is right.
/// Accepts raw counts or probabilities.
pub fn score_weights(weights: &[f64], game: GameKind, question: Question, rule: AnswerRule) -> Result<f64> {
    let total = check_weights(weights)?;
    let qs = Question::for_game(game);
    let truth = qs
        .iter()
        .position(|&q| q == question)
        .ok_or_else(|| Error::validation("question", format!("{question} is not a question of the {game} game")))?;
    let mut win = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        let probe = (bit(i, 1) << 1) | bit(i, 2);
        let flipped = (bit(i, 0) ^ bit(i, 3) ^ RESOURCE_PARITY) == 1;
        if probe == question.decoded() && rule.answer(flipped) == truth {
            win += w;
        }
    }
    Ok(win / total)
}

pub fn score(counts: &[u64], game: GameKind, question: Question, rule: AnswerRule) -> Result<f64> {
    let w: Vec<f64> = counts.iter().map(|&n| n as f64).collect();
    score_weights(&w, game, question, rule)
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoRow {
    pub resource: Resource,
    pub question: Question,
    pub per_question_win: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResourceSummary {
    pub resource: Resource,
    pub rule: AnswerRule,
    pub total_win: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HardwareReference {
    pub bd_entangled_total: f64,
    pub bd_usable_concurrence: f64,
    pub pnp_two_thirds_total: f64,
}

impl Default for HardwareReference {
    fn default() -> Self {
        HardwareReference {
            bd_entangled_total: HARDWARE_BD_TOTAL,
            bd_usable_concurrence: HARDWARE_BD_CONCURRENCE,
            pnp_two_thirds_total: HARDWARE_PNP_TOTAL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub game: GameKind,
    pub priors: [f64; 2],
    pub noise: NoiseModel,
    /// `None` means exact probabilities were scored.
    pub shots: Option<u64>,
    pub seed: u64,
    pub rows: Vec<DemoRow>,
    pub totals: Vec<ResourceSummary>,
    pub classical_limit: f64,
    /// `2(total − ½)` for the entangled BD run.
    pub usable_concurrence: Option<f64>,
    pub hardware_reference: HardwareReference,
}

impl DemoReport {
    pub fn total(&self, resource: Resource) -> f64 {
        self.totals
            .iter()
            .find(|t| t.resource == resource)
            .map(|t| t.total_win)
            .unwrap_or(f64::NAN)
    }
}

/// Runs both questions on both resources. Entangled runs answer with the
/// parity rule; separable runs use whichever fixed rule scores best.
pub fn run_demo(game: &GameSpec, noise: &NoiseModel, shots: Option<u64>, seed: u64) -> Result<DemoReport> {
    noise.validate()?;
    let priors = game.priors();
    let questions = Question::for_game(game.kind());
    let mut rows = Vec::new();
    let mut totals = Vec::new();
    for (r_idx, resource) in [Resource::Entangled, Resource::Separable].into_iter().enumerate() {
        let mut weights = Vec::new();
        for (q_idx, &q) in questions.iter().enumerate() {
            let dist = simulate(&build_circuit(game.kind(), q, resource)?, noise)?;
            let w = match shots {
                Some(n) => sample_counts(&dist, n, seed, (2 * r_idx + q_idx) as u64)?
                    .into_iter()
                    .map(|c| c as f64)
                    .collect(),
                None => dist,
            };
            weights.push(w);
        }
        let evaluate = |rule: AnswerRule| -> Result<Vec<f64>> {
            questions
                .iter()
                .zip(&weights)
                .map(|(&q, w)| score_weights(w, game.kind(), q, rule))
                .collect()
        };
        let rules: &[AnswerRule] = match resource {
            Resource::Entangled => &[AnswerRule::Parity],
            Resource::Separable => &AnswerRule::ALL,
        };
        let mut best: Option<(AnswerRule, Vec<f64>, f64)> = None;
        for &rule in rules {
            let per = evaluate(rule)?;
            let total = priors[0] * per[0] + priors[1] * per[1];
            if best.as_ref().map_or(true, |b| total > b.2) {
                best = Some((rule, per, total));
            }
        }
        let (rule, per, total) = best.expect("at least one rule");
        for (&q, &p) in questions.iter().zip(&per) {
            rows.push(DemoRow {
                resource,
                question: q,
                per_question_win: p,
            });
        }
        totals.push(ResourceSummary {
            resource,
            rule,
            total_win: total,
        });
    }
    let mut report = DemoReport {
        game: game.kind(),
        priors,
        noise: *noise,
        shots,
        seed,
        rows,
        totals,
        classical_limit: crate::games::classical_limit(game),
        usable_concurrence: None,
        hardware_reference: HardwareReference::default(),
    };
    if game.kind() == GameKind::Bd {
        report.usable_concurrence = Some(2.0 * (report.total(Resource::Entangled) - 0.5));
    }
    Ok(report)
}

/// Bar-chart data. Comment lines carry the bit ordering and the hardware
/// reference values.
pub fn write_demo_csv<W: Write>(report: &DemoReport, mut out: W) -> Result<()> {
    let h = &report.hardware_reference;
    writeln!(out, "# outcome bit order q0q1q2q3, q0 most significant")?;
    writeln!(
        out,
        "# hardware reference (not reproduced): bd entangled total {}, usable concurrence {}, pnp entangled total at P_p=2/3 {}",
        h.bd_entangled_total, h.bd_usable_concurrence, h.pnp_two_thirds_total
    )?;
    if let Some(c) = report.usable_concurrence {
        writeln!(out, "# usable concurrence 2(total - 1/2) = {c}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["resource", "question", "per_question_win", "total_win", "classical_limit"])
        .map_err(|e| Error::Io(e.to_string()))?;
    for row in &report.rows {
        w.write_record([
            row.resource.to_string(),
            row.question.to_string(),
            row.per_question_win.to_string(),
            report.total(row.resource).to_string(),
            report.classical_limit.to_string(),
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
