use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::sparse::{add_left_product, add_sandwich, trace_product, Triplets};
use super::{CHECKPOINT_POSITIVITY_LIMIT, TRACE_DRIFT_LIMIT};
use crate::error::{Error, Result};
use crate::quantum::{HilbertSpace, OperatorMatrix, QuantumState};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One Fourier component `amplitude * exp(i frequency t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tone {
    pub amplitude: Complex64,
    /// rad/s
    pub frequency: f64,
}

/// Scalar time dependence of a Hamiltonian term.
#[derive(Clone)]
pub enum Envelope {
    /// Sum of complex exponentials.
    Tones(Vec<Tone>),
    /// Arbitrary function of time (s).
    Custom(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Envelope::Tones(t) => f.debug_tuple("Tones").field(t).finish(),
            Envelope::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Envelope {
    pub fn constant(value: Complex64) -> Self {
        Envelope::Tones(vec![Tone {
            amplitude: value,
            frequency: 0.0,
        }])
    }

    pub fn real(value: f64) -> Self {
        Self::constant(Complex64::new(value, 0.0))
    }

    /// `amplitude * exp(i frequency t)`.
    pub fn phase(amplitude: Complex64, frequency: f64) -> Self {
        Envelope::Tones(vec![Tone {
            amplitude,
            frequency,
        }])
    }

    /// `amplitude * cos(frequency t)`.
    pub fn cosine(amplitude: Complex64, frequency: f64) -> Self {
        let half = amplitude * 0.5;
        Envelope::Tones(vec![
            Tone {
                amplitude: half,
                frequency,
            },
            Tone {
                amplitude: half,
                frequency: -frequency,
            },
        ])
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Envelope::Tones(tones) => tones
                .iter()
                .map(|tone| {
                    if tone.frequency == 0.0 {
                        tone.amplitude
                    } else {
                        let (s, c) = (tone.frequency * t).sin_cos();
                        tone.amplitude * Complex64::new(c, s)
                    }
                })
                .sum(),
            Envelope::Custom(f) => f(t),
        }
    }

    /// Complex conjugate envelope, for building the Hermitian partner of a term.
    pub fn conj(&self) -> Self {
        match self {
            Envelope::Tones(tones) => Envelope::Tones(
                tones
                    .iter()
                    .map(|t| Tone {
                        amplitude: t.amplitude.conj(),
                        frequency: -t.frequency,
                    })
                    .collect(),
            ),
            Envelope::Custom(f) => {
                let f = f.clone();
                Envelope::Custom(Arc::new(move |t| f(t).conj()))
            }
        }
    }

    /// Product of two tone envelopes (frequencies add).
    pub fn times(&self, other: &Envelope) -> Self {
        match (self, other) {
            (Envelope::Tones(a), Envelope::Tones(b)) => {
                let mut out = Vec::with_capacity(a.len() * b.len());
                for x in a {
                    for y in b {
                        out.push(Tone {
                            amplitude: x.amplitude * y.amplitude,
                            frequency: x.frequency + y.frequency,
                        });
                    }
                }
                Envelope::Tones(out)
            }
            _ => {
                let (f, g) = (self.clone(), other.clone());
                Envelope::Custom(Arc::new(move |t| f.eval(t) * g.eval(t)))
            }
        }
    }

    /// Largest |frequency| among the tones, rad/s. `None` for custom envelopes.
    pub fn max_frequency(&self) -> Option<f64> {
        match self {
            Envelope::Tones(t) => Some(t.iter().fold(0.0, |m, x| m.max(x.frequency.abs()))),
            Envelope::Custom(_) => None,
        }
    }
}

/// `envelope(t) * op`, in rad/s.
#[derive(Clone, Debug)]
pub struct HamiltonianTerm {
    pub op: OperatorMatrix,
    pub envelope: Envelope,
}

impl HamiltonianTerm {
    pub fn new(op: OperatorMatrix, envelope: Envelope) -> Self {
        Self { op, envelope }
    }

    pub fn constant(op: OperatorMatrix, value: f64) -> Self {
        Self::new(op, Envelope::real(value))
    }

    /// The term and its Hermitian conjugate.
    pub fn with_conjugate(op: OperatorMatrix, envelope: Envelope) -> [Self; 2] {
        let partner = Self::new(op.adjoint(), envelope.conj());
        [Self::new(op, envelope), partner]
    }
}

/// Jump operator with rate in 1/s: contributes `rate * D[op]`.
#[derive(Clone, Debug)]
pub struct CollapseOp {
    pub op: OperatorMatrix,
    pub rate: f64,
}

#[derive(Clone, Debug)]
pub struct LindbladModel {
    pub space: HilbertSpace,
    pub hamiltonian_terms: Vec<HamiltonianTerm>,
    pub collapse_ops: Vec<CollapseOp>,
}

impl LindbladModel {
    pub fn new(space: HilbertSpace) -> Self {
        Self {
            space,
            hamiltonian_terms: Vec::new(),
            collapse_ops: Vec::new(),
        }
    }

    pub fn with_terms(mut self, terms: impl IntoIterator<Item = HamiltonianTerm>) -> Self {
        self.hamiltonian_terms.extend(terms);
        self
    }

    pub fn with_collapse(mut self, ops: impl IntoIterator<Item = CollapseOp>) -> Self {
        self.collapse_ops.extend(ops);
        self
    }

    /// `H(t)/hbar` as a dense operator.
    pub fn hamiltonian_at(&self, t: f64) -> OperatorMatrix {
        let d = self.space.total_dim();
        let mut h = DMatrix::zeros(d, d);
        for term in &self.hamiltonian_terms {
            h += term.op.matrix() * term.envelope.eval(t);
        }
        OperatorMatrix::from_matrix_unchecked(h)
    }

    /// Largest tone frequency in the Hamiltonian, rad/s.
    pub fn max_frequency(&self) -> Option<f64> {
        self.hamiltonian_terms
            .iter()
            .map(|t| t.envelope.max_frequency())
            .try_fold(0.0f64, |m, f| f.map(|f| m.max(f)))
    }

    /// Check rates, dimensions, finiteness and Hermiticity of `H(t)` at the
    /// start, middle and end of `[t0, t1]`.
    pub fn validate(&self, t0: f64, t1: f64) -> Result<()> {
        let d = self.space.total_dim();
        for term in &self.hamiltonian_terms {
            if term.op.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: term.op.dim(),
                });
            }
        }
        for c in &self.collapse_ops {
            if c.op.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: c.op.dim(),
                });
            }
            if !(c.rate >= 0.0 && c.rate.is_finite()) {
                return Err(Error::param("collapse rate", format!("{} is not >= 0", c.rate)));
            }
        }
        for t in [t0, 0.5 * (t0 + t1), t1] {
            for term in &self.hamiltonian_terms {
                let e = term.envelope.eval(t);
                if !(e.re.is_finite() && e.im.is_finite()) {
                    return Err(Error::param("envelope", format!("not finite at t = {t:e}")));
                }
            }
            let h = self.hamiltonian_at(t);
            let scale = h.max_abs().max(1.0);
            let defect = h.hermiticity_defect();
            if defect > 1e-10 * scale {
                return Err(Error::ModelInconsistency(format!(
                    "Hamiltonian not Hermitian at t = {t:e} (defect {defect:e})"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Classical fourth-order Runge–Kutta on a uniform grid.
    Rk4Fixed,
    /// Dormand–Prince 5(4) with step-size control; `step` is the first trial step.
    Rk45Adaptive { rtol: f64, atol: f64 },
}

#[derive(Clone, Debug)]
pub struct EvolutionConfig {
    pub t_start: f64,
    pub t_end: f64,
    pub step: f64,
    pub method: Method,
    /// Times at which the full density matrix is stored (and positivity checked).
    pub checkpoint_times: Vec<f64>,
    pub observables: Vec<OperatorMatrix>,
    /// Record observables every `record_every` steps (1 = every step).
    pub record_every: usize,
}

impl EvolutionConfig {
    pub fn rk4(t_end: f64, step: f64) -> Self {
        Self {
            t_start: 0.0,
            t_end,
            step,
            method: Method::Rk4Fixed,
            checkpoint_times: Vec::new(),
            observables: Vec::new(),
            record_every: 1,
        }
    }

    pub fn with_observables(mut self, obs: Vec<OperatorMatrix>) -> Self {
        self.observables = obs;
        self
    }

    pub fn with_checkpoints(mut self, times: Vec<f64>) -> Self {
        self.checkpoint_times = times;
        self
    }

    fn validate(&self, d: usize) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::param("step", "must be > 0"));
        }
        if !(self.t_end > self.t_start) {
            return Err(Error::param("t_end", "must exceed t_start"));
        }
        if self.record_every == 0 {
            return Err(Error::param("record_every", "must be >= 1"));
        }
        for &c in &self.checkpoint_times {
            if c < self.t_start || c > self.t_end {
                return Err(Error::param(
                    "checkpoint_times",
                    format!("{c:e} outside the integration span"),
                ));
            }
        }
        for o in &self.observables {
            if o.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: o.dim(),
                });
            }
        }
        Ok(())
    }
}

/// Default fixed step: at most 1/50 of the fastest envelope period and at most
/// `characteristic_time / 5000`.
pub fn recommended_step(max_frequency: f64, characteristic_time: f64) -> f64 {
    let by_time = characteristic_time / 5000.0;
    if max_frequency > 0.0 {
        let period = 2.0 * PI / max_frequency;
        by_time.min(period / 50.0)
    } else {
        by_time
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// `observables[k][i]` is `<O_k>` at `times[i]`.
    pub observables: Vec<Vec<Complex64>>,
    pub checkpoints: Vec<(f64, QuantumState)>,
    pub final_state: QuantumState,
    /// Largest |tr(rho) - 1| seen during the run.
    pub max_trace_drift: f64,
    pub steps_taken: usize,
}

impl Trajectory {
    pub fn observable_real(&self, k: usize) -> Vec<f64> {
        self.observables[k].iter().map(|z| z.re).collect()
    }

    pub fn checkpoint(&self, t: f64) -> Option<&QuantumState> {
        self.checkpoints
            .iter()
            .find(|(tc, _)| (tc - t).abs() <= 1e-15 * t.abs().max(1e-30))
            .map(|(_, s)| s)
    }
}

struct Kernel {
    d: usize,
    hterms: Vec<(Triplets, Envelope)>,
    /// -1/2 sum rate L^dagger L
    anti: Triplets,
    jumps: Vec<(Triplets, f64)>,
}

impl Kernel {
    fn new(model: &LindbladModel) -> Self {
        let d = model.space.total_dim();
        let hterms = model
            .hamiltonian_terms
            .iter()
            .map(|t| (Triplets::from_dense(t.op.matrix()), t.envelope.clone()))
            .collect();
        let mut k = DMatrix::<Complex64>::zeros(d, d);
        let mut jumps = Vec::new();
        for c in model.collapse_ops.iter().filter(|c| c.rate > 0.0) {
            let l = c.op.matrix();
            k += (l.adjoint() * l) * Complex64::new(-0.5 * c.rate, 0.0);
            jumps.push((Triplets::from_dense(l), c.rate));
        }
        Self {
            d,
            hterms,
            anti: Triplets::from_dense(&k),
            jumps,
        }
    }

    /// out = L(t)[rho]
    fn rhs(&self, t: f64, rho: &[Complex64], out: &mut [Complex64]) {
        let d = self.d;
        out.fill(ZERO);
        let minus_i = Complex64::new(0.0, -1.0);
        for (op, env) in &self.hterms {
            let c = minus_i * env.eval(t);
            if c != ZERO {
                add_left_product(out, op, c, rho, d);
            }
        }
        add_left_product(out, &self.anti, Complex64::new(1.0, 0.0), rho, d);
        // out currently holds G rho; the generator is G rho + (G rho)^dagger + jumps.
        for i in 0..d {
            let ii = i * d + i;
            out[ii] = Complex64::new(2.0 * out[ii].re, 0.0);
            for j in (i + 1)..d {
                let a = out[i * d + j];
                let b = out[j * d + i];
                out[i * d + j] = a + b.conj();
                out[j * d + i] = b + a.conj();
            }
        }
        for (l, rate) in &self.jumps {
            add_sandwich(out, l, *rate, rho, d);
        }
    }
}

fn trace(rho: &[Complex64], d: usize) -> Complex64 {
    (0..d).map(|i| rho[i * d + i]).sum()
}

fn to_state(space: &HilbertSpace, rho: &[Complex64]) -> QuantumState {
    let d = space.total_dim();
    let m = DMatrix::from_row_slice(d, d, rho);
    QuantumState::from_density_unchecked(space.clone(), m).expect("dimension checked")
}

struct Recorder<'a> {
    obs: Vec<Triplets>,
    record_every: usize,
    counter: usize,
    times: Vec<f64>,
    values: Vec<Vec<Complex64>>,
    checkpoints: Vec<(f64, QuantumState)>,
    space: &'a HilbertSpace,
    max_drift: f64,
}

impl<'a> Recorder<'a> {
    fn record(&mut self, t: f64, rho: &[Complex64], d: usize, force: bool) {
        if force || self.counter.is_multiple_of(self.record_every) {
            self.times.push(t);
            for (o, v) in self.obs.iter().zip(self.values.iter_mut()) {
                v.push(trace_product(rho, o, d));
            }
        }
        self.counter += 1;
    }

    fn check_trace(&mut self, t: f64, rho: &[Complex64], d: usize) -> Result<()> {
        let drift = (trace(rho, d) - Complex64::new(1.0, 0.0)).norm();
        if !drift.is_finite() || drift > TRACE_DRIFT_LIMIT {
            return Err(Error::IntegrationDiverged { time: t, drift });
        }
        self.max_drift = self.max_drift.max(drift);
        Ok(())
    }

    fn checkpoint(&mut self, t: f64, rho: &[Complex64]) -> Result<()> {
        let s = to_state(self.space, rho);
        let e = s.min_eigenvalue();
        if e < CHECKPOINT_POSITIVITY_LIMIT {
            return Err(Error::PositivityViolation {
                time: t,
                eigenvalue: e,
            });
        }
        self.checkpoints.push((t, s));
        Ok(())
    }
}

/// Integrate `d rho/dt = -i[H(t), rho] + sum rate (L rho L^dagger - {L^dagger L, rho}/2)`.
///
/// With [`Method::Rk4Fixed`] the grid is split at every checkpoint so that
/// checkpoints and the end time are hit exactly; each segment uses the
/// smallest uniform step not exceeding `config.step`.
pub fn evolve_lindblad(
    model: &LindbladModel,
    rho0: &QuantumState,
    config: &EvolutionConfig,
) -> Result<Trajectory> {
    if rho0.space() != &model.space {
        return Err(Error::InvalidComparison(
            "initial state is not on the model space".into(),
        ));
    }
    let d = model.space.total_dim();
    config.validate(d)?;
    model.validate(config.t_start, config.t_end)?;

    let kernel = Kernel::new(model);
    let mut rho: Vec<Complex64> = {
        let m = rho0.rho();
        (0..d * d).map(|k| m[(k / d, k % d)]).collect()
    };

    let mut stops: Vec<f64> = config.checkpoint_times.clone();
    stops.push(config.t_end);
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let mut rec = Recorder {
        obs: config
            .observables
            .iter()
            .map(|o| Triplets::from_dense(o.matrix()))
            .collect(),
        record_every: config.record_every,
        counter: 0,
        times: Vec::new(),
        values: vec![Vec::new(); config.observables.len()],
        checkpoints: Vec::new(),
        space: &model.space,
        max_drift: 0.0,
    };
    rec.check_trace(config.t_start, &rho, d)?;
    rec.record(config.t_start, &rho, d, true);
    if config.checkpoint_times.contains(&config.t_start) {
        rec.checkpoint(config.t_start, &rho)?;
    }

    let steps = match config.method {
        Method::Rk4Fixed => rk4_fixed(&kernel, &mut rho, config, &stops, &mut rec)?,
        Method::Rk45Adaptive { rtol, atol } => {
            dopri45(&kernel, &mut rho, config, &stops, rtol, atol, &mut rec)?
        }
    };

    let final_state = to_state(&model.space, &rho);
    Ok(Trajectory {
        times: rec.times,
        observables: rec.values,
        checkpoints: rec.checkpoints,
        final_state,
        max_trace_drift: rec.max_drift,
        steps_taken: steps,
    })
}

fn axpy(out: &mut [Complex64], x: &[Complex64], a: f64, y: &[Complex64]) {
    for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + yi * a;
    }
}

fn rk4_fixed(
    kernel: &Kernel,
    rho: &mut [Complex64],
    config: &EvolutionConfig,
    stops: &[f64],
    rec: &mut Recorder<'_>,
) -> Result<usize> {
    let d = kernel.d;
    let n2 = d * d;
    let mut k1 = vec![ZERO; n2];
    let mut k2 = vec![ZERO; n2];
    let mut k3 = vec![ZERO; n2];
    let mut k4 = vec![ZERO; n2];
    let mut tmp = vec![ZERO; n2];
    let mut t0 = config.t_start;
    let mut total = 0;
    for &stop in stops {
        if stop <= t0 {
            continue;
        }
        let n = ((stop - t0) / config.step).ceil().max(1.0) as usize;
        let h = (stop - t0) / n as f64;
        for s in 0..n {
            let t = t0 + s as f64 * h;
            kernel.rhs(t, rho, &mut k1);
            axpy(&mut tmp, rho, 0.5 * h, &k1);
            kernel.rhs(t + 0.5 * h, &tmp, &mut k2);
            axpy(&mut tmp, rho, 0.5 * h, &k2);
            kernel.rhs(t + 0.5 * h, &tmp, &mut k3);
            axpy(&mut tmp, rho, h, &k3);
            kernel.rhs(t + h, &tmp, &mut k4);
            let w = h / 6.0;
            for i in 0..n2 {
                rho[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
            }
            let t_next = if s + 1 == n { stop } else { t0 + (s + 1) as f64 * h };
            rec.check_trace(t_next, rho, d)?;
            rec.record(t_next, rho, d, s + 1 == n);
        }
        total += n;
        t0 = stop;
        if config.checkpoint_times.contains(&stop) {
            rec.checkpoint(stop, rho)?;
        }
    }
    Ok(total)
}

// Dormand–Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn dopri45(
    kernel: &Kernel,
    rho: &mut [Complex64],
    config: &EvolutionConfig,
    stops: &[f64],
    rtol: f64,
    atol: f64,
    rec: &mut Recorder<'_>,
) -> Result<usize> {
    if !(rtol > 0.0 && atol > 0.0) {
        return Err(Error::param("tolerances", "rtol and atol must be > 0"));
    }
    let d = kernel.d;
    let n2 = d * d;
    let mut k: Vec<Vec<Complex64>> = vec![vec![ZERO; n2]; 7];
    let mut tmp = vec![ZERO; n2];
    let mut y5 = vec![ZERO; n2];
    let mut t = config.t_start;
    let mut h = config.step;
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    for &stop in stops {
        while t < stop {
            attempts += 1;
            if attempts > 50_000_000 {
                return Err(Error::IntegrationDiverged {
                    time: t,
                    drift: f64::NAN,
                });
            }
            let last = t + h >= stop;
            let hh = if last { stop - t } else { h };
            kernel.rhs(t, rho, &mut k[0]);
            for s in 1..7 {
                tmp.copy_from_slice(rho);
                for (j, a) in DP_A[s].iter().enumerate().take(s) {
                    if *a != 0.0 {
                        for i in 0..n2 {
                            tmp[i] += k[j][i] * (hh * a);
                        }
                    }
                }
                let (head, tail) = k.split_at_mut(s);
                let _ = head;
                kernel.rhs(t + DP_C[s] * hh, &tmp, &mut tail[0]);
            }
            let mut err = 0.0f64;
            for i in 0..n2 {
                let mut v5 = rho[i];
                let mut e = ZERO;
                for s in 0..7 {
                    v5 += k[s][i] * (hh * DP_B5[s]);
                    e += k[s][i] * (hh * (DP_B5[s] - DP_B4[s]));
                }
                y5[i] = v5;
                let scale = atol + rtol * rho[i].norm().max(v5.norm());
                err = err.max(e.norm() / scale);
            }
            if err <= 1.0 || hh < 1e-3 * f64::EPSILON * stop.abs().max(1e-30) {
                rho.copy_from_slice(&y5);
                t = if last { stop } else { t + hh };
                accepted += 1;
                rec.check_trace(t, rho, d)?;
                rec.record(t, rho, d, last);
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if !last || err > 1.0 {
                h = hh * factor;
            }
        }
        if config.checkpoint_times.contains(&stop) {
            rec.checkpoint(stop, rho)?;
        }
    }
    Ok(accepted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{embed, mode_operators};

    fn single_mode(dim: usize) -> (HilbertSpace, OperatorMatrix, OperatorMatrix) {
        let s = HilbertSpace::single(dim, "m").unwrap();
        let ops = mode_operators(dim).unwrap();
        (s, ops.a, ops.n)
    }

    #[test]
    fn envelope_cosine_and_conj() {
        let e = Envelope::cosine(Complex64::new(2.0, 0.0), 3.0);
        let t = 0.37;
        assert!((e.eval(t) - Complex64::new(2.0 * (3.0f64 * t).cos(), 0.0)).norm() < 1e-14);
        let p = Envelope::phase(Complex64::new(0.0, 1.0), 2.0);
        assert!((p.conj().eval(t) - p.eval(t).conj()).norm() < 1e-15);
        assert_eq!(e.max_frequency(), Some(3.0));
    }

    #[test]
    fn amplitude_decay_matches_exponential() {
        let tau1 = 1e-6;
        let (s, a, n) = single_mode(3);
        let model = LindbladModel::new(s.clone()).with_collapse([CollapseOp {
            op: a,
            rate: 1.0 / tau1,
        }]);
        let rho0 = QuantumState::basis(s, &[1]).unwrap();
        let cfg = EvolutionConfig::rk4(3e-6, 1e-9).with_observables(vec![n]);
        let tr = evolve_lindblad(&model, &rho0, &cfg).unwrap();
        for (t, v) in tr.times.iter().zip(&tr.observables[0]) {
            assert!((v.re - (-t / tau1).exp()).abs() < 1e-6);
        }
        assert!(tr.max_trace_drift < 1e-8);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let tau1 = 1e-6;
        let (s, a, n) = single_mode(2);
        let model = LindbladModel::new(s.clone()).with_collapse([CollapseOp {
            op: a,
            rate: 1.0 / tau1,
        }]);
        let rho0 = QuantumState::basis(s, &[1]).unwrap();
        let err = |h: f64| {
            let cfg = EvolutionConfig::rk4(2e-6, h).with_observables(vec![n.clone()]);
            let tr = evolve_lindblad(&model, &rho0, &cfg).unwrap();
            (tr.observables[0].last().unwrap().re - (-2.0f64).exp()).abs()
        };
        let ratio = err(1e-7) / err(5e-8);
        assert!((ratio - 16.0).abs() < 1.5, "ratio {ratio}");
    }

    #[test]
    fn adaptive_agrees_with_fixed() {
        let s = HilbertSpace::new(vec![3, 3], vec!["a", "b"]).unwrap();
        let a = embed(&mode_operators(3).unwrap().a, &s, 0).unwrap();
        let b = embed(&mode_operators(3).unwrap().a, &s, 1).unwrap();
        let g = 2.0 * PI * 1e6;
        let terms = HamiltonianTerm::with_conjugate(
            &a.adjoint() * &b,
            Envelope::phase(Complex64::new(g, 0.0), 0.3 * g),
        );
        let model = LindbladModel::new(s.clone())
            .with_terms(terms)
            .with_collapse([CollapseOp { op: b, rate: 1e5 }]);
        let rho0 = QuantumState::basis(s, &[0, 1]).unwrap();
        let fixed = evolve_lindblad(&model, &rho0, &EvolutionConfig::rk4(5e-7, 1e-10)).unwrap();
        let mut cfg = EvolutionConfig::rk4(5e-7, 1e-9);
        cfg.method = Method::Rk45Adaptive {
            rtol: 1e-10,
            atol: 1e-12,
        };
        let adaptive = evolve_lindblad(&model, &rho0, &cfg).unwrap();
        let diff = (fixed.final_state.rho() - adaptive.final_state.rho()).norm();
        assert!(diff < 1e-8, "diff {diff}");
    }

    #[test]
    fn checkpoints_are_hit_exactly() {
        let (s, a, _) = single_mode(2);
        let model = LindbladModel::new(s.clone()).with_collapse([CollapseOp { op: a, rate: 1e6 }]);
        let rho0 = QuantumState::basis(s, &[1]).unwrap();
        let cfg = EvolutionConfig::rk4(1e-6, 3e-9).with_checkpoints(vec![1e-7, 5e-7]);
        let tr = evolve_lindblad(&model, &rho0, &cfg).unwrap();
        assert_eq!(tr.checkpoints.len(), 2);
        let p = tr.checkpoint(5e-7).unwrap().population(&[1]).unwrap();
        assert!((p - (-0.5f64).exp()).abs() < 1e-9);
        assert_eq!(*tr.times.last().unwrap(), 1e-6);
    }

    #[test]
    fn rejects_bad_config_and_rates() {
        let (s, a, _) = single_mode(2);
        let rho0 = QuantumState::basis(s.clone(), &[0]).unwrap();
        let model = LindbladModel::new(s.clone());
        assert!(evolve_lindblad(&model, &rho0, &EvolutionConfig::rk4(1e-6, 0.0)).is_err());
        let mut cfg = EvolutionConfig::rk4(1e-6, 1e-9);
        cfg.t_start = 2e-6;
        assert!(evolve_lindblad(&model, &rho0, &cfg).is_err());
        let bad = LindbladModel::new(s).with_collapse([CollapseOp { op: a, rate: -1.0 }]);
        assert!(evolve_lindblad(&bad, &rho0, &EvolutionConfig::rk4(1e-6, 1e-9)).is_err());
    }

    #[test]
    fn non_hermitian_hamiltonian_rejected() {
        let (s, a, _) = single_mode(3);
        let rho0 = QuantumState::basis(s.clone(), &[0]).unwrap();
        let model = LindbladModel::new(s).with_terms([HamiltonianTerm::constant(a, 1e6)]);
        assert!(matches!(
            evolve_lindblad(&model, &rho0, &EvolutionConfig::rk4(1e-6, 1e-9)),
            Err(Error::ModelInconsistency(_))
        ));
    }

    #[test]
    fn diverging_integration_is_reported() {
        let (s, a, _) = single_mode(4);
        let x = &a + &a.adjoint();
        let model = LindbladModel::new(s.clone())
            .with_terms([HamiltonianTerm::constant(x, 1e12)])
            .with_collapse([CollapseOp { op: a, rate: 1e12 }]);
        let rho0 = QuantumState::basis(s, &[1]).unwrap();
        let r = evolve_lindblad(&model, &rho0, &EvolutionConfig::rk4(1e-6, 1e-8));
        assert!(matches!(r, Err(Error::IntegrationDiverged { .. })));
    }

    #[test]
    fn recommended_step_rule() {
        let f = 2.0 * PI * 1e9;
        assert!((recommended_step(f, 1.0) - 1e-9 / 50.0).abs() < 1e-24);
        assert!((recommended_step(0.0, 5e-6) - 1e-9).abs() < 1e-24);
    }
}
