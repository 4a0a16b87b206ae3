//! Derivative-free simplex minimization.
//!
//! Uses the dimension-adaptive coefficients of Gao and Han, which behave much
//! better than the textbook (1, 2, ½, ½) set once the problem has more than a
//! handful of parameters. When the simplex collapses the search is restarted
//! from the best vertex with a fresh simplex, and stops once a restart no
//! longer improves the objective by more than the tolerance.

#[derive(Debug, Clone)]
pub struct NelderMead {
    pub max_iterations: usize,
    /// Convergence threshold on the spread of objective values in the simplex.
    pub tolerance: f64,
    pub initial_step: f64,
    /// Maximum number of simplex rebuilds after the first convergence.
    pub max_rebuilds: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_iterations: 2000,
            tolerance: 1e-9,
            initial_step: 0.5,
            max_rebuilds: 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

struct Counted<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

impl NelderMead {
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, f: F, x0: &[f64]) -> Minimum {
        let mut obj = Counted { f, evaluations: 0 };
        let mut best_x = x0.to_vec();
        let mut best_v = obj.eval(&best_x);
        let mut iterations = 0;
        let mut converged = false;
        for round in 0..=self.max_rebuilds {
            let budget = self.max_iterations.saturating_sub(iterations);
            if budget == 0 {
                break;
            }
            let (x, v, used, done) = self.run(&mut obj, &best_x, best_v, budget);
            iterations += used;
            let improvement = best_v - v;
            if v <= best_v {
                best_x = x;
                best_v = v;
            }
            if !done {
                break;
            }
            if round > 0 && improvement <= self.tolerance {
                converged = true;
                break;
            }
            converged = true;
        }
        Minimum {
            x: best_x,
            value: best_v,
            evaluations: obj.evaluations,
            iterations,
            converged,
        }
    }

    fn run<F: FnMut(&[f64]) -> f64>(
        &self,
        obj: &mut Counted<F>,
        start: &[f64],
        start_value: f64,
        budget: usize,
    ) -> (Vec<f64>, f64, usize, bool) {
        let n = start.len();
        let nf = n as f64;
        let alpha = 1.0;
        let gamma = 1.0 + 2.0 / nf;
        let rho = 0.75 - 1.0 / (2.0 * nf);
        let sigma = 1.0 - 1.0 / nf;

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((start.to_vec(), start_value));
        for i in 0..n {
            let mut x = start.to_vec();
            x[i] += self.initial_step;
            let v = obj.eval(&x);
            simplex.push((x, v));
        }

        let mut used = 0;
        while used < budget {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            if spread.abs() <= self.tolerance {
                let (x, v) = simplex.swap_remove(0);
                return (x, v, used, true);
            }
            used += 1;

            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / nf;
                }
            }
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let xr = along(alpha);
            let fr = obj.eval(&xr);
            if fr < simplex[0].1 {
                let xe = along(alpha * gamma);
                let fe = obj.eval(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst.1 {
                let xc = along(alpha * rho);
                let fc = obj.eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-rho);
                let fc = obj.eval(&xc);
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[n] = (xc, fc);
                continue;
            }
            let best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = best
                    .iter()
                    .zip(&vertex.0)
                    .map(|(b, xi)| b + sigma * (xi - b))
                    .collect();
                let v = obj.eval(&x);
                *vertex = (x, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, v) = simplex.swap_remove(0);
        (x, v, used, false)
    }
}
