//! Multi-dimensional DFT over a mixed-radix layout (last axis fastest).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// `Σ_x v(x) exp(-2πi a·x/n)`
    Negative,
    /// `Σ_x v(x) exp(+2πi a·x/n)`, unnormalized.
    Positive,
}

/// Planned transforms for one group shape. Cheap to clone and `Sync`.
#[derive(Clone)]
pub struct GroupFft {
    factors: Vec<usize>,
    order: usize,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for GroupFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupFft").field("factors", &self.factors).finish()
    }
}

impl GroupFft {
    pub fn new(factors: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let forward = factors.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse = factors.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        Self {
            factors: factors.to_vec(),
            order: factors.iter().product(),
            forward,
            inverse,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// In-place transform along every axis.
    pub fn process(&self, data: &mut [Complex64], sign: Sign) {
        assert_eq!(data.len(), self.order, "buffer does not match group order");
        let plans = match sign {
            Sign::Negative => &self.forward,
            Sign::Positive => &self.inverse,
        };
        let mut stride = self.order;
        let mut line = Vec::new();
        for (axis, &n) in self.factors.iter().enumerate() {
            stride /= n;
            let plan = &plans[axis];
            if n == 1 {
                continue;
            }
            if stride == 1 {
                plan.process(data);
                continue;
            }
            line.resize(n, Complex64::default());
            let block = n * stride;
            for base in (0..self.order).step_by(block) {
                for off in 0..stride {
                    let start = base + off;
                    for (k, slot) in line.iter_mut().enumerate() {
                        *slot = data[start + k * stride];
                    }
                    plan.process(&mut line);
                    for (k, v) in line.iter().enumerate() {
                        data[start + k * stride] = *v;
                    }
                }
            }
        }
    }

    pub fn transform_real(&self, values: &[f64], sign: Sign) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.process(&mut buf, sign);
        buf
    }
}
