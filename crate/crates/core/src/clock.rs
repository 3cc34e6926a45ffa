//! Simulation time kept as `origin + steps * dt`.
//!
//! Repeated stepping with a fixed `dt` never accumulates `t += dt` rounding;
//! changing `dt` rebases the origin.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Clock {
    origin: f64,
    dt: f64,
    steps: u64,
}

impl Clock {
    pub fn at(t: f64) -> Self {
        Clock {
            origin: t,
            dt: 0.0,
            steps: 0,
        }
    }

    pub fn time(&self) -> f64 {
        self.origin + self.steps as f64 * self.dt
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn advanced(mut self, dt: f64) -> Self {
        self.advance(dt);
        self
    }

    pub fn advance(&mut self, dt: f64) {
        if self.steps == 0 || dt == self.dt {
            self.dt = dt;
            self.steps += 1;
        } else {
            self.origin = self.time();
            self.dt = dt;
            self.steps = 1;
        }
    }
}

impl Default for Clock {
    fn default() -> Self {
        Clock::at(0.0)
    }
}
