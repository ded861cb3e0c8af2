//! Trapezoidal membership functions over the unit interval.
//!
//! A function is the quadruple `[gamma, alpha, beta, delta]`: `[alpha, beta]` is
//! the nucleus (membership 1) and `[gamma, delta]` the support (membership > 0
//! inside, 0 outside). A function is built from one possibility degree and then
//! adjusted one side at a time, each side keeping a running average of the
//! ratings routed to it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A possibility degree in `[0, 1]` supplied by a user.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Rating(f64);

impl Rating {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Rating(value))
        } else {
            Err(Error::domain(format!("possibility degree {value} outside [0, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Rating {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Rating::new(value)
    }
}

impl<'de> Deserialize<'de> for Rating {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = f64::deserialize(deserializer)?;
        Rating::new(value).map_err(serde::de::Error::custom)
    }
}

/// Which side of the trapezoid an adjustment touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `gamma`, `alpha` and the left counter.
    Left,
    /// `beta`, `delta` and the right counter.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTrapezoid")]
pub struct Trapezoid {
    gamma: f64,
    alpha: f64,
    beta: f64,
    delta: f64,
    left_count: u64,
    right_count: u64,
}

#[derive(Deserialize)]
struct RawTrapezoid {
    gamma: f64,
    alpha: f64,
    beta: f64,
    delta: f64,
    left_count: u64,
    right_count: u64,
}

impl TryFrom<RawTrapezoid> for Trapezoid {
    type Error = Error;

    fn try_from(raw: RawTrapezoid) -> Result<Self> {
        Trapezoid::from_parts(
            raw.gamma,
            raw.alpha,
            raw.beta,
            raw.delta,
            raw.left_count,
            raw.right_count,
        )
    }
}

impl Trapezoid {
    /// Departure function for a single rating: the nucleus collapses to the
    /// rating and the support is `[max(0, 2t - 1), min(1, 2t)]`.
    ///
    /// Below 0.5 this is `[0, 2t]`, above it `[2t - 1, 1]`; both agree at 0.5.
    pub fn construct(theta: Rating) -> Self {
        let t = theta.value();
        Trapezoid {
            gamma: (2.0 * t - 1.0).max(0.0),
            alpha: t,
            beta: t,
            delta: (2.0 * t).min(1.0),
            left_count: 1,
            right_count: 1,
        }
    }

    /// Rebuilds a function from stored parts, checking every invariant.
    pub fn from_parts(
        gamma: f64,
        alpha: f64,
        beta: f64,
        delta: f64,
        left_count: u64,
        right_count: u64,
    ) -> Result<Self> {
        let ordered = 0.0 <= gamma && gamma <= alpha && alpha <= beta && beta <= delta && delta <= 1.0;
        if !ordered {
            return Err(Error::domain(format!(
                "trapezoid [{gamma}, {alpha}, {beta}, {delta}] violates 0 <= gamma <= alpha <= beta <= delta <= 1"
            )));
        }
        if left_count == 0 || right_count == 0 {
            return Err(Error::domain(format!(
                "observation counters must be at least 1 (got left {left_count}, right {right_count})"
            )));
        }
        Ok(Trapezoid {
            gamma,
            alpha,
            beta,
            delta,
            left_count,
            right_count,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn left_count(&self) -> u64 {
        self.left_count
    }

    pub fn right_count(&self) -> u64 {
        self.right_count
    }

    /// `[gamma, alpha, beta, delta]`
    pub fn stones(&self) -> [f64; 4] {
        [self.gamma, self.alpha, self.beta, self.delta]
    }

    /// Middle of the nucleus.
    pub fn midpoint(&self) -> f64 {
        (self.alpha + self.beta) / 2.0
    }

    /// Side a rating is routed to. Ties with the midpoint go left.
    pub fn routed_side(&self, theta: Rating) -> Side {
        if theta.value() <= self.midpoint() {
            Side::Left
        } else {
            Side::Right
        }
    }

    /// Folds one more rating into the function.
    ///
    /// The side is chosen against the midpoint of the current nucleus. On that
    /// side the nucleus stone and the support stone both become
    /// `(n * stone + theta) / (n + 1)` where `n` is the side's counter, which is
    /// then incremented. The other side is left untouched.
    pub fn adjust(&self, theta: Rating) -> Self {
        let t = theta.value();
        let mut next = *self;
        match self.routed_side(theta) {
            Side::Left => {
                let n = self.left_count;
                next.alpha = running_mean(self.alpha, t, n);
                next.gamma = running_mean(self.gamma, t, n);
                next.left_count = n + 1;
            }
            Side::Right => {
                let n = self.right_count;
                next.beta = running_mean(self.beta, t, n);
                next.delta = running_mean(self.delta, t, n);
                next.right_count = n + 1;
            }
        }
        next
    }

    /// Membership degree at `x`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(format!("evaluation point {x} outside [0, 1]")));
        }
        Ok(self.membership(x))
    }

    fn membership(&self, x: f64) -> f64 {
        if x < self.gamma || x > self.delta {
            0.0
        } else if x >= self.alpha && x <= self.beta {
            1.0
        } else if x < self.alpha {
            // gamma <= x < alpha, so the ramp has positive width
            (x - self.gamma) / (self.alpha - self.gamma)
        } else {
            (self.delta - x) / (self.delta - self.beta)
        }
    }

    /// `n` evenly spaced samples over `[0, 1]` merged with the four vertices
    /// `(gamma, 0)`, `(alpha, 1)`, `(beta, 1)`, `(delta, 0)`, sorted for plotting.
    pub fn sample(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        if n < 2 {
            return Err(Error::domain(format!("need at least 2 samples, got {n}")));
        }
        let last = (n - 1) as f64;
        let mut points: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let x = i as f64 / last;
                (x, self.membership(x))
            })
            .collect();
        points.extend([
            (self.gamma, 0.0),
            (self.alpha, 1.0),
            (self.beta, 1.0),
            (self.delta, 0.0),
        ]);

        // Vertical edges: rise on the left half, fall on the right half.
        let mid = self.midpoint();
        points.sort_by(|a, b| {
            a.0.total_cmp(&b.0).then_with(|| {
                if a.0 <= mid {
                    a.1.total_cmp(&b.1)
                } else {
                    b.1.total_cmp(&a.1)
                }
            })
        });
        points.dedup();
        Ok(points)
    }
}

/// `(n * current + theta) / (n + 1)`, kept inside `[min(current, theta), max(current, theta)]`
/// so rounding never pushes a stone past either operand.
fn running_mean(current: f64, theta: f64, n: u64) -> f64 {
    let n = n as f64;
    let mean = (n * current + theta) / (n + 1.0);
    mean.clamp(current.min(theta), current.max(theta))
}
