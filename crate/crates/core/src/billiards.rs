//! One-dimensional billiards under an invertible linear change of variables.
//!
//! Balls of equal mass move on a line and exchange velocities at contact.
//! A transform `V` offers two readings of the primed variables `x' = V·x`:
//! the *content-preserving* one keeps them as relabeled coordinates of the
//! same balls, while the *formal* one declares the primed variables to be
//! ball positions in their own right, obeying the translated law of motion
//! whose collision condition involves every coordinate at once. The two
//! readings agree on eigenvector initial data and split apart as soon as an
//! experimenter perturbs each theory's ball positions by the same amounts.

use crate::error::{Error, Result};

/// Default trajectory sampling interval for reports.
pub const SAMPLE_DT: f64 = 1e-3;
/// Simultaneous events within this window resolve in ascending pair order.
pub const EVENT_TIME_TOLERANCE: f64 = 1e-12;

/// Positions, velocities and the common ball radius.
#[derive(Clone, Debug, PartialEq)]
pub struct BilliardState {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub radius: f64,
}

impl BilliardState {
    /// Validates the no-overlap invariant `|x_i - x_j| >= 2r`.
    pub fn new(x: Vec<f64>, v: Vec<f64>, radius: f64) -> Result<BilliardState> {
        if x.len() != v.len() {
            return Err(Error::QubitCountMismatch(x.len(), v.len()));
        }
        let state = BilliardState { x, v, radius };
        state.check_no_overlap()?;
        Ok(state)
    }

    /// Skips the overlap check; used for primed data whose contact
    /// condition lives in pulled-back coordinates.
    pub fn raw(x: Vec<f64>, v: Vec<f64>, radius: f64) -> BilliardState {
        BilliardState { x, v, radius }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    fn check_no_overlap(&self) -> Result<()> {
        check_no_overlap(&self.x, self.radius)
    }
}

fn check_no_overlap(x: &[f64], radius: f64) -> Result<()> {
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            if (x[i] - x[j]).abs() < 2.0 * radius - 1e-9 {
                return Err(Error::InitialOverlap(i, j));
            }
        }
    }
    Ok(())
}

/// Small dense real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::TransformShape {
                    rows: n,
                    cols: row.len(),
                    n,
                });
            }
        }
        Ok(Matrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix {
            n,
            data: vec![0.0; n * n],
        };
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let mut out = Matrix {
            n: self.n,
            data: vec![0.0; self.n * self.n],
        };
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..self.n {
                    out.data[i * self.n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r, &s| {
                    a.get(r, col)
                        .abs()
                        .partial_cmp(&a.get(s, col).abs())
                        .expect("finite entries")
                })
                .expect("nonempty range");
            let pivot = a.get(pivot_row, col);
            if pivot.abs() < 1e-14 {
                return Err(Error::SingularTransform);
            }
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot_row * n + j);
                    inv.data.swap(col * n + j, pivot_row * n + j);
                }
            }
            let inv_pivot = 1.0 / a.get(col, col);
            for j in 0..n {
                a.data[col * n + j] *= inv_pivot;
                inv.data[col * n + j] *= inv_pivot;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a.get(row, col);
                if factor == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a.data[row * n + j] -= factor * a.get(col, j);
                    inv.data[row * n + j] -= factor * inv.get(col, j);
                }
            }
        }
        Ok(inv)
    }
}

/// An invertible change of variables together with its inverse.
#[derive(Clone, Debug)]
pub struct BilliardTransform {
    forward: Matrix,
    inverse: Matrix,
}

impl BilliardTransform {
    pub fn new(matrix: Matrix) -> Result<BilliardTransform> {
        let inverse = matrix.inverse()?;
        let product = matrix.mul(&inverse);
        if product.max_abs_diff(&Matrix::identity(matrix.size())) > 1e-10 {
            return Err(Error::SingularTransform);
        }
        Ok(BilliardTransform {
            forward: matrix,
            inverse,
        })
    }

    pub fn identity(n: usize) -> BilliardTransform {
        BilliardTransform {
            forward: Matrix::identity(n),
            inverse: Matrix::identity(n),
        }
    }

    pub fn size(&self) -> usize {
        self.forward.size()
    }

    pub fn forward(&self) -> &Matrix {
        &self.forward
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn to_primed(&self, v: &[f64]) -> Vec<f64> {
        self.forward.mul_vec(v)
    }

    pub fn from_primed(&self, v: &[f64]) -> Vec<f64> {
        self.inverse.mul_vec(v)
    }
}

/// One recorded instant.
#[derive(Clone, Debug)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

/// A contact between two balls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollisionEvent {
    pub t: f64,
    pub i: usize,
    pub j: usize,
}

/// Samples on the fixed grid plus every event instant. Positions are exact
/// piecewise-linear functions of time between consecutive samples.
#[derive(Clone, Debug)]
pub struct Trajectory {
    samples: Vec<TrajectorySample>,
    events: Vec<CollisionEvent>,
}

impl Trajectory {
    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn events(&self) -> &[CollisionEvent] {
        &self.events
    }

    pub fn first_event_time(&self) -> Option<f64> {
        self.events.first().map(|e| e.t)
    }

    pub fn horizon(&self) -> f64 {
        self.samples.last().map(|s| s.t).unwrap_or(0.0)
    }

    /// Positions at time `t`, interpolated linearly between the recorded
    /// samples (exact, since motion is linear between events and every
    /// event is a sample). Clamps outside the recorded range.
    pub fn position_at(&self, t: f64) -> Vec<f64> {
        match self
            .samples
            .binary_search_by(|s| s.t.partial_cmp(&t).expect("finite times"))
        {
            Ok(k) => self.samples[k].x.clone(),
            Err(0) => self.samples[0].x.clone(),
            Err(k) if k >= self.samples.len() => self.samples.last().expect("nonempty").x.clone(),
            Err(k) => {
                let a = &self.samples[k - 1];
                let b = &self.samples[k];
                let span = b.t - a.t;
                if span <= 0.0 {
                    return b.x.clone();
                }
                let w = (t - a.t) / span;
                a.x.iter()
                    .zip(b.x.iter())
                    .map(|(xa, xb)| xa + w * (xb - xa))
                    .collect()
            }
        }
    }

    /// Pointwise image under a linear map: positions and velocities both
    /// transform.
    pub fn map_linear(&self, m: &Matrix) -> Trajectory {
        Trajectory {
            samples: self
                .samples
                .iter()
                .map(|s| TrajectorySample {
                    t: s.t,
                    x: m.mul_vec(&s.x),
                    v: m.mul_vec(&s.v),
                })
                .collect(),
            events: self.events.clone(),
        }
    }
}

/// Earliest approaching contact among all pairs: positions `p`, velocities
/// `w`, contact separation `2r`. Ties within the tolerance resolve to the
/// smallest `(i, j)`.
fn next_collision(p: &[f64], w: &[f64], radius: f64) -> Option<CollisionEvent> {
    let mut best: Option<CollisionEvent> = None;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            let d = p[i] - p[j];
            let rel = w[i] - w[j];
            if d * rel >= 0.0 || rel == 0.0 {
                continue; // separating or parallel
            }
            let tau = ((d.abs() - 2.0 * radius) / rel.abs()).max(0.0);
            // Pairs are visited in ascending order, so keeping the incumbent
            // on a tie resolves simultaneous events lexicographically.
            let replace = match best {
                None => true,
                Some(b) => tau < b.t - EVENT_TIME_TOLERANCE,
            };
            if replace {
                best = Some(CollisionEvent { t: tau, i, j });
            }
        }
    }
    best
}

struct Recorder {
    dt: f64,
    next_grid: f64,
    samples: Vec<TrajectorySample>,
}

impl Recorder {
    fn new(dt: f64, x: Vec<f64>, v: Vec<f64>) -> Recorder {
        Recorder {
            dt,
            next_grid: dt,
            samples: vec![TrajectorySample { t: 0.0, x, v }],
        }
    }

    /// Emits grid samples in `(t_from, t_to)`, positions extrapolated from
    /// `(x, v)` at `t_from`.
    fn fill_grid(&mut self, t_from: f64, t_to: f64, x: &[f64], v: &[f64]) {
        while self.next_grid < t_to - 1e-15 {
            let t = self.next_grid;
            let pos: Vec<f64> = x
                .iter()
                .zip(v.iter())
                .map(|(xi, vi)| xi + vi * (t - t_from))
                .collect();
            self.samples.push(TrajectorySample {
                t,
                x: pos,
                v: v.to_vec(),
            });
            self.next_grid += self.dt;
        }
        // skip a grid point that coincides with the upcoming explicit sample
        if (self.next_grid - t_to).abs() <= 1e-15 {
            self.next_grid += self.dt;
        }
    }

    fn push(&mut self, t: f64, x: Vec<f64>, v: Vec<f64>) {
        self.samples.push(TrajectorySample { t, x, v });
    }
}

/// Event-driven exact evolution: straight lines between contacts, velocity
/// exchange at contact.
pub fn evolve_original(s: &BilliardState, horizon: f64, dt: f64) -> Result<Trajectory> {
    s.check_no_overlap()?;
    let mut x = s.x.clone();
    let mut v = s.v.clone();
    let mut t = 0.0f64;
    let mut recorder = Recorder::new(dt, x.clone(), v.clone());
    let mut events = Vec::new();
    loop {
        let event = next_collision(&x, &v, s.radius);
        let t_event = event.map(|e| t + e.t);
        match (event, t_event) {
            (Some(e), Some(te)) if te <= horizon => {
                recorder.fill_grid(t, te, &x, &v);
                for (xi, vi) in x.iter_mut().zip(v.iter()) {
                    *xi += vi * (te - t);
                }
                v.swap(e.i, e.j);
                t = te;
                events.push(CollisionEvent { t, i: e.i, j: e.j });
                recorder.push(t, x.clone(), v.clone());
            }
            _ => {
                recorder.fill_grid(t, horizon, &x, &v);
                let final_x: Vec<f64> = x
                    .iter()
                    .zip(v.iter())
                    .map(|(xi, vi)| xi + vi * (horizon - t))
                    .collect();
                recorder.push(horizon, final_x, v.clone());
                break;
            }
        }
    }
    Ok(Trajectory {
        samples: recorder.samples,
        events,
    })
}

/// Relabels a trajectory into primed coordinates: `x' = V x`, `v' = V v`,
/// pointwise. Pure relabeling, no new dynamics.
pub fn content_preserving_view(trajectory: &Trajectory, t: &BilliardTransform) -> Trajectory {
    trajectory.map_linear(t.forward())
}

/// Evolves primed data under the translated law: straight lines in primed
/// coordinates, with balls `i` and `j` changing course whenever the
/// pulled-back separation `|sum_k (Vinv_i^k - Vinv_j^k) x'_k|` reaches `2r`.
/// The update is the `V`-image of a velocity exchange applied to the
/// pulled-back state.
pub fn evolve_formal(
    s_primed: &BilliardState,
    transform: &BilliardTransform,
    horizon: f64,
    dt: f64,
) -> Result<Trajectory> {
    let mut xp = s_primed.x.clone();
    let mut vp = s_primed.v.clone();
    let radius = s_primed.radius;
    check_no_overlap(&transform.from_primed(&xp), radius)?;
    let mut t = 0.0f64;
    let mut recorder = Recorder::new(dt, xp.clone(), vp.clone());
    let mut events = Vec::new();
    loop {
        let pulled_x = transform.from_primed(&xp);
        let pulled_v = transform.from_primed(&vp);
        let event = next_collision(&pulled_x, &pulled_v, radius);
        let t_event = event.map(|e| t + e.t);
        match (event, t_event) {
            (Some(e), Some(te)) if te <= horizon => {
                recorder.fill_grid(t, te, &xp, &vp);
                for (xi, vi) in xp.iter_mut().zip(vp.iter()) {
                    *xi += vi * (te - t);
                }
                let mut u = transform.from_primed(&vp);
                u.swap(e.i, e.j);
                vp = transform.to_primed(&u);
                t = te;
                events.push(CollisionEvent { t, i: e.i, j: e.j });
                recorder.push(t, xp.clone(), vp.clone());
            }
            _ => {
                recorder.fill_grid(t, horizon, &xp, &vp);
                let final_x: Vec<f64> = xp
                    .iter()
                    .zip(vp.iter())
                    .map(|(xi, vi)| xi + vi * (horizon - t))
                    .collect();
                recorder.push(horizon, final_x, vp.clone());
                break;
            }
        }
    }
    Ok(Trajectory {
        samples: recorder.samples,
        events,
    })
}

/// Side-by-side run of the two readings after the same perturbation.
#[derive(Clone, Debug)]
pub struct DivergenceReport {
    /// Earliest event in either run.
    pub first_event_time: Option<f64>,
    /// Sup-norm gap between the two ball-position trajectories over the
    /// whole horizon.
    pub max_gap: f64,
    /// Sup-norm gap restricted to times at or after the first event.
    pub max_gap_after_first_event: f64,
    /// The formal reading's ball trajectory (primed coordinates).
    pub formal: Trajectory,
    /// The content-preserving reading's ball trajectory (the underlying
    /// balls, unprimed coordinates).
    pub content_preserving: Trajectory,
}

/// Perturbs each reading's ball-position variables by the same amounts and
/// evolves both: the formal system's primed positions become `V·x + dx`,
/// the underlying balls of the content-preserving system move to `x + dx`.
/// On eigenvector data the two ball trajectories coincide; generically they
/// part ways at the first contact.
pub fn divergence_report(
    s: &BilliardState,
    dx_primed: &[f64],
    transform: &BilliardTransform,
    horizon: f64,
    dt: f64,
) -> Result<DivergenceReport> {
    if dx_primed.len() != s.len() {
        return Err(Error::QubitCountMismatch(dx_primed.len(), s.len()));
    }
    if transform.size() != s.len() {
        return Err(Error::TransformShape {
            rows: transform.size(),
            cols: transform.size(),
            n: s.len(),
        });
    }
    let primed_x: Vec<f64> = transform
        .to_primed(&s.x)
        .iter()
        .zip(dx_primed.iter())
        .map(|(a, b)| a + b)
        .collect();
    let primed_v = transform.to_primed(&s.v);
    let formal = evolve_formal(
        &BilliardState::raw(primed_x, primed_v, s.radius),
        transform,
        horizon,
        dt,
    )?;
    let perturbed_x: Vec<f64> =
        s.x.iter()
            .zip(dx_primed.iter())
            .map(|(a, b)| a + b)
            .collect();
    let cp_state = BilliardState::new(perturbed_x, s.v.clone(), s.radius)?;
    let content_preserving = evolve_original(&cp_state, horizon, dt)?;

    let mut times: Vec<f64> = Vec::new();
    let mut grid = 0.0;
    while grid <= horizon + 1e-12 {
        times.push(grid.min(horizon));
        grid += dt;
    }
    times.extend(formal.events().iter().map(|e| e.t));
    times.extend(content_preserving.events().iter().map(|e| e.t));
    times.push(horizon);
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));

    let first_event_time = match (
        formal.first_event_time(),
        content_preserving.first_event_time(),
    ) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let mut max_gap = 0.0f64;
    let mut max_gap_after = 0.0f64;
    for &t in &times {
        let a = formal.position_at(t);
        let b = content_preserving.position_at(t);
        let gap = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        max_gap = max_gap.max(gap);
        if first_event_time.map(|fe| t >= fe).unwrap_or(false) {
            max_gap_after = max_gap_after.max(gap);
        }
    }
    Ok(DivergenceReport {
        first_event_time,
        max_gap,
        max_gap_after_first_event: max_gap_after,
        formal,
        content_preserving,
    })
}
