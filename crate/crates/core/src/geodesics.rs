//! Geodesics `x'' = (A x') w'`, `w'' = 0`: closed form, RK4, first integrals,
//! and a numeric check that a vector field maps geodesics to geodesics.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::determining::JetSource;
use crate::linalg::{exp_and_phi, RatMatrix};
use crate::symbolic::coordinate_names;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeodesicError {
    #[error("state has {got} position/velocity components, matrix needs {want}")]
    Dimension { got: usize, want: usize },
    #[error("matrix must be square")]
    NotSquare,
    #[error("t_end must exceed the initial time and steps must be positive")]
    BadInterval,
    #[error("timestamps must be strictly increasing")]
    NotIncreasing,
}

/// A point of the tangent bundle together with a time stamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    #[serde(default)]
    pub t: f64,
    pub x: Vec<f64>,
    pub w: f64,
    /// `dx/dt`
    pub u: Vec<f64>,
    /// `dw/dt`
    pub q: f64,
}

impl GeodesicState {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    fn check(&self, a: &RatMatrix) -> Result<(), GeodesicError> {
        if !a.is_square() {
            return Err(GeodesicError::NotSquare);
        }
        let want = a.rows();
        if self.x.len() != want || self.u.len() != want {
            return Err(GeodesicError::Dimension {
                got: self.x.len().max(self.u.len()),
                want,
            });
        }
        Ok(())
    }

    /// Largest componentwise difference in `(x, w, u, q)`.
    pub fn max_difference(&self, other: &GeodesicState) -> f64 {
        let pairs = self.x.iter().zip(&other.x).chain(self.u.iter().zip(&other.u));
        pairs
            .map(|(a, b)| (a - b).abs())
            .fold((self.w - other.w).abs().max((self.q - other.q).abs()), f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    states: Vec<GeodesicState>,
}

impl Trajectory {
    pub fn new(states: Vec<GeodesicState>) -> Result<Trajectory, GeodesicError> {
        if states.windows(2).any(|p| p[1].t <= p[0].t) {
            return Err(GeodesicError::NotIncreasing);
        }
        Ok(Trajectory { states })
    }

    pub fn states(&self) -> &[GeodesicState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// CSV with header `t, x.., w, u_x.., q`.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, GeodesicState::n);
        let names = coordinate_names(n);
        let mut header: Vec<String> = names.clone();
        header.extend(names[1..=n].iter().map(|c| format!("u_{c}")));
        header.push("q".to_string());
        let mut out = header.join(",");
        out.push('\n');
        for s in &self.states {
            let mut row = vec![s.t];
            row.extend(&s.x);
            row.push(s.w);
            row.extend(&s.u);
            row.push(s.q);
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.15e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Exact solution after elapsed time `dt`:
/// `w = w0 + q dt`, `u = e^{q dt A} u0`, `x = x0 + phi(q dt A) u0 dt`.
pub fn closed_form_geodesic(a: &RatMatrix, init: &GeodesicState, dt: f64) -> Result<GeodesicState, GeodesicError> {
    init.check(a)?;
    Ok(closed_form_f64(&a.to_f64(), init, dt))
}

fn closed_form_f64(a: &DMatrix<f64>, init: &GeodesicState, dt: f64) -> GeodesicState {
    let u0 = DVector::from_column_slice(&init.u);
    let (x, u) = if init.q == 0.0 {
        let x = DVector::from_column_slice(&init.x) + &u0 * dt;
        (x, u0)
    } else {
        let (e, phi) = exp_and_phi(&(a * (init.q * dt)));
        (DVector::from_column_slice(&init.x) + phi * &u0 * dt, e * u0)
    };
    GeodesicState {
        t: init.t + dt,
        x: x.as_slice().to_vec(),
        w: init.w + init.q * dt,
        u: u.as_slice().to_vec(),
        q: init.q,
    }
}

/// Classical fixed-step RK4 from `init.t` to `t_end`; returns `steps + 1`
/// samples including the initial state.
pub fn rk4_geodesic(
    a: &RatMatrix,
    init: &GeodesicState,
    t_end: f64,
    steps: usize,
) -> Result<Trajectory, GeodesicError> {
    init.check(a)?;
    if steps == 0 || t_end.partial_cmp(&init.t) != Some(std::cmp::Ordering::Greater) {
        return Err(GeodesicError::BadInterval);
    }
    let n = init.n();
    let af = a.to_f64();
    let h = (t_end - init.t) / steps as f64;
    // y = (x, w, u, q)
    let rhs = |y: &DVector<f64>| -> DVector<f64> {
        let u = y.rows(n + 1, n);
        let q = y[2 * n + 1];
        let mut d = DVector::zeros(2 * n + 2);
        d.rows_mut(0, n).copy_from(&u);
        d[n] = q;
        d.rows_mut(n + 1, n).copy_from(&(&af * u * q));
        d
    };
    let mut y = DVector::from_iterator(
        2 * n + 2,
        init.x.iter().copied().chain([init.w]).chain(init.u.iter().copied()).chain([init.q]),
    );
    let mut states = Vec::with_capacity(steps + 1);
    states.push(init.clone());
    for step in 1..=steps {
        let k1 = rhs(&y);
        let k2 = rhs(&(&y + &k1 * (h / 2.0)));
        let k3 = rhs(&(&y + &k2 * (h / 2.0)));
        let k4 = rhs(&(&y + &k3 * h));
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        states.push(GeodesicState {
            t: init.t + h * step as f64,
            x: y.rows(0, n).iter().copied().collect(),
            w: y[n],
            u: y.rows(n + 1, n).iter().copied().collect(),
            q: y[2 * n + 1],
        });
    }
    Trajectory::new(states)
}

/// Contractions of the velocity with the invariant one-forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstIntegrals {
    /// `u - (A x) q`
    pub right: Vec<f64>,
    /// `e^{-wA} u`
    pub left: Vec<f64>,
    /// `q`
    pub dw: f64,
}

impl FirstIntegrals {
    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.right.iter().chain(&self.left).copied().chain([self.dw])
    }

    pub fn max_difference(&self, other: &FirstIntegrals) -> f64 {
        self.values().zip(other.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub fn first_integrals(a: &RatMatrix, s: &GeodesicState) -> Result<FirstIntegrals, GeodesicError> {
    s.check(a)?;
    Ok(first_integrals_f64(&a.to_f64(), s))
}

fn first_integrals_f64(a: &DMatrix<f64>, s: &GeodesicState) -> FirstIntegrals {
    let x = DVector::from_column_slice(&s.x);
    let u = DVector::from_column_slice(&s.u);
    let right = &u - a * x * s.q;
    let left = exp_and_phi(&(a * -s.w)).0 * u;
    FirstIntegrals {
        right: right.as_slice().to_vec(),
        left: left.as_slice().to_vec(),
        dw: s.q,
    }
}

/// Largest change of any of the `2n + 1` first integrals along `traj`,
/// relative to its first sample.
pub fn first_integral_drift(a: &RatMatrix, traj: &Trajectory) -> Result<f64, GeodesicError> {
    let Some(first) = traj.states.first() else {
        return Ok(0.0);
    };
    first.check(a)?;
    let af = a.to_f64();
    let base = first_integrals_f64(&af, first);
    Ok(traj.states[1..]
        .iter()
        .map(|s| first_integrals_f64(&af, s).max_difference(&base))
        .fold(0.0, f64::max))
}

/// Settings for [`transport_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    /// Flow parameter of the transformation.
    pub epsilon: f64,
    /// RK4 steps for the flow of the field.
    pub flow_steps: usize,
    /// Length in `t` of the geodesic segment that is transported.
    pub span: f64,
    /// Points sampled along the segment.
    pub samples: usize,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions {
            epsilon: 0.1,
            flow_steps: 200,
            span: 1.0,
            samples: 20,
        }
    }
}

/// Maps the geodesic through `init` by the time-`epsilon` flow of `field`
/// and returns how far the image curve is from the geodesic started at the
/// image of the initial 1-jet. Symmetries give a deviation at the level of
/// integration error.
///
/// Each point `z = (t, x, w)` is flowed together with the curve tangent
/// `p = (1, u, q)` by `z' = X(z)`, `p' = DX(z) p`; the transported velocity is
/// the spatial part of `p` divided by its `t` part.
pub fn transport_check<F: JetSource + ?Sized>(
    field: &F,
    a: &RatMatrix,
    init: &GeodesicState,
    opts: &TransportOptions,
) -> Result<f64, GeodesicError> {
    init.check(a)?;
    let n = init.n();
    if field.n() != n {
        return Err(GeodesicError::Dimension { got: field.n(), want: n });
    }
    let af = a.to_f64();
    let m = n + 2;
    let flow = |z0: Vec<f64>, p0: Vec<f64>| -> (Vec<f64>, Vec<f64>) {
        let rhs = |y: &[f64]| -> Vec<f64> {
            let jets = field.jets_at(&y[..m]);
            let mut d = vec![0.0; 2 * m];
            for (k, jet) in jets.iter().enumerate() {
                d[k] = jet.value;
                d[m + k] = (0..m).map(|c| jet.grad[c] * y[m + c]).sum();
            }
            d
        };
        let h = opts.epsilon / opts.flow_steps as f64;
        let mut y: Vec<f64> = z0.into_iter().chain(p0).collect();
        let axpy = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + s * b).collect() };
        for _ in 0..opts.flow_steps {
            let k1 = rhs(&y);
            let k2 = rhs(&axpy(&y, &k1, h / 2.0));
            let k3 = rhs(&axpy(&y, &k2, h / 2.0));
            let k4 = rhs(&axpy(&y, &k3, h));
            for i in 0..2 * m {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        let p = y.split_off(m);
        (y, p)
    };
    let point = |s: &GeodesicState| -> Vec<f64> { [s.t].into_iter().chain(s.x.iter().copied()).chain([s.w]).collect() };
    let tangent = |s: &GeodesicState| -> Vec<f64> { [1.0].into_iter().chain(s.u.iter().copied()).chain([s.q]).collect() };

    let (z0, p0) = flow(point(init), tangent(init));
    let image_init = GeodesicState {
        t: z0[0],
        x: z0[1..=n].to_vec(),
        w: z0[n + 1],
        u: p0[1..=n].iter().map(|v| v / p0[0]).collect(),
        q: p0[n + 1] / p0[0],
    };

    let mut deviation = 0.0f64;
    for k in 1..=opts.samples {
        let dt = opts.span * k as f64 / opts.samples as f64;
        let on_curve = closed_form_f64(&af, init, dt);
        let (z, _) = flow(point(&on_curve), tangent(&on_curve));
        let predicted = closed_form_f64(&af, &image_init, z[0] - image_init.t);
        let d = predicted
            .x
            .iter()
            .zip(&z[1..=n])
            .map(|(a, b)| (a - b).abs())
            .fold((predicted.w - z[n + 1]).abs(), f64::max);
        deviation = deviation.max(d);
    }
    Ok(deviation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::symbolic::{parse_field, Params};

    fn state(x: &[f64], w: f64, u: &[f64], q: f64) -> GeodesicState {
        GeodesicState {
            t: 0.0,
            x: x.to_vec(),
            w,
            u: u.to_vec(),
            q,
        }
    }

    #[test]
    fn scalar_exponential() {
        let a = RatMatrix::identity(1);
        let s0 = state(&[0.0], 0.0, &[1.0], 1.0);
        for t in [0.3, 1.0, 2.0] {
            let s = closed_form_geodesic(&a, &s0, t).unwrap();
            assert!((s.x[0] - t.exp_m1()).abs() < 1e-13 * t.exp());
            assert!((s.u[0] - t.exp()).abs() < 1e-13 * t.exp());
        }
        let traj = rk4_geodesic(&a, &s0, 2.0, 10_000).unwrap();
        let last = traj.states().last().unwrap();
        assert!((last.x[0] - 2f64.exp_m1()).abs() < 1e-8);
    }

    #[test]
    fn straight_lines_when_q_vanishes() {
        let a = RatMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let s0 = state(&[1.0, -1.0], 0.5, &[0.25, 2.0], 0.0);
        let s = closed_form_geodesic(&a, &s0, 2.0).unwrap();
        assert_eq!(s.x, vec![1.5, 3.0]);
        assert_eq!(s.w, 0.5);
        let traj = rk4_geodesic(&a, &s0, 2.0, 7).unwrap();
        assert!(traj.states().last().unwrap().max_difference(&s) < 1e-15);
        let fi = first_integrals(&a, &s0).unwrap();
        assert_eq!(fi.right, s0.u);
    }

    #[test]
    fn nilpotent_matrix_closed_form() {
        // x'' = y' w', y'' = 0 with w = q t: x = x0 + u0 t + v0 q t^2 / 2
        let a = RatMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let s0 = state(&[0.0, 0.0], 0.0, &[1.0, 2.0], 3.0);
        let s = closed_form_geodesic(&a, &s0, 1.0).unwrap();
        assert!((s.x[0] - 4.0).abs() < 1e-14 && (s.x[1] - 2.0).abs() < 1e-14);
        assert!((s.u[0] - 7.0).abs() < 1e-14);
    }

    #[test]
    fn integrals_conserved() {
        let a = RatMatrix::from_i64(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 1]]);
        let s0 = state(&[0.2, -0.3, 0.5], 0.1, &[0.7, -0.4, 0.3], 0.9);
        let traj = rk4_geodesic(&a, &s0, 2.0, 10_000).unwrap();
        assert!(first_integral_drift(&a, &traj).unwrap() < 1e-8);
        let base = first_integrals(&a, &s0).unwrap();
        let exact = first_integrals(&a, &closed_form_geodesic(&a, &s0, 1.7).unwrap()).unwrap();
        assert!(base.max_difference(&exact) < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let a = RatMatrix::identity(2);
        assert!(closed_form_geodesic(&a, &state(&[0.0], 0.0, &[0.0], 0.0), 1.0).is_err());
        assert!(rk4_geodesic(&a, &state(&[0.0; 2], 0.0, &[0.0; 2], 0.0), 0.0, 10).is_err());
        assert!(rk4_geodesic(&a, &state(&[0.0; 2], 0.0, &[0.0; 2], 0.0), 1.0, 0).is_err());
        assert!(Trajectory::new(vec![state(&[0.0], 0.0, &[0.0], 0.0); 2]).is_err());
    }

    #[test]
    fn csv_layout() {
        let traj = rk4_geodesic(&RatMatrix::identity(3), &state(&[0.0; 3], 0.0, &[1.0; 3], 1.0), 1.0, 4).unwrap();
        let csv = traj.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,x,y,z,w,u_x,u_y,u_z,q"));
        assert_eq!(lines.count(), 5);
    }

    fn a42(a: i64) -> RatMatrix {
        RatMatrix::from_rows(vec![
            vec![rat(a), rat(0), rat(0)],
            vec![rat(0), rat(1), rat(1)],
            vec![rat(0), rat(0), rat(1)],
        ])
    }

    #[test]
    fn transport_separates_symmetries() {
        let p = Params::new();
        let s0 = state(&[0.3, -0.2, 0.1], 0.2, &[0.5, -0.4, 0.6], 0.8);
        let opts = TransportOptions::default();
        let a = a42(2);
        let check = |text: &str, a: &RatMatrix| {
            let f = parse_field(text, 3, &p).unwrap();
            transport_check(&f, a, &s0, &opts).unwrap()
        };
        assert!(check("Dx", &a) < 1e-12);
        assert!(check("exp(w)*(Dz + w*Dy)", &a) < 1e-6);
        assert!(check("t*Dt + Dw", &a) < 1e-6);
        assert!(check("x*exp(w)*Dy", &a) > 1e-3);
        assert!(check("exp(w)*Dx", &RatMatrix::identity(3)) < 1e-6);
    }
}
