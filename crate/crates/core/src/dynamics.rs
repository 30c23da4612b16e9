//! Vector fields, Jacobians and closed-form equilibria for the scaling-law
//! system and the two Lorenz baselines.
//!
//! The scaling-law field is
//!
//! ```text
//! f(x, y, z) = ( a(y − x),  x(b − z) − y,  xy − cz )
//! ```
//!
//! and both Lorenz variants are instances of the same arrangement with
//! fixed coefficients, which is how they are evaluated here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{Mat3, State3};

/// Residual bound for a closed-form equilibrium to be accepted.
pub const EQUILIBRIUM_RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SystemParams {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    /// Scaling-law system with free coefficients (a, b, c).
    Sl,
    /// Lorenz equations with 8/3 and 28 placed exactly as printed in the
    /// source: (10(y−x), x(8/3−z)−y, xy−28z).
    LorenzLiteral,
    /// Conventional Lorenz-63 with σ=10, ρ=28, β=8/3.
    LorenzStandard,
}

impl SystemKind {
    pub const LORENZ_LITERAL_PARAMS: SystemParams = SystemParams::new(10.0, 8.0 / 3.0, 28.0);
    pub const LORENZ_STANDARD_PARAMS: SystemParams = SystemParams::new(10.0, 28.0, 8.0 / 3.0);

    pub fn is_lorenz(self) -> bool {
        !matches!(self, SystemKind::Sl)
    }

    /// Coefficients of the (a, b, c) arrangement this kind evaluates.
    /// Lorenz kinds ignore `params`.
    pub fn field_params(self, params: SystemParams) -> SystemParams {
        match self {
            SystemKind::Sl => params,
            SystemKind::LorenzLiteral => Self::LORENZ_LITERAL_PARAMS,
            SystemKind::LorenzStandard => Self::LORENZ_STANDARD_PARAMS,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SystemKind::Sl => "sl",
            SystemKind::LorenzLiteral => "lorenz-literal",
            SystemKind::LorenzStandard => "lorenz-standard",
        }
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sl" => Ok(SystemKind::Sl),
            "lorenz-literal" => Ok(SystemKind::LorenzLiteral),
            "lorenz-standard" => Ok(SystemKind::LorenzStandard),
            other => Err(Error::invalid(
                "system",
                format!("unknown system `{other}`"),
            )),
        }
    }
}

/// An autonomous field on R³ with an exact Jacobian.
pub trait VectorField: Sync {
    fn eval(&self, state: State3) -> State3;
    fn jacobian(&self, state: State3) -> Mat3;

    /// f(base + offset) − f(base). Implementors with a closed form should
    /// override this to avoid cancellation for tiny offsets.
    fn difference(&self, base: State3, offset: State3) -> State3 {
        self.eval(base + offset) - self.eval(base)
    }
}

/// A concrete system: kind plus coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct System {
    pub kind: SystemKind,
    pub params: SystemParams,
}

impl System {
    pub fn new(kind: SystemKind, params: SystemParams) -> Self {
        Self {
            kind,
            params: kind.field_params(params),
        }
    }

    pub fn sl(params: SystemParams) -> Self {
        Self::new(SystemKind::Sl, params)
    }
}

impl VectorField for System {
    fn eval(&self, state: State3) -> State3 {
        eval_sl_field(self.params, state)
    }

    fn jacobian(&self, state: State3) -> Mat3 {
        jacobian(self.kind, self.params, state)
    }

    // The field is quadratic: the difference is J(base)·o plus the
    // bilinear terms of o alone.
    fn difference(&self, base: State3, o: State3) -> State3 {
        self.jacobian(base).mul_vec(o) + State3::new(0.0, -o.x * o.z, o.x * o.y)
    }
}

pub fn eval_sl_field(params: SystemParams, state: State3) -> State3 {
    let SystemParams { a, b, c } = params;
    let State3 { x, y, z } = state;
    State3::new(a * (y - x), x * (b - z) - y, x * y - c * z)
}

pub fn eval_lorenz_field(kind: SystemKind, state: State3) -> Result<State3> {
    if !kind.is_lorenz() {
        return Err(Error::WrongSystem(
            "eval_lorenz_field called with the scaling-law system; use eval_sl_field".into(),
        ));
    }
    Ok(eval_sl_field(
        kind.field_params(SystemParams::new(0.0, 0.0, 0.0)),
        state,
    ))
}

pub fn jacobian(kind: SystemKind, params: SystemParams, state: State3) -> Mat3 {
    let SystemParams { a, b, c } = kind.field_params(params);
    let State3 { x, y, z } = state;
    Mat3([[-a, a, 0.0], [b - z, -1.0, -x], [y, x, -c]])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub point: State3,
    pub residual_norm: f64,
    pub multiplicity_note: String,
}

impl Equilibrium {
    fn at(params: SystemParams, point: State3, note: &str) -> Self {
        Self {
            point,
            residual_norm: eval_sl_field(params, point).norm(),
            multiplicity_note: note.to_string(),
        }
    }
}

/// All real zeros of the scaling-law field, origin first, then the
/// positive branch, then the negative branch.
///
/// With a ≠ 0 the first component forces x = y, the second then gives
/// z = b − 1 (or x = 0), and the third x² = c(b − 1).
pub fn equilibria(params: SystemParams) -> Result<Vec<Equilibrium>> {
    if !params.is_finite() {
        return Err(Error::invalid("params", "coefficients must be finite"));
    }
    if params.c == 0.0 {
        return Err(Error::invalid("c", "closed form requires c ≠ 0"));
    }
    if params.a == 0.0 {
        return Err(Error::invalid(
            "a",
            "a = 0 admits a continuum of equilibria",
        ));
    }
    let z = params.b - 1.0;
    let r = params.c * z;
    let origin_note = if z == 0.0 {
        "origin; nontrivial pair merged into it (b = 1)"
    } else {
        "simple"
    };
    let mut out = vec![Equilibrium::at(params, State3::ORIGIN, origin_note)];
    if r > 0.0 {
        let x = r.sqrt();
        out.push(Equilibrium::at(params, State3::new(x, x, z), "simple"));
        out.push(Equilibrium::at(params, State3::new(-x, -x, z), "simple"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ATTRACTOR_I: SystemParams = SystemParams::new(2.35, 0.3, 27.0);
    const ATTRACTOR_II: SystemParams = SystemParams::new(2.0, 0.3, 27.0);

    // Hand-substituted values, written out term by term.
    #[test]
    fn sl_field_examples() {
        assert_eq!(eval_sl_field(ATTRACTOR_II, State3::ORIGIN), State3::ORIGIN);

        let f = eval_sl_field(ATTRACTOR_I, State3::new(1.0, 1.0, 1.0));
        let expect = State3::new(2.35 * 0.0, 1.0 * (0.3 - 1.0) - 1.0, 1.0 - 27.0);
        assert!((f - expect).max_abs() < 1e-15);
        assert!((f.y + 1.7).abs() < 1e-15 && f.z == -26.0 && f.x == 0.0);

        let f = eval_sl_field(ATTRACTOR_II, State3::new(1.0, 2.0, 3.0));
        assert!((f - State3::new(2.0, -4.7, -79.0)).max_abs() < 1e-14);
    }

    #[test]
    fn lorenz_examples() {
        let s = eval_lorenz_field(SystemKind::LorenzStandard, State3::ORIGIN).unwrap();
        assert_eq!(s, State3::ORIGIN);

        let s = eval_lorenz_field(SystemKind::LorenzStandard, State3::new(1.0, 1.0, 1.0)).unwrap();
        assert!((s - State3::new(0.0, 26.0, -5.0 / 3.0)).max_abs() < 1e-14);

        let s = eval_lorenz_field(SystemKind::LorenzLiteral, State3::new(1.0, 1.0, 1.0)).unwrap();
        assert!((s - State3::new(0.0, 2.0 / 3.0, -27.0)).max_abs() < 1e-14);
        // literal form as printed
        let (x, y, z) = (1.0, 1.0, 1.0);
        assert_eq!(
            s,
            State3::new(10.0 * (y - x), x * (8.0 / 3.0 - z) - y, x * y - 28.0 * z)
        );

        assert!(matches!(
            eval_lorenz_field(SystemKind::Sl, State3::ORIGIN),
            Err(Error::WrongSystem(_))
        ));
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian(SystemKind::Sl, ATTRACTOR_II, State3::ORIGIN);
        assert_eq!(
            j,
            Mat3([[-2.0, 2.0, 0.0], [0.3, -1.0, 0.0], [0.0, 0.0, -27.0]])
        );

        let p = SystemParams::new(3.5, -1.25, 7.0);
        assert_eq!(
            jacobian(SystemKind::Sl, p, State3::ORIGIN).rows()[2],
            [0.0, 0.0, -7.0]
        );

        let j = jacobian(SystemKind::LorenzStandard, p, State3::new(1.0, 1.0, 1.0));
        let expect = Mat3([
            [-10.0, 10.0, 0.0],
            [27.0, -1.0, -1.0],
            [1.0, 1.0, -8.0 / 3.0],
        ]);
        assert_eq!(j, expect);
    }

    /// Brute-force oracle: Newton from many seeds on the raw field, no
    /// closed form involved.
    fn newton_sweep_roots(params: SystemParams, seeds: usize) -> Vec<State3> {
        let mut found: Vec<State3> = Vec::new();
        let mut seed_state = 0x2545_f491_u64;
        let mut next = || {
            seed_state ^= seed_state << 13;
            seed_state ^= seed_state >> 7;
            seed_state ^= seed_state << 17;
            (seed_state >> 11) as f64 / (1u64 << 53) as f64 * 40.0 - 20.0
        };
        for _ in 0..seeds {
            let mut p = State3::new(next(), next(), next());
            for _ in 0..100 {
                let f = eval_sl_field(params, p);
                let Some(d) = jacobian(SystemKind::Sl, params, p).solve(f) else {
                    break;
                };
                p = p - d;
            }
            if p.is_finite()
                && eval_sl_field(params, p).norm() < 1e-9
                && !found.iter().any(|q| (*q - p).norm() < 1e-6)
            {
                found.push(p);
            }
        }
        found
    }

    #[test]
    fn equilibria_attractor_ii_origin_only() {
        let eq = equilibria(ATTRACTOR_II).unwrap();
        assert_eq!(eq.len(), 1);
        assert_eq!(eq[0].point, State3::ORIGIN);
        assert!(eq[0].residual_norm <= EQUILIBRIUM_RESIDUAL_TOL);

        let roots = newton_sweep_roots(ATTRACTOR_II, 100);
        assert!(!roots.is_empty());
        assert!(roots.iter().all(|r| r.norm() < 1e-6), "{roots:?}");
    }

    #[test]
    fn equilibria_lorenz_coefficients() {
        let eq = equilibria(SystemParams::new(10.0, 28.0, 8.0 / 3.0)).unwrap();
        assert_eq!(eq.len(), 3);
        let r = 72f64.sqrt();
        assert!((eq[1].point - State3::new(r, r, 27.0)).max_abs() < 1e-10);
        assert!((eq[2].point - State3::new(-r, -r, 27.0)).max_abs() < 1e-10);
        assert!((r - 8.485281).abs() < 1e-6);
        for e in &eq {
            assert!(e.residual_norm <= EQUILIBRIUM_RESIDUAL_TOL, "{e:?}");
        }
        assert_eq!(
            newton_sweep_roots(SystemParams::new(10.0, 28.0, 8.0 / 3.0), 100).len(),
            3
        );
    }

    #[test]
    fn equilibria_degenerate_b_one() {
        let eq = equilibria(SystemParams::new(2.0, 1.0, 27.0)).unwrap();
        assert_eq!(eq.len(), 1);
        assert!(eq[0].multiplicity_note.contains("merged"));
    }

    #[test]
    fn equilibria_rejects_zero_c() {
        assert!(matches!(
            equilibria(SystemParams::new(2.0, 0.3, 0.0)),
            Err(Error::InvalidParameter { name: "c", .. })
        ));
    }

    fn params_strategy() -> impl Strategy<Value = SystemParams> {
        (-5.0..5.0f64, -5.0..30.0f64, 0.5..30.0f64).prop_map(|(a, b, c)| SystemParams::new(a, b, c))
    }

    fn state_strategy() -> impl Strategy<Value = State3> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..40.0f64).prop_map(|(x, y, z)| State3::new(x, y, z))
    }

    proptest! {
        #[test]
        fn jacobian_matches_central_differences(p in params_strategy(), s in state_strategy()) {
            let h = 1e-6;
            let j = jacobian(SystemKind::Sl, p, s);
            for (k, e) in [State3::new(h, 0.0, 0.0), State3::new(0.0, h, 0.0), State3::new(0.0, 0.0, h)]
                .into_iter()
                .enumerate()
            {
                let fd = (eval_sl_field(p, s + e) - eval_sl_field(p, s - e)) * (0.5 / h);
                prop_assert!((fd - j.column(k)).max_abs() < 1e-6);
            }
        }

        #[test]
        fn exact_difference_matches_direct(p in params_strategy(), s in state_strategy(), o in state_strategy()) {
            let sys = System::sl(p);
            let direct = eval_sl_field(p, s + o) - eval_sl_field(p, s);
            prop_assert!((sys.difference(s, o) - direct).max_abs() < 1e-9);
        }

        #[test]
        fn field_is_odd_in_xy(p in params_strategy(), s in state_strategy()) {
            let f = eval_sl_field(p, s);
            let g = eval_sl_field(p, State3::new(-s.x, -s.y, s.z));
            prop_assert_eq!(g, State3::new(-f.x, -f.y, f.z));
        }

        #[test]
        fn equilibria_residuals_and_symmetry(
            a in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64],
            b in -5.0..30.0f64,
            c in prop_oneof![-30.0..-0.5f64, 0.5..30.0f64],
        ) {
            let p = SystemParams::new(a, b, c);
            let eq = equilibria(p).unwrap();
            for e in &eq {
                prop_assert!(e.residual_norm <= EQUILIBRIUM_RESIDUAL_TOL);
                let mirrored = State3::new(-e.point.x, -e.point.y, e.point.z);
                prop_assert!(eq.iter().any(|q| q.point == mirrored));
            }
        }
    }
}
