use crate::dynamics::{Equilibrium, VectorField};
use crate::error::{Error, Result};
use crate::state::State3;

pub const MAX_NEWTON_ITERATIONS: usize = 50;

/// Newton's method on `field(x) = 0` using the field's exact Jacobian.
pub fn newton_fixed_point<F: VectorField + ?Sized>(
    field: &F,
    guess: State3,
    tol: f64,
) -> Result<Equilibrium> {
    let mut x = guess;
    for iteration in 0..=MAX_NEWTON_ITERATIONS {
        let r = field.eval(x);
        let residual = r.norm();
        if residual <= tol {
            return Ok(Equilibrium {
                point: x,
                residual_norm: residual,
                multiplicity_note: format!("newton, {iteration} iterations"),
            });
        }
        if iteration == MAX_NEWTON_ITERATIONS || !residual.is_finite() {
            return Err(Error::NoConvergence {
                iterate: x,
                residual,
                iterations: iteration,
            });
        }
        let step = field.jacobian(x).solve(r).ok_or(Error::SingularJacobian {
            iterate: x,
            residual,
        })?;
        x = x - step;
    }
    unreachable!()
}
