//! Section modules `B_q = H^0(qD + twist)` over `S(H^0(D))`.

use crate::algebra::{SparseMatrix, SpanSolver};
use crate::curves::curve::PlaneCurve;
use crate::curves::divisor::Divisor;
use crate::curves::rr::{riemann_roch_space, LinearSystem};
use crate::error::{Error, Result};
use crate::koszul::GradedModule;
use crate::par;

/// A module built from a curve together with the linear systems behind it.
#[derive(Clone, Debug)]
pub struct CurveModule {
    pub module: GradedModule,
    /// `L(D)`, whose basis acts.
    pub v: LinearSystem,
    /// `L(qD + twist)` for `q = 0..=q_max`.
    pub systems: Vec<LinearSystem>,
}

impl CurveModule {
    pub fn h0(&self) -> usize {
        self.v.h0
    }
}

/// Builds `B = ⊕_{q=0}^{q_max} L(qD + twist)` with `V = L(D)`. Both `D` and
/// `qD + twist` must already have the shape `M H - E` accepted by
/// [`riemann_roch_space`]. Products of sections are reduced modulo the curve
/// and expressed in the basis of the next degree; a product outside that span
/// means the linear system was incomplete and is reported as an error.
pub fn build_graded_module(
    curve: &PlaneCurve,
    d: &Divisor,
    twist: Option<&Divisor>,
    q_max: usize,
    parallel: bool,
) -> Result<CurveModule> {
    let f = curve.field();
    let v = riemann_roch_space(curve, d)?;
    let zero = Divisor::zero();
    let twist = twist.unwrap_or(&zero);
    let degrees: Vec<usize> = (0..=q_max).collect();
    let systems: Vec<LinearSystem> = par::map(&degrees, parallel, |&q| {
        let dq = &d.scaled(q as i64) + twist;
        riemann_roch_space(curve, &dq)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let n = v.h0;
    let mut mult = Vec::with_capacity(q_max);
    for q in 0..q_max {
        let (src, tgt) = (&systems[q], &systems[q + 1]);
        let len = crate::curves::forms::num_monomials(tgt.degree);
        let coords: Vec<Vec<u64>> = tgt.basis.iter().map(|g| g.coeffs.clone()).collect();
        let solver = SpanSolver::new(f, &coords, len)?;
        let maps = par::map(&v.basis, parallel, |vi| -> Result<SparseMatrix> {
            let mut trip = Vec::new();
            for (b, g) in src.basis.iter().enumerate() {
                let prod = curve.reducer().reduce(&vi.mul(f, g));
                if prod.degree != tgt.degree {
                    return Err(Error::DimensionMismatch(format!(
                        "product of degree {} in a system of degree {}",
                        prod.degree, tgt.degree
                    )));
                }
                let c = solver.coordinates(&prod.coeffs)?.ok_or_else(|| {
                    Error::NotInSpan(format!(
                        "product of sections of {} and {} is not in L({}); the linear system is incomplete",
                        v.divisor, src.divisor, tgt.divisor
                    ))
                })?;
                trip.extend(c.into_iter().enumerate().filter(|&(_, x)| x != 0).map(|(r, x)| (r, b, x)));
            }
            SparseMatrix::from_triplets(f, tgt.h0, src.h0, trip)
        });
        mult.push(maps.into_iter().collect::<Result<Vec<_>>>()?);
    }
    let dims = systems.iter().map(|s| s.h0).collect();
    // B_{-1} = L(twist - D) vanishes as soon as its degree is negative
    let zero_below = (twist - d).degree(curve) < 0;
    let module = GradedModule::new(f, n, 0, dims, mult, zero_below)?;
    Ok(CurveModule { module, v, systems })
}
