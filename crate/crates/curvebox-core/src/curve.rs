//! Per-curve structural analysis: fibers of the projection to the
//! x-coordinate, completely ramified points, the one-point-per-column
//! condition, and full point enumeration.

use crate::counting::CyclicInterval;
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::poly::{BivariatePoly, UnivariatePoly};
use alloc::vec::Vec;

/// An affine plane curve `f(x, y) = 0` over `F_p`.
///
/// The polynomial must involve y; total degree 1 is only allowed for
/// curves of y-degree 1 (graphs), matching the standing degree > 1
/// assumption everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurve {
    f: BivariatePoly,
}

/// The x-coordinates over which every point of the fiber collapses to a
/// single y with full multiplicity. The search is restricted to
/// `F_p`-rational x, so an empty list does not falsify the existence of a
/// completely ramified point in an extension field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationReport {
    pub ramified_x: Vec<u64>,
    /// Always true: only F_p-rational x are searched.
    pub fp_rational_only: bool,
}

/// Witness of a column carrying two curve points with y in J.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionOneWitness {
    pub x: u64,
    pub y1: u64,
    pub y2: u64,
}

/// Outcome of the one-point-per-column check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionOneReport {
    pub holds: bool,
    /// Least violating x with its first two y values (in J order).
    pub witness: Option<ConditionOneWitness>,
}

impl PlaneCurve {
    pub fn new(f: BivariatePoly) -> Result<Self> {
        if f.y_degree() == 0 {
            return Err(Error::NoYDependence);
        }
        if f.total_degree() < 2 && f.y_degree() != 1 {
            return Err(Error::ConstantPolynomial);
        }
        Ok(PlaneCurve { f })
    }

    pub fn parse(modulus: PrimeModulus, text: &str) -> Result<Self> {
        PlaneCurve::new(BivariatePoly::parse(modulus, text)?)
    }

    pub fn polynomial(&self) -> &BivariatePoly {
        &self.f
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.f.modulus()
    }

    pub fn p(&self) -> u64 {
        self.f.modulus().p()
    }

    pub fn degree(&self) -> u32 {
        self.f.total_degree()
    }

    pub fn y_degree(&self) -> u32 {
        self.f.y_degree()
    }

    /// The univariate fiber polynomial `g(y) = f(x0, y)`.
    pub fn fiber_poly(&self, x0: u64) -> UnivariatePoly {
        self.f.substitute_x(x0)
    }

    /// Roots of the fiber at `x0` with multiplicities.
    ///
    /// An identically zero fiber means `(x - x0)` divides f, i.e. the
    /// curve has a vertical line component; that is a hard error.
    pub fn fiber(&self, x0: u64) -> Result<Vec<(u64, u32)>> {
        let g = self.fiber_poly(x0);
        if g.is_zero() {
            return Err(Error::VerticalLine { x: x0 });
        }
        g.roots()
    }

    /// Number of distinct y in J with `f(x0, y) = 0`; at most y_degree.
    pub fn fiber_count(&self, x0: u64, j: &CyclicInterval) -> Result<u64> {
        self.check_interval(j)?;
        if j.is_empty() {
            // still reject vertical lines before shortcutting
            if self.fiber_poly(x0).is_zero() {
                return Err(Error::VerticalLine { x: x0 });
            }
            return Ok(0);
        }
        let fiber = self.fiber(x0)?;
        Ok(fiber.iter().filter(|(y, _)| j.contains(*y)).count() as u64)
    }

    fn check_interval(&self, j: &CyclicInterval) -> Result<()> {
        if j.p() != self.p() {
            return Err(Error::ModulusMismatch {
                left: self.p(),
                right: j.p(),
            });
        }
        Ok(())
    }

    /// All `F_p`-rational x0 whose fiber has full degree and a single root
    /// of multiplicity y_degree. Curves of y-degree 1 are degree-1 covers:
    /// every x0 with a degree-1 fiber qualifies trivially.
    pub fn find_completely_ramified(&self) -> RamificationReport {
        let p = self.p();
        let m = self.modulus();
        let ydeg = self.y_degree();
        let mut ramified_x = Vec::new();
        for x0 in 0..p {
            let g = self.fiber_poly(x0);
            if g.degree() != Some(ydeg as usize) {
                continue;
            }
            if ydeg == 1 {
                ramified_x.push(x0);
                continue;
            }
            let coeffs = g.coeffs();
            let lead = coeffs[ydeg as usize];
            // If g = lead*(y - y0)^m then the y^(m-1) coefficient is
            // -m*lead*y0, which pins y0 when p does not divide m.
            let y0 = if !(ydeg as u64).is_multiple_of(p) {
                let m_lead = m.mul(ydeg as u64 % p, lead);
                m.mul(m.neg(coeffs[ydeg as usize - 1]), m.inv(m_lead).unwrap())
            } else {
                // p | y_degree: fall back to the root finder
                match g.roots() {
                    Ok(roots) if roots.len() == 1 => roots[0].0,
                    _ => continue,
                }
            };
            if g.root_multiplicity(y0) == ydeg {
                ramified_x.push(x0);
            }
        }
        RamificationReport {
            ramified_x,
            fp_rational_only: true,
        }
    }

    /// Checks that every column has at most one y in J on the curve.
    /// On failure reports the least violating x with its first two
    /// y-values in J order. A vertical line component violates the
    /// condition outright whenever J has at least two elements.
    pub fn check_condition_one(&self, j: &CyclicInterval) -> Result<ConditionOneReport> {
        self.check_interval(j)?;
        let p = self.p();
        for x in 0..p {
            let g = self.fiber_poly(x);
            if g.is_zero() {
                if j.len() >= 2 {
                    let mut it = j.iter();
                    let y1 = it.next().unwrap();
                    let y2 = it.next().unwrap();
                    return Ok(ConditionOneReport {
                        holds: false,
                        witness: Some(ConditionOneWitness { x, y1, y2 }),
                    });
                }
                continue;
            }
            if j.is_empty() {
                continue;
            }
            let mut in_j: Vec<u64> = g
                .roots()?
                .into_iter()
                .map(|(y, _)| y)
                .filter(|&y| j.contains(y))
                .collect();
            if in_j.len() > 1 {
                in_j.sort_by_key(|&y| j.offset_of(y).unwrap());
                return Ok(ConditionOneReport {
                    holds: false,
                    witness: Some(ConditionOneWitness {
                        x,
                        y1: in_j[0],
                        y2: in_j[1],
                    }),
                });
            }
        }
        Ok(ConditionOneReport {
            holds: true,
            witness: None,
        })
    }

    /// Exact number of points `(x, y)` in `F_p^2` on the curve. A vertical
    /// line contributes p points; no error here, unlike the counting
    /// sweeps.
    pub fn point_count(&self) -> u64 {
        let p = self.p();
        let mut total = 0u64;
        for x0 in 0..p {
            let g = self.fiber_poly(x0);
            if g.is_zero() {
                total += p;
            } else {
                total += g.roots().expect("nonzero fiber").len() as u64;
            }
        }
        total
    }

    /// All points, column by column; intended for small p (oracles, CLI).
    pub fn points(&self) -> Vec<(u64, u64)> {
        let p = self.p();
        let mut out = Vec::new();
        for x0 in 0..p {
            let g = self.fiber_poly(x0);
            if g.is_zero() {
                out.extend((0..p).map(|y| (x0, y)));
            } else {
                out.extend(
                    g.roots()
                        .expect("nonzero fiber")
                        .into_iter()
                        .map(|(y, _)| (x0, y)),
                );
            }
        }
        out
    }

    /// Loose Weil-range sanity check: `|N(C) - p| <= (d-1)(d-2) sqrt(p) + d^2`.
    /// Meaningful for absolutely irreducible curves; reducible inputs are
    /// expected to fail it, so callers flag rather than assert.
    pub fn weil_range_ok(&self) -> bool {
        let p = self.p();
        let d = self.degree() as f64;
        let n = self.point_count();
        let defect = if n >= p {
            (n - p) as f64
        } else {
            (p - n) as f64
        };
        defect <= (d - 1.0) * (d - 2.0) * libm::sqrt(p as f64) + d * d
    }
}
