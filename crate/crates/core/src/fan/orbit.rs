use num_traits::{Signed, Zero};

use super::{Cone, WeylFan};
use crate::error::{Error, Result};
use crate::root_system::{FactorSpec, RootSystem, Subsystem};

/// The chart `U_S` of a chamber containing `τ`, restricted to the orbit
/// closure: `x^α = 0` for `α ∈ vanishing`, and `S' = S ∩ τ^⊥` as coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitChart {
    pub chamber: usize,
    pub s_prime: Vec<usize>,
    pub vanishing: Vec<usize>,
}

/// The orbit closure of `τ`, isomorphic to `X(R')` for `R' = R ∩ τ^⊥`.
#[derive(Clone, Debug)]
pub struct OrbitClosure {
    pub subsystem: Subsystem,
    pub charts: Vec<OrbitChart>,
    /// Irreducible factors of `R'`, sorted.
    pub factors: Vec<FactorSpec>,
}

fn check_cone(wf: &WeylFan, tau: &Cone) -> Result<()> {
    if tau.ray_indices.iter().any(|&i| i >= wf.fan.rays().len()) || !wf.fan.contains_cone(tau) {
        return Err(Error::InvalidInput(format!("{:?} is not a cone of the fan", tau.ray_indices)));
    }
    Ok(())
}

pub fn orbit_closure(r: &RootSystem, wf: &WeylFan, tau: &Cone) -> Result<OrbitClosure> {
    check_cone(wf, tau)?;
    let v = wf.interior_point(tau);
    let subsystem = r.subsystem(|i| r.pairing(i, &v).is_zero())?;
    let charts = wf
        .chambers_containing(tau)
        .into_iter()
        .map(|c| {
            let (s_prime, vanishing) = wf.chambers[c]
                .root_indices
                .iter()
                .partition(|&&s| r.pairing(s, &v).is_zero());
            OrbitChart {
                chamber: c,
                s_prime,
                vanishing,
            }
        })
        .collect();
    let sys = &subsystem.system;
    let mut factors: Vec<FactorSpec> = sys
        .dynkin_components(sys.base())
        .iter()
        .map(|c| sys.component_type(c))
        .collect();
    factors.sort_by_key(|f| (f.family, f.rank));
    Ok(OrbitClosure {
        subsystem,
        charts,
        factors,
    })
}

/// The cones `τ` and `−τ` with the roots whose characters vanish along the
/// corresponding sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OppositeSections {
    pub plus: Cone,
    pub minus: Cone,
    /// Roots with `⟨α, v_τ⟩ > 0`.
    pub plus_vanishing: Vec<usize>,
    /// Roots with `⟨α, v_τ⟩ < 0`.
    pub minus_vanishing: Vec<usize>,
}

pub fn opposite_sections(r: &RootSystem, wf: &WeylFan, tau: &Cone) -> Result<OppositeSections> {
    check_cone(wf, tau)?;
    let minus = Cone::new(
        tau.ray_indices
            .iter()
            .map(|&i| {
                wf.fan
                    .ray_index(&-&wf.fan.rays()[i])
                    .ok_or_else(|| Error::InvalidInput("fan is not symmetric".into()))
            })
            .collect::<Result<Vec<_>>>()?,
    );
    let v = wf.interior_point(tau);
    let plus_vanishing = (0..r.num_roots()).filter(|&i| r.pairing(i, &v).is_positive()).collect();
    let minus_vanishing = (0..r.num_roots()).filter(|&i| r.pairing(i, &v).is_negative()).collect();
    Ok(OppositeSections {
        plus: tau.clone(),
        minus,
        plus_vanishing,
        minus_vanishing,
    })
}
