use super::CollapseOp;
use crate::error::{Error, Result};
use crate::quantum::{embed, mode_operators, sigma_minus, sigma_z, HilbertSpace};

/// Decoherence parameters of one subsystem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decoherence {
    /// Two-level system with energy relaxation `tau1` and coherence time `tau2` (s).
    Qubit { tau1: f64, tau2: f64 },
    /// Bosonic mode with energy decay time `tau1` (s).
    Resonator { tau1: f64 },
    /// Motional heating in quanta/s, coupled to an infinite-temperature bath:
    /// raising and lowering jumps at the same rate.
    Heating { rate: f64 },
    /// No decoherence.
    None,
}

impl Decoherence {
    /// Pure dephasing rate `1/tau2 - 1/(2 tau1)` of a qubit.
    pub fn pure_dephasing(tau1: f64, tau2: f64) -> Result<f64> {
        if !(tau1 > 0.0 && tau2 > 0.0) {
            return Err(Error::param("tau1/tau2", "must be > 0"));
        }
        let limit = 2.0 * tau1;
        if tau2 > limit * (1.0 + 1e-12) {
            return Err(Error::UnphysicalDephasing { tau2, limit });
        }
        Ok((1.0 / tau2 - 1.0 / limit).max(0.0))
    }
}

/// Jump operators for one subsystem of dimension `dim`, in its local space.
///
/// Zero-rate channels are omitted.
pub fn build_collapse_set(spec: &Decoherence, dim: usize) -> Result<Vec<CollapseOp>> {
    let mut out = Vec::new();
    match *spec {
        Decoherence::Qubit { tau1, tau2 } => {
            if dim != 2 {
                return Err(Error::InvalidDimension(format!(
                    "qubit decoherence needs dimension 2, got {dim}"
                )));
            }
            let gphi = Decoherence::pure_dephasing(tau1, tau2)?;
            out.push(CollapseOp {
                op: sigma_minus(),
                rate: 1.0 / tau1,
            });
            if gphi > 0.0 {
                out.push(CollapseOp {
                    op: sigma_z(),
                    rate: gphi / 2.0,
                });
            }
        }
        Decoherence::Resonator { tau1 } => {
            if !(tau1 > 0.0) {
                return Err(Error::param("tau1", "must be > 0"));
            }
            out.push(CollapseOp {
                op: mode_operators(dim)?.a,
                rate: 1.0 / tau1,
            });
        }
        Decoherence::Heating { rate } => {
            if !(rate >= 0.0 && rate.is_finite()) {
                return Err(Error::param("heating rate", "must be >= 0"));
            }
            if rate > 0.0 {
                let ops = mode_operators(dim)?;
                out.push(CollapseOp {
                    op: ops.a_dagger,
                    rate,
                });
                out.push(CollapseOp { op: ops.a, rate });
            }
        }
        Decoherence::None => {}
    }
    Ok(out)
}

/// Jump operators for several subsystems, embedded in `space`.
pub fn collapse_set(space: &HilbertSpace, specs: &[(usize, Decoherence)]) -> Result<Vec<CollapseOp>> {
    let mut out = Vec::new();
    for &(index, spec) in specs {
        let dim = *space
            .dims()
            .get(index)
            .ok_or_else(|| Error::InvalidEmbedding(format!("no subsystem {index}")))?;
        for c in build_collapse_set(&spec, dim)? {
            out.push(CollapseOp {
                op: embed(&c.op, space, index)?,
                rate: c.rate,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transmon_dephasing_rate() {
        let g = Decoherence::pure_dephasing(70e-6, 92e-6).unwrap();
        assert!((g - (1.0 / 92e-6 - 1.0 / 140e-6)).abs() < 1e-9);
        assert!((g - 3727.0).abs() < 1.0);
        let set = build_collapse_set(&Decoherence::Qubit { tau1: 70e-6, tau2: 92e-6 }, 2).unwrap();
        assert_eq!(set.len(), 2);
        assert!((set[1].rate - g / 2.0).abs() < 1e-9);
    }

    #[test]
    fn relaxation_limit_has_no_dephasing() {
        assert_eq!(Decoherence::pure_dephasing(1e-6, 2e-6).unwrap(), 0.0);
        let set = build_collapse_set(&Decoherence::Qubit { tau1: 1e-6, tau2: 2e-6 }, 2).unwrap();
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn unphysical_dephasing_rejected() {
        assert!(matches!(
            Decoherence::pure_dephasing(1e-6, 3e-6),
            Err(Error::UnphysicalDephasing { .. })
        ));
    }

    #[test]
    fn heating_is_symmetric_pair() {
        let set = build_collapse_set(&Decoherence::Heating { rate: 8100.0 }, 4).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!((set[0].rate, set[1].rate), (8100.0, 8100.0));
        // first is the raising operator
        assert!((set[0].op.get(1, 0).re - 1.0).abs() < 1e-15);
        assert!((set[1].op.get(0, 1).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn embedded_set_has_full_dimension() {
        let s = HilbertSpace::new(vec![4, 4, 2], vec!["e", "bus", "t"]).unwrap();
        let set = collapse_set(
            &s,
            &[
                (0, Decoherence::Heating { rate: 8100.0 }),
                (1, Decoherence::Resonator { tau1: 45e-6 }),
                (2, Decoherence::Qubit { tau1: 70e-6, tau2: 92e-6 }),
            ],
        )
        .unwrap();
        assert_eq!(set.len(), 5);
        assert!(set.iter().all(|c| c.op.dim() == 32));
        assert!(collapse_set(&s, &[(3, Decoherence::None)]).is_err());
    }
}
