use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Effective impedance of an `n lambda / 4` CPW section, `4 Z_cpw / (n pi)`.
pub fn effective_impedance(z_cpw: f64, n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::param("n", "mode index must be >= 1"));
    }
    if !(z_cpw > 0.0) {
        return Err(Error::param("Z_cpw", "must be > 0"));
    }
    Ok(4.0 * z_cpw / (n as f64 * PI))
}

/// CPW characteristic impedance that yields effective impedance `z`.
pub fn required_cpw_impedance(z: f64, n: u32) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::param("Z", "must be > 0"));
    }
    Ok(z / effective_impedance(1.0, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impedance_examples() {
        assert!((effective_impedance(50.0, 1).unwrap() - 63.662).abs() < 1e-3);
        let z1 = effective_impedance(80.0, 1).unwrap();
        assert!((effective_impedance(80.0, 2).unwrap() - z1 / 2.0).abs() < 1e-12);
        assert!((required_cpw_impedance(1000.0, 1).unwrap() - 785.4).abs() < 0.1);
        assert!(effective_impedance(50.0, 0).is_err());
    }
}
