//! Quantities with unit suffixes.
//!
//! A quantity is either a bare number, taken as SI (rad/s for angular
//! frequencies), or a string `"<number> <unit>"`. Frequencies written in Hz
//! for an angular-frequency field are multiplied by 2π.

use std::f64::consts::PI;

use serde::de::{self, Deserializer};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dim {
    /// rad/s; Hz-family units are converted with 2π.
    AngularFrequency,
    /// 1/s, including quanta/s.
    Rate,
    Time,
    Length,
    Volume,
    Voltage,
    Capacitance,
    Resistance,
    MagneticField,
    /// T/sqrt(Hz)
    FieldDensity,
    Current,
    Temperature,
    Angle,
    Dimensionless,
}

const PREFIX: [(&str, i32); 9] = [
    ("G", 9),
    ("M", 6),
    ("k", 3),
    ("m", -3),
    ("u", -6),
    ("µ", -6),
    ("n", -9),
    ("p", -12),
    ("f", -15),
];

/// Unit as `(power of ten, remaining factor, dimension)`.
type Scale = (i32, f64, Dim);

fn base_unit(unit: &str) -> Option<Scale> {
    use Dim::*;
    Some(match unit {
        "Hz" => (0, 2.0 * PI, AngularFrequency),
        "rad/s" => (0, 1.0, AngularFrequency),
        "1/s" | "/s" | "s^-1" | "quanta/s" => (0, 1.0, Rate),
        "s" => (0, 1.0, Time),
        "m" => (0, 1.0, Length),
        "m^3" => (0, 1.0, Volume),
        "cm^3" => (-6, 1.0, Volume),
        "mm^3" => (-9, 1.0, Volume),
        "V" => (0, 1.0, Voltage),
        "F" => (0, 1.0, Capacitance),
        "aF" => (-18, 1.0, Capacitance),
        "ohm" | "Ω" => (0, 1.0, Resistance),
        "T" => (0, 1.0, MagneticField),
        "T/rtHz" | "T/sqrt(Hz)" => (0, 1.0, FieldDensity),
        "A" => (0, 1.0, Current),
        "K" => (0, 1.0, Temperature),
        "rad" => (0, 1.0, Angle),
        "deg" | "°" => (0, PI / 180.0, Angle),
        "cm" => (-2, 1.0, Length),
        "%" => (-2, 1.0, Dimensionless),
        _ => return None,
    })
}

/// Scale and dimension of `unit`, allowing one SI prefix.
pub fn unit_scale(unit: &str) -> Option<Scale> {
    if let Some(u) = base_unit(unit) {
        return Some(u);
    }
    PREFIX.iter().find_map(|(p, e)| {
        let rest = unit.strip_prefix(p)?;
        let (e0, f, dim) = base_unit(rest)?;
        // no prefixes on powers or on units that already carry one
        if rest.contains('^') || e0 != 0 {
            return None;
        }
        Some((e + e0, f, dim))
    })
}

/// Parse `"<number> [unit]"` into SI for a field of dimension `dim`.
pub fn parse_quantity(text: &str, dim: Dim) -> Result<f64, String> {
    let text = text.trim();
    let (num, unit) = match text.split_once(char::is_whitespace) {
        Some((n, u)) => (n, u.trim()),
        None => (text, ""),
    };
    let value: f64 = num.parse().map_err(|_| format!("`{num}` is not a number"))?;
    if unit.is_empty() {
        return Ok(value);
    }
    let (exp, factor, found) = unit_scale(unit).ok_or_else(|| format!("unknown unit `{unit}`"))?;
    if found != dim {
        return Err(format!("unit `{unit}` is a {found:?}, expected {dim:?}"));
    }
    // shift the decimal exponent in text so "7.3 um" is exactly 7.3e-6
    let scaled = if exp == 0 {
        value
    } else if num.contains(['e', 'E']) || !value.is_finite() {
        value * 10f64.powi(exp)
    } else {
        format!("{num}e{exp}").parse().map_err(|_| format!("`{num}` is not a number"))?
    };
    Ok(scaled * factor)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    Num(f64),
    Int(i64),
    Text(String),
}

fn convert<E: de::Error>(raw: Raw, dim: Dim) -> Result<f64, E> {
    match raw {
        Raw::Num(x) => Ok(x),
        Raw::Int(i) => Ok(i as f64),
        Raw::Text(s) => parse_quantity(&s, dim).map_err(E::custom),
    }
}

pub(crate) fn quantity<'de, D: Deserializer<'de>>(d: D, dim: Dim) -> Result<f64, D::Error> {
    convert(Raw::deserialize(d)?, dim)
}

pub(crate) fn quantity_opt<'de, D: Deserializer<'de>>(d: D, dim: Dim) -> Result<Option<f64>, D::Error> {
    Option::<Raw>::deserialize(d)?.map(|r| convert(r, dim)).transpose()
}

pub(crate) fn quantity_vec<'de, D: Deserializer<'de>>(d: D, dim: Dim) -> Result<Vec<f64>, D::Error> {
    Vec::<Raw>::deserialize(d)?.into_iter().map(|r| convert(r, dim)).collect()
}

macro_rules! field_parsers {
    ($($dim:ident => $one:ident, $opt:ident, $many:ident;)*) => {
        $(
            #[allow(dead_code)]
            pub(crate) fn $one<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
                quantity(d, Dim::$dim)
            }
            #[allow(dead_code)]
            pub(crate) fn $opt<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
                quantity_opt(d, Dim::$dim)
            }
            #[allow(dead_code)]
            pub(crate) fn $many<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
                quantity_vec(d, Dim::$dim)
            }
        )*
    };
}

field_parsers! {
    AngularFrequency => freq, freq_opt, freqs;
    Rate => rate, rate_opt, rates;
    Time => time, time_opt, times;
    Length => length, length_opt, lengths;
    Volume => volume, volume_opt, volumes;
    Voltage => voltage, voltage_opt, voltages;
    Capacitance => capacitance, capacitance_opt, capacitances;
    Resistance => resistance, resistance_opt, resistances;
    MagneticField => field, field_opt, fields;
    FieldDensity => density, density_opt, densities;
    Current => current, current_opt, currents;
    Temperature => temperature, temperature_opt, temperatures;
    Angle => angle, angle_opt, angles;
    Dimensionless => number, number_opt, numbers;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_units() {
        assert!((parse_quantity("500 MHz", Dim::AngularFrequency).unwrap() - 2.0 * PI * 5e8).abs() < 1e-3);
        assert_eq!(parse_quantity("7.3 um", Dim::Length).unwrap(), 7.3e-6);
        assert_eq!(parse_quantity("45 µs", Dim::Time).unwrap(), 45e-6);
        assert_eq!(parse_quantity("10 aF", Dim::Capacitance).unwrap(), 1e-17);
        assert_eq!(parse_quantity("1 kΩ", Dim::Resistance).unwrap(), 1e3);
        assert_eq!(parse_quantity("14 pT/rtHz", Dim::FieldDensity).unwrap(), 14e-12);
        assert_eq!(parse_quantity("8100 quanta/s", Dim::Rate).unwrap(), 8100.0);
        assert_eq!(parse_quantity("2.5", Dim::Length).unwrap(), 2.5);
        assert!((parse_quantity("180 deg", Dim::Angle).unwrap() - PI).abs() < 1e-15);
        assert!(parse_quantity("500 MHz", Dim::Length).is_err());
        assert!(parse_quantity("5 furlongs", Dim::Length).is_err());
        assert!(parse_quantity("five m", Dim::Length).is_err());
    }
}
