//! Plot-ready CSV dumps of pointwise quantities over the disk grid.

use std::fmt::Write as _;
use std::str::FromStr;

use harmlab_core::claims::Scenario;
use harmlab_core::harmonic2d::Jet;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// `J = |f'|^2 - |g'|^2`.
    J,
    /// Maximal stretch `|f'| + |g'|`.
    Lambda,
    /// Minimal stretch `||f'| - |g'||`.
    LambdaMin,
    /// `|f'|^2 + |g'|^2`.
    D,
    LnJ,
}

impl Field {
    pub const ALL: [Field; 5] = [Field::J, Field::Lambda, Field::LambdaMin, Field::D, Field::LnJ];

    pub fn parse(s: &str) -> Result<Self, CliError> {
        s.parse()
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Field::J => "J",
            Field::Lambda => "Lambda",
            Field::LambdaMin => "lambda",
            Field::D => "D",
            Field::LnJ => "lnJ",
        }
    }

    pub fn value(&self, jet: &Jet) -> f64 {
        match self {
            Field::J => jet.jacobian(),
            Field::Lambda => jet.stretches().0,
            Field::LambdaMin => jet.stretches().1,
            Field::D => jet.energy(),
            // ln of a nonpositive Jacobian is reported as NaN, not clamped
            Field::LnJ => {
                let j = jet.jacobian();
                if j > 0.0 {
                    j.ln()
                } else {
                    f64::NAN
                }
            }
        }
    }
}

impl FromStr for Field {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Field::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| CliError::UnknownField(s.into()))
    }
}

/// CSV with a `#` header carrying the scenario digest, then `r,theta,x,y,value` rows.
pub fn dump(s: &Scenario, field: Field, scenario_sha256: &str) -> String {
    let mut out = String::new();
    let g = &s.grid;
    let _ = writeln!(
        out,
        "# scenario_sha256={scenario_sha256} scenario={} field={} grid={}x{} max_radius={}",
        s.name,
        field.as_str(),
        g.radial,
        g.angular,
        g.max_radius
    );
    out.push_str("r,theta,x,y,value\n");
    for p in g.points() {
        let v = field.value(&s.map().jet_unchecked(p.z));
        let _ = writeln!(out, "{},{},{},{},{}", p.r, p.theta, p.z.re, p.z.im, v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use harmlab_core::DiskGrid;

    #[test]
    fn identity_jacobian_is_one() {
        let s = Scenario::identity(DiskGrid::new(4, 8, 0.9).unwrap());
        let csv = dump(&s, Field::J, "abc");
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("# scenario_sha256=abc"));
        assert_eq!(lines.next(), Some("r,theta,x,y,value"));
        let rows: Vec<_> = lines.collect();
        assert_eq!(rows.len(), 1 + 4 * 8);
        assert!(rows.iter().all(|r| r.ends_with(",1")));
    }

    #[test]
    fn field_names_round_trip() {
        for f in Field::ALL {
            assert_eq!(Field::parse(f.as_str()).unwrap(), f);
        }
        assert!(matches!(Field::parse("K"), Err(CliError::UnknownField(_))));
    }
}
