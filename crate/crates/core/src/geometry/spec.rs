use super::ConvexDomain;
use crate::constructions::{build_farey_domain, FareyDomainParams, DEFAULT_C0};
use crate::error::{LdlError, Result};

/// Parses a domain spec string:
/// `disk:R`, `ellipse:a,b`, `superellipse:a1,a2[,scale]`, `rot:<spec>:angle`,
/// `polar:<spec>`, `farey:R,eps[,r]`.
///
/// `farey:` yields the polar domain of the smoothed Farey polygon, which is
/// the domain the lattice experiments count in.
pub fn parse_domain(spec: &str) -> Result<ConvexDomain> {
    parse_domain_with_c0(spec, DEFAULT_C0)
}

pub fn parse_domain_with_c0(spec: &str, c0: f64) -> Result<ConvexDomain> {
    let spec = spec.trim();
    let (head, rest) = spec
        .split_once(':')
        .ok_or_else(|| parse_err(spec, "expected <kind>:<parameters>"))?;
    match head {
        "disk" => {
            let v = numbers(spec, rest, 1, 1)?;
            ConvexDomain::disk(v[0])
        }
        "ellipse" => {
            let v = numbers(spec, rest, 2, 2)?;
            ConvexDomain::ellipse(v[0], v[1])
        }
        "superellipse" => {
            let v = numbers(spec, rest, 2, 3)?;
            ConvexDomain::superellipse(v[0], v[1], v.get(2).copied().unwrap_or(1.0))
        }
        "rot" => {
            let (inner, angle) = rest
                .rsplit_once(':')
                .ok_or_else(|| parse_err(spec, "expected rot:<spec>:<angle>"))?;
            let angle = number(spec, angle)?;
            ConvexDomain::rotated(parse_domain_with_c0(inner, c0)?, angle)
        }
        "polar" => Ok(ConvexDomain::polar_dual(parse_domain_with_c0(rest, c0)?)),
        "farey" => {
            let v = numbers(spec, rest, 2, 3)?;
            let r = match v.get(2) {
                Some(&r) if r >= 1.0 && r.fract() == 0.0 => Some(r as u32),
                Some(_) => return Err(parse_err(spec, "farey order r must be a positive integer")),
                None => None,
            };
            let params = FareyDomainParams::new(v[0], v[1], r, c0)?;
            Ok(build_farey_domain(&params)?.omega)
        }
        _ => Err(parse_err(spec, "unknown domain kind")),
    }
}

fn parse_err(spec: &str, why: &str) -> LdlError {
    LdlError::Parse(format!("domain spec '{spec}': {why}"))
}

fn number(spec: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| parse_err(spec, &format!("'{s}' is not a number")))
}

fn numbers(spec: &str, s: &str, min: usize, max: usize) -> Result<Vec<f64>> {
    let v = s
        .split(',')
        .map(|p| number(spec, p))
        .collect::<Result<Vec<_>>>()?;
    if v.len() < min || v.len() > max {
        return Err(parse_err(spec, "wrong number of parameters"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainKind;

    #[test]
    fn parses_nested_specs() {
        let d = parse_domain("rot:polar:ellipse:2,1:0.5").unwrap();
        match d.kind() {
            DomainKind::Rotated { inner, angle } => {
                assert_eq!(*angle, 0.5);
                assert!(matches!(inner.kind(), DomainKind::PolarDual { .. }));
            }
            k => panic!("unexpected {k:?}"),
        }
        let s = parse_domain("superellipse:1.5,1.5").unwrap();
        assert!(matches!(s.kind(), DomainKind::Superellipse { scale, .. } if *scale == 1.0));
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "",
            "disk",
            "disk:",
            "disk:x",
            "disk:1,2",
            "cube:1",
            "rot:disk:1",
            "farey:1e4,0.5,1.5",
        ] {
            assert!(parse_domain(bad).is_err(), "{bad}");
        }
        assert!(matches!(
            parse_domain("disk:-1"),
            Err(LdlError::InvalidArgument(_))
        ));
    }
}
