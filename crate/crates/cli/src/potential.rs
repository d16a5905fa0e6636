use anyhow::{anyhow, bail, Context, Result};
use combwalks::{ApproxComplex, ExactRational, Potential};

pub enum ParsedPotential {
    Exact(Potential<ExactRational>),
    Approx(Potential<ApproxComplex>),
}

impl ParsedPotential {
    pub fn to_approx(&self) -> Potential<ApproxComplex> {
        match self {
            ParsedPotential::Exact(p) => p.map(|x| ApproxComplex::new(x.to_f64(), 0.0)),
            ParsedPotential::Approx(p) => p.clone(),
        }
    }
}

/// Parses `STEP=VALUE` pairs. All-rational input stays exact.
pub fn parse_values(raw: &[String]) -> Result<ParsedPotential> {
    let mut pairs = Vec::with_capacity(raw.len());
    for item in raw {
        let (step, value) = item.split_once('=').ok_or_else(|| anyhow!("expected STEP=VALUE, got {item:?}"))?;
        let step: i64 = step.trim().parse().with_context(|| format!("bad step in {item:?}"))?;
        pairs.push((step, value.trim().to_string()));
    }
    let exact: Option<Vec<(i64, ExactRational)>> =
        pairs.iter().map(|(s, v)| v.parse::<ExactRational>().ok().map(|x| (*s, x))).collect();
    if let Some(exact) = exact {
        return Ok(ParsedPotential::Exact(Potential::new(exact)?));
    }
    let approx = pairs
        .iter()
        .map(|(s, v)| match v.parse::<ExactRational>() {
            Ok(x) => Ok((*s, ApproxComplex::new(x.to_f64(), 0.0))),
            Err(_) => parse_complex(v).map(|z| (*s, z)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParsedPotential::Approx(Potential::new(approx)?))
}

/// `a`, `bi`, `a+bi`, `a-bi`, with exponents allowed in either part.
pub fn parse_complex(s: &str) -> Result<ApproxComplex> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(ApproxComplex::new(parse_float(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_float(&body[..i])?, imag_part(&body[i..])?),
        None => (0.0, imag_part(body)?),
    };
    Ok(ApproxComplex::new(re, im))
}

fn imag_part(s: &str) -> Result<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_float(s),
    }
}

fn parse_float(s: &str) -> Result<f64> {
    let x: f64 = s.parse().with_context(|| format!("bad number {s:?}"))?;
    if !x.is_finite() {
        bail!("non-finite value {s:?}");
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.5+1.5i").unwrap(), ApproxComplex::new(0.5, 1.5));
        assert_eq!(parse_complex("-2-i").unwrap(), ApproxComplex::new(-2.0, -1.0));
        assert_eq!(parse_complex("3i").unwrap(), ApproxComplex::new(0.0, 3.0));
        assert_eq!(parse_complex("1e-3-2e+2i").unwrap(), ApproxComplex::new(1e-3, -200.0));
        assert_eq!(parse_complex("7").unwrap(), ApproxComplex::new(7.0, 0.0));
        assert!(parse_complex("x+yi").is_err());
    }

    #[test]
    fn rational_values_stay_exact() {
        let raw = vec!["2=1/3".to_string(), "-4=-0.25".to_string()];
        match parse_values(&raw).unwrap() {
            ParsedPotential::Exact(p) => assert_eq!(p.get(-4), "-1/4".parse().unwrap()),
            ParsedPotential::Approx(_) => panic!("expected exact"),
        }
        let raw = vec!["2=1/3".to_string(), "4=1+1i".to_string()];
        match parse_values(&raw).unwrap() {
            ParsedPotential::Approx(p) => assert_eq!(p.get(2), ApproxComplex::new(1.0 / 3.0, 0.0)),
            ParsedPotential::Exact(_) => panic!("expected float"),
        }
        let raw = vec!["2=0.5".to_string(), "4=1+1i".to_string()];
        assert!(matches!(parse_values(&raw).unwrap(), ParsedPotential::Approx(_)));
        assert!(parse_values(&["0=1".to_string()]).is_err());
        assert!(parse_values(&["2".to_string()]).is_err());
    }
}
