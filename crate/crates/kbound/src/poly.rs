//! Polynomial specifications from the command line: preset names resolved
//! against a graph's spectrum, raw comma-separated coefficients (lowest
//! degree first), or term expressions like `x2+x`, `x3+ax2+bx`, `0.5x2-1`
//! with named parameters supplied separately.

use kbound_core::bounds::{preset_polynomials, Tolerances};
use kbound_core::graph::Graph;
use kbound_core::spectral::Polynomial;
use std::collections::HashMap;

pub const PRESET_NAMES: [&str; 4] = ["xk", "xk+xk-1", "lmin", "cheb"];

#[derive(Debug, Clone, PartialEq)]
pub enum PolySpec {
    /// One of [`PRESET_NAMES`], instantiated per graph and radius.
    Preset(String),
    /// Explicit coefficients, lowest degree first.
    Coeffs(Vec<f64>),
    /// A sum of terms, possibly with named parameters.
    Terms(Vec<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: Coef,
    pub power: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coef {
    Num(f64),
    Param(char),
}

impl PolySpec {
    pub fn parse(spec: &str) -> Result<PolySpec, String> {
        let trimmed = spec.trim();
        if trimmed.is_empty() {
            return Err("empty polynomial spec".into());
        }
        if PRESET_NAMES.contains(&trimmed) {
            return Ok(PolySpec::Preset(trimmed.into()));
        }
        if trimmed.contains(',') {
            let coeffs = trimmed
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| format!("bad coefficient '{}'", t.trim()))
                })
                .collect::<Result<Vec<f64>, String>>()?;
            if coeffs.is_empty() {
                return Err("no coefficients given".into());
            }
            return Ok(PolySpec::Coeffs(coeffs));
        }
        if !trimmed.contains('x') {
            let c = trimmed
                .parse::<f64>()
                .map_err(|_| format!("cannot parse polynomial '{trimmed}'"))?;
            return Ok(PolySpec::Coeffs(vec![c]));
        }
        parse_terms(trimmed).map(PolySpec::Terms)
    }

    /// Instantiates against a graph (presets need its spectrum).
    pub fn resolve(
        &self,
        g: &Graph,
        k: usize,
        tol: &Tolerances,
        params: &HashMap<char, f64>,
    ) -> Result<Polynomial, String> {
        match self {
            PolySpec::Preset(name) => {
                let presets =
                    preset_polynomials(g, k, tol).map_err(|e| format!("preset failed: {e}"))?;
                presets
                    .into_iter()
                    .find(|p| p.name == name)
                    .map(|p| p.poly)
                    .ok_or_else(|| format!("unknown preset '{name}'"))
            }
            PolySpec::Coeffs(coeffs) => Ok(Polynomial::new(coeffs.clone())),
            PolySpec::Terms(terms) => {
                let max_power = terms.iter().map(|t| t.power).max().unwrap_or(0);
                let mut coeffs = vec![0.0; max_power + 1];
                for term in terms {
                    let c = match term.coeff {
                        Coef::Num(v) => v,
                        Coef::Param(name) => *params.get(&name).ok_or_else(|| {
                            format!("parameter '{name}' not supplied (use --param {name}=VALUE)")
                        })?,
                    };
                    coeffs[term.power] += c;
                }
                Ok(Polynomial::new(coeffs))
            }
        }
    }
}

/// Grammar per term: `[number | letter] ['x' [digits]]`, terms joined by
/// `+` or `-`. `x2` means x^2; a bare letter other than `x` is a parameter.
fn parse_terms(s: &str) -> Result<Vec<Term>, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let bytes = compact.as_bytes();
    let mut pos = 0;
    let mut sign = 1.0;
    if bytes.first() == Some(&b'-') {
        sign = -1.0;
        pos = 1;
    } else if bytes.first() == Some(&b'+') {
        pos = 1;
    }
    while pos < bytes.len() {
        let start = pos;
        while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
            pos += 1;
        }
        let term = parse_one_term(&compact[start..pos], sign)?;
        terms.push(term);
        if pos < bytes.len() {
            sign = if bytes[pos] == b'-' { -1.0 } else { 1.0 };
            pos += 1;
            if pos == bytes.len() {
                return Err("dangling sign in polynomial".into());
            }
        }
    }
    if terms.is_empty() {
        return Err("no terms in polynomial".into());
    }
    Ok(terms)
}

fn parse_one_term(term: &str, sign: f64) -> Result<Term, String> {
    let Some(x_pos) = term.find('x') else {
        // Constant term; a lone letter is a parameter.
        if term.len() == 1 && term.chars().next().unwrap().is_ascii_alphabetic() {
            let c = term.chars().next().unwrap();
            if sign < 0.0 {
                return Err(format!(
                    "negated parameter '-{c}' is not supported; fold the sign into its value"
                ));
            }
            return Ok(Term {
                coeff: Coef::Param(c),
                power: 0,
            });
        }
        let v: f64 = term.parse().map_err(|_| format!("bad term '{term}'"))?;
        return Ok(Term {
            coeff: Coef::Num(sign * v),
            power: 0,
        });
    };
    let (head, tail) = (&term[..x_pos], &term[x_pos + 1..]);
    let power = if tail.is_empty() {
        1
    } else {
        tail.parse::<usize>()
            .map_err(|_| format!("bad exponent '{tail}' in term '{term}'"))?
    };
    let coeff = if head.is_empty() {
        Coef::Num(sign)
    } else if head.len() == 1 && head.chars().next().unwrap().is_ascii_alphabetic() {
        let c = head.chars().next().unwrap();
        if sign < 0.0 {
            return Err(format!(
                "negated parameter '-{c}' is not supported; fold the sign into its value"
            ));
        }
        Coef::Param(c)
    } else {
        Coef::Num(
            sign * head
                .parse::<f64>()
                .map_err(|_| format!("bad coefficient '{head}' in term '{term}'"))?,
        )
    };
    Ok(Term { coeff, power })
}

/// Integer polynomial for the finite-field bound: `x`, `x2+x+1`, or
/// comma-separated nonnegative integers lowest degree first.
pub fn parse_field_poly(spec: &str) -> Result<Vec<u64>, String> {
    let trimmed = spec.trim();
    if trimmed.contains(',') {
        return trimmed
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("bad field coefficient '{}'", t.trim()))
            })
            .collect();
    }
    let terms = parse_terms(trimmed)?;
    let max_power = terms.iter().map(|t| t.power).max().unwrap_or(0);
    let mut coeffs = vec![0u64; max_power + 1];
    for term in terms {
        let Coef::Num(v) = term.coeff else {
            return Err("field polynomials cannot use named parameters".into());
        };
        if v < 0.0 || v.fract() != 0.0 {
            return Err(format!(
                "field coefficient {v} must be a nonnegative integer"
            ));
        }
        coeffs[term.power] += v as u64;
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kbound_core::graph::generators;

    fn resolve_simple(spec: &str) -> Polynomial {
        PolySpec::parse(spec)
            .unwrap()
            .resolve(
                &generators::petersen(),
                2,
                &Tolerances::default(),
                &HashMap::new(),
            )
            .unwrap()
    }

    #[test]
    fn expression_forms() {
        assert_eq!(resolve_simple("x").coefficients(), &[0.0, 1.0]);
        assert_eq!(resolve_simple("x2").coefficients(), &[0.0, 0.0, 1.0]);
        assert_eq!(resolve_simple("x2+x").coefficients(), &[0.0, 1.0, 1.0]);
        assert_eq!(resolve_simple("2.5x2-1").coefficients(), &[-1.0, 0.0, 2.5]);
        assert_eq!(resolve_simple("-x2+2").coefficients(), &[2.0, 0.0, -1.0]);
        assert_eq!(resolve_simple("0,1,1").coefficients(), &[0.0, 1.0, 1.0]);
        assert_eq!(resolve_simple("4").coefficients(), &[4.0]);
    }

    #[test]
    fn parameters_bind() {
        let spec = PolySpec::parse("x3+ax2+bx").unwrap();
        let params = HashMap::from([('a', 1.5), ('b', -2.0)]);
        let p = spec
            .resolve(&generators::petersen(), 3, &Tolerances::default(), &params)
            .unwrap();
        assert_eq!(p.coefficients(), &[0.0, -2.0, 1.5, 1.0]);

        let missing = spec.resolve(
            &generators::petersen(),
            3,
            &Tolerances::default(),
            &HashMap::new(),
        );
        assert!(missing.is_err());
    }

    #[test]
    fn presets_resolve_per_graph() {
        let p = resolve_simple("xk");
        assert_eq!(p.coefficients(), &[0.0, 0.0, 1.0]);
        let p = resolve_simple("xk+xk-1");
        assert_eq!(p.coefficients(), &[0.0, 1.0, 1.0]);
        // (x + 2)^2 on the Petersen spectrum.
        let p = resolve_simple("lmin");
        assert!((p.eval(-2.0)).abs() < 1e-9);
        assert!((p.eval(3.0) - 25.0).abs() < 1e-7);
    }

    #[test]
    fn field_polys() {
        assert_eq!(parse_field_poly("x").unwrap(), vec![0, 1]);
        assert_eq!(parse_field_poly("x2+x+1").unwrap(), vec![1, 1, 1]);
        assert_eq!(parse_field_poly("1,0,1").unwrap(), vec![1, 0, 1]);
        assert!(parse_field_poly("x+a").is_err());
        assert!(parse_field_poly("-x").is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(PolySpec::parse("").is_err());
        assert!(PolySpec::parse("x^2").is_err());
        assert!(PolySpec::parse("x2+").is_err());
        assert!(PolySpec::parse("1,two").is_err());
    }
}
