//! Parsers for the textual norm and profile specifications used on the
//! command line.
//!
//! ```text
//! norm    := "Lp:" num | "LZ:" num "," num "," num "," num
//!          | "Lambda:" profile | "mI:" profile | "MI:" profile
//!          | "Z:" norm "@" profile | "WeakL1" | "DownDual:" norm
//! profile := "power(" num ")" | "gauss" | "product(" num ")" | "loglog"
//!          | "tlog(" num ")" | "monomial(" num ")" | "square"
//!          | "john(" num "," num ")" | "mazya(" num "," num ")" | "tab:" path
//! num     := float | "inf"
//! ```
//!
//! Error positions are byte offsets into the input.

use std::path::Path;

use crate::error::ParseError;
use crate::norms::NormFunctional;
use crate::optimal::{sobolev_preset, EmbeddingPreset};
use crate::profiles::{PhiSpec, Profile};

pub fn parse_norm(s: &str) -> Result<NormFunctional, ParseError> {
    let mut p = Parser { s, pos: 0 };
    let n = p.norm()?;
    p.end()?;
    Ok(n)
}

pub fn parse_profile(s: &str) -> Result<Profile, ParseError> {
    let mut p = Parser { s, pos: 0 };
    let v = p.profile()?;
    p.end()?;
    Ok(v)
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: at, message: message.into() })
    }

    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(self.pos, format!("expected '{tok}'"))
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.pos == self.s.len() {
            Ok(())
        } else {
            self.err(self.pos, "unexpected trailing input")
        }
    }

    fn num(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '+' | '/')))
            .unwrap_or(self.rest().len());
        let tok = &self.s[start..start + len];
        if tok.is_empty() {
            return self.err(start, "expected a number");
        }
        let v = match tok {
            "inf" | "+inf" => f64::INFINITY,
            _ => match tok.split_once('/') {
                Some((a, b)) => match (a.parse::<f64>(), b.parse::<f64>()) {
                    (Ok(a), Ok(b)) if b != 0.0 => a / b,
                    _ => return self.err(start, format!("invalid number '{tok}'")),
                },
                None => match tok.parse::<f64>() {
                    Ok(v) if !v.is_nan() => v,
                    _ => return self.err(start, format!("invalid number '{tok}'")),
                },
            },
        };
        self.pos += len;
        Ok(v)
    }

    fn norm(&mut self) -> Result<NormFunctional, ParseError> {
        let start = self.pos;
        if self.eat("Lp:") {
            let at = self.pos;
            let p = self.num()?;
            if !(p >= 1.0) {
                return self.err(at, "p must be at least 1");
            }
            return Ok(NormFunctional::Lp(p));
        }
        if self.eat("LZ:") {
            let mut v = [0.0; 4];
            for (k, slot) in v.iter_mut().enumerate() {
                if k > 0 {
                    self.expect(",")?;
                }
                let at = self.pos;
                *slot = self.num()?;
                if k < 2 && !(*slot > 0.0) {
                    return self.err(at, "exponent must be positive");
                }
                if k >= 2 && !slot.is_finite() {
                    return self.err(at, "log exponent must be finite");
                }
            }
            return Ok(NormFunctional::lz(v[0], v[1], v[2], v[3]));
        }
        if self.eat("Lambda:") {
            return Ok(NormFunctional::LambdaI(self.profile()?));
        }
        if self.eat("mI:") {
            return Ok(NormFunctional::SmallM(self.profile()?));
        }
        if self.eat("MI:") {
            return Ok(NormFunctional::BigM(self.profile()?));
        }
        if self.eat("Z:") {
            let base = self.norm()?;
            self.expect("@")?;
            let i = self.profile()?;
            return Ok(NormFunctional::Z(Box::new(base), i));
        }
        if self.eat("WeakL1") {
            return Ok(NormFunctional::WeakL1);
        }
        if self.eat("DownDual:") {
            return Ok(NormFunctional::DownDual(Box::new(self.norm()?)));
        }
        self.err(start, "unknown norm; expected Lp, LZ, Lambda, mI, MI, Z, WeakL1 or DownDual")
    }

    fn arg(&mut self) -> Result<(f64, usize), ParseError> {
        self.expect("(")?;
        let at = self.pos;
        let v = self.num()?;
        self.expect(")")?;
        Ok((v, at))
    }

    fn args2(&mut self) -> Result<(f64, f64, usize), ParseError> {
        self.expect("(")?;
        let at = self.pos;
        let a = self.num()?;
        self.expect(",")?;
        let b = self.num()?;
        self.expect(")")?;
        Ok((a, b, at))
    }

    fn profile(&mut self) -> Result<Profile, ParseError> {
        let start = self.pos;
        let wrap = |at: usize, r: Result<Profile, String>| r.map_err(|message| ParseError { position: at, message });
        if self.eat("power") {
            let (a, at) = self.arg()?;
            return wrap(at, Profile::power(a).map_err(|e| e.to_string()));
        }
        if self.eat("gauss") {
            return Ok(Profile::gaussian());
        }
        if self.eat("product") {
            let (p, at) = self.arg()?;
            return wrap(at, PhiSpec::power(p).and_then(Profile::product).map_err(|e| e.to_string()));
        }
        if self.eat("loglog") {
            return Ok(Profile::log_ratio());
        }
        if self.eat("tlog") {
            let (a, at) = self.arg()?;
            if !(a > 0.0 && a.is_finite()) {
                return self.err(at, "tlog exponent must be positive");
            }
            return Ok(Profile::t_log(a));
        }
        if self.eat("monomial") {
            let (p, at) = self.arg()?;
            if !(p > 0.0 && p.is_finite()) {
                return self.err(at, "monomial exponent must be positive");
            }
            return Ok(Profile::monomial(p));
        }
        if self.eat("square") {
            return Ok(Profile::monomial(2.0));
        }
        if self.eat("john") {
            let (n, m, at) = self.args2()?;
            if n.fract() != 0.0 || m.fract() != 0.0 {
                return self.err(at, "n and m must be integers");
            }
            let preset = EmbeddingPreset::John { n: n as u32, m: m as u32 };
            return wrap(at, sobolev_preset(&preset).map_err(|e| e.to_string()));
        }
        if self.eat("mazya") {
            let (alpha, m, at) = self.args2()?;
            if m.fract() != 0.0 {
                return self.err(at, "m must be an integer");
            }
            let preset = EmbeddingPreset::Mazya { alpha, m: m as u32 };
            return wrap(at, sobolev_preset(&preset).map_err(|e| e.to_string()));
        }
        if self.eat("tab:") {
            let at = self.pos;
            let len = self.rest().find('@').unwrap_or(self.rest().len());
            let path = &self.s[at..at + len];
            if path.is_empty() {
                return self.err(at, "expected a file path");
            }
            self.pos += len;
            return wrap(at, Profile::tabulated_from_path(Path::new(path)).map_err(|e| e.to_string()));
        }
        self.err(start, "unknown profile; expected power, gauss, product, loglog, tlog, monomial, square, john, mazya or tab")
    }
}
