//! Exact-input numeric strings: decimals, rationals and square roots, parsed
//! straight into interval enclosures so that values such as `3/10` or
//! `sqrt(6)` never pass through an unchecked binary rounding.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := factor (('*'|'/') factor)*`,
//! `factor := '-' factor | number | 'sqrt(' expr ')' | '(' expr ')'`.

use crate::interval::Interval;

pub fn parse_interval(s: &str) -> Result<Interval, String> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(format!("unexpected input at byte {} of {:?}", p.pos, s));
    }
    Ok(v)
}

/// Enclosure of a decimal literal such as `-1.25e-3`.
pub fn decimal_interval(lit: &str) -> Result<Interval, String> {
    let (mant, exp) = match lit.find(['e', 'E']) {
        Some(i) => (
            &lit[..i],
            lit[i + 1..]
                .parse::<i32>()
                .map_err(|e| format!("bad exponent in {lit:?}: {e}"))?,
        ),
        None => (lit, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let digits: String = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not a decimal literal: {lit:?}"));
    }
    let digits = digits.trim_start_matches('0');
    let exp10 = exp - frac_part.len() as i32;
    if digits.is_empty() {
        return Ok(Interval::ZERO);
    }
    if digits.len() <= 15 && exp10.abs() <= 22 {
        let d = Interval::from_int(digits.parse::<i64>().map_err(|e| e.to_string())?);
        let scale = Interval::point(10f64.powi(exp10.abs()));
        return Ok(if exp10 >= 0 { d * scale } else { d / scale });
    }
    let x: f64 = lit
        .parse()
        .map_err(|e| format!("bad number {lit:?}: {e}"))?;
    Ok(Interval::new(x.next_down(), x.next_up()))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Interval, String> {
        let mut v = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    v = v + self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    v = v - self.term()?;
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<Interval, String> {
        let mut v = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    v = v * self.factor()?;
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.factor()?;
                    v = v.try_div(d).map_err(|e| e.to_string())?;
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn factor(&mut self) -> Result<Interval, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let b = self.src[self.pos];
                    let exp_sign = (b == b'-' || b == b'+')
                        && self.pos > start
                        && matches!(self.src[self.pos - 1], b'e' | b'E');
                    if b.is_ascii_digit() || b == b'.' || b == b'e' || b == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let lit = std::str::from_utf8(&self.src[start..self.pos]).map_err(|e| e.to_string())?;
                decimal_interval(lit)
            }
            Some(b's') if self.src[self.pos..].starts_with(b"sqrt(") => {
                self.pos += 5;
                let v = self.expr()?;
                self.expect(b')')?;
                v.sqrt().map_err(|e| e.to_string())
            }
            other => Err(format!(
                "unexpected {:?} at byte {}",
                other.map(|c| c as char),
                self.pos
            )),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), String> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected '{}' at byte {}", c as char, self.pos))
        }
    }
}
