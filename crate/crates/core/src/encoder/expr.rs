//! Symbolic attaching expressions.
//!
//! ```text
//! expr := "0" | id | "whitehead(" id ("," id)* ")" | "deg(" int "," expr ")"
//!       | "sum(" term ("," term)* ")"
//! term := [int "*"] expr
//! ```
//!
//! Identifiers use letters, digits and `_ ' . :`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Zero,
    /// The fundamental class of a sphere cell.
    Cell(String),
    Whitehead(Vec<String>),
    /// Precomposition with a degree-`k` self-map of the source sphere.
    Deg(BigInt, Box<Expr>),
    Sum(Vec<(BigInt, Expr)>),
}

impl Expr {
    pub fn cell(id: impl Into<String>) -> Self {
        Expr::Cell(id.into())
    }

    /// `deg(k, e)`, dropped when `k = 1`.
    pub fn deg(k: BigInt, e: Expr) -> Self {
        if k.is_one() {
            e
        } else {
            Expr::Deg(k, Box::new(e))
        }
    }

    /// Every identifier mentioned.
    pub fn ids(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_ids(&mut out);
        out
    }

    fn collect_ids<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Zero => {}
            Expr::Cell(id) => out.push(id),
            Expr::Whitehead(ids) => out.extend(ids.iter().map(String::as_str)),
            Expr::Deg(_, e) => e.collect_ids(out),
            Expr::Sum(terms) => terms.iter().for_each(|(_, e)| e.collect_ids(out)),
        }
    }

    /// Hurewicz image as an integer combination of cells. Whitehead
    /// products of two or more classes map to zero.
    pub fn hurewicz(&self) -> BTreeMap<String, BigInt> {
        let mut acc = BTreeMap::new();
        self.add_hurewicz(&BigInt::one(), &mut acc);
        acc.retain(|_, c: &mut BigInt| !c.is_zero());
        acc
    }

    fn add_hurewicz(&self, k: &BigInt, acc: &mut BTreeMap<String, BigInt>) {
        match self {
            Expr::Zero => {}
            Expr::Cell(id) => *acc.entry(id.clone()).or_insert_with(BigInt::zero) += k,
            Expr::Whitehead(ids) if ids.len() == 1 => {
                *acc.entry(ids[0].clone()).or_insert_with(BigInt::zero) += k
            }
            Expr::Whitehead(_) => {}
            Expr::Deg(m, e) => e.add_hurewicz(&(k * m), acc),
            Expr::Sum(terms) => terms.iter().for_each(|(c, e)| e.add_hurewicz(&(k * c), acc)),
        }
    }

    /// Dimension of the source sphere, given cell dimensions; `None` for
    /// `0`, which fits any degree.
    pub fn degree(&self, dim: &dyn Fn(&str) -> Option<u32>) -> Result<Option<u32>> {
        let lookup = |id: &str| dim(id).ok_or_else(|| Error::MalformedAttaching(format!("unknown cell `{id}`")));
        match self {
            Expr::Zero => Ok(None),
            Expr::Cell(id) => lookup(id).map(Some),
            Expr::Whitehead(ids) => {
                if ids.is_empty() {
                    return Err(Error::MalformedAttaching("empty Whitehead product".into()));
                }
                let total = ids.iter().map(|i| lookup(i)).sum::<Result<u32>>()?;
                total
                    .checked_sub(1)
                    .map(Some)
                    .ok_or_else(|| Error::MalformedAttaching(format!("`{self}` has no source sphere")))
            }
            Expr::Deg(_, e) => e.degree(dim),
            Expr::Sum(terms) => {
                let mut seen = None;
                for (_, e) in terms {
                    match (seen, e.degree(dim)?) {
                        (_, None) => {}
                        (None, Some(k)) => seen = Some(k),
                        (Some(a), Some(b)) if a != b => {
                            return Err(Error::MalformedAttaching(format!(
                                "sum mixes degrees {a} and {b} in `{self}`"
                            )))
                        }
                        _ => {}
                    }
                }
                Ok(seen)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Zero => f.write_str("0"),
            Expr::Cell(id) => f.write_str(id),
            Expr::Whitehead(ids) => write!(f, "whitehead({})", ids.join(",")),
            Expr::Deg(k, e) => write!(f, "deg({k},{e})"),
            Expr::Sum(terms) => {
                f.write_str("sum(")?;
                for (i, (c, e)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}*{e}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '.' | ':')
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c| !is_id_char(c)).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected an identifier"));
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let sign = usize::from(rest.starts_with(['-', '+']));
        let len = sign + rest[sign..].find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len() - sign);
        let n = rest[..len].parse().map_err(|_| self.err("expected an integer"))?;
        self.pos += len;
        Ok(n)
    }

    fn starts_int(&mut self) -> bool {
        let Some(c) = self.peek() else { return false };
        if c == '-' || c == '+' {
            return true;
        }
        if !c.is_ascii_digit() {
            return false;
        }
        // a leading digit is a coefficient only if digits run into `*`
        let rest = &self.src[self.pos..];
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        rest[end..].trim_start().starts_with('*')
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect('(')?;
        let mut out = vec![item(self)?];
        while self.peek() == Some(',') {
            self.pos += 1;
            out.push(item(self)?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr> {
        let word = self.ident()?;
        match word.as_str() {
            "0" => Ok(Expr::Zero),
            "whitehead" if self.peek() == Some('(') => Ok(Expr::Whitehead(self.list(Self::ident)?)),
            "deg" if self.peek() == Some('(') => {
                self.expect('(')?;
                let k = self.int()?;
                self.expect(',')?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Deg(k, Box::new(e)))
            }
            "sum" if self.peek() == Some('(') => Ok(Expr::Sum(self.list(Self::term)?)),
            _ => Ok(Expr::Cell(word)),
        }
    }

    fn term(&mut self) -> Result<(BigInt, Expr)> {
        if self.starts_int() {
            let c = self.int()?;
            self.expect('*')?;
            Ok((c, self.expr()?))
        } else {
            Ok((BigInt::one(), self.expr()?))
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let src = "sum(1*s3_1,-2*whitehead(a1,b1),deg(3,a2'))";
        let e: Expr = src.parse().unwrap();
        assert_eq!(e.to_string(), "sum(1*s3_1,-2*whitehead(a1,b1),1*deg(3,a2'))");
        assert_eq!(e.to_string().parse::<Expr>().unwrap(), e);
        assert_eq!("0".parse::<Expr>().unwrap(), Expr::Zero);
        assert_eq!(" sum( x , 2 * y ) ".parse::<Expr>().unwrap().to_string(), "sum(1*x,2*y)");
    }

    #[test]
    fn bad_input() {
        for src in ["", "sum()", "whitehead(a,)", "deg(x,a)", "a b", "sum(2*)"] {
            assert!(src.parse::<Expr>().is_err(), "{src}");
        }
    }

    #[test]
    fn hurewicz_ignores_products() {
        let e: Expr = "sum(2*deg(3,x),-1*whitehead(x,y),-6*x,y)".parse().unwrap();
        let h = e.hurewicz();
        assert_eq!(h.len(), 1);
        assert_eq!(h["y"], BigInt::from(1));
    }

    #[test]
    fn degrees() {
        let dims = |id: &str| match id {
            "x" | "y" => Some(2),
            "z" => Some(3),
            _ => None,
        };
        let deg = |s: &str| s.parse::<Expr>().unwrap().degree(&dims);
        assert_eq!(deg("whitehead(x,y)").unwrap(), Some(3));
        assert_eq!(deg("whitehead(x,y,z)").unwrap(), Some(6));
        assert_eq!(deg("sum(z,-1*whitehead(x,y))").unwrap(), Some(3));
        assert_eq!(deg("0").unwrap(), None);
        assert!(deg("sum(x,z)").is_err());
        assert!(deg("w").is_err());
    }
}
