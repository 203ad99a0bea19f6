//! Precision-tracked Laurent series in T⁻¹ over F_q.
//!
//! A [`Laurent`] stores the coefficients it knows, from its leading exponent
//! downward, together with an optional precision bound `prec`: every term of
//! exponent `< prec` is unknown. Elements without a precision bound are exact
//! (finite sums). Arithmetic never invents digits: a result whose leading
//! term falls inside the unknown region is an *uncertified* value which
//! carries only the bound `|x| < q^prec`, and asking for its absolute value
//! is a precision error.

use std::fmt;

use super::exponent::AbsExponent;
use super::fq::{Fq, FqElem};
use super::poly::Poly;
use crate::error::{precision, LabError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Laurent {
    /// Exponent of `coeffs[0]`; meaningless when `coeffs` is empty.
    lead: i64,
    /// Coefficients of T^lead, T^(lead-1), ... ; `coeffs[0]` is nonzero.
    coeffs: Vec<FqElem>,
    /// Terms of exponent below this are unknown; `None` means exact.
    prec: Option<i64>,
}

impl Laurent {
    /// Normalizing constructor: `desc[k]` is the coefficient of T^(top-k).
    pub fn from_desc(top: i64, desc: Vec<FqElem>, prec: Option<i64>) -> Laurent {
        let mut start = 0;
        while start < desc.len() && desc[start].is_zero() {
            start += 1;
        }
        let lead = top - start as i64;
        let mut coeffs: Vec<FqElem> = desc[start..].to_vec();
        match prec {
            None => {
                while coeffs.last().is_some_and(|c| c.is_zero()) {
                    coeffs.pop();
                }
            }
            Some(p) => {
                if coeffs.is_empty() || lead < p {
                    coeffs.clear();
                } else {
                    coeffs.resize((lead - p + 1) as usize, FqElem::ZERO);
                }
            }
        }
        if coeffs.is_empty() {
            return Laurent { lead: 0, coeffs, prec };
        }
        Laurent { lead, coeffs, prec }
    }

    pub fn zero() -> Laurent {
        Laurent { lead: 0, coeffs: vec![], prec: None }
    }

    pub fn one() -> Laurent {
        Laurent::monomial(FqElem::ONE, 0)
    }

    /// An unknown quantity with |x| < q^prec.
    pub fn big_o(prec: i64) -> Laurent {
        Laurent { lead: 0, coeffs: vec![], prec: Some(prec) }
    }

    pub fn monomial(c: FqElem, k: i64) -> Laurent {
        Laurent::from_desc(k, vec![c], None)
    }

    /// T^k.
    pub fn t_pow(k: i64) -> Laurent {
        Laurent::monomial(FqElem::ONE, k)
    }

    pub fn constant(c: FqElem) -> Laurent {
        Laurent::monomial(c, 0)
    }

    pub fn from_poly(p: &Poly) -> Laurent {
        match p.degree() {
            None => Laurent::zero(),
            Some(d) => Laurent::from_desc(d as i64, p.coeffs().iter().rev().copied().collect(), None),
        }
    }

    /// Exact finite sum Σ c_k T^k from (exponent, coefficient) pairs.
    pub fn from_terms(fq: &Fq, terms: &[(i64, FqElem)]) -> Laurent {
        terms.iter().fold(Laurent::zero(), |acc, &(k, c)| acc.add(&Laurent::monomial(c, k), fq))
    }

    /// The series P/Q expanded to precision `prec`.
    pub fn from_rational(p: &Poly, q: &Poly, prec: i64, fq: &Fq) -> Result<Laurent> {
        let qi = Laurent::from_poly(q).inverse(prec - p.degree().unwrap_or(0) as i64, fq)?;
        Ok(Laurent::from_poly(p).mul(&qi, fq).with_precision(prec))
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Exactly zero (not merely unknown).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    /// True when the leading term is known.
    pub fn is_certified(&self) -> bool {
        !self.coeffs.is_empty() || self.prec.is_none()
    }

    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    /// Degree of the leading term; `Ok(None)` for exact zero.
    pub fn degree(&self) -> Result<Option<i64>> {
        if !self.coeffs.is_empty() {
            Ok(Some(self.lead))
        } else if self.prec.is_none() {
            Ok(None)
        } else {
            precision(format!("leading term of {self} is not certified"))
        }
    }

    /// |x| = q^{deg x}.
    pub fn abs(&self) -> Result<AbsExponent> {
        Ok(match self.degree()? {
            None => AbsExponent::Zero,
            Some(d) => AbsExponent::from_int(d),
        })
    }

    pub fn leading_coeff(&self) -> FqElem {
        self.coeffs.first().copied().unwrap_or(FqElem::ZERO)
    }

    /// Upper bound for the degree: `None` only for exact zero.
    fn top_bound(&self) -> Option<i64> {
        if !self.coeffs.is_empty() {
            Some(self.lead)
        } else {
            self.prec.map(|p| p - 1)
        }
    }

    fn lowest_stored(&self) -> i64 {
        self.lead - self.coeffs.len() as i64 + 1
    }

    /// Coefficient of T^e; `None` when that coefficient is unknown.
    pub fn coeff(&self, e: i64) -> Option<FqElem> {
        if let Some(p) = self.prec {
            if e < p {
                return None;
            }
        }
        if self.coeffs.is_empty() || e > self.lead || e < self.lowest_stored() {
            return Some(FqElem::ZERO);
        }
        Some(self.coeffs[(self.lead - e) as usize])
    }

    /// Known nonzero terms as (exponent, coefficient), descending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FqElem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, &c)| (self.lead - k as i64, c))
    }

    /// Forgets every term of exponent below `p` (no-op if already coarser).
    pub fn with_precision(&self, p: i64) -> Laurent {
        let prec = Some(self.prec.map_or(p, |old| old.max(p)));
        if self.coeffs.is_empty() {
            return Laurent::from_desc(0, vec![], prec);
        }
        Laurent::from_desc(self.lead, self.coeffs.clone(), prec)
    }

    pub fn add(&self, other: &Laurent, fq: &Fq) -> Laurent {
        self.combine(other, fq, false)
    }

    pub fn sub(&self, other: &Laurent, fq: &Fq) -> Laurent {
        self.combine(other, fq, true)
    }

    fn combine(&self, other: &Laurent, fq: &Fq, negate: bool) -> Laurent {
        let prec = match (self.prec, other.prec) {
            (None, p) | (p, None) => p,
            (Some(a), Some(b)) => Some(a.max(b)),
        };
        let top = match (self.top_bound(), other.top_bound()) {
            (None, None) => return Laurent { lead: 0, coeffs: vec![], prec },
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.max(b),
        };
        let bottom = match prec {
            Some(p) => p,
            None => {
                let mut b = top;
                if !self.coeffs.is_empty() {
                    b = b.min(self.lowest_stored());
                }
                if !other.coeffs.is_empty() {
                    b = b.min(other.lowest_stored());
                }
                b
            }
        };
        if bottom > top {
            return Laurent::from_desc(0, vec![], prec);
        }
        let desc: Vec<FqElem> = (bottom..=top)
            .rev()
            .map(|e| {
                let a = self.coeff(e).unwrap_or(FqElem::ZERO);
                let b = other.coeff(e).unwrap_or(FqElem::ZERO);
                if negate {
                    fq.sub(a, b)
                } else {
                    fq.add(a, b)
                }
            })
            .collect();
        Laurent::from_desc(top, desc, prec)
    }

    pub fn neg(&self, fq: &Fq) -> Laurent {
        Laurent { lead: self.lead, coeffs: self.coeffs.iter().map(|&c| fq.neg(c)).collect(), prec: self.prec }
    }

    pub fn scale(&self, c: FqElem, fq: &Fq) -> Laurent {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent { lead: self.lead, coeffs: self.coeffs.iter().map(|&x| fq.mul(x, c)).collect(), prec: self.prec }
    }

    /// Multiplication by T^k.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent { lead: self.lead + k, coeffs: self.coeffs.clone(), prec: self.prec.map(|p| p + k) }
    }

    pub fn mul(&self, other: &Laurent, fq: &Fq) -> Laurent {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero();
        }
        let (ta, tb) = (self.top_bound().unwrap(), other.top_bound().unwrap());
        // unknown part of each factor times the other factor's largest term
        let prec = match (self.prec, other.prec) {
            (None, None) => None,
            (Some(pa), None) => Some(pa + tb),
            (None, Some(pb)) => Some(pb + ta),
            (Some(pa), Some(pb)) => Some((pa + tb).max(pb + ta)),
        };
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Laurent::from_desc(0, vec![], prec);
        }
        let top = self.lead + other.lead;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = prec {
            if top < p {
                return Laurent::from_desc(0, vec![], prec);
            }
            len = len.min((top - p + 1) as usize);
        }
        let mut out = vec![FqElem::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = fq.add(out[i + j], fq.mul(a, b));
            }
        }
        Laurent::from_desc(top, out, prec)
    }

    /// 1/x as a geometric series, known down to exponent `prec_req` or as far
    /// as the relative precision of `x` allows, whichever is coarser.
    pub fn inverse(&self, prec_req: i64, fq: &Fq) -> Result<Laurent> {
        if self.is_zero() {
            return Err(LabError::Domain("inverse of zero".into()));
        }
        let lead = self.degree()?.expect("nonzero");
        let c_inv = fq.inv(self.leading_coeff())?;
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Laurent::monomial(c_inv, -lead));
        }
        let mut prec = prec_req;
        if self.prec.is_some() {
            // relative precision of x carries over to 1/x
            let rel = self.coeffs.len() as i64;
            prec = prec.max(-lead - rel + 1);
        }
        let top = -lead;
        if prec > top {
            return Ok(Laurent::from_desc(0, vec![], Some(prec)));
        }
        let len = (top - prec + 1) as usize;
        let mut z = vec![FqElem::ZERO; len];
        z[0] = c_inv;
        for k in 1..len {
            let mut acc = FqElem::ZERO;
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc = fq.add(acc, fq.mul(self.coeffs[i], z[k - i]));
            }
            z[k] = fq.neg(fq.mul(acc, c_inv));
        }
        Ok(Laurent::from_desc(top, z, Some(prec)))
    }

    /// x/y to precision `prec_req`.
    pub fn div(&self, other: &Laurent, prec_req: i64, fq: &Fq) -> Result<Laurent> {
        let top_self = self.top_bound().unwrap_or(0);
        let inv = other.inverse(prec_req - top_self, fq)?;
        Ok(self.mul(&inv, fq))
    }

    /// |x| < q^k, decided or reported as a precision failure.
    pub fn abs_lt_pow(&self, k: i64) -> Result<bool> {
        if !self.coeffs.is_empty() {
            return Ok(self.lead < k);
        }
        match self.prec {
            None => Ok(true),
            Some(p) if p <= k => Ok(true),
            Some(p) => precision(format!("cannot decide |O(T^{p})| < q^{k}")),
        }
    }

    /// Terms of exponent < 0: the distance from x to the nearest element of Λ.
    pub fn frac_part(&self) -> Laurent {
        let prec = self.prec.map(|p| p.min(0));
        if self.coeffs.is_empty() {
            return Laurent::from_desc(0, vec![], prec);
        }
        if self.lead < 0 {
            return Laurent::from_desc(self.lead, self.coeffs.clone(), prec);
        }
        let skip = (self.lead + 1) as usize;
        if skip >= self.coeffs.len() {
            return Laurent::from_desc(0, vec![], prec);
        }
        Laurent::from_desc(-1, self.coeffs[skip..].to_vec(), prec)
    }

    /// Terms of exponent ≥ 0, as an element of Λ.
    pub fn poly_part(&self) -> Result<Poly> {
        if let Some(p) = self.prec {
            if p > 0 {
                return precision(format!("polynomial part of {self} is not fully known"));
            }
        }
        let mut v = vec![FqElem::ZERO; (self.lead.max(-1) + 1) as usize];
        for (e, c) in self.terms() {
            if e >= 0 {
                v[e as usize] = c;
            }
        }
        Ok(Poly::from_coeffs(v))
    }

    /// Exact element made of the terms with exponent ≥ `e`.
    pub fn truncate_below(&self, e: i64) -> Result<Laurent> {
        if let Some(p) = self.prec {
            if p > e {
                return precision(format!("terms of {self} down to T^{e} are not known"));
            }
        }
        if self.coeffs.is_empty() || self.lead < e {
            return Ok(Laurent::zero());
        }
        let keep = (self.lead - e + 1) as usize;
        Ok(Laurent::from_desc(self.lead, self.coeffs[..keep.min(self.coeffs.len())].to_vec(), None))
    }

    /// Human-readable form such as `T^3 + T + 1 + O(T^-5)`, where `O(T^k)`
    /// stands for unknown terms of exponent ≤ k.
    pub fn display(&self, fq: &Fq) -> String {
        let mut parts: Vec<String> = self.terms().map(|(e, c)| fmt_term(fq, c, e)).collect();
        if let Some(p) = self.prec {
            parts.push(format!("O({})", fmt_power(p - 1)));
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" + ")
    }

    /// Parses the output of [`Laurent::display`].
    pub fn parse(s: &str, fq: &Fq) -> Result<Laurent> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(LabError::Parse("empty Laurent series".into()));
        }
        let mut acc = Laurent::zero();
        let mut prec = None;
        for raw in split_terms(&cleaned) {
            let (neg, term) = match raw.strip_prefix('-') {
                Some(t) => (true, t),
                None => (false, raw.as_str()),
            };
            if let Some(inner) = term.strip_prefix("O(").and_then(|t| t.strip_suffix(')')) {
                let p = parse_power(inner)? + 1;
                prec = Some(prec.map_or(p, |old: i64| old.max(p)));
                continue;
            }
            let (coef, power) = match term.split_once('*') {
                Some((c, pw)) => (parse_coeff(c, fq)?, parse_power(pw)?),
                None if term.contains('T') => (FqElem::ONE, parse_power(term)?),
                None => (parse_coeff(term, fq)?, 0),
            };
            let coef = if neg { fq.neg(coef) } else { coef };
            acc = acc.add(&Laurent::monomial(coef, power), fq);
        }
        Ok(match prec {
            Some(p) => acc.with_precision(p),
            None => acc,
        })
    }
}

fn split_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        let splits_here = depth == 0 && (ch == '+' || (ch == '-' && !cur.is_empty() && prev != Some('^')));
        if splits_here {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if ch == '-' {
                cur.push('-');
            }
        } else {
            cur.push(ch);
        }
        prev = Some(ch);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_power(s: &str) -> Result<i64> {
    let err = || LabError::Parse(format!("bad power of T: {s:?}"));
    let rest = s.strip_prefix('T').ok_or_else(err)?;
    if rest.is_empty() {
        return Ok(1);
    }
    let e = rest.strip_prefix('^').ok_or_else(err)?;
    let e = e.trim_start_matches('{').trim_end_matches('}');
    e.parse().map_err(|_| err())
}

fn parse_coeff(s: &str, fq: &Fq) -> Result<FqElem> {
    let err = || LabError::Parse(format!("bad F_q coefficient: {s:?}"));
    if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let v: std::result::Result<Vec<u32>, _> = inner.split(',').map(|x| x.trim().parse::<u32>()).collect();
        return fq.from_coeffs(&v.map_err(|_| err())?);
    }
    let n: i64 = s.parse().map_err(|_| err())?;
    if fq.degree() == 1 {
        Ok(fq.from_int(n))
    } else if n >= 0 {
        fq.element(n as u32)
    } else {
        Err(err())
    }
}

fn fmt_power(e: i64) -> String {
    match e {
        1 => "T".into(),
        _ => format!("T^{e}"),
    }
}

fn fmt_coeff(fq: &Fq, c: FqElem) -> String {
    if fq.degree() == 1 {
        format!("{}", c.0)
    } else {
        let v: Vec<String> = fq.coeffs(c).iter().map(|x| x.to_string()).collect();
        format!("[{}]", v.join(","))
    }
}

fn fmt_term(fq: &Fq, c: FqElem, e: i64) -> String {
    if e == 0 {
        return fmt_coeff(fq, c);
    }
    if c == FqElem::ONE {
        fmt_power(e)
    } else {
        format!("{}*{}", fmt_coeff(fq, c), fmt_power(e))
    }
}

/// Sup norm of a vector: max of the entries' absolute values.
pub fn sup_norm(v: &[Laurent]) -> Result<AbsExponent> {
    v.iter().try_fold(AbsExponent::Zero, |acc, x| Ok(acc.max(x.abs()?)))
}

impl fmt::Display for Laurent {
    /// Prime-field rendering; use [`Laurent::display`] for extension fields.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms()
            .map(|(e, c)| match (e, c.0) {
                (0, v) => format!("{v}"),
                (_, 1) => fmt_power(e),
                (_, v) => format!("{v}*{}", fmt_power(e)),
            })
            .collect();
        if let Some(p) = self.prec {
            parts.push(format!("O({})", fmt_power(p - 1)));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}
