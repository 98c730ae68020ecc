//! Seifert invariants: the text and JSON input forms, validation, and the
//! derived quantities (fiber ordering, `A`, `Aᵢ`, `C`, Bézout pairs, `q`, `λ`)
//! that the cohomology presentations are written in.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{check_prime, ext_gcd, gcd, inv_mod, reduce};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseClass {
    /// Orientable orbit surface, written `O,o`.
    #[serde(rename = "Oo")]
    Orientable,
    /// Non-orientable orbit surface, written `O,n`.
    #[serde(rename = "On")]
    Nonorientable,
}

impl BaseClass {
    pub fn symbol(self) -> &'static str {
        match self {
            BaseClass::Orientable => "O,o",
            BaseClass::Nonorientable => "O,n",
        }
    }
}

/// `(O,o|n; g | e : (a₁,b₁), …, (a_m,b_m))`, taken as written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertInvariants {
    pub base: BaseClass,
    pub g: u32,
    pub e: i64,
    pub fibers: Vec<[i64; 2]>,
}

impl SeifertInvariants {
    pub fn new(base: BaseClass, g: u32, e: i64, fibers: &[(i64, i64)]) -> Result<Self> {
        let inv = Self {
            base,
            g,
            e,
            fibers: fibers.iter().map(|&(a, b)| [a, b]).collect(),
        };
        inv.validate()?;
        Ok(inv)
    }

    pub fn validate(&self) -> Result<()> {
        for (index, &[a, b]) in self.fibers.iter().enumerate() {
            if a < 1 {
                return Err(Error::InvalidFiber {
                    index: index + 1,
                    a,
                    b,
                    reason: "a must be positive".into(),
                });
            }
            if gcd(a, b) != 1 {
                return Err(Error::InvalidFiber {
                    index: index + 1,
                    a,
                    b,
                    reason: format!("gcd(a,b) = {} ≠ 1", gcd(a, b)),
                });
            }
        }
        Ok(())
    }

    /// Parses the JSON input form `{base:"Oo"|"On", g, e, fibers:[[a,b],…]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let inv: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            column: e.column(),
            message: e.to_string(),
        })?;
        inv.validate()?;
        Ok(inv)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let inv = Parser::new(text).invariants()?;
        inv.validate()?;
        Ok(inv)
    }
}

impl std::str::FromStr for SeifertInvariants {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for SeifertInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{}|{}:", self.base.symbol(), self.g, self.e)?;
        for (k, [a, b]) in self.fibers.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "({a},{b})")?;
        }
        f.write_str(")")
    }
}

/// Recursive-descent parser for `"(" ("O,o"|"O,n") ";" g "|" e ":" pairs? ")"`.
struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        let chars = src
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        Self { chars, pos: 0 }
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(c, _)| c)
            .unwrap_or_else(|| self.chars.last().map_or(1, |&(c, _)| c + 1))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            column: self.column(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of input"))),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let mut s = String::new();
        if let Some(c @ ('-' | '+')) = self.peek() {
            s.push(c);
            self.pos += 1;
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.pos += 1;
        }
        if s.is_empty() || s == "-" || s == "+" {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        s.parse().map_err(|_| {
            self.pos = start;
            self.error("integer out of range")
        })
    }

    fn invariants(mut self) -> Result<SeifertInvariants> {
        self.expect('(')?;
        self.expect('O')?;
        self.expect(',')?;
        let base = match self.peek() {
            Some('o') => BaseClass::Orientable,
            Some('n') => BaseClass::Nonorientable,
            _ => return Err(self.error("expected base class 'o' or 'n'")),
        };
        self.pos += 1;
        self.expect(';')?;
        let g_col = self.column();
        let g = self.integer()?;
        let g = u32::try_from(g).map_err(|_| Error::Parse {
            column: g_col,
            message: "genus must be a non-negative integer".into(),
        })?;
        self.expect('|')?;
        let e = self.integer()?;
        self.expect(':')?;
        let mut fibers = Vec::new();
        if self.peek() == Some('(') {
            loop {
                self.expect('(')?;
                let a = self.integer()?;
                self.expect(',')?;
                let b = self.integer()?;
                self.expect(')')?;
                fibers.push([a, b]);
                if self.peek() == Some(',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(')')?;
        if let Some(c) = self.peek() {
            return Err(self.error(format!("unexpected trailing '{c}'")));
        }
        Ok(SeifertInvariants { base, g, e, fibers })
    }
}

/// Quantities derived from the invariants at a fixed prime `p`.
///
/// Fibers are reordered so that those with `aᵢ ≡ 0 (mod p)` come first
/// (positions `1..=n_p`); when `n_p = 0` the fibers with `bᵢ ≡ 0 (mod p)`
/// come first instead (positions `1..=r`). Vectors below are indexed by the
/// reordered position, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub prime: u32,
    /// `permutation[k]` is the input index of the fiber now at position `k`.
    pub permutation: Vec<usize>,
    pub fibers: Vec<[i64; 2]>,
    pub n_p: usize,
    /// `A = ∏ aᵢ`.
    pub a_product: i128,
    /// `Aᵢ = A / aᵢ`.
    pub cofactors: Vec<i128>,
    /// `C = Σ bᵢ Aᵢ`.
    pub c_sum: i128,
    /// `A e + C`.
    pub ae_plus_c: i128,
    pub r: usize,
    /// `b′ᵢ = bᵢ / p` for the first `r` fibers.
    pub b_prime: Vec<i64>,
    /// `a′ᵢ = aᵢ / p` for the first `n_p` fibers.
    pub a_prime: Vec<i64>,
    /// `(cᵢ, dᵢ)` with `aᵢ dᵢ − bᵢ cᵢ = 1` and `0 ≤ cᵢ < aᵢ`.
    pub bezout: Vec<[i64; 2]>,
    /// Number of `bᵢ`, `i ≤ r`, congruent to 2 mod 4 (p = 2 only, else 0).
    pub q: usize,
    /// `A⁻¹[Σ_{i≤r} b′ᵢAᵢ + (Ae+C)/p] mod p`, defined when `n_p = 0` and
    /// `Ae + C ≡ 0 (mod p)`.
    pub lambda: Option<u32>,
}

/// Note attached to reports whenever the fiber residue conditions are used.
pub const RESIDUE_CONDITION_NOTE: &str =
    "fiber residue conditions read as bᵢ, cᵢ ≢ 0 (mod p) for i ≤ n_p and aᵢ ≢ 0 (mod p) when n_p = 0";

impl DerivedParams {
    pub fn a(&self, i: usize) -> i64 {
        self.fibers[i][0]
    }

    pub fn b(&self, i: usize) -> i64 {
        self.fibers[i][1]
    }

    pub fn ae_plus_c_mod_p(&self) -> u32 {
        reduce(self.ae_plus_c, self.prime)
    }

    /// Checks the residue conditions the cohomology presentations assume,
    /// under the `≢ 0` reading (see [`RESIDUE_CONDITION_NOTE`]).
    pub fn check_residue_conditions(&self) -> Result<()> {
        let p = self.prime as i128;
        for i in 0..self.n_p {
            let c = self.bezout[i][0] as i128;
            if (self.b(i) as i128).rem_euclid(p) == 0 || c.rem_euclid(p) == 0 {
                return Err(Error::invariant(
                    "fiber residues",
                    format!("fiber {} has bᵢ or cᵢ divisible by {p}", i + 1),
                ));
            }
        }
        if self.n_p == 0 && self.a_product.rem_euclid(p) == 0 {
            return Err(Error::invariant("fiber residues", "A ≡ 0 (mod p) with n_p = 0"));
        }
        Ok(())
    }
}

/// `(c, d)` with `a d − b c = 1`, normalized to `0 ≤ c < a`.
pub fn bezout_pair(a: i64, b: i64) -> Result<[i64; 2]> {
    if a == 1 {
        return Ok([0, 1]);
    }
    // b c ≡ −1 (mod a)
    let (g, x, _) = ext_gcd(b as i128, a as i128);
    if g != 1 {
        return Err(Error::InvalidFiber {
            index: 0,
            a,
            b,
            reason: "not coprime".into(),
        });
    }
    let c = (-x).rem_euclid(a as i128);
    let num = 1 + b as i128 * c;
    debug_assert_eq!(num.rem_euclid(a as i128), 0);
    let d = num / a as i128;
    let d = i64::try_from(d).map_err(|_| Error::Overflow("Bézout coefficient"))?;
    Ok([c as i64, d])
}

pub fn derive(inv: &SeifertInvariants, p: u32) -> Result<DerivedParams> {
    inv.validate()?;
    let p = check_prime(p)?;
    let pi = p as i64;
    let m = inv.fibers.len();

    let mut permutation: Vec<usize> = (0..m).collect();
    permutation.sort_by_key(|&k| inv.fibers[k][0].rem_euclid(pi) != 0);
    let fibers: Vec<[i64; 2]> = permutation.iter().map(|&k| inv.fibers[k]).collect();
    let n_p = fibers.iter().take_while(|f| f[0].rem_euclid(pi) == 0).count();
    let (permutation, fibers) = if n_p == 0 {
        let mut perm = permutation;
        perm.sort_by_key(|&k| inv.fibers[k][1].rem_euclid(pi) != 0);
        let fibers = perm.iter().map(|&k| inv.fibers[k]).collect();
        (perm, fibers)
    } else {
        (permutation, fibers)
    };

    let a_product = fibers
        .iter()
        .try_fold(1i128, |acc, f| acc.checked_mul(f[0] as i128))
        .ok_or(Error::Overflow("A"))?;
    let cofactors: Vec<i128> = fibers.iter().map(|f| a_product / f[0] as i128).collect();
    let c_sum = fibers
        .iter()
        .zip(&cofactors)
        .try_fold(0i128, |acc, (f, &ai)| {
            (f[1] as i128).checked_mul(ai).and_then(|t| acc.checked_add(t))
        })
        .ok_or(Error::Overflow("C"))?;
    let ae_plus_c = a_product
        .checked_mul(inv.e as i128)
        .and_then(|t| t.checked_add(c_sum))
        .ok_or(Error::Overflow("Ae+C"))?;

    let r = fibers.iter().take_while(|f| f[1].rem_euclid(pi) == 0).count();
    let b_prime = fibers[..r].iter().map(|f| f[1] / pi).collect();
    let a_prime = fibers[..n_p].iter().map(|f| f[0] / pi).collect();
    let bezout = fibers
        .iter()
        .map(|f| bezout_pair(f[0], f[1]))
        .collect::<Result<Vec<_>>>()?;
    let q = if p == 2 {
        fibers[..r].iter().filter(|f| f[1].rem_euclid(4) == 2).count()
    } else {
        0
    };

    let mut params = DerivedParams {
        prime: p,
        permutation,
        fibers,
        n_p,
        a_product,
        cofactors,
        c_sum,
        ae_plus_c,
        r,
        b_prime,
        a_prime,
        bezout,
        q,
        lambda: None,
    };
    if n_p == 0 && params.ae_plus_c_mod_p() == 0 {
        let a_inv = inv_mod(reduce(a_product, p), p)
            .ok_or_else(|| Error::invariant("A invertible", "A ≡ 0 (mod p) with n_p = 0"))?;
        let mut s: i128 = 0;
        for (bp, &ai) in params.b_prime.iter().zip(&params.cofactors) {
            s = (s + reduce(*bp as i128, p) as i128 * reduce(ai, p) as i128) % p as i128;
        }
        s += reduce(ae_plus_c / p as i128, p) as i128;
        params.lambda = Some(reduce(s * a_inv as i128, p));
    }
    Ok(params)
}
