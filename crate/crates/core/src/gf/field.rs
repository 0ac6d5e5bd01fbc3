use std::fmt;
use std::sync::OnceLock;

use super::GfError;

/// Field orders we build tables for. Every prime power up to 16 with p <= 13.
pub const SUPPORTED_ORDERS: [u8; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

const STRIDE: usize = 16;

/// GF(p^k) with a fixed irreducible modulus and precomputed operation tables.
///
/// Elements are addressed by their *code*: the coefficient vector
/// `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` read as the base-`p` integer
/// `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Integer order on codes is the
/// canonical element order (coefficient tuples compared high degree first).
pub struct GaloisField {
    p: u8,
    k: u8,
    q: u8,
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gf({})", self.q)
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gf({})", self.q)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for GaloisField {}

/// Split `q` into `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn digits(mut code: u32, p: u32, k: usize) -> Vec<u8> {
    let mut out = vec![0u8; k];
    for c in out.iter_mut() {
        *c = (code % p) as u8;
        code /= p;
    }
    out
}

fn undigits(coeffs: &[u8], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c as u32)
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p), little-endian.
fn poly_rem(a: &[u8], m: &[u8], p: u32) -> Vec<u8> {
    let mut r: Vec<u32> = a.iter().map(|&c| c as u32).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dm;
        for (i, &mc) in m[..dm].iter().enumerate() {
            let sub = lead * mc as u32 % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
    }
    r.into_iter().map(|c| c as u8).collect()
}

fn poly_mul(a: &[u8], b: &[u8], p: u32) -> Vec<u8> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u32 * y as u32) % p;
        }
    }
    out.into_iter().map(|c| c as u8).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u8], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut div = digits(low, p, d);
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `k`,
/// coefficients compared from the highest non-leading degree downwards.
pub fn smallest_irreducible(p: u32, k: u32) -> Vec<u8> {
    (0..p.pow(k))
        .map(|low| {
            let mut poly = digits(low, p, k as usize);
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(poly, p))
        .expect("an irreducible polynomial of every degree exists")
}

impl GaloisField {
    /// The canonical field of order `q`, built once and shared.
    pub fn get(q: u32) -> Result<&'static GaloisField, GfError> {
        static FIELDS: [OnceLock<GaloisField>; 17] = [const { OnceLock::new() }; 17];
        let (p, k) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        if q > 16 || p > 13 {
            return Err(GfError::Unsupported(q));
        }
        Ok(FIELDS[q as usize].get_or_init(|| GaloisField::build(p, k)))
    }

    /// Parse a designator of the form `gf(q)`.
    pub fn parse(designator: &str) -> Result<&'static GaloisField, GfError> {
        let s = designator.trim().to_ascii_lowercase();
        let inner = s
            .strip_prefix("gf(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| GfError::BadDesignator(designator.to_string()))?;
        let q: u32 = inner
            .trim()
            .parse()
            .map_err(|_| GfError::BadDesignator(designator.to_string()))?;
        GaloisField::get(q)
    }

    fn build(p: u32, k: u32) -> GaloisField {
        let q = p.pow(k);
        let modulus = smallest_irreducible(p, k);
        let kk = k as usize;
        let mut add = vec![0u8; STRIDE * STRIDE];
        let mut mul = vec![0u8; STRIDE * STRIDE];
        for a in 0..q {
            let da = digits(a, p, kk);
            for b in 0..q {
                let db = digits(b, p, kk);
                let sum: Vec<u8> = da
                    .iter()
                    .zip(&db)
                    .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8)
                    .collect();
                add[a as usize * STRIDE + b as usize] = undigits(&sum, p) as u8;
                let mut prod = poly_rem(&poly_mul(&da, &db, p), &modulus, p);
                prod.resize(kk, 0);
                mul[a as usize * STRIDE + b as usize] = undigits(&prod, p) as u8;
            }
        }
        let mut neg = vec![0u8; q as usize];
        let mut inv = vec![0u8; q as usize];
        for a in 0..q as usize {
            neg[a] = (0..q as usize).find(|&b| add[a * STRIDE + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..q as usize).find(|&b| mul[a * STRIDE + b] == 1).unwrap() as u8;
            }
        }
        GaloisField {
            p: p as u8,
            k: k as u8,
            q: q as u8,
            modulus,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn order(&self) -> u32 {
        self.q as u32
    }

    pub fn characteristic(&self) -> u32 {
        self.p as u32
    }

    pub fn degree(&self) -> u32 {
        self.k as u32
    }

    /// Monic modulus, little-endian, length `k + 1`.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// All element codes in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = u8> + Clone {
        0..self.q
    }

    pub fn nonzero(&self) -> impl Iterator<Item = u8> + Clone {
        1..self.q
    }

    /// The class of the polynomial variable `x` (0 in a prime field, whose modulus is `x`).
    pub fn generator(&self) -> u8 {
        if self.k == 1 {
            0
        } else {
            self.p
        }
    }

    pub fn coeffs(&self, a: u8) -> Vec<u8> {
        digits(a as u32, self.p as u32, self.k as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u8]) -> u8 {
        let mut c = coeffs.to_vec();
        c.resize(self.k as usize, 0);
        undigits(&c, self.p as u32) as u8
    }

    /// Embed an integer (reduced mod p) into the prime subfield.
    pub fn from_int(&self, n: i64) -> u8 {
        n.rem_euclid(self.p as i64) as u8
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * STRIDE + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * STRIDE + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    #[inline]
    pub fn div(&self, a: u8, b: u8) -> u8 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u8, mut e: u32) -> u8 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(p^i)`; the identity when `i == 0`.
    pub fn frobenius(&self, a: u8, i: u32) -> u8 {
        (0..i).fold(a, |x, _| self.pow(x, self.p as u32))
    }

    pub fn is_square(&self, a: u8) -> bool {
        self.elements().any(|b| self.mul(b, b) == a)
    }

    /// Checked handle for a single element.
    pub fn element(&self, code: u8) -> Result<FieldElement, GfError> {
        if code >= self.q {
            return Err(GfError::BadCode {
                code: code as u32,
                q: self.q as u32,
            });
        }
        Ok(FieldElement { q: self.q, code })
    }
}

/// An element together with the order of its field.
///
/// The order identifies the field uniquely because every order has one
/// canonical modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    q: u8,
    code: u8,
}

impl FieldElement {
    pub fn new(q: u32, code: u8) -> Result<FieldElement, GfError> {
        GaloisField::get(q)?.element(code)
    }

    pub fn field(&self) -> &'static GaloisField {
        GaloisField::get(self.q as u32).expect("element built from a supported field")
    }

    pub fn code(&self) -> u8 {
        self.code
    }

    pub fn order(&self) -> u32 {
        self.q as u32
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field();
        if field.degree() == 1 {
            return write!(f, "{}", self.code);
        }
        let terms: Vec<String> = field
            .coeffs(self.code)
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic on elements of the same field.
pub fn field_arith(a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement, GfError> {
    if a.q != b.q {
        return Err(GfError::FieldMismatch {
            left: a.q as u32,
            right: b.q as u32,
        });
    }
    let f = a.field();
    let code = match op {
        ArithOp::Add => f.add(a.code, b.code),
        ArithOp::Sub => f.sub(a.code, b.code),
        ArithOp::Mul => f.mul(a.code, b.code),
        ArithOp::Div => {
            if b.code == 0 {
                return Err(GfError::DivisionByZero);
            }
            f.div(a.code, b.code)
        }
    };
    Ok(FieldElement { q: a.q, code })
}

/// Frobenius power on a checked element. `i` must be below the degree.
pub fn frobenius(a: FieldElement, i: u32) -> Result<FieldElement, GfError> {
    let f = a.field();
    if i >= f.degree() {
        return Err(GfError::BadFrobeniusPower {
            power: i,
            degree: f.degree(),
        });
    }
    Ok(FieldElement {
        q: a.q,
        code: f.frobenius(a.code, i),
    })
}
