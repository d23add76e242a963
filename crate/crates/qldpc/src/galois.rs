//! Arithmetic for the extension fields GF(q) and GF(q²), q = 2^l, together
//! with the trace and symplectic machinery used by stabilizer codes.
//!
//! Elements of GF(q²) are stored in the polynomial basis as integers below
//! q²; addition is XOR and multiplication goes through discrete log/antilog
//! tables built from a primitive polynomial. A qudit error u is identified
//! with the pair (u_x, u_z) of GF(q) components through the basis {ω, ω^q},
//! where ω is the canonical primitive element (the root x of the chosen
//! polynomial). Two errors commute iff the binary symplectic form
//! tr(u_x·v_z + u_z·v_x) vanishes.

use crate::error::{Error, Result};

/// Smallest supported extension degree of the base field GF(2^l).
pub const MIN_EXTENSION_DEGREE: usize = 1;
/// Largest supported extension degree of the base field GF(2^l).
pub const MAX_EXTENSION_DEGREE: usize = 4;

const UNSET: u16 = u16::MAX;

/// An element of GF(q²) in polynomial-basis representation.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, serde::Serialize,
)]
#[serde(transparent)]
pub struct FieldElement(pub u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn poly_degree(mask: u64) -> u32 {
    63 - mask.leading_zeros()
}

/// Tests whether `mask` encodes a primitive polynomial of the given degree
/// over GF(2). The bit at position i is the coefficient of x^i. A degree-m
/// polynomial is primitive iff x has multiplicative order 2^m - 1 in the
/// quotient ring.
pub fn is_primitive_polynomial(mask: u64, degree: u32) -> bool {
    if degree == 0 || degree > 16 || mask & 1 == 0 || poly_degree(mask) != degree {
        return false;
    }
    let group_order = (1u64 << degree) - 1;
    let top = 1u64 << degree;
    let mut v = 1u64;
    for step in 1..=group_order {
        v <<= 1;
        if v & top != 0 {
            v ^= mask;
        }
        if v == 1 {
            return step == group_order;
        }
    }
    false
}

/// Returns the default primitive polynomial for GF(2^degree): the candidate
/// with the fewest nonzero coefficients, ties broken by the smallest bit
/// mask.
pub fn default_primitive_polynomial(degree: u32) -> u64 {
    assert!(degree >= 1 && degree <= 8, "degree out of supported range");
    let mut candidates: Vec<u64> = ((1u64 << degree)..(1u64 << (degree + 1)))
        .filter(|m| m & 1 == 1)
        .collect();
    candidates.sort_by_key(|m| (m.count_ones(), *m));
    candidates
        .into_iter()
        .find(|&m| is_primitive_polynomial(m, degree))
        .expect("a primitive polynomial exists for every degree")
}

struct LogExp {
    exp: Vec<u8>,
    log: Vec<u16>,
    size: usize,
}

impl LogExp {
    fn build(poly: u64, degree: u32) -> LogExp {
        let size = 1usize << degree;
        let top = 1u64 << degree;
        let mut exp = Vec::with_capacity(size - 1);
        let mut log = vec![UNSET; size];
        let mut v = 1u64;
        for i in 0..size - 1 {
            exp.push(v as u8);
            debug_assert_eq!(log[v as usize], UNSET);
            log[v as usize] = i as u16;
            v <<= 1;
            if v & top != 0 {
                v ^= poly;
            }
        }
        debug_assert_eq!(v, 1, "exp table did not cycle back to 1");
        LogExp { exp, log, size }
    }

    fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[i % (self.size - 1)]
    }

    fn pow(&self, a: u8, e: i64) -> u8 {
        let order = (self.size - 1) as i64;
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let mut k = (self.log[a as usize] as i64 * e) % order;
        if k < 0 {
            k += order;
        }
        self.exp[k as usize]
    }
}

/// Precomputed arithmetic and commutation tables for GF(q) and GF(q²).
pub struct FieldTables {
    l: usize,
    q: usize,
    q2: usize,
    poly_q: u64,
    poly_q2: u64,
    field: LogExp,
    subfield: LogExp,
    omega: FieldElement,
    omega_q: FieldElement,
    norm_divisor: FieldElement,
    trace_to_gf2: Vec<u8>,
    embed_sub: Vec<u8>,
    unembed_sub: Vec<u16>,
    split_table: Vec<(u8, u8)>,
    comm_table: Vec<u8>,
    commuting: Vec<Vec<FieldElement>>,
    anticommuting: Vec<Vec<FieldElement>>,
    comm_exponents: Vec<Vec<u16>>,
    anti_exponents: Vec<Vec<u16>>,
}

impl FieldTables {
    /// Builds the tables for GF(2^l) / GF(2^{2l}) with the default primitive
    /// polynomials.
    pub fn new(l: usize) -> Result<FieldTables> {
        if !(MIN_EXTENSION_DEGREE..=MAX_EXTENSION_DEGREE).contains(&l) {
            return Err(Error::UnsupportedExtensionDegree(l));
        }
        let poly_q = default_primitive_polynomial(l as u32);
        let poly_q2 = default_primitive_polynomial(2 * l as u32);
        FieldTables::with_polynomials(l, poly_q, poly_q2)
    }

    /// Builds the tables with caller-supplied primitive polynomials for
    /// GF(2^l) and GF(2^{2l}).
    pub fn with_polynomials(l: usize, poly_q: u64, poly_q2: u64) -> Result<FieldTables> {
        if !(MIN_EXTENSION_DEGREE..=MAX_EXTENSION_DEGREE).contains(&l) {
            return Err(Error::UnsupportedExtensionDegree(l));
        }
        if !is_primitive_polynomial(poly_q, l as u32) {
            return Err(Error::NonPrimitivePolynomial {
                poly: poly_q,
                degree: l as u32,
            });
        }
        if !is_primitive_polynomial(poly_q2, 2 * l as u32) {
            return Err(Error::NonPrimitivePolynomial {
                poly: poly_q2,
                degree: 2 * l as u32,
            });
        }

        let q = 1usize << l;
        let q2 = 1usize << (2 * l);
        let field = LogExp::build(poly_q2, 2 * l as u32);
        let subfield = LogExp::build(poly_q, l as u32);

        let omega = FieldElement(field.exp[1 % (q2 - 1)]);
        let omega_q = FieldElement(field.pow(omega.0, q as i64));
        let norm_divisor =
            FieldElement(field.pow(omega.0, 2) ^ field.pow(omega.0, 2 * q as i64));
        assert!(norm_divisor.0 != 0, "omega^2 + omega^2q must be invertible");

        // Trace of GF(q) down to GF(2), computed in the subfield's own basis.
        let mut trace_to_gf2 = vec![0u8; q];
        for v in 0..q as u8 {
            let mut power = v;
            let mut acc = v;
            for _ in 1..l {
                power = subfield.mul(power, power);
                acc ^= power;
            }
            assert!(acc <= 1, "trace must land in GF(2)");
            trace_to_gf2[v as usize] = acc;
        }

        // Embed GF(q) into GF(q²) by sending the subfield's x to the
        // smallest root of poly_q inside GF(q²).
        let beta = (0..q2 as u16)
            .map(|c| c as u8)
            .find(|&c| {
                let mut acc = 0u8;
                for bit in (0..=l).rev() {
                    acc = field.mul(acc, c);
                    if poly_q >> bit & 1 == 1 {
                        acc ^= 1;
                    }
                }
                acc == 0
            })
            .expect("poly_q splits in the extension field");
        let mut embed_sub = vec![0u8; q];
        let mut unembed_sub = vec![UNSET; q2];
        for v in 0..q as u8 {
            let mut image = 0u8;
            for bit in 0..l {
                if v >> bit & 1 == 1 {
                    image ^= field.pow(beta, bit as i64);
                }
            }
            embed_sub[v as usize] = image;
            assert_eq!(unembed_sub[image as usize], UNSET, "embedding not injective");
            unembed_sub[image as usize] = v as u16;
        }
        for a in 0..q as u8 {
            for b in 0..q as u8 {
                assert_eq!(
                    embed_sub[subfield.mul(a, b) as usize],
                    field.mul(embed_sub[a as usize], embed_sub[b as usize]),
                    "embedding must be multiplicative"
                );
            }
        }

        // Invert (a, b) -> ω·a + ω^q·b by exhaustion; this also certifies
        // that {ω, ω^q} is a basis of GF(q²) over GF(q).
        let mut split_table = vec![(0u8, 0u8); q2];
        let mut seen = vec![false; q2];
        for a in 0..q as u8 {
            for b in 0..q as u8 {
                let u = field.mul(omega.0, embed_sub[a as usize])
                    ^ field.mul(omega_q.0, embed_sub[b as usize]);
                assert!(!seen[u as usize], "split map must be bijective");
                seen[u as usize] = true;
                split_table[u as usize] = (a, b);
            }
        }

        let mut comm_table = vec![0u8; q2 * q2];
        for eta in 0..q2 {
            let (ex, ez) = split_table[eta];
            for xi in 0..q2 {
                let (zx, zz) = split_table[xi];
                let s = subfield.mul(ex, zz) ^ subfield.mul(ez, zx);
                comm_table[eta * q2 + xi] = trace_to_gf2[s as usize];
            }
        }

        let mut commuting = vec![Vec::new(); q2];
        let mut anticommuting = vec![Vec::new(); q2];
        let mut comm_exponents = vec![Vec::new(); q2];
        let mut anti_exponents = vec![Vec::new(); q2];
        for eta in 1..q2 {
            for xi in 0..q2 {
                if comm_table[eta * q2 + xi] == 0 {
                    commuting[eta].push(FieldElement(xi as u8));
                } else {
                    anticommuting[eta].push(FieldElement(xi as u8));
                }
            }
            assert_eq!(commuting[eta].len(), q2 / 2);
            assert_eq!(anticommuting[eta].len(), q2 / 2);
            for i in 0..q2 - 1 {
                let xi = field.exp[i] as usize;
                if comm_table[eta * q2 + xi] == 0 {
                    comm_exponents[eta].push(i as u16);
                } else {
                    anti_exponents[eta].push(i as u16);
                }
            }
        }

        Ok(FieldTables {
            l,
            q,
            q2,
            poly_q,
            poly_q2,
            field,
            subfield,
            omega,
            omega_q,
            norm_divisor,
            trace_to_gf2,
            embed_sub,
            unembed_sub,
            split_table,
            comm_table,
            commuting,
            anticommuting,
            comm_exponents,
            anti_exponents,
        })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Size q of the base field GF(2^l).
    pub fn q(&self) -> usize {
        self.q
    }

    /// Size q² of the error alphabet GF(2^{2l}).
    pub fn q2(&self) -> usize {
        self.q2
    }

    pub fn poly_q(&self) -> u64 {
        self.poly_q
    }

    pub fn poly_q2(&self) -> u64 {
        self.poly_q2
    }

    /// The canonical primitive element ω (also used as ζ for indexing).
    pub fn omega(&self) -> FieldElement {
        self.omega
    }

    pub fn element(&self, value: usize) -> Result<FieldElement> {
        if value >= self.q2 {
            return Err(Error::ElementOutOfRange {
                value,
                size: self.q2,
            });
        }
        Ok(FieldElement(value as u8))
    }

    /// ζ^k for 0 <= k <= q²-2.
    pub fn from_exponent(&self, k: usize) -> Result<FieldElement> {
        if k >= self.q2 - 1 {
            return Err(Error::ExponentOutOfRange {
                exponent: k,
                max: self.q2 - 2,
            });
        }
        Ok(FieldElement(self.field.exp[k]))
    }

    /// Discrete log of a nonzero element.
    pub fn exponent(&self, x: FieldElement) -> Option<usize> {
        if x.is_zero() {
            None
        } else {
            Some(self.field.log[x.index()] as usize)
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.field.mul(a.0, b.0))
    }

    pub fn pow(&self, a: FieldElement, e: i64) -> FieldElement {
        FieldElement(self.field.pow(a.0, e))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, -1))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Frobenius conjugate a^q.
    pub fn conj(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.q as i64)
    }

    /// Splits u into its GF(q) components (u_x, u_z) with
    /// u = ω·u_x + ω^q·u_z.
    pub fn split(&self, u: FieldElement) -> (u8, u8) {
        self.split_table[u.index()]
    }

    /// Inverse of `split`.
    pub fn combine(&self, x_part: u8, z_part: u8) -> FieldElement {
        let u = self.field.mul(self.omega.0, self.embed_sub[x_part as usize])
            ^ self
                .field
                .mul(self.omega_q.0, self.embed_sub[z_part as usize]);
        FieldElement(u)
    }

    /// Product in the base field GF(q), both operands in GF(q) representation.
    pub fn subfield_mul(&self, a: u8, b: u8) -> u8 {
        self.subfield.mul(a, b)
    }

    /// Trace of a GF(q) element down to GF(2).
    pub fn subfield_trace(&self, v: u8) -> u8 {
        self.trace_to_gf2[v as usize]
    }

    /// Image of a GF(q) element inside GF(q²).
    pub fn embed_subfield(&self, v: u8) -> FieldElement {
        FieldElement(self.embed_sub[v as usize])
    }

    /// Preimage under `embed_subfield`, when the element lies in the subfield.
    pub fn unembed_subfield(&self, x: FieldElement) -> Option<u8> {
        let v = self.unembed_sub[x.index()];
        if v == UNSET {
            None
        } else {
            Some(v as u8)
        }
    }

    /// The GF(q) elements of trace zero.
    pub fn trace_kernel(&self) -> Vec<u8> {
        (0..self.q as u8)
            .filter(|&v| self.trace_to_gf2[v as usize] == 0)
            .collect()
    }

    /// Binary symplectic form ⟨η, ξ⟩ of two scalars (0 commute, 1 anticommute).
    pub fn scalar_commutation(&self, eta: FieldElement, xi: FieldElement) -> u8 {
        self.comm_table[eta.index() * self.q2 + xi.index()]
    }

    /// Symplectic inner product of two vectors over GF(q²).
    pub fn symplectic_ip(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<u8> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch {
                left: u.len(),
                right: v.len(),
            });
        }
        Ok(u.iter()
            .zip(v)
            .fold(0, |acc, (&a, &b)| acc ^ self.scalar_commutation(a, b)))
    }

    /// Hermitian inner product u·v̄ = Σ u_j v_j^q.
    pub fn hermitian_ip(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<FieldElement> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch {
                left: u.len(),
                right: v.len(),
            });
        }
        Ok(u.iter().zip(v).fold(FieldElement::ZERO, |acc, (&a, &b)| {
            self.add(acc, self.mul(a, self.conj(b)))
        }))
    }

    /// ⟨η, ξ⟩ evaluated through the trace identity
    /// tr((η·ξ^q + ξ·η^q) / (ω² + ω^{2q})) instead of the split tables.
    pub fn commutation_via_trace(&self, eta: FieldElement, xi: FieldElement) -> u8 {
        let num = self.add(
            self.mul(eta, self.conj(xi)),
            self.mul(xi, self.conj(eta)),
        );
        let ratio = self
            .div(num, self.norm_divisor)
            .expect("norm divisor is nonzero");
        let v = self
            .unembed_subfield(ratio)
            .expect("trace identity argument lies in the subfield");
        self.subfield_trace(v)
    }

    /// Vector symplectic inner product through the trace identity applied to
    /// the Hermitian products u·v̄ and v·ū.
    pub fn symplectic_ip_via_trace(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<u8> {
        let uv = self.hermitian_ip(u, v)?;
        let vu = self.hermitian_ip(v, u)?;
        let ratio = self
            .div(self.add(uv, vu), self.norm_divisor)
            .expect("norm divisor is nonzero");
        let w = self
            .unembed_subfield(ratio)
            .expect("trace identity argument lies in the subfield");
        Ok(self.subfield_trace(w))
    }

    /// The commuting class [η] (includes 0). η must be nonzero.
    pub fn commuting_class(&self, eta: FieldElement) -> &[FieldElement] {
        assert!(!eta.is_zero(), "classes are defined for nonzero eta");
        &self.commuting[eta.index()]
    }

    /// The anticommuting class [η]^c. η must be nonzero.
    pub fn anticommuting_class(&self, eta: FieldElement) -> &[FieldElement] {
        assert!(!eta.is_zero(), "classes are defined for nonzero eta");
        &self.anticommuting[eta.index()]
    }

    /// Exponents i with ⟨ζ^i, η⟩ = 0.
    pub fn commuting_exponents(&self, eta: FieldElement) -> &[u16] {
        assert!(!eta.is_zero(), "classes are defined for nonzero eta");
        &self.comm_exponents[eta.index()]
    }

    /// Exponents i with ⟨ζ^i, η⟩ = 1.
    pub fn anticommuting_exponents(&self, eta: FieldElement) -> &[u16] {
        assert!(!eta.is_zero(), "classes are defined for nonzero eta");
        &self.anti_exponents[eta.index()]
    }
}
