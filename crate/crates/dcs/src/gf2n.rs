//! Exact arithmetic in GF(2^n).
//!
//! Elements are stored as n-bit coefficient vectors over the polynomial
//! basis, so addition is bitwise XOR and multiplication goes through
//! discrete-log tables built from a primitive polynomial. On top of the
//! plain field operations this module provides the trace map, additive
//! characters, self-dual bases (trace-orthonormal: tr(θ_i θ_j) = δ_ij),
//! the coordinate map a_i = tr(α θ_i), and the weight h(α) counting the
//! nonzero self-dual coordinates.

use serde::Serialize;
use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 20;

/// One primitive polynomial per degree 1..=MAX_DEGREE, as bitmasks with
/// the x^n term included. Degree 5 is x^5 + x^2 + 1, matching the field
/// labels used throughout the rest of the crate's reference values.
const DEFAULT_POLYS: [u64; MAX_DEGREE] = [
    0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B, 0x20009, 0x40081, 0x80027, 0x100009,
];

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum FieldError {
    #[error("field degree must satisfy 1 <= n <= {MAX_DEGREE}, got {0}")]
    InvalidDegree(usize),
    #[error("polynomial {0:#x} is not a primitive polynomial of degree {1}")]
    PolynomialNotPrimitive(u64, usize),
    #[error("no self-dual basis found for GF(2^{0})")]
    NoSelfDualBasis(usize),
    #[error("division by zero in the field")]
    DivisionByZero,
    #[error("value {0:#x} is not an element of GF(2^{1})")]
    ElementOutOfRange(u64, usize),
    #[error("cannot parse {0:?} as a field element label")]
    BadLabel(String),
}

/// An element of GF(2^n): bit i is the coefficient of x^i in the
/// polynomial-basis representation. The zero value is the field zero and
/// `1` is the multiplicative identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn new(bits: u32) -> Self {
        FieldElement(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Index into grid/state arrays: the integer value of the bitmask.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A constructed field GF(2^n): primitive polynomial, log/exp tables, a
/// self-dual basis and the derived per-element caches. Immutable after
/// construction and safe to share across threads.
pub struct FieldSpec {
    n: usize,
    poly: u64,
    /// exp[k] = σ^k for 0 <= k <= 2^n - 1; exp[2^n - 1] = 1.
    exp: Vec<u32>,
    /// log[bits] for nonzero bits; log[0] is unused.
    log: Vec<u32>,
    trace_tab: Vec<u8>,
    sd_basis: Vec<FieldElement>,
    /// Self-dual coordinate masks: bit i-1 of sd_tab[α] is a_i = tr(α θ_i).
    sd_tab: Vec<u32>,
    h_tab: Vec<u8>,
    /// Polynomial-basis index -> tensor-product index with qubit 1 as the
    /// leftmost (most significant) factor, and its inverse.
    tensor_tab: Vec<u32>,
    tensor_inv: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.poly == other.poly && self.sd_basis == other.sd_basis
    }
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldSpec")
            .field("n", &self.n)
            .field("poly", &format_args!("{:#x}", self.poly))
            .field("self_dual_basis", &self.sd_basis)
            .finish()
    }
}

/// Serializable summary of a field: `{n, poly (hex), self_dual_basis}`.
#[derive(Debug, Serialize)]
pub struct FieldInfo {
    pub n: usize,
    pub poly: String,
    pub self_dual_basis: Vec<String>,
}

/// Builds GF(2^n). With `poly = None` a built-in primitive polynomial is
/// used; otherwise the given bitmask must be primitive of degree n.
pub fn build_field(n: usize, poly: Option<u64>) -> Result<FieldSpec, FieldError> {
    FieldSpec::build(n, poly)
}

impl FieldSpec {
    pub fn build(n: usize, poly: Option<u64>) -> Result<Self, FieldError> {
        if n < 1 || n > MAX_DEGREE {
            return Err(FieldError::InvalidDegree(n));
        }
        let poly = poly.unwrap_or(DEFAULT_POLYS[n - 1]);
        let size = 1usize << n;
        let order = size - 1;
        // Degree check: leading term x^n present, nothing above it, and a
        // nonzero constant term (otherwise x divides the polynomial).
        if poly >> n != 1 || poly & 1 == 0 {
            return Err(FieldError::PolynomialNotPrimitive(poly, n));
        }

        // Powers of σ = x modulo poly. The polynomial is primitive exactly
        // when the orbit of 1 under multiplication by x has length 2^n - 1.
        let mut exp = vec![0u32; size];
        let mut log = vec![u32::MAX; size];
        let mut a: u64 = 1;
        for k in 0..order {
            if log[a as usize] != u32::MAX {
                return Err(FieldError::PolynomialNotPrimitive(poly, n));
            }
            exp[k] = a as u32;
            log[a as usize] = k as u32;
            a <<= 1;
            if a >> n != 0 {
                a ^= poly;
            }
        }
        if a != 1 {
            return Err(FieldError::PolynomialNotPrimitive(poly, n));
        }
        exp[order] = 1;

        let mut field = FieldSpec {
            n,
            poly,
            exp,
            log,
            trace_tab: Vec::new(),
            sd_basis: Vec::new(),
            sd_tab: Vec::new(),
            h_tab: Vec::new(),
            tensor_tab: Vec::new(),
            tensor_inv: Vec::new(),
        };

        // Trace cache: Frobenius sum α + α² + ... + α^{2^{n-1}}.
        let mut trace_tab = vec![0u8; size];
        for x in 0..size as u32 {
            let mut s = x;
            let mut t = x;
            for _ in 1..n {
                t = field.mul_bits(t, t);
                s ^= t;
            }
            debug_assert!(s <= 1, "trace must land in GF(2)");
            trace_tab[x as usize] = s as u8;
        }
        field.trace_tab = trace_tab;

        field.sd_basis = field.find_self_dual_basis()?;
        // Safety net: re-verify the trace Gram matrix of the chosen basis.
        for i in 0..n {
            for j in 0..n {
                let g = field.trace(field.mul(field.sd_basis[i], field.sd_basis[j]));
                if g != u8::from(i == j) {
                    return Err(FieldError::NoSelfDualBasis(n));
                }
            }
        }

        let mut sd_tab = vec![0u32; size];
        let mut h_tab = vec![0u8; size];
        let mut tensor_tab = vec![0u32; size];
        let mut tensor_inv = vec![0u32; size];
        for x in 0..size as u32 {
            let alpha = FieldElement(x);
            let mut mask = 0u32;
            for (i, &theta) in field.sd_basis.iter().enumerate() {
                if field.trace(field.mul(alpha, theta)) == 1 {
                    mask |= 1 << i;
                }
            }
            sd_tab[x as usize] = mask;
            h_tab[x as usize] = mask.count_ones() as u8;
            // Qubit i maps to θ_i with qubit 1 leftmost, so a_1 is the
            // most significant bit of the tensor index.
            let mut t = 0u32;
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    t |= 1 << (n - 1 - i);
                }
            }
            tensor_tab[x as usize] = t;
            tensor_inv[t as usize] = x;
        }
        field.sd_tab = sd_tab;
        field.h_tab = h_tab;
        field.tensor_tab = tensor_tab;
        field.tensor_inv = tensor_inv;
        Ok(field)
    }

    /// Depth-first search for the self-dual basis whose sorted exponent
    /// tuple is lexicographically smallest. Candidates are the elements
    /// with tr(θ) = 1 (tr(θ²) = tr(θ) in characteristic 2), visited in
    /// ascending exponent order.
    fn find_self_dual_basis(&self) -> Result<Vec<FieldElement>, FieldError> {
        let order = (1usize << self.n) - 1;
        let cands: Vec<u32> = (0..order as u32)
            .filter(|&e| self.trace_tab[self.exp[e as usize] as usize] == 1)
            .collect();
        let mut chosen: Vec<FieldElement> = Vec::with_capacity(self.n);
        if self.dfs_basis(&cands, 0, &mut chosen) {
            Ok(chosen)
        } else {
            Err(FieldError::NoSelfDualBasis(self.n))
        }
    }

    fn dfs_basis(&self, cands: &[u32], start: usize, chosen: &mut Vec<FieldElement>) -> bool {
        if chosen.len() == self.n {
            return true;
        }
        for idx in start..cands.len() {
            let theta = FieldElement(self.exp[cands[idx] as usize]);
            if chosen
                .iter()
                .all(|&c| self.trace_tab[self.mul(theta, c).index()] == 0)
            {
                chosen.push(theta);
                if self.dfs_basis(cands, idx + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    /// Every self-dual basis of the field, each sorted by exponent, the
    /// whole list sorted lexicographically by exponent tuple. The search
    /// is a full backtracking enumeration; callers should keep n small.
    pub fn all_self_dual_bases(&self) -> Vec<Vec<FieldElement>> {
        let order = (1usize << self.n) - 1;
        let cands: Vec<u32> = (0..order as u32)
            .filter(|&e| self.trace_tab[self.exp[e as usize] as usize] == 1)
            .collect();
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(self.n);
        self.collect_bases(&cands, 0, &mut chosen, &mut out);
        out
    }

    fn collect_bases(
        &self,
        cands: &[u32],
        start: usize,
        chosen: &mut Vec<FieldElement>,
        out: &mut Vec<Vec<FieldElement>>,
    ) {
        if chosen.len() == self.n {
            out.push(chosen.clone());
            return;
        }
        for idx in start..cands.len() {
            let theta = FieldElement(self.exp[cands[idx] as usize]);
            if chosen
                .iter()
                .all(|&c| self.trace_tab[self.mul(theta, c).index()] == 0)
            {
                chosen.push(theta);
                self.collect_bases(cands, idx + 1, chosen, out);
                chosen.pop();
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    /// Number of elements, 2^n.
    pub fn size(&self) -> usize {
        1usize << self.n
    }

    /// Order of the multiplicative group, 2^n - 1.
    pub fn group_order(&self) -> usize {
        (1usize << self.n) - 1
    }

    pub fn self_dual_basis(&self) -> &[FieldElement] {
        &self.sd_basis
    }

    pub fn element(&self, bits: u64) -> Result<FieldElement, FieldError> {
        if bits >= (1u64 << self.n) {
            return Err(FieldError::ElementOutOfRange(bits, self.n));
        }
        Ok(FieldElement(bits as u32))
    }

    /// σ^k, with the exponent reduced mod 2^n - 1.
    pub fn sigma_pow(&self, k: u64) -> FieldElement {
        FieldElement(self.exp[(k % self.group_order() as u64) as usize])
    }

    /// Discrete log in [0, 2^n - 2], or None for zero.
    pub fn log_of(&self, alpha: FieldElement) -> Option<u32> {
        if alpha.is_zero() {
            None
        } else {
            Some(self.log[alpha.index()])
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size() as u32).map(FieldElement)
    }

    pub fn add(&self, alpha: FieldElement, beta: FieldElement) -> FieldElement {
        FieldElement(alpha.0 ^ beta.0)
    }

    fn mul_bits(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let m = self.group_order() as u32;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % m) as usize]
    }

    pub fn mul(&self, alpha: FieldElement, beta: FieldElement) -> FieldElement {
        FieldElement(self.mul_bits(alpha.0, beta.0))
    }

    pub fn inv(&self, alpha: FieldElement) -> Result<FieldElement, FieldError> {
        if alpha.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let m = self.group_order() as u32;
        Ok(FieldElement(
            self.exp[((m - self.log[alpha.index()]) % m) as usize],
        ))
    }

    /// The Frobenius sum tr(α) = α + α² + ... + α^{2^{n-1}}, in {0, 1}.
    pub fn trace(&self, alpha: FieldElement) -> u8 {
        self.trace_tab[alpha.index()]
    }

    /// Additive character χ(α) = (-1)^{tr(α)}.
    pub fn character(&self, alpha: FieldElement) -> i32 {
        1 - 2 * self.trace_tab[alpha.index()] as i32
    }

    /// Self-dual coordinates as a bitmask: bit i-1 holds a_i = tr(α θ_i).
    pub fn sd_coords(&self, alpha: FieldElement) -> u32 {
        self.sd_tab[alpha.index()]
    }

    /// Reassembles Σ a_i θ_i from a self-dual coordinate mask.
    pub fn from_sd_coords(&self, mask: u32) -> FieldElement {
        debug_assert!(mask < (1u32 << self.n));
        let mut acc = 0u32;
        for (i, theta) in self.sd_basis.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc ^= theta.0;
            }
        }
        FieldElement(acc)
    }

    /// Number of nonzero self-dual coordinates, 0 <= h(α) <= n.
    pub fn h(&self, alpha: FieldElement) -> u32 {
        self.h_tab[alpha.index()] as u32
    }

    /// The element κ with coordinates a_i OR b_i, so that
    /// 2 h(κ) = h(α) + h(β) + h(α+β).
    pub fn kappa_of(&self, alpha: FieldElement, beta: FieldElement) -> FieldElement {
        self.from_sd_coords(self.sd_tab[alpha.index()] | self.sd_tab[beta.index()])
    }

    /// Position of |α⟩ in the qubit tensor-product ordering (qubit 1 is
    /// the leftmost factor).
    pub fn tensor_index(&self, alpha: FieldElement) -> usize {
        self.tensor_tab[alpha.index()] as usize
    }

    pub fn from_tensor_index(&self, idx: usize) -> FieldElement {
        FieldElement(self.tensor_inv[idx])
    }

    /// Element label: "0" for zero, "s<k>" for σ^k.
    pub fn label(&self, alpha: FieldElement) -> String {
        match self.log_of(alpha) {
            None => "0".to_string(),
            Some(k) => format!("s{k}"),
        }
    }

    /// Parses "0" or "s<k>" (also accepting a leading "1" for σ^0).
    pub fn parse_label(&self, s: &str) -> Result<FieldElement, FieldError> {
        let s = s.trim();
        if s == "0" {
            return Ok(FieldElement::ZERO);
        }
        if s == "1" {
            return Ok(FieldElement::ONE);
        }
        if let Some(k) = s.strip_prefix('s') {
            let k: u64 = k
                .parse()
                .map_err(|_| FieldError::BadLabel(s.to_string()))?;
            return Ok(self.sigma_pow(k));
        }
        Err(FieldError::BadLabel(s.to_string()))
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            n: self.n,
            poly: format!("{:#x}", self.poly),
            self_dual_basis: self.sd_basis.iter().map(|&t| self.label(t)).collect(),
        }
    }

    /// Histogram of h-values: entry k counts elements with h(α) = k.
    pub fn h_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0usize; self.n + 1];
        for &h in &self.h_tab {
            hist[h as usize] += 1;
        }
        hist
    }
}
