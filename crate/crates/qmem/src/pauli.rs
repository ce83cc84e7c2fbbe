//! Bit-packed Pauli algebra and stabilizer-tableau simulation.
//!
//! A Pauli operator on `n <= 64` qubits is stored in X-Z normal form,
//! `P = i^phase · X^x · Z^z`, with `x`, `z` packed into one machine word
//! each and the phase tracked modulo 4 as a power of `i`. Hermitian
//! operators (tensor products of literal I/X/Y/Z with a ±1 sign) satisfy
//! `phase ≡ popcount(x & z) (mod 2)`.
//!
//! The tableau keeps `n` stabilizer and `n` destabilizer rows
//! (Aaronson-Gottesman bookkeeping) so that measurement is O(n²) word
//! operations. Destabilizer rows are group-theoretic bookkeeping only;
//! their phases are never read.

use std::fmt;

use crate::{Error, Result};

pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli axis label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PauliAxis::X => write!(f, "x"),
            PauliAxis::Y => write!(f, "y"),
            PauliAxis::Z => write!(f, "z"),
        }
    }
}

/// An n-qubit Pauli operator `i^phase · X^x · Z^z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    /// Power of i, modulo 4.
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        PauliString { n, x: 0, z: 0, phase: 0 }
    }

    /// Literal single-qubit Pauli on qubit `q` (sign +1).
    pub fn single(n: usize, q: usize, axis: PauliAxis) -> Self {
        assert!(q < n);
        let bit = 1u64 << q;
        match axis {
            PauliAxis::X => PauliString { n, x: bit, z: 0, phase: 0 },
            // Y = i·X·Z
            PauliAxis::Y => PauliString { n, x: bit, z: bit, phase: 1 },
            PauliAxis::Z => PauliString { n, x: 0, z: bit, phase: 0 },
        }
    }

    /// Build from component masks, sign +1. `x & z` bits are Y factors.
    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        assert!(n <= MAX_QUBITS);
        assert!(n == 64 || (x | z) < (1u64 << n), "mask exceeds qubit count");
        let phase = ((x & z).count_ones() as u8) & 3;
        PauliString { n, x, z, phase }
    }

    /// Parse e.g. "XZZXI" or "-XIXZZ" (qubit 0 is the leftmost letter).
    pub fn parse(s: &str) -> Result<Self> {
        let (sign_minus, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let n = body.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Config(format!("bad Pauli string length in {s:?}")));
        }
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' | '_' | '.' => {}
                'X' => x |= 1 << q,
                'Y' => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                'Z' => z |= 1 << q,
                other => return Err(Error::Config(format!("bad Pauli letter {other:?} in {s:?}"))),
            }
        }
        let mut p = Self::from_masks(n, x, z);
        if sign_minus {
            p = p.negated();
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0 && self.phase == 0
    }

    /// True when the operator equals a ±1-signed tensor product of literal Paulis.
    pub fn is_hermitian(&self) -> bool {
        (self.phase ^ (self.x & self.z).count_ones() as u8) & 1 == 0
    }

    /// Sign of a Hermitian operator: +1 or -1.
    pub fn sign(&self) -> i8 {
        debug_assert!(self.is_hermitian());
        let rel = (self.phase as i32 - ((self.x & self.z).count_ones() as i32)).rem_euclid(4);
        if rel == 0 {
            1
        } else {
            -1
        }
    }

    pub fn negated(&self) -> Self {
        PauliString { phase: (self.phase + 2) & 3, ..*self }
    }

    pub fn with_sign(&self, sign: i8) -> Self {
        if self.sign() == sign {
            *self
        } else {
            self.negated()
        }
    }

    /// Same operator up to sign, with sign forced to +1.
    pub fn unsigned(&self) -> Self {
        self.with_sign(1)
    }

    /// Literal Pauli letter on qubit `q`, ignoring the overall sign.
    pub fn axis_on(&self, q: usize) -> Option<PauliAxis> {
        let xb = (self.x >> q) & 1;
        let zb = (self.z >> q) & 1;
        match (xb, zb) {
            (0, 0) => None,
            (1, 0) => Some(PauliAxis::X),
            (1, 1) => Some(PauliAxis::Y),
            (0, 1) => Some(PauliAxis::Z),
            _ => unreachable!(),
        }
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.n, other.n);
        let a = (self.x & other.z).count_ones();
        let b = (self.z & other.x).count_ones();
        (a ^ b) & 1 == 0
    }

    pub fn anticommutes(&self, other: &PauliString) -> bool {
        !self.commutes(other)
    }

    /// Group product with exact phase tracking:
    /// `(i^p X^x1 Z^z1)(i^q X^x2 Z^z2) = i^(p+q+2|z1&x2|) X^(x1^x2) Z^(z1^z2)`.
    pub fn mul(&self, rhs: &PauliString) -> PauliString {
        debug_assert_eq!(self.n, rhs.n);
        let cross = (self.z & rhs.x).count_ones() as u8;
        PauliString {
            n: self.n,
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
            phase: (self.phase + rhs.phase + 2 * cross) & 3,
        }
    }

    /// Conjugation `g P g†` by a Clifford gate, in place.
    pub fn conjugate_by(&mut self, gate: CliffordOp) {
        match gate {
            CliffordOp::H(k) => {
                let bit = 1u64 << k;
                let xk = self.x & bit;
                let zk = self.z & bit;
                if xk != 0 && zk != 0 {
                    self.phase = (self.phase + 2) & 3;
                }
                self.x = (self.x & !bit) | zk;
                self.z = (self.z & !bit) | xk;
            }
            CliffordOp::S(k) => {
                let bit = 1u64 << k;
                if self.x & bit != 0 {
                    self.z ^= bit;
                    self.phase = (self.phase + 1) & 3;
                }
            }
            CliffordOp::Sdg(k) => {
                let bit = 1u64 << k;
                if self.x & bit != 0 {
                    self.z ^= bit;
                    self.phase = (self.phase + 3) & 3;
                }
            }
            CliffordOp::X(k) => {
                if self.z & (1 << k) != 0 {
                    self.phase = (self.phase + 2) & 3;
                }
            }
            CliffordOp::Y(k) => {
                let bit = 1u64 << k;
                if ((self.x ^ self.z) & bit) != 0 {
                    self.phase = (self.phase + 2) & 3;
                }
            }
            CliffordOp::Z(k) => {
                if self.x & (1 << k) != 0 {
                    self.phase = (self.phase + 2) & 3;
                }
            }
            CliffordOp::Cnot(c, t) => {
                let cb = 1u64 << c;
                let tb = 1u64 << t;
                if self.x & cb != 0 {
                    self.x ^= tb;
                }
                if self.z & tb != 0 {
                    self.z ^= cb;
                }
            }
            CliffordOp::Cz(a, b) => {
                let ab = 1u64 << a;
                let bb = 1u64 << b;
                if self.x & ab != 0 && self.x & bb != 0 {
                    self.phase = (self.phase + 2) & 3;
                }
                if self.x & ab != 0 {
                    self.z ^= bb;
                }
                if self.x & bb != 0 {
                    self.z ^= ab;
                }
            }
        }
    }

    pub fn conjugated_by(&self, gate: CliffordOp) -> PauliString {
        let mut p = *self;
        p.conjugate_by(gate);
        p
    }

    /// Conjugate through a gate sequence, in circuit order.
    pub fn conjugated_through(&self, gates: &[CliffordOp]) -> PauliString {
        let mut p = *self;
        for &g in gates {
            p.conjugate_by(g);
        }
        p
    }
}

impl fmt::Debug for PauliString {
    fmt_pauli!();
}

macro_rules! unused {
    () => {};
}
unused!();

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_hermitian() {
            write!(f, "{}", if self.sign() > 0 { "+" } else { "-" })?;
        } else {
            write!(f, "i^{}·", self.phase)?;
        }
        for q in 0..self.n {
            let c = match self.axis_on(q) {
                None => 'I',
                Some(PauliAxis::X) => 'X',
                Some(PauliAxis::Y) => 'Y',
                Some(PauliAxis::Z) => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// One- or two-qubit Clifford gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliffordOp {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl CliffordOp {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            CliffordOp::H(q)
            | CliffordOp::S(q)
            | CliffordOp::Sdg(q)
            | CliffordOp::X(q)
            | CliffordOp::Y(q)
            | CliffordOp::Z(q) => (q, None),
            CliffordOp::Cnot(a, b) | CliffordOp::Cz(a, b) => (a, Some(b)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, CliffordOp::Cnot(..) | CliffordOp::Cz(..))
    }

    pub fn inverse(&self) -> CliffordOp {
        match *self {
            CliffordOp::S(q) => CliffordOp::Sdg(q),
            CliffordOp::Sdg(q) => CliffordOp::S(q),
            other => other,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        if a >= n || b.is_some_and(|b| b >= n) {
            return Err(Error::Config(format!("gate {self:?} targets qubit out of range (n={n})")));
        }
        if let Some(b) = b {
            if a == b {
                return Err(Error::Config(format!("gate {self:?} needs distinct qubits")));
            }
        }
        Ok(())
    }
}

/// Pure stabilizer state of `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    /// Rows 0..n are destabilizers, rows n..2n stabilizers.
    rows: Vec<PauliString>,
}

impl StabilizerTableau {
    /// |0...0⟩: stabilizers Z_i, destabilizers X_i.
    pub fn zero_state(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_QUBITS);
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            rows.push(PauliString::single(n, q, PauliAxis::X));
        }
        for q in 0..n {
            rows.push(PauliString::single(n, q, PauliAxis::Z));
        }
        StabilizerTableau { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizer(&self, i: usize) -> &PauliString {
        &self.rows[self.n + i]
    }

    pub fn destabilizer(&self, i: usize) -> &PauliString {
        &self.rows[i]
    }

    pub fn apply_clifford(&mut self, gate: CliffordOp) -> Result<()> {
        gate.validate(self.n)?;
        for row in &mut self.rows {
            row.conjugate_by(gate);
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, gates: &[CliffordOp]) -> Result<()> {
        for &g in gates {
            self.apply_clifford(g)?;
        }
        Ok(())
    }

    /// Apply a Pauli operator: rows anticommuting with `p` flip sign.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::Config(format!(
                "Pauli on {} qubits applied to {}-qubit tableau",
                p.n(),
                self.n
            )));
        }
        for row in &mut self.rows {
            if row.anticommutes(p) {
                *row = row.negated();
            }
        }
        Ok(())
    }

    /// Measure the Hermitian Pauli `p`. Returns ±1 (relative to `p` as given,
    /// including its sign). A random outcome consumes exactly one RNG draw.
    pub fn measure(&mut self, p: &PauliString, rng: &mut impl rand::Rng) -> i8 {
        assert_eq!(p.n(), self.n, "operator size mismatch");
        assert!(p.is_hermitian(), "measurement operator must be Hermitian");
        let n = self.n;
        let pivot = (0..n).find(|&i| self.rows[n + i].anticommutes(p));
        match pivot {
            Some(q) => {
                // Random outcome: project and replace the pivot row.
                let pivot_row = self.rows[n + q];
                for r in 0..2 * n {
                    if r != n + q && self.rows[r].anticommutes(p) {
                        self.rows[r] = pivot_row.mul(&self.rows[r]);
                    }
                }
                let outcome: i8 = if rng.gen::<bool>() { 1 } else { -1 };
                self.rows[q] = pivot_row;
                self.rows[n + q] = p.with_sign(p.sign() * outcome);
                outcome
            }
            None => self.deterministic_outcome(p),
        }
    }

    /// Outcome of measuring `p` when `p` commutes with every stabilizer.
    fn deterministic_outcome(&self, p: &PauliString) -> i8 {
        let n = self.n;
        let mut prod = PauliString::identity(n);
        for i in 0..n {
            if self.rows[i].anticommutes(p) {
                prod = prod.mul(&self.rows[n + i]);
            }
        }
        debug_assert_eq!(prod.x_bits(), p.x_bits(), "operator not in stabilizer group");
        debug_assert_eq!(prod.z_bits(), p.z_bits(), "operator not in stabilizer group");
        if prod.sign() == p.sign() {
            1
        } else {
            -1
        }
    }

    /// Whether `p` (with its sign) stabilizes the current state.
    pub fn is_stabilized_by(&self, p: &PauliString) -> bool {
        let n = self.n;
        if (0..n).any(|i| self.rows[n + i].anticommutes(p)) {
            return false;
        }
        self.deterministic_outcome(p) == 1
    }

    /// Deterministic measurement outcome if there is one.
    pub fn expectation(&self, p: &PauliString) -> Option<i8> {
        let n = self.n;
        if (0..n).any(|i| self.rows[n + i].anticommutes(p)) {
            None
        } else {
            Some(self.deterministic_outcome(p))
        }
    }

    pub fn measure_axis(&mut self, q: usize, axis: PauliAxis, rng: &mut impl rand::Rng) -> i8 {
        let p = PauliString::single(self.n, q, axis);
        self.measure(&p, rng)
    }

    /// Deterministically reset qubit `q` to |0⟩ (measure Z, flip on -1).
    pub fn reset_to_zero(&mut self, q: usize, rng: &mut impl rand::Rng) {
        if self.measure_axis(q, PauliAxis::Z, rng) < 0 {
            let x = PauliString::single(self.n, q, PauliAxis::X);
            self.apply_pauli(&x).expect("in range");
        }
    }

    /// Deterministically reset qubit `q` to |+⟩ (measure X, fix with Z on -1).
    pub fn reset_to_plus(&mut self, q: usize, rng: &mut impl rand::Rng) {
        if self.measure_axis(q, PauliAxis::X, rng) < 0 {
            let z = PauliString::single(self.n, q, PauliAxis::Z);
            self.apply_pauli(&z).expect("in range");
        }
    }
}
