//! 2-adic classification of cycle lengths and the sum-of-two-squares
//! certificate against exact instantaneous uniform mixing on even cycles.
//!
//! If `C_n` (`n` even) were exactly uniform at some time, every amplitude
//! would be `±1/√n` (even vertices) or `±i/√n` (odd vertices). The even and
//! odd amplitude sums are `cos 2t` and `-i sin 2t`, which forces
//! `(n - 4k)² + (n - 4ℓ)² = 4n` where `k` and `ℓ` count the negative even and
//! odd amplitudes. No solution means no uniform time.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// `n = 2^u`, `u >= 3`.
    ProvenNotIumPowerOfTwo,
    /// `n = 2^u q`, `u >= 1`, `q ≡ 3 (mod 4)`.
    ProvenNotIumQThreeMod4,
    /// Outside both 2-adic cases, but the certificate equation has no
    /// solution.
    ProvenNotIumDiophantineEmpty,
    /// `C_2` mixes uniformly at `t = π/8`.
    KnownUniformC2,
    Open,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ProvenNotIumPowerOfTwo => "ProvenNotIUM_PowerOfTwo",
            Verdict::ProvenNotIumQThreeMod4 => "ProvenNotIUM_QThreeMod4",
            Verdict::ProvenNotIumDiophantineEmpty => "ProvenNotIUM_DiophantineEmpty",
            Verdict::KnownUniformC2 => "KnownUniform_C2",
            Verdict::Open => "Open",
        }
    }

    pub fn is_proven_not_uniform(self) -> bool {
        matches!(
            self,
            Verdict::ProvenNotIumPowerOfTwo
                | Verdict::ProvenNotIumQThreeMod4
                | Verdict::ProvenNotIumDiophantineEmpty
        )
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixingVerdict {
    pub n: u64,
    pub u: u32,
    pub q: u64,
    pub verdict: Verdict,
    /// Solutions `(k, ℓ)`; present whenever it was computed (even `n`).
    pub certificate: Option<Vec<(u64, u64)>>,
}

/// `n = 2^u · q` with `q` odd.
pub fn two_adic_split(n: u64) -> Result<(u32, u64)> {
    if n < 1 {
        return invalid("two_adic_split needs n >= 1");
    }
    let u = n.trailing_zeros();
    Ok((u, n >> u))
}

/// All `(k, ℓ)` with `0 <= k, ℓ <= n/2` and `(n - 4k)² + (n - 4ℓ)² = 4n`,
/// ascending lexicographically.
pub fn diophantine_certificate(n: u64) -> Result<Vec<(u64, u64)>> {
    if n < 2 || !n.is_multiple_of(2) {
        return invalid(format!("certificate needs even n >= 2, got {n}"));
    }
    if n > i64::MAX as u64 / 4 {
        return invalid(format!("n = {n} is too large for exact arithmetic"));
    }
    let n_i = n as i128;
    let target = 4 * n_i;
    let half = n / 2;
    let mut out = Vec::new();
    for k in 0..=half {
        let a = n_i - 4 * k as i128;
        let rest = target - a * a;
        if rest < 0 {
            continue;
        }
        let b = (rest as u128).isqrt() as i128;
        if b * b != rest {
            continue;
        }
        let mut ls: Vec<u64> = [b, -b]
            .iter()
            .filter_map(|&bs| {
                let diff = n_i - bs;
                (diff % 4 == 0 && diff >= 0 && diff / 4 <= half as i128).then_some((diff / 4) as u64)
            })
            .collect();
        ls.sort_unstable();
        ls.dedup();
        out.extend(ls.into_iter().map(|l| (k, l)));
    }
    Ok(out)
}

/// Decision order: `n = 2`; power-of-two case; `q ≡ 3 (mod 4)` case; empty
/// certificate; otherwise open.
pub fn classify_cycle(n: u64) -> Result<MixingVerdict> {
    if n < 2 {
        return invalid(format!("cycle needs n >= 2, got {n}"));
    }
    let (u, q) = two_adic_split(n)?;
    let certificate = if n.is_multiple_of(2) {
        Some(diophantine_certificate(n)?)
    } else {
        None
    };
    let verdict = if n == 2 {
        Verdict::KnownUniformC2
    } else if u >= 3 && q == 1 {
        Verdict::ProvenNotIumPowerOfTwo
    } else if u >= 1 && q % 4 == 3 {
        Verdict::ProvenNotIumQThreeMod4
    } else if certificate.as_ref().is_some_and(Vec::is_empty) {
        Verdict::ProvenNotIumDiophantineEmpty
    } else {
        Verdict::Open
    };
    Ok(MixingVerdict {
        n,
        u,
        q,
        verdict,
        certificate,
    })
}
