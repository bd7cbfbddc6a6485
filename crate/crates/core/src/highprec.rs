//! Arbitrary-precision evaluation context for the literal pathway.
//!
//! [`HighCtx`] evaluates the indicator product exactly the way the naive f64
//! pathway does — `sin((n+j)·π/m)` at the full, unreduced argument, squared,
//! divided by `sin²(jπ/m)`, multiplied up in ascending `j` — but every
//! arithmetic operation rounds to a caller-chosen mantissa width instead of
//! 53 bits. The integer argument `n + j` is always represented exactly (it
//! fits in one 64-bit word); rounding begins with the multiplication by π.
//!
//! The backend does not expose a public conversion to f64, so [`to_f64`]
//! reads the normalized raw parts: the value of a finite nonzero number is
//! `sign · 0.mantissa · 2^exponent` with the mantissa stored little-endian
//! and its top bit set.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Nearest-f64 conversion (diagnostic fidelity: correct to within one ulp).
pub(crate) fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _p, sign, exp, _inexact)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // Top 128 mantissa bits are more than enough for a 53-bit result.
    let nw = words.len();
    let hi = words[nw - 1] as u128;
    let lo = if nw >= 2 { words[nw - 2] as u128 } else { 0 };
    let frac = (hi << 64) | lo; // in [2^127, 2^128) because normalized
    let mag = scale_pow2(frac as f64, exp as i64 - 128);
    if matches!(sign, Sign::Neg) {
        -mag
    } else {
        mag
    }
}

/// `x · 2^e`, splitting the scale into two power-of-two factors when `2^e`
/// itself falls outside f64 range — a value like 1e-300 needs `e ≈ -1124`
/// even though the product is an ordinary normal number. Each factor
/// multiply is exact unless the running result over- or underflows, so the
/// only extra rounding happens when the final product is subnormal.
fn scale_pow2(x: f64, e: i64) -> f64 {
    if (-1022..=1023).contains(&e) {
        return x * (2.0f64).powi(e as i32);
    }
    let e = e.clamp(-2400, 2400);
    let h = (e / 2) as i32;
    (x * (2.0f64).powi(h)) * (2.0f64).powi((e - e / 2) as i32)
}

/// Per-modulus context for high-precision evaluation.
pub(crate) struct HighCtx {
    m: u64,
    /// Working mantissa width in bits.
    bits: usize,
    /// Construction width for exact integers: at least one full word.
    arg_p: usize,
    pi: BigFloat,
    m_big: BigFloat,
    half: BigFloat,
    one: BigFloat,
    /// `den[j-1] = sin²(jπ/m)` at `bits` precision, `j` in `1..m`.
    den: Vec<BigFloat>,
    cc: Consts,
}

impl HighCtx {
    pub fn new(m: u64, precision_bits: u32) -> Self {
        let bits = precision_bits as usize;
        let arg_p = bits.max(64);
        let mut cc = Consts::new().expect("allocate constants cache");
        let pi = cc.pi(bits, RM);
        let m_big = BigFloat::from_u64(m, arg_p);
        let mut den = Vec::with_capacity((m - 1) as usize);
        for j in 1..m {
            den.push(sin_sq_int(j, &pi, &m_big, bits, arg_p, &mut cc));
        }
        HighCtx {
            m,
            bits,
            arg_p,
            pi,
            m_big,
            half: BigFloat::from_f64(0.5, arg_p),
            one: BigFloat::from_u64(1, arg_p),
            den,
            cc,
        }
    }

    pub fn denominator(&self, j: u64) -> &BigFloat {
        &self.den[(j - 1) as usize]
    }

    /// `sin²(kπ/m)` at working precision, `k` represented exactly.
    pub fn sin_sq_of_int(&mut self, k: u64) -> BigFloat {
        sin_sq_int(k, &self.pi, &self.m_big, self.bits, self.arg_p, &mut self.cc)
    }

    /// Multiply a ratio into a running product; shared by the one-shot
    /// evaluator and the windowed scanner so both produce identical values.
    pub fn accumulate(&self, raw: BigFloat, num: &BigFloat, j: u64) -> BigFloat {
        let ratio = num.div(self.denominator(j), self.bits, RM);
        raw.mul(&ratio, self.bits, RM)
    }

    pub fn one(&self) -> BigFloat {
        self.one.clone()
    }

    /// The ½-threshold rule applied to the full-precision product.
    pub fn classify(&self, raw: &BigFloat) -> u8 {
        match raw.partial_cmp(&self.half) {
            Some(std::cmp::Ordering::Greater) => 0,
            _ => 1,
        }
    }

    /// Raw product for one `n`, with factors in ascending `j`.
    pub fn eval(&mut self, n: u64) -> BigFloat {
        let mut raw = self.one();
        for j in 1..self.m {
            let num = self.sin_sq_of_int(n + j);
            raw = self.accumulate(raw, &num, j);
        }
        raw
    }
}

fn sin_sq_int(
    k: u64,
    pi: &BigFloat,
    m_big: &BigFloat,
    bits: usize,
    arg_p: usize,
    cc: &mut Consts,
) -> BigFloat {
    let arg = BigFloat::from_u64(k, arg_p).mul(pi, bits, RM).div(m_big, bits, RM);
    let s = arg.sin(bits, RM, cc);
    s.mul(&s, bits, RM)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn to_f64_round_trips_exact_values() {
        for &x in &[
            0.0,
            0.5,
            1.0,
            -2.5,
            0.3454915028125263,
            123456789.75,
            1e-300,
            8.5e307,
            -3.1e-308,
        ] {
            let b = BigFloat::from_f64(x, 128);
            assert_eq!(to_f64(&b), x, "round trip failed for {x}");
        }
    }

    #[test]
    fn to_f64_handles_integers_and_specials() {
        for k in [0u64, 1, 2, 3, 97, 1 << 52, (1 << 53) - 1] {
            let b = BigFloat::from_u64(k, 64);
            assert_eq!(to_f64(&b), k as f64);
        }
        assert!(to_f64(&BigFloat::nan(None)).is_nan());
    }

    #[test]
    fn sin_sq_matches_known_value() {
        // sin²(6π/5) = sin²(π/5) = (5 − √5)/8 = 0.34549150281252633...
        let mut ctx = HighCtx::new(5, 128);
        let v = to_f64(&ctx.sin_sq_of_int(6));
        assert!((v - 0.34549150281252633).abs() < 1e-15, "got {v}");
        // sin²(7π/5) = sin²(2π/5) = (5 + √5)/8 = 0.9045084971874737...
        let w = to_f64(&ctx.sin_sq_of_int(7));
        assert!((w - 0.9045084971874737).abs() < 1e-15, "got {w}");
    }

    #[test]
    fn classify_thresholds() {
        let ctx = HighCtx::new(3, 64);
        assert_eq!(ctx.classify(&BigFloat::from_f64(1.0, 64)), 0);
        assert_eq!(ctx.classify(&BigFloat::from_f64(0.6, 64)), 0);
        assert_eq!(ctx.classify(&BigFloat::from_f64(0.5, 64)), 1);
        assert_eq!(ctx.classify(&BigFloat::from_f64(1e-30, 64)), 1);
        assert_eq!(ctx.classify(&BigFloat::from_u64(0, 64)), 1);
    }

    #[test]
    fn denominator_product_matches_closed_form() {
        // ∏_{j=1}^{m−1} sin²(jπ/m) = m²/4^(m−1), the squared form of the
        // classical identity ∏ sin(jπ/m) = m/2^(m−1). Checked at 256 bits,
        // demanding ~60 decimal digits of agreement — far beyond anything an
        // accidental cancellation could produce.
        let bits = 256;
        for &m in &[5u64, 7, 97, 256] {
            let ctx = HighCtx::new(m, bits as u32);
            let mut prod = BigFloat::from_u64(1, bits);
            for j in 1..m {
                prod = prod.mul(ctx.denominator(j), bits, RM);
            }
            // 2^(2(m−1)) ≤ 2^510 is exactly representable in f64.
            let pow = BigFloat::from_f64((2.0f64).powi(2 * (m as i32 - 1)), bits);
            let expected = BigFloat::from_u64(m * m, bits).div(&pow, bits, RM);
            let ratio = prod.div(&expected, bits, RM);
            let err = to_f64(&ratio.sub(&ctx.one(), bits, RM)).abs();
            assert!(err < 1e-60, "m={m}: relative defect {err:e}");
        }
    }

    #[test]
    fn eval_is_exactly_selfconsistent_on_multiples() {
        // For m | n the numerator arguments are n+j ≡ j (mod 2m) only after
        // reduction, which this pathway deliberately does not perform; the
        // product should still land extremely close to 1.
        let mut ctx = HighCtx::new(7, 96);
        let raw = ctx.eval(70);
        assert_eq!(ctx.classify(&raw), 0);
        let dev = (to_f64(&raw) - 1.0).abs();
        assert!(dev < 1e-20, "deviation {dev}");
    }
}
