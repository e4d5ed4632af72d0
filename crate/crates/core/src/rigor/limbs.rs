//! Little-endian `u64` limb arithmetic on natural numbers.
//!
//! Every function here treats its inputs as unsigned magnitudes and returns
//! normalized vectors (no most-significant zero limbs). Zero is the empty
//! vector.

use core::cmp::Ordering;

use smallvec::SmallVec;

pub(crate) type Limbs = SmallVec<[u64; 2]>;

#[inline]
pub(crate) fn normalize(v: &mut Limbs) {
    while let Some(&0) = v.last() {
        v.pop();
    }
}

#[inline]
pub(crate) fn from_u128(x: u128) -> Limbs {
    let mut v = Limbs::new();
    if x != 0 {
        v.push(x as u64);
        if (x >> 64) != 0 {
            v.push((x >> 64) as u64);
        }
    }
    v
}

#[inline]
pub(crate) fn bit_len(a: &[u64]) -> u64 {
    match a.last() {
        None => 0,
        Some(&top) => (a.len() as u64 - 1) * 64 + (64 - u64::from(top.leading_zeros())),
    }
}

pub(crate) fn cmp(a: &[u64], b: &[u64]) -> Ordering {
    if a.len() != b.len() {
        return a.len().cmp(&b.len());
    }
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

pub(crate) fn add(a: &[u64], b: &[u64]) -> Limbs {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = Limbs::with_capacity(long.len() + 1);
    let mut carry = 0u64;
    for i in 0..long.len() {
        let y = if i < short.len() { short[i] } else { 0 };
        let (s1, c1) = long[i].overflowing_add(y);
        let (s2, c2) = s1.overflowing_add(carry);
        out.push(s2);
        carry = u64::from(c1) + u64::from(c2);
    }
    if carry != 0 {
        out.push(carry);
    }
    out
}

/// `a - b`; requires `a >= b`.
pub(crate) fn sub(a: &[u64], b: &[u64]) -> Limbs {
    debug_assert!(cmp(a, b) != Ordering::Less);
    let mut out = Limbs::with_capacity(a.len());
    let mut borrow = 0u64;
    for i in 0..a.len() {
        let y = if i < b.len() { b[i] } else { 0 };
        let (d1, b1) = a[i].overflowing_sub(y);
        let (d2, b2) = d1.overflowing_sub(borrow);
        out.push(d2);
        borrow = u64::from(b1) + u64::from(b2);
    }
    debug_assert_eq!(borrow, 0);
    normalize(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64]) -> Limbs {
    if a.is_empty() || b.is_empty() {
        return Limbs::new();
    }
    if a.len() == 1 && b.len() == 1 {
        return from_u128(u128::from(a[0]) * u128::from(b[0]));
    }
    let mut out: Limbs = smallvec::smallvec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        let mut carry = 0u128;
        for (j, &y) in b.iter().enumerate() {
            let cur = u128::from(out[i + j]) + u128::from(x) * u128::from(y) + carry;
            out[i + j] = cur as u64;
            carry = cur >> 64;
        }
        out[i + b.len()] = carry as u64;
    }
    normalize(&mut out);
    out
}

pub(crate) fn mul_small(a: &[u64], m: u64) -> Limbs {
    if m == 0 || a.is_empty() {
        return Limbs::new();
    }
    let mut out = Limbs::with_capacity(a.len() + 1);
    let mut carry = 0u128;
    for &x in a {
        let cur = u128::from(x) * u128::from(m) + carry;
        out.push(cur as u64);
        carry = cur >> 64;
    }
    if carry != 0 {
        out.push(carry as u64);
    }
    out
}

pub(crate) fn shl(a: &[u64], bits: u64) -> Limbs {
    if a.is_empty() {
        return Limbs::new();
    }
    let limb_shift = (bits / 64) as usize;
    let bit_shift = (bits % 64) as u32;
    let mut out = Limbs::with_capacity(a.len() + limb_shift + 1);
    out.extend(core::iter::repeat_n(0, limb_shift));
    if bit_shift == 0 {
        out.extend_from_slice(a);
    } else {
        let mut carry = 0u64;
        for &x in a {
            out.push((x << bit_shift) | carry);
            carry = x >> (64 - bit_shift);
        }
        if carry != 0 {
            out.push(carry);
        }
    }
    out
}

/// Shift right by `bits`, reporting whether any discarded bit was set.
pub(crate) fn shr_sticky(a: &[u64], bits: u64) -> (Limbs, bool) {
    let limb_shift = (bits / 64) as usize;
    if limb_shift >= a.len() {
        return (Limbs::new(), !a.is_empty());
    }
    let bit_shift = (bits % 64) as u32;
    let mut sticky = a[..limb_shift].iter().any(|&x| x != 0);
    let rest = &a[limb_shift..];
    let mut out = Limbs::with_capacity(rest.len());
    if bit_shift == 0 {
        out.extend_from_slice(rest);
    } else {
        sticky |= (rest[0] & ((1u64 << bit_shift) - 1)) != 0;
        for i in 0..rest.len() {
            let hi = if i + 1 < rest.len() { rest[i + 1] << (64 - bit_shift) } else { 0 };
            out.push((rest[i] >> bit_shift) | hi);
        }
        normalize(&mut out);
    }
    (out, sticky)
}

/// Quotient and remainder by a single nonzero limb.
pub(crate) fn divrem_small(a: &[u64], d: u64) -> (Limbs, u64) {
    debug_assert!(d != 0);
    let mut q: Limbs = smallvec::smallvec![0u64; a.len()];
    let mut rem = 0u128;
    for i in (0..a.len()).rev() {
        let cur = (rem << 64) | u128::from(a[i]);
        q[i] = (cur / u128::from(d)) as u64;
        rem = cur % u128::from(d);
    }
    normalize(&mut q);
    (q, rem as u64)
}

/// Floor division `a / b` with an inexactness flag. `b` must be nonzero.
pub(crate) fn div_floor(a: &[u64], b: &[u64]) -> (Limbs, bool) {
    debug_assert!(!b.is_empty());
    if b.len() == 1 {
        let (q, r) = divrem_small(a, b[0]);
        return (q, r != 0);
    }
    if cmp(a, b) == Ordering::Less {
        return (Limbs::new(), !a.is_empty());
    }
    if a.len() <= 2 {
        let x = to_u128(a);
        let y = to_u128(b);
        return (from_u128(x / y), x % y != 0);
    }
    // Schoolbook binary long division; operands here are at most a few
    // hundred bits so the quadratic bit loop is acceptable.
    let nbits = bit_len(a);
    let mut q: Limbs = smallvec::smallvec![0u64; a.len()];
    let mut r = Limbs::new();
    for i in (0..nbits).rev() {
        r = shl(&r, 1);
        if (a[(i / 64) as usize] >> (i % 64)) & 1 == 1 {
            if r.is_empty() {
                r.push(1);
            } else {
                r[0] |= 1;
            }
        }
        if cmp(&r, b) != Ordering::Less {
            r = sub(&r, b);
            q[(i / 64) as usize] |= 1u64 << (i % 64);
        }
    }
    normalize(&mut q);
    (q, !r.is_empty())
}

/// Floor square root with an inexactness flag.
pub(crate) fn isqrt(a: &[u64]) -> (Limbs, bool) {
    if a.is_empty() {
        return (Limbs::new(), false);
    }
    if a.len() <= 2 {
        let x = to_u128(a);
        let mut y = isqrt_u128(x);
        while y * y > x {
            y -= 1;
        }
        while (y + 1) * (y + 1) <= x {
            y += 1;
        }
        return (from_u128(y), y * y != x);
    }
    // Digit-by-digit binary method.
    let nbits = bit_len(a);
    let mut bit = (nbits - 1) & !1;
    let mut rem: Limbs = a.iter().copied().collect();
    let mut res = Limbs::new();
    loop {
        let trial = add(&res, &shl(&[1], bit));
        if cmp(&rem, &trial) != Ordering::Less {
            rem = sub(&rem, &trial);
            res = add(&shr_sticky(&res, 1).0, &shl(&[1], bit));
        } else {
            res = shr_sticky(&res, 1).0;
        }
        if bit < 2 {
            break;
        }
        bit -= 2;
    }
    (res, !rem.is_empty())
}

fn isqrt_u128(x: u128) -> u128 {
    if x == 0 {
        return 0;
    }
    // Newton from a power-of-two overestimate.
    let shift = (128 - x.leading_zeros()).div_ceil(2);
    let mut y = 1u128 << shift;
    loop {
        let z = (y + x / y) >> 1;
        if z >= y {
            return y;
        }
        y = z;
    }
}

#[inline]
pub(crate) fn to_u128(a: &[u64]) -> u128 {
    match a.len() {
        0 => 0,
        1 => u128::from(a[0]),
        _ => u128::from(a[0]) | (u128::from(a[1]) << 64),
    }
}

/// The top 64 significant bits of `a` (left-aligned) and whether anything
/// below them is nonzero. For `bit_len(a) <= 64` the value is returned as-is.
pub(crate) fn top64(a: &[u64]) -> (u64, bool) {
    let bl = bit_len(a);
    if bl <= 64 {
        return (a.first().copied().unwrap_or(0), false);
    }
    let (v, sticky) = shr_sticky(a, bl - 64);
    (v[0], sticky)
}
