//! Elementary integer arithmetic shared by the rest of the crate.

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    gcd(a as i128, b as i128) as u64
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_u64(a, b) * b
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (g, s, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Splits `n` into its `p`-part and prime-to-`p` part.
pub fn split_p_part(mut n: u64, p: u64) -> (u64, u64) {
    let mut pp = 1;
    while n % p == 0 {
        n /= p;
        pp *= p;
    }
    (pp, n)
}

pub fn is_p_power(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if gcd_u64(a, m) != 1 {
        return None;
    }
    if m == 1 {
        return Some(1);
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * a as u128 % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Smallest generator of `(Z/p^2)^*` for an odd prime `p`; it generates `(Z/p^k)^*` for every k.
pub fn primitive_root_p2(p: u64) -> u64 {
    let m = p * p;
    let phi = p * (p - 1);
    (2..m)
        .find(|&g| multiplicative_order(g, m) == Some(phi))
        .expect("odd prime powers have primitive roots")
}

/// Chinese remaindering of `a mod m` and `b mod n` for coprime moduli.
pub fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    debug_assert_eq!(gcd_u64(m, n), 1);
    if m == 1 {
        return b % n;
    }
    if n == 1 {
        return a % m;
    }
    let inv = mod_inv(m % n, n).expect("coprime moduli");
    let mn = m as u128 * n as u128;
    let diff = ((b as i128 - a as i128).rem_euclid(n as i128)) as u128;
    let k = diff * inv as u128 % n as u128;
    ((a as u128 + m as u128 * k) % mn) as u64
}

pub fn units(m: u64) -> Vec<u64> {
    (0..m).filter(|&x| m > 1 && gcd_u64(x, m) == 1).collect()
}
