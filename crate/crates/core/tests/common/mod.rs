//! Plain-integer model of the toy suite, written without the library's
//! types, used to cross-check it.
#![allow(dead_code)]

pub const Q: u64 = 11;
pub const MODULUS: u64 = 23;
pub const GEN: u64 = 2;

/// Repeated multiplication, deliberately naive.
pub fn pow_mod(base: u64, exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    for _ in 0..exp {
        acc = acc * (base % m) % m;
    }
    acc
}

pub fn pair(a: u64, b: u64) -> u64 {
    pow_mod(GEN, (a % Q) * (b % Q) % Q, MODULUS)
}

/// Byte sum mod 11 with zero sent to one; models both toy H1 and H2.
pub fn byte_hash(bytes: &[u8]) -> u64 {
    let s = bytes.iter().map(|&b| b as u64).sum::<u64>() % Q;
    if s == 0 {
        1
    } else {
        s
    }
}

pub fn xor(key: u8, data: &[u8]) -> Vec<u8> {
    data.iter().map(|b| b ^ key).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub h2: u64,
    pub shares: Vec<u64>,
    pub aggregate: u64,
    pub proxy_keys: Vec<u64>,
    pub commitments: Vec<u64>,
    pub k: u8,
    pub c: Vec<u8>,
    pub r_p: u64,
    pub partials: Vec<u64>,
    pub u_p: u64,
    pub s: u64,
}

/// Honest run over explicit secrets; `warrant` supplies only the bytes to hash.
pub fn model(x_a: &[u64], x_p: &[u64], x_c: u64, t: &[u64], warrant: &[u8], m: &[u8]) -> Model {
    let h2 = byte_hash(warrant);
    let shares: Vec<u64> = x_a.iter().map(|x| x * h2 % Q).collect();
    let aggregate = shares.iter().sum::<u64>() % Q;
    let proxy_keys: Vec<u64> = x_p.iter().map(|x| (aggregate + x * h2) % Q).collect();
    let commitments: Vec<u64> = t.iter().map(|tj| pow_mod(pair(1, x_c), *tj, MODULUS)).collect();
    let k = commitments.iter().fold(1, |acc, r| acc * r % MODULUS) as u8;
    let c = xor(k, m);
    let mut ck = c.clone();
    ck.push(k);
    let r_p = byte_hash(&ck);
    let partials: Vec<u64> = t.iter().zip(&proxy_keys).map(|(tj, s)| (tj + Q * Q - r_p * s % Q) % Q).collect();
    let u_p = partials.iter().sum::<u64>() % Q;
    let s = x_p.len() as u64 * aggregate % Q;
    Model { h2, shares, aggregate, proxy_keys, commitments, k, c, r_p, partials, u_p, s }
}

/// Recipient-side key from package fields.
pub fn recover(u_p: u64, s: u64, r_p: u64, h2: u64, y_p: &[u64], x_c: u64) -> u8 {
    let y_c = x_c % Q;
    let sum_y = y_p.iter().sum::<u64>() % Q;
    let f1 = pair(u_p, y_c);
    let f2 = pow_mod(pair(s, y_c), r_p, MODULUS);
    let f3 = pow_mod(pair(h2, sum_y), r_p * x_c, MODULUS);
    (f1 * f2 % MODULUS * f3 % MODULUS) as u8
}

#[test]
fn model_reproduces_hand_values() {
    assert_eq!(pair(1, 6), 18);
    assert_eq!(pow_mod(pair(6, 6), 3, MODULUS), 6);
    assert_eq!(pow_mod(pair(5, 2), 18, MODULUS), 16);
    assert_eq!(recover(1, 6, 3, 5, &[2], 6), 3);
}
