//! Independent reference models shared by the integration tests.

#![allow(dead_code)]

/// `F^{(x)n}` over GF(2), built by repeated Kronecker products of
/// `F = [[1,0],[1,1]]`. Row-major, entries 0/1.
pub fn kronecker_generator(n: u32) -> Vec<Vec<u8>> {
    let kernel = [[1u8, 0], [1, 1]];
    let mut g = vec![vec![1u8]];
    for _ in 0..n {
        let size = g.len();
        let mut next = vec![vec![0u8; size * 2]; size * 2];
        for (kr, krow) in kernel.iter().enumerate() {
            for (kc, &kv) in krow.iter().enumerate() {
                for r in 0..size {
                    for c in 0..size {
                        next[kr * size + r][kc * size + c] = kv & g[r][c];
                    }
                }
            }
        }
        g = next;
    }
    g
}

/// Row vector times matrix over GF(2).
pub fn mul_gf2(u: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
    let len = u.len();
    (0..len)
        .map(|c| (0..len).fold(0u8, |acc, r| acc ^ (u[r] & g[r][c])))
        .collect()
}

/// Bhattacharyya parameter of one synthetic channel, walking the index bits
/// from most to least significant.
pub fn bec_parameter(index: usize, n: u32, erasure: f64) -> f64 {
    let mut z = erasure;
    for level in (0..n).rev() {
        z = if (index >> level) & 1 == 0 { 2.0 * z - z * z } else { z * z };
    }
    z
}
