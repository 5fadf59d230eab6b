//! Unnormalised complex DFT along one axis of a row-major array.
//!
//! `X_k = Σ_j x_j e^{∓2πi jk/n}`: radix-2 for powers of two, a direct sum
//! otherwise (small odd or mixed lengths only occur on micro-grids).

use alloc::vec;
use alloc::vec::Vec;

use crate::math::cis_turns;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `e^{-2πi jk/n}`.
    Forward,
    /// Kernel `e^{+2πi jk/n}`.
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => -1.0,
            Direction::Backward => 1.0,
        }
    }
}

pub fn dft(buf: &mut [C64], dir: Direction) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(buf, dir);
    } else {
        let out = direct(buf, dir);
        buf.copy_from_slice(&out);
    }
}

/// O(n²) reference transform; also the fallback for non-power-of-two lengths.
pub fn direct(x: &[C64], dir: Direction) -> Vec<C64> {
    let n = x.len();
    let s = dir.sign();
    let tw: Vec<C64> = (0..n).map(|j| cis_turns(s * j as f64 / n as f64)).collect();
    (0..n)
        .map(|k| {
            let mut acc = C64::new(0.0, 0.0);
            for (j, &v) in x.iter().enumerate() {
                acc += v * tw[(j * k) % n];
            }
            acc
        })
        .collect()
}

fn radix2(a: &mut [C64], dir: Direction) {
    let n = a.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            a.swap(i, j);
        }
    }
    let s = dir.sign();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let tw: Vec<C64> = (0..half).map(|k| cis_turns(s * k as f64 / len as f64)).collect();
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let u = a[start + k];
                let v = a[start + k + half] * tw[k];
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}

/// Applies `f` to every 1-D line of `data` along `axis`.
pub fn for_each_line<F: FnMut(&mut [C64])>(data: &mut [C64], shape: &[usize], axis: usize, mut f: F) {
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut line = vec![C64::new(0.0, 0.0); n];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * n * inner + i;
            for j in 0..n {
                line[j] = data[base + j * inner];
            }
            f(&mut line);
            for j in 0..n {
                data[base + j * inner] = line[j];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn radix2_matches_direct() {
        for n in [2usize, 4, 8, 64, 256] {
            let x: Vec<C64> = (0..n).map(|j| C64::new((j as f64 * 0.37).sin(), (j as f64 * 1.3).cos())).collect();
            for dir in [Direction::Forward, Direction::Backward] {
                let mut y = x.clone();
                dft(&mut y, dir);
                assert!(close(&y, &direct(&x, dir), 1e-10 * n as f64));
            }
        }
    }

    #[test]
    fn roundtrip_any_length() {
        for n in [3usize, 6, 10, 16] {
            let x: Vec<C64> = (0..n).map(|j| C64::new(j as f64, -(j as f64) * 0.5)).collect();
            let mut y = x.clone();
            dft(&mut y, Direction::Forward);
            dft(&mut y, Direction::Backward);
            let back: Vec<C64> = y.iter().map(|z| z / n as f64).collect();
            assert!(close(&back, &x, 1e-12 * n as f64));
        }
    }

    #[test]
    fn lines_along_middle_axis() {
        let shape = [2, 4, 3];
        let mut d: Vec<C64> = (0..24).map(|i| C64::new(i as f64, 0.0)).collect();
        let orig = d.clone();
        for_each_line(&mut d, &shape, 1, |l| dft(l, Direction::Forward));
        // DC term of the line (o=1, i=2) sits at j = 0.
        let dc: f64 = (0..4).map(|j| orig[12 + j * 3 + 2].re).sum();
        assert!((d[12 + 2].re - dc).abs() < 1e-12);
    }
}
