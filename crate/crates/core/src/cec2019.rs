//! The CEC2019 "100-digit challenge" benchmark suite.
//!
//! F1–F3 are evaluated as published (no shift or rotation). F4–F10 take a
//! shift vector and rotation matrix; without the official data files they
//! run under the identity transform, which puts every optimum at the origin.
//! Every function has global minimum value 1.

use std::f64::consts::{E, PI};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numkit::{Matrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
}

impl FunctionId {
    pub const ALL: [FunctionId; 10] = [
        Self::F1,
        Self::F2,
        Self::F3,
        Self::F4,
        Self::F5,
        Self::F6,
        Self::F7,
        Self::F8,
        Self::F9,
        Self::F10,
    ];

    /// 1-based function number.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn info(self) -> BenchFunction {
        let (name, dim, bound) = match self {
            Self::F1 => ("Storn's Chebyshev polynomial fitting", 9, 8192.0),
            Self::F2 => ("Inverse Hilbert matrix", 16, 16384.0),
            Self::F3 => ("Lennard-Jones minimum energy cluster", 18, 4.0),
            Self::F4 => ("Shifted and rotated Rastrigin", 10, 100.0),
            Self::F5 => ("Shifted and rotated Griewank", 10, 100.0),
            Self::F6 => ("Shifted and rotated Weierstrass", 10, 100.0),
            Self::F7 => ("Shifted and rotated Schwefel", 10, 100.0),
            Self::F8 => ("Shifted and rotated expanded Schaffer F6", 10, 100.0),
            Self::F9 => ("Shifted and rotated HappyCat", 10, 100.0),
            Self::F10 => ("Shifted and rotated Ackley", 10, 100.0),
        };
        BenchFunction {
            id: self,
            name,
            dim,
            lower: -bound,
            upper: bound,
            f_min: 1.0,
        }
    }

    fn shift_rate(self) -> f64 {
        match self {
            Self::F4 => 5.12 / 100.0,
            Self::F5 => 600.0 / 100.0,
            Self::F6 => 0.5 / 100.0,
            Self::F7 => 1000.0 / 100.0,
            Self::F9 => 5.0 / 100.0,
            _ => 1.0,
        }
    }

    /// Whether the function accepts a shift/rotation transform.
    pub fn is_transformed(self) -> bool {
        self.number() >= 4
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.number())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim().trim_start_matches(['F', 'f']);
        match digits.parse::<usize>() {
            Ok(n @ 1..=10) => Ok(Self::ALL[n - 1]),
            _ => Err(Error::Param(format!(
                "unknown benchmark function '{s}', expected F1..F10"
            ))),
        }
    }
}

/// Static description of one suite member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchFunction {
    pub id: FunctionId,
    pub name: &'static str,
    pub dim: usize,
    pub lower: f64,
    pub upper: f64,
    pub f_min: f64,
}

pub fn suite_info() -> Vec<BenchFunction> {
    FunctionId::ALL.iter().map(|id| id.info()).collect()
}

/// Shift vector `o` and rotation matrix `M` applied as `z = M·((x − o)·rate)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Transform {
    pub shift: Vec<f64>,
    pub rotation: Matrix<f64>,
}

impl Transform {
    pub fn identity(dim: usize) -> Self {
        Self {
            shift: vec![0.0; dim],
            rotation: Matrix::identity(dim),
        }
    }

    /// Reads whitespace-separated numbers. The shift file may hold more
    /// values than needed (the official files are padded); the first `dim`
    /// are used. The rotation file must hold at least `dim²` values.
    pub fn load(shift_path: impl AsRef<Path>, rotation_path: impl AsRef<Path>, dim: usize) -> Result<Self> {
        let shift = read_numbers(shift_path.as_ref(), dim)?;
        let rot = read_numbers(rotation_path.as_ref(), dim * dim)?;
        Ok(Self {
            shift,
            rotation: Matrix::new(dim, dim, rot)?,
        })
    }

    fn apply<T: Scalar>(&self, x: &[T], rate: f64) -> Result<Vec<T>> {
        let n = x.len();
        if self.shift.len() != n || self.rotation.shape() != (n, n) {
            return Err(Error::shape("cec transform", n, self.shift.len()));
        }
        let y: Vec<f64> = x
            .iter()
            .zip(&self.shift)
            .map(|(&v, o)| (v.as_f64() - o) * rate)
            .collect();
        Ok((0..n)
            .map(|i| T::lit(self.rotation.row(i).iter().zip(&y).map(|(m, v)| m * v).sum()))
            .collect())
    }
}

fn read_numbers(path: &Path, need: usize) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::ingest(path.display(), e))?;
    let mut out = Vec::with_capacity(need);
    for tok in text.split_whitespace().take(need) {
        out.push(
            tok.parse::<f64>()
                .map_err(|_| Error::ingest(path.display(), format!("'{tok}' is not a number")))?,
        );
    }
    if out.len() < need {
        return Err(Error::ingest(
            path.display(),
            format!("found {} values, need {need}", out.len()),
        ));
    }
    Ok(out)
}

/// Evaluates function `id` at `x` under the identity transform.
pub fn evaluate<T: Scalar>(id: FunctionId, x: &[T]) -> Result<T> {
    let dim = id.info().dim;
    if x.len() != dim {
        return Err(Error::shape("cec2019 evaluate", format!("{id} got {}", x.len()), dim));
    }
    Ok(raw_value(id, x, None) + T::one())
}

/// Evaluates with an explicit transform (only meaningful for F4–F10; F1–F3
/// ignore it).
pub fn evaluate_with<T: Scalar>(id: FunctionId, x: &[T], transform: &Transform) -> Result<T> {
    let dim = id.info().dim;
    if x.len() != dim {
        return Err(Error::shape("cec2019 evaluate", format!("{id} got {}", x.len()), dim));
    }
    if !id.is_transformed() {
        return evaluate(id, x);
    }
    let z = transform.apply(x, id.shift_rate())?;
    Ok(raw_value(id, x, Some(z)) + T::one())
}

fn raw_value<T: Scalar>(id: FunctionId, x: &[T], z: Option<Vec<T>>) -> T {
    let z = || {
        z.unwrap_or_else(|| {
            let rate = T::lit(id.shift_rate());
            x.iter().map(|&v| v * rate).collect()
        })
    };
    match id {
        FunctionId::F1 => chebyshev(x),
        FunctionId::F2 => inverse_hilbert(x),
        FunctionId::F3 => lennard_jones(x),
        FunctionId::F4 => rastrigin(&z()),
        FunctionId::F5 => griewank(&z()),
        FunctionId::F6 => weierstrass(&z()),
        FunctionId::F7 => schwefel(&z()),
        FunctionId::F8 => expanded_schaffer(&z()),
        FunctionId::F9 => happycat(&z()),
        FunctionId::F10 => ackley(&z()),
    }
}

/// Required polynomial value at ±1.2, equal to `T₈(1.2)`.
const CHEBYSHEV_D: f64 = 72.660_666_88;

/// Coefficients are highest degree first. The polynomial must stay within
/// [-1, 1] on 32·D + 1 evenly spaced points of [-1, 1] and reach at least
/// `CHEBYSHEV_D` at both ±1.2.
fn chebyshev<T: Scalar>(x: &[T]) -> T {
    let poly = |t: T| x.iter().fold(T::zero(), |acc, &c| acc * t + c);
    let one = T::one();
    let d = T::lit(CHEBYSHEV_D);
    let below = |v: T| if v < d { (v - d).powi(2) } else { T::zero() };
    let mut f = below(poly(T::lit(1.2))) + below(poly(T::lit(-1.2)));
    let m = 32 * x.len();
    for k in 0..=m {
        let t = T::lit(2.0 * k as f64 / m as f64 - 1.0);
        let v = poly(t);
        if v > one {
            f = f + (v - one).powi(2);
        } else if v < -one {
            f = f + (v + one).powi(2);
        }
    }
    f
}

/// Sum of |H·X − I| with H the 4×4 Hilbert matrix and X read row-major.
fn inverse_hilbert<T: Scalar>(x: &[T]) -> T {
    let n = (x.len() as f64).sqrt().round() as usize;
    let mut total = T::zero();
    for i in 0..n {
        for k in 0..n {
            let mut s = T::zero();
            for j in 0..n {
                let h = T::one() / T::from_count(i + j + 1);
                s = s + h * x[k + n * j];
            }
            let target = if i == k { T::one() } else { T::zero() };
            total = total + (s - target).abs();
        }
    }
    total
}

/// Known minimum energy magnitude of the 6-atom cluster.
const LJ_OFFSET: f64 = 12.712_062_256_8;

fn lennard_jones<T: Scalar>(x: &[T]) -> T {
    let atoms = x.len() / 3;
    let mut f = T::zero();
    for i in 0..atoms {
        for j in i + 1..atoms {
            let r2 = (0..3).map(|k| (x[3 * i + k] - x[3 * j + k]).powi(2)).sum::<T>();
            let ud = r2 * r2 * r2;
            f = f + if ud > T::lit(1e-10) {
                (T::one() / ud - T::lit(2.0)) / ud
            } else {
                T::lit(1e20)
            };
        }
    }
    f + T::lit(LJ_OFFSET)
}

fn rastrigin<T: Scalar>(z: &[T]) -> T {
    let two_pi = T::lit(2.0 * PI);
    let ten = T::lit(10.0);
    z.iter().map(|&v| v * v - ten * (two_pi * v).cos() + ten).sum()
}

fn griewank<T: Scalar>(z: &[T]) -> T {
    let sum = z.iter().map(|&v| v * v).sum::<T>() / T::lit(4000.0);
    let prod = z
        .iter()
        .enumerate()
        .fold(T::one(), |acc, (i, &v)| acc * (v / T::from_count(i + 1).sqrt()).cos());
    T::one() + sum - prod
}

const WEIERSTRASS_KMAX: i32 = 20;

fn weierstrass<T: Scalar>(z: &[T]) -> T {
    let (a, b) = (0.5_f64, 3.0_f64);
    let two_pi = T::lit(2.0 * PI);
    let half = T::lit(0.5);
    let terms: Vec<(T, T)> = (0..=WEIERSTRASS_KMAX)
        .map(|k| (T::lit(a.powi(k)), T::lit(b.powi(k))))
        .collect();
    let mut f = T::zero();
    for &v in z {
        for &(ak, bk) in &terms {
            f = f + ak * (two_pi * bk * (v + half)).cos();
        }
    }
    let offset: T = terms.iter().map(|&(ak, bk)| ak * (two_pi * bk * half).cos()).sum();
    f - T::from_count(z.len()) * offset
}

const SCHWEFEL_SHIFT: f64 = 420.968_746_227_503_6;
const SCHWEFEL_OFFSET: f64 = 418.982_887_272_433_8;

fn schwefel<T: Scalar>(z: &[T]) -> T {
    let nx = T::from_count(z.len());
    let c500 = T::lit(500.0);
    let c100 = T::lit(100.0);
    let mut f = T::zero();
    for &v in z {
        let zi = v + T::lit(SCHWEFEL_SHIFT);
        if zi > c500 {
            let r = c500 - zi % c500;
            f = f - r * r.sqrt().sin();
            f = f + ((zi - c500) / c100).powi(2) / nx;
        } else if zi < -c500 {
            let r = zi.abs() % c500;
            f = f - (r - c500) * (c500 - r).sqrt().sin();
            f = f + ((zi + c500) / c100).powi(2) / nx;
        } else {
            f = f - zi * zi.abs().sqrt().sin();
        }
    }
    f + T::lit(SCHWEFEL_OFFSET) * nx
}

fn expanded_schaffer<T: Scalar>(z: &[T]) -> T {
    let n = z.len();
    let half = T::lit(0.5);
    (0..n)
        .map(|i| {
            let s = z[i] * z[i] + z[(i + 1) % n] * z[(i + 1) % n];
            let num = s.sqrt().sin().powi(2) - half;
            let den = T::one() + T::lit(0.001) * s;
            half + num / (den * den)
        })
        .sum()
}

fn happycat<T: Scalar>(z: &[T]) -> T {
    let nx = T::from_count(z.len());
    let shifted: Vec<T> = z.iter().map(|&v| v - T::one()).collect();
    let r2 = shifted.iter().map(|&v| v * v).sum::<T>();
    let sum = shifted.iter().copied().sum::<T>();
    (r2 - nx).abs().powf(T::lit(0.25)) + (T::lit(0.5) * r2 + sum) / nx + T::lit(0.5)
}

fn ackley<T: Scalar>(z: &[T]) -> T {
    let nx = T::from_count(z.len());
    let sq = z.iter().map(|&v| v * v).sum::<T>() / nx;
    let cs = z.iter().map(|&v| (T::lit(2.0 * PI) * v).cos()).sum::<T>() / nx;
    T::lit(-20.0) * (T::lit(-0.2) * sq.sqrt()).exp() - cs.exp() + T::lit(20.0) + T::lit(E)
}
