use std::f64::consts::TAU;

use anyhow::Result;
use nctorus_core::reference::apply_kernel_by_partial_trace;
use nctorus_core::{
    bessel_kernel, multiplier_matrix, singular_values, Complex64, DenseMatrix, LatticeBox,
    MultiIndex, NCKernel, ReducedTheta, Symbol, ThetaMatrix, TorusElement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{all_passed, Check};

const TRIALS: usize = 20;
const ALGEBRA_TOLERANCE: f64 = 1e-10;
const ORACLE_TOLERANCE: f64 = 1e-11;
const OPERATOR_TOLERANCE: f64 = 1e-12;
const BESSEL_TOLERANCE: f64 = 1e-13;
const HOLDER_SLACK: f64 = 1e-10;

/// Deliberate corruption of the cocycle seen by the cocycle-identity check.
/// Exists as a negative control for the suite itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CocycleFault {
    #[default]
    None,
    /// Flip the sign of `σ(m,n)` whenever `m₁ < 0`.
    SignFlip,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub d: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }
}

pub fn run_property_suite(seed: u64, theta: &ThetaMatrix) -> Result<SuiteReport> {
    run_property_suite_with(seed, theta, CocycleFault::None)
}

/// Every module's invariants on random data drawn from `seed`, each
/// reported with its largest observed error.
pub fn run_property_suite_with(
    seed: u64,
    theta: &ThetaMatrix,
    fault: CocycleFault,
) -> Result<SuiteReport> {
    let mut s = Suite {
        rng: ChaCha8Rng::seed_from_u64(seed),
        theta: theta.clone(),
        t: theta.reduce(),
        d: theta.dim(),
    };
    let checks = vec![
        Check::new(
            "cocycle_identity",
            s.cocycle_identity(fault),
            ALGEBRA_TOLERANCE,
        ),
        Check::new("commutation_relation", s.commutation()?, ALGEBRA_TOLERANCE),
        Check::new("associativity", s.associativity()?, ALGEBRA_TOLERANCE),
        Check::new("trace_property", s.trace_property()?, ALGEBRA_TOLERANCE),
        Check::new(
            "involution_antihomomorphism",
            s.involution()?,
            ALGEBRA_TOLERANCE,
        ),
        Check::new("plancherel", s.plancherel()?, ALGEBRA_TOLERANCE),
        Check::new("multiplier_algebra", s.multipliers()?, ALGEBRA_TOLERANCE),
        Check::new("kernel_oracle", s.kernel_oracle()?, ORACLE_TOLERANCE),
        Check::new("bessel_kernel", s.bessel_kernel()?, BESSEL_TOLERANCE),
        Check::new("factorization", s.factorization()?, OPERATOR_TOLERANCE),
        Check::new("adjoint", s.adjoint()?, OPERATOR_TOLERANCE),
        Check::new("hilbert_schmidt", s.hilbert_schmidt()?, OPERATOR_TOLERANCE),
        Check::new("holder", s.holder()?, HOLDER_SLACK),
        Check::new("schwartz_bound", s.schwartz()?, 1.0 + HOLDER_SLACK),
    ];
    Ok(SuiteReport {
        seed,
        d: s.d,
        checks,
    })
}

struct Suite {
    rng: ChaCha8Rng,
    theta: ThetaMatrix,
    t: ReducedTheta,
    d: usize,
}

/// `‖a - b‖_∞ / max(1, ‖b‖_∞)` over coefficients.
fn rel(a: &TorusElement, b: &TorusElement) -> Result<f64> {
    let scale = b.coeffs().iter().map(|z| z.norm()).fold(1.0, f64::max);
    Ok(a.max_abs_diff(b)? / scale)
}

impl Suite {
    fn complex(&mut self) -> Complex64 {
        Complex64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0))
    }

    fn lattice(&self, n: u32) -> LatticeBox {
        LatticeBox::new(self.d, n).expect("d ≥ 2")
    }

    /// Kernel radius keeping matrices at most 125 points wide.
    fn kernel_box(&self) -> LatticeBox {
        let n = (1..=3u32)
            .rev()
            .find(|&n| (2 * n as usize + 1).pow(self.d as u32) <= 125)
            .unwrap_or(1);
        self.lattice(n)
    }

    fn element(&mut self, n: u32) -> Result<TorusElement> {
        let b = self.lattice(n);
        let coeffs = (0..b.cardinality()).map(|_| self.complex()).collect();
        Ok(TorusElement::from_coeffs(self.t.clone(), b, coeffs)?)
    }

    fn small_element(&mut self) -> Result<TorusElement> {
        let n = self.rng.gen_range(0..=2);
        self.element(n)
    }

    fn kernel(&mut self, lattice: LatticeBox) -> Result<NCKernel> {
        let side = lattice.cardinality();
        let coeffs = (0..side * side).map(|_| self.complex()).collect();
        Ok(NCKernel::from_coeffs(
            self.t.clone(),
            lattice,
            lattice,
            coeffs,
        )?)
    }

    fn index(&mut self, n: i64) -> Vec<i64> {
        (0..self.d).map(|_| self.rng.gen_range(-n..=n)).collect()
    }

    fn cocycle_identity(&mut self, fault: CocycleFault) -> f64 {
        let t = self.t.clone();
        let sigma = |m: &[i64], n: &[i64]| {
            let s = t.sigma_raw(m, n);
            match fault {
                CocycleFault::SignFlip if m[0] < 0 => -s,
                _ => s,
            }
        };
        let add =
            |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        let zero = vec![0i64; self.d];
        let mut worst = 0.0f64;
        for _ in 0..10 * TRIALS {
            let (a, b, c) = (self.index(5), self.index(5), self.index(5));
            let lhs = sigma(&a, &b) * sigma(&add(&a, &b), &c);
            let rhs = sigma(&a, &add(&b, &c)) * sigma(&b, &c);
            worst = worst
                .max((lhs - rhs).norm())
                .max((sigma(&zero, &a) - 1.0).norm())
                .max((sigma(&a, &zero) - 1.0).norm())
                .max((sigma(&a, &b).norm() - 1.0).abs());
        }
        worst
    }

    fn commutation(&mut self) -> Result<f64> {
        let b = self.lattice(1);
        let mut worst = 0.0f64;
        for k in 0..self.d {
            for j in 0..self.d {
                let uk = TorusElement::monomial(self.t.clone(), &MultiIndex::unit(self.d, k), b)?;
                let uj = TorusElement::monomial(self.t.clone(), &MultiIndex::unit(self.d, j), b)?;
                let phase = Complex64::from_polar(1.0, TAU * self.theta.get(k, j));
                let lhs = uk.twisted_convolve(&uj)?;
                let rhs = uj.twisted_convolve(&uk)?.scaled(phase);
                worst = worst.max(rel(&lhs, &rhs)?);
            }
        }
        Ok(worst)
    }

    fn associativity(&mut self) -> Result<f64> {
        let mut worst = 0.0f64;
        for _ in 0..TRIALS {
            let (f, g, h) = (
                self.small_element()?,
                self.small_element()?,
                self.small_element()?,
            );
            let lhs = f.twisted_convolve(&g)?.twisted_convolve(&h)?;
            let rhs = f.twisted_convolve(&g.twisted_convolve(&h)?)?;
            worst = worst.max(rel(&lhs, &rhs)?);
        }
        Ok(worst)
    }

    fn trace_property(&mut self) -> Result<f64> {
        let mut worst = 0.0f64;
        for _ in 0..TRIALS {
            let (f, g) = (self.small_element()?, self.small_element()?);
            let a = f.twisted_convolve(&g)?.trace();
            let b = g.twisted_convolve(&f)?.trace();
            worst = worst.max((a - b).norm() / b.norm().max(1.0));
        }
        Ok(worst)
    }

    fn involution(&mut self) -> Result<f64> {
        let mut worst = 0.0f64;
        for _ in 0..TRIALS {
            let (f, g) = (self.small_element()?, self.small_element()?);
            let lhs = f.twisted_convolve(&g)?.involution();
            let rhs = g.involution().twisted_convolve(&f.involution())?;
            worst = worst.max(rel(&lhs, &rhs)?);
            worst = worst.max(f.involution().involution().max_abs_diff(&f)?);
        }
        Ok(worst)
    }

    fn plancherel(&mut self) -> Result<f64> {
        let mut worst = 0.0f64;
        for _ in 0..TRIALS {
            let (f, g) = (self.small_element()?, self.small_element()?);
            let norm_sq = f.l2_norm().powi(2);
            let tau = f.involution().twisted_convolve(&f)?.trace();
            worst = worst.max((tau - norm_sq).norm() / norm_sq.max(1.0));
            let ip = f.inner_product(&g)?;
            let via_trace = g.involution().twisted_convolve(&f)?.trace();
            worst = worst.max((ip - via_trace).norm() / ip.norm().max(1.0));
        }
        Ok(worst)
    }

    fn multipliers(&mut self) -> Result<f64> {
        let mut worst = 0.0f64;
        for _ in 0..TRIALS {
            let x = self.element(2)?;
            let (a, b) = (self.rng.gen_range(-2.0..2.0), self.rng.gen_range(0.5..2.0));
            let (g, h) = (Symbol::bessel(a), Symbol::riesz(b));
            let lhs = g.apply(&h.apply(&x)?)?;
            let rhs = g.product(&h).apply(&x)?;
            worst = worst.max(rel(&lhs, &rhs)?);
            let round = Symbol::bessel(-a).apply(&g.apply(&x)?)?;
            worst = worst.max(rel(&round, &x)?);
        }
        Ok(worst)
    }

    fn kernel_oracle(&mut self) -> Result<f64> {
        let mut worst = 0.0f64;
        for _ in 0..TRIALS {
            let n = self.rng.gen_range(0..=2);
            let k = self.kernel(self.lattice(n))?;
            let x = self.small_element()?;
            worst = worst.max(rel(&k.apply(&x)?, &apply_kernel_by_partial_trace(&k, &x)?)?);
        }
        Ok(worst)
    }

    fn bessel_kernel(&mut self) -> Result<f64> {
        let b = self.kernel_box();
        let mut worst = 0.0f64;
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            let k = bessel_kernel(alpha, b, self.t.clone())?;
            let m = multiplier_matrix(&Symbol::bessel(-alpha), b)?;
            worst = worst.max(k.matrix()?.max_abs_diff(m.matrix())?);
        }
        Ok(worst)
    }

    fn factorization(&mut self) -> Result<f64> {
        let b = self.kernel_box();
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let k = self.kernel(b)?;
            let (a1, a2) = (self.rng.gen_range(0.0..3.0), self.rng.gen_range(0.0..3.0));
            let lhs = multiplier_matrix(&Symbol::bessel(a1), b)?.matmul(k.matrix()?.matrix())?;
            let rhs = k
                .sobolev_lift(a1, a2)
                .matrix()?
                .matmul(multiplier_matrix(&Symbol::bessel(-a2), b)?.matrix())?;
            worst = worst.max(rhs.relative_error(&lhs)?);
        }
        Ok(worst)
    }

    fn adjoint(&mut self) -> Result<f64> {
        let b = self.kernel_box();
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let k = self.kernel(b)?;
            let want = k.matrix()?.adjoint();
            worst = worst.max(k.flip_adjoint()?.matrix()?.relative_error(&want)?);
        }
        Ok(worst)
    }

    fn hilbert_schmidt(&mut self) -> Result<f64> {
        let b = self.kernel_box();
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let k = self.kernel(b)?;
            let s2 = singular_values(k.matrix()?.matrix())?.schatten_norm(2.0)?;
            worst = worst.max((s2 - k.l2_norm()).abs() / k.l2_norm());
        }
        Ok(worst)
    }

    /// Largest `‖AB‖_t / (‖A‖_2 ‖B‖_{p₂}) - 1` with `1/t = 1/2 + 1/p₂`.
    fn holder(&mut self) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..TRIALS {
            let n = self.rng.gen_range(2..=20);
            let a = DenseMatrix::from_fn(n, n, |_, _| self.complex());
            let b = DenseMatrix::from_fn(n, n, |_, _| self.complex());
            let p2 = [1.0, 2.0, 4.0][self.rng.gen_range(0..3)];
            let t = 1.0 / (0.5 + 1.0 / p2);
            let ab = singular_values(&a.matmul(&b)?)?.schatten_norm(t)?;
            let bound = singular_values(&a)?.schatten_norm(2.0)?
                * singular_values(&b)?.schatten_norm(p2)?;
            worst = worst.max(ab / bound - 1.0);
        }
        Ok(worst.max(0.0))
    }

    fn schwartz(&mut self) -> Result<f64> {
        let b = self.kernel_box();
        let s0 = self.d as f64 + 1.0;
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let h = self.kernel(b)?;
            let (a1, a2) = (self.rng.gen_range(0.0..2.0), self.rng.gen_range(0.0..2.0));
            worst = worst.max(h.schwartz_coefficients(a1, a2, s0)?.worst_ratio);
        }
        Ok(worst)
    }
}
