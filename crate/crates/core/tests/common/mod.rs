//! Independent oracles shared by the property suites and the acceptance runner.
#![allow(dead_code)]

use nilmetriq::automorphisms::{diagonal_weights, random_aut0, torus_element};
use nilmetriq::curvature::{ricci, Mode};
use nilmetriq::derivations::{combine, derivation_space, split_nilpotent_diagonal};
use nilmetriq::linalg::rat;
use nilmetriq::symmetry::index_of_symmetry;
use nilmetriq::{Catalog, LieAlgebra, RatMatrix, RatVector, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;

pub fn algebras() -> Vec<LieAlgebra> {
    Catalog::builtin().entries().iter().map(|e| e.standard().clone()).collect()
}

pub fn cslats() -> Vec<LieAlgebra> {
    static CACHE: std::sync::OnceLock<Vec<LieAlgebra>> = std::sync::OnceLock::new();
    CACHE
        .get_or_init(|| {
            algebras()
                .into_iter()
                .filter(|a| nilmetriq::derivations::classify(a).is_cslat())
                .collect()
        })
        .clone()
}

pub fn small<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn positive<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

pub fn vector<R: Rng>(rng: &mut R, n: usize) -> RatVector {
    (0..n).map(|_| small(rng)).collect()
}

/// Positive diagonal metric.
pub fn diagonal_metric<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    let d: Vec<Rational> = (0..n).map(|_| positive(rng)).collect();
    RatMatrix::diagonal(&d)
}

/// `σᵀσ` for a random lower-triangular σ with positive diagonal.
pub fn full_metric<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    let mut s = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            s[(i, j)] = small(rng);
        }
        s[(i, i)] = positive(rng);
    }
    &s.transpose() * &s
}

/// Invertible lower-triangular change of basis.
pub fn triangular_change<R: Rng>(rng: &mut R, n: usize) -> RatMatrix {
    let mut p = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            p[(i, j)] = small(rng);
        }
        p[(i, i)] = positive(rng);
    }
    p
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pick<'a, R: Rng>(rng: &mut R, list: &'a [LieAlgebra]) -> &'a LieAlgebra {
    &list[rng.gen_range(0..list.len())]
}

pub fn jacobiator(alg: &LieAlgebra, x: &[Rational], y: &[Rational], z: &[Rational]) -> RatVector {
    let a = alg.bracket(x, &alg.bracket(y, z));
    let b = alg.bracket(y, &alg.bracket(z, x));
    let c = alg.bracket(z, &alg.bracket(x, y));
    a.iter().zip(&b).zip(&c).map(|((p, q), r)| p + q + r).collect()
}

pub fn random_derivation<R: Rng>(alg: &LieAlgebra, rng: &mut R) -> RatMatrix {
    let der = derivation_space(alg);
    let x: Vec<Rational> = der.basis.iter().map(|_| small(rng)).collect();
    combine(&der.basis, &x)
}

pub fn random_nilpotent_derivation<R: Rng>(alg: &LieAlgebra, rng: &mut R) -> RatMatrix {
    let der = derivation_space(alg);
    let (nil, _) = split_nilpotent_diagonal(&der).expect("triangular derivations split");
    let x: Vec<Rational> = nil.iter().map(|_| small(rng)).collect();
    if nil.is_empty() {
        RatMatrix::zeros(alg.dim(), alg.dim())
    } else {
        combine(&nil, &x)
    }
}

/// The Leibniz defect `D[x,y] - [Dx,y] - [x,Dy]`.
pub fn leibniz_defect(alg: &LieAlgebra, d: &RatMatrix, x: &[Rational], y: &[Rational]) -> RatVector {
    let lhs = d.mul_vec(&alg.bracket(x, y));
    let a = alg.bracket(&d.mul_vec(x), y);
    let b = alg.bracket(x, &d.mul_vec(y));
    lhs.iter().zip(&a).zip(&b).map(|((l, p), q)| l - p - q).collect()
}

pub fn random_diagonal_aut<R: Rng>(alg: &LieAlgebra, rng: &mut R) -> RatMatrix {
    let der = derivation_space(alg);
    let w = diagonal_weights(&der).expect("weights");
    let bases: Vec<Rational> = w.iter().map(|_| rat(rng.gen_range(1..=3), rng.gen_range(1..=2))).collect();
    torus_element(alg, &w, &bases).expect("torus element")
}

/// Near-identity element of `Aut_0`: a mild torus element times `exp` of a small nilpotent derivation.
pub fn gentle_aut<R: Rng>(alg: &LieAlgebra, rng: &mut R) -> RatMatrix {
    let der = derivation_space(alg);
    let w = diagonal_weights(&der).expect("weights");
    let bases: Vec<Rational> = w.iter().map(|_| rat(rng.gen_range(4..=6), 5)).collect();
    let t = torus_element(alg, &w, &bases).expect("torus element");
    let (nil, _) = split_nilpotent_diagonal(&der).expect("split");
    if nil.is_empty() {
        return t;
    }
    let x: Vec<Rational> = nil.iter().map(|_| rat(rng.gen_range(-2..=2), 4)).collect();
    let u = nilmetriq::automorphisms::exp_derivation(alg, &combine(&nil, &x)).expect("exp");
    &t * &u
}

pub fn random_aut<R: Rng>(alg: &LieAlgebra, rng: &mut R) -> RatMatrix {
    random_aut0(&derivation_space(alg), rng).expect("Aut_0 element")
}

/// Ricci form in an arbitrary basis, from an orthonormal-frame sum rewritten with `g^{-1}`.
pub fn ricci_form_oracle(alg: &LieAlgebra, g: &RatMatrix) -> RatMatrix {
    let n = alg.dim();
    let gi = g.inverse().expect("metric is invertible");
    // t[a][b][c] = g([e_a, e_b], e_c)
    let mut t = vec![vec![vec![Rational::zero(); n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            let br = alg.bracket_basis(a, b);
            for c in 0..n {
                t[a][b][c] = (0..n).fold(Rational::zero(), |acc, l| acc + &br[l] * &g[(l, c)]);
            }
        }
    }
    // Frame sums become traces: sum g^{ab} g^{cd} A_{ac} B_{bd} = tr(G A G B^T).
    let first: Vec<RatMatrix> = (0..n)
        .map(|x| RatMatrix::from_rows(t[x].clone()).expect("square"))
        .collect();
    let second: Vec<RatMatrix> = (0..n)
        .map(|x| {
            let rows = (0..n).map(|a| (0..n).map(|c| t[a][c][x].clone()).collect()).collect();
            RatMatrix::from_rows(rows).expect("square")
        })
        .collect();
    let sandwich = |m: &RatMatrix| &(&gi * m) * &gi;
    let pair = |a: &RatMatrix, b: &RatMatrix| -> Rational {
        a.entries().iter().zip(b.entries()).fold(Rational::zero(), |acc, (p, q)| acc + p * q)
    };
    let f: Vec<RatMatrix> = first.iter().map(sandwich).collect();
    let s2: Vec<RatMatrix> = second.iter().map(sandwich).collect();
    let mut form = RatMatrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            form[(x, y)] = rat(-1, 2) * pair(&f[x], &first[y]) + rat(1, 4) * pair(&s2[x], &second[y]);
        }
    }
    form
}

/// Ricci operator `g^{-1} · form`.
pub fn ricci_oracle(alg: &LieAlgebra, g: &RatMatrix) -> RatMatrix {
    &g.inverse().expect("invertible") * &ricci_form_oracle(alg, g)
}

pub fn exact_ricci(alg: &LieAlgebra, g: &RatMatrix) -> RatMatrix {
    ricci(alg, g, Mode::Exact).expect("exact Ricci").operator.exact().expect("exact operator").clone()
}

pub fn approx_ricci(alg: &LieAlgebra, g: &RatMatrix) -> Vec<f64> {
    let m = ricci(alg, g, Mode::Approximate).expect("approximate Ricci").operator.to_f64();
    let n = alg.dim();
    (0..n * n).map(|k| m[(k / n, k % n)]).collect()
}

pub fn to_f64s(m: &RatMatrix) -> Vec<f64> {
    m.entries().iter().map(nilmetriq::linalg::to_f64).collect()
}

/// Relative closeness with the given tolerance, scaled by the larger norm.
pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = a.iter().chain(b).fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

/// Kernel of the symmetry system solved from its defining identity, one unknown per coordinate.
pub fn symmetry_kernel_oracle(alg: &LieAlgebra, g: &RatMatrix) -> Vec<RatVector> {
    let n = alg.dim();
    let gform = |u: &[Rational], v: &[Rational]| -> Rational {
        let gv = g.mul_vec(v);
        u.iter().zip(&gv).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    };
    let e = |i: usize| -> RatVector { (0..n).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect() };
    // Row (x, z) for every ordered pair; column y is the identity evaluated at Y = e_y.
    let mut rows = Vec::new();
    for x in 0..n {
        for z in 0..n {
            let row: Vec<Rational> = (0..n)
                .map(|y| {
                    let (ex, ey, ez) = (e(x), e(y), e(z));
                    gform(&alg.bracket(&ex, &ey), &ez) + gform(&alg.bracket(&ex, &ez), &ey) + gform(&alg.bracket(&ey, &ez), &ex)
                })
                .collect();
            rows.push(row);
        }
    }
    RatMatrix::from_rows(rows).expect("rectangular").kernel_basis()
}

pub fn kernel_subspace(alg: &LieAlgebra, g: &RatMatrix) -> nilmetriq::Subspace {
    index_of_symmetry(alg, g).expect("positive definite").subspace()
}

pub fn same_subspace(a: &nilmetriq::Subspace, b: &nilmetriq::Subspace) -> bool {
    a.dim() == b.dim() && a.contains_subspace(b)
}

pub fn congruence(g: &RatMatrix, phi: &RatMatrix) -> RatMatrix {
    &(&phi.transpose() * g) * phi
}

/// One seeded instance of each property; `Err` carries a description of the counterexample.
pub mod props {
    use super::*;
    use nilmetriq::automorphisms::exp_derivation;

    pub type Check = fn(u64) -> Result<(), String>;

    pub const ALL: [(&str, Check); 8] = [
        ("jacobi", jacobi),
        ("derivation identity", derivation_identity),
        ("exp(D) exp(-D) = id", exp_inverse),
        ("ricci self-adjoint", ricci_self_adjoint),
        ("ricci scaling", ricci_scaling),
        ("ricci equivariance", ricci_equivariance),
        ("symmetry kernel equivariance", kernel_equivariance),
        ("ricci matches frame-free oracle", ricci_oracle_agreement),
    ];

    fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
        if ok {
            Ok(())
        } else {
            Err(what())
        }
    }

    pub fn jacobi(seed: u64) -> Result<(), String> {
        let mut r = rng(seed);
        let list = algebras();
        let alg = pick(&mut r, &list);
        let n = alg.dim();
        let p = triangular_change(&mut r, n);
        let moved = alg.change_basis(&p).map_err(|e| e.to_string())?;
        for a in [alg, &moved] {
            let (x, y, z) = (vector(&mut r, n), vector(&mut r, n), vector(&mut r, n));
            let j = jacobiator(a, &x, &y, &z);
            ensure(j.iter().all(Zero::is_zero), || format!("{} seed {seed}: jacobiator {j:?}", a.name()))?;
        }
        ensure(moved.nilpotency_step().ok() == alg.nilpotency_step().ok(), || {
            format!("{} seed {seed}: step changed under a change of basis", alg.name())
        })
    }

    pub fn derivation_identity(seed: u64) -> Result<(), String> {
        let mut r = rng(seed);
        let list = algebras();
        let alg = pick(&mut r, &list);
        let d = random_derivation(alg, &mut r);
        let n = alg.dim();
        let (x, y) = (vector(&mut r, n), vector(&mut r, n));
        let defect = leibniz_defect(alg, &d, &x, &y);
        ensure(defect.iter().all(Zero::is_zero), || format!("{} seed {seed}: Leibniz defect {defect:?}", alg.name()))
    }

    pub fn exp_inverse(seed: u64) -> Result<(), String> {
        let mut r = rng(seed);
        let list = cslats();
        let alg = pick(&mut r, &list);
        let d = random_nilpotent_derivation(alg, &mut r);
        let a = exp_derivation(alg, &d).map_err(|e| e.to_string())?;
        let b = exp_derivation(alg, &-&d).map_err(|e| e.to_string())?;
        let n = alg.dim();
        ensure(&a * &b == RatMatrix::identity(n) && &b * &a == RatMatrix::identity(n), || {
            format!("{} seed {seed}: exp(D) exp(-D) != I", alg.name())
        })?;
        // exp of a derivation is an automorphism, checked directly on brackets.
        let (x, y) = (vector(&mut r, n), vector(&mut r, n));
        let lhs = a.mul_vec(&alg.bracket(&x, &y));
        let rhs = alg.bracket(&a.mul_vec(&x), &a.mul_vec(&y));
        ensure(lhs == rhs, || format!("{} seed {seed}: exp(D) does not preserve the bracket", alg.name()))
    }

    pub fn ricci_self_adjoint(seed: u64) -> Result<(), String> {
        let mut r = rng(seed);
        let list = algebras();
        let alg = pick(&mut r, &list);
        let n = alg.dim();
        let g = diagonal_metric(&mut r, n);
        let gr = &g * &exact_ricci(alg, &g);
        ensure(gr.is_symmetric(), || format!("{} seed {seed}: g Ric not symmetric", alg.name()))?;
        let h = full_metric(&mut r, n);
        let op = approx_ricci(alg, &h);
        let hf = to_f64s(&h);
        let prod: Vec<f64> = (0..n * n)
            .map(|k| (0..n).map(|l| hf[(k / n) * n + l] * op[l * n + k % n]).sum())
            .collect();
        let tr: Vec<f64> = (0..n * n).map(|k| prod[(k % n) * n + k / n]).collect();
        ensure(close(&prod, &tr, TOL), || format!("{} seed {seed}: approximate g Ric not symmetric", alg.name()))
    }

    pub fn ricci_scaling(seed: u64) -> Result<(), String> {
        let mut r = rng(seed);
        let list = algebras();
        let alg = pick(&mut r, &list);
        let g = diagonal_metric(&mut r, alg.dim());
        let l = positive(&mut r);
        let scaled = exact_ricci(alg, &g.scale(&l));
        let expect = exact_ricci(alg, &g).scale(&(Rational::one() / &l));
        ensure(scaled == expect, || format!("{} seed {seed}: Ric(λg) != Ric(g)/λ for λ = {l}", alg.name()))
    }

    pub fn ricci_equivariance(seed: u64) -> Result<(), String> {
        let mut r = rng(seed);
        let list = cslats();
        let alg = pick(&mut r, &list);
        let n = alg.dim();
        // Exact: a torus element keeps a diagonal metric diagonal.
        let g = diagonal_metric(&mut r, n);
        let t = random_diagonal_aut(alg, &mut r);
        let ti = t.inverse().ok_or("torus element singular")?;
        let lhs = exact_ricci(alg, &congruence(&g, &t));
        let rhs = &(&ti * &exact_ricci(alg, &g)) * &t;
        ensure(lhs == rhs, || format!("{} seed {seed}: exact Ric not equivariant", alg.name()))?;
        // General Aut_0 element and metric, through the oracle and the approximate path.
        let h = full_metric(&mut r, n);
        let phi = random_aut(alg, &mut r);
        let pi = phi.inverse().ok_or("automorphism singular")?;
        let pulled = congruence(&h, &phi);
        let lhs = ricci_oracle(alg, &pulled);
        let rhs = &(&pi * &ricci_oracle(alg, &h)) * &phi;
        ensure(lhs == rhs, || format!("{} seed {seed}: oracle Ric not equivariant", alg.name()))?;
        // Floating comparison at 1e-9 needs a well-conditioned pullback; redraw until it is.
        for _ in 0..50 {
            let h = full_metric(&mut r, n);
            let phi = gentle_aut(alg, &mut r);
            let pulled = congruence(&h, &phi);
            let res = ricci(alg, &pulled, Mode::Approximate).map_err(|e| e.to_string())?;
            if res.condition.is_none_or(|c| c > 1e6) {
                continue;
            }
            let pi = phi.inverse().ok_or("automorphism singular")?;
            let rhs = &(&pi * &ricci_oracle(alg, &h)) * &phi;
            return ensure(close(&approx_ricci(alg, &pulled), &to_f64s(&rhs), TOL), || {
                format!("{} seed {seed}: approximate Ric not equivariant", alg.name())
            });
        }
        Err(format!("{} seed {seed}: no well-conditioned pullback in 50 draws", alg.name()))
    }

    pub fn kernel_equivariance(seed: u64) -> Result<(), String> {
        let mut r = rng(seed);
        let list = cslats();
        let alg = pick(&mut r, &list);
        let n = alg.dim();
        let g = if r.gen_bool(0.5) { diagonal_metric(&mut r, n) } else { full_metric(&mut r, n) };
        let phi = random_aut(alg, &mut r);
        let pi = phi.inverse().ok_or("automorphism singular")?;
        let base = kernel_subspace(alg, &g);
        let moved: Vec<RatVector> = base.basis.iter().map(|v| pi.mul_vec(v)).collect();
        let expect = nilmetriq::Subspace::span(n, &moved);
        ensure(same_subspace(&kernel_subspace(alg, &congruence(&g, &phi)), &expect), || {
            format!("{} seed {seed}: kernel not carried by the automorphism", alg.name())
        })?;
        let l = positive(&mut r);
        ensure(same_subspace(&kernel_subspace(alg, &g.scale(&l)), &base), || {
            format!("{} seed {seed}: kernel changed under scaling", alg.name())
        })?;
        let oracle = nilmetriq::Subspace::span(n, &symmetry_kernel_oracle(alg, &g));
        ensure(same_subspace(&oracle, &base), || format!("{} seed {seed}: kernel differs from the full system", alg.name()))
    }

    pub fn ricci_oracle_agreement(seed: u64) -> Result<(), String> {
        let mut r = rng(seed);
        let list = algebras();
        let alg = pick(&mut r, &list);
        let n = alg.dim();
        let g = diagonal_metric(&mut r, n);
        ensure(exact_ricci(alg, &g) == ricci_oracle(alg, &g), || format!("{} seed {seed}: exact Ric differs", alg.name()))?;
        let h = full_metric(&mut r, n);
        ensure(close(&approx_ricci(alg, &h), &to_f64s(&ricci_oracle(alg, &h)), TOL), || {
            format!("{} seed {seed}: approximate Ric differs", alg.name())
        })
    }
}
