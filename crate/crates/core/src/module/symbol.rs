use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::MatrixElement;
use super::vector::{module_norm_s, ModuleVector};
use crate::algebra::{indices_of_total, MultiIndex, Theta, TorusElement};
use crate::error::{NctError, Result};
use crate::pdo::{adjoint_expansion, adjoint_oracle, apply, gns_adjoint_symbol};
use crate::random::{random_element, seeded};
use crate::sobolev::{extract, kernel_bound, schur_bound, sobolev_norm, BoundednessConfig, BoundednessOutcome, Coeffs, RellichOutcome};
use crate::symbols::{verify_order, CallbackSymbol, SharedSymbol, SymbolGrid, SymbolSpec};

/// `r x r` matrix of symbols acting on column vectors from the left.
#[derive(Debug, Clone)]
pub struct MatrixSymbol {
    r: usize,
    entries: Vec<SharedSymbol>,
}

impl MatrixSymbol {
    pub fn new(r: usize, entries: Vec<SharedSymbol>) -> Result<Self> {
        if r == 0 || entries.len() != r * r {
            return Err(NctError::ShapeMismatch(format!("expected {} entries, got {}", r * r, entries.len())));
        }
        let theta = entries[0].theta();
        if entries.iter().any(|e| **e.theta() != **theta) {
            return Err(NctError::ThetaMismatch);
        }
        Ok(Self { r, entries })
    }

    /// Diagonal matrix with `diagonal` and zero symbols elsewhere.
    pub fn diagonal(diagonal: Vec<SharedSymbol>) -> Result<Self> {
        let r = diagonal.len();
        let theta = Arc::clone(
            diagonal
                .first()
                .ok_or_else(|| NctError::ShapeMismatch("empty diagonal".into()))?
                .theta(),
        );
        let zero: SharedSymbol = Arc::new(crate::symbols::PolynomialSymbol::constant(TorusElement::zero(&theta)));
        let mut entries = vec![Arc::clone(&zero); r * r];
        for (j, d) in diagonal.into_iter().enumerate() {
            entries[j * r + j] = d;
        }
        Self::new(r, entries)
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn theta(&self) -> &Arc<Theta> {
        self.entries[0].theta()
    }

    pub fn dim(&self) -> usize {
        self.theta().dim()
    }

    pub fn entry(&self, j: usize, k: usize) -> &SharedSymbol {
        &self.entries[j * self.r + k]
    }

    /// Largest entrywise order.
    pub fn order(&self) -> f64 {
        self.entries.iter().map(|e| e.order()).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn eval(&self, xi: &[f64]) -> Result<MatrixElement> {
        self.deriv(&MultiIndex::zero(self.dim()), xi)
    }

    pub fn deriv(&self, l: &MultiIndex, xi: &[f64]) -> Result<MatrixElement> {
        let rows = (0..self.r)
            .map(|j| (0..self.r).map(|k| crate::symbols::deriv(self.entry(j, k).as_ref(), l, xi)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        MatrixElement::from_rows(rows)
    }

    /// Union of the entry mode sets.
    pub fn modes(&self) -> Vec<MultiIndex> {
        let set: BTreeSet<MultiIndex> = self.entries.iter().flat_map(|e| e.modes()).collect();
        set.into_iter().collect()
    }

    /// `e rho e`, whose operator maps every vector into `E = e A^r`.
    pub fn compressed(&self, e: &MatrixElement) -> Result<Self> {
        if e.rank() != self.r {
            return Err(NctError::ShapeMismatch("idempotent rank differs from symbol rank".into()));
        }
        let base = Arc::new(self.clone());
        let e = Arc::new(e.clone());
        let mut modes = BTreeSet::new();
        let e_modes: BTreeSet<MultiIndex> = e.entries().iter().flat_map(|x| x.support().cloned()).collect();
        for a in &e_modes {
            for m in self.modes() {
                for b in &e_modes {
                    modes.insert(&(a + &m) + b);
                }
            }
        }
        let modes: Vec<MultiIndex> = modes.into_iter().collect();
        let mut entries: Vec<SharedSymbol> = Vec::with_capacity(self.r * self.r);
        for j in 0..self.r {
            for k in 0..self.r {
                let entry = move |base: &MatrixSymbol, e: &MatrixElement, l: &MultiIndex, xi: &[f64]| {
                    let mid = base.deriv(l, xi).expect("valid derivative order");
                    let full = e.try_mul(&mid).and_then(|x| x.try_mul(e)).expect("same theta");
                    full.get(j, k).clone()
                };
                let (b1, e1) = (Arc::clone(&base), Arc::clone(&e));
                let (b2, e2) = (Arc::clone(&base), Arc::clone(&e));
                let n = self.dim();
                let sym = CallbackSymbol::new(self.theta(), self.entry(j, k).order().max(self.order()), modes.clone(), move |xi| {
                    entry(&b1, &e1, &MultiIndex::zero(n), xi)
                })
                .with_derivative(move |l, xi| entry(&b2, &e2, l, xi));
                entries.push(Arc::new(sym));
            }
        }
        Self::new(self.r, entries)
    }
}

/// `P_rho(v) = sum_m rho(m) v_m U^m`, i.e. `(P v)_j = sum_k P_{rho_{jk}}(v_k)`.
pub fn apply_matrix(sym: &MatrixSymbol, v: &ModuleVector) -> Result<ModuleVector> {
    if v.rank() != sym.rank() {
        return Err(NctError::ShapeMismatch(format!("vector rank {} vs symbol rank {}", v.rank(), sym.rank())));
    }
    let mut out = Vec::with_capacity(sym.rank());
    for j in 0..sym.rank() {
        let mut acc = TorusElement::zero(sym.theta());
        for k in 0..sym.rank() {
            acc.add_scaled(&apply(sym.entry(j, k).as_ref(), v.get(k))?, Complex64::ONE);
        }
        out.push(acc);
    }
    ModuleVector::new(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixExpansionResult {
    pub order: usize,
    pub at: Vec<f64>,
    pub value: MatrixElement,
    pub terms: Vec<MatrixElement>,
}

/// Exact matrix adjoint symbol: entry `(k, j)` is the scalar adjoint of `rho_{jk}`.
pub fn matrix_adjoint_oracle(sym: &MatrixSymbol, xi: &[f64]) -> Result<MatrixElement> {
    let r = sym.rank();
    let mut out = MatrixElement::zero(sym.theta(), r);
    for j in 0..r {
        for k in 0..r {
            out.set(k, j, adjoint_oracle(sym.entry(j, k).as_ref(), xi)?);
        }
    }
    Ok(out)
}

/// Block oracle from the conjugate transpose of each truncated operator matrix.
pub fn matrix_gns_adjoint(sym: &MatrixSymbol, m: &MultiIndex, box_radius: i64) -> Result<MatrixElement> {
    let r = sym.rank();
    let mut out = MatrixElement::zero(sym.theta(), r);
    for j in 0..r {
        for k in 0..r {
            out.set(k, j, gns_adjoint_symbol(sym.entry(j, k).as_ref(), m, box_radius)?);
        }
    }
    Ok(out)
}

/// `sum_{|l|<N} (1/l!) d^l delta^l (rho(xi))^*` with the matrix star.
pub fn matrix_adjoint_expansion(sym: &MatrixSymbol, xi: &[f64], n_terms: usize) -> Result<MatrixExpansionResult> {
    if n_terms == 0 {
        return Err(NctError::Precondition("expansion order N must be at least 1".into()));
    }
    let mut terms = Vec::with_capacity(n_terms);
    for level in 0..n_terms {
        let mut t = MatrixElement::zero(sym.theta(), sym.rank());
        for l in indices_of_total(sym.dim(), level) {
            let d = sym.deriv(&l, xi)?.star().delta(&l)?;
            t = t.try_add(&d.scale(Complex64::new(1.0 / l.factorial(), 0.0)))?;
        }
        terms.push(t);
    }
    finish(n_terms, xi, terms)
}

fn finish(order: usize, xi: &[f64], terms: Vec<MatrixElement>) -> Result<MatrixExpansionResult> {
    let mut value = MatrixElement::zero(terms[0].theta(), terms[0].rank());
    for t in &terms {
        value = value.try_add(t)?;
    }
    Ok(MatrixExpansionResult {
        order,
        at: xi.to_vec(),
        value,
        terms,
    })
}

/// Symbol of `P_A P_B` at `m`: column `k` is `P_A(P_B(U^m f_k)) (U^m)^*`.
pub fn matrix_compose_oracle(a: &MatrixSymbol, b: &MatrixSymbol, m: &MultiIndex) -> Result<MatrixElement> {
    if a.rank() != b.rank() {
        return Err(NctError::ShapeMismatch("symbol ranks differ".into()));
    }
    let r = a.rank();
    let word = TorusElement::word(a.theta(), m.clone());
    let back = word.star();
    let mut out = MatrixElement::zero(a.theta(), r);
    for k in 0..r {
        let col = apply_matrix(a, &apply_matrix(b, &ModuleVector::unit(word.clone(), k, r))?)?;
        for j in 0..r {
            out.set(j, k, col.get(j).try_mul(&back)?);
        }
    }
    Ok(out)
}

/// `sum_{|l|<N} (1/l!) d^l A(xi) delta^l B(xi)` with matrix products.
pub fn matrix_compose_expansion(
    a: &MatrixSymbol,
    b: &MatrixSymbol,
    xi: &[f64],
    n_terms: usize,
) -> Result<MatrixExpansionResult> {
    if n_terms == 0 {
        return Err(NctError::Precondition("expansion order N must be at least 1".into()));
    }
    if a.rank() != b.rank() {
        return Err(NctError::ShapeMismatch("symbol ranks differ".into()));
    }
    let b_xi = b.eval(xi)?;
    let mut terms = Vec::with_capacity(n_terms);
    for level in 0..n_terms {
        let mut t = MatrixElement::zero(a.theta(), a.rank());
        for l in indices_of_total(a.dim(), level) {
            let prod = a.deriv(&l, xi)?.try_mul(&b_xi.delta(&l)?)?;
            t = t.try_add(&prod.scale(Complex64::new(1.0 / l.factorial(), 0.0)))?;
        }
        terms.push(t);
    }
    finish(n_terms, xi, terms)
}

/// Scalar adjoint expansion through the matrix path, for `r = 1` parity.
pub fn scalar_adjoint_via_matrix(sym: &SharedSymbol, xi: &[f64], n_terms: usize) -> Result<TorusElement> {
    let m = MatrixSymbol::new(1, vec![Arc::clone(sym)])?;
    let out = matrix_adjoint_expansion(&m, xi, n_terms)?;
    let scalar = adjoint_expansion(sym.as_ref(), xi, n_terms)?;
    debug_assert!(out.value.get(0, 0).distance0(&scalar.value) < 1e-9);
    Ok(out.value.get(0, 0).clone())
}

/// Random module vectors against `sqrt(r k_rho)` with the entrywise maximal constant.
pub fn module_boundedness_check(sym: &MatrixSymbol, s: f64, cfg: &BoundednessConfig) -> Result<BoundednessOutcome> {
    let grid = SymbolGrid::default_for(sym.dim(), cfg.seed);
    let mut c_rho = 0.0_f64;
    let d = sym.order();
    for e in &sym.entries {
        c_rho = c_rho.max(verify_order(e.as_ref(), &grid, cfg.max_i, cfg.max_j)?.c_rho);
    }
    let r = sym.rank();
    let bound = kernel_bound(c_rho, d, r);
    // entry (j, l) maps H^s to H^{s - d_jl}, which embeds in H^{s-d}; the
    // Frobenius norm dominates the operator norm of the entry bounds
    let sound_bound = sym
        .entries
        .iter()
        .map(|e| schur_bound(e.as_ref(), s, cfg.radius).powi(2))
        .sum::<f64>()
        .sqrt();
    let mut rng = seeded(cfg.seed);
    let (mut max_ratio, mut violations, mut sound_violations) = (0.0_f64, 0, 0);
    for _ in 0..cfg.trials {
        let v = ModuleVector::new(
            (0..r)
                .map(|_| random_element(sym.theta(), cfg.radius, cfg.density, &mut rng))
                .collect(),
        )?;
        let nv = module_norm_s(&v, s);
        if nv == 0.0 {
            continue;
        }
        let ratio = module_norm_s(&apply_matrix(sym, &v)?, s - d) / nv;
        max_ratio = max_ratio.max(ratio);
        if ratio > bound * (1.0 + 1e-12) {
            violations += 1;
        }
        if ratio > sound_bound * (1.0 + 1e-12) {
            sound_violations += 1;
        }
    }
    Ok(BoundednessOutcome {
        s,
        order: d,
        c_rho,
        k_rho: c_rho * c_rho * 2f64.powf(d),
        r,
        bound,
        max_ratio,
        trials: cfg.trials,
        violations,
        sound_bound,
        sound_violations,
    })
}

/// Rellich extraction for module vectors; the squared tail of a difference is
/// bounded by `max(4, 2r) C^2 (1+R^2)^{t-s}`.
pub fn module_rellich_extract(seq: &[ModuleVector], s: f64, t: f64, bound: f64, eps: f64) -> Result<RellichOutcome> {
    if let Some(first) = seq.first() {
        if seq.iter().any(|v| v.rank() != first.rank()) {
            return Err(NctError::ShapeMismatch("module vectors of different rank".into()));
        }
        if seq.iter().any(|v| **v.theta() != **first.theta()) {
            return Err(NctError::ThetaMismatch);
        }
    }
    let r = seq.first().map(ModuleVector::rank).unwrap_or(1);
    let items: Vec<Coeffs> = seq
        .iter()
        .map(|v| {
            v.entries()
                .iter()
                .enumerate()
                .flat_map(|(j, e)| e.iter().map(move |(m, c)| ((j, m.clone()), *c)))
                .collect()
        })
        .collect();
    let norms: Vec<f64> = seq
        .iter()
        .map(|v| v.entries().iter().map(|e| sobolev_norm(e, s).powi(2)).sum::<f64>().sqrt())
        .collect();
    extract(&items, &norms, s, t, bound, eps, (2.0 * r as f64).max(4.0))
}

/// Row-major symbol specs.
pub fn matrix_symbol_from_specs(rows: &[Vec<SymbolSpec>], context: Option<&Arc<Theta>>) -> Result<MatrixSymbol> {
    let r = rows.len();
    if r == 0 || rows.iter().any(|row| row.len() != r) {
        return Err(NctError::ShapeMismatch("matrix symbol must be square".into()));
    }
    let mut theta = context.cloned();
    if theta.is_none() {
        theta = rows.iter().flatten().find_map(|s| s.theta()).map(Arc::new);
    }
    let entries = rows
        .iter()
        .flatten()
        .map(|s| s.to_symbol(theta.as_ref()))
        .collect::<Result<_>>()?;
    MatrixSymbol::new(r, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{LambdaSymbol, PolynomialSymbol};
    use nalgebra::DMatrix;

    fn poly(t: &Arc<Theta>, terms: Vec<(Vec<i64>, TorusElement)>) -> SharedSymbol {
        Arc::new(PolynomialSymbol::new(t, terms.into_iter().map(|(e, c)| (MultiIndex::from(e), c)).collect()).unwrap())
    }

    fn sample(t: &Arc<Theta>) -> MatrixSymbol {
        let u = TorusElement::generator(t, 0);
        let v = TorusElement::generator(t, 1);
        MatrixSymbol::new(
            2,
            vec![
                poly(t, vec![(vec![1, 0], u.clone()), (vec![0, 0], TorusElement::one(t))]),
                poly(t, vec![(vec![0, 1], v.clone())]),
                poly(t, vec![(vec![0, 0], u.try_mul(&v).unwrap())]),
                poly(t, vec![(vec![1, 1], TorusElement::one(t)), (vec![0, 0], v.star())]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn adjoint_oracle_matches_block_gns() {
        let t = Arc::new(Theta::two(0.37));
        let a = sample(&t);
        for m in [MultiIndex::from([0, 0]), MultiIndex::from([1, -1]), MultiIndex::from([2, 1])] {
            let oracle = matrix_adjoint_oracle(&a, &m.as_f64()).unwrap();
            let gns = matrix_gns_adjoint(&a, &m, 6).unwrap();
            assert!(oracle.max_distance0(&gns) < 1e-10);
        }
    }

    #[test]
    fn expansions_exact_for_polynomials() {
        let t = Arc::new(Theta::two(0.21));
        let a = sample(&t);
        let xi = [2.0, -1.0];
        let adj = matrix_adjoint_expansion(&a, &xi, 4).unwrap();
        assert!(adj.value.max_distance0(&matrix_adjoint_oracle(&a, &xi).unwrap()) < 1e-10);
        let m = MultiIndex::from([2, -1]);
        let comp = matrix_compose_expansion(&a, &a, &xi, 4).unwrap();
        let oracle = matrix_compose_oracle(&a, &a, &m).unwrap();
        assert!(comp.value.max_distance0(&oracle) < 1e-10);
    }

    #[test]
    fn rank_one_matches_scalar() {
        let t = Arc::new(Theta::two(0.4));
        let s: SharedSymbol = Arc::new(LambdaSymbol::with_coeff(-2.0, TorusElement::generator(&t, 0)));
        let via = scalar_adjoint_via_matrix(&s, &[1.5, 0.5], 3).unwrap();
        let direct = adjoint_expansion(s.as_ref(), &[1.5, 0.5], 3).unwrap();
        assert!(via.distance0(&direct.value) < 1e-14);
    }

    #[test]
    fn compressed_operator_lands_in_range() {
        let t = Arc::new(Theta::two(0.3));
        let h = Complex64::new(0.5, 0.0);
        let e = MatrixElement::from_scalars(&t, &DMatrix::from_row_slice(2, 2, &[h, h, h, h])).unwrap();
        let c = sample(&t).compressed(&e).unwrap();
        let mut rng = seeded(5);
        for _ in 0..5 {
            let v = ModuleVector::new(vec![random_element(&t, 2, 0.7, &mut rng), random_element(&t, 2, 0.7, &mut rng)])
                .unwrap();
            let w = apply_matrix(&c, &v).unwrap();
            assert!(super::super::project(&w, &e).unwrap().max_distance0(&w) < 1e-10);
        }
    }

    #[test]
    fn diagonal_lambda_bounded() {
        let t = Arc::new(Theta::two(0.3));
        let l: SharedSymbol = Arc::new(LambdaSymbol::new(&t, 1.0));
        let a = MatrixSymbol::diagonal(vec![Arc::clone(&l), l]).unwrap();
        let out = module_boundedness_check(&a, 1.5, &BoundednessConfig { trials: 20, ..Default::default() }).unwrap();
        assert!(out.passed(), "{out:?}");
    }

    #[test]
    fn module_rellich_rejects_mixed_rank() {
        let t = Arc::new(Theta::two(0.3));
        let a = ModuleVector::zero(&t, 2);
        let b = ModuleVector::zero(&t, 3);
        assert!(module_rellich_extract(&[a, b], 2.0, 1.0, 1.0, 0.1).is_err());
    }
}
