//! λ-bracket calculus on canonical monomials.
//!
//! A canonical monomial is `:v₁:v₂:…:vᵣ F:…::` with vector generators `vᵢ`
//! (derivatives of β or η) in front of a commutative function monomial `F`.
//! Everything reduces to three primitive brackets:
//!
//! * vector–vector: central, `[∂ᵃη_λ ∂ᵇη] = (-1)ᵃ·norm·λ^(a+b+1)`;
//! * vector–function: a derivation of the function sector;
//! * function–vector: skew-symmetry of the above;
//!
//! extended by the left and right non-commutative Wick formulas, with
//! quasi-associativity and the commutator formula for re-nesting normally
//! ordered products into canonical order.

use crate::scalar::Scalar;

use super::field::{binomial, factorial, Field, LambdaPoly};
use super::monomial::{insert_desc, remove_one, MonoId, Monomial, Part, VecGen};
use super::{FreeFieldAlgebra, VertexError};

impl FreeFieldAlgebra {
    pub fn derive(&self, a: &Field) -> Result<Field, VertexError> {
        self.check(a)?;
        Ok(self.derive_field(a))
    }

    pub fn derive_n(&self, a: &Field, n: u32) -> Result<Field, VertexError> {
        self.check(a)?;
        let mut out = a.clone();
        for _ in 0..n {
            out = self.derive_field(&out);
        }
        Ok(out)
    }

    /// The normally ordered product `:ab:`.
    pub fn nprod(&self, a: &Field, b: &Field) -> Result<Field, VertexError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.nprod_field(a, b))
    }

    /// `[a_λ b]` as a polynomial in λ.
    pub fn lambda_bracket(&self, a: &Field, b: &Field) -> Result<LambdaPoly, VertexError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.bracket_field(a, b))
    }

    /// `a₍ₙ₎b` for any integer `n`; negative products go through `nprod`.
    pub fn nth_product(&self, a: &Field, n: i64, b: &Field) -> Result<Field, VertexError> {
        self.check(a)?;
        self.check(b)?;
        if n >= 0 {
            let n = u32::try_from(n).expect("product index fits u32");
            return Ok(self.bracket_field(a, b).nth_product(n));
        }
        let j = u32::try_from(-n - 1).expect("product index fits u32");
        let mut da = a.clone();
        for _ in 0..j {
            da = self.derive_field(&da);
        }
        let da = da.scale(&Scalar::one().try_div(&factorial(j)).expect("nonzero"));
        Ok(self.nprod_field(&da, b))
    }

    /// `[b_λ a]` from `p = [a_λ b]` by skew-symmetry: `-Σₙ (-λ-∂)ⁿ pₙ`.
    pub fn skew(&self, p: &LambdaPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (n, pn) in p.coeffs() {
            let sign = if n % 2 == 0 { -1 } else { 1 };
            let mut d = pn.clone();
            // d = ∂^(n-j) pn for j from n down to 0
            let mut derivs = vec![d.clone()];
            for _ in 0..n {
                d = self.derive_field(&d);
                derivs.push(d.clone());
            }
            for j in 0..=n {
                let c = binomial(n, j).mul_int(sign);
                out.add_at(j, &derivs[(n - j) as usize], &c);
            }
        }
        out
    }

    pub(crate) fn derive_field(&self, a: &Field) -> Field {
        let mut out = Field::zero();
        for (id, c) in a.terms() {
            out.add_scaled(&self.derive_mono(&id.get()), c);
        }
        out
    }

    fn derive_mono(&self, m: &Monomial) -> Field {
        let mut out = Field::zero();
        for (slot, part) in m.parts().iter().enumerate() {
            match part {
                Part::BetaGamma { beta, gamma } => {
                    for (list, is_beta) in [(beta, true), (gamma, false)] {
                        for (o, mult) in multiplicities(list) {
                            let mut t = m.clone();
                            if let Part::BetaGamma { beta, gamma } = &mut t.parts_mut()[slot] {
                                let v = if is_beta { beta } else { gamma };
                                remove_one(v, o);
                                insert_desc(v, o + 1);
                            }
                            out.add_term(MonoId::intern(t), &Scalar::from_int(mult));
                        }
                    }
                }
                Part::El { eta, jets, charge } => {
                    for (o, mult) in multiplicities(eta) {
                        let mut t = m.clone();
                        if let Part::El { eta, .. } = &mut t.parts_mut()[slot] {
                            remove_one(eta, o);
                            insert_desc(eta, o + 1);
                        }
                        out.add_term(MonoId::intern(t), &Scalar::from_int(mult));
                    }
                    for (o, mult) in multiplicities(jets) {
                        let mut t = m.clone();
                        if let Part::El { jets, .. } = &mut t.parts_mut()[slot] {
                            remove_one(jets, o);
                            insert_desc(jets, o + 1);
                        }
                        out.add_term(MonoId::intern(t), &Scalar::from_int(mult));
                    }
                    if *charge != 0 {
                        // ∂λⁿ = n·λⁿ⁻¹·∂λ
                        let mut t = m.clone();
                        if let Part::El { jets, charge, .. } = &mut t.parts_mut()[slot] {
                            *charge -= 1;
                            insert_desc(jets, 1);
                        }
                        out.add_term(MonoId::intern(t), &Scalar::from_int(i64::from(*charge)));
                    }
                }
            }
        }
        out
    }

    fn insert_vector(&self, f: &Field, v: VecGen) -> Field {
        let mut out = Field::zero();
        for (id, c) in f.terms() {
            out.add_term(MonoId::intern(id.get().with_vector(v)), c);
        }
        out
    }

    pub(crate) fn nprod_field(&self, a: &Field, b: &Field) -> Field {
        let mut out = Field::zero();
        for (ia, ca) in a.terms() {
            for (ib, cb) in b.terms() {
                out.add_scaled(&self.nprod_mono(ia, ib), &(ca * cb));
            }
        }
        out
    }

    pub(crate) fn bracket_field(&self, a: &Field, b: &Field) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (ia, ca) in a.terms() {
            for (ib, cb) in b.terms() {
                out.add_scaled(&self.bracket_mono(ia, ib), &(ca * cb));
            }
        }
        out
    }

    fn nprod_mono(&self, a: MonoId, b: MonoId) -> Field {
        if let Some(hit) = self.caches.nprod.read().get(&(a, b)) {
            return hit.clone();
        }
        let result = self.nprod_mono_uncached(a, b);
        self.caches.nprod.write().insert((a, b), result.clone());
        result
    }

    fn nprod_mono_uncached(&self, a: MonoId, b: MonoId) -> Field {
        let am = a.get();
        let bm = b.get();
        if am.is_vacuum() {
            return Field::term(b, Scalar::one());
        }
        if bm.is_vacuum() {
            return Field::term(a, Scalar::one());
        }
        match am.split_first_vector() {
            None => match bm.split_first_vector() {
                None => Field::monomial(am.function_product(&bm)),
                Some((w, b_rest)) => {
                    // :F:w B':: = :w:F B':: + Σⱼ (-1)ʲ/(j+1)·:(∂ʲ⁺¹ Hⱼ) B':,  [F_λ w] = Σ λʲ Hⱼ
                    let b_rest_id = MonoId::intern(b_rest);
                    let b_rest_f = Field::term(b_rest_id, Scalar::one());
                    let mut out = self.insert_vector(&self.nprod_mono(a, b_rest_id), w);
                    let h = self.fn_vec(&am, w);
                    for (j, hj) in h.coeffs() {
                        let mut d = hj.clone();
                        for _ in 0..=j {
                            d = self.derive_field(&d);
                        }
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        let c = Scalar::from_ratio(sign, i64::from(j) + 1);
                        out.add_scaled(&self.nprod_field(&d, &b_rest_f), &c);
                    }
                    out
                }
            },
            Some((v, a_rest)) => {
                // quasi-associativity:
                // ::v A':B: = :v:A'B:: + Σⱼ :(∂ʲ⁺¹v/(j+1)!)(A'₍ⱼ₎B): + Σⱼ :(∂ʲ⁺¹A'/(j+1)!)(v₍ⱼ₎B):
                let a_rest_id = MonoId::intern(a_rest);
                let mut out = self.insert_vector(&self.nprod_mono(a_rest_id, b), v);
                let x = self.bracket_mono(a_rest_id, b);
                for (j, xj) in x.coeffs() {
                    let dv = VecGen {
                        slot: v.slot,
                        order: v.order + j + 1,
                    };
                    out.add_scaled(&self.insert_vector(xj, dv), &Scalar::from_ratio(1, i64::from(j) + 1));
                }
                let v_id = MonoId::intern(self.vacuum_monomial().with_vector(v));
                let y = self.bracket_mono(v_id, b);
                if !y.is_zero() {
                    let mut d = Field::term(a_rest_id, Scalar::one());
                    let mut next_j = 0;
                    for (j, yj) in y.coeffs() {
                        while next_j <= j {
                            d = self.derive_field(&d);
                            next_j += 1;
                        }
                        out.add_scaled(&self.nprod_field(&d, yj), &Scalar::from_ratio(1, i64::from(j) + 1));
                    }
                }
                out
            }
        }
    }

    fn bracket_mono(&self, a: MonoId, b: MonoId) -> LambdaPoly {
        if let Some(hit) = self.caches.bracket.read().get(&(a, b)) {
            return hit.clone();
        }
        let result = self.bracket_mono_uncached(a, b);
        self.caches.bracket.write().insert((a, b), result.clone());
        result
    }

    fn bracket_mono_uncached(&self, a: MonoId, b: MonoId) -> LambdaPoly {
        let am = a.get();
        let bm = b.get();
        if am.is_vacuum() || bm.is_vacuum() {
            return LambdaPoly::zero();
        }
        let mut out = LambdaPoly::zero();
        match am.split_first_vector() {
            None => {
                let Some((w, b_rest)) = bm.split_first_vector() else {
                    return out;
                };
                // left Wick: [F_λ :w B':] = :[F_λ w] B': + :w [F_λ B']: + ∫₀^λ [[F_λ w]_μ B'] dμ
                let b_rest_id = MonoId::intern(b_rest);
                let b_rest_f = Field::term(b_rest_id, Scalar::one());
                let h = self.fn_vec(&am, w);
                for (n, hn) in h.coeffs() {
                    out.add_at(n, &self.nprod_field(hn, &b_rest_f), &Scalar::one());
                    let k = self.bracket_field(hn, &b_rest_f);
                    for (m, km) in k.coeffs() {
                        out.add_at(n + m + 1, km, &Scalar::from_ratio(1, i64::from(m) + 1));
                    }
                }
                for (n, xn) in self.bracket_mono(a, b_rest_id).coeffs() {
                    out.add_at(n, &self.insert_vector(xn, w), &Scalar::one());
                }
            }
            Some((v, a_rest)) if a_rest.is_vacuum() => match bm.split_first_vector() {
                None => return self.vec_fn(v, &bm),
                Some((w, b_rest)) => {
                    let b_rest_id = MonoId::intern(b_rest);
                    if let Some((p, c)) = self.vec_vec(v, w) {
                        out.add_at(p, &Field::term(b_rest_id, Scalar::one()), &c);
                    }
                    for (n, xn) in self.bracket_mono(a, b_rest_id).coeffs() {
                        out.add_at(n, &self.insert_vector(xn, w), &Scalar::one());
                    }
                }
            },
            Some((v, a_rest)) => {
                // right Wick:
                // [:vA':_λ B] = :(e^{∂∂λ}v)[A'_λ B]: + :(e^{∂∂λ}A')[v_λ B]: + ∫₀^λ [A'_μ [v_{λ-μ} B]] dμ
                let a_rest_id = MonoId::intern(a_rest);
                let a_rest_f = Field::term(a_rest_id, Scalar::one());
                let v_id = MonoId::intern(self.vacuum_monomial().with_vector(v));
                let x = self.bracket_mono(a_rest_id, b);
                let y = self.bracket_mono(v_id, b);
                for (n, xn) in x.coeffs() {
                    for j in 0..=n {
                        let dv = VecGen {
                            slot: v.slot,
                            order: v.order + j,
                        };
                        out.add_at(n - j, &self.insert_vector(xn, dv), &binomial(n, j));
                    }
                }
                if !y.is_zero() {
                    let max_n = y.degree().unwrap_or(0);
                    let mut derivs = vec![a_rest_f.clone()];
                    for j in 1..=max_n as usize {
                        let next = self.derive_field(&derivs[j - 1]);
                        derivs.push(next);
                    }
                    for (n, yn) in y.coeffs() {
                        for j in 0..=n {
                            let prod = self.nprod_field(&derivs[j as usize], yn);
                            out.add_at(n - j, &prod, &binomial(n, j));
                        }
                        let z = self.bracket_field(&a_rest_f, yn);
                        for (m, zm) in z.coeffs() {
                            // ∫₀^λ μᵐ (λ-μ)ⁿ dμ = m! n! / (m+n+1)! · λ^(m+n+1)
                            let c = (factorial(m) * factorial(n))
                                .try_div(&factorial(m + n + 1))
                                .expect("nonzero");
                            out.add_at(m + n + 1, zm, &c);
                        }
                    }
                }
            }
        }
        out
    }

    /// `[∂ᵃv_λ ∂ᵇw]` for vector generators: `c·λ^p·vacuum` or nothing.
    fn vec_vec(&self, v: VecGen, w: VecGen) -> Option<(u32, Scalar)> {
        if v.slot != w.slot {
            return None;
        }
        let norm = self.eta_norm(v.slot)?;
        let c = if v.order.is_multiple_of(2) { norm.clone() } else { -norm };
        Some((v.order + w.order + 1, c))
    }

    /// `[∂ᵃv_λ F]` for a function monomial `F`: `(-λ)ᵃ` times the derivation
    /// `v` acting factor by factor.
    fn vec_fn(&self, v: VecGen, f: &Monomial) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        match &f.parts()[v.slot] {
            Part::BetaGamma { gamma, .. } => {
                // [β_λ ∂ᵐγ] = λᵐ
                for (m, mult) in multiplicities(gamma) {
                    let mut t = f.clone();
                    if let Part::BetaGamma { gamma, .. } = &mut t.parts_mut()[v.slot] {
                        remove_one(gamma, m);
                    }
                    out.add_at(m, &Field::monomial(t), &Scalar::from_int(mult));
                }
            }
            Part::El { jets, charge, .. } => {
                if *charge != 0 {
                    out.add_at(0, &Field::monomial(f.clone()), &Scalar::from_int(i64::from(*charge)));
                }
                // [η_λ ∂ᵐλ₊] = Σⱼ C(m,j) λʲ ∂^(m-j)λ₊
                for (m, mult) in multiplicities(jets) {
                    for j in 0..=m {
                        let mut t = f.clone();
                        if let Part::El { jets, charge, .. } = &mut t.parts_mut()[v.slot] {
                            remove_one(jets, m);
                            if j == m {
                                *charge += 1;
                            } else {
                                insert_desc(jets, m - j);
                            }
                        }
                        out.add_at(j, &Field::monomial(t), &binomial(m, j).mul_int(mult));
                    }
                }
            }
        }
        if v.order == 0 {
            return out;
        }
        let sign = if v.order.is_multiple_of(2) { 1 } else { -1 };
        out.shift(v.order).scale(&Scalar::from_int(sign))
    }

    /// `[F_λ ∂ᵇw]` by skew-symmetry.
    fn fn_vec(&self, f: &Monomial, w: VecGen) -> LambdaPoly {
        self.skew(&self.vec_fn(w, f))
    }
}

/// Distinct entries of a sorted list with their multiplicities.
fn multiplicities(v: &[u32]) -> Vec<(u32, i64)> {
    let mut out: Vec<(u32, i64)> = Vec::new();
    for &x in v {
        match out.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}
