//! An independent realization of the free-field algebras on a Fock-type
//! space: commuting creation symbols `g₍₋₁₋ᵢ₎` for η, β, γ, tensored with
//! Laurent polynomials in `λ = λ₊` and its jets. Generator modes are
//! implemented directly, and composite modes come from the Borcherds formula
//! for normally ordered products.

use std::collections::BTreeMap;

use chiral_core::scalar::Scalar;
use chiral_core::vertex::{FactorSpec, Field, FreeFieldAlgebra, Monomial, Part};

/// `λ^charge · Π λ⁽ʲ⁾`, jets sorted descending.
pub type RMono = (i32, Vec<u32>);
/// Creation symbols `(generator, i)` meaning `g₍₋₁₋ᵢ₎`, sorted.
pub type Basis = (Vec<(usize, u32)>, RMono);
pub type State = BTreeMap<Basis, Scalar>;

pub fn add(state: &mut State, b: Basis, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = state.entry(b.clone()).or_insert_with(Scalar::zero);
    *slot = &*slot + &c;
    if slot.is_zero() {
        state.remove(&b);
    }
}

fn fact(n: u32) -> i64 {
    (1..=i64::from(n)).product()
}

fn choose(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn sorted_desc(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn r_mul(a: &RMono, b: &RMono) -> RMono {
    let mut jets = a.1.clone();
    jets.extend_from_slice(&b.1);
    (a.0 + b.0, sorted_desc(jets))
}

/// `η₍ₘ₎` on functions, a derivation: `η₍ₘ₎λ⁽ʲ⁾ = j!/(j-m)!·λ⁽ʲ⁻ᵐ⁾`.
fn r_eta(m: u32, f: &RMono) -> Vec<(RMono, i64)> {
    let mut out = Vec::new();
    if m == 0 && f.0 != 0 {
        out.push((f.clone(), i64::from(f.0)));
    }
    for idx in 0..f.1.len() {
        let j = f.1[idx];
        if j < m {
            continue;
        }
        let mut jets = f.1.clone();
        jets.remove(idx);
        let mut charge = f.0;
        if j == m {
            charge += 1;
        } else {
            jets.push(j - m);
        }
        out.push(((charge, sorted_desc(jets)), fact(j) / fact(j - m)));
    }
    out
}

/// `∂` on functions: `∂λᶜ = c·λᶜ⁻¹λ⁽¹⁾`, `∂λ⁽ʲ⁾ = λ⁽ʲ⁺¹⁾`.
fn r_translate(f: &RMono) -> Vec<(RMono, i64)> {
    let mut out = Vec::new();
    if f.0 != 0 {
        let mut jets = f.1.clone();
        jets.push(1);
        out.push(((f.0 - 1, sorted_desc(jets)), i64::from(f.0)));
    }
    for idx in 0..f.1.len() {
        let mut jets = f.1.clone();
        jets[idx] += 1;
        out.push(((f.0, sorted_desc(jets)), 1));
    }
    out
}

/// A right-nested product `:(∂^m₁g₁) :(∂^m₂g₂) … h:…:` with `h` a function.
#[derive(Clone, Debug)]
pub struct OField {
    vectors: Vec<(usize, u32)>,
    h: RMono,
}

pub struct Oracle {
    weights: Vec<u32>,
    /// `[g_λ h] = Σⱼ c_j λʲ`, central.
    central: Vec<Vec<Vec<(u32, Scalar)>>>,
    eta: Option<usize>,
    /// Oracle generator index of each engine slot: `(β, γ)` or `(η, _)`.
    slots: Vec<(usize, usize)>,
}

impl Oracle {
    pub fn for_algebra(alg: &FreeFieldAlgebra) -> Oracle {
        let mut weights = Vec::new();
        let mut pairs: Vec<(usize, usize, u32, Scalar)> = Vec::new();
        let mut eta = None;
        let mut slots = Vec::new();
        for f in alg.factors() {
            match f {
                FactorSpec::BetaGamma { .. } => {
                    let b = weights.len();
                    weights.extend([1, 0]);
                    pairs.push((b, b + 1, 0, Scalar::one()));
                    pairs.push((b + 1, b, 0, Scalar::from_int(-1)));
                    slots.push((b, b + 1));
                }
                FactorSpec::El { eta_norm, .. } => {
                    assert!(eta.is_none(), "one EL factor");
                    let e = weights.len();
                    weights.push(1);
                    let norm = eta_norm.eval_at_level(alg.level()).unwrap();
                    pairs.push((e, e, 1, norm));
                    eta = Some(e);
                    slots.push((e, usize::MAX));
                }
            }
        }
        let n = weights.len();
        let mut central = vec![vec![Vec::new(); n]; n];
        for (g, h, j, c) in pairs {
            central[g][h].push((j, c));
        }
        Oracle {
            weights,
            central,
            eta,
            slots,
        }
    }

    fn weight(&self, b: &Basis) -> i64 {
        let v: u32 = b.0.iter().map(|(g, i)| self.weights[*g] + i).sum();
        i64::from(v + b.1 .1.iter().sum::<u32>())
    }

    fn field_weight(&self, f: &OField) -> i64 {
        let v: u32 = f.vectors.iter().map(|(g, m)| self.weights[*g] + m).sum();
        i64::from(v + f.h.1.iter().sum::<u32>())
    }

    /// `g₍ₙ₎` on a basis state.
    fn vec_mode(&self, g: usize, n: i64, b: &Basis) -> State {
        let mut out = State::new();
        if n < 0 {
            let mut cr = b.0.clone();
            cr.push((g, u32::try_from(-1 - n).unwrap()));
            cr.sort_unstable();
            add(&mut out, (cr, b.1.clone()), Scalar::one());
            return out;
        }
        for idx in 0..b.0.len() {
            let (h, i) = b.0[idx];
            let j = n - i64::from(i);
            if j < 0 {
                continue;
            }
            for (cj, c) in &self.central[g][h] {
                if i64::from(*cj) == j {
                    let mut cr = b.0.clone();
                    cr.remove(idx);
                    let factor = choose(n, j) * fact(*cj);
                    add(&mut out, (cr, b.1.clone()), c.mul_int(factor));
                }
            }
        }
        if Some(g) == self.eta {
            for (f, c) in r_eta(u32::try_from(n).unwrap(), &b.1) {
                add(&mut out, (b.0.clone(), f), Scalar::from_int(c));
            }
        }
        out
    }

    /// Modes of the function field `h`, commuted past the creation symbols.
    fn fun_mode(&self, h: &RMono, n: i64, b: &Basis) -> State {
        let mut out = State::new();
        let Some((&(v, i), rest)) = b.0.split_first() else {
            if n >= 0 {
                return out;
            }
            let j = u32::try_from(-1 - n).unwrap();
            let mut terms = vec![(h.clone(), 1i64)];
            for _ in 0..j {
                let mut next = Vec::new();
                for (t, c) in &terms {
                    next.extend(r_translate(t).into_iter().map(|(u, d)| (u, c * d)));
                }
                terms = next;
            }
            for (t, c) in terms {
                let c = Scalar::from_int(c).div_int(fact(j));
                add(&mut out, (Vec::new(), r_mul(&t, &b.1)), c);
            }
            return out;
        };
        let inner: Basis = (rest.to_vec(), b.1.clone());
        for (sb, c) in self.fun_mode(h, n, &inner) {
            let mut cr = sb.0;
            cr.push((v, i));
            cr.sort_unstable();
            add(&mut out, (cr, sb.1), c);
        }
        if Some(v) == self.eta {
            // [η₍₋ₚ₎, h₍ₙ₎] = Σⱼ C(-p, j)·(η₍ⱼ₎h)₍ₙ₋ₚ₋ⱼ₎
            let p = i64::from(i) + 1;
            let max_j = h.1.first().copied().unwrap_or(0);
            for j in 0..=max_j {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let binom = sign * choose(p + i64::from(j) - 1, i64::from(j));
                for (dh, c) in r_eta(j, h) {
                    for (sb, d) in self.fun_mode(&dh, n - p - i64::from(j), &inner) {
                        add(&mut out, sb, d.mul_int(-binom * c));
                    }
                }
            }
        }
        out
    }

    /// `(∂ᵐg)₍ₚ₎ = (-1)ᵐ p(p-1)…(p-m+1)·g₍ₚ₋ₘ₎`.
    fn deriv_mode(&self, g: usize, m: u32, p: i64, b: &Basis) -> State {
        let factor: i64 = (0..i64::from(m)).map(|t| -(p - t)).product();
        if factor == 0 {
            return State::new();
        }
        self.vec_mode(g, p - i64::from(m), b)
            .into_iter()
            .map(|(k, c)| (k, c.mul_int(factor)))
            .collect()
    }

    fn apply_state(&self, s: &State, f: impl Fn(&Basis) -> State) -> State {
        let mut out = State::new();
        for (b, c) in s {
            for (b2, d) in f(b) {
                add(&mut out, b2, &d * c);
            }
        }
        out
    }

    /// `F₍ₙ₎` on a basis state, by `(:xy:)₍ₙ₎ = Σⱼ x₍₋₁₋ⱼ₎y₍ₙ₊ⱼ₎ + y₍ₙ₋₁₋ⱼ₎x₍ⱼ₎`.
    fn mode(&self, f: &OField, n: i64, b: &Basis) -> State {
        let Some((&(g, m), rest)) = f.vectors.split_first() else {
            return self.fun_mode(&f.h, n, b);
        };
        let y = OField {
            vectors: rest.to_vec(),
            h: f.h.clone(),
        };
        let w = self.weight(b);
        let dx = i64::from(self.weights[g] + m);
        let dy = self.field_weight(&y);
        let mut out = State::new();
        let mut j = 0i64;
        while w + dy - (n + j) > 0 {
            let s = self.mode(&y, n + j, b);
            let s = self.apply_state(&s, |bb| self.deriv_mode(g, m, -1 - j, bb));
            for (k, c) in s {
                add(&mut out, k, c);
            }
            j += 1;
        }
        for j in 0..(w + dx).max(0) {
            let s = self.deriv_mode(g, m, j, b);
            let s = self.apply_state(&s, |bb| self.mode(&y, n - 1 - j, bb));
            for (k, c) in s {
                add(&mut out, k, c);
            }
        }
        out
    }

    pub fn vacuum() -> Basis {
        (Vec::new(), (0, Vec::new()))
    }

    fn field_of(&self, m: &Monomial) -> OField {
        let mut vectors = Vec::new();
        let mut h = (0, Vec::new());
        for (slot, part) in m.parts().iter().enumerate() {
            let (a, b) = self.slots[slot];
            match part {
                Part::BetaGamma { beta, gamma } => {
                    vectors.extend(beta.iter().map(|&o| (a, o)));
                    vectors.extend(gamma.iter().map(|&o| (b, o)));
                }
                Part::El { eta, jets, charge } => {
                    vectors.extend(eta.iter().map(|&o| (a, o)));
                    h = (*charge, jets.clone());
                }
            }
        }
        OField { vectors, h }
    }

    pub fn state_of(&self, f: &Field) -> State {
        let mut out = State::new();
        for (id, c) in f.terms() {
            let of = self.field_of(&id.get());
            for (b, d) in self.mode(&of, -1, &Self::vacuum()) {
                add(&mut out, b, &d * c);
            }
        }
        out
    }

    /// `a₍ₙ₎` applied to the state of `b`.
    pub fn product(&self, a: &Field, n: i64, b: &Field) -> State {
        let sb = self.state_of(b);
        let mut out = State::new();
        for (id, c) in a.terms() {
            let of = self.field_of(&id.get());
            let s = self.apply_state(&sb, |bb| self.mode(&of, n, bb));
            for (k, d) in s {
                add(&mut out, k, &d * c);
            }
        }
        out
    }
}

/// All EL basis monomials of weight at most `max` with charge in `charges`.
pub fn el_basis(max: u32, charges: &[i32]) -> Vec<Monomial> {
    // atoms: (is_eta, order, weight)
    let mut atoms = Vec::new();
    for m in 0..max {
        atoms.push((true, m, m + 1));
    }
    for j in 1..=max {
        atoms.push((false, j, j));
    }
    fn rec(atoms: &[(bool, u32, u32)], start: usize, left: u32, cur: &mut Vec<(bool, u32)>, out: &mut Vec<Vec<(bool, u32)>>) {
        out.push(cur.clone());
        for i in start..atoms.len() {
            let (e, o, w) = atoms[i];
            if w <= left {
                cur.push((e, o));
                rec(atoms, i, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut words = Vec::new();
    rec(&atoms, 0, max, &mut Vec::new(), &mut words);
    let mut out = Vec::new();
    for w in &words {
        for &charge in charges {
            let eta = w.iter().filter(|a| a.0).map(|a| a.1).collect();
            let jets = w.iter().filter(|a| !a.0).map(|a| a.1).collect();
            out.push(Monomial::from_parts(vec![Part::El { eta, jets, charge }]));
        }
    }
    out
}

fn grading(m: &Monomial) -> i64 {
    i64::from(m.grading())
}

/// Compares every engine product `a₍ₙ₎b` over `basis` with the mode action on
/// the state of `b`. Returns the number of comparisons and the first mismatch.
pub fn compare_all(alg: &FreeFieldAlgebra, basis: &[Monomial], extra_negative: i64) -> (usize, Option<String>) {
    let oracle = Oracle::for_algebra(alg);
    let mut compared = 0;
    for ma in basis {
        for mb in basis {
            let a = Field::monomial(ma.clone());
            let b = Field::monomial(mb.clone());
            let top = grading(ma) + grading(mb);
            for n in -1 - extra_negative..=top {
                let engine = alg.nth_product(&a, n, &b).unwrap();
                if oracle.state_of(&engine) != oracle.product(&a, n, &b) {
                    let msg = format!(
                        "a = {}, b = {}, n = {n}: engine gave {}",
                        alg.render_field(&a),
                        alg.render_field(&b),
                        alg.render_field(&engine)
                    );
                    return (compared, Some(msg));
                }
                compared += 1;
            }
        }
    }
    (compared, None)
}

/// `L₍₃₎L = (c/2)·|0⟩`, read off in the Fock space.
pub fn oracle_central_charge(alg: &FreeFieldAlgebra, l: &Field) -> Scalar {
    let oracle = Oracle::for_algebra(alg);
    let s = oracle.product(l, 3, l);
    assert!(s.keys().all(|b| *b == Oracle::vacuum()), "L₍₃₎L is not a vacuum multiple");
    s.get(&Oracle::vacuum()).cloned().unwrap_or_else(Scalar::zero).mul_int(2)
}

