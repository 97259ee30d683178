//! Derived connectives and operators, each building a primitive tree.
//!
//! Conjunctions over lists are folded to the left and the empty conjunction
//! is `⊤`. Implication is always `¬(φ ∧ ¬ψ)`, so that two spellings of the
//! same abbreviation are structurally equal.

use super::{Event, Formula, Group, Supergroup, Term, ONE, UNDEF, ZERO};

/// `⊤ := (↑ = ↑)`.
pub fn top() -> Formula {
    Formula::eq(Term::undef(), Term::undef())
}

/// `⊥ := ¬⊤`.
pub fn bot() -> Formula {
    Formula::not(top())
}

pub fn is_top(phi: &Formula) -> bool {
    *phi == top()
}

/// `?_φ := 1|_φ 0`.
pub fn test(phi: Formula) -> Term {
    Term::ite(Term::constant(ONE), phi, Term::constant(ZERO))
}

/// `x↑ := (x = ↑)`.
pub fn undefined(x: Term) -> Formula {
    Formula::eq(x, Term::undef())
}

/// `x↓ := ¬x↑`.
pub fn defined(x: Term) -> Formula {
    Formula::not(undefined(x))
}

/// `x̄↓ := ⋀ xᵢ↓`.
pub fn defined_all(xs: impl IntoIterator<Item = Term>) -> Formula {
    conj(xs.into_iter().map(defined))
}

/// Left-folded conjunction; `⊤` for no conjuncts.
pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Formula {
    let mut iter = parts.into_iter();
    match iter.next() {
        None => top(),
        Some(first) => iter.fold(first, Formula::and),
    }
}

/// Left-folded disjunction; `⊥` for no disjuncts.
pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Formula {
    let mut iter = parts.into_iter();
    match iter.next() {
        None => bot(),
        Some(first) => iter.fold(first, or),
    }
}

/// `φ → ψ := ¬(φ ∧ ¬ψ)`.
pub fn implies(phi: Formula, psi: Formula) -> Formula {
    Formula::not(Formula::and(phi, Formula::not(psi)))
}

/// `φ ∨ ψ := ¬(¬φ ∧ ¬ψ)`.
pub fn or(phi: Formula, psi: Formula) -> Formula {
    Formula::not(Formula::and(Formula::not(phi), Formula::not(psi)))
}

/// `φ ↔ ψ := (φ → ψ) ∧ (ψ → φ)`.
pub fn iff(phi: Formula, psi: Formula) -> Formula {
    Formula::and(implies(phi.clone(), psi.clone()), implies(psi, phi))
}

/// `x ≠ y := ¬(x = y)`.
pub fn neq(x: Term, y: Term) -> Formula {
    Formula::not(Formula::eq(x, y))
}

/// `K_A^θ φ := K_A(θ → φ)`.
pub fn know_cond(group: &Group, theta: &Formula, phi: Formula) -> Formula {
    Formula::know(group.clone(), implies(theta.clone(), phi))
}

/// `K_A^θ x := K_A^θ(x = x_A^θ)`.
pub fn know_value(group: &Group, theta: &Formula, x: &Term) -> Formula {
    let hyp = Term::desc(x.clone(), group.clone(), theta.clone());
    know_cond(group, theta, Formula::eq(x.clone(), hyp))
}

/// `K_A^θ x̄ := ⋀ K_A^θ xᵢ`.
pub fn know_values(group: &Group, theta: &Formula, xs: &[Term]) -> Formula {
    conj(xs.iter().map(|x| know_value(group, theta, x)))
}

/// `⟨K_A⟩φ := ¬K_A¬φ`.
pub fn possible(group: &Group, phi: Formula) -> Formula {
    Formula::not(Formula::know(group.clone(), Formula::not(phi)))
}

/// `⟨K_A^θ⟩φ := ¬K_A^θ¬φ`.
pub fn possible_cond(group: &Group, theta: &Formula, phi: Formula) -> Formula {
    Formula::not(know_cond(group, theta, Formula::not(phi)))
}

/// `⟨C_𝔄^θ⟩φ := ¬C_𝔄^θ¬φ`.
pub fn possible_common(sg: &Supergroup, theta: &Formula, phi: Formula) -> Formula {
    Formula::not(Formula::common(sg.clone(), theta.clone(), Formula::not(phi)))
}

/// `⟨e⟩φ := ¬[e]¬φ`.
pub fn diamond(event: &Event, phi: Formula) -> Formula {
    Formula::not(Formula::after(event.clone(), Formula::not(phi)))
}

/// `C_A^θ φ := C_{{a}: a∈A}^θ φ`.
pub fn common_flat(group: &Group, theta: &Formula, phi: Formula) -> Formula {
    Formula::common(Supergroup::singletons(group), theta.clone(), phi)
}

/// `C_𝔄^θ x̄ := C_𝔄^θ(⋀_{A∈𝔄} K_A x̄)`; with `θ = ⊤` this is `C_𝔄 x̄`.
pub fn common_values(sg: &Supergroup, theta: &Formula, xs: &[Term]) -> Formula {
    let body = conj(
        sg.groups()
            .flat_map(|g| xs.iter().map(move |x| know_value(g, &top(), x))),
    );
    Formula::common(sg.clone(), theta.clone(), body)
}

/// Whether `t` is the undefined constant.
pub fn is_undef(t: &Term) -> bool {
    matches!(t, Term::Const(c) if c == UNDEF)
}
