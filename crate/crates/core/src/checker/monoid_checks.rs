use crate::monoid::{Element, ExtKind, FiniteStarMonoid, GreenKind, Side};
use crate::search::{
    bc_core_ep_witnesses, dual_witnesses, find_bc, find_bc_core, find_bc_core_ep, find_core,
    find_w_core, find_w_core_ep, i13_set, i14_set, unit_regular_check, w_core_ep_witnesses, Powers,
};

use super::Ctx;

/// A predicate evaluated on every tuple of a universe.
///
/// `eval` returns `None` when the statement holds on the tuple, or a short
/// description of what went wrong.
pub struct CheckDef {
    pub id: &'static str,
    pub statement: &'static str,
    pub arity: usize,
    /// Whether the predicate is evaluated separately for each `k ≤ k_max`.
    pub per_k: bool,
    /// Needs `+` and `-` (only the `Z_n` universes have them).
    pub ring_only: bool,
    pub eval: fn(&Ctx, &[Element], Option<usize>) -> Option<String>,
}

const EXT: [(ExtKind, &str); 3] = [(ExtKind::R, "R°"), (ExtKind::L, "L°"), (ExtKind::H, "H°")];

fn check(ok: bool, detail: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(detail())
    }
}

fn ids(v: &[Element]) -> Vec<usize> {
    v.iter().map(|e| e.id()).collect()
}

pub static MONOID_CHECKS: [CheckDef; 29] = [
    CheckDef {
        id: "preorder_axioms",
        statement: "R°, L°, H° are reflexive and transitive",
        arity: 3,
        per_k: false,
        ring_only: false,
        eval: preorder_axioms,
    },
    CheckDef {
        id: "green_implies_extended",
        statement: "a ≤_R b ⇒ a ≤_L° b, a ≤_L b ⇒ a ≤_R° b, a ≤_H b ⇒ a ≤_H° b",
        arity: 2,
        per_k: false,
        ring_only: false,
        eval: green_implies_extended,
    },
    CheckDef {
        id: "regular_equivalence",
        statement: "for regular b: ≤_R ⇔ ≤_L°, ≤_L ⇔ ≤_R°, ≤_H ⇔ ≤_H°",
        arity: 2,
        per_k: false,
        ring_only: false,
        eval: regular_equivalence,
    },
    CheckDef {
        id: "annihilator_containment",
        statement: "a ≤_R° b ⇔ ann_r(b) ⊆ ann_r(a); a ≤_L° b ⇔ ann_l(b) ⊆ ann_l(a)",
        arity: 2,
        per_k: false,
        ring_only: false,
        eval: annihilator_containment,
    },
    CheckDef {
        id: "green_relations_extended",
        statement: "a L b ⇒ a R° b, a R b ⇒ a L° b, a H b ⇒ a H° b",
        arity: 2,
        per_k: false,
        ring_only: false,
        eval: green_relations_extended,
    },
    CheckDef {
        id: "idempotent_minus_order",
        statement: "for idempotents: e ≤_R° f ⇔ e = ef, e ≤_L° f ⇔ e = fe, e ≤_H° f ⇔ e ≤ f",
        arity: 2,
        per_k: false,
        ring_only: false,
        eval: idempotent_minus_order,
    },
    CheckDef {
        id: "ring_difference",
        statement: "a ≤ b ⇔ a - b ≤ b for each of R°, L°, H°",
        arity: 2,
        per_k: false,
        ring_only: true,
        eval: ring_difference,
    },
    CheckDef {
        id: "regularity_in_r_class",
        statement: "y R z ⇒ (y regular ⇔ z regular)",
        arity: 2,
        per_k: false,
        ring_only: false,
        eval: regularity_in_r_class,
    },
    CheckDef {
        id: "one_three_lemma",
        statement: "a ∈ S^(1,3) ⇔ a ∈ Sa*a, and xa*a = a ⇒ x* ∈ a{1,3}; dually for {1,4}",
        arity: 1,
        per_k: false,
        ring_only: false,
        eval: one_three_lemma,
    },
    CheckDef {
        id: "bc_inverse_lemma",
        statement: "a ∈ S^(b,c) ⇔ b ∈ Scab and c ∈ cabS, and then a^(b,c) = bw = vc",
        arity: 3,
        per_k: false,
        ring_only: false,
        eval: bc_inverse_lemma,
    },
    CheckDef {
        id: "core_ep_equivalences",
        statement: "the six characterizations of (b,c)-core-EP invertibility agree at each k",
        arity: 3,
        per_k: true,
        ring_only: false,
        eval: core_ep_equivalences,
    },
    CheckDef {
        id: "uniqueness_per_k",
        statement: "at most one (b,c)-core-EP witness at each k",
        arity: 3,
        per_k: true,
        ring_only: false,
        eval: uniqueness_per_k,
    },
    CheckDef {
        id: "uniqueness_across_k",
        statement: "at most one (b,c)-core-EP inverse over all k ≤ k_max",
        arity: 3,
        per_k: false,
        ring_only: false,
        eval: uniqueness_across_k,
    },
    CheckDef {
        id: "index_set_upward_closed",
        statement: "an index set with two or more members contains every k above its minimum",
        arity: 3,
        per_k: false,
        ring_only: false,
        eval: index_set_upward_closed,
    },
    CheckDef {
        id: "index_bound_core_ep",
        statement: "card I_(b,c)(a) > 1 ⇒ c is a-core-EP invertible with i_a(c) ≤ i_(b,c)(a)",
        arity: 3,
        per_k: false,
        ring_only: false,
        eval: index_bound_core_ep,
    },
    CheckDef {
        id: "witness_regularity",
        statement: "a witness x at k is regular, as are (ca)^k b and (ca)^k c",
        arity: 3,
        per_k: true,
        ring_only: false,
        eval: witness_regularity,
    },
    CheckDef {
        id: "witness_one_four",
        statement: "a witness x is {1,4}-invertible with ca ∈ x{1,4}",
        arity: 3,
        per_k: true,
        ring_only: false,
        eval: witness_one_four,
    },
    CheckDef {
        id: "closed_formulas",
        statement: "invertibility via d = ((ca)^k c)^(1,3) ca and the three closed formulas, for every {1,3} choice",
        arity: 3,
        per_k: true,
        ring_only: false,
        eval: closed_formulas,
    },
    CheckDef {
        id: "bc_core_formulas",
        statement: "(b,c)-core invertible ⇔ (b,c)-invertible with c, ca or cab {1,3}-invertible; the three formulas agree",
        arity: 3,
        per_k: false,
        ring_only: false,
        eval: bc_core_formulas,
    },
    CheckDef {
        id: "bc_inverse_of_ca",
        statement: "k ∈ I ⇔ ∃x: xcax = x, xS = (ca)^k bS, Sx = S((ca)^k c)*; x is the ((ca)^k b, ((ca)^k c)*)-inverse of ca",
        arity: 3,
        per_k: true,
        ring_only: false,
        eval: bc_inverse_of_ca,
    },
    CheckDef {
        id: "membership_criterion",
        statement: "k ∈ I ⇔ (ca)^k b ∈ S((ca)^k c)*(ca)^{k+1} b and ((ca)^k c)* ∈ ((ca)^k c)*(ca)^{k+1} bS",
        arity: 3,
        per_k: true,
        ring_only: false,
        eval: membership_criterion,
    },
    CheckDef {
        id: "one_sided_criterion",
        statement: "k ∈ I ⇔ a left ((ca)^k b, c)-invertible and abr ∈ (ca)^k c{1,3} for some r",
        arity: 3,
        per_k: true,
        ring_only: false,
        eval: one_sided_criterion,
    },
    CheckDef {
        id: "left_bc_core_criterion",
        statement: "(b,c)-core invertible ⇔ left (b,c)-invertible and abs ∈ c{1,3}; inverse = a_l c^(1,3) = br*",
        arity: 3,
        per_k: false,
        ring_only: false,
        eval: left_bc_core_criterion,
    },
    CheckDef {
        id: "specializations",
        statement: "core, core-EP, w-core and w-core-EP inverses as (b,c)-core-EP inverses",
        arity: 2,
        per_k: false,
        ring_only: false,
        eval: specializations,
    },
    CheckDef {
        id: "power_form_specialization",
        statement: "a is w-core-EP invertible iff w is ((aw)^k a,(aw)^k a)-core invertible for some k, with equal inverses",
        arity: 2,
        per_k: false,
        ring_only: false,
        eval: power_form_specialization,
    },
    CheckDef {
        id: "direct_sum",
        statement: "k ∈ I ⇔ R = (ca)^{k+1}bR ⊕ (((ca)^k c)*)^0 = R((ca)^k c)*ca ⊕ ^0((ca)^k b) ⇔ the same with +",
        arity: 3,
        per_k: true,
        ring_only: true,
        eval: direct_sum,
    },
    CheckDef {
        id: "direct_sum_core",
        statement: "(b,c)-core invertible ⇔ R = cabR ⊕ (c*)^0 = Rca ⊕ ^0 b ⇔ the same with +",
        arity: 3,
        per_k: false,
        ring_only: true,
        eval: direct_sum_core,
    },
    CheckDef {
        id: "unit_regularity",
        statement: "the w-core inverse is unit-regular and aw + 1 - aa^(1,3) is a unit",
        arity: 2,
        per_k: false,
        ring_only: true,
        eval: unit_regularity,
    },
    CheckDef {
        id: "dual_uniqueness_per_k",
        statement: "at most one dual (b,c)-core-EP witness at each k",
        arity: 3,
        per_k: true,
        ring_only: false,
        eval: dual_uniqueness_per_k,
    },
];

fn preorder_axioms(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, b, c) = (cx.m, t[0], t[1], t[2]);
    for (kind, name) in EXT {
        if !m.ext_leq(a, a, kind) {
            return Some(format!("{name} not reflexive at a"));
        }
        if m.ext_leq(a, b, kind) && m.ext_leq(b, c, kind) && !m.ext_leq(a, c, kind) {
            return Some(format!("{name} not transitive"));
        }
    }
    None
}

fn green_implies_extended(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, b) = (cx.m, t[0], t[1]);
    let pairs = [
        (GreenKind::R, ExtKind::L),
        (GreenKind::L, ExtKind::R),
        (GreenKind::H, ExtKind::H),
    ];
    for (g, e) in pairs {
        if m.green_leq(a, b, g) && !m.ext_leq(a, b, e) {
            return Some(format!("a ≤_{g:?} b but not a ≤_{e:?}° b"));
        }
    }
    None
}

fn regular_equivalence(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, b) = (cx.m, t[0], t[1]);
    if !m.is_regular(b) {
        return None;
    }
    let pairs = [
        (GreenKind::R, ExtKind::L),
        (GreenKind::L, ExtKind::R),
        (GreenKind::H, ExtKind::H),
    ];
    for (g, e) in pairs {
        let (lhs, rhs) = (m.green_leq(a, b, g), m.ext_leq(a, b, e));
        if lhs != rhs {
            return Some(format!("≤_{g:?} is {lhs} but ≤_{e:?}° is {rhs}"));
        }
    }
    None
}

fn annihilator_containment(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, b) = (cx.m, t[0], t[1]);
    for (kind, side) in [(ExtKind::R, Side::Right), (ExtKind::L, Side::Left)] {
        let (lhs, rhs) = (m.ext_leq(a, b, kind), m.annihilator_contained(a, b, side));
        if lhs != rhs {
            return Some(format!(
                "≤_{kind:?}° is {lhs} but {side:?} annihilator containment is {rhs}"
            ));
        }
    }
    None
}

fn green_relations_extended(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, b) = (cx.m, t[0], t[1]);
    let pairs = [
        (GreenKind::L, ExtKind::R),
        (GreenKind::R, ExtKind::L),
        (GreenKind::H, ExtKind::H),
    ];
    for (g, e) in pairs {
        if m.green_rel(a, b, g) && !m.ext_rel(a, b, e) {
            return Some(format!("a {g:?} b but not a {e:?}° b"));
        }
    }
    None
}

fn idempotent_minus_order(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, e, f) = (cx.m, t[0], t[1]);
    if !(m.is_idempotent(e) && m.is_idempotent(f)) {
        return None;
    }
    let minus = m.minus_leq(e, f).expect("both idempotent");
    let expect = [
        (ExtKind::R, m.mul(e, f) == e),
        (ExtKind::L, m.mul(f, e) == e),
        (ExtKind::H, minus),
    ];
    for (kind, want) in expect {
        if m.ext_leq(e, f, kind) != want {
            return Some(format!(
                "≤_{kind:?}° disagrees with its idempotent form ({want})"
            ));
        }
    }
    None
}

fn ring_difference(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, b) = (cx.m, t[0], t[1]);
    let d = m.sub(a, b).ok()?;
    for (kind, name) in EXT {
        if m.ext_leq(a, b, kind) != m.ext_leq(d, b, kind) {
            return Some(format!("a ≤_{name} b and a - b ≤_{name} b differ"));
        }
    }
    None
}

fn regularity_in_r_class(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, y, z) = (cx.m, t[0], t[1]);
    check(
        !m.green_rel(y, z, GreenKind::R) || m.is_regular(y) == m.is_regular(z),
        || "R-related elements differ in regularity".into(),
    )
}

fn one_three_lemma(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a) = (cx.m, t[0]);
    let (a_star_a, a_a_star) = (m.mul(m.star(a), a), m.mul(a, m.star(a)));
    let i13 = i13_set(m, a);
    let i14 = i14_set(m, a);
    if i13.is_empty() == m.in_left_ideal(a, a_star_a) {
        return Some("{1,3}-invertibility disagrees with a ∈ Sa*a".into());
    }
    if i14.is_empty() == m.in_right_ideal(a, a_a_star) {
        return Some("{1,4}-invertibility disagrees with a ∈ aa*S".into());
    }
    for x in m.elements() {
        if m.mul(x, a_star_a) == a && !i13.contains(&m.star(x)) {
            return Some(format!(
                "xa*a = a for x = {x} but x* is not a {{1,3}}-inverse"
            ));
        }
        if m.mul(a_a_star, x) == a && !i14.contains(&m.star(x)) {
            return Some(format!(
                "aa*y = a for y = {x} but y* is not a {{1,4}}-inverse"
            ));
        }
    }
    None
}

fn bc_inverse_lemma(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, b, c) = (cx.m, t[0], t[1], t[2]);
    let cab = m.product([c, a, b]);
    let found = find_bc(m, a, b, c).all();
    let criterion = m.in_left_ideal(b, cab) && m.in_right_ideal(c, cab);
    if found.len() > 1 {
        return Some(format!("several (b,c)-inverses {:?}", ids(&found)));
    }
    if found.is_empty() == criterion {
        return Some(format!(
            "existence {} but criterion {criterion}",
            !found.is_empty()
        ));
    }
    let &y = found.first()?;
    for s in m.elements() {
        if m.mul(s, cab) == b && m.mul(s, c) != y {
            return Some(format!("b = v·cab with v = {s} but vc != a^(b,c)"));
        }
        if m.mul(cab, s) == c && m.mul(b, s) != y {
            return Some(format!("c = cab·w with w = {s} but bw != a^(b,c)"));
        }
    }
    None
}

/// Whether `x` satisfies the defining system with the given powers.
fn is_witness(m: &FiniteStarMonoid, pw: &Powers, x: Element) -> bool {
    crate::search::is_bc_core_ep_witness(m, pw, x)
}

fn witness_at(m: &FiniteStarMonoid, t: &[Element], k: usize) -> (Powers, Vec<Element>) {
    let pw = Powers::at(m, t[0], t[1], t[2], k);
    let w = bc_core_ep_witnesses(m, &pw);
    (pw, w)
}

fn core_ep_equivalences(cx: &Ctx, t: &[Element], k: Option<usize>) -> Option<String> {
    let m = cx.m;
    let pw = Powers::at(m, t[0], t[1], t[2], k.expect("per-k check"));
    let (ca, kb, kc, kc_star, next_b) = (pw.ca, pw.kb, pw.kc, pw.kc_star, pw.next_b);
    let mut found = [false; 6];
    for x in m.elements() {
        let cax = m.mul(ca, x);
        let first = m.mul(cax, kc) == kc;
        if !first {
            continue;
        }
        let in_kb_s = m.in_right_ideal(x, kb);
        let r_kb = m.green_rel(x, kb, GreenKind::R);
        let cond = [
            is_witness(m, &pw, x),
            in_kb_s && m.mul(x, next_b) == kb && m.star(cax) == cax && m.mul(x, cax) == x,
            in_kb_s && m.mul(x, next_b) == kb && m.star(cax) == cax,
            in_kb_s && m.ext_leq(kb, x, ExtKind::L) && m.ext_leq(x, kc_star, ExtKind::R),
            r_kb && m.green_leq(x, kc_star, GreenKind::L),
            r_kb && m.ext_rel(x, kc_star, ExtKind::R),
        ];
        for (f, c) in found.iter_mut().zip(cond) {
            *f |= c;
        }
    }
    check(found.iter().all(|&f| f == found[0]), || {
        format!("conditions (i)-(vi) evaluate to {found:?}")
    })
}

fn uniqueness_per_k(cx: &Ctx, t: &[Element], k: Option<usize>) -> Option<String> {
    let (_, w) = witness_at(cx.m, t, k.expect("per-k check"));
    check(w.len() <= 1, || format!("witnesses {:?}", ids(&w)))
}

fn uniqueness_across_k(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let r = find_bc_core_ep(cx.m, t[0], t[1], t[2], cx.k_max);
    let distinct = r.distinct_inverses();
    check(distinct.len() <= 1, || {
        let per_k: Vec<String> = distinct
            .iter()
            .map(|&x| {
                let ks: Vec<usize> = r
                    .witnesses
                    .iter()
                    .filter(|w| w.element == x)
                    .map(|w| w.k)
                    .collect();
                format!("{x} at k ∈ {ks:?}")
            })
            .collect();
        format!("distinct inverses: {}", per_k.join(", "))
    })
}

fn index_set_upward_closed(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let r = find_bc_core_ep(cx.m, t[0], t[1], t[2], cx.k_max);
    check(r.members.len() < 2 || r.is_upward_closed(), || {
        format!("members {:?}", r.members)
    })
}

fn index_bound_core_ep(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, c) = (cx.m, t[0], t[2]);
    let r = find_bc_core_ep(m, a, t[1], c, cx.k_max);
    if r.members.len() < 2 {
        return None;
    }
    let i = r.index.expect("nonempty");
    let rc = find_w_core_ep(m, c, a, cx.k_max);
    match rc.index {
        None => Some(format!(
            "I_(b,c)(a) = {:?} but c is not a-core-EP invertible",
            r.members
        )),
        Some(j) if j > i => Some(format!("i_a(c) = {j} > i_(b,c)(a) = {i}")),
        Some(_) => None,
    }
}

fn witness_regularity(cx: &Ctx, t: &[Element], k: Option<usize>) -> Option<String> {
    let m = cx.m;
    let (pw, w) = witness_at(m, t, k.expect("per-k check"));
    let &x = w.first()?;
    for (name, e) in [("x", x), ("(ca)^k b", pw.kb), ("(ca)^k c", pw.kc)] {
        if !m.is_regular(e) {
            return Some(format!("{name} = {e} is not regular"));
        }
    }
    None
}

fn witness_one_four(cx: &Ctx, t: &[Element], k: Option<usize>) -> Option<String> {
    let m = cx.m;
    let (pw, w) = witness_at(m, t, k.expect("per-k check"));
    let &x = w.first()?;
    let i14 = i14_set(m, x);
    check(i14.contains(&pw.ca), || {
        format!("ca is not a {{1,4}}-inverse of x = {x}")
    })
}

/// `d` is `(q,p)`-invertible iff `q ∈ S·p·d·q` and `p ∈ p·d·q·S`.
fn bc_invertible(m: &FiniteStarMonoid, d: Element, q: Element, p: Element) -> bool {
    let pdq = m.product([p, d, q]);
    m.in_left_ideal(q, pdq) && m.in_right_ideal(p, pdq)
}

fn closed_formulas(cx: &Ctx, t: &[Element], k: Option<usize>) -> Option<String> {
    let m = cx.m;
    let (pw, w) = witness_at(m, t, k.expect("per-k check"));
    let in_i = !w.is_empty();
    let a = t[0];
    let g_kc = i13_set(m, pw.kc);
    let power = m.mul(pw.ca, pw.ca_k);
    let g_power = i13_set(m, power);
    let g_next = i13_set(m, pw.next_b);
    let inv: Vec<bool> = g_kc
        .iter()
        .map(|&g| bc_invertible(m, m.mul(g, pw.ca), pw.kb, pw.kc))
        .collect();
    let all_inv = !inv.is_empty() && inv.iter().all(|&v| v);
    let any_inv = inv.iter().any(|&v| v);
    if all_inv != any_inv {
        return Some(format!(
            "d-invertibility depends on the {{1,3}} choice: {inv:?}"
        ));
    }
    let conds = [
        all_inv,
        !g_power.is_empty() && all_inv,
        !g_next.is_empty() && all_inv,
    ];
    if conds.iter().any(|&c| c != in_i) {
        return Some(format!("k ∈ I is {in_i} but (ii)-(iv) give {conds:?}"));
    }
    let &x = w.first()?;
    for &g in &g_kc {
        let d = m.mul(g, pw.ca);
        let zs = find_bc(m, d, pw.kb, pw.kc).all();
        let [z] = zs[..] else {
            return Some(format!("d = {d} has (q,p)-inverses {:?}", ids(&zs)));
        };
        if m.mul(z, g) != x {
            return Some(format!(
                "d^(q,p)·g = {} != x = {x} for g = {g}",
                m.mul(z, g)
            ));
        }
        for &h in &g_power {
            if m.product([z, a, h]) != x {
                return Some(format!(
                    "d^(q,p)·a·h != x for h = {h} ∈ ((ca)^(k+1)){{1,3}}"
                ));
            }
        }
    }
    for &q in &g_next {
        if m.mul(pw.kb, q) != x {
            return Some(format!(
                "(ca)^k b·q != x for q = {q} ∈ ((ca)^(k+1) b){{1,3}}"
            ));
        }
    }
    None
}

fn bc_core_formulas(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, b, c) = (cx.m, t[0], t[1], t[2]);
    let core = find_bc_core(m, a, b, c);
    let y = find_bc(m, a, b, c).witness;
    let (ca, cab) = (m.mul(c, a), m.product([c, a, b]));
    let (g_c, g_ca, g_cab) = (i13_set(m, c), i13_set(m, ca), i13_set(m, cab));
    let conds = [
        y.is_some() && !g_c.is_empty(),
        y.is_some() && !g_ca.is_empty(),
        y.is_some() && !g_cab.is_empty(),
    ];
    if conds.iter().any(|&v| v != core.exists()) {
        return Some(format!(
            "(b,c)-core existence {} but (ii)-(iv) give {conds:?}",
            core.exists()
        ));
    }
    let (Some(x), Some(y)) = (core.witness, y) else {
        return None;
    };
    for g in g_c {
        if m.mul(y, g) != x {
            return Some(format!("a^(b,c)·g != x for g = {g} ∈ c{{1,3}}"));
        }
    }
    for g in g_ca {
        if m.product([y, a, g]) != x {
            return Some(format!("a^(b,c)·a·g != x for g = {g} ∈ (ca){{1,3}}"));
        }
    }
    for g in g_cab {
        if m.mul(b, g) != x {
            return Some(format!("b·g != x for g = {g} ∈ (cab){{1,3}}"));
        }
    }
    None
}

fn bc_inverse_of_ca(cx: &Ctx, t: &[Element], k: Option<usize>) -> Option<String> {
    let m = cx.m;
    let (pw, w) = witness_at(m, t, k.expect("per-k check"));
    let alt: Vec<Element> = m
        .elements()
        .filter(|&x| {
            m.product([x, pw.ca, x]) == x
                && m.green_rel(x, pw.kb, GreenKind::R)
                && m.green_rel(x, pw.kc_star, GreenKind::L)
        })
        .collect();
    if alt.is_empty() != w.is_empty() {
        return Some(format!(
            "witnesses {:?} but xcax-characterization gives {:?}",
            ids(&w),
            ids(&alt)
        ));
    }
    let &x = w.first()?;
    let y = find_bc(m, pw.ca, pw.kb, pw.kc_star).all();
    check(y == [x], || {
        format!(
            "x = {x} but the ((ca)^k b, ((ca)^k c)*)-inverse of ca is {:?}",
            ids(&y)
        )
    })
}

fn membership_criterion(cx: &Ctx, t: &[Element], k: Option<usize>) -> Option<String> {
    let m = cx.m;
    let (pw, w) = witness_at(m, t, k.expect("per-k check"));
    let mid = m.mul(pw.kc_star, pw.next_b);
    let crit = m.in_left_ideal(pw.kb, mid) && m.in_right_ideal(pw.kc_star, mid);
    check(crit != w.is_empty(), || {
        format!("k ∈ I is {} but the criterion gives {crit}", !w.is_empty())
    })
}

fn one_sided_criterion(cx: &Ctx, t: &[Element], k: Option<usize>) -> Option<String> {
    let m = cx.m;
    let (a, b, c) = (t[0], t[1], t[2]);
    let (pw, w) = witness_at(m, t, k.expect("per-k check"));
    let left = m.in_left_ideal(pw.kb, m.mul(pw.ca, pw.kb));
    let g_kc = i13_set(m, pw.kc);
    let ab = m.mul(a, b);
    let has_r = m.elements().any(|r| g_kc.contains(&m.mul(ab, r)));
    let crit = left && has_r;
    if crit == w.is_empty() {
        return Some(format!(
            "k ∈ I is {} but the one-sided criterion gives {crit}",
            !w.is_empty()
        ));
    }
    let &x = w.first()?;
    if !m.in_right_ideal(pw.kc, m.mul(pw.kc, ab)) {
        return Some("a is not right (b, (ca)^k c)-invertible".into());
    }
    check(m.in_left_ideal(x, m.product([c, a, x])), || {
        "a is not left (x, c)-invertible".into()
    })
}

fn left_bc_core_criterion(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, b, c) = (cx.m, t[0], t[1], t[2]);
    let core = find_bc_core(m, a, b, c);
    let ab = m.mul(a, b);
    let cab = m.mul(c, ab);
    let g_c = i13_set(m, c);
    let left = m.in_left_ideal(b, cab);
    let crit = left && m.elements().any(|s| g_c.contains(&m.mul(ab, s)));
    if crit != core.exists() {
        return Some(format!(
            "(b,c)-core existence {} but criterion {crit}",
            core.exists()
        ));
    }
    let x = core.witness?;
    let lefts: Vec<Element> = m
        .elements()
        .filter(|&l| m.in_left_ideal(l, c) && m.mul(l, ab) == b)
        .collect();
    for &l in &lefts {
        for &g in &g_c {
            if m.mul(l, g) != x {
                return Some(format!("a_l·c^(1,3) != x for a_l = {l}, c^(1,3) = {g}"));
            }
        }
    }
    let cab_star = m.star(cab);
    for r in m.elements() {
        if m.product([r, cab_star, c]) == c && m.mul(b, m.star(r)) != x {
            return Some(format!("c = r(cab)*c for r = {r} but br* != x"));
        }
    }
    None
}

fn specializations(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, w) = (cx.m, t[0], t[1]);
    let one = m.unity();
    let at0 = |aa, bb, cc| bc_core_ep_witnesses(m, &Powers::at(m, aa, bb, cc, 0));
    if w == one {
        // Core inverse against the (a,a)-core inverses of 1 and of a.
        let core = find_core(m, a).witness;
        let of_one = at0(one, a, a).first().copied();
        let of_a = at0(a, a, a).first().copied();
        if core.is_some() != of_one.is_some() || core.is_some() != of_a.is_some() {
            return Some(format!(
                "core {core:?}, 1_(a,a) {of_one:?}, a_(a,a) {of_a:?}: existence differs"
            ));
        }
        if let (Some(x), Some(y), Some(z)) = (core, of_one, of_a) {
            if x != y || x != m.mul(a, z) {
                return Some(format!(
                    "core {x} but 1_(a,a) = {y} and a·a_(a,a) = {}",
                    m.mul(a, z)
                ));
            }
        }
        let gao = find_w_core_ep(m, a, one, cx.k_max);
        let unit = find_bc_core_ep(m, a, one, one, cx.k_max);
        if gao.inverse != unit.inverse {
            return Some(format!(
                "core-EP {:?} but (1,1)-core-EP {:?}",
                gao.inverse, unit.inverse
            ));
        }
    }
    let wc = find_w_core(m, a, w).witness;
    let wc_aa = at0(w, a, a).first().copied();
    if wc != wc_aa {
        return Some(format!("w-core {wc:?} but (a,a)-core of w {wc_aa:?}"));
    }
    for k in 0..=cx.k_max {
        let s1 = w_core_ep_witnesses(m, a, w, k);
        let s2 = bc_core_ep_witnesses(m, &Powers::at(m, w, a, a, k));
        if s1 != s2 {
            return Some(format!(
                "k = {k}: w-core-EP {:?} but (a,a)-core-EP of w {:?}",
                ids(&s1),
                ids(&s2)
            ));
        }
    }
    None
}

fn power_form_specialization(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, w) = (cx.m, t[0], t[1]);
    let aw = m.mul(a, w);
    let report = find_w_core_ep(m, a, w, cx.k_max);
    let mut any_core = false;
    for k in 0..=cx.k_max {
        let p = m.mul(m.pow(aw, k), a);
        let core = find_bc_core(m, w, p, p).all();
        any_core |= !core.is_empty();
        if let (Some(x), true) = (report.inverse, report.contains(k)) {
            if !core.is_empty() && core != [x] {
                return Some(format!(
                    "k = {k}: w-core-EP inverse {x} but ((aw)^k a,(aw)^k a)-core of w {:?}",
                    ids(&core)
                ));
            }
        }
    }
    check(any_core == report.inverse.is_some(), || {
        format!(
            "w-core-EP existence {} but some power-form core exists: {any_core}",
            report.inverse.is_some()
        )
    })
}

fn ideal(m: &FiniteStarMonoid, x: Element, side: Side) -> Vec<Element> {
    let mut v: Vec<Element> = m
        .elements()
        .map(|r| match side {
            Side::Right => m.mul(x, r),
            Side::Left => m.mul(r, x),
        })
        .collect();
    v.sort();
    v.dedup();
    v
}

/// (`U + V = R`, `U ∩ V = {0}`) for additive subgroups given as element lists.
fn sum_and_meet(m: &FiniteStarMonoid, u: &[Element], v: &[Element]) -> (bool, bool) {
    let zero = m.zero().expect("ring universe");
    let mut hit = vec![false; m.order()];
    for &x in u {
        for &y in v {
            hit[m.add(x, y).expect("ring universe").id()] = true;
        }
    }
    let spans = hit.iter().all(|&h| h);
    let trivial = u.iter().all(|x| *x == zero || !v.contains(x));
    (spans, trivial)
}

fn decompositions(m: &FiniteStarMonoid, pairs: [(Vec<Element>, Vec<Element>); 2]) -> (bool, bool) {
    let mut direct = true;
    let mut plain = true;
    for (u, v) in pairs {
        let (spans, trivial) = sum_and_meet(m, &u, &v);
        plain &= spans;
        direct &= spans && trivial;
    }
    (direct, plain)
}

fn direct_sum(cx: &Ctx, t: &[Element], k: Option<usize>) -> Option<String> {
    let m = cx.m;
    let (pw, w) = witness_at(m, t, k.expect("per-k check"));
    let in_i = !w.is_empty();
    let right = (
        ideal(m, pw.next_b, Side::Right),
        m.ring_annihilator(pw.kc_star, Side::Right).ok()?,
    );
    let left = (
        ideal(m, m.mul(pw.kc_star, pw.ca), Side::Left),
        m.ring_annihilator(pw.kb, Side::Left).ok()?,
    );
    let (direct, plain) = decompositions(m, [right, left]);
    check(direct == in_i && plain == in_i, || {
        format!("k ∈ I is {in_i}, ⊕ form {direct}, + form {plain}")
    })
}

fn direct_sum_core(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, b, c) = (cx.m, t[0], t[1], t[2]);
    let exists = find_bc_core(m, a, b, c).exists();
    let cab = m.product([c, a, b]);
    let right = (
        ideal(m, cab, Side::Right),
        m.ring_annihilator(m.star(c), Side::Right).ok()?,
    );
    let left = (
        ideal(m, m.mul(c, a), Side::Left),
        m.ring_annihilator(b, Side::Left).ok()?,
    );
    let (direct, plain) = decompositions(m, [right, left]);
    check(direct == exists && plain == exists, || {
        format!("(b,c)-core {exists}, ⊕ form {direct}, + form {plain}")
    })
}

fn unit_regularity(cx: &Ctx, t: &[Element], _: Option<usize>) -> Option<String> {
    let (m, a, w) = (cx.m, t[0], t[1]);
    if !find_w_core(m, a, w).exists() {
        return None;
    }
    match unit_regular_check(m, a, w) {
        Ok(true) => None,
        Ok(false) => Some("w-core inverse is not unit-regular or u is not a unit".into()),
        Err(e) => Some(e.to_string()),
    }
}

fn dual_uniqueness_per_k(cx: &Ctx, t: &[Element], k: Option<usize>) -> Option<String> {
    let m = cx.m;
    let pw = Powers::at(m, t[0], t[1], t[2], k.expect("per-k check"));
    let d = dual_witnesses(m, t[0], t[1], &pw);
    check(d.len() <= 1, || format!("dual witnesses {:?}", ids(&d)))
}

#[cfg(test)]
mod tests {
    use super::super::{find_check, replay, run_check, SweepConfig};
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = MONOID_CHECKS.iter().map(|d| d.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), MONOID_CHECKS.len());
    }

    #[test]
    fn all_checks_pass_on_trivial_monoid() {
        let m = FiniteStarMonoid::zn(1).unwrap();
        for def in &MONOID_CHECKS {
            let c = run_check(&m, def, &SweepConfig::default());
            assert!(c.passed(), "{}: {:?}", def.id, c.failures);
        }
    }

    #[test]
    fn z8_index_set_example_is_upward_closed() {
        let m = FiniteStarMonoid::zn(8).unwrap();
        let e = |i| m.element(i).unwrap();
        let cx = Ctx { m: &m, k_max: 10 };
        assert_eq!(
            index_set_upward_closed(&cx, &[e(1), e(1), e(2)], None),
            None
        );
        assert_eq!(index_bound_core_ep(&cx, &[e(1), e(1), e(2)], None), None);
    }

    #[test]
    fn failures_replay() {
        // Across-k uniqueness breaks in M_2(Z_2): a = I, b = E22, c = E12.
        let m = FiniteStarMonoid::matrix(2, 2).unwrap();
        let a = m.unity();
        let b = m.matrix_element(&[0, 0, 0, 1]).unwrap();
        let c = m.matrix_element(&[0, 1, 0, 0]).unwrap();
        let cx = Ctx { m: &m, k_max: 4 };
        let detail = uniqueness_across_k(&cx, &[a, b, c], None).expect("known counterexample");
        let cxm = super::super::Counterexample {
            elements: vec![a.id(), b.id(), c.id()],
            k: None,
            detail,
        };
        assert!(replay(&m, "uniqueness_across_k", &cxm, Some(4))
            .unwrap()
            .is_some());
        assert!(find_check("uniqueness_across_k").is_some());
    }
}
