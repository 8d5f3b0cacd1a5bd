from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

import gen
import mutations
from clvernacular import engine, logic, proof, tptp
from clvernacular.logic import EQ, NEQ, Atom, Const, NamedFormula
from clvernacular.proof import (CONTRADICTION, THESIS, CaseSplit, EqualitySubstitution, Efq,
                                From, ModusPonens, ProofClosing, ProofStep, ProofTree)

from conftest import corpus

A, B, C, D = (Const(n) for n in "ABCD")


def known_constant(theory, conj):
    taken = {k.name for k in theory.signature.constants}
    for ax in theory.axioms:
        taken |= {k.name for k in logic.formula_constants(ax.formula)}
    pool = (list(logic.conjecture_constants(conj.formula, taken).values())
            + list(theory.signature.constants) + logic.formula_constants(conj.formula))
    return pool[0] if pool else None


def assert_all_rejected(theory, conj, pt):
    existing = known_constant(theory, conj)
    n = 0
    for kind, mutants in mutations.catalog(pt, existing or Const("zz"),
                                           len(conj.formula.conclusion)).items():
        if kind == "stale witness" and existing is None:
            continue
        for site, m in mutants:
            n += 1
            assert not proof.check_proof(theory, conj, m), f"{kind} at {site} accepted"
    return n


def test_th_4_19_checks_and_sizes(th_4_19, th_4_19_result):
    th, cj = th_4_19
    pt = th_4_19_result.proof
    assert proof.check_proof(th, cj, pt)
    assert pt.axioms_used() == ["th_3_1", "ax_4_10_3", "th_2_2", "ax_g1", "ax_3", "th_3_4", "th_4_18"]
    assert [t.closing.indentation for t in pt.walk()] == [0, 6, 6, 12, 12]


def test_th_4_19_mutations_rejected(th_4_19, th_4_19_result):
    th, cj = th_4_19
    assert assert_all_rejected(th, cj, th_4_19_result.proof) > 20


def test_unknown_axiom_and_bad_binding(th_4_19, th_4_19_result):
    th, cj = th_4_19
    pt = th_4_19_result.proof
    step = pt.steps[0]
    bad = replace(pt, steps=(ProofStep(replace(step.rule, axiom="nope")),) + pt.steps[1:])
    assert proof.check_proof(th, cj, bad).rule == "mp"
    bad = replace(pt, steps=(ProofStep(replace(step.rule, binding=step.rule.binding[:1])),) + pt.steps[1:])
    assert not proof.check_proof(th, cj, bad)


def test_indentation_is_checked(th_4_19, th_4_19_result):
    th, cj = th_4_19
    pt = th_4_19_result.proof
    bad = replace(pt, steps=(ProofStep(pt.steps[0].rule, 3),) + pt.steps[1:])
    res = proof.check_proof(th, cj, bad)
    assert res.rule == "indentation" and res.path == "root/step[0]"


def test_wrong_outcome_rejected(th_4_19, th_4_19_result):
    th, cj = th_4_19
    pt = th_4_19_result.proof
    bad = replace(pt, closing=replace(pt.closing, outcome=CONTRADICTION))
    assert proof.check_proof(th, cj, bad).rule == "outcome"


def test_reindent_restores_structure(th_4_19_result):
    pt = th_4_19_result.proof
    def flatten(t):
        rule = t.closing.rule
        if isinstance(rule, CaseSplit):
            rule = CaseSplit(rule.disjunction, tuple(flatten(b) for b in rule.branches))
        return ProofTree(tuple(ProofStep(s.rule, 0) for s in t.steps),
                         ProofClosing(rule, t.closing.outcome, 0))

    assert proof.reindent(flatten(pt)) == pt


def test_equality_consequence():
    assert proof.equality_consequence([Atom(EQ, (A, B)), Atom(EQ, (A, D))], Atom(EQ, (B, D)))
    assert proof.equality_consequence([Atom(NEQ, (A, C))], Atom(NEQ, (C, A)))
    assert proof.equality_consequence([Atom("cong", (A, D, A, B)), Atom(EQ, (A, B))],
                                      Atom("cong", (A, D, A, A)))
    assert not proof.equality_consequence([Atom(EQ, (A, B))], Atom(EQ, (B, D)))


def test_efq_requires_contradiction():
    th, conjs = tptp.load(corpus("th_4_19.p"))
    cj = conjs[0]
    bad = ProofTree((), ProofClosing(Efq((Atom("bet", (A, B, C)),)), CONTRADICTION))
    assert proof.check_proof(th, cj, bad).rule == "efq"


def test_corpus_proofs_reject_mutations():
    import glob
    total = 0
    for path in sorted(glob.glob(corpus("th_*.p"))):
        th, conjs = tptp.load(path)
        r = engine.prove(th, conjs[0], engine.SearchLimits(wall_clock=20))
        if r.status == "PROVED":
            assert proof.check_proof(th, conjs[0], r.proof)
            total += assert_all_rejected(th, conjs[0], r.proof)
    assert total > 0


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_random_proofs_reject_mutations(seed):
    th, cj = gen.coherent_problem(seed)
    r = engine.prove(th, cj, engine.SearchLimits(max_steps=256, max_splits=3, wall_clock=1))
    if r.status == "PROVED":
        assert_all_rejected(th, cj, r.proof)
