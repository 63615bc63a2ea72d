"""Unification store vs the dict-based reference unifier."""

import random

from connsat.terms import App, Var
from connsat.unify import SubstitutionStore, UnifyError, literals_dual

import oracles

FUNCS = [("a", 0), ("b", 0), ("c", 0), ("f", 1), ("g", 2), ("h", 1)]


def _vars(n=4):
    names = ["X", "Y", "Z", "W", "V", "U"]
    return [Var(names[i], "w", 1, i) for i in range(n)]


def random_term(rng, pool, depth):
    if depth <= 0:
        if pool and rng.random() < 0.5:
            return rng.choice(pool)
        return App(rng.choice(["a", "b", "c"]), ())
    if pool and rng.random() < 0.3:
        return rng.choice(pool)
    name, ar = rng.choice(FUNCS)
    return App(name, tuple(random_term(rng, pool, depth - 1) for _ in range(ar)))


def try_store(s, t):
    store = SubstitutionStore()
    try:
        store.unify(s, t, tag=0)
        return store
    except UnifyError:
        return None


def random_pair_suite(count, seed):
    """Unifiability must agree with the oracle pair by pair; on success
    both substitutions make the two terms literally equal."""
    rng = random.Random(seed)
    successes = 0
    for _ in range(count):
        pool = _vars(rng.randint(1, 5))
        s = random_term(rng, pool, rng.randint(0, 3))
        t = random_term(rng, pool, rng.randint(0, 3))
        store = try_store(s, t)
        subst = oracles.mgu(s, t)
        assert (store is None) == (subst is None), (s, t)
        if store is not None:
            successes += 1
            assert store.resolve(s) == store.resolve(t), (s, t)
            assert oracles.apply_subst(s, subst) == oracles.apply_subst(t, subst), (s, t)
    # the generator should not be degenerate either way
    assert 0 < successes < count


def test_random_pairs_agree_with_oracle():
    random_pair_suite(2000, seed=11)


def test_identical_terms_unify_without_binding():
    X, Y = _vars(2)[:2]
    s = App("g", (X, App("f", (Y,))))
    store = SubstitutionStore()
    store.unify(s, s, tag=1)
    assert store.bindings == {}


def test_occurs_check_rejects_direct_cycle():
    X = _vars(1)[0]
    assert try_store(X, App("f", (X,))) is None


def test_occurs_check_rejects_nested_cycle():
    X, Y = _vars(2)[:2]
    assert try_store(X, App("g", (Y, App("f", (X,))))) is None


def test_occurs_check_through_earlier_binding():
    X, Y = _vars(2)[:2]
    store = SubstitutionStore()
    store.unify(X, App("f", (Y,)), tag=1)
    try:
        store.unify(Y, App("f", (X,)), tag=2)
        assert False, "cycle through X := f(Y) not caught"
    except UnifyError:
        pass


def test_occurs_check_random_cases_all_fail():
    # wrap a variable inside a random context and unify with itself
    rng = random.Random(5)
    for _ in range(200):
        X = _vars(1)[0]
        t = App("f", (random_term(rng, [X], 2),))
        wrapped = App("f", (t,)) if rng.random() < 0.5 else t
        if X not in oracles_vars(wrapped):
            continue
        assert try_store(X, wrapped) is None


def oracles_vars(term, acc=None):
    if acc is None:
        acc = []
    if isinstance(term, Var):
        acc.append(term)
    else:
        for a in term.args:
            oracles_vars(a, acc)
    return acc


def snapshot(store):
    return (
        dict(store.bindings),
        dict(store.reasons),
        list(store.trail),
        list(store.diseqs),
    )


def test_retract_restores_store_exactly():
    rng = random.Random(23)
    for _ in range(300):
        pool = _vars(4)
        store = SubstitutionStore()
        # some committed history first
        for tag in range(rng.randint(0, 3)):
            s = random_term(rng, pool, 2)
            t = random_term(rng, pool, 2)
            try:
                store.unify(s, t, tag)
            except UnifyError:
                pass
        before = snapshot(store)
        m = store.mark()
        for tag in range(10, 10 + rng.randint(1, 4)):
            s = random_term(rng, pool, 2)
            t = random_term(rng, pool, 2)
            try:
                if rng.random() < 0.2:
                    store.assert_diseq((s,), (t,), tag)
                else:
                    store.unify(s, t, tag)
            except UnifyError:
                pass
        store.retract_to(m)
        assert snapshot(store) == before


def test_failure_reports_the_responsible_tags():
    X, Y = _vars(2)[:2]
    store = SubstitutionStore()
    store.unify(X, App("a", ()), tag=7)
    store.unify(Y, App("b", ()), tag=8)
    try:
        store.unify(X, Y, tag=9)
        assert False
    except UnifyError as e:
        assert 9 in e.tags
        assert 7 in e.tags or 8 in e.tags


def test_diseq_guard_fires_when_terms_collapse():
    X = _vars(1)[0]
    a = App("a", ())
    store = SubstitutionStore()
    store.assert_diseq((X,), (a,), tag=3)
    try:
        store.unify(X, a, tag=4)
        assert False, "diseq guard did not fire"
    except UnifyError as e:
        assert 3 in e.tags


def test_diseq_guard_fails_immediately_when_already_equal():
    a = App("a", ())
    store = SubstitutionStore()
    try:
        store.assert_diseq((a,), (a,), tag=2)
        assert False
    except UnifyError as e:
        assert e.tags == [2]


def test_unifiable_probe_leaves_no_trace():
    X, Y = _vars(2)[:2]
    store = SubstitutionStore()
    assert store.unifiable(X, App("f", (Y,)))
    assert store.bindings == {}
    assert not store.unifiable(X, App("f", (X,)))


def test_literals_dual_needs_opposite_signs_and_same_predicate():
    from connsat.terms import Literal

    X, Y = _vars(2)[:2]
    store = SubstitutionStore()
    p = Literal("p", (X,), False)
    np = Literal("p", (Y,), True)
    nq = Literal("q", (Y,), True)
    assert literals_dual(store, p, np)
    assert not literals_dual(store, p, Literal("p", (Y,), False))
    assert not literals_dual(store, p, nq)
    assert store.bindings == {}
