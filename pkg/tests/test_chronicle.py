"""Chronicle versioning: context-derived dependencies, freshness, repair.

Random DAG trials realize a planned dependency graph as real contexts in a
store (one base context per version, one import context per dependency
edge), then compare the registry's answers against plain graph-walk oracles.
"""

import random

import pytest

from peerhol.chronicle import Chronicles
from peerhol.context import ContextTree
from peerhol.errors import DependencyCycle
from peerhol.store import EntityStore, MemoryBackend, snapshot_hash
from peerhol.values import IntVal

from .oracles import reachable, up_to_date_oracle


def fresh(clock_start=5_000):
    class _Clock:
        def __init__(self):
            self.now = clock_start

        def __call__(self):
            self.now += 1
            return self.now

    store = EntityStore(MemoryBackend(), rng=random.Random(9), clock=_Clock())
    tree = ContextTree(store)
    return store, tree, Chronicles(store)


def add_version(tree, chron, key, dep_finals):
    """Register one new version of `key` whose imports realize the given
    dependency edges; returns the version."""
    owner, name = key
    base = tree.create_root(owner)
    owned = [base.ref]
    final = base.ref
    for dep_final in dep_finals:
        imp = tree.import_context(dep_final, owner)
        owned.append(imp.ref)
        final = imp.ref
    return chron.register_version(owner, name, owned, final, "", {})


def build_random_dag(rng, tree, chron, max_nodes=30):
    """Random multi-chronicle version DAG; returns (edges, versions)."""
    n_chron = rng.randint(2, 6)
    keys = [("u", f"c{i}") for i in range(n_chron)]
    total = rng.randint(n_chron, max_nodes)
    edges = {}
    versions = []
    for _ in range(total):
        key = rng.choice(keys)
        foreign = [v for v in versions if v.chronicle_key != key]
        deps = rng.sample(foreign, min(len(foreign), rng.randint(0, 3)))
        v = add_version(tree, chron, key, [d.final for d in deps])
        edges[v.ident] = {d.ident for d in deps}
        versions.append(v)
    return edges, versions


# ------------------------------------------------------------ unit pieces


def test_register_assigns_sequential_ids():
    _, tree, chron = fresh()
    v1 = add_version(tree, chron, ("u", "a"), [])
    v2 = add_version(tree, chron, ("u", "a"), [])
    assert (v1.version_id, v2.version_id) == (1, 2)
    c = chron.require("u", "a")
    assert c.newest is v2
    assert [v.version_id for v in c.versions] == [2, 1]


def test_direct_dependencies_from_contexts():
    _, tree, chron = fresh()
    a1 = add_version(tree, chron, ("u", "a"), [])
    b1 = add_version(tree, chron, ("u", "b"), [a1.final])
    assert chron.direct_dependencies(b1) == {a1.ident}
    assert chron.direct_dependencies(a1) == set()


def test_owning_and_nearest_owned():
    _, tree, chron = fresh()
    a1 = add_version(tree, chron, ("u", "a"), [])
    assert chron.owning_version(a1.final) == a1.ident
    # a context under a1's final that no version owns resolves to a1
    child = tree.create_child(tree.load(a1.final), "bind", ("k", IntVal(1)))
    assert chron.owning_version(child.ref) is None
    assert chron.nearest_owned(child.ref) == a1.ident


def test_dependency_is_transitive():
    _, tree, chron = fresh()
    a1 = add_version(tree, chron, ("u", "a"), [])
    b1 = add_version(tree, chron, ("u", "b"), [a1.final])
    c1 = add_version(tree, chron, ("u", "c"), [b1.final])
    assert chron.all_dependencies(c1) == {a1.ident, b1.ident}
    assert chron.depends_on(c1, a1.ident)
    assert not chron.depends_on(a1, c1.ident)


def test_up_to_date_flips_on_new_dependency_version():
    _, tree, chron = fresh()
    a1 = add_version(tree, chron, ("u", "a"), [])
    add_version(tree, chron, ("u", "b"), [a1.final])
    assert chron.status(chron.require("u", "b")) == "upToDate"
    add_version(tree, chron, ("u", "a"), [])
    assert chron.status(chron.require("u", "b")) == "outOfDate"
    assert chron.status(chron.require("u", "a")) == "upToDate"


def test_records_survive_reload():
    store, tree, chron = fresh()
    a1 = add_version(tree, chron, ("u", "a"), [])
    b1 = add_version(tree, chron, ("u", "b"), [a1.final])
    again = Chronicles(store)
    got = again.version(("u", "b"), 1)
    assert got.owned == b1.owned
    assert got.final == b1.final
    assert again.direct_dependencies(got) == {a1.ident}


def test_default_assignment_tracks_newest():
    _, tree, chron = fresh()
    add_version(tree, chron, ("u", "a"), [])
    add_version(tree, chron, ("u", "a"), [])
    add_version(tree, chron, ("u", "b"), [])
    assert chron.default_assignment() == {("u", "a"): 2, ("u", "b"): 1}


# ------------------------------------------------------ random DAG trials


def test_up_to_date_matches_oracle_on_random_dags():
    rng = random.Random(20_26)
    outcomes = {True: 0, False: 0}
    for _ in range(200):
        _, tree, chron = fresh()
        edges, versions = build_random_dag(rng, tree, chron)
        newest_of = {
            key: (key, c.newest.version_id) for key, c in chron.by_key.items()
        }
        for v in versions:
            assert chron.direct_dependencies(v) == edges[v.ident], v
        for key, c in chron.by_key.items():
            got = chron.is_up_to_date(c)
            want = up_to_date_oracle(edges, newest_of, newest_of[key])
            assert got == want, key
            outcomes[got] += 1
    # the trial set must exercise both answers
    assert outcomes[True] > 0 and outcomes[False] > 0


def test_all_dependencies_matches_reachability_oracle():
    rng = random.Random(77)
    for _ in range(40):
        _, tree, chron = fresh()
        edges, versions = build_random_dag(rng, tree, chron, max_nodes=15)
        for v in versions:
            assert chron.all_dependencies(v) == reachable(edges, v.ident)


# ------------------------------------------------------------- cycle guard


def test_guard_rejects_direct_self_dependency():
    _, tree, chron = fresh()
    a1 = add_version(tree, chron, ("u", "a"), [])
    guard = chron.make_guard(("u", "a"))
    with pytest.raises(DependencyCycle):
        guard(a1.final)


def test_guard_rejects_transitive_self_dependency():
    _, tree, chron = fresh()
    a1 = add_version(tree, chron, ("u", "a"), [])
    b1 = add_version(tree, chron, ("u", "b"), [a1.final])
    guard = chron.make_guard(("u", "a"))
    with pytest.raises(DependencyCycle):
        guard(b1.final)  # b depends on a, so building a under b cycles


def test_guard_allows_unrelated_parents():
    _, tree, chron = fresh()
    a1 = add_version(tree, chron, ("u", "a"), [])
    guard = chron.make_guard(("u", "b"))
    guard(a1.final)  # no exception


def test_guard_rejects_every_injected_violation():
    rng = random.Random(31)
    violations = accepted = 0
    for _ in range(60):
        _, tree, chron = fresh()
        edges, versions = build_random_dag(rng, tree, chron, max_nodes=12)
        key = rng.choice(list(chron.by_key))
        guard = chron.make_guard(key)
        for w in versions:
            would_cycle = w.chronicle_key == key or any(
                dep[0] == key for dep in reachable(edges, w.ident)
            )
            if would_cycle:
                violations += 1
                with pytest.raises(DependencyCycle):
                    guard(w.final)
            else:
                accepted += 1
                guard(w.final)
    assert violations > 50
    assert accepted > 50


def test_guard_wired_into_context_creation():
    _, tree, chron = fresh()
    a1 = add_version(tree, chron, ("u", "a"), [])
    tree.cycle_guard = chron.make_guard(("u", "a"))
    with pytest.raises(DependencyCycle):
        tree.create_child(tree.load(a1.final), "bind", ("k", IntVal(1)))
    tree.cycle_guard = None


# ----------------------------------------------------------------- repair


def diamond():
    """a at the base, b and c over it, d over both."""
    store, tree, chron = fresh()
    a1 = add_version(tree, chron, ("u", "a"), [])
    b1 = add_version(tree, chron, ("u", "b"), [a1.final])
    c1 = add_version(tree, chron, ("u", "c"), [a1.final])
    add_version(tree, chron, ("u", "d"), [b1.final, c1.final])
    return store, tree, chron


def regen_runner(tree, chron, log=None, fail_keys=()):
    def runner(c, assignment):
        if c.key in fail_keys:
            raise RuntimeError("regeneration refused for the test")
        if log is not None:
            log.append(c.key)
        dep_keys = sorted({k for k, _ in chron.direct_dependencies(c.newest)})
        finals = [chron.version(k, assignment[k]).final for k in dep_keys]
        base = tree.create_root(c.owner)
        owned = [base.ref]
        final = base.ref
        for f in finals:
            imp = tree.import_context(f, c.owner)
            owned.append(imp.ref)
            final = imp.ref
        return owned, final

    return runner


def test_repair_diamond_topological_order():
    store, tree, chron = diamond()
    add_version(tree, chron, ("u", "a"), [])  # a:2 makes b, c, d stale
    assert {c.key for c in chron.stale()} == {("u", "b"), ("u", "c"), ("u", "d")}

    log = []
    report = chron.repair_sweep(regen_runner(tree, chron, log))
    assert report["checked"] == 3
    assert {tuple(r.values()) for r in report["regenerated"]} == {
        ("u", "b"), ("u", "c"), ("u", "d"),
    }
    assert set(log[:2]) == {("u", "b"), ("u", "c")}
    assert log[2] == ("u", "d")
    # after the sweep everything is current and d rides on b:2 and c:2
    assert chron.stale() == []
    d2 = chron.require("u", "d").newest
    assert d2.version_id == 2
    assert chron.direct_dependencies(d2) == {
        (("u", "b"), 2), (("u", "c"), 2),
    }


def test_repair_never_mutates_existing_versions():
    store, tree, chron = diamond()
    add_version(tree, chron, ("u", "a"), [])

    def freeze():
        recs = {}
        for c in chron.all_chronicles():
            for v in c.versions:
                recs[v.ident] = (
                    tuple(sorted(str(r) for r in v.owned)),
                    str(v.final),
                    v.script,
                    tuple(sorted(v.assignment.items())),
                )
        return recs

    before_versions = freeze()
    before_contexts = {
        # decoded context records for every ref present before the sweep
        str(ref): store.load_context(ref)
        for c in chron.all_chronicles()
        for v in c.versions
        for ref in v.owned
    }
    chron.repair_sweep(regen_runner(tree, chron))
    after_versions = freeze()
    for ident, rec in before_versions.items():
        assert after_versions[ident] == rec
    from peerhol.refs import ContextRef

    for text, rec in before_contexts.items():
        assert store.load_context(ContextRef.parse(text)) == rec


def test_repair_is_deterministic():
    hashes = []
    for _ in range(2):
        store, tree, chron = diamond()
        add_version(tree, chron, ("u", "a"), [])
        chron.repair_sweep(regen_runner(tree, chron))
        hashes.append(snapshot_hash(store.backend))
    assert hashes[0] == hashes[1]


def test_repair_marks_failures_and_continues():
    store, tree, chron = diamond()
    add_version(tree, chron, ("u", "a"), [])
    report = chron.repair_sweep(
        regen_runner(tree, chron, fail_keys={("u", "c")})
    )
    assert [f["name"] for f in report["failed"]] == ["c"]
    assert chron.require("u", "c").regeneration_failed
    assert chron.require("u", "c").newest.version_id == 1
    # b and d still regenerated; d now rides b:2 and the surviving c:1
    assert chron.require("u", "b").newest.version_id == 2
    d2 = chron.require("u", "d").newest
    assert d2.version_id == 2
    assert chron.direct_dependencies(d2) == {
        (("u", "b"), 2), (("u", "c"), 1),
    }
    # a later successful sweep clears the flag
    report2 = chron.repair_sweep(regen_runner(tree, chron))
    assert [f["name"] for f in report2.get("failed", [])] == []
    assert not chron.require("u", "c").regeneration_failed


def test_repair_noop_when_everything_current():
    store, tree, chron = diamond()
    report = chron.repair_sweep(regen_runner(tree, chron))
    assert report == {"regenerated": [], "failed": [], "checked": 0}
