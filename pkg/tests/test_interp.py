"""Script evaluation: statements over (context, environment) pairs."""

import pytest

from peerhol.errors import ScriptError
from peerhol.interp import Interpreter
from peerhol.syntax import parse_script, parse_term, print_term
from peerhol.values import (
    BoolVal,
    CtxVal,
    FunVal,
    IntVal,
    ListVal,
    StrVal,
    TermVal,
    ThmVal,
)


@pytest.fixture
def world(engine):
    """(interpreter factory, root context) over a bootstrapped engine."""

    def make(user="t", assignment=None, recursion_limit=10_000):
        return Interpreter(
            engine.tree,
            engine.chronicles,
            user,
            engine.root_ref,
            assignment=assignment,
            recursion_limit=recursion_limit,
        )

    return engine, make


def run(world, src, user="t"):
    engine, make = world
    interp = make(user)
    ctx, env = interp.run(parse_script(src), engine.root)
    return engine, interp, ctx, env


def printed(engine, ctx, term):
    return print_term(term, engine.tree.name_env(engine.tree.load(ctx.ref)))


# ------------------------------------------------------- worked examples


def test_impl_example(world):
    src = (
        "have impl = '∀ x : prop. x ⟶ x' by\n"
        "begin\n"
        '  fix "x : prop"\n'
        "  assume h = 'x'\n"
        "  have 'x' by h\n"
        "end"
    )
    engine, interp, ctx, env = run(world, src)
    assert isinstance(env["impl"], ThmVal)
    thm = env["impl"].thm
    want = parse_term(
        "∀ x : prop. x ⟶ x", engine.tree.name_env(engine.tree.load(ctx.ref))
    )
    assert thm.proposition == want
    # the label is also resolvable through the final context
    assert engine.tree.resolve(engine.tree.load(ctx.ref), "impl").thm == thm
    # and the theorem's home is on the final context's parent chain
    homes = []
    cur = engine.tree.load(ctx.ref)
    while cur is not None:
        homes.append(cur.ref)
        cur = engine.tree.parent(cur)
    assert thm.context_ref in homes


def test_even_odd_example(world):
    src = (
        "def even n = if n == 0 then true else odd (n - 1) end\n"
        "def odd n = if n == 0 then false else even (n - 1) end\n"
        "val a = odd 7\n"
        "val b = odd 8\n"
        "val c = even 8"
    )
    _, _, _, env = run(world, src)
    assert env["a"].value is True
    assert env["b"].value is False
    assert env["c"].value is True


# --------------------------------------------------------- fix, four ways


def test_fix_typed_string(world):
    engine, interp, ctx, env = run(world, 'fix "c : set"')
    loaded = engine.tree.load(ctx.ref)
    assert loaded.kind == "fix"
    assert loaded.C[0][0] == "c"


def test_fix_membership_string(world):
    engine, interp, ctx, env = run(
        world, 'fix "D : set"\nfix "y ∈ D"'
    )
    loaded = engine.tree.load(ctx.ref)
    assert loaded.kind == "assume"  # membership form ends in an assumption
    assert isinstance(env["fact"], ThmVal)
    assert printed(engine, ctx, env["fact"].thm.proposition) == "y ∈ D"


def test_fix_membership_label(world):
    engine, interp, ctx, env = run(
        world, 'fix "D : set"\nfix hy = "y ∈ D"'
    )
    assert env["hy"].thm == env["fact"].thm


def test_fix_pair_with_type(world):
    engine, interp, ctx, env = run(world, "fix (\"c\", 'prop')")
    loaded = engine.tree.load(ctx.ref)
    assert loaded.kind == "fix"
    assert loaded.C[0][0] == "c"
    assert str(loaded.C[0][1]) == "prop"


def test_fix_pair_with_domain_term(world):
    src = "fix (\"D\", 'prop')\nfix (\"y\", '∅')"
    engine, interp, ctx, env = run(world, src)
    loaded = engine.tree.load(ctx.ref)
    assert loaded.kind == "assume"
    assert printed(engine, ctx, env["fact"].thm.proposition) == "y ∈ ∅"


def test_fix_label_rejected_for_plain_forms(world):
    with pytest.raises(ScriptError):
        run(world, 'fix lbl = "c : set"')
    with pytest.raises(ScriptError):
        run(world, "fix lbl = (\"c\", 'set')")


# ----------------------------------------------------- other statements


def test_assume_binds_fact_and_label(world):
    engine, interp, ctx, env = run(world, 'fix "p : prop"\nassume hp = \'p\'')
    # fact and label live in the context, reachable by name resolution
    loaded = engine.tree.load(ctx.ref)
    fact = engine.tree.resolve(loaded, "fact")
    label = engine.tree.resolve(loaded, "hp")
    assert isinstance(fact, ThmVal)
    assert label.thm == fact.thm
    assert loaded.kind == "assume"


def test_define_introduces_constant_and_equation(world):
    engine, interp, ctx, env = run(world, "define e = '∅'")
    loaded = engine.tree.load(ctx.ref)
    assert loaded.kind == "define"
    fact = engine.tree.resolve(loaded, "fact")
    assert printed(engine, ctx, fact.thm.proposition) == "e = ∅"


def test_obtain_names_witnesses(world):
    src = (
        "assume ex = '∃ x : set. ∃ y : set. x ∈ y'\n"
        "obtain u, v = ex"
    )
    engine, interp, ctx, env = run(world, src)
    loaded = engine.tree.load(ctx.ref)
    assert loaded.kind == "obtain"
    assert [n for n, _ in loaded.C] == ["u", "v"]
    fact = engine.tree.resolve(loaded, "fact")
    assert printed(engine, ctx, fact.thm.proposition) == "u ∈ v"


def test_have_guard_mismatch_is_script_error(world):
    with pytest.raises(ScriptError) as ei:
        run(world, "have 'false' by truth")
    assert ei.value.error_class == "GuardMismatch"
    assert ei.value.line == 1


def test_labeled_have_binds_env_and_context(world):
    src = "have t2 = '¬¬true' by truth"
    engine, interp, ctx, env = run(world, src)
    assert isinstance(env["t2"], ThmVal)
    assert engine.tree.resolve(engine.tree.load(ctx.ref), "t2").thm == env["t2"].thm


def test_let_and_unbind(world):
    engine, interp, ctx, env = run(world, "let n = 41\nval m = n + 1")
    assert env["m"].value == 42
    assert engine.tree.resolve(engine.tree.load(ctx.ref), "n").value == 41
    with pytest.raises(ScriptError):
        run(world, "let n = 1\nunbind n\nval m = n")


def test_val_binds_env_only(world):
    engine, interp, ctx, env = run(world, "val n = 5")
    assert env["n"].value == 5
    assert ctx.ref == engine.root.ref  # context untouched


# ------------------------------------------------------------ application


def test_apply_theorem_to_theorem(world):
    src = (
        'fix "p : prop"\nfix "q : prop"\n'
        "assume hpq = 'p ⟶ q'\n"
        "assume hp = 'p'\n"
        "val out = hpq hp"
    )
    engine, interp, ctx, env = run(world, src)
    assert printed(engine, ctx, env["out"].thm.proposition) == "q"


def test_apply_theorem_to_term(world):
    src = (
        "have impl = '∀ x : prop. x ⟶ x' by\n"
        "begin\n"
        '  fix "x : prop"\n'
        "  assume h = 'x'\n"
        "  have 'x' by h\n"
        "end\n"
        "val inst = impl 'true'"
    )
    engine, interp, ctx, env = run(world, src)
    assert printed(engine, ctx, env["inst"].thm.proposition) == "true ⟶ true"


def test_apply_theorem_to_string_coerces(world):
    src = (
        "have impl = '∀ x : prop. x ⟶ x' by\n"
        "begin\n"
        '  fix "x : prop"\n'
        "  assume h = 'x'\n"
        "  have 'x' by h\n"
        "end\n"
        'val inst = impl "false"'
    )
    engine, interp, ctx, env = run(world, src)
    # false ⟶ false collapses under normalization
    assert printed(engine, ctx, env["inst"].thm.proposition) == "true"


def test_apply_function_curried(world):
    src = "def add a b = a + b\nval f = add 2\nval n = f 40"
    _, _, _, env = run(world, src)
    assert isinstance(env["f"], FunVal)
    assert env["n"].value == 42


def test_apply_non_applicable(world):
    with pytest.raises(ScriptError) as ei:
        run(world, "val n = 3\nval m = n 4")
    assert ei.value.error_class == "NotApplicable"
    assert ei.value.line == 2


def test_apply_theorem_shape_mismatch(world):
    with pytest.raises(ScriptError) as ei:
        run(world, "val x = truth truth")
    assert ei.value.error_class == "NotApplicable"


# ----------------------------------------------- control flow and values


def test_if_threads_context_in_statement_position(world):
    src = 'if true then\n  let n = 1\nelse\n  let n = 2\nend\nval m = n'
    _, _, _, env = run(world, src)
    assert env["m"].value == 1


def test_if_value_position_isolates(world):
    src = (
        "val r = if true then\n"
        "  val k = 3\n"
        "  k + 4\n"
        "else\n"
        "  0\n"
        "end\n"
    )
    engine, interp, ctx, env = run(world, src)
    assert env["r"].value == 7
    assert "k" not in env  # inner binding stays inside the value position


def test_if_condition_must_be_bool(world):
    with pytest.raises(ScriptError):
        run(world, "if 3 then 1 else 2 end")


def test_for_threads_bindings(world):
    src = "val acc = 0\nfor i in [1, 2, 3] do\n  val acc = acc + i\nend\nval out = acc"
    _, _, _, env = run(world, src)
    assert env["out"].value == 6


def test_while_loop(world):
    src = "val n = 0\nwhile n < 5 do\n  val n = n + 1\nend\nval out = n"
    _, _, _, env = run(world, src)
    assert env["out"].value == 5


def test_match_first_case_wins_and_captures(world):
    src = (
        "def classify n =\n"
        "  match n\n"
        "  case 0 => \"zero\"\n"
        "  case (x, y) => x + y\n"
        "  case k => k * 2\n"
        "  end\n"
        "val a = classify 0\n"
        "val b = classify (2, 3)\n"
        "val c = classify 10"
    )
    _, _, _, env = run(world, src)
    assert env["a"].value == "zero"
    assert env["b"].value == 5
    assert env["c"].value == 20


def test_match_without_hit_fails(world):
    with pytest.raises(ScriptError):
        run(world, 'match 3\ncase 0 => "zero"\nend')


def test_block_value_is_last_expression(world):
    _, _, _, env = run(world, "val r = begin\n  val a = 2\n  a * 3\nend")
    assert env["r"].value == 6


def test_block_without_expression_yields_context(world):
    _, _, _, env = run(world, "val r = begin\n  let a = 2\nend")
    assert isinstance(env["r"], CtxVal)


def test_with_do_targets_other_context(world):
    src = (
        "val snap = begin\n  let n = 10\nend\n"
        "let n = 20\n"
        "val r = with snap do\n  n + 1\nend\n"
        "val here = n"
    )
    _, _, _, env = run(world, src)
    assert env["r"].value == 11
    assert env["here"].value == 20


def test_this_and_root(world):
    src = "val a = this\nlet n = 1\nval b = this\nval c = root"
    engine, interp, ctx, env = run(world, src)
    assert isinstance(env["a"], CtxVal)
    assert env["b"].ref == ctx.ref
    assert env["c"].ref == engine.root_ref
    assert env["a"].ref != env["b"].ref


def test_dot_access_on_context_value(world):
    src = "val snap = begin\n  let n = 7\nend\nval out = snap.n"
    _, _, _, env = run(world, src)
    assert env["out"].value == 7


# ----------------------------------------------------- operators, equality


def test_arithmetic_and_comparison(world):
    src = (
        "val a = 2 + 3 * 4\n"
        "val b = 10 - 4\n"
        'val c = "ab" + "cd"\n'
        "val d = [1] + [2]\n"
        "val e = 3 < 4\n"
        "val f = 3 == 3\n"
        "val g = 3 <> 4"
    )
    _, _, _, env = run(world, src)
    assert env["a"].value == 14
    assert env["b"].value == 6
    assert env["c"].value == "abcd"
    assert [x.value for x in env["d"].items] == [1, 2]
    assert env["e"].value is True
    assert env["f"].value is True
    assert env["g"].value is True


def test_term_equality_is_up_to_normalization(world):
    src = "val a = '¬¬true' == 'true'\nval b = 'true' == 'false'"
    _, _, _, env = run(world, src)
    assert env["a"].value is True
    assert env["b"].value is False


def test_theorem_equality_compares_propositions(world):
    src = "have a = '¬¬true' by truth\nval same = a == truth"
    _, _, _, env = run(world, src)
    assert env["same"].value is True


def test_type_literals(world):
    src = "val t = 'set -> prop'\nval u = 'prop'"
    _, _, _, env = run(world, src)
    from peerhol.values import TypeVal

    assert isinstance(env["t"], TypeVal)
    assert isinstance(env["u"], TypeVal)


# ------------------------------------------------------------- references


def test_at_reference_numeric_and_named(world):
    engine, make = world
    eng, interp, ctx, env = run(world, "let marker = 1")
    eng.chronicles.register_version(
        "t", "base", frozenset(interp.created), ctx.ref, "let marker = 1", {}
    )
    src = "val c = @base\nval n = c.marker"
    interp2 = make("t")
    _, env2 = interp2.run(parse_script(src), eng.root)
    assert env2["n"].value == 1
    # the wrapper context is an import recorded among created contexts
    wrapper = eng.tree.load(env2["c"].ref)
    assert wrapper.kind == "import"
    assert wrapper.ref in interp2.created


def test_at_reference_with_owner(world):
    engine, make = world
    eng, interp, ctx, env = run(world, "let marker = 2")
    eng.chronicles.register_version(
        "t", "named", frozenset(interp.created), ctx.ref, "", {}
    )
    interp2 = make("t")
    _, env2 = interp2.run(parse_script("val c = @t:named\nval n = c.marker"),
                          eng.root)
    assert env2["n"].value == 2


def test_at_reference_unknown(world):
    with pytest.raises(ScriptError) as ei:
        run(world, "val c = @nothere")
    assert ei.value.error_class in ("UnknownChronicle", "ScriptError")


def test_at_reference_respects_assignment(world):
    engine, make = world
    eng, interp, ctx, env = run(world, "let marker = 1")
    eng.chronicles.register_version(
        "t", "vers", frozenset(interp.created), ctx.ref, "", {}
    )
    eng2, interp2, ctx2, _ = run(world, "let marker = 99")
    eng.chronicles.register_version(
        "t", "vers", frozenset(interp2.created), ctx2.ref, "", {}
    )
    # default assignment: newest wins
    i3 = make("t")
    _, env3 = i3.run(parse_script("val n = (@vers).marker"), eng.root)
    assert env3["n"].value == 99
    # pinned assignment: version 1
    i4 = make("t", assignment={("t", "vers"): 1})
    _, env4 = i4.run(parse_script("val n = (@vers).marker"), eng.root)
    assert env4["n"].value == 1


# ------------------------------------------------------ limits and errors


def test_recursion_limit(world):
    engine, make = world
    interp = make(recursion_limit=50)
    with pytest.raises(ScriptError) as ei:
        interp.run(parse_script("def spin n = spin (n + 1)\nval x = spin 0"),
                   engine.root)
    assert "recursion" in str(ei.value).lower()


def test_error_positions_point_at_the_statement(world):
    with pytest.raises(ScriptError) as ei:
        run(world, "val a = 1\nval b = a + nope")
    assert ei.value.line == 2
    assert ei.value.error_class == "UnknownNameError"


def test_parse_inside_literal_reports_script_position(world):
    with pytest.raises(ScriptError) as ei:
        run(world, "val t = 'x ⟶'")
    assert ei.value.line == 1


def test_statements_see_earlier_constants_in_literals(world):
    # term literals resolve lazily against the context at evaluation time
    src = 'fix "c : set"\nval t = \'c = c\''
    engine, interp, ctx, env = run(world, src)
    assert isinstance(env["t"], TermVal)


# ------------------------------------------------------------ determinism


def test_run_is_deterministic(world):
    engine, make = world
    src = (
        "def even n = if n == 0 then true else odd (n - 1) end\n"
        "def odd n = if n == 0 then false else even (n - 1) end\n"
        "val xs = [even 4, odd 4]\n"
        "have t = '¬¬true' by truth"
    )
    outs = []
    for _ in range(2):
        interp = make("t")
        ctx, env = interp.run(parse_script(src), engine.root)
        outs.append(
            (
                sorted(env),
                env["xs"].items[0].value,
                print_term(
                    env["t"].thm.proposition,
                    engine.tree.name_env(engine.tree.load(ctx.ref)),
                ),
            )
        )
    assert outs[0] == outs[1]
