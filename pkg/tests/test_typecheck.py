import pytest

from dialectica.parsing import parse_source, parse_target
from dialectica.syntax import REAL, Arrow, Lam, Monad, Prod, Var, arrows
from dialectica.typecheck import (
    EMPTY,
    Context,
    TypeCheckError,
    check_soundness,
    infer_source,
    infer_target,
    well_typed_target,
)

R = REAL
R2R = arrows(R, R)


def test_infer_source():
    assert infer_source(EMPTY, parse_source(r"\(x:real). sq (sq x)")) == R2R
    assert infer_source(EMPTY, parse_source(r"\(f:real->real) (x:real). f (f x)")) == arrows(R2R, R, R)
    assert infer_source(Context.of(y=R), parse_source("mul y")) == R2R
    assert infer_source(EMPTY, parse_source("2.5")) == R


@pytest.mark.parametrize(
    "ctx, text, message",
    [
        (EMPTY, "x", "unbound variable"),
        (EMPTY, r"\x. x", "unannotated binder"),
        (EMPTY, r"\(x:real). x x", "application mismatch"),
        (Context.of(f=R2R), "f f", "application mismatch"),
    ],
)
def test_infer_source_errors(ctx, text, message):
    with pytest.raises(TypeCheckError, match=message):
        infer_source(ctx, parse_source(text))


def test_context_shadowing():
    ctx = Context.of(x=R).extend("x", R2R)
    assert ctx.lookup("x") == R2R
    assert len(ctx) == 1


def test_target_monad_rules():
    assert infer_target(EMPTY, parse_target("[1.5]")) == Monad(R)
    assert infer_target(EMPTY, parse_target(r"[1.5] >>= \z. [<z, z>]")) == Monad(Prod(R, R))
    assert infer_target(EMPTY, parse_target("0 + [2.0]")) == Monad(R)
    assert infer_target(EMPTY, parse_target("0"), Monad(R)) == Monad(R)


def test_zero_needs_expected_type():
    with pytest.raises(TypeCheckError, match="0 requires expected monadic type"):
        infer_target(EMPTY, parse_target("0"))
    with pytest.raises(TypeCheckError):
        infer_target(EMPTY, parse_target("0"), R)


def test_plus_needs_matching_monads():
    assert not well_typed_target(EMPTY, parse_target("[1.5] + [<1.5, 1.5>]"), Monad(R))
    assert not well_typed_target(EMPTY, parse_target("1.5 + 2.5"), R)


def test_unannotated_target_binders_are_inferred():
    # the transformation emits unannotated binders
    t = parse_target(r"\π. [mul (d1_sq π^1) π^2]")
    assert infer_target(EMPTY, t) == Arrow(Prod(R, R), Monad(R))


def test_undetermined_type_is_an_error():
    with pytest.raises(TypeCheckError, match="cannot determine"):
        infer_target(EMPTY, parse_target(r"\x. x"))
    assert infer_target(EMPTY, parse_target(r"\x. x"), R2R) == R2R


def test_ill_typed_target():
    with pytest.raises(TypeCheckError):
        infer_target(EMPTY, parse_target("<1.5, 2.5>^1 1.5"))
    with pytest.raises(TypeCheckError):
        infer_target(Context.of(m=R), parse_target(r"m >>= \z. [z]"))


def test_soundness_identity():
    report = check_soundness(EMPTY, parse_source(r"\(x:real). x"), R2R)
    assert report.ok and len(report.judgments) == 1
    assert "(real -> real) * (real * real -> M[real])" in report.judgments[0]


def test_soundness_open_higher_order_term():
    ctx = Context.of(f=R2R, x=R)
    report = check_soundness(ctx, parse_source("f (f x)"), R)
    assert report.ok
    assert len(report.judgments) == 3  # witness + one counter per variable


def test_soundness_reports_source_errors():
    report = check_soundness(EMPTY, parse_source(r"\(x:real). x"), R)
    assert not report.ok and "source judgment" in report.failure
    report = check_soundness(EMPTY, parse_target("[x]"), R)
    assert not report.ok


def test_soundness_detects_a_broken_transformation(monkeypatch):
    """Negative control: a counter of the wrong type is reported with its judgment."""
    import dialectica.transform as tr

    def bad_counter(t, y, signature=None):
        return Lam("π", Var("π"))

    monkeypatch.setattr(tr, "counter", bad_counter)
    report = check_soundness(Context.of(x=R), parse_source("sq x"), R)
    assert not report.ok
    assert report.failure.startswith("counter x")
