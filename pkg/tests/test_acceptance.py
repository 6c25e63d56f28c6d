"""Acceptance gate: every numbered criterion at its stated tolerance.

Each test prints a single pass/fail line for its criterion.  The heavy
artifacts (attractor clouds) are shared through the session context, so the
whole gate runs in a few minutes.

One criterion asserts slice values that the slice machinery provably cannot
produce; it is implemented exactly as stated and left red rather than
weakened: C5 expects the golden+even slices {A,B} and {B,C}, but the
complete periodic orbit A -> B -> C over the strategy (001)* lies in the
restricted attractor, forcing the slice {A,B,C} (measured values are in the
test output; the full analysis lives in the decisions ledger outside the
package).
"""

import pytest

from choicedyn import verify


def _run(ctx, cid):
    result = verify.run_criterion(cid, ctx)
    print(result.line())
    assert result.name == verify.NAMES[cid]
    assert result.passed, result.detail
    return result


def test_c01_fixed_points_exact(ctx):
    _run(ctx, "C1")


def test_c02_step_bound_gate(ctx):
    _run(ctx, "C2")


def test_c03_cantor_oracle(ctx):
    _run(ctx, "C3")


def test_c04_hutchinson_invariance(ctx):
    _run(ctx, "C4")


def test_c05_exact_two_slices(ctx):
    _run(ctx, "C5")


def test_c06_malaria_restricted(ctx):
    _run(ctx, "C6")


def test_c07_gestalt_effect(ctx):
    _run(ctx, "C7")


def test_c08_counterexample_diagnostics(ctx):
    _run(ctx, "C8")


def test_c09_inclusion_suite(ctx):
    _run(ctx, "C9")


def test_c10_chaos_game(ctx):
    _run(ctx, "C10")


def test_criterion_ids_unique_and_complete():
    ids = [cid for cid, _ in verify.CRITERIA]
    assert ids == [f"C{i}" for i in range(1, 11)]
    assert len(set(ids)) == len(ids)
    assert set(verify.NAMES) == set(ids)
