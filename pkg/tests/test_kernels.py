"""Compiled engine vs reference engine: results must match bit for bit.

The compiled kernels reimplement the exact playout, nesting, and pruning
recipes, including RNG stream allocation, so every (algorithm, seed,
budget) triple must produce the identical score, move list, and playout
count.  Any divergence means the two engines are searching different trees.
"""

import pytest

from hpfold.engine import resolve_engine, run_search
from hpfold.lattice import parse_sequence
from hpfold.lnmcs import LnmcsParams
from hpfold.playout import PlayoutParams

SEQS = {
    2: parse_sequence("HPHHPPHHPHPHHP"),
    3: parse_sequence("HPHHPPHHPHPH"),
}


def both_engines(dim, algo, seed, *, level=1, lnmcs_params=LnmcsParams(eval_playouts=3),
                 play_params=PlayoutParams(), max_playouts=None, target=None):
    out = []
    for engine in ("py", "fast"):
        out.append(run_search(
            SEQS[dim], dim, algo, seed=seed, level=level,
            play_params=play_params, lnmcs_params=lnmcs_params,
            max_playouts=max_playouts, target=target, engine=engine))
    return out


def assert_identical(py, fast):
    assert py.score == fast.score
    assert py.moves == fast.moves
    assert py.playouts == fast.playouts
    assert py.cancelled == fast.cancelled


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_single_playout_identical(dim, seed):
    py, fast = both_engines(dim, "playout", seed)
    assert_identical(py, fast)


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("seed", [10, 11, 12])
def test_nested_search_identical(dim, seed):
    py, fast = both_engines(dim, "nmcs", seed, level=2,
                            max_playouts=3000)
    assert_identical(py, fast)


@pytest.mark.parametrize("dim", [2, 3])
@pytest.mark.parametrize("policy", ["max", "mean", "median"])
def test_lazy_search_identical_across_policies(dim, policy):
    params = LnmcsParams(eval_playouts=3, ratio=0.9, policy=policy)
    py, fast = both_engines(dim, "lnmcs", 21, level=2, lnmcs_params=params,
                            max_playouts=3000)
    assert_identical(py, fast)


@pytest.mark.parametrize("seed", [30, 31])
def test_faithful_eval_identical(seed):
    params = LnmcsParams(eval_playouts=4, ratio=0.5, faithful_eval=True)
    py, fast = both_engines(3, "lnmcs", seed, level=1, lnmcs_params=params)
    assert_identical(py, fast)


def test_budget_cutoff_identical():
    # Cancellation paths must divide the stream at the same playout.
    for budget in (1, 7, 50, 333):
        py, fast = both_engines(3, "nmcs", 5, level=2, max_playouts=budget)
        assert_identical(py, fast)
        assert py.playouts <= budget


def test_target_cutoff_identical():
    py, fast = both_engines(2, "nmcs", 9, level=2, target=3.0)
    assert_identical(py, fast)
    assert py.score >= 3.0


def test_uniform_bias_identical():
    py, fast = both_engines(3, "nmcs", 40, level=1,
                            play_params=PlayoutParams(bias=0.0),
                            max_playouts=2000)
    assert_identical(py, fast)


def test_engine_resolution():
    assert resolve_engine("auto") == "fast"
    assert resolve_engine("auto", two_pass=True) == "py"
    assert resolve_engine("auto", trace_wanted=True) == "py"
    assert resolve_engine("py") == "py"
    # Features only the reference engine has win over an explicit "fast".
    assert resolve_engine("fast", two_pass=True) == "py"
    with pytest.raises(ValueError):
        resolve_engine("turbo")
    result = run_search(SEQS[2], 2, "lnmcs", seed=1,
                        lnmcs_params=LnmcsParams(eval_playouts=2, two_pass=True),
                        engine="fast")
    assert result.engine == "py"
