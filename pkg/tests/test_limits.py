"""Budget bookkeeping shared by the search engines."""

from hpfold.search import SearchLimits, unlimited


def test_unlimited_never_cancels():
    limits = unlimited()
    for _ in range(100):
        limits.charge_playout()
    assert not limits.checkpoint()


def test_playout_budget_trips_at_exact_count():
    limits = SearchLimits.for_run(max_playouts=3)
    for _ in range(2):
        limits.charge_playout()
        assert not limits.checkpoint()
    limits.charge_playout()
    assert limits.checkpoint()
    assert limits.cancelled


def test_target_cancels_on_meet_or_beat():
    limits = SearchLimits.for_run(target=5.0)
    limits.note_best(4.0)
    assert not limits.cancelled
    limits.note_best(5.0)
    assert limits.cancelled
    assert limits.best_score == 5.0


def test_best_score_tracks_maximum():
    limits = unlimited()
    for s in (1.0, 3.0, 2.0):
        limits.note_best(s)
    assert limits.best_score == 3.0


def test_deadline_in_past_cancels():
    limits = SearchLimits.for_run(timeout_secs=-0.001)
    assert limits.checkpoint()


def test_cancel_is_sticky():
    limits = SearchLimits.for_run(max_playouts=1)
    limits.charge_playout()
    assert limits.checkpoint()
    # Nothing un-cancels a tripped run.
    limits.max_playouts = 100
    assert limits.checkpoint()
