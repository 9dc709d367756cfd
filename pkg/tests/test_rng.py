"""Deterministic RNG: reference vectors, substream independence."""

from hypothesis import given
from hypothesis import strategies as st

from hpfold.rng import GOLDEN, MASK64, PlayoutStreams, RngStream, derive_seed, mix64

# Published splitmix64 outputs for seed 0. Any drift here silently changes
# every search trajectory in the package, so they are pinned exactly.
SEED0_OUTPUTS = (0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F)


def test_reference_sequence_from_seed_zero():
    rng = RngStream(0)
    assert tuple(rng.next_u64() for _ in range(3)) == SEED0_OUTPUTS


def test_same_seed_same_stream():
    a = RngStream(987654321)
    b = RngStream(987654321)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]


def test_random_unit_interval_and_resolution():
    rng = RngStream(7)
    xs = [rng.random() for _ in range(10_000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    # 53-bit mantissa: doubling must be exact, values distinct almost surely
    assert len(set(xs)) > 9_990
    mean = sum(xs) / len(xs)
    assert abs(mean - 0.5) < 0.02


def test_first_double_matches_top_53_bits():
    expected = (SEED0_OUTPUTS[0] >> 11) * 2.0**-53
    assert RngStream(0).random() == expected


@given(st.integers(min_value=0, max_value=MASK64))
def test_mix64_stays_in_range(z):
    out = mix64(z)
    assert 0 <= out <= MASK64


def test_derive_seed_is_mix_of_offset_counter():
    # index 0 derives from one golden-ratio step, matching the stream core.
    assert derive_seed(0, 0) == SEED0_OUTPUTS[0]
    assert derive_seed(0, 1) == SEED0_OUTPUTS[1]


def test_derived_seeds_distinct_across_indices():
    seeds = {derive_seed(123456, i) for i in range(1000)}
    assert len(seeds) == 1000


def test_spawned_streams_do_not_overlap_parent():
    parent = RngStream(55)
    child = parent.spawn(0)
    a = [child.next_u64() for _ in range(5)]
    b = [parent.next_u64() for _ in range(5)]
    assert set(a).isdisjoint(b)


def test_playout_streams_isolated_by_role():
    streams = PlayoutStreams(9)
    d1 = streams.decision_stream()
    e1 = streams.eval_stream()
    assert d1.next_u64() != e1.next_u64()
    # Burning decision streams never shifts which eval stream comes next.
    busy = PlayoutStreams(9)
    busy.decision_stream()
    busy.decision_stream()
    control = PlayoutStreams(9)
    assert busy.eval_stream().seed == control.eval_stream().seed
