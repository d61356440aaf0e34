import numpy as np
import pytest

from typexp import (
    Distribution,
    InvalidQuantizationError,
    QuantizerSpec,
    ValidationError,
    quantization_radius,
    quantize_distribution,
    variational_distance,
)
from conftest import REFERENCE_VECTORS


def dist(values):
    return Distribution(np.array(values))


class TestQuantizerSpec:
    def test_rejects_zero_bits(self):
        with pytest.raises(ValidationError):
            QuantizerSpec(0)

    def test_step(self):
        assert QuantizerSpec(4).step == 0.0625


class TestQuantizeDistribution:
    def test_two_bit_reference_vectors(self):
        # Hand-derived on the 0.25 grid: head entries snap, last entry closes.
        expected = [
            [0.0, 0.75, 0.25],
            [0.25, 0.25, 0.5],
            [0.5, 0.0, 0.5],
            [0.5, 0.5, 0.0],
            [0.25, 0.5, 0.25],
        ]
        for vec, want in zip(REFERENCE_VECTORS, expected):
            got = quantize_distribution(dist(vec), QuantizerSpec(2))
            assert got.probs.tolist() == want

    def test_four_bit_vector(self):
        got = quantize_distribution(dist([0.6, 0.1, 0.3]), QuantizerSpec(4))
        assert got.probs.tolist() == [0.625, 0.125, 0.25]

    def test_high_resolution_round_trip(self):
        p = dist([0.1, 0.8, 0.1])
        got = quantize_distribution(p, QuantizerSpec(30))
        assert variational_distance(p, got) < 2.0**-30 * 3

    def test_head_entries_on_grid(self):
        spec = QuantizerSpec(5)
        got = quantize_distribution(dist([0.37, 0.41, 0.22]), spec)
        for x in got.probs[:-1]:
            assert (x / spec.step) == pytest.approx(round(x / spec.step), abs=1e-12)

    def test_idempotent(self):
        spec = QuantizerSpec(3)
        once = quantize_distribution(dist([0.3, 0.45, 0.25]), spec)
        twice = quantize_distribution(once, spec)
        assert np.array_equal(once.probs, twice.probs)

    def test_head_error_bounded_by_half_step(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            p = Distribution(rng.dirichlet(np.ones(3)))
            for q in (2, 4, 7):
                try:
                    got = quantize_distribution(p, QuantizerSpec(q))
                except InvalidQuantizationError:
                    continue
                head_err = np.abs(p.probs[:-1] - got.probs[:-1])
                assert np.all(head_err <= 2.0 ** -(q + 1) + 1e-12)

    def test_half_steps_round_up(self):
        got = quantize_distribution(dist([0.125, 0.125, 0.75]), QuantizerSpec(2))
        assert got.probs.tolist() == [0.25, 0.25, 0.5]

    def test_bias_shifts_grid(self):
        got = quantize_distribution(dist([0.4, 0.35, 0.25]), QuantizerSpec(2, bias=0.05))
        assert got.probs[0] == pytest.approx(0.3)
        assert got.probs[1] == pytest.approx(0.3)
        assert got.probs[2] == pytest.approx(0.4)

    def test_invalid_closing_entry(self):
        with pytest.raises(InvalidQuantizationError):
            quantize_distribution(dist([0.3, 0.3, 0.3, 0.1]), QuantizerSpec(1))


class TestQuantizationRadius:
    def test_identical_lists(self):
        ps = [dist(v) for v in REFERENCE_VECTORS]
        per, eps = quantization_radius(ps, ps)
        assert per == [0.0] * 5
        assert eps == 0.0

    def test_two_bit_radii(self):
        # Hand-derived variational distances against the 0.25-grid vectors.
        ps = [dist(v) for v in REFERENCE_VECTORS]
        qs = [quantize_distribution(p, QuantizerSpec(2)) for p in ps]
        per, eps = quantization_radius(ps, qs)
        assert per == pytest.approx([0.15, 0.05, 0.2, 0.2, 0.15], abs=1e-12)
        assert eps == pytest.approx(0.2, abs=1e-12)

    def test_length_mismatch(self):
        ps = [dist(v) for v in REFERENCE_VECTORS]
        with pytest.raises(ValidationError):
            quantization_radius(ps, ps[:3])
