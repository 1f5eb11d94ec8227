import numpy as np
import pytest

from rpforest.forest import NeighborList
from rpforest.metrics import distance_error, missing_rate, time_run


def row(ids, distances=None):
    ids = np.asarray(ids, dtype=np.intp)
    if distances is None:
        distances = np.arange(1.0, ids.size + 1)
    return NeighborList(ids=ids, distances=np.asarray(distances, dtype=np.float64))


class TestMissingRate:
    def test_perfect_retrieval(self):
        truth = [row([1, 2, 3]), row([4, 5, 6])]
        m_bar, missed = missing_rate(truth, truth, 3)
        assert m_bar == 0.0
        np.testing.assert_array_equal(missed, [0, 0])

    def test_partial_miss(self):
        # truth {a..e}, found {a,b,x,y,z}: 3 of 5 missed
        truth = [row([0, 1, 2, 3, 4])]
        found = [row([0, 1, 10, 11, 12])]
        m_bar, missed = missing_rate(truth, found, 5)
        assert missed[0] == 3
        assert m_bar == pytest.approx(0.6)

    def test_all_empty_found_rows(self):
        truth = [row([0, 1]), row([2, 3])]
        empty = [row([]), row([])]
        m_bar, missed = missing_rate(truth, empty, 2)
        assert m_bar == 1.0
        np.testing.assert_array_equal(missed, [2, 2])

    def test_short_found_row_misses_more(self):
        truth = [row([0, 1, 2])]
        found = [row([0])]
        m_bar, missed = missing_rate(truth, found, 3)
        assert missed[0] == 2

    def test_row_count_mismatch(self):
        with pytest.raises(ValueError):
            missing_rate([row([0])], [row([0]), row([1])], 1)

    def test_truth_row_length_enforced(self):
        with pytest.raises(ValueError):
            missing_rate([row([0, 1])], [row([0, 1])], 3)

    def test_normalization(self):
        # sum m_i / (n * k) exactly
        truth = [row([0, 1]), row([2, 3]), row([4, 5])]
        found = [row([0, 1]), row([2, 9]), row([8, 9])]
        m_bar, missed = missing_rate(truth, found, 2)
        assert m_bar == pytest.approx((0 + 1 + 2) / 6)


class TestDistanceError:
    def test_identical_tables(self):
        truth = [row([1, 2], [0.5, 1.5])]
        d_bar, excluded = distance_error(truth, truth, 2)
        assert d_bar == 0.0 and excluded == 0

    def test_hand_case(self):
        # truth k-th distances {1.0, 2.0}, found {1.5, 2.0} -> mean 0.25
        truth = [row([0, 1], [0.2, 1.0]), row([2, 3], [0.3, 2.0])]
        found = [row([0, 5], [0.2, 1.5]), row([2, 3], [0.3, 2.0])]
        d_bar, excluded = distance_error(truth, found, 2)
        assert d_bar == pytest.approx(0.25)
        assert excluded == 0

    def test_short_row_uses_last_distance(self):
        truth = [row([0, 1, 2], [1.0, 2.0, 3.0])]
        found = [row([0], [1.2])]
        d_bar, _ = distance_error(truth, found, 3)
        assert d_bar == pytest.approx(1.2 - 3.0)

    def test_empty_rows_excluded_and_counted(self):
        truth = [row([0], [1.0]), row([1], [2.0])]
        found = [row([]), row([1], [2.5])]
        d_bar, excluded = distance_error(truth, found, 1)
        assert excluded == 1
        assert d_bar == pytest.approx(0.5)

    def test_all_rows_empty(self):
        truth = [row([0], [1.0])]
        found = [row([])]
        d_bar, excluded = distance_error(truth, found, 1)
        assert excluded == 1
        assert np.isnan(d_bar)

    def test_nonnegative_when_found_is_subset_ranking(self):
        # found k-th order statistic dominates the true one
        rng = np.random.default_rng(0)
        for _ in range(50):
            dists = np.sort(rng.uniform(size=10))
            truth = [row(np.arange(5), dists[:5])]
            pick = np.sort(rng.choice(10, size=5, replace=False))
            found = [row(pick, dists[pick])]
            d_bar, _ = distance_error(truth, found, 5)
            assert d_bar >= -1e-15


class TestTimeRun:
    def test_times_nonnegative_and_results_passed_through(self):
        (build_s, query_s), (br, qr) = time_run(lambda: "built", lambda: "queried")
        assert build_s >= 0 and query_s >= 0
        assert br == "built" and qr == "queried"

    def test_slower_action_measured_larger(self):
        import time

        def slow():
            time.sleep(0.05)

        (build_s, query_s), _ = time_run(slow, lambda: None)
        assert build_s > query_s
