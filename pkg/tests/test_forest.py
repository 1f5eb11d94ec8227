import numpy as np
import pytest

from rpforest.core import Dataset
from rpforest.forest import (
    build_forest,
    candidate_ids,
    query_all_training,
    query_batch,
    query_knn,
)
from rpforest.oracle import all_true_neighbors, exact_knn
from rpforest.tree import TreeConfig


def random_dataset(seed, n=300, d=2):
    return Dataset.from_points(np.random.default_rng(seed).normal(size=(n, d)))


class TestBuildForest:
    def test_single_tree_forest(self):
        ds = random_dataset(0)
        forest = build_forest(ds, TreeConfig(), 1, master_seed=1)
        assert len(forest.trees) == 1

    def test_invalid_tree_count(self):
        with pytest.raises(ValueError):
            build_forest(random_dataset(1), TreeConfig(), 0, master_seed=2)

    def test_same_seed_same_answers(self):
        ds = random_dataset(2)
        f1 = build_forest(ds, TreeConfig(), 5, master_seed=3)
        f2 = build_forest(ds, TreeConfig(), 5, master_seed=3)
        queries = np.random.default_rng(4).normal(size=(100, 2))
        for q in queries:
            a = query_knn(f1, q, 5)
            b = query_knn(f2, q, 5)
            np.testing.assert_array_equal(a.ids, b.ids)
            np.testing.assert_array_equal(a.distances, b.distances)

    def test_tree_prefix_stable_in_forest_size(self):
        # tree t is identical whether the forest has 3 or 8 trees
        ds = random_dataset(3)

        def digests(forest):
            return [tuple(tuple(leaf.member_ids) for leaf in t.leaves) for t in forest.trees]

        small = digests(build_forest(ds, TreeConfig(), 3, master_seed=5))
        large = digests(build_forest(ds, TreeConfig(), 8, master_seed=5))
        assert large[:3] == small


class TestQueryKnn:
    def test_single_leaf_equals_brute_force(self):
        ds = random_dataset(4, n=50)
        forest = build_forest(ds, TreeConfig(leaf_capacity=100), 1, master_seed=6)
        for i in range(ds.n):
            found = query_knn(forest, ds.points[i], 5, self_id=i)
            truth = exact_knn(ds, ds.points[i], 5, self_id=i)
            np.testing.assert_array_equal(found.ids, truth.ids)
            np.testing.assert_array_equal(found.distances, truth.distances)

    def test_tie_broken_by_ascending_id(self):
        # ids 4 and 9 equidistant from the query: id 4 must rank first
        pts = np.zeros((10, 2))
        pts[:, 0] = 100.0 + 10.0 * np.arange(10)
        pts[4] = [1.0, 1.0]
        pts[9] = [1.0, -1.0]
        ds = Dataset.from_points(pts)
        forest = build_forest(ds, TreeConfig(leaf_capacity=100), 1, master_seed=7)
        found = query_knn(forest, np.array([1.0, 0.0]), 2)
        assert found.ids[0] == 4 and found.ids[1] == 9
        assert found.distances[0] == found.distances[1] == 1.0

    def test_self_exclusion(self):
        ds = random_dataset(5)
        forest = build_forest(ds, TreeConfig(), 5, master_seed=8)
        for i in range(0, ds.n, 29):
            found = query_knn(forest, ds.points[i], 5, self_id=i)
            assert i not in found.ids

    def test_output_sorted_and_capped(self):
        ds = random_dataset(6)
        forest = build_forest(ds, TreeConfig(), 3, master_seed=9)
        q = np.array([0.3, -0.2])
        found = query_knn(forest, q, 7)
        assert len(found) <= 7
        assert np.all(np.diff(found.distances) >= 0)
        assert len(set(found.ids.tolist())) == len(found)

    def test_short_list_when_pool_small(self):
        ds = random_dataset(7, n=4)
        forest = build_forest(ds, TreeConfig(), 1, master_seed=10)
        found = query_knn(forest, ds.points[0], 10, self_id=0)
        assert len(found) == 3

    def test_invalid_k(self):
        ds = random_dataset(8)
        forest = build_forest(ds, TreeConfig(), 1, master_seed=11)
        with pytest.raises(ValueError):
            query_knn(forest, ds.points[0], 0)

    def test_distances_are_recomputed_euclidean(self):
        ds = random_dataset(9)
        forest = build_forest(ds, TreeConfig(), 4, master_seed=12)
        q = ds.points[17]
        found = query_knn(forest, q, 5, self_id=17)
        expected = np.sqrt(np.sum((ds.points[found.ids] - q) ** 2, axis=1))
        np.testing.assert_allclose(found.distances, expected, atol=1e-12)


class TestMonotoneCandidates:
    def test_candidate_pool_grows_with_trees(self):
        ds = random_dataset(10)
        forest = build_forest(ds, TreeConfig(), 12, master_seed=13)
        q = np.array([0.1, 0.4])
        previous = set()
        for t in range(1, 13):
            sub = build_forest(ds, TreeConfig(), t, master_seed=13)
            current = set(candidate_ids(sub, q).tolist())
            assert previous <= current
            previous = current
        assert previous == set(candidate_ids(forest, q).tolist())


class TestQueryAllTraining:
    def test_matches_per_point_query(self):
        ds = random_dataset(11)
        forest = build_forest(ds, TreeConfig(), 6, master_seed=14)
        batched = query_all_training(forest, 5)
        for i in range(0, ds.n, 17):
            single = query_knn(forest, ds.points[i], 5, self_id=i)
            np.testing.assert_array_equal(batched[i].ids, single.ids)
            np.testing.assert_array_equal(batched[i].distances, single.distances)

    def test_recall_improves_with_more_trees(self):
        # averaged over seeds, T=40 recalls at least as much as T=1
        ds = random_dataset(12, n=300)
        truth = all_true_neighbors(ds, 5)
        true_sets = [set(row.ids.tolist()) for row in truth]

        def mean_recall(T, seeds):
            recalls = []
            for seed in seeds:
                forest = build_forest(ds, TreeConfig(), T, master_seed=seed)
                found = query_all_training(forest, 5)
                hit = sum(len(true_sets[i] & set(found[i].ids.tolist())) for i in range(ds.n))
                recalls.append(hit / (ds.n * 5))
            return np.mean(recalls)

        seeds = range(50)
        assert mean_recall(40, seeds) >= mean_recall(1, seeds)


class TestQueryBatch:
    def test_matches_query_knn(self):
        ds = random_dataset(13)
        forest = build_forest(ds, TreeConfig(), 5, master_seed=15)
        queries = np.random.default_rng(16).normal(size=(30, 2))
        batched = query_batch(forest, queries, 4)
        for q, row in zip(queries, batched):
            single = query_knn(forest, q, 4)
            np.testing.assert_array_equal(row.ids, single.ids)
