"""Smoke test for the circular_seriation extension module.

Build and install first:  pip install --no-build-isolation ./crates/python
"""

import json
import random

import circular_seriation as cs


def main():
    # a hidden circular order is recovered up to rotation and reflection
    points = cs.sample_uniform(60, 7)
    d, order = cs.build_matrix(points, "arc")
    sorted_d = d.conjugate(order)
    assert sorted_d.is_circular_robinson(strict=True)

    rng = random.Random(0)
    p = list(range(60))
    rng.shuffle(p)
    hidden = sorted_d.conjugate(p)
    result = cs.seriate(hidden)
    truth = [0] * 60
    for i, x in enumerate(p):
        truth[x] = i
    assert cs.kendall_tau_dihedral(result.representative, truth) == 0.0
    solutions, overflow = result.solutions()
    assert not overflow and truth in solutions
    assert result.stats["n"] == 60

    # the tree document round-trips
    tree = result.tree
    again = cs.QTree.from_json(tree.to_json())
    assert again.leaves() == tree.leaves()
    json.loads(tree.to_json())

    # small instance agrees with exhaustive search
    small = cs.DissimilarityMatrix.from_text(
        cs.build_matrix(cs.sample_uniform(7, 3), "warped")[0].to_text()
    )
    exact = sorted(cs.brute_force_solutions(small))
    found, _ = cs.seriate(small).solutions()
    assert sorted(found) == exact

    # non-Robinsonian input raises the dedicated error
    bad = cs.DissimilarityMatrix(
        [
            [0, 1, 5, 1.5, 6],
            [1, 0, 1.1, 7, 2],
            [5, 1.1, 0, 3, 1.2],
            [1.5, 7, 3, 0, 4],
            [6, 2, 1.2, 4, 0],
        ]
    )
    try:
        cs.seriate(bad)
    except cs.NotRobinsonError:
        pass
    else:
        raise AssertionError("expected NotRobinsonError")

    assert cs.is_unimodal([1, 2, 3, 2, 1]) == (True, True, [2])
    assert cs.kendall_tau([0, 1, 2, 3, 4], [1, 0, 2, 3, 4]) == 0.1
    rows = cs.rate_experiment([20, 40], 5, "arc", 1)
    assert [r["n"] for r in rows] == [20, 40]
    print("smoke test passed")


if __name__ == "__main__":
    main()
