"""Smoke test for the pyrescomp extension module.

Build and install first:  pip install --no-build-isolation ./crates/python
Then run:                 python python/smoke_test.py
"""

import math

import pyrescomp as rc


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * (1.0 + abs(b))


def main():
    signals, labels = rc.synth_dataset(3, 40, 32, separation=1.0, noise=0.05, seed=3)
    assert len(signals) == 120 and sorted(set(labels)) == [0, 1, 2]
    train = [j for j in range(len(signals)) if j % 40 < 20]
    test = [j for j in range(len(signals)) if j % 40 >= 20]

    esn = rc.Esn(30, 0.5, seed=7)
    assert esn.node_count == 30
    assert close(esn.spectral_radius, 0.9999 * 0.5, 1e-6)
    traj = esn.drive(signals[0])
    assert len(traj) == 32 and len(traj[0]) == 30
    assert traj == esn.drive_sampled(signals[0])
    assert esn.drive_sampled(signals[0], [3, 10]) == [traj[3], traj[10]]

    states = [esn.drive(u) for u in signals]
    train_labels = [labels[j] for j in train]

    linear = rc.LinearReadout.train([states[j] for j in train], train_labels, 3, regularization=1e-4)
    restored = rc.LinearReadout.from_bytes(linear.to_bytes())
    lin_hits = 0
    for j in test:
        cls, scores = linear.classify(states[j])
        assert (cls, scores) == restored.classify(states[j])
        lin_hits += cls == labels[j]

    b = [rc.norm_vector(s) for s in states]
    assert close(b[0][5], sum(x * x for x in traj[5]))
    pca = rc.PcaReadout.train([b[j] for j in train], train_labels, 3, rank=5)
    pca_hits = sum(pca.classify(b[j])[0] == labels[j] for j in test)
    lin_acc, pca_acc = lin_hits / len(test), pca_hits / len(test)
    print(f"linear accuracy {lin_acc:.3f}, pca accuracy {pca_acc:.3f}")
    assert pca_acc >= 0.9 and lin_acc >= 0.9

    sep = rc.separation_ratio([states[j] for j in train], train_labels, 3, variant="norm")
    assert len(sep) == 32 and all(v >= 0 for v in sep)

    ratios = esn.bound_ratio(signals[0], signals[1])
    assert max(ratios) <= 1.0

    tdr = rc.Tdr(10, 0.5)
    assert close(tdr.beta, 0.9999 * 0.5)
    mask = rc.random_mask(9, seed=1)
    assert set(mask) <= {-1.0, 1.0}
    u, v = rc.apply_mask(signals[0], mask), rc.apply_mask(signals[1], mask)
    assert len(u) == 32 * 9
    assert max(tdr.bound_ratio(u, v)) <= 1.0
    sampled = tdr.drive_sampled(u, list(range(0, len(u), 9)))
    assert len(sampled) == 32 and all(len(r) == 10 for r in sampled)

    rows = rc.run_experiment(
        'kind = "esn"\nnode_counts = [10]\ninput_gains = [0.5]\nlambdas = [1e-4]\n'
        "trials = 1\ntrain_per_class = 20\nsynth_per_class = 40\nsynth_length = 32\n"
    )
    assert [r["readout"] for r in rows] == ["linear", "pca"]
    assert all(0.0 <= r["accuracy"] <= 1.0 and math.isfinite(r["test_time_s"]) for r in rows)

    try:
        rc.Esn(10, 0.5, activation="relu")
    except ValueError:
        pass
    else:
        raise AssertionError("bad activation accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
