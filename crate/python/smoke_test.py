"""Smoke test for the `cgl` Python module.

Build and install first:  pip install --no-build-isolation ./crates/python
"""

import cgl


def close(a, b, tol=1e-12):
    return all(abs(x - y) <= tol for x, y in zip(a, b)) and len(a) == len(b)


def main():
    path = cgl.EnvironmentGraph.path(3)
    c = cgl.CoincidentMatrix.from_environment(path)
    x1 = cgl.cell_update([1.0, 0.0, 0.0], c)
    x2 = cgl.cell_update(x1, c)
    assert close(x1, [0.5, 0.5, 0.0]), x1
    assert close(x2, [0.375, 0.5, 0.125]), x2

    env = cgl.EnvironmentGraph.lattice(8, 8)
    wired = cgl.wired_matrix(env, rewards=[(64, 3.0)])
    trained = cgl.train(env, wired)
    x = [1.0 if i == 0 else 0.0 for i in range(trained.size)]
    assert close(cgl.recurse(x, trained, 6), cgl.oracle_walk(trained, x, 6), 1e-9)
    assert cgl.CoincidentMatrix.from_json(trained.to_json()) == trained

    run = cgl.navigate(env, trained, 1, 64, {"seed": 3})
    assert run["outcome"] == "success", run["outcome"]
    print(f"lattice 1 -> 64: {run['path_length']} moves")

    report = cgl.run_trials("lattice:6x6", 3.0, pairs=20, seed=1, workers=2)
    print(f"6x6 battery: {report['stats']['success_rate']}% success")

    fig = cgl.run_scenario("fig3a")
    values = fig["values"]
    assert close(values, values[::-1], 1e-9)
    assert "fig8" in cgl.scenario_names()

    try:
        cgl.navigate(env, trained, 1, 99)
    except cgl.CglError as e:
        print(f"out-of-range node rejected: {e}")
    else:
        raise AssertionError("expected CglError")

    print("smoke test ok")


if __name__ == "__main__":
    main()
