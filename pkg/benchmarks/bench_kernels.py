"""Compare the numba kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--paths 20] [--repeat 3]

Each backend is timed in its own interpreter, because the backend is fixed
at import time by ``RDM2SCM_DISABLE_NUMBA``. The first (compiling) call is
excluded from the numba timings.
"""
import argparse
import json
import os
import subprocess
import sys
import time

CHILD = "--child"


def measure(n_paths, repeat):
    import rdm2scm
    from rdm2scm import InitialCondition, RandomVariableSpec, StepControl, run_ensemble
    from rdm2scm.presets import enzyme_rdm, oscillator_rdm

    cases = {
        "enzyme rk45 t=60": (
            enzyme_rdm(),
            InitialCondition(0.0, RandomVariableSpec.uniform_box([0] * 4, [2] * 4)),
            StepControl(t_end=60.0),
        ),
        "oscillator rk45 t=200": (
            oscillator_rdm(length_std=0.1),
            InitialCondition(0.0, RandomVariableSpec.uniform_box([-0.5] * 10, [0.5] * 5 + [5.5] * 5)),
            StepControl(t_end=200.0),
        ),
        "enzyme rk4 h=0.01 t=60": (
            enzyme_rdm(),
            InitialCondition(0.0, RandomVariableSpec.uniform_box([0] * 4, [2] * 4)),
            StepControl(t_end=60.0, method="rk4", h=0.01),
        ),
    }
    out = {"backend": rdm2scm.backend_name(), "cases": {}}
    for name, (rdm, init, ctrl) in cases.items():
        run_ensemble(rdm, init, ctrl, 1, 0)  # warm-up / compile
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            run_ensemble(rdm, init, ctrl, n_paths, 0)
            best = min(best, time.perf_counter() - t0)
        out["cases"][name] = best / n_paths
    return out


def run_child(disable, n_paths, repeat):
    env = dict(os.environ, RDM2SCM_DISABLE_NUMBA="1" if disable else "0")
    res = subprocess.run(
        [sys.executable, __file__, CHILD, str(n_paths), str(repeat)], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(res.stdout)


def main():
    if len(sys.argv) > 1 and sys.argv[1] == CHILD:
        print(json.dumps(measure(int(sys.argv[2]), int(sys.argv[3]))))
        return
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jit = run_child(False, args.paths, args.repeat)
    py = run_child(True, args.paths, args.repeat)
    print(f"{'case':<26}{jit['backend'] + ' ms/path':>16}{py['backend'] + ' ms/path':>16}{'speedup':>10}")
    for name, t_jit in jit["cases"].items():
        t_py = py["cases"][name]
        print(f"{name:<26}{1e3 * t_jit:>16.2f}{1e3 * t_py:>16.2f}{t_py / t_jit:>9.1f}x")


if __name__ == "__main__":
    main()
