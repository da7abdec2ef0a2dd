"""Solve exported LP models with HiGHS and certify the results with trsp.

Usage: highs_check.py <trsp executable> <work dir>
"""
import re
import subprocess
import sys
from pathlib import Path

import highspy

CASES = [(n, k, seed) for n, k in ((1, 2), (2, 1), (2, 2)) for seed in (1, 2, 3)]
MODELS = ("sequence", "time-indexed")


def run(trsp, *args):
    return subprocess.run([trsp, *args], check=True, capture_output=True, text=True).stdout


def solve_lp(path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", 120.0)
    if h.readModel(str(path)) != highspy.HighsStatus.kOk:
        raise RuntimeError(f"HiGHS could not read {path}")
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        raise RuntimeError(f"HiGHS status {h.modelStatusToString(h.getModelStatus())} on {path}")
    names = h.getLp().col_names_
    values = h.getSolution().col_value
    return h.getInfo().objective_function_value, dict(zip(names, values))


def main():
    trsp, work = sys.argv[1], Path(sys.argv[2])
    work.mkdir(parents=True, exist_ok=True)
    failures = 0
    for n, k, seed in CASES:
        stem = f"n{n}k{k}s{seed}"
        inst = work / f"{stem}.trsp"
        run(trsp, "gen", "--n", str(n), "--k", str(k), "--seed", str(seed), "--out", str(inst))
        exact = run(trsp, "exact", "--instance", str(inst), "--out", str(work / f"{stem}.schedule"))
        optimum = int(re.search(r"objective (\d+) \(optimal\)", exact).group(1))
        for model in MODELS:
            lp = work / f"{stem}.{model}.lp"
            sol = work / f"{stem}.{model}.sol"
            run(trsp, "mip", "--instance", str(inst), "--model", model, "--out", str(lp))
            value, columns = solve_lp(lp)
            sol.write_text("".join(f"{name} {round(v) if abs(v - round(v)) < 1e-6 else v!r}\n"
                                   for name, v in columns.items()))
            report = run(trsp, "check", "--model-file", str(lp), "--solution", str(sol),
                         "--instance", str(inst))
            decoded = re.search(r"decoded schedule feasible, objective (\d+)", report)
            ok = decoded is not None and int(decoded.group(1)) == optimum and abs(value - optimum) < 1e-6
            failures += not ok
            print(f"{'ok  ' if ok else 'FAIL'} {stem} {model}: HiGHS {value:g}, optimum {optimum}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
