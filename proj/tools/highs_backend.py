#!/usr/bin/env python3
"""External MILP backend for chemosched built on HiGHS (highspy).

Usage: highs_backend.py MODEL.mps SOLUTION.out TIME_LIMIT_SECONDS

Exit codes: 0 solved or feasible at the limit, 2 infeasible, 1 anything else.
A warm start is read from MODEL.mps.start ("name value" lines) when present.
"""

import os
import sys

import highspy

LARGE_MODEL_COLUMNS = 60000


def read_start(path):
    values = {}
    with open(path) as handle:
        for line in handle:
            parts = line.split()
            if len(parts) == 2:
                values[parts[0]] = float(parts[1])
    return values


def main(argv):
    if len(argv) != 4:
        print(__doc__, file=sys.stderr)
        return 1
    model_path, solution_path, limit = argv[1], argv[2], float(argv[3])

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", limit)
    h.setOptionValue("threads", 1)
    h.setOptionValue("mip_rel_gap", 0.0)
    # Objectives are integral, so any gap below one closes the search.
    h.setOptionValue("mip_abs_gap", 0.999)
    if h.readModel(model_path) == highspy.HighsStatus.kError:
        print(f"cannot read {model_path}", file=sys.stderr)
        return 1

    names = list(h.getLp().col_names_)
    # On the big week-level models presolve probing can use the whole budget
    # without ever producing a dual bound.
    if len(names) > LARGE_MODEL_COLUMNS:
        h.setOptionValue("presolve", "off")
    start_path = model_path + ".start"
    if os.path.exists(start_path):
        start = read_start(start_path)
        solution = highspy.HighsSolution()
        solution.col_value = [start.get(name, 0.0) for name in names]
        solution.value_valid = True
        h.setSolution(solution)

    h.run()
    status = h.getModelStatus()
    info = h.getInfo()
    has_solution = info.primal_solution_status == 2  # kSolutionStatusFeasible

    if status == highspy.HighsModelStatus.kInfeasible:
        return 2
    if status == highspy.HighsModelStatus.kModelEmpty:
        # Nothing to decide: every column sits at its lower bound.
        lp = h.getLp()
        with open(solution_path, "w") as out:
            out.write("# status optimal\n")
            for name, lower in zip(names, lp.col_lower_):
                out.write(f"{name} {int(round(lower))}\n")
        return 0
    if status == highspy.HighsModelStatus.kOptimal:
        label = "optimal"
    elif status in (highspy.HighsModelStatus.kTimeLimit,
                    highspy.HighsModelStatus.kInterrupt,
                    highspy.HighsModelStatus.kSolutionLimit):
        label = "time_limit" if has_solution else "no_solution"
    else:
        print(f"unexpected HiGHS status: {h.modelStatusToString(status)}", file=sys.stderr)
        return 1

    with open(solution_path, "w") as out:
        out.write(f"# status {label}\n")
        if has_solution:
            out.write(f"# objective {info.objective_function_value}\n")
        out.write(f"# bound {info.mip_dual_bound}\n")
        if has_solution:
            values = h.getSolution().col_value
            for name, value in zip(names, values):
                out.write(f"{name} {int(round(value))}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
