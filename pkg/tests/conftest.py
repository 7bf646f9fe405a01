"""Prints a one-line verdict per acceptance criterion after the run."""
import re

CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)(\w*)")


def pytest_terminal_summary(terminalreporter):
    verdicts = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" and outcome != "error":
                continue
            m = CRITERION.search(rep.nodeid)
            if not m:
                continue
            key = int(m.group(1))
            parts = verdicts.setdefault(key, [])
            parts.append((m.group(2).strip("_") or "all", outcome == "passed"))
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(verdicts):
        ok = all(p for _, p in verdicts[key])
        failing = ", ".join(name for name, p in verdicts[key] if not p)
        line = f"criterion {key}: {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(line + (f"  (failing: {failing})" if failing else ""))
