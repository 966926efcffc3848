import re

ACCEPTANCE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = ACCEPTANCE.search(getattr(rep, "nodeid", ""))
            if m and rep.when in ("call", "setup"):
                label = "PASS" if outcome == "passed" else "FAIL"
                if rows.get(int(m.group(1)), ("", "PASS"))[1] == "PASS":
                    rows[int(m.group(1))] = (m.group(2).replace("_", " "), label)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(rows):
        name, label = rows[n]
        terminalreporter.write_line(f"criterion {n:2d}  {label}  {name}")
