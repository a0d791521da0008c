from linearcheck.meta import GenParams, generate_history

# A spread of generator settings; seed k uses MIXES[k % len(MIXES)].
MIXES = [
    GenParams(processes=2, objects=1, operations=5),
    GenParams(processes=3, objects=1, operations=6),
    GenParams(processes=2, objects=2, operations=6),
    GenParams(processes=3, objects=2, operations=8),
    GenParams(processes=2, objects=1, operations=6, max_corruptions=0),
    GenParams(processes=3, objects=2, operations=7, max_corruptions=2, max_truncations=3),
]


def generated(seed):
    return generate_history(seed, MIXES[seed % len(MIXES)])


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
