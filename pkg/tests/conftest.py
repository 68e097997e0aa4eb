"""Collects the acceptance verdicts and prints them at the end of the run."""

VERDICTS: dict[int, tuple[bool, str]] = {}


def record(number: int, ok: bool, detail: str) -> None:
    VERDICTS[number] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(VERDICTS):
        ok, detail = VERDICTS[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
