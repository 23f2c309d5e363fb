"""PASS/FAIL lines collected by the acceptance suite, printed at session end."""

LINES: dict = {}


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} ({title}): {detail}"
    LINES[number] = line
    print(line)
