import pytest

from gaussdioph.gsieve import build_prime_table


@pytest.fixture(scope="session")
def table_1e4():
    return build_prime_table(10_000)


@pytest.fixture(scope="session")
def table_1e6():
    return build_prime_table(1_000_000)



def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            lines += [v for k, v in rep.user_properties if k == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
