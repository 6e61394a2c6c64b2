import pytest

ACCEPTANCE_KEY = pytest.StashKey[list]()

from qcr.catalog import load_catalog


@pytest.fixture(scope="session")
def cat():
    return load_catalog()


@pytest.fixture(scope="session")
def pa(cat):
    return cat.algebra("PA")


@pytest.fixture(scope="session")
def rcc8(cat):
    return cat.algebra("RCC8")


@pytest.fixture(scope="session")
def stc(cat):
    return cat.multialgebra("STC")


@pytest.fixture(scope="session")
def certificates(cat):
    """Certificates of the four STC subclasses, built once."""
    from qcr import analysis as an

    base = an.certify_slicing(cat.subclass("RCC8s_x_PAs"), cat.weakening("stc-weak-pa2rcc"), cat)
    out = {"RCC8s_x_PAs": base}
    for name in ("H8_x_PA", "Q8_x_PA", "C8_x_PA"):
        S = cat.subclass(name)
        out[name] = an.certify_refinement(S, base, cat.multi_refinement(S), catalog=cat)
    return out


@pytest.fixture
def acceptance(request):
    """Record one line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
