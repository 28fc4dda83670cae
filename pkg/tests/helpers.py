"""Small shared helpers for the test suite."""


from acsm import SymbolMatrix

# (number, description, passed) rows filled in by the acceptance tests and
# printed by the conftest terminal-summary hook.
ACCEPTANCE_RESULTS = []


def record_criterion(number, description, ok):
    """Log an acceptance outcome; returns ok so callers can assert on it."""
    ACCEPTANCE_RESULTS.append((number, description, bool(ok)))
    return bool(ok)


def grid(rows, alphabet_size=None):
    return SymbolMatrix.from_grid(rows, alphabet_size)


def random_square(rng, n, alphabet_size):
    return SymbolMatrix(n, n, alphabet_size, rng.integers(0, alphabet_size, (n, n)))


def worked_pair():
    """The 2x2 pair differing only in the bottom-right cell."""
    a = grid([[1, 2], [3, 4]], 6)
    b = grid([[1, 2], [3, 5]], 6)
    return a, b


def run_cli(argv):
    """Invoke the command line in process, capturing streams and exit code."""
    import contextlib
    import io

    from acsm.cli import main

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(argv)
        except SystemExit as exc:  # argparse rejects unknown flags this way
            code = exc.code if isinstance(exc.code, int) else 2
    return code, out.getvalue(), err.getvalue()
