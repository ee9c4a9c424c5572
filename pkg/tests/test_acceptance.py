"""Acceptance battery: one test per criterion, full scale.

Each test prints its criterion's pass/fail line (run with -s to watch) and
asserts the criterion passed.  The same battery backs ``jumpmg suite``.
"""

from jumpmg import suite

THREADS = 2


def _run(fn):
    res = fn(quick=False, threads=THREADS)
    print(res.line())
    assert res.passed, res.details
    return res


def test_c01_exact_identity_suite():
    _run(suite.c01_identity_suite)


def test_c02_compensator_defining_property():
    _run(suite.c02_defining_property)


def test_c03_cox_survival():
    _run(suite.c03_survival)


def test_c04_limit_event_agreement():
    _run(suite.c04_limit_event_agreement)


def test_c05_transform_event_agreement():
    _run(suite.c05_transform_event_agreement)


def test_c06_counterexample_patterns():
    _run(suite.c06_counterexample_patterns)


def test_c07_rare_spike_battery():
    _run(suite.c07_rare_spike_battery)


def test_c08_closed_form_crosschecks():
    _run(suite.c08_closed_forms)


def test_c09_localizer():
    _run(suite.c09_localizer)


def test_c10_determinism():
    _run(suite.c10_determinism)


def test_c11_lil_directional_replacement():
    _run(suite.c11_lil_directional)
