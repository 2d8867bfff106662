import math

import pytest

from wormszego import GridSpec, validate_params
from wormszego import verify

G = GridSpec(20.0, 1024, 16)


@pytest.mark.parametrize("suite", verify.SUITES)
def test_suite_passes(params, suite):
    recs = verify.run_suite(suite, verify.Context(params, G, 7))
    bad = [r for r in recs if r["status"] != "pass"]
    assert not bad, bad
    assert all(r["check_name"].startswith(suite) for r in recs)


def test_record_shape():
    r = verify._record("x", float("nan"), 1.0)
    assert r["status"] == "fail"
    assert verify._record("x", 0.5, 1.0)["status"] == "pass"
    assert not verify.all_passed([r])


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.run_suite("nope", verify.Context(validate_params(math.pi), G, 0))
