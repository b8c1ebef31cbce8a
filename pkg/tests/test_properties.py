import pytest

import properties


@pytest.mark.parametrize("check", properties.ALL, ids=lambda f: f.__name__)
def test_property(check):
    out = check()
    assert out.cases >= properties.CASES, out.line()
    assert not out.failures, out.line() + "\n" + "\n".join(out.failures[:10])
